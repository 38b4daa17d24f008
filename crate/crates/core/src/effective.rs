//! Trajectory-ensemble evolution of the two-electron density matrix under the
//! external-field approximation.
//!
//! Every P atom `(w, ket, bra)` replaces `â → ket·e^{−iωt}` and
//! `â† → conj(bra)·e^{iωt}` in the electron Hamiltonian. For interference
//! atoms (`ket ≠ bra`) the resulting field is complex and the Hamiltonian is
//! non-Hermitian. Two trajectory equations are supported:
//!
//! * [`DynamicsMode::SudarshanGlauber`]: `iρ̇ = Hρ − ρH` with the single
//!   complex-field `H`. Trace is conserved; `ρ` itself becomes non-Hermitian.
//! * [`DynamicsMode::GeneralizedP`]: `iρ̇ = H_L ρ − ρ H_R` with two Hermitian
//!   Hamiltonians driven by the real fields of `ket` and `bra` separately.
//!   Interference trajectories of this form do not conserve trace.
//!
//! The ensemble average `Σ w·ρ` is Hermitian whenever the atom list is
//! conjugate-closed.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::basis;
use crate::error::{Error, Result};
use crate::full::{bare_electron_hamiltonian, DickeConfig, TwoBodyMatrix};
use crate::linalg::{rk4_step, ComplexMatrix, HERMITIAN_TOL};
use crate::photon::{PAtom, PDistribution};

/// Allowed trace deviation of a trace-conserving trajectory.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DynamicsMode {
    SudarshanGlauber,
    GeneralizedP,
}

/// Positive- and negative-frequency parts of the substituted field:
/// `e⁺ = iγω·ket·e^{−iωt}`, `e⁻ = −iγω·conj(bra)·e^{iωt}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldComponents {
    pub positive: C64,
    pub negative: C64,
}

impl FieldComponents {
    pub fn new(ket: C64, bra: C64, t: f64, cfg: &DickeConfig) -> Self {
        let i_gw = C64::new(0.0, cfg.gamma * cfg.omega);
        let phase = C64::from_polar(1.0, -cfg.omega * t);
        Self { positive: i_gw * ket * phase, negative: -i_gw * bra.conj() * phase.conj() }
    }

    /// A purely classical field of the given value (no rotating split).
    pub fn from_total(field: C64) -> Self {
        Self { positive: field, negative: C64::new(0.0, 0.0) }
    }

    pub fn total(&self) -> C64 {
        self.positive + self.negative
    }
}

/// The two real fields seen by the ket and bra sides in generalized-P mode,
/// plus the complex field used by the Sudarshan–Glauber mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample {
    pub e_ket: C64,
    pub e_bra: C64,
    pub time: f64,
}

impl FieldSample {
    pub fn new(atom: &PAtom, t: f64, cfg: &DickeConfig) -> Self {
        Self {
            e_ket: FieldComponents::new(atom.ket, atom.ket, t, cfg).total(),
            e_bra: FieldComponents::new(atom.bra, atom.bra, t, cfg).total(),
            time: t,
        }
    }
}

/// `E(t) = iγω[ket·e^{−iωt} − conj(bra)·e^{iωt}]`.
pub fn complex_field(atom: &PAtom, t: f64, cfg: &DickeConfig) -> C64 {
    FieldComponents::new(atom.ket, atom.bra, t, cfg).total()
}

/// `Σⱼ Δ Ŝᶻⱼ − E μ Ŝˣⱼ`, or in RWA mode
/// `Σⱼ Δ Ŝᶻⱼ − (μ/2)(e⁺ Ŝ⁺ⱼ + e⁻ Ŝ⁻ⱼ)`.
pub fn trajectory_hamiltonian(field: &FieldComponents, cfg: &DickeConfig) -> ComplexMatrix {
    let mut h = bare_electron_hamiltonian(cfg);
    if cfg.rwa {
        let half_mu = C64::new(0.5 * cfg.mu, 0.0);
        h.add_scaled(-half_mu * field.positive, &basis::collective(&basis::s_plus()));
        h.add_scaled(-half_mu * field.negative, &basis::collective(&basis::s_minus()));
    } else {
        h.add_scaled(-field.total() * cfg.mu, &basis::collective(&basis::sx()));
    }
    h
}

/// Hamiltonian for one atom at time `t`; `(ket, bra)` selects the field.
fn atom_hamiltonian(ket: C64, bra: C64, t: f64, cfg: &DickeConfig) -> ComplexMatrix {
    trajectory_hamiltonian(&FieldComponents::new(ket, bra, t, cfg), cfg)
}

/// `|↓↓⟩⟨↓↓|`.
pub fn ground_projector() -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(4, 4);
    rho[(basis::DOWN_DOWN, basis::DOWN_DOWN)] = C64::new(1.0, 0.0);
    rho
}

/// RK4 integration of `iρ̇ = L(t)ρ − ρR(t)` on the shared time grid. Returns
/// `ρ` at every step including `t = 0`.
pub fn propagate_two_sided<L, R>(rho0: &ComplexMatrix, cfg: &DickeConfig, left: L, right: R) -> Vec<ComplexMatrix>
where
    L: Fn(f64) -> ComplexMatrix,
    R: Fn(f64) -> ComplexMatrix,
{
    let minus_i = C64::new(0.0, -1.0);
    let mut out = Vec::with_capacity(cfg.steps() + 1);
    let mut rho = rho0.clone();
    out.push(rho.clone());
    for k in 0..cfg.steps() {
        rho = rk4_step(
            |t, r: &ComplexMatrix| {
                let mut d = left(t).matmul(r);
                d.add_scaled(C64::new(-1.0, 0.0), &r.matmul(&right(t)));
                d.scale(minus_i)
            },
            &rho,
            cfg.time(k),
            cfg.dt,
        );
        out.push(rho.clone());
    }
    out
}

/// One trajectory state: `ρ_{atom}(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryState {
    pub rho: TwoBodyMatrix,
    pub atom: PAtom,
    pub time: f64,
}

/// Evolves `|↓↓⟩⟨↓↓|` under the atom's field in the chosen mode.
///
/// Sudarshan–Glauber trajectories are checked against trace drift beyond
/// [`TRACE_DRIFT_LIMIT`]. Generalized-P interference trajectories carry the
/// overlap `⟨ψ_bra(t)|ψ_ket(t)⟩` as their trace and are not checked.
pub fn evolve_trajectory(atom: &PAtom, cfg: &DickeConfig, mode: DynamicsMode) -> Result<Vec<TrajectoryState>> {
    cfg.validate()?;
    let rho0 = ground_projector();
    let (ket, bra) = (atom.ket, atom.bra);
    let series = match mode {
        DynamicsMode::SudarshanGlauber => {
            let h = |t| atom_hamiltonian(ket, bra, t, cfg);
            propagate_two_sided(&rho0, cfg, h, h)
        }
        DynamicsMode::GeneralizedP => propagate_two_sided(
            &rho0,
            cfg,
            |t| atom_hamiltonian(ket, ket, t, cfg),
            |t| atom_hamiltonian(bra, bra, t, cfg),
        ),
    };
    let mut out = Vec::with_capacity(series.len());
    for (k, rho) in series.into_iter().enumerate() {
        let time = cfg.time(k);
        if mode == DynamicsMode::SudarshanGlauber || atom.is_classical() {
            let deviation = (rho.trace() - C64::new(1.0, 0.0)).norm();
            if deviation > TRACE_DRIFT_LIMIT {
                return Err(Error::TraceDrift { time, deviation });
            }
        }
        out.push(TrajectoryState { rho: TwoBodyMatrix::new(rho, time), atom: *atom, time });
    }
    Ok(out)
}

/// The open-system form `iρ̇ = Hρ − ρH†` for the same atom, kept as the
/// contrasting dynamics: it does not conserve trace once `H` is non-Hermitian.
pub fn evolve_dissipative(atom: &PAtom, cfg: &DickeConfig) -> Vec<ComplexMatrix> {
    let (ket, bra) = (atom.ket, atom.bra);
    propagate_two_sided(
        &ground_projector(),
        cfg,
        |t| atom_hamiltonian(ket, bra, t, cfg),
        |t| atom_hamiltonian(ket, bra, t, cfg).adjoint(),
    )
}

/// `Σ w·ρ` over trajectories sampled at the same time.
pub fn assemble_density(trajectories: &[TrajectoryState]) -> Result<TwoBodyMatrix> {
    let first = trajectories.first().ok_or_else(|| Error::InvalidConfig("no trajectories to assemble".into()))?;
    if trajectories.iter().any(|s| s.time != first.time) {
        return Err(Error::MisalignedTrajectories);
    }
    let sum = weighted_sum(trajectories.iter());
    let defect = sum.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NonHermitianEnsemble { defect });
    }
    Ok(TwoBodyMatrix::new(sum, first.time))
}

fn weighted_sum<'a>(states: impl Iterator<Item = &'a TrajectoryState>) -> ComplexMatrix {
    let mut sum = ComplexMatrix::zeros(4, 4);
    for s in states {
        sum.add_scaled(s.atom.weight, &s.rho.matrix);
    }
    sum
}

/// All trajectories of a P distribution on a shared time grid.
#[derive(Clone, Debug)]
pub struct EnsembleRun {
    pub mode: DynamicsMode,
    /// `trajectories[atom][step]`, atoms in distribution order.
    pub trajectories: Vec<Vec<TrajectoryState>>,
}

impl EnsembleRun {
    pub fn steps(&self) -> usize {
        self.trajectories.first().map_or(0, |t| t.len())
    }

    pub fn time(&self, k: usize) -> f64 {
        self.trajectories[0][k].time
    }

    fn at(&self, k: usize) -> Vec<TrajectoryState> {
        self.trajectories.iter().map(|t| t[k].clone()).collect()
    }

    /// Ensemble density matrix at step `k`.
    pub fn assembled(&self, k: usize) -> Result<TwoBodyMatrix> {
        assemble_density(&self.at(k))
    }

    /// Contribution of the classical (`ket = bra`) atoms at step `k`.
    pub fn classical_part(&self, k: usize) -> TwoBodyMatrix {
        let sum = weighted_sum(self.trajectories.iter().map(|t| &t[k]).filter(|s| s.atom.is_classical()));
        TwoBodyMatrix::new(sum, self.time(k))
    }

    /// Contribution of the interference (`ket ≠ bra`) atoms at step `k`.
    pub fn interference_part(&self, k: usize) -> TwoBodyMatrix {
        let sum = weighted_sum(self.trajectories.iter().map(|t| &t[k]).filter(|s| !s.atom.is_classical()));
        TwoBodyMatrix::new(sum, self.time(k))
    }
}

/// Evolves every atom of `dist` (in parallel) and keeps them in atom order.
pub fn evolve_ensemble(dist: &PDistribution, cfg: &DickeConfig, mode: DynamicsMode) -> Result<EnsembleRun> {
    dist.validate()?;
    let trajectories =
        dist.atoms().par_iter().map(|atom| evolve_trajectory(atom, cfg, mode)).collect::<Result<Vec<_>>>()?;
    Ok(EnsembleRun { mode, trajectories })
}
