//! Exact reference dynamics of two qubits coupled to one photon mode.
//!
//! `Ĥ = Σⱼ (Δ Ŝᶻⱼ − Ê μ Ŝˣⱼ) + ω â†â`, `Ê = iγω(â − â†)`, evolved as a pure
//! state in the qubit ⊗ qubit ⊗ photon space. The Hamiltonian is applied in
//! sparse form; [`build_full_hamiltonian`] materializes the dense matrix for
//! checks only.

use num_complex::Complex64 as C64;

use crate::basis::{self, FullBasis, Spin, DOWN_DOWN};
use crate::error::{Error, Result};
use crate::linalg::{rk4_step, ComplexMatrix, ComplexVector, HERMITIAN_TOL};
use crate::photon::FockVector;

/// Norm deviation beyond which a run is rejected as unstable.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Physical and numerical parameters of the two-qubit Dicke model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DickeConfig {
    /// Qubit splitting Δ (energy unit).
    pub delta: f64,
    /// Dipole moment μ.
    pub mu: f64,
    /// Photon frequency ω.
    pub omega: f64,
    /// Light–matter coupling γ.
    pub gamma: f64,
    /// Largest photon number kept.
    pub cutoff: usize,
    pub dt: f64,
    pub t_max: f64,
    /// Keep only the co-rotating `âŜ⁺`, `â†Ŝ⁻` couplings.
    pub rwa: bool,
}

impl Default for DickeConfig {
    fn default() -> Self {
        Self { delta: 1.0, mu: 1.0, omega: 1.0, gamma: 1e-3, cutoff: 100, dt: 0.01, t_max: 100.0, rwa: false }
    }
}

impl DickeConfig {
    /// Every violated constraint, one message each.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.delta.is_finite() && self.delta > 0.0) {
            out.push(format!("delta must be > 0, got {}", self.delta));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            out.push(format!("omega must be > 0, got {}", self.omega));
        }
        if !self.mu.is_finite() {
            out.push(format!("mu must be finite, got {}", self.mu));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            out.push(format!("gamma must be >= 0, got {}", self.gamma));
        }
        if self.cutoff < 1 {
            out.push("cutoff must be >= 1".to_string());
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            out.push(format!("dt must be > 0, got {}", self.dt));
        }
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            out.push(format!("t_max must be >= 0, got {}", self.t_max));
        } else if self.dt > 0.0 {
            let ratio = self.t_max / self.dt;
            if (ratio - ratio.round()).abs() > 1e-6 {
                out.push(format!("t_max ({}) must be an integer multiple of dt ({})", self.t_max, self.dt));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(v.join("; ")))
        }
    }

    /// Number of integration steps from 0 to `t_max`.
    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    /// Sample time of step `k`; shared by every simulation so grids line up.
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn basis(&self) -> FullBasis {
        FullBasis::new(self.cutoff)
    }

    /// Free-field trajectory `α₀ e^{−iωt}`.
    pub fn free_field(&self, alpha0: C64, t: f64) -> C64 {
        alpha0 * C64::from_polar(1.0, -self.omega * t)
    }
}

/// Total pure state of qubits ⊗ photon at a sample time.
#[derive(Clone, Debug, PartialEq)]
pub struct FullState {
    pub vector: ComplexVector,
    pub time: f64,
    pub basis: FullBasis,
}

/// Reduced two-qubit density matrix (or a non-Hermitian component of one) in
/// the basis `(↑↑, ↑↓, ↓↑, ↓↓)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoBodyMatrix {
    pub matrix: ComplexMatrix,
    pub time: f64,
    pub hermitian: bool,
}

impl TwoBodyMatrix {
    pub fn new(matrix: ComplexMatrix, time: f64) -> Self {
        assert_eq!((matrix.rows(), matrix.cols()), (4, 4), "two-body matrices are 4x4");
        let hermitian = matrix.is_hermitian(HERMITIAN_TOL);
        Self { matrix, time, hermitian }
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Divides by the trace.
    pub fn normalized(&self) -> Self {
        let tr = self.trace();
        Self::new(self.matrix.scale(tr.inv()), self.time)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.matrix.adjoint(), self.time)
    }
}

/// `Σⱼ Δ Ŝᶻⱼ` on the two qubits.
pub fn bare_electron_hamiltonian(cfg: &DickeConfig) -> ComplexMatrix {
    basis::collective(&basis::sz()).scale_real(cfg.delta)
}

/// The Hamiltonian in compressed-row form.
#[derive(Clone, Debug)]
pub struct SparseHamiltonian {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<C64>,
}

impl SparseHamiltonian {
    pub fn new(cfg: &DickeConfig) -> Self {
        let basis = cfg.basis();
        let dim = basis.dim();
        let i_gw = C64::new(0.0, cfg.gamma * cfg.omega);
        let half_mu = 0.5 * cfg.mu;

        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);

        // Row-wise: ⟨row| H |col⟩ for every col coupled to row.
        for (s1, s2, n) in basis.states() {
            let mut entries: Vec<(usize, C64)> = Vec::with_capacity(9);
            let diag = cfg.delta * (s1.sz() + s2.sz()) + cfg.omega * n as f64;
            entries.push((basis.index(s1, s2, n), C64::new(diag, 0.0)));

            if cfg.gamma != 0.0 && cfg.mu != 0.0 {
                for flip_first in [true, false] {
                    let (c1, c2) = if flip_first { (s1.flipped(), s2) } else { (s1, s2.flipped()) };
                    // The row spin of the flipped qubit decides whether the
                    // column state was raised (row ↑) or lowered (row ↓).
                    let row_spin = if flip_first { s1 } else { s2 };
                    // Column photon n+1 → row n via â; column n−1 → row n via â†.
                    let has_above = n < basis.cutoff();
                    let has_below = n > 0;
                    let to_row_by_a = C64::new(((n + 1) as f64).sqrt(), 0.0);
                    let to_row_by_adag = C64::new((n as f64).sqrt(), 0.0);
                    if cfg.rwa {
                        match row_spin {
                            // Ŝ⁺ with Ê⁺ = iγω â: −(μ/2)·iγω·√(n+1).
                            Spin::Up if has_above => {
                                entries.push((basis.index(c1, c2, n + 1), -half_mu * i_gw * to_row_by_a));
                            }
                            // Ŝ⁻ with Ê⁻ = −iγω â†: −(μ/2)·(−iγω)·√n.
                            Spin::Down if has_below => {
                                entries.push((basis.index(c1, c2, n - 1), half_mu * i_gw * to_row_by_adag));
                            }
                            _ => {}
                        }
                    } else {
                        // −μ·⟨Ŝˣ⟩·⟨Ê⟩ with ⟨Ŝˣ⟩ = 1/2 and Ê = iγω(â − â†).
                        if has_above {
                            entries.push((basis.index(c1, c2, n + 1), -half_mu * i_gw * to_row_by_a));
                        }
                        if has_below {
                            entries.push((basis.index(c1, c2, n - 1), half_mu * i_gw * to_row_by_adag));
                        }
                    }
                }
            }
            entries.sort_by_key(|e| e.0);
            for (c, v) in entries {
                cols.push(c);
                values.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self { dim, row_ptr, cols, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nonzeros(&self) -> usize {
        self.values.len()
    }

    pub fn apply(&self, v: &[C64], out: &mut [C64]) {
        debug_assert_eq!(v.len(), self.dim);
        for (row, o) in out.iter_mut().enumerate() {
            let range = self.row_ptr[row]..self.row_ptr[row + 1];
            *o = self.cols[range.clone()].iter().zip(&self.values[range]).map(|(&c, &h)| h * v[c]).sum();
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for row in 0..self.dim {
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                m[(row, self.cols[k])] = self.values[k];
            }
        }
        m
    }

    pub fn expectation(&self, v: &ComplexVector) -> C64 {
        let mut hv = vec![C64::new(0.0, 0.0); self.dim];
        self.apply(v.as_slice(), &mut hv);
        v.as_slice().iter().zip(&hv).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Dense Hamiltonian of dimension `4·(cutoff+1)`.
pub fn build_full_hamiltonian(cfg: &DickeConfig) -> ComplexMatrix {
    SparseHamiltonian::new(cfg).to_dense()
}

/// Unique ground state of `Σⱼ Δ Ŝᶻⱼ`: `|↓↓⟩` for Δ > 0.
pub fn ground_state_electrons(cfg: &DickeConfig) -> Result<ComplexVector> {
    if cfg.delta == 0.0 {
        return Err(Error::DegenerateGroundState);
    }
    let idx = if cfg.delta > 0.0 { DOWN_DOWN } else { basis::UP_UP };
    Ok(ComplexVector::basis(4, idx))
}

/// Evolves `|↓↓⟩ ⊗ photon0` and returns the state at every step, `t = 0..=t_max`.
pub fn evolve_full(cfg: &DickeConfig, photon0: &FockVector) -> Result<Vec<FullState>> {
    let mut out = Vec::with_capacity(cfg.steps() + 1);
    evolve_full_with(cfg, photon0, |s| {
        out.push(s.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Streaming form of [`evolve_full`]: `observe` sees each sampled state in
/// time order and may abort the run by returning an error.
pub fn evolve_full_with<F>(cfg: &DickeConfig, photon0: &FockVector, mut observe: F) -> Result<()>
where
    F: FnMut(&FullState) -> Result<()>,
{
    cfg.validate()?;
    if photon0.cutoff() != cfg.cutoff {
        return Err(Error::DimensionMismatch(format!(
            "photon state cutoff {} differs from configured cutoff {}",
            photon0.cutoff(),
            cfg.cutoff
        )));
    }
    let h = SparseHamiltonian::new(cfg);
    let electrons = ground_state_electrons(cfg)?;
    let mut state = FullState { vector: electrons.kron(&photon0.to_vector()), time: 0.0, basis: cfg.basis() };
    let norm0 = state.vector.norm();
    observe(&state)?;

    let mut scratch = vec![C64::new(0.0, 0.0); h.dim()];
    let minus_i = C64::new(0.0, -1.0);
    for k in 0..cfg.steps() {
        let t = cfg.time(k);
        let next = rk4_step(
            |_, y: &ComplexVector| {
                h.apply(y.as_slice(), &mut scratch);
                ComplexVector::new(scratch.iter().map(|&x| minus_i * x).collect())
            },
            &state.vector,
            t,
            cfg.dt,
        );
        state.vector = next;
        state.time = cfg.time(k + 1);
        let deviation = (state.vector.norm() - norm0).abs();
        if deviation > NORM_DRIFT_LIMIT {
            return Err(Error::NormDrift { time: state.time, deviation });
        }
        observe(&state)?;
    }
    Ok(())
}

/// `Σₙ ψ[i, n + shift_ket] conj(ψ[j, n + shift_bra]) · weight(n)` over the
/// photon index, the common kernel of all photon-moment partial traces.
fn photon_contraction(state: &FullState, pairs: impl Fn(usize) -> Option<(usize, usize, f64)>) -> ComplexMatrix {
    let pd = state.basis.photon_dim();
    let psi = state.vector.as_slice();
    let mut m = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = C64::new(0.0, 0.0);
            for n in 0..pd {
                if let Some((nk, nb, w)) = pairs(n) {
                    acc += psi[i * pd + nk] * psi[j * pd + nb].conj() * w;
                }
            }
            m[(i, j)] = acc;
        }
    }
    m
}

/// `Tr_p |ψ⟩⟨ψ|`.
pub fn partial_trace_photon(state: &FullState) -> TwoBodyMatrix {
    TwoBodyMatrix::new(photon_contraction(state, |n| Some((n, n, 1.0))), state.time)
}

/// `Tr_p[ρ̂ â]`, `Tr_p[ρ̂ â†]`, `Tr_p[ρ̂ â†â]` as 4×4 electron operators.
pub fn photon_moment_traces(state: &FullState) -> [ComplexMatrix; 3] {
    let cutoff = state.basis.cutoff();
    let with_a = photon_contraction(state, |n| (n >= 1).then(|| (n, n - 1, (n as f64).sqrt())));
    let with_adag = photon_contraction(state, |n| (n < cutoff).then(|| (n, n + 1, ((n + 1) as f64).sqrt())));
    let with_number = photon_contraction(state, |n| Some((n, n, n as f64)));
    [with_a, with_adag, with_number]
}

/// The four components of the reduced density matrix labelled by the cat
/// P-function terms: `|α⟩⟨α|`, `|−α⟩⟨−α|`, `|α⟩⟨−α|`, `|−α⟩⟨α|`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterferenceComponents {
    pub plus_plus: TwoBodyMatrix,
    pub minus_minus: TwoBodyMatrix,
    pub plus_minus: TwoBodyMatrix,
    pub minus_plus: TwoBodyMatrix,
}

impl InterferenceComponents {
    /// `ρ₊₊ + ρ₋₋`.
    pub fn classical(&self) -> TwoBodyMatrix {
        TwoBodyMatrix::new(&self.plus_plus.matrix + &self.minus_minus.matrix, self.plus_plus.time)
    }

    /// `ρ₊₋ + ρ₋₊`.
    pub fn interference(&self) -> TwoBodyMatrix {
        TwoBodyMatrix::new(&self.plus_minus.matrix + &self.minus_plus.matrix, self.plus_plus.time)
    }

    pub fn total(&self) -> TwoBodyMatrix {
        let mut m = &self.plus_plus.matrix + &self.minus_minus.matrix;
        m += &self.plus_minus.matrix;
        m += &self.minus_plus.matrix;
        TwoBodyMatrix::new(m, self.plus_plus.time)
    }
}

/// Splits `ρ₂` into classical and interference parts using the photon
/// moments normalized by the free-field amplitude `alpha0_t = α₀e^{−iωt}`.
pub fn decompose_interference(state: &FullState, alpha0_t: C64) -> Result<InterferenceComponents> {
    let amplitude = alpha0_t.norm();
    if amplitude < 1e-12 {
        return Err(Error::ZeroFieldAmplitude { amplitude });
    }
    let s0 = partial_trace_photon(state).matrix;
    let [a, adag, number] = photon_moment_traces(state);
    let s1 = a.scale(alpha0_t.inv());
    let s2 = adag.scale(alpha0_t.conj().inv());
    let s3 = number.scale_real(1.0 / alpha0_t.norm_sqr());

    let combine = |signs: [f64; 3]| {
        let mut m = s0.clone();
        m.add_scaled(C64::new(signs[0], 0.0), &s1);
        m.add_scaled(C64::new(signs[1], 0.0), &s2);
        m.add_scaled(C64::new(signs[2], 0.0), &s3);
        TwoBodyMatrix::new(m.scale_real(0.25), state.time)
    };
    Ok(InterferenceComponents {
        plus_plus: combine([1.0, 1.0, 1.0]),
        minus_minus: combine([-1.0, -1.0, 1.0]),
        plus_minus: combine([1.0, -1.0, -1.0]),
        minus_plus: combine([-1.0, 1.0, -1.0]),
    })
}

/// `⟨ψ|Ô|ψ⟩` for an electron-only operator `Ô` (4×4), photon untouched.
pub fn electron_expectation(state: &FullState, op: &ComplexMatrix) -> C64 {
    let rho = partial_trace_photon(state).matrix;
    // Tr(ρ Ô)
    (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| rho[(i, j)] * op[(j, i)]).sum()
}
