//! Perturbative closed forms, entanglement negativity, trace distance and
//! power-law fitting.

use num_complex::Complex64 as C64;

use crate::basis::{DOWN_DOWN, DOWN_UP, UP_DOWN, UP_UP};
use crate::error::{Error, Result};
use crate::full::{DickeConfig, TwoBodyMatrix};
use crate::linalg::{trace_norm_hermitian, ComplexMatrix};
use crate::photon::{cat_normalization, coherent_overlap};

/// Relative distance `|Δ − ω| / Δ` below which the resonant limit is used.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Points with a distance at or below this are excluded from slope fits.
pub const DEFAULT_FIT_FLOOR: f64 = 1e-12;

/// Tolerance on `trace(ρ) = 1` accepted by [`negativity`].
pub const NEGATIVITY_TRACE_TOL: f64 = 1e-6;

/// Round-off window `[−NEGATIVITY_CLAMP, 0]` clamped to zero.
pub const NEGATIVITY_CLAMP: f64 = 1e-10;

/// `∫₀ᵗ e^{ixτ} dτ`, with the `x → 0` limit taken analytically.
fn phase_integral(x: f64, t: f64, scale: f64) -> C64 {
    if x.abs() <= RESONANCE_TOL * scale.abs() {
        C64::new(t, 0.0)
    } else {
        (C64::new(0.0, x * t).exp() - 1.0) / C64::new(0.0, x)
    }
}

/// `iμ ∫₀ᵗ E(τ) e^{iΔτ} dτ` for the field `E = iγω[α₁e^{−iωτ} − conj(α₂)e^{iωτ}]`.
/// In RWA mode the counter-rotating `Δ + ω` term is dropped.
pub fn perturb_amplitude(alpha1: C64, alpha2: C64, t: f64, cfg: &DickeConfig) -> C64 {
    let co = alpha1 * phase_integral(cfg.delta - cfg.omega, t, cfg.delta);
    let counter =
        if cfg.rwa { C64::new(0.0, 0.0) } else { alpha2.conj() * phase_integral(cfg.delta + cfg.omega, t, cfg.delta) };
    -(co - counter) * (cfg.mu * cfg.gamma * cfg.omega)
}

/// The two amplitudes entering the cat-light perturbative matrices:
/// `classical = A(α₀, α₀)`, `interference = A(α₀, −α₀)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbativeAmplitudes {
    pub classical: C64,
    pub interference: C64,
    pub time: f64,
    pub config: DickeConfig,
}

impl PerturbativeAmplitudes {
    pub fn new(alpha0: C64, t: f64, cfg: &DickeConfig) -> Self {
        Self {
            classical: perturb_amplitude(alpha0, alpha0, t, cfg),
            interference: perturb_amplitude(alpha0, -alpha0, t, cfg),
            time: t,
            config: *cfg,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PerturbativePart {
    /// Classical atoms `(±α₀, ±α₀)`.
    Classical,
    /// Interference atoms under the complex-field (Sudarshan–Glauber) dynamics.
    Interference,
    /// Interference atoms under the two-sided Hermitian (generalized-P) dynamics.
    GeneralizedPInterference,
}

/// `[[|k|²·|b|², 0, 0, k²], [0, s, s, 0], [0, s, s, 0], [conj(b)², 0, 0, 1]]`
/// for ket amplitude `k`, bra amplitude `b`, `s = k·conj(b)`: the outer product
/// of `|↓↓⟩ + k(|↑↓⟩+|↓↑⟩) + k²|↑↑⟩` with the same form in `b`, with the
/// odd-parity blocks dropped.
fn second_order_matrix(ket: C64, bra: C64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    let single = ket * bra.conj();
    m[(UP_UP, UP_UP)] = single * single;
    m[(UP_UP, DOWN_DOWN)] = ket * ket;
    m[(DOWN_DOWN, UP_UP)] = (bra * bra).conj();
    m[(DOWN_DOWN, DOWN_DOWN)] = C64::new(1.0, 0.0);
    for i in [UP_DOWN, DOWN_UP] {
        for j in [UP_DOWN, DOWN_UP] {
            m[(i, j)] = single;
        }
    }
    m
}

/// Second-order interaction-picture two-body matrix of one part of the cat
/// ensemble, with the ensemble prefactors `2/N` or `2⟨−α₀|α₀⟩/N` kept and no
/// trace normalization.
///
/// The one-qubit excitation amplitude is `A/2` since `⟨↑|Ŝˣ|↓⟩ = 1/2`.
pub fn perturb_two_body(alpha0: C64, t: f64, cfg: &DickeConfig, part: PerturbativePart) -> TwoBodyMatrix {
    let amps = PerturbativeAmplitudes::new(alpha0, t, cfg);
    let norm = cat_normalization(alpha0);
    let cross = coherent_overlap(-alpha0, alpha0);
    let (prefactor, m) = match part {
        PerturbativePart::Classical => {
            let c = amps.classical / 2.0;
            (C64::new(2.0 / norm, 0.0), second_order_matrix(c, c))
        }
        // The bra side of an interference trajectory sees the field of the
        // opposite amplitude, which flips the sign of its excitation.
        PerturbativePart::Interference => {
            let d = amps.interference / 2.0;
            (cross * (2.0 / norm), second_order_matrix(d, -d))
        }
        PerturbativePart::GeneralizedPInterference => {
            let c = amps.classical / 2.0;
            (cross * (2.0 / norm), second_order_matrix(c, -c))
        }
    };
    TwoBodyMatrix::new(m.scale(prefactor), t)
}

/// `U₀† ρ U₀` with `U₀ = e^{−iΔΣŜᶻ t}` at the matrix's own time stamp.
pub fn to_interaction_picture(rho: &TwoBodyMatrix, cfg: &DickeConfig) -> TwoBodyMatrix {
    let energy = |i: usize| match i {
        UP_UP => cfg.delta,
        DOWN_DOWN => -cfg.delta,
        _ => 0.0,
    };
    let m = ComplexMatrix::from_fn(4, 4, |i, j| {
        rho.matrix[(i, j)] * C64::from_polar(1.0, (energy(i) - energy(j)) * rho.time)
    });
    TwoBodyMatrix::new(m, rho.time)
}

/// Partial transpose on the first qubit:
/// `|s₁ s₂⟩⟨s₁′ s₂′| → |s₁′ s₂⟩⟨s₁ s₂′|`.
pub fn partial_transpose(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let (s1p, s2) = (r / 2, r % 2);
        let (s1, s2p) = (c / 2, c % 2);
        m[(2 * s1 + s2, 2 * s1p + s2p)]
    })
}

/// `(‖ρ^{T₁}‖₁ − 1)/2`.
pub fn negativity(rho: &TwoBodyMatrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr - 1.0).norm() > NEGATIVITY_TRACE_TOL {
        return Err(Error::UnnormalizedDensity { trace: tr.re });
    }
    let value = (trace_norm_hermitian(&partial_transpose(&rho.matrix))? - 1.0) / 2.0;
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEGATIVITY_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeNegativity { value })
    }
}

/// `‖ρ − σ‖₁ / 2`.
pub fn trace_distance(rho: &TwoBodyMatrix, sigma: &TwoBodyMatrix) -> Result<f64> {
    Ok(trace_norm_hermitian(&(&rho.matrix - &sigma.matrix))? / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingPoint {
    pub gamma: f64,
    pub distance: f64,
}

/// Least-squares slope of `ln(distance)` against `ln(gamma)` over the points
/// above `floor`.
pub fn fit_loglog_slope(points: &[ScalingPoint], floor: f64) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        points.iter().filter(|p| p.distance > floor && p.gamma > 0.0).map(|p| (p.gamma.ln(), p.distance.ln())).unzip();
    if xs.len() < 3 {
        return Err(Error::InsufficientPoints { retained: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
