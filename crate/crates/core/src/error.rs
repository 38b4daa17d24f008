use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NonHermitianInput { defect: f64 },

    #[error("Jacobi diagonalization did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ground state of the bare electron Hamiltonian is degenerate (delta = 0)")]
    DegenerateGroundState,

    #[error("state norm drifted by {deviation:.3e} at t = {time}")]
    NormDrift { time: f64, deviation: f64 },

    #[error("trajectory trace drifted by {deviation:.3e} at t = {time}")]
    TraceDrift { time: f64, deviation: f64 },

    #[error("free-field amplitude {amplitude:.3e} too small to divide photon moments by")]
    ZeroFieldAmplitude { amplitude: f64 },

    #[error("assembled ensemble is not Hermitian (defect {defect:.3e}); atom list is not conjugate-closed")]
    NonHermitianEnsemble { defect: f64 },

    #[error("trajectories do not share a time stamp")]
    MisalignedTrajectories,

    #[error("negativity came out negative ({value:.3e})")]
    NegativeNegativity { value: f64 },

    #[error("density matrix trace is {trace:.12}, expected 1")]
    UnnormalizedDensity { trace: f64 },

    #[error("only {retained} points above the floor, need at least 3")]
    InsufficientPoints { retained: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Numerical guards that signal an unstable integration rather than bad input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(self, Error::NormDrift { .. } | Error::TraceDrift { .. })
    }
}
