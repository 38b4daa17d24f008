//! Electron dynamics driven by quantum (cat-state) light.
//!
//! Two routes to the reduced two-electron density matrix of the two-qubit
//! Dicke model are provided:
//!
//! * [`full`]: exact Schrödinger evolution of the coupled qubits ⊗ photon
//!   system in a truncated Fock basis, with partial trace and extraction of
//!   the classical / interferential components from photon moments;
//! * [`effective`]: the external-field approximation, where the photon state
//!   is written as a finite mixture of (generalized) P-function atoms and each
//!   atom drives a 4×4 density-matrix trajectory under a possibly
//!   non-Hermitian Hamiltonian.
//!
//! [`analysis`] holds the perturbative closed forms, negativity, trace
//! distance, and the log-log slope fit used to compare the two.

pub mod analysis;
pub mod basis;
pub mod effective;
pub mod error;
pub mod full;
pub mod linalg;
pub mod photon;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use effective::{DynamicsMode, TrajectoryState};
pub use full::{DickeConfig, FullState, TwoBodyMatrix};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use photon::{FockVector, PAtom, PDistribution};
