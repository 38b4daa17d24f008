//! Basis conventions shared by every module.
//!
//! Single qubit: index 0 = ↑, 1 = ↓, so `|↑⟩ = (1,0)ᵀ`. Two qubits:
//! `(|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩)`. The full space is ordered
//! qubit 1 ⊗ qubit 2 ⊗ photon with photon number `n = 0..=cutoff`.

use num_complex::Complex64 as C64;

use crate::linalg::{kron, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    /// Eigenvalue of Ŝᶻ.
    pub fn sz(self) -> f64 {
        match self {
            Spin::Up => 0.5,
            Spin::Down => -0.5,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

/// Index of `|s1 s2⟩` in the two-qubit basis.
pub fn pair_index(s1: Spin, s2: Spin) -> usize {
    2 * s1.index() + s2.index()
}

pub const UP_UP: usize = 0;
pub const UP_DOWN: usize = 1;
pub const DOWN_UP: usize = 2;
pub const DOWN_DOWN: usize = 3;

/// Index arithmetic for the qubit ⊗ qubit ⊗ photon space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FullBasis {
    cutoff: usize,
}

impl FullBasis {
    pub fn new(cutoff: usize) -> Self {
        Self { cutoff }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn photon_dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dim(&self) -> usize {
        4 * self.photon_dim()
    }

    pub fn index(&self, s1: Spin, s2: Spin, n: usize) -> usize {
        debug_assert!(n <= self.cutoff);
        pair_index(s1, s2) * self.photon_dim() + n
    }

    /// Splits a flat index into (two-qubit index, photon number).
    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.photon_dim(), idx % self.photon_dim())
    }

    /// Iterates `(s1, s2, n)` in storage order.
    pub fn states(&self) -> impl Iterator<Item = (Spin, Spin, usize)> + '_ {
        Spin::ALL
            .into_iter()
            .flat_map(move |s1| Spin::ALL.into_iter().flat_map(move |s2| (0..=self.cutoff).map(move |n| (s1, s2, n))))
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn sz() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[0.5, -0.5])
}

pub fn sx() -> ComplexMatrix {
    ComplexMatrix::from_row_major(2, 2, vec![c(0.0), c(0.5), c(0.5), c(0.0)])
}

/// Ŝ⁺ = |↑⟩⟨↓|.
pub fn s_plus() -> ComplexMatrix {
    ComplexMatrix::from_row_major(2, 2, vec![c(0.0), c(1.0), c(0.0), c(0.0)])
}

/// Ŝ⁻ = |↓⟩⟨↑|.
pub fn s_minus() -> ComplexMatrix {
    s_plus().transpose()
}

/// `Σⱼ op_j` on two qubits: `op ⊗ 1 + 1 ⊗ op`.
pub fn collective(op: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    &kron(op, &id) + &kron(&id, op)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_index_round_trips() {
        let b = FullBasis::new(7);
        for (k, (s1, s2, n)) in b.states().enumerate() {
            assert_eq!(b.index(s1, s2, n), k);
            assert_eq!(b.split(k), (pair_index(s1, s2), n));
        }
        assert_eq!(b.dim(), 32);
    }

    #[test]
    fn pair_constants_match_index() {
        assert_eq!(pair_index(Spin::Up, Spin::Up), UP_UP);
        assert_eq!(pair_index(Spin::Up, Spin::Down), UP_DOWN);
        assert_eq!(pair_index(Spin::Down, Spin::Up), DOWN_UP);
        assert_eq!(pair_index(Spin::Down, Spin::Down), DOWN_DOWN);
    }

    #[test]
    fn sx_is_half_sum_of_ladders() {
        let sum = &s_plus() + &s_minus();
        assert_eq!(sum.scale_real(0.5), sx());
    }
}
