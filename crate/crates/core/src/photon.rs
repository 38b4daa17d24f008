//! Photon states in the two representations used by the simulator.
//!
//! The effective theory consumes finite atomic P functions: each [`PAtom`]
//! stands for a term `w·|ket⟩⟨bra|/⟨bra|ket⟩` of the photon density matrix in
//! which `â → ket` and `â† → conj(bra)`. The full simulation consumes
//! truncated Fock-basis vectors.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::ComplexVector;

/// One weighted generalized-delta term of a P function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PAtom {
    pub weight: C64,
    /// Value substituted for `â`.
    pub ket: C64,
    /// Amplitude whose conjugate is substituted for `â†`.
    pub bra: C64,
}

impl PAtom {
    pub fn new(weight: C64, ket: C64, bra: C64) -> Result<Self> {
        if !(weight.re.is_finite() && weight.im.is_finite()) || weight == C64::new(0.0, 0.0) {
            return Err(Error::InvalidConfig(format!("P-atom weight must be finite and nonzero, got {weight}")));
        }
        Ok(Self { weight, ket, bra })
    }

    /// A diagonal `|α⟩⟨α|` atom.
    pub fn classical(weight: f64, amplitude: C64) -> Self {
        Self { weight: C64::new(weight, 0.0), ket: amplitude, bra: amplitude }
    }

    pub fn is_classical(&self) -> bool {
        self.ket == self.bra
    }

    /// The atom that makes the reassembled density matrix Hermitian.
    pub fn partner(&self) -> Self {
        Self { weight: self.weight.conj(), ket: self.bra, bra: self.ket }
    }

    /// Normal-ordered moment `conj(bra)^m · ket^n` (unweighted).
    pub fn moment(&self, m: u32, n: u32) -> C64 {
        self.bra.conj().powu(m) * self.ket.powu(n)
    }
}

/// A finite mixture of P atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct PDistribution {
    atoms: Vec<PAtom>,
}

impl PDistribution {
    /// Wraps a list of atoms without checking the closure invariants; see
    /// [`PDistribution::validate`].
    pub fn from_atoms(atoms: Vec<PAtom>) -> Self {
        Self { atoms }
    }

    pub fn atoms(&self) -> &[PAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight_sum(&self) -> C64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// True when the atoms can be paired off as `(w, a, b) ↔ (conj w, b, a)`,
    /// each atom used once (self-partnered atoms pair with themselves).
    pub fn is_conjugate_closed(&self) -> bool {
        let n = self.atoms.len();
        let mut used = vec![false; n];
        for i in 0..n {
            if used[i] {
                continue;
            }
            used[i] = true;
            let partner = self.atoms[i].partner();
            if partner == self.atoms[i] {
                continue;
            }
            match (0..n).find(|&j| !used[j] && self.atoms[j] == partner) {
                Some(j) => used[j] = true,
                None => return false,
            }
        }
        true
    }

    pub fn validate(&self) -> Result<()> {
        if self.atoms.is_empty() {
            return Err(Error::InvalidConfig("P distribution has no atoms".into()));
        }
        let sum = self.weight_sum();
        if (sum - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidConfig(format!("P weights sum to {sum}, expected 1")));
        }
        if !self.is_conjugate_closed() {
            return Err(Error::InvalidConfig("P atoms are not conjugate-closed".into()));
        }
        Ok(())
    }

    /// `⟨â†ᵐ âⁿ⟩ = Σ w · conj(bra)ᵐ · ketⁿ`.
    pub fn moment(&self, m: u32, n: u32) -> C64 {
        self.atoms.iter().map(|a| a.weight * a.moment(m, n)).sum()
    }
}

/// `⟨β|α⟩` for coherent states.
pub fn coherent_overlap(beta: C64, alpha: C64) -> C64 {
    (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr() + beta.conj() * alpha).exp()
}

/// Normalization `N = 2[1 + exp(-2|α₀|²)]` of the even cat state.
pub fn cat_normalization(alpha0: C64) -> f64 {
    2.0 * (1.0 + (-2.0 * alpha0.norm_sqr()).exp())
}

/// P function of the coherent state `|α₀⟩`: a single unit atom.
pub fn coherent_p(alpha0: C64) -> PDistribution {
    PDistribution::from_atoms(vec![PAtom::classical(1.0, alpha0)])
}

/// P function of the even cat state `(|α₀⟩ + |−α₀⟩)/√N`: two classical atoms
/// and two interference atoms weighted by `⟨−α₀|α₀⟩/N`.
pub fn cat_p(alpha0: C64) -> PDistribution {
    let norm = cat_normalization(alpha0);
    let overlap = (-2.0 * alpha0.norm_sqr()).exp();
    let w_cls = C64::new(1.0 / norm, 0.0);
    let w_itf = C64::new(overlap / norm, 0.0);
    PDistribution::from_atoms(vec![
        PAtom { weight: w_cls, ket: alpha0, bra: alpha0 },
        PAtom { weight: w_cls, ket: -alpha0, bra: -alpha0 },
        PAtom { weight: w_itf, ket: alpha0, bra: -alpha0 },
        PAtom { weight: w_itf, ket: -alpha0, bra: alpha0 },
    ])
}

/// Photon state in the number basis truncated at `cutoff`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<C64>,
    deficit: f64,
}

impl FockVector {
    /// Wraps amplitudes whose exact (untruncated) norm is 1.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Self {
        assert!(!amplitudes.is_empty(), "Fock vector needs at least the vacuum amplitude");
        let kept: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        Self { amplitudes, deficit: 1.0 - kept }
    }

    pub fn vacuum(cutoff: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); cutoff + 1];
        amps[0] = C64::new(1.0, 0.0);
        Self::from_amplitudes(amps)
    }

    pub fn number_state(n: usize, cutoff: usize) -> Self {
        assert!(n <= cutoff);
        let mut amps = vec![C64::new(0.0, 0.0); cutoff + 1];
        amps[n] = C64::new(1.0, 0.0);
        Self::from_amplitudes(amps)
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Probability weight lost to truncation, `1 − ‖v‖²`.
    pub fn truncation_deficit(&self) -> f64 {
        self.deficit
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes.iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum()
    }

    /// Normal-ordered moment `⟨â†ᵐ âⁿ⟩ = ⟨âᵐψ|âⁿψ⟩` in the truncated space.
    pub fn moment(&self, m: u32, n: u32) -> C64 {
        let lowered = |k: u32| {
            let mut v = self.amplitudes.clone();
            for _ in 0..k {
                let next: Vec<C64> = (0..v.len())
                    .map(|j| if j + 1 < v.len() { v[j + 1] * ((j + 1) as f64).sqrt() } else { C64::new(0.0, 0.0) })
                    .collect();
                v = next;
            }
            v
        };
        let left = lowered(m);
        let right = lowered(n);
        left.iter().zip(&right).map(|(l, r)| l.conj() * r).sum()
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::new(self.amplitudes.clone())
    }
}

/// `|α₀⟩` truncated at `cutoff`, built by the running ratio
/// `c(n+1) = c(n)·α₀/√(n+1)` so no factorial is ever formed.
pub fn coherent_fock(alpha0: C64, cutoff: usize) -> FockVector {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut c = C64::new((-0.5 * alpha0.norm_sqr()).exp(), 0.0);
    amps.push(c);
    for n in 0..cutoff {
        c = c * alpha0 / ((n + 1) as f64).sqrt();
        amps.push(c);
    }
    FockVector::from_amplitudes(amps)
}

/// Even cat state `(|α₀⟩ + |−α₀⟩)/√N` truncated at `cutoff`. Odd amplitudes
/// are exactly zero.
pub fn cat_fock(alpha0: C64, cutoff: usize) -> FockVector {
    let coherent = coherent_fock(alpha0, cutoff);
    let scale = 2.0 / cat_normalization(alpha0).sqrt();
    let amps = coherent
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, &a)| if n % 2 == 0 { a * scale } else { C64::new(0.0, 0.0) })
        .collect();
    FockVector::from_amplitudes(amps)
}
