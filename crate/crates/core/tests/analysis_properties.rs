use catlight::analysis::{fit_loglog_slope, negativity, trace_distance, ScalingPoint};
use catlight::linalg::{kron, ComplexMatrix};
use catlight::{TwoBodyMatrix, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gaussian_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Random density matrix `G G† / tr(G G†)`.
fn random_density(rng: &mut impl Rng) -> TwoBodyMatrix {
    let g = gaussian_matrix(rng, 4);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    TwoBodyMatrix::new(m.scale_real(1.0 / tr).hermitian_part(), 0.0)
}

/// Unitary from Gram–Schmidt on a random complex matrix.
fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n);
    let mut cols: Vec<Vec<C64>> = vec![];
    for j in 0..n {
        let mut v: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

fn conjugate(u: &ComplexMatrix, rho: &TwoBodyMatrix) -> TwoBodyMatrix {
    TwoBodyMatrix::new(u.matmul(&rho.matrix).matmul(&u.adjoint()).hermitian_part(), rho.time)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn negativity_invariant_under_local_unitaries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(&mut rng);
        let local = kron(&random_unitary(&mut rng, 2), &random_unitary(&mut rng, 2));
        let before = negativity(&rho).unwrap();
        let after = negativity(&conjugate(&local, &rho)).unwrap();
        prop_assert!((before - after).abs() <= 1e-9);
    }

    #[test]
    fn trace_distance_is_a_unitarily_invariant_metric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_density(&mut rng), random_density(&mut rng), random_density(&mut rng));
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() <= 1e-9);
        prop_assert!(ab <= trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap() + 1e-9);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        let u = random_unitary(&mut rng, 4);
        prop_assert!((ab - trace_distance(&conjugate(&u, &a), &conjugate(&u, &b)).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn slope_recovers_power_law(exponent in 0.5f64..6.0, prefactor in 1e-3f64..1e3) {
        let pts: Vec<_> = (0..7)
            .map(|k| {
                let gamma = 10f64.powf(-3.5 + 0.25 * k as f64);
                ScalingPoint { gamma, distance: prefactor * gamma.powf(exponent) }
            })
            .filter(|p| p.distance > 1e-300)
            .collect();
        prop_assert!((fit_loglog_slope(&pts, 0.0).unwrap() - exponent).abs() < 1e-9);
    }
}
