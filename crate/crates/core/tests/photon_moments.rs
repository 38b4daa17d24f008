use catlight::photon::{cat_fock, cat_p, coherent_fock, coherent_p};
use catlight::C64;
use proptest::prelude::*;

fn moment_pairs() -> impl Iterator<Item = (u32, u32)> {
    (0..=4u32).flat_map(|m| (0..=4 - m).map(move |n| (m, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn atomic_and_fock_moments_agree(
        radius in 0.0f64..1.5,
        phase in 0.0f64..std::f64::consts::TAU,
        cutoff in 100usize..130,
    ) {
        let alpha = C64::from_polar(radius, phase);
        for (p, fock) in [(cat_p(alpha), cat_fock(alpha, cutoff)), (coherent_p(alpha), coherent_fock(alpha, cutoff))] {
            for (m, n) in moment_pairs() {
                let atomic = p.moment(m, n);
                let number_basis = fock.moment(m, n);
                prop_assert!((atomic - number_basis).norm() <= 1e-10, "<a†^{} a^{}>: {} vs {}", m, n, atomic, number_basis);
            }
        }
    }

    #[test]
    fn cat_distribution_invariants(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let p = cat_p(C64::new(re, im));
        prop_assert!((p.weight_sum() - 1.0).norm() <= 1e-12);
        prop_assert!(p.is_conjugate_closed());
        prop_assert!(p.validate().is_ok());
    }

    #[test]
    fn interference_weight_decays_with_amplitude(r1 in 0.0f64..2.0, dr in 0.01f64..1.0) {
        let w = |r: f64| cat_p(C64::new(r, 0.0)).atoms()[2].weight.re;
        prop_assert!(w(r1 + dr) < w(r1));
    }
}
