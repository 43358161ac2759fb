mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn series_ring_axioms(a in series(), b in series(), c in series()) {
        ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn substitution_is_a_homomorphism((a, b, minus, num, den) in substitution_args()) {
        substitution_homomorphism(&a, &b, minus, num, den)?;
    }

    #[test]
    fn inversion_is_an_involution(a in invertible()) {
        invert_twice(&a)?;
    }

    #[test]
    fn theta_quasi_periodicity((j, z, tau) in numeric_args()) {
        quasi_periodicity(j, z, tau)?;
    }

    #[test]
    fn lattice_sums_ignore_box_margin(which in lattice_sum(), order in 1i64..40, margin in 1i64..6) {
        radius_invariance(which, order, margin)?;
    }
}
