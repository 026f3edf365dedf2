use kronbures_bench::departure::{draw_metrics, draw_profile, Regime};
use kronbures_bench::gen::{gen_log_diag, gen_spd, trial_rng};
use kronbures_bench::report::mean_std;
use nalgebra::DVector;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn summary_std_is_nonnegative(values in prop::collection::vec(-1e6f64..1e6, 1..40)) {
        let (mean, std) = mean_std(&values);
        prop_assert!(std >= 0.0);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(mean >= lo - 1e-9 && mean <= hi + 1e-9);
    }

    #[test]
    fn normalized_log_diag_has_unit_product(xi in prop::collection::vec(-20f64..20.0, 1..32)) {
        let d = gen_log_diag(&DVector::from_vec(xi), true);
        prop_assert!(d.iter().all(|&x| x > 0.0));
        prop_assert!(d.iter().map(|x| x.ln()).sum::<f64>().abs() <= 1e-12 * d.len() as f64 * 20.0);
    }

    #[test]
    fn gen_spd_is_shifted_and_deterministic(seed in any::<u64>(), n in 1usize..12) {
        let a = gen_spd(n, &mut trial_rng(seed));
        prop_assert!(a.min_eigenvalue() >= 0.01 * (1.0 - 1e-9));
        let b = gen_spd(n, &mut trial_rng(seed));
        prop_assert_eq!(a.as_matrix(), b.as_matrix());
    }

    #[test]
    fn leaf_regimes_vanish_exactly(seed in any::<u64>(), n in 2usize..24, shared_u in any::<bool>()) {
        let regime = if shared_u { Regime::SharedU } else { Regime::SharedV };
        let m = draw_metrics(&draw_profile(n, seed, 1.0, regime).unwrap()).unwrap();
        prop_assert_eq!(m.max_delta_geo, 0.0);
        prop_assert_eq!(m.max_delta_diag, 0.0);
    }
}
