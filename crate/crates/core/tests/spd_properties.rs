mod common;

use common::*;
use kronbures::spd::{gauge_normalize, kron, partial_trace_1, partial_trace_2, SymmetricMatrix};
use kronbures::SpdMatrix;
use nalgebra::DMatrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_mixed_product(seed in any::<u64>(), n in 1usize..5, m in 1usize..4) {
        let mut r = rng(seed);
        let (a, c) = (normal_matrix(&mut r, n, n), normal_matrix(&mut r, n, n));
        let (b, d) = (normal_matrix(&mut r, m, m), normal_matrix(&mut r, m, m));
        let lhs = kron(&a, &b) * kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!((lhs - &rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn partial_traces_are_linear_and_invert_products(seed in any::<u64>(), n in 1usize..5, s in -3.0f64..3.0) {
        let mut r = rng(seed);
        let x = SymmetricMatrix::new(symmetric(&mut r, n * n)).unwrap();
        let y = SymmetricMatrix::new(symmetric(&mut r, n * n)).unwrap();
        let xy = SymmetricMatrix::new(x.as_matrix() + y.as_matrix() * s).unwrap();
        for f in [partial_trace_1, partial_trace_2] {
            let lhs = f(&xy, n).unwrap();
            let rhs = f(&x, n).unwrap().as_matrix() + f(&y, n).unwrap().as_matrix() * s;
            prop_assert!((lhs.as_matrix() - rhs).norm() <= 1e-12 * (1.0 + xy.frobenius_norm()));
        }
        let (u, v) = (symmetric(&mut r, n), symmetric(&mut r, n));
        let k = SymmetricMatrix::new(kron(&v, &u)).unwrap();
        let t1 = partial_trace_1(&k, n).unwrap();
        let t2 = partial_trace_2(&k, n).unwrap();
        prop_assert!((t1.as_matrix() - &u * v.trace()).norm() <= 1e-12 * (1.0 + k.frobenius_norm()));
        prop_assert!((t2.as_matrix() - &v * u.trace()).norm() <= 1e-12 * (1.0 + k.frobenius_norm()));
        prop_assert!((t1.trace() - k.trace()).abs() <= 1e-12 * (1.0 + k.frobenius_norm()));
    }

    #[test]
    fn gauge_normalization(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let (u, v) = (spd(&mut r, n, 0.1), spd(&mut r, n, 0.1));
        let (nu, nv) = gauge_normalize(&u, &v).unwrap();
        prop_assert!(nu.log_det().abs() <= 1e-10 * n as f64);
        let k0 = kron(v.as_matrix(), u.as_matrix());
        prop_assert!(rel(&kron(nv.as_matrix(), nu.as_matrix()), &k0) <= 1e-12);
        let (nu2, nv2) = gauge_normalize(&nu, &nv).unwrap();
        prop_assert!(rel(nu2.as_matrix(), nu.as_matrix()) <= 1e-13);
        prop_assert!(rel(nv2.as_matrix(), nv.as_matrix()) <= 1e-13);
    }

    #[test]
    fn square_roots(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let a = lognormal_spd(&mut r, n, 1.0);
        let s = a.sqrt();
        prop_assert!(rel(&(s.as_matrix() * s.as_matrix()), a.as_matrix()) <= 1e-12);
        let prod = a.inv_sqrt().as_matrix() * a.as_matrix() * a.inv_sqrt().as_matrix();
        prop_assert!((prod - DMatrix::identity(n, n)).norm() <= 1e-11);
        prop_assert!(s.eigenvalues().iter().all(|&x| x > 0.0));
    }
}

#[test]
fn spectrum_of_kron_is_products() {
    let mut r = rng(3);
    let (a, b) = (spd(&mut r, 3, 0.5), spd(&mut r, 2, 0.5));
    let k = SpdMatrix::from_matrix(kron(a.as_matrix(), b.as_matrix())).unwrap();
    let mut want: Vec<f64> = a.eigenvalues().iter().flat_map(|x| b.eigenvalues().iter().map(move |y| x * y)).collect();
    want.sort_by(|x, y| y.total_cmp(x));
    for (g, w) in k.eigenvalues().iter().zip(&want) {
        assert!((g - w).abs() <= 1e-12 * want[0]);
    }
}
