use landcover_svm::kernels::{eval_kernel, gram_matrix, KernelKind, KernelSpec, Standardizer};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, dim)
}

fn specs() -> impl Strategy<Value = KernelSpec> {
    prop_oneof![
        Just(KernelSpec::linear()),
        (0.0f64..2.0).prop_map(KernelSpec::quadratic),
        (1u32..5, 0.0f64..2.0).prop_map(|(d, c)| KernelSpec::polynomial(d, c)),
        (0.001f64..5.0).prop_map(KernelSpec::rbf),
    ]
}

proptest! {
    #[test]
    fn kernels_are_symmetric(spec in specs(), x in point(4), y in point(4)) {
        let a = eval_kernel(&spec, &x, &y).unwrap();
        let b = eval_kernel(&spec, &y, &x).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn rbf_stays_in_unit_interval(gamma in 0.001f64..5.0, x in point(3), y in point(3)) {
        let spec = KernelSpec::rbf(gamma);
        let v = eval_kernel(&spec, &x, &y).unwrap();
        // exp underflows to 0 for far-apart points
        prop_assert!(v >= 0.0);
        prop_assert!(v <= 1.0);
        prop_assert_eq!(eval_kernel(&spec, &x, &x).unwrap(), 1.0);
    }

    #[test]
    fn quadratic_is_degree_two_polynomial(coef0 in 0.0f64..3.0, x in point(3), y in point(3)) {
        let q = eval_kernel(&KernelSpec::quadratic(coef0), &x, &y).unwrap();
        let p = eval_kernel(&KernelSpec::polynomial(2, coef0), &x, &y).unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn rbf_gram_is_positive_semidefinite(
        gamma in 0.01f64..3.0,
        pts in prop::collection::vec(point(3), 2..15),
    ) {
        let g = gram_matrix(&KernelSpec::rbf(gamma), &pts).unwrap();
        let n = g.len();
        let m = DMatrix::from_fn(n, n, |i, j| g.get(i, j));
        let eig = SymmetricEigen::new(m);
        for &l in eig.eigenvalues.iter() {
            prop_assert!(l >= -1e-9, "eigenvalue {}", l);
        }
    }

    #[test]
    fn gram_matches_pointwise_evaluation(spec in specs(), pts in prop::collection::vec(point(2), 1..8)) {
        let g = gram_matrix(&spec, &pts).unwrap();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                prop_assert_eq!(g.get(i, j), g.get(j, i));
                let direct = eval_kernel(&spec, &pts[i], &pts[j]).unwrap();
                prop_assert!((g.get(i, j) - direct).abs() <= 1e-12 * direct.abs().max(1.0));
            }
        }
    }

    #[test]
    fn standardized_training_bands_have_unit_scale(pts in prop::collection::vec(point(3), 3..30)) {
        let st = Standardizer::fit(pts.iter().map(|p| p.as_slice())).unwrap();
        let z: Vec<Vec<f64>> = pts.iter().map(|p| st.apply(p)).collect();
        for b in 0..3 {
            let n = z.len() as f64;
            let mean = z.iter().map(|p| p[b]).sum::<f64>() / n;
            prop_assert!(mean.abs() < 1e-9);
            let var = z.iter().map(|p| (p[b] - mean).powi(2)).sum::<f64>() / n;
            // constant bands stay constant
            prop_assert!((var - 1.0).abs() < 1e-9 || var < 1e-18, "variance {}", var);
        }
    }
}

#[test]
fn mismatched_dimensions_are_rejected() {
    for kind in KernelKind::ALL {
        let spec = KernelSpec::with_defaults(kind, 2);
        assert!(eval_kernel(&spec, &[1.0, 2.0], &[1.0]).is_err());
    }
}
