use gauge_ga::golden::relative_residual;
use gauge_ga::ortho::random_lorentz;
use gauge_ga::{
    factor_gauge, random, verify_golden, DeformedAlgebra, GaError, MetricExtensor, Multivector,
    OrthoMetric, Product,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn golden_wedge_is_euclidean_wedge(n in 2usize..=6, seed in any::<u64>()) {
        let mut rng = random::stream(seed, 0);
        let g = random::any_metric(n, &mut rng);
        let x = random::multivector(n, &mut rng);
        let y = random::multivector(n, &mut rng);
        let da = g.deformation().unwrap();
        let golden = da.product(Product::Wedge, &x, &y).unwrap();
        prop_assert!(relative_residual(&golden, &x.wedge(&y).unwrap(), &x, &y) <= 1e-12);
    }

    #[test]
    fn gauge_choice_does_not_matter(n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = random::stream(seed, 0);
        let g = random::any_metric(n, &mut rng);
        let eta = OrthoMetric::standard(g.signature().p, n).unwrap();
        let f = factor_gauge(&g, &eta).unwrap();
        let lambda = random_lorentz(&eta, &mut rng).unwrap();
        let a = DeformedAlgebra::from_factorization(&f).unwrap();
        let b = DeformedAlgebra::new(lambda.compose(&f.h).unwrap(), eta, g).unwrap();
        let x = random::multivector(n, &mut rng);
        let y = random::multivector(n, &mut rng);
        for op in Product::ALL {
            let r = relative_residual(&a.product(op, &x, &y).unwrap(), &b.product(op, &x, &y).unwrap(), &x, &y);
            prop_assert!(r <= 1e-9, "{:?}: {:e}", op, r);
        }
    }

    #[test]
    fn contraction_adjoint_identities(n in 2usize..=6, seed in any::<u64>()) {
        let mut rng = random::stream(seed, 0);
        let t = random::invertible(n, &mut rng);
        let ti = t.inverse().unwrap();
        let x = random::multivector(n, &mut rng);
        let y = random::multivector(n, &mut rng);
        let lhs = t.adjoint().extend(&x).unwrap().contract_left(&y).unwrap();
        let rhs = ti.extend(&x.contract_left(&t.extend(&y).unwrap()).unwrap()).unwrap();
        prop_assert!(relative_residual(&lhs, &rhs, &x, &y) <= 1e-9);
        let lhs = x.contract_right(&t.adjoint().extend(&y).unwrap()).unwrap();
        let rhs = ti.extend(&t.extend(&x).unwrap().contract_right(&y).unwrap()).unwrap();
        prop_assert!(relative_residual(&lhs, &rhs, &x, &y) <= 1e-9);
    }

    #[test]
    fn vector_chain_transport(n in 2usize..=6, seed in any::<u64>()) {
        let mut rng = random::stream(seed, 0);
        let g = random::any_metric(n, &mut rng);
        let da = g.deformation().unwrap();
        let k = 1 + (seed as usize) % n;
        let vs: Vec<Vec<f64>> = (0..k).map(|_| random::vector(n, &mut rng)).collect();
        let mut direct = Multivector::scalar(n, 1.0).unwrap();
        for v in vs.iter().rev() {
            direct = g.vector_clifford_left(v, &direct).unwrap();
        }
        let golden = da.vector_chain(&vs).unwrap();
        prop_assert!(direct.max_abs_diff(&golden).unwrap() <= 1e-9 * direct.norm_max().max(1.0));
    }

    #[test]
    fn inverse_metric_products(n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = random::stream(seed, 0);
        let g = random::any_metric(n, &mut rng);
        let ginv = g.inverse_metric().unwrap();
        let da = g.deformation().unwrap();
        let x = random::multivector(n, &mut rng);
        let y = random::multivector(n, &mut rng);
        for op in Product::ALL {
            let r = relative_residual(
                &ginv.direct_product(op, &x, &y).unwrap(),
                &da.inverse_product(op, &x, &y).unwrap(),
                &x,
                &y,
            );
            prop_assert!(r <= 1e-9, "{:?}: {:e}", op, r);
        }
    }
}

#[test]
fn report_is_reproducible() {
    let g = MetricExtensor::from_rows(&[vec![1.0, 0.3, 0.0], vec![0.3, -2.0, 0.1], vec![0.0, 0.1, 0.5]]).unwrap();
    let a = verify_golden(&g, 40, 42, 1e-9).unwrap();
    let b = verify_golden(&g, 40, 42, 1e-9).unwrap();
    assert!(a.pass);
    let ra: Vec<f64> = a.identities.iter().map(|i| i.max_residual).collect();
    let rb: Vec<f64> = b.identities.iter().map(|i| i.max_residual).collect();
    assert_eq!(ra, rb);
    let c = verify_golden(&g, 40, 43, 1e-9).unwrap();
    assert_ne!(ra, c.identities.iter().map(|i| i.max_residual).collect::<Vec<_>>());
}

#[test]
fn report_rejects_bad_parameters() {
    let g = MetricExtensor::identity(2).unwrap();
    assert!(matches!(verify_golden(&g, 0, 1, 1e-9), Err(GaError::InvalidParameter(_))));
    assert!(matches!(verify_golden(&g, 5, 1, 0.0), Err(GaError::InvalidParameter(_))));
    assert!(matches!(verify_golden(&g, 5, 1, f64::NAN), Err(GaError::InvalidParameter(_))));
}

#[test]
fn tiny_tolerance_fails_report() {
    let mut rng = random::stream(9, 0);
    let g = random::metric(4, 2, &mut rng);
    let r = verify_golden(&g, 10, 1, 1e-300).unwrap();
    assert!(!r.pass);
}
