//! Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
//! Exits non-zero if any criterion fails.

mod common;

use std::process::Command;
use std::time::Instant;

use common::{blade, max_diff, CayleyTable};
use gauge_ga::frame::tensor2_to_coordinates;
use gauge_ga::golden::relative_residual;
use gauge_ga::ortho::{eta_sandwich, lorentz_report, random_lorentz};
use gauge_ga::{
    eta_basis_vector, eta_composite, eta_general, factor_gauge, random, reciprocal, reconstruct,
    tetrad_bases, tetrad_components, transform_tensor2, transform_vector, DeformedAlgebra, Extensor,
    MetricExtensor, Multivector, OrthoMetric, Product, Variance,
};
use nalgebra::DMatrix;
use rand::Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn golden_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_inverse = 0.0f64;
    for n in 2..=6 {
        let mut rng = random::stream(1, n as u64);
        for _ in 0..100 {
            let g = random::any_metric(n, &mut rng);
            let eta = eta_composite(g.signature().p, n).unwrap();
            let da = DeformedAlgebra::from_metric(g.clone(), eta).unwrap();
            let ginv = g.inverse_metric().unwrap();
            let x = random::multivector(n, &mut rng);
            let y = random::multivector(n, &mut rng);
            for op in Product::ALL {
                let direct = g.direct_product(op, &x, &y).unwrap();
                let golden = da.product(op, &x, &y).unwrap();
                worst = worst.max(relative_residual(&direct, &golden, &x, &y));
                let direct = ginv.direct_product(op, &x, &y).unwrap();
                let golden = da.inverse_product(op, &x, &y).unwrap();
                worst_inverse = worst_inverse.max(relative_residual(&direct, &golden, &x, &y));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 1e-9 && worst_inverse <= 1e-9 && secs < 60.0,
        detail: format!("max relative residual {worst:.2e}, g-inverse products {worst_inverse:.2e}, {secs:.2} s"),
    }
}

fn reconstruction() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=6 {
        let mut rng = random::stream(2, n as u64);
        for _ in 0..100 {
            let g = random::any_metric(n, &mut rng);
            let eta = eta_composite(g.signature().p, n).unwrap();
            let f = factor_gauge(&g, &eta).unwrap();
            worst = worst.max(f.residual() / g.extensor().norm_max());
        }
    }
    let g = MetricExtensor::diagonal(&[2.0, -3.0]).unwrap();
    let f = factor_gauge(&g, &OrthoMetric::standard(1, 2).unwrap()).unwrap();
    let worked = f
        .h
        .max_abs_diff(&Extensor::diagonal(&[2f64.sqrt(), 3f64.sqrt()]).unwrap())
        .unwrap();
    Outcome {
        pass: worst <= 1e-9 && worked <= 1e-12,
        detail: format!("max relative reconstruction residual {worst:.2e}, worked case {worked:.2e}"),
    }
}

fn gauge_freedom() -> Outcome {
    let mut recon = 0.0f64;
    let mut products = 0.0f64;
    let mut rng = random::stream(3, 0);
    for k in 0..20 {
        let n = 2 + k % 5;
        let g = random::any_metric(n, &mut rng);
        let eta = eta_composite(g.signature().p, n).unwrap();
        let f = factor_gauge(&g, &eta).unwrap();
        let lambda = random_lorentz(&eta, &mut rng).unwrap();
        let h2 = lambda.compose(&f.h).unwrap();
        let r = reconstruct(&h2, &eta).unwrap().max_abs_diff(g.extensor()).unwrap();
        recon = recon.max(r / g.extensor().norm_max());
        let a = DeformedAlgebra::from_factorization(&f).unwrap();
        let b = DeformedAlgebra::new(h2, eta, g.clone()).unwrap();
        let x = random::multivector(n, &mut rng);
        let y = random::multivector(n, &mut rng);
        for op in Product::ALL {
            let pa = a.product(op, &x, &y).unwrap();
            let pb = b.product(op, &x, &y).unwrap();
            products = products.max(relative_residual(&pa, &pb, &x, &y));
        }
    }
    Outcome {
        pass: recon <= 1e-9 && products <= 1e-9,
        detail: format!("twisted reconstruction {recon:.2e}, product disagreement {products:.2e}"),
    }
}

fn cayley_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=4 {
        let mut rng = random::stream(4, n as u64);
        for _ in 0..10 {
            let g = random::any_metric(n, &mut rng);
            let table = CayleyTable::new(g.extensor().matrix());
            for a in 0..1 << n {
                for c in 0..1 << n {
                    let got = g.clifford(&blade(n, a), &blade(n, c)).unwrap();
                    worst = worst.max(max_diff(got.coeffs(), &table.product(a, c)));
                }
            }
        }
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max table entry difference {worst:.2e}"),
    }
}

fn metric_adjoint() -> Outcome {
    let mut worst = 0.0f64;
    let mut rng = random::stream(5, 0);
    for _ in 0..100 {
        let n = rng.random_range(2..=6);
        let t = random::invertible(n, &mut rng);
        let g = random::any_metric(n, &mut rng);
        let x = random::vector(n, &mut rng);
        let y = random::vector(n, &mut rng);
        let adj = g.metric_adjoint(&t).unwrap();
        let v = |c: Vec<f64>| Multivector::vector(&c).unwrap();
        let lhs = g.scalar(&v(t.apply(&x).unwrap()), &v(y.clone())).unwrap();
        let rhs = g.scalar(&v(x.clone()), &v(adj.apply(&y).unwrap())).unwrap();
        worst = worst.max((lhs - rhs).abs());
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max |t(x)·y - x·t†(y)| {worst:.2e}"),
    }
}

fn eta_defect(eta: &OrthoMetric, p: usize) -> f64 {
    let n = eta.dim();
    let m = eta.extensor();
    let sym = m.max_abs_diff(&m.adjoint()).unwrap();
    let inv = m.max_abs_diff(&m.inverse().unwrap()).unwrap();
    let eig = eta
        .metric()
        .eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, l| a.max((l.abs() - 1.0).abs()));
    let det = if (n - p).is_multiple_of(2) { 1.0 } else { -1.0 };
    let sig = if eta.signature().as_pair() == (p, n - p) { 0.0 } else { 1.0 };
    sym.max(inv).max(eig).max((m.determinant() - det).abs()).max(sig)
}

fn orthogonal_metrics() -> Outcome {
    let mut constructors = 0.0f64;
    let mut sandwich = 0.0f64;
    for n in 2..=6 {
        let mut rng = random::stream(6, n as u64);
        for j in 1..=n {
            constructors = constructors.max(eta_defect(&eta_basis_vector(j, n).unwrap(), 1));
        }
        for p in 1..=n {
            constructors = constructors.max(eta_defect(&eta_composite(p, n).unwrap(), p));
        }
        for p in 0..=n {
            constructors = constructors.max(eta_defect(&OrthoMetric::standard(p, n).unwrap(), p));
        }
        for _ in 0..20 {
            let theta = random::orthogonal(n, &mut rng);
            let p = rng.random_range(1..=n);
            let eta = eta_general(&theta, p).unwrap();
            constructors = constructors.max(eta_defect(&eta, p));
            for k in 0..n {
                let mut b = vec![0.0; n];
                b[k] = 1.0;
                let s = eta_sandwich(&theta, p, &b).unwrap();
                let m = eta.extensor().apply(&b).unwrap();
                sandwich = sandwich.max(max_diff(&s, &m));
            }
        }
    }
    Outcome {
        pass: constructors <= 1e-9 && sandwich <= 1e-9,
        detail: format!("constructor defect {constructors:.2e}, sandwich vs matrix {sandwich:.2e}"),
    }
}

fn tetrads() -> Outcome {
    let (mut tb, mut inverse, mut constancy, mut routes, mut round) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in 2..=4 {
        let mut rng = random::stream(7, n as u64);
        for _ in 0..50 {
            let g = random::any_metric(n, &mut rng);
            let eta = OrthoMetric::standard(g.signature().p, n).unwrap();
            let h = factor_gauge(&g, &eta).unwrap().h;
            let tf = tetrad_bases(&h, &eta).unwrap();
            tb = tb.max(tf.lower_residual).max(tf.upper_residual);
            let mut first: Option<DMatrix<f64>> = None;
            for _ in 0..3 {
                let coord = reciprocal(&random::frame_vectors(n, &mut rng)).unwrap();
                let c = tetrad_components(&tf, &coord).unwrap();
                inverse = inverse.max(c.checks.mutual_inverse);
                constancy = constancy.max(max_abs(&(&c.g_tetrad_lower - &tf.eta_lower)));
                match &first {
                    Some(m) => constancy = constancy.max(max_abs(&(&c.g_tetrad_lower - m))),
                    None => first = Some(c.g_tetrad_lower.clone()),
                }
                let v = transform_vector(&c, &random::vector(n, &mut rng)).unwrap();
                routes = routes.max(v.route_residual);
                let t = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
                for variance in [Variance::Covariant, Variance::Contravariant] {
                    let there = transform_tensor2(&c, &t, variance).unwrap();
                    let back = tensor2_to_coordinates(&c, &there, variance).unwrap();
                    round = round.max(max_abs(&(back - &t)));
                }
            }
        }
    }
    Outcome {
        pass: tb <= 1e-9 && inverse <= 1e-9 && constancy <= 1e-9 && routes <= 1e-10 && round <= 1e-9,
        detail: format!(
            "tetrad bases {tb:.2e}, mutual inverse {inverse:.2e}, tetrad metric constancy {constancy:.2e}, vector routes {routes:.2e}, tensor round trip {round:.2e}"
        ),
    }
}

fn lorentz() -> Outcome {
    let mut failures = 0usize;
    let mut disagreements = 0usize;
    let mut worst = 0.0f64;
    for n in 2..=4 {
        let mut rng = random::stream(8, n as u64);
        for _ in 0..100 {
            let p = rng.random_range(1..=n);
            let eta = eta_composite(p, n).unwrap();
            let lambda = random_lorentz(&eta, &mut rng).unwrap();
            let r = lorentz_report(&lambda, &eta).unwrap();
            worst = worst.max(r.scalar_residual).max(r.adjoint_residual).max(r.matrix_residual);
            if !r.is_lorentz() {
                failures += 1;
            }
            if !r.consistent() {
                disagreements += 1;
            }
        }
    }
    Outcome {
        pass: failures == 0 && disagreements == 0,
        detail: format!("{failures} rejected, {disagreements} disagreements, max residual {worst:.2e}"),
    }
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    std::fs::write(&g, r#"{"n":4,"matrix":[[1,0.2,0,0],[0.2,-1,0.1,0],[0,0.1,-2,0.3],[0,0,0.3,0.5]]}"#).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n":3,"matrix":[[1,0,0],[0,1],[0,0,1]]}"#).unwrap();
    let exe = env!("CARGO_BIN_EXE_gauge-ga");
    let verify = || {
        Command::new(exe)
            .args(["verify", "--metric", g.to_str().unwrap(), "--seed", "42"])
            .output()
            .unwrap()
    };
    let a = verify();
    let b = verify();
    let identical = a.status.code() == Some(0) && !a.stdout.is_empty() && a.stdout == b.stdout;
    let bad_run = Command::new(exe)
        .args(["verify", "--metric", bad.to_str().unwrap(), "--seed", "42"])
        .output()
        .unwrap();
    let msg = String::from_utf8_lossy(&bad_run.stderr);
    let located = bad_run.status.code() == Some(2) && msg.contains("bad.json") && msg.contains("matrix[1]");
    Outcome {
        pass: identical && located,
        detail: format!(
            "byte-identical reports: {identical}; malformed input exit {:?}, message `{}`",
            bad_run.status.code(),
            msg.trim()
        ),
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden-formula equivalence", golden_equivalence),
        ("gauge reconstruction", reconstruction),
        ("gauge non-uniqueness", gauge_freedom),
        ("Clifford oracle equivalence", cayley_oracle),
        ("metric adjoint", metric_adjoint),
        ("orthogonal metrics", orthogonal_metrics),
        ("tetrads", tetrads),
        ("Lorentz predicate", lorentz),
        ("CLI determinism", cli_determinism),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.pass;
        println!(
            "criterion {} {name}: {} ({})",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
