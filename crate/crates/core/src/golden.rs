//! Metric products evaluated by transport through a gauge.
//!
//! For a gauge `h` of `g` (so `g = h† ∘ η ∘ h`) every product satisfies
//! `h̲(X *_g Y) = h̲(X) *_η h̲(Y)`, and for the reciprocal metric
//! `h̲*(X *_{g⁻¹} Y) = h̲*(X) *_η h̲*(Y)`. A [`DeformedAlgebra`] precomputes the
//! outermorphism tables of `h`, `h⁻¹`, `h*` and `h†` so that each product
//! costs two table applications, one η-product and one inverse application.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GaError, Result};
use crate::extensor::Extensor;
use crate::gauge::{factor_gauge, reconstruct, GaugeFactorization};
use crate::metric::{MetricExtensor, Product};
use crate::multivector::{same_dim, Multivector};
use crate::ortho::{random_lorentz, OrthoMetric};
use crate::random;

#[derive(Debug, Clone)]
pub struct DeformedAlgebra {
    h: Extensor,
    h_inv: Extensor,
    h_star: Extensor,
    h_adj: Extensor,
    eta: OrthoMetric,
    g: MetricExtensor,
    residual: f64,
}

impl DeformedAlgebra {
    /// Builds the algebra for a gauge `h` of `g`.
    pub fn new(h: Extensor, eta: OrthoMetric, g: MetricExtensor) -> Result<Self> {
        same_dim(h.dim(), eta.dim())?;
        same_dim(h.dim(), g.dim())?;
        let h_inv = h.inverse()?;
        let h_adj = h.adjoint();
        let h_star = h_inv.adjoint();
        let residual = reconstruct(&h, &eta)?.max_abs_diff(g.extensor())?;
        // force the tables now; later products only read them
        for t in [&h, &h_inv, &h_star, &h_adj] {
            t.outermorphism();
        }
        Ok(DeformedAlgebra {
            h,
            h_inv,
            h_star,
            h_adj,
            eta,
            g,
            residual,
        })
    }

    /// Gauge-only constructor: `g` is taken to be `h† ∘ η ∘ h`.
    pub fn from_gauge(h: Extensor, eta: OrthoMetric) -> Result<Self> {
        let g = reconstruct(&h, &eta)?;
        let sym = (g.matrix() + g.matrix().transpose()) * 0.5;
        let g = MetricExtensor::from_matrix(sym)?;
        Self::new(h, eta, g)
    }

    pub fn from_factorization(f: &GaugeFactorization) -> Result<Self> {
        Self::new(f.h.clone(), f.eta.clone(), f.g.clone())
    }

    pub fn from_metric(g: MetricExtensor, eta: OrthoMetric) -> Result<Self> {
        let f = factor_gauge(&g, &eta)?;
        Self::new(f.h, eta, g)
    }

    pub fn h(&self) -> &Extensor {
        &self.h
    }

    pub fn h_inverse(&self) -> &Extensor {
        &self.h_inv
    }

    pub fn h_star(&self) -> &Extensor {
        &self.h_star
    }

    pub fn eta(&self) -> &OrthoMetric {
        &self.eta
    }

    pub fn metric(&self) -> &MetricExtensor {
        &self.g
    }

    /// `‖h†∘η∘h − g‖_max` measured at construction.
    pub fn reconstruction_residual(&self) -> f64 {
        self.residual
    }

    /// `h̲(X)`.
    pub fn transport(&self, x: &Multivector) -> Result<Multivector> {
        self.h.extend(x)
    }

    /// `h̲⁻¹(X)`.
    pub fn transport_back(&self, x: &Multivector) -> Result<Multivector> {
        self.h_inv.extend(x)
    }

    /// `X *_g Y = h̲⁻¹[h̲(X) *_η h̲(Y)]`.
    pub fn product(&self, op: Product, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        same_dim(x.dim(), y.dim())?;
        let hx = self.h.extend(x)?;
        let hy = self.h.extend(y)?;
        let z = self.eta.product(op, &hx, &hy)?;
        self.h_inv.extend(&z)
    }

    /// `X *_{g⁻¹} Y = h̲†[h̲*(X) *_η h̲*(Y)]`, using `(h*)⁻¹ = h†`.
    pub fn inverse_product(&self, op: Product, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        same_dim(x.dim(), y.dim())?;
        let hx = self.h_star.extend(x)?;
        let hy = self.h_star.extend(y)?;
        let z = self.eta.product(op, &hx, &hy)?;
        self.h_adj.extend(&z)
    }

    /// Chain `v_1 *_g … *_g v_k = h̲⁻¹[h(v_1) *_η … *_η h(v_k)]`.
    pub fn vector_chain(&self, vectors: &[Vec<f64>]) -> Result<Multivector> {
        let n = self.h.dim();
        let mut acc = Multivector::scalar(n, 1.0)?;
        for v in vectors {
            let hv = Multivector::vector(&self.h.apply(v)?)?;
            acc = self.eta.product(Product::Clifford, &acc, &hv)?;
        }
        self.h_inv.extend(&acc)
    }
}

/// Relative residual between two evaluations of a bilinear product of `x`
/// and `y`. The denominator is floored at `‖X‖‖Y‖` so that vanishing results
/// compare on the natural scale of the inputs.
pub fn relative_residual(a: &Multivector, b: &Multivector, x: &Multivector, y: &Multivector) -> f64 {
    let diff = a.max_abs_diff(b).unwrap_or(f64::INFINITY);
    let scale = a
        .norm_max()
        .max(b.norm_max())
        .max(x.norm_max() * y.norm_max())
        .max(f64::MIN_POSITIVE);
    diff / scale
}

/// One checked identity of the transport report.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityResidual {
    pub identity: &'static str,
    pub description: &'static str,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenReport {
    pub n: usize,
    pub signature: [usize; 2],
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub reconstruction_residual: f64,
    pub identities: Vec<IdentityResidual>,
    pub pass: bool,
}

const IDENTITIES: [(&str, &str); 19] = [
    ("wedge_transport", "X ∧ Y = h⁻¹[h(X) ∧ h(Y)]"),
    ("scalar_transport", "X ·g Y = h⁻¹[h(X) ·η h(Y)]"),
    ("left_contraction_transport", "X ⌟g Y = h⁻¹[h(X) ⌟η h(Y)]"),
    ("right_contraction_transport", "X ⌞g Y = h⁻¹[h(X) ⌞η h(Y)]"),
    ("clifford_transport", "X *g Y = h⁻¹[h(X) *η h(Y)]"),
    ("scalar_left_clifford", "α *g X = h⁻¹[h(α) *η h(X)]"),
    ("scalar_right_clifford", "X *g α = h⁻¹[h(X) *η h(α)]"),
    ("vector_left_clifford", "v *g X = h⁻¹[h(v) *η h(X)]"),
    ("vector_right_clifford", "X *g v = h⁻¹[h(X) *η h(v)]"),
    ("vector_chain", "v1 *g … *g vk = h⁻¹[h(v1) *η … *η h(vk)]"),
    ("vector_chain_times_multivector", "(v1 *g … *g vk) *g X = h⁻¹[h(v1 … vk) *η h(X)]"),
    ("blade_expansion", "X = Σ c_S b_s1 *g … *g b_sk"),
    ("adjoint_left_contraction", "t†(X) ⌟ Y = t⁻¹[X ⌟ t(Y)]"),
    ("adjoint_right_contraction", "X ⌞ t†(Y) = t⁻¹[t(X) ⌞ Y]"),
    ("inverse_metric_wedge", "h*(X ∧ Y) = h*(X) ∧ h*(Y)"),
    ("inverse_metric_scalar", "h*(X ·g⁻¹ Y) = h*(X) ·η h*(Y)"),
    ("inverse_metric_left_contraction", "h*(X ⌟g⁻¹ Y) = h*(X) ⌟η h*(Y)"),
    ("inverse_metric_right_contraction", "h*(X ⌞g⁻¹ Y) = h*(X) ⌞η h*(Y)"),
    ("inverse_metric_clifford", "h*(X *g⁻¹ Y) = h*(X) *η h*(Y)"),
];

const GAUGE_INDEPENDENCE: (&str, &str) = (
    "gauge_independence",
    "products agree for gauges h and Λ∘h",
);

/// Per-trial residuals, in the order of `IDENTITIES` followed by gauge
/// independence.
fn trial_residuals(
    da: &DeformedAlgebra,
    twisted: &DeformedAlgebra,
    ginv: &MetricExtensor,
    seed: u64,
    trial: u64,
) -> Result<Vec<f64>> {
    let g = da.metric();
    let n = g.dim();
    let mut rng = random::stream(seed, trial);
    let x = random::multivector(n, &mut rng);
    let y = random::multivector(n, &mut rng);
    let mut out = Vec::with_capacity(IDENTITIES.len() + 1);

    for op in Product::ALL {
        let direct = g.direct_product(op, &x, &y)?;
        let golden = da.product(op, &x, &y)?;
        out.push(relative_residual(&direct, &golden, &x, &y));
    }

    let alpha = Multivector::scalar(n, rng.random_range(-2.0..2.0))?;
    let ax = x.scale(alpha.scalar_part());
    out.push(relative_residual(&ax, &da.product(Product::Clifford, &alpha, &x)?, &alpha, &x));
    out.push(relative_residual(&ax, &da.product(Product::Clifford, &x, &alpha)?, &x, &alpha));

    let v = random::vector(n, &mut rng);
    let vm = Multivector::vector(&v)?;
    let direct = g.vector_clifford_left(&v, &x)?;
    let golden = da.product(Product::Clifford, &vm, &x)?;
    out.push(relative_residual(&direct, &golden, &vm, &x));
    let direct = g.vector_clifford_right(&x, &v)?;
    let golden = da.product(Product::Clifford, &x, &vm)?;
    out.push(relative_residual(&direct, &golden, &x, &vm));

    let k = rng.random_range(1..=n);
    let vs: Vec<Vec<f64>> = (0..k).map(|_| random::vector(n, &mut rng)).collect();
    let one = Multivector::scalar(n, 1.0)?;
    let mut chain = one.clone();
    for v in vs.iter().rev() {
        chain = g.vector_clifford_left(v, &chain)?;
    }
    let chain_norm = vs.iter().fold(1.0, |acc, v| {
        acc * v.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    });
    let chain_scale = Multivector::scalar(n, chain_norm)?;
    out.push(relative_residual(&chain, &da.vector_chain(&vs)?, &chain_scale, &one));

    let mut direct = x.clone();
    for v in vs.iter().rev() {
        direct = g.vector_clifford_left(v, &direct)?;
    }
    let golden = da.product(Product::Clifford, &chain, &x)?;
    out.push(relative_residual(&direct, &golden, &chain, &x));

    let w = g.monomial_coefficients(&x)?;
    let mut rebuilt = Multivector::zero(n)?;
    for (s, &ws) in w.iter().enumerate() {
        if ws == 0.0 {
            continue;
        }
        let factors: Vec<Vec<f64>> = crate::blade::indices(s)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        rebuilt += &da.vector_chain(&factors)?.scale(ws);
    }
    out.push(relative_residual(&x, &rebuilt, &x, &one));

    let t = random::invertible(n, &mut rng);
    let t_inv = t.inverse()?;
    let lhs = t.adjoint().extend(&x)?.contract_left(&y)?;
    let rhs = t_inv.extend(&x.contract_left(&t.extend(&y)?)?)?;
    out.push(relative_residual(&lhs, &rhs, &x, &y));
    let lhs = x.contract_right(&t.adjoint().extend(&y)?)?;
    let rhs = t_inv.extend(&t.extend(&x)?.contract_right(&y)?)?;
    out.push(relative_residual(&lhs, &rhs, &x, &y));

    // g⁻¹ products run at the size of h*(X), h*(Y), which dwarfs X, Y when g
    // is nearly degenerate
    let hx = da.h_star().extend(&x)?;
    let hy = da.h_star().extend(&y)?;
    for op in Product::ALL {
        let direct = ginv.direct_product(op, &x, &y)?;
        let golden = da.inverse_product(op, &x, &y)?;
        let r = relative_residual(&direct, &golden, &x, &y);
        out.push(r.min(relative_residual(&direct, &golden, &hx, &hy)));
    }

    let mut worst = 0.0f64;
    for op in Product::ALL {
        let a = da.product(op, &x, &y)?;
        let b = twisted.product(op, &x, &y)?;
        worst = worst.max(relative_residual(&a, &b, &x, &y));
    }
    out.push(worst);
    Ok(out)
}

/// Checks every transport identity on `trials` random multivector pairs.
///
/// Trial `i` draws from the ChaCha stream `(seed, i + 1)`; stream 0 of the
/// same seed supplies the Lorentz twist used for the gauge-independence row.
/// Trials run in parallel and the report is a max-reduction, so it does not
/// depend on scheduling.
pub fn verify_golden(g: &MetricExtensor, trials: usize, seed: u64, tol: f64) -> Result<GoldenReport> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(GaError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if trials == 0 {
        return Err(GaError::InvalidParameter("trials must be at least 1".into()));
    }
    let n = g.dim();
    let eta = OrthoMetric::standard(g.signature().p, n)?;
    let f = factor_gauge(g, &eta)?;
    let da = DeformedAlgebra::from_factorization(&f)?;
    let mut rng = random::stream(seed, 0);
    let lambda = random_lorentz(&eta, &mut rng)?;
    let twisted = DeformedAlgebra::new(lambda.compose(&f.h)?, eta.clone(), g.clone())?;
    let ginv = g.inverse_metric()?;

    let per_trial: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| trial_residuals(&da, &twisted, &ginv, seed, i + 1))
        .collect::<Result<Vec<_>>>()?;

    let width = IDENTITIES.len() + 1;
    let mut worst = vec![0.0f64; width];
    for row in &per_trial {
        for (w, r) in worst.iter_mut().zip(row) {
            *w = if r.is_nan() { f64::INFINITY } else { w.max(*r) };
        }
    }

    let identities: Vec<IdentityResidual> = IDENTITIES
        .iter()
        .chain(std::iter::once(&GAUGE_INDEPENDENCE))
        .zip(&worst)
        .map(|(&(identity, description), &max_residual)| IdentityResidual {
            identity,
            description,
            max_residual,
            pass: max_residual <= tol,
        })
        .collect();
    let reconstruction_residual = f.residual() / g.extensor().norm_max();
    let pass = identities.iter().all(|r| r.pass) && reconstruction_residual <= tol;
    Ok(GoldenReport {
        n,
        signature: [g.signature().p, g.signature().q],
        trials,
        seed,
        tolerance: tol,
        reconstruction_residual,
        identities,
        pass,
    })
}
