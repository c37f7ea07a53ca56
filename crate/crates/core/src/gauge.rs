//! Gauge extensors: factorization `g = h† ∘ η ∘ h` of a metric extensor
//! against an orthogonal metric of the same signature.

use crate::error::{GaError, Result};
use crate::extensor::Extensor;
use crate::metric::MetricExtensor;
use crate::multivector::same_dim;
use crate::ortho::{lorentz_report, OrthoMetric, ORTHOGONAL_TOL};

/// A gauge `h` for `g` relative to `eta`.
///
/// When produced by [`factor_gauge`] the three factors
/// `h = d_σ ∘ d_√|λ| ∘ Θ` are recorded; after a Lorentz twist only the
/// composite is kept.
#[derive(Debug, Clone)]
pub struct GaugeFactorization {
    pub g: MetricExtensor,
    pub eta: OrthoMetric,
    pub sigma: Option<Vec<f64>>,
    /// `Σ σ_k (a·u_k) u_k`.
    pub d_sigma: Option<Extensor>,
    /// `Σ √|λ_k| (a·u_k) u_k`.
    pub d_sqrt: Option<Extensor>,
    /// Orthogonal change of basis sending `v_k ↦ u_k`.
    pub theta: Option<Extensor>,
    pub h: Extensor,
}

impl GaugeFactorization {
    /// `‖h†∘η∘h − g‖_max`.
    pub fn residual(&self) -> f64 {
        reconstruct(&self.h, &self.eta)
            .and_then(|r| r.max_abs_diff(self.g.extensor()))
            .unwrap_or(f64::INFINITY)
    }

    pub fn relative_residual(&self) -> f64 {
        self.residual() / self.g.extensor().norm_max()
    }

    pub fn is_twisted(&self) -> bool {
        self.theta.is_none()
    }
}

/// `h† ∘ η ∘ h`.
pub fn reconstruct(h: &Extensor, eta: &OrthoMetric) -> Result<Extensor> {
    h.adjoint().compose(eta.extensor())?.compose(h)
}

pub fn factor_gauge(g: &MetricExtensor, eta: &OrthoMetric) -> Result<GaugeFactorization> {
    factor_gauge_with_sigma(g, eta, &vec![1.0; g.dim()])
}

/// As [`factor_gauge`] with explicit signs `σ_k ∈ {±1}` (entries are reduced
/// to their sign).
pub fn factor_gauge_with_sigma(
    g: &MetricExtensor,
    eta: &OrthoMetric,
    sigma: &[f64],
) -> Result<GaugeFactorization> {
    let n = g.dim();
    same_dim(n, eta.dim())?;
    same_dim(n, sigma.len())?;
    if g.signature() != eta.signature() {
        return Err(GaError::SignatureMismatch {
            metric: g.signature().as_pair(),
            eta: eta.signature().as_pair(),
        });
    }
    let sigma: Vec<f64> = sigma
        .iter()
        .map(|s| if *s < 0.0 { -1.0 } else { 1.0 })
        .collect();

    let ge = g.eigen();
    let u = eta.eigenvectors();
    let v = &ge.eigenvectors;
    // both spectra are sorted positives first, so index k pairs equal signs
    let sqrt_abs: Vec<f64> = ge.eigenvalues.iter().map(|l| l.abs().sqrt()).collect();

    let d_sigma = Extensor::spectral(&sigma, u)?;
    let d_sqrt = Extensor::spectral(&sqrt_abs, u)?;
    let theta = Extensor::new(u * v.transpose())?;
    let h = d_sigma.compose(&d_sqrt)?.compose(&theta)?;
    if h.is_singular() {
        return Err(GaError::Degenerate(h.scaled_determinant().abs()));
    }

    Ok(GaugeFactorization {
        g: g.clone(),
        eta: eta.clone(),
        sigma: Some(sigma),
        d_sigma: Some(d_sigma),
        d_sqrt: Some(d_sqrt),
        theta: Some(theta),
        h,
    })
}

/// `h′ = Λ ∘ h` for an η-orthogonal `Λ`; `h′` is again a gauge for `g`.
pub fn twist_gauge(f: &GaugeFactorization, lambda: &Extensor) -> Result<GaugeFactorization> {
    let report = lorentz_report(lambda, &f.eta)?;
    if !report.is_lorentz() {
        return Err(GaError::NotLorentz(report.matrix_residual));
    }
    Ok(GaugeFactorization {
        g: f.g.clone(),
        eta: f.eta.clone(),
        sigma: None,
        d_sigma: None,
        d_sqrt: None,
        theta: None,
        h: lambda.compose(&f.h)?,
    })
}

/// `g = h† ∘ η ∘ h` with `h = d_ρ ∘ Φ`, `d_ρ = Σ ρ_k (a·u_k) u_k`: the
/// eigenvalues are `ρ_k²` (k ≤ p) and `−ρ_k²` (k > p) with eigenvectors
/// `Φ†(u_k)`.
pub fn synth_metric(rho: &[f64], phi: &Extensor, eta: &OrthoMetric) -> Result<MetricExtensor> {
    let n = eta.dim();
    same_dim(n, rho.len())?;
    same_dim(n, phi.dim())?;
    if let Some(k) = rho.iter().position(|r| r.abs() <= 1e-12) {
        return Err(GaError::ZeroRho(k));
    }
    let res = phi.orthogonality_residual();
    if res > ORTHOGONAL_TOL {
        return Err(GaError::NotOrthogonal(res));
    }
    let d_rho = Extensor::spectral(rho, eta.eigenvectors())?;
    let h = d_rho.compose(phi)?;
    let g = reconstruct(&h, eta)?;
    let sym = (g.matrix() + g.matrix().transpose()) * 0.5;
    MetricExtensor::from_matrix(sym)
}
