//! Orthogonal metric extensors (`η = η† = η⁻¹`) and η-orthogonal (Lorentz)
//! operators.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{GaError, Result};
use crate::extensor::Extensor;
use crate::metric::{MetricExtensor, Product, Signature};
use crate::multivector::{check_dim, same_dim, Multivector};

/// Tolerance on `‖Λ†∘η∘Λ − η‖_max` and the equivalent characterizations.
pub const LORENTZ_TOL: f64 = 1e-9;
pub const ORTHOGONAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OrthoMetric {
    metric: MetricExtensor,
    diagonal: Option<Vec<f64>>,
}

impl OrthoMetric {
    /// Validates `η = η†`, `η∘η = I` and builds the wrapper.
    pub fn from_extensor(eta: Extensor) -> Result<Self> {
        let sq = eta.compose(&eta)?;
        let residual = sq.max_abs_diff(&Extensor::identity(eta.dim())?)?;
        if residual > ORTHOGONAL_TOL {
            return Err(GaError::NotOrthogonal(residual));
        }
        let metric = MetricExtensor::from_extensor(eta)?;
        let diagonal = metric.extensor().is_diagonal().then(|| {
            (0..metric.dim())
                .map(|i| metric.extensor().entry(i, i))
                .collect()
        });
        Ok(OrthoMetric { metric, diagonal })
    }

    /// `diag(+1 × p, −1 × (n − p))` in the standard basis; `p = 0` allowed.
    pub fn standard(p: usize, n: usize) -> Result<Self> {
        check_dim(n)?;
        if p > n {
            return Err(GaError::IndexOutOfRange { index: p, dim: n });
        }
        let d: Vec<f64> = (0..n).map(|k| if k < p { 1.0 } else { -1.0 }).collect();
        Self::from_extensor(Extensor::diagonal(&d)?)
    }

    pub fn metric(&self) -> &MetricExtensor {
        &self.metric
    }

    pub fn extensor(&self) -> &Extensor {
        self.metric.extensor()
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn signature(&self) -> Signature {
        self.metric.signature()
    }

    /// Diagonal entries when `η` is diagonal in `{b_j}`.
    pub fn diagonal(&self) -> Option<&[f64]> {
        self.diagonal.as_deref()
    }

    /// Euclidean-orthonormal eigenvectors `u_k` as columns, `+1` block first.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.metric.eigen().eigenvectors
    }

    /// `η_{jk} = η(u_j) · u_k`.
    pub fn eigen_table(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            self.metric.eigen().eigenvalues.clone(),
        ))
    }

    /// η-metric product. For a diagonal η all five products reduce to
    /// sign-twisted Euclidean kernels.
    pub fn product(&self, op: Product, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        same_dim(x.dim(), y.dim())?;
        same_dim(self.dim(), x.dim())?;
        let Some(d) = &self.diagonal else {
            return match op {
                Product::Clifford => self.metric.clifford(x, y),
                _ => self.metric.direct_product(op, x, y),
            };
        };
        match op {
            Product::Wedge => x.wedge(y),
            Product::Scalar => {
                let s: f64 = x
                    .coeffs()
                    .iter()
                    .zip(y.coeffs())
                    .enumerate()
                    .map(|(m, (a, b))| blade_sign(d, m) * a * b)
                    .sum();
                Multivector::scalar(x.dim(), s)
            }
            Product::Lcontract => twist(d, x).contract_left(y),
            Product::Rcontract => x.contract_right(&twist(d, y)),
            Product::Clifford => x.clifford_diagonal(y, d),
        }
    }
}

fn blade_sign(d: &[f64], mask: usize) -> f64 {
    crate::blade::indices(mask).fold(1.0, |s, i| s * d[i])
}

fn twist(d: &[f64], x: &Multivector) -> Multivector {
    let coeffs = x
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, c)| c * blade_sign(d, m))
        .collect();
    Multivector::from_coeffs(x.dim(), coeffs).expect("dimension preserved")
}

/// `η_{b_j}(v) = b_j v b_j`, evaluated through the Euclidean Clifford product
/// on each basis vector. `j` is one-based.
pub fn eta_basis_vector(j: usize, n: usize) -> Result<OrthoMetric> {
    check_dim(n)?;
    if j == 0 || j > n {
        return Err(GaError::IndexOutOfRange { index: j, dim: n });
    }
    let bj = Multivector::basis_vector(n, j)?;
    let columns = (1..=n)
        .map(|k| {
            let bk = Multivector::basis_vector(n, k)?;
            Ok(bj.clifford(&bk)?.clifford(&bj)?.vector_part())
        })
        .collect::<Result<Vec<_>>>()?;
    OrthoMetric::from_extensor(Extensor::from_columns(&columns)?)
}

/// `η_b = (−1)^{p+1} η_{b_1} ∘ … ∘ η_{b_p}`: fixes `b_1…b_p`, negates the rest.
pub fn eta_composite(p: usize, n: usize) -> Result<OrthoMetric> {
    check_dim(n)?;
    if p == 0 || p > n {
        return Err(GaError::IndexOutOfRange { index: p, dim: n });
    }
    let mut acc = Extensor::identity(n)?;
    for j in 1..=p {
        acc = acc.compose(eta_basis_vector(j, n)?.extensor())?;
    }
    let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
    OrthoMetric::from_extensor(acc.scale(sign))
}

/// `η = Θ ∘ η_b ∘ Θ†` for an orthogonal `Θ`: eigenvectors `Θ(b_k)`.
pub fn eta_general(theta: &Extensor, p: usize) -> Result<OrthoMetric> {
    let res = theta.orthogonality_residual();
    if res > ORTHOGONAL_TOL {
        return Err(GaError::NotOrthogonal(res));
    }
    let eta_b = eta_composite(p, theta.dim())?;
    let eta = theta.compose(eta_b.extensor())?.compose(&theta.adjoint())?;
    // clean the rounding asymmetry of the product
    let sym = (eta.matrix() + eta.matrix().transpose()) * 0.5;
    OrthoMetric::from_extensor(Extensor::new(sym)?)
}

/// `(−1)^{p+1} Θ̲(b_1…b_p) v Θ̲(b_p…b_1)` evaluated with the Euclidean
/// Clifford product.
pub fn eta_sandwich(theta: &Extensor, p: usize, v: &[f64]) -> Result<Vec<f64>> {
    let n = theta.dim();
    same_dim(n, v.len())?;
    if p == 0 || p > n {
        return Err(GaError::IndexOutOfRange { index: p, dim: n });
    }
    let blade = Multivector::blade(n, (1 << p) - 1)?;
    let left = theta.extend(&blade)?;
    let right = theta.extend(&blade.reverse())?;
    let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
    let out = left.clifford(&Multivector::vector(v)?)?.clifford(&right)?;
    Ok(out.vector_part().into_iter().map(|c| sign * c).collect())
}

/// `Θ(b_j) v Θ(b_j)`, the conjugated single reflection factor (`j` one-based).
pub fn eta_factor(theta: &Extensor, j: usize, v: &[f64]) -> Result<Vec<f64>> {
    let n = theta.dim();
    if j == 0 || j > n {
        return Err(GaError::IndexOutOfRange { index: j, dim: n });
    }
    let u = Multivector::vector(&theta.column(j - 1))?;
    Ok(u.clifford(&Multivector::vector(v)?)?.clifford(&u)?.vector_part())
}

/// Residuals of the three equivalent η-orthogonality characterizations.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzReport {
    /// `max |Λ(v) ·_η Λ(w) − v ·_η w|` over basis pairs and sampled vectors.
    pub scalar_residual: f64,
    /// `‖Λ†(η) − Λ⁻¹‖_max`, infinite if Λ is singular.
    pub adjoint_residual: f64,
    /// `‖Λ†∘η∘Λ − η‖_max`.
    pub matrix_residual: f64,
    pub scalar_ok: bool,
    pub adjoint_ok: bool,
    pub matrix_ok: bool,
}

impl LorentzReport {
    pub fn is_lorentz(&self) -> bool {
        self.matrix_ok
    }

    /// All three characterizations give the same verdict.
    pub fn consistent(&self) -> bool {
        self.scalar_ok == self.matrix_ok && self.adjoint_ok == self.matrix_ok
    }
}

pub fn lorentz_report(lambda: &Extensor, eta: &OrthoMetric) -> Result<LorentzReport> {
    let n = eta.dim();
    same_dim(n, lambda.dim())?;
    let e = eta.extensor();

    let pulled = lambda.adjoint().compose(e)?.compose(lambda)?;
    let matrix_residual = pulled.max_abs_diff(e)?;

    let adjoint_residual = match lambda.inverse() {
        Ok(inv) => eta.metric().metric_adjoint(lambda)?.max_abs_diff(&inv)?,
        Err(_) => f64::INFINITY,
    };

    let eta_dot = |v: &[f64], w: &[f64]| -> Result<f64> {
        let ev = e.apply(v)?;
        Ok(ev.iter().zip(w).map(|(a, b)| a * b).sum())
    };
    let mut probes: Vec<Vec<f64>> = (0..n)
        .map(|k| (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut rng = crate::random::stream(0x004c_6f72_656e_747a, 0);
    for _ in 0..8 {
        probes.push(crate::random::vector(n, &mut rng));
    }
    let mut scalar_residual = 0.0f64;
    for v in &probes {
        let lv = lambda.apply(v)?;
        for w in &probes {
            let lw = lambda.apply(w)?;
            scalar_residual = scalar_residual.max((eta_dot(&lv, &lw)? - eta_dot(v, w)?).abs());
        }
    }

    Ok(LorentzReport {
        scalar_residual,
        adjoint_residual,
        matrix_residual,
        scalar_ok: scalar_residual <= LORENTZ_TOL,
        adjoint_ok: adjoint_residual <= LORENTZ_TOL,
        matrix_ok: matrix_residual <= LORENTZ_TOL,
    })
}

pub fn is_lorentz(lambda: &Extensor, eta: &OrthoMetric) -> Result<bool> {
    Ok(lorentz_report(lambda, eta)?.is_lorentz())
}

/// Cayley transform `Λ = (I − A)⁻¹(I + A)` of `A = η ∘ S` for an
/// antisymmetric `S`; `η ∘ A = S` is antisymmetric, so `Λ` is η-orthogonal.
pub fn cayley_lorentz(eta: &OrthoMetric, antisym: &DMatrix<f64>) -> Result<Extensor> {
    let n = eta.dim();
    same_dim(n, antisym.nrows())?;
    same_dim(n, antisym.ncols())?;
    let a = eta.extensor().matrix() * antisym;
    let id = DMatrix::<f64>::identity(n, n);
    let minus = Extensor::new(&id - &a)?;
    let inv = minus.inverse().map_err(|_| GaError::SingularCayley)?;
    Extensor::new(inv.matrix() * (&id + &a))
}

/// Random η-orthogonal operator from a Cayley transform of a random
/// antisymmetric generator with entries in `[−scale, scale]`.
pub fn random_lorentz<R: Rng + ?Sized>(eta: &OrthoMetric, rng: &mut R) -> Result<Extensor> {
    let n = eta.dim();
    for _ in 0..16 {
        let mut s = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let x = rng.random_range(-0.5..0.5);
                s[(i, j)] = x;
                s[(j, i)] = -x;
            }
        }
        match cayley_lorentz(eta, &s) {
            Ok(l) => return Ok(l),
            Err(GaError::SingularCayley) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GaError::SingularCayley)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(e: &Extensor) -> Vec<f64> {
        (0..e.dim()).map(|i| e.entry(i, i)).collect()
    }

    #[test]
    fn single_reflection_fixes_its_vector() {
        let eta = eta_basis_vector(1, 2).unwrap();
        assert_eq!(eta.extensor().column(0), vec![1.0, 0.0]);
        assert_eq!(eta.extensor().column(1), vec![0.0, -1.0]);
        assert_eq!(eta.signature(), Signature::new(1, 1));
    }

    #[test]
    fn single_reflection_determinant() {
        for n in 2..=6 {
            let expected = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
            for j in 1..=n {
                assert_eq!(eta_basis_vector(j, n).unwrap().extensor().determinant(), expected);
            }
        }
        assert_eq!(eta_basis_vector(2, 4).unwrap().extensor().determinant(), -1.0);
    }

    #[test]
    fn reflections_commute() {
        let n = 4;
        for j in 1..=n {
            for k in 1..=n {
                if j == k {
                    continue;
                }
                let a = eta_basis_vector(j, n).unwrap();
                let b = eta_basis_vector(k, n).unwrap();
                let ab = a.extensor().compose(b.extensor()).unwrap();
                let ba = b.extensor().compose(a.extensor()).unwrap();
                assert_eq!(ab, ba);
            }
        }
    }

    #[test]
    fn composite_examples() {
        let e = eta_composite(1, 4).unwrap();
        assert_eq!(diag(e.extensor()), vec![1.0, -1.0, -1.0, -1.0]);
        assert!(e.extensor().is_diagonal());
        let e2 = eta_composite(2, 4).unwrap();
        assert_eq!(e2.extensor().column(1), vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(e2.extensor().column(2), vec![0.0, 0.0, -1.0, 0.0]);
        assert_eq!(e.extensor().determinant(), -1.0);
        assert_eq!(e2.signature(), Signature::new(2, 2));
    }

    #[test]
    fn composite_range_errors() {
        assert!(matches!(eta_composite(0, 3), Err(GaError::IndexOutOfRange { .. })));
        assert!(matches!(eta_composite(4, 3), Err(GaError::IndexOutOfRange { .. })));
        assert!(matches!(eta_basis_vector(0, 3), Err(GaError::IndexOutOfRange { .. })));
    }

    #[test]
    fn standard_matches_composite_and_allows_negative_definite() {
        for n in 2..=5 {
            for p in 1..=n {
                assert_eq!(
                    OrthoMetric::standard(p, n).unwrap().extensor(),
                    eta_composite(p, n).unwrap().extensor()
                );
            }
        }
        let neg = OrthoMetric::standard(0, 3).unwrap();
        assert_eq!(neg.signature(), Signature::new(0, 3));
    }

    #[test]
    fn general_with_rotation() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let theta = Extensor::from_rows(&[vec![r, -r], vec![r, r]]).unwrap();
        let eta = eta_general(&theta, 1).unwrap();
        // Θ diag(1,-1) Θᵀ for a 45° rotation
        let expected = Extensor::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(eta.extensor().max_abs_diff(&expected).unwrap() < 1e-15);
        assert!(eta.diagonal().is_none());
        let id = eta_general(&Extensor::identity(3).unwrap(), 2).unwrap();
        assert_eq!(id.extensor(), eta_composite(2, 3).unwrap().extensor());
    }

    #[test]
    fn general_rejects_non_orthogonal() {
        let t = Extensor::diagonal(&[2.0, 1.0]).unwrap();
        assert!(matches!(eta_general(&t, 1), Err(GaError::NotOrthogonal(_))));
        assert!(matches!(
            OrthoMetric::from_extensor(Extensor::diagonal(&[2.0, -1.0]).unwrap()),
            Err(GaError::NotOrthogonal(_))
        ));
    }

    #[test]
    fn lorentz_examples() {
        let eta = OrthoMetric::standard(1, 2).unwrap();
        let id = Extensor::identity(2).unwrap();
        let r = lorentz_report(&id, &eta).unwrap();
        assert!(r.is_lorentz() && r.consistent());

        let a: f64 = 0.3;
        let boost =
            Extensor::from_rows(&[vec![a.cosh(), a.sinh()], vec![a.sinh(), a.cosh()]]).unwrap();
        let r = lorentz_report(&boost, &eta).unwrap();
        assert!(r.is_lorentz() && r.consistent(), "{r:?}");

        let scale = Extensor::diagonal(&[2.0, 1.0]).unwrap();
        let r = lorentz_report(&scale, &eta).unwrap();
        assert!(!r.is_lorentz() && r.consistent(), "{r:?}");
    }

    #[test]
    fn singular_operator_is_not_lorentz() {
        let eta = OrthoMetric::standard(1, 2).unwrap();
        let s = Extensor::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let r = lorentz_report(&s, &eta).unwrap();
        assert!(!r.is_lorentz() && r.consistent());
        assert!(r.adjoint_residual.is_infinite());
    }

    #[test]
    fn cayley_of_zero_is_identity() {
        let eta = OrthoMetric::standard(2, 3).unwrap();
        let l = cayley_lorentz(&eta, &DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(l, Extensor::identity(3).unwrap());
    }

    #[test]
    fn random_lorentz_passes() {
        let mut rng = crate::random::stream(7, 0);
        for n in 2..=4 {
            for p in 1..=n {
                let eta = OrthoMetric::standard(p, n).unwrap();
                let l = random_lorentz(&eta, &mut rng).unwrap();
                assert!(is_lorentz(&l, &eta).unwrap());
                assert!((l.determinant().abs() - 1.0).abs() < 1e-9);
            }
        }
    }
}
