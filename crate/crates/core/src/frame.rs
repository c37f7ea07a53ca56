//! Reciprocal frames, their deformations by extensors, gauge bases, tetrad
//! bases and tetrad components of vectors and rank-2 tensors.
//!
//! Frames store their vectors as matrix columns in the orthonormal basis.
//! Component tables are indexed `[row, column]` = `[first index, second
//! index]`: e.g. `lower_upper[(α, i)] = ε_α · ∂^i`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GaError, Result};
use crate::extensor::{Extensor, SINGULAR_TOL};
use crate::gauge::reconstruct;
use crate::metric::{MetricExtensor, Product};
use crate::multivector::{check_dim, same_dim};
use crate::ortho::OrthoMetric;
use crate::random;

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    max_abs(&(a - b))
}

/// An ordered basis `{e_k}` with its Euclidean reciprocal `{e^k}`,
/// `e_k · e^l = δ_k^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    vectors: DMatrix<f64>,
    reciprocal: DMatrix<f64>,
}

impl Frame {
    /// Frame whose `k`-th vector is column `k` of `vectors`.
    pub fn from_matrix(vectors: DMatrix<f64>) -> Result<Frame> {
        let t = Extensor::new(vectors)?;
        let sd = t.scaled_determinant();
        if sd.abs() <= SINGULAR_TOL {
            return Err(GaError::DegenerateBasis(sd.abs()));
        }
        let reciprocal = t.adjoint_inverse()?.matrix().clone();
        Ok(Frame {
            vectors: t.matrix().clone(),
            reciprocal,
        })
    }

    pub fn standard(n: usize) -> Result<Frame> {
        check_dim(n)?;
        Self::from_matrix(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn reciprocal(&self) -> &DMatrix<f64> {
        &self.reciprocal
    }

    /// `e_k`, zero-based.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k).iter().copied().collect()
    }

    /// `e^k`, zero-based.
    pub fn reciprocal_vector(&self, k: usize) -> Vec<f64> {
        self.reciprocal.column(k).iter().copied().collect()
    }

    /// `max |e_k · e^l − δ_k^l|`.
    pub fn duality_residual(&self) -> f64 {
        let n = self.dim();
        diff(
            &(self.vectors.transpose() * &self.reciprocal),
            &DMatrix::identity(n, n),
        )
    }
}

/// Builds the frame of `vectors` (each one basis vector) and its reciprocal.
pub fn reciprocal(vectors: &[Vec<f64>]) -> Result<Frame> {
    let n = vectors.len();
    check_dim(n)?;
    for v in vectors {
        same_dim(n, v.len())?;
    }
    Frame::from_matrix(DMatrix::from_fn(n, n, |i, j| vectors[j][i]))
}

/// `{λ(e_k)}` with reciprocal `{λ*(e^k)}`.
pub fn deform_frame(lambda: &Extensor, f: &Frame) -> Result<Frame> {
    same_dim(lambda.dim(), f.dim())?;
    let star = lambda.adjoint_inverse()?;
    Ok(Frame {
        vectors: lambda.matrix() * &f.vectors,
        reciprocal: star.matrix() * &f.reciprocal,
    })
}

/// Gauge-deformed frame `{h(e_k)}`, `{h*(e^k)}` with its consistency checks.
#[derive(Debug, Clone)]
pub struct GaugeBases {
    pub frame: Frame,
    /// `g_jk = g(e_j) · e_k`.
    pub metric_table: DMatrix<f64>,
    /// `g^jk = g⁻¹(e^j) · e^k`.
    pub inverse_metric_table: DMatrix<f64>,
    /// `max |h(e_j) ·η h(e_k) − g_jk|`.
    pub lower_residual: f64,
    /// `max |h*(e^j) ·η h*(e^k) − g^jk|`.
    pub upper_residual: f64,
    /// `max |[g_jk][g^kl] − δ|`.
    pub inverse_table_residual: f64,
    /// Relative residual of `X ·g Y = h(X) ·η h(Y)` on sampled multivectors.
    pub scalar_transport_residual: f64,
    /// Relative residual of `X ·g⁻¹ Y = h*(X) ·η h*(Y)` on sampled multivectors.
    pub inverse_scalar_transport_residual: f64,
}

impl GaugeBases {
    pub fn max_residual(&self) -> f64 {
        [
            self.lower_residual,
            self.upper_residual,
            self.inverse_table_residual,
            self.scalar_transport_residual,
            self.inverse_scalar_transport_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn gauge_bases(h: &Extensor, f: &Frame, eta: &OrthoMetric) -> Result<GaugeBases> {
    let n = f.dim();
    same_dim(n, h.dim())?;
    same_dim(n, eta.dim())?;
    let g = symmetric_metric(h, eta)?;
    let gm = g.extensor().matrix();
    let gi = g.inverse_extensor().matrix();
    let em = eta.extensor().matrix();

    let frame = deform_frame(h, f)?;
    let metric_table = f.vectors.transpose() * gm * &f.vectors;
    let inverse_metric_table = f.reciprocal.transpose() * gi * &f.reciprocal;
    let lower = frame.vectors.transpose() * em * &frame.vectors;
    let upper = frame.reciprocal.transpose() * em * &frame.reciprocal;

    let mut rng = random::stream(0x0067_6175_6765, 0);
    let h_star = h.adjoint_inverse()?;
    let mut fwd = 0.0f64;
    let mut inv = 0.0f64;
    for _ in 0..8 {
        let x = random::multivector(n, &mut rng);
        let y = random::multivector(n, &mut rng);
        let scale = x.norm_max() * y.norm_max();
        let direct = g.scalar(&x, &y)?;
        let moved = eta.product(Product::Scalar, &h.extend(&x)?, &h.extend(&y)?)?;
        fwd = fwd.max((direct - moved.scalar_part()).abs() / scale.max(direct.abs()));
        let direct = g.inverse_extensor().extend(&x)?.dot(&y)?;
        let moved = eta.product(Product::Scalar, &h_star.extend(&x)?, &h_star.extend(&y)?)?;
        inv = inv.max((direct - moved.scalar_part()).abs() / scale.max(direct.abs()));
    }

    Ok(GaugeBases {
        lower_residual: diff(&lower, &metric_table),
        upper_residual: diff(&upper, &inverse_metric_table),
        inverse_table_residual: diff(
            &(&metric_table * &inverse_metric_table),
            &DMatrix::identity(n, n),
        ),
        scalar_transport_residual: fwd,
        inverse_scalar_transport_residual: inv,
        frame,
        metric_table,
        inverse_metric_table,
    })
}

fn symmetric_metric(h: &Extensor, eta: &OrthoMetric) -> Result<MetricExtensor> {
    let g = reconstruct(h, eta)?;
    MetricExtensor::from_matrix((g.matrix() + g.matrix().transpose()) * 0.5)
}

/// Tetrad bases `ε_α = h⁻¹(e_α)`, `ε^α = h†(e^α)` for a gauge `h`.
#[derive(Debug, Clone)]
pub struct TetradFrame {
    /// `{ε_α}` and `{ε^α}`.
    pub frame: Frame,
    /// The reference pair `{e_α}`, `{e^α}`.
    pub reference: Frame,
    pub h: Extensor,
    pub eta: OrthoMetric,
    pub g: MetricExtensor,
    /// `η_αβ = η(e_α) · e_β`.
    pub eta_lower: DMatrix<f64>,
    /// `η^αβ = η⁻¹(e^α) · e^β`.
    pub eta_upper: DMatrix<f64>,
    /// `max |h⁻¹(u_j) ·g h⁻¹(u_k) − η_jk|` over η's eigenbasis.
    pub lower_residual: f64,
    /// `max |h†(u_j) ·g⁻¹ h†(u_k) − η_jk|` over η's eigenbasis.
    pub upper_residual: f64,
}

/// Tetrad bases built on η's orthonormal eigenbasis.
pub fn tetrad_bases(h: &Extensor, eta: &OrthoMetric) -> Result<TetradFrame> {
    let reference = Frame::from_matrix(eta.eigenvectors().clone())?;
    tetrad_bases_with_reference(h, eta, &reference)
}

pub fn tetrad_bases_with_reference(
    h: &Extensor,
    eta: &OrthoMetric,
    reference: &Frame,
) -> Result<TetradFrame> {
    let n = h.dim();
    same_dim(n, eta.dim())?;
    same_dim(n, reference.dim())?;
    let h_inv = h.inverse()?;
    let g = symmetric_metric(h, eta)?;
    let gm = g.extensor().matrix();
    let gi = g.inverse_extensor().matrix();
    let em = eta.extensor().matrix();

    let frame = Frame {
        vectors: h_inv.matrix() * &reference.vectors,
        reciprocal: h.matrix().transpose() * &reference.reciprocal,
    };

    let u = eta.eigenvectors();
    let eta_jk = eta.eigen_table();
    let down = h_inv.matrix() * u;
    let up = h.matrix().transpose() * u;
    let lower_residual = diff(&(down.transpose() * gm * &down), &eta_jk);
    let upper_residual = diff(&(up.transpose() * gi * &up), &eta_jk);

    let eta_lower = reference.vectors.transpose() * em * &reference.vectors;
    let eta_upper = reference.reciprocal.transpose() * em * &reference.reciprocal;

    Ok(TetradFrame {
        frame,
        reference: reference.clone(),
        h: h.clone(),
        eta: eta.clone(),
        g,
        eta_lower,
        eta_upper,
        lower_residual,
        upper_residual,
    })
}

/// Residuals of the component relations, all absolute max-norm.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct ComponentChecks {
    /// `ε_αi = g_ij ε_α^j` and `ε_α^i = g^ij ε_αj`.
    pub index_raising: f64,
    /// `ε_α^i ε^α_j = δ^i_j` and `ε_α^i ε^β_i = δ_α^β`.
    pub mutual_inverse: f64,
    /// `g_αβ = η_αβ = ε_α^i ε_βi` and `g^αβ = η^αβ = ε^αi ε^β_i`.
    pub tetrad_metric: f64,
    /// `ε_αi = η_αβ ε^β_i` and `ε^α_i = η^αβ ε_βi`.
    pub tetrad_lowering: f64,
}

impl ComponentChecks {
    pub fn max(&self) -> f64 {
        self.index_raising
            .max(self.mutual_inverse)
            .max(self.tetrad_metric)
            .max(self.tetrad_lowering)
    }
}

/// Tetrad components relative to a coordinate frame `{∂_i}`, `{∂^i}`.
#[derive(Debug, Clone)]
pub struct TetradComponents {
    pub coord: Frame,
    /// `ε_α^i = ε_α · ∂^i`.
    pub lower_upper: DMatrix<f64>,
    /// `ε_αi = ε_α · g(∂_i)`.
    pub lower_lower: DMatrix<f64>,
    /// `ε^αi = ε^α · g⁻¹(∂^i)`.
    pub upper_upper: DMatrix<f64>,
    /// `ε^α_i = ε^α · ∂_i`.
    pub upper_lower: DMatrix<f64>,
    /// `g_ij = g(∂_i) · ∂_j`.
    pub g_lower: DMatrix<f64>,
    /// `g^ij = g⁻¹(∂^i) · ∂^j`.
    pub g_upper: DMatrix<f64>,
    /// `g_αβ = g(ε_α) · ε_β`.
    pub g_tetrad_lower: DMatrix<f64>,
    /// `g^αβ = g⁻¹(ε^α) · ε^β`.
    pub g_tetrad_upper: DMatrix<f64>,
    pub eta_lower: DMatrix<f64>,
    pub eta_upper: DMatrix<f64>,
    gm: DMatrix<f64>,
    tetrad_vectors: DMatrix<f64>,
    tetrad_reciprocal: DMatrix<f64>,
    pub checks: ComponentChecks,
}

pub fn tetrad_components(tf: &TetradFrame, coord: &Frame) -> Result<TetradComponents> {
    let n = tf.frame.dim();
    same_dim(n, coord.dim())?;
    let gm = tf.g.extensor().matrix().clone();
    let gi = tf.g.inverse_extensor().matrix();
    let e = &tf.frame.vectors;
    let er = &tf.frame.reciprocal;
    let d = &coord.vectors;
    let dr = &coord.reciprocal;

    let lower_upper = e.transpose() * dr;
    let lower_lower = e.transpose() * &gm * d;
    let upper_upper = er.transpose() * gi * dr;
    let upper_lower = er.transpose() * d;
    let g_lower = d.transpose() * &gm * d;
    let g_upper = dr.transpose() * gi * dr;
    let g_tetrad_lower = e.transpose() * &gm * e;
    let g_tetrad_upper = er.transpose() * gi * er;
    let id = DMatrix::<f64>::identity(n, n);

    let index_raising = diff(&lower_lower, &(&lower_upper * g_lower.transpose()))
        .max(diff(&lower_upper, &(&lower_lower * g_upper.transpose())));
    let mutual_inverse = diff(&(lower_upper.transpose() * &upper_lower), &id)
        .max(diff(&(&lower_upper * upper_lower.transpose()), &id));
    let tetrad_metric = diff(&g_tetrad_lower, &tf.eta_lower)
        .max(diff(&(&lower_upper * lower_lower.transpose()), &tf.eta_lower))
        .max(diff(&g_tetrad_upper, &tf.eta_upper))
        .max(diff(&(&upper_upper * upper_lower.transpose()), &tf.eta_upper));
    let tetrad_lowering = diff(&lower_lower, &(&tf.eta_lower * &upper_lower))
        .max(diff(&upper_lower, &(&tf.eta_upper * &lower_lower)));

    Ok(TetradComponents {
        coord: coord.clone(),
        lower_upper,
        lower_lower,
        upper_upper,
        upper_lower,
        g_lower,
        g_upper,
        g_tetrad_lower,
        g_tetrad_upper,
        eta_lower: tf.eta_lower.clone(),
        eta_upper: tf.eta_upper.clone(),
        gm,
        tetrad_vectors: e.clone(),
        tetrad_reciprocal: er.clone(),
        checks: ComponentChecks {
            index_raising,
            mutual_inverse,
            tetrad_metric,
            tetrad_lowering,
        },
    })
}

/// Coordinate and tetrad components of one vector.
#[derive(Debug, Clone, Serialize)]
pub struct VectorComponents {
    /// `v^i = v · ∂^i`.
    pub coord_upper: Vec<f64>,
    /// `v_i = v · g(∂_i)`.
    pub coord_lower: Vec<f64>,
    /// `v^α = ε^α_i v^i`.
    pub tetrad_upper: Vec<f64>,
    /// `v_α = ε_α^i v_i`.
    pub tetrad_lower: Vec<f64>,
    /// Largest gap between `ε^α_i v^i` and `ε^αi v_i`, and between
    /// `ε_α^i v_i` and `ε_αi v^i`.
    pub route_residual: f64,
    /// Largest gap to the frame definitions `ε^α · v` and `g(ε_α) · v`.
    pub definition_residual: f64,
}

pub fn transform_vector(c: &TetradComponents, v: &[f64]) -> Result<VectorComponents> {
    let n = c.coord.dim();
    same_dim(n, v.len())?;
    let vv = nalgebra::DVector::from_column_slice(v);
    let up_i = c.coord.reciprocal.transpose() * &vv;
    let low_i = c.coord.vectors.transpose() * &c.gm * &vv;

    let up_a1 = &c.upper_lower * &up_i;
    let up_a2 = &c.upper_upper * &low_i;
    let low_a1 = &c.lower_upper * &low_i;
    let low_a2 = &c.lower_lower * &up_i;
    let up_def = c.tetrad_reciprocal.transpose() * &vv;
    let low_def = c.tetrad_vectors.transpose() * &c.gm * &vv;

    let vmax = |a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>| {
        (a - b).iter().fold(0.0f64, |m, x| m.max(x.abs()))
    };
    Ok(VectorComponents {
        route_residual: vmax(&up_a1, &up_a2).max(vmax(&low_a1, &low_a2)),
        definition_residual: vmax(&up_a1, &up_def).max(vmax(&low_a1, &low_def)),
        coord_upper: up_i.iter().copied().collect(),
        coord_lower: low_i.iter().copied().collect(),
        tetrad_upper: up_a1.iter().copied().collect(),
        tetrad_lower: low_a1.iter().copied().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// Coordinate components of a rank-2 tensor to tetrad components:
/// `T_αβ = T_ij ε_α^i ε_β^j` or `T^αβ = T^ij ε^α_i ε^β_j`.
pub fn transform_tensor2(c: &TetradComponents, t: &DMatrix<f64>, variance: Variance) -> Result<DMatrix<f64>> {
    same_dim(c.coord.dim(), t.nrows())?;
    same_dim(c.coord.dim(), t.ncols())?;
    let a = match variance {
        Variance::Covariant => &c.lower_upper,
        Variance::Contravariant => &c.upper_lower,
    };
    Ok(a * t * a.transpose())
}

/// Tetrad components back to coordinate components:
/// `T_ij = T_αβ ε^α_i ε^β_j` or `T^ij = T^αβ ε_α^i ε_β^j`.
pub fn tensor2_to_coordinates(
    c: &TetradComponents,
    t: &DMatrix<f64>,
    variance: Variance,
) -> Result<DMatrix<f64>> {
    same_dim(c.coord.dim(), t.nrows())?;
    same_dim(c.coord.dim(), t.ncols())?;
    let a = match variance {
        Variance::Covariant => &c.upper_lower,
        Variance::Contravariant => &c.lower_upper,
    };
    Ok(a.transpose() * t * a)
}
