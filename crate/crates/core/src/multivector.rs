//! Dense multivectors over an orthonormal Euclidean basis `{b_j}` and the
//! Euclidean exterior, scalar, contraction and Clifford products.
//!
//! Coefficients are stored in bitmask order: entry `m` multiplies the blade
//! whose factors are the set bits of `m`, taken in increasing index order.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::blade::{grade_of, indices, reorder_sign, reverse_sign};
use crate::error::{GaError, Result};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 12;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(GaError::InvalidDimension(n))
    }
}

pub(crate) fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(GaError::DimensionMismatch {
            expected: a,
            found: b,
        })
    }
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MultivectorRepr", into = "MultivectorRepr")]
pub struct Multivector {
    dim: usize,
    coeffs: Vec<f64>,
}

/// Wire form `{"n": 3, "coeffs": [c_0, …, c_7]}`.
#[derive(Serialize, Deserialize)]
pub struct MultivectorRepr {
    pub n: usize,
    pub coeffs: Vec<f64>,
}

impl TryFrom<MultivectorRepr> for Multivector {
    type Error = String;

    fn try_from(r: MultivectorRepr) -> std::result::Result<Self, String> {
        if !(MIN_DIM..=MAX_DIM).contains(&r.n) {
            return Err(format!(
                "field `n`: dimension {} outside {}..={}",
                r.n, MIN_DIM, MAX_DIM
            ));
        }
        if r.coeffs.len() != 1 << r.n {
            return Err(format!(
                "field `coeffs`: expected {} entries (2^{}), found {}",
                1usize << r.n,
                r.n,
                r.coeffs.len()
            ));
        }
        Ok(Multivector {
            dim: r.n,
            coeffs: r.coeffs,
        })
    }
}

impl From<Multivector> for MultivectorRepr {
    fn from(m: Multivector) -> Self {
        MultivectorRepr {
            n: m.dim,
            coeffs: m.coeffs,
        }
    }
}

impl Multivector {
    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Multivector {
            dim,
            coeffs: vec![0.0; 1 << dim],
        })
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if coeffs.len() != 1 << dim {
            return Err(GaError::CoefficientLength {
                expected: 1 << dim,
                found: coeffs.len(),
            });
        }
        Ok(Multivector { dim, coeffs })
    }

    pub fn scalar(dim: usize, value: f64) -> Result<Self> {
        let mut m = Self::zero(dim)?;
        m.coeffs[0] = value;
        Ok(m)
    }

    /// Unit blade for `mask`.
    pub fn blade(dim: usize, mask: usize) -> Result<Self> {
        let mut m = Self::zero(dim)?;
        if mask >= 1 << dim {
            return Err(GaError::IndexOutOfRange {
                index: mask,
                dim: (1 << dim) - 1,
            });
        }
        m.coeffs[mask] = 1.0;
        Ok(m)
    }

    /// Basis vector `b_j`, one-based.
    pub fn basis_vector(dim: usize, j: usize) -> Result<Self> {
        if j == 0 || j > dim {
            return Err(GaError::IndexOutOfRange { index: j, dim });
        }
        Self::blade(dim, 1 << (j - 1))
    }

    /// Grade-one multivector with the given components.
    pub fn vector(components: &[f64]) -> Result<Self> {
        let dim = components.len();
        let mut m = Self::zero(dim)?;
        for (i, &c) in components.iter().enumerate() {
            m.coeffs[1 << i] = c;
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    #[inline]
    pub fn set(&mut self, mask: usize, value: f64) {
        self.coeffs[mask] = value;
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Grade-one components, `[x_1, …, x_n]`.
    pub fn vector_part(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.coeffs[1 << i]).collect()
    }

    pub fn grade(&self, k: usize) -> Result<Multivector> {
        if k > self.dim {
            return Err(GaError::GradeOutOfRange {
                grade: k,
                dim: self.dim,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| if grade_of(m) == k { c } else { 0.0 })
            .collect();
        Ok(Multivector {
            dim: self.dim,
            coeffs,
        })
    }

    pub fn reverse(&self) -> Multivector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| c * reverse_sign(grade_of(m)))
            .collect();
        Multivector {
            dim: self.dim,
            coeffs,
        }
    }

    pub fn scale(&self, s: f64) -> Multivector {
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn norm_max(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    /// Largest coefficient-wise difference.
    pub fn max_abs_diff(&self, other: &Multivector) -> Result<f64> {
        same_dim(self.dim, other.dim)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs())))
    }

    pub fn approx_eq(&self, other: &Multivector, tol: f64) -> bool {
        match self.max_abs_diff(other) {
            Ok(d) => d <= tol * self.norm_max().max(other.norm_max()).max(1.0),
            Err(_) => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    fn bilinear<F>(&self, other: &Multivector, rule: F) -> Result<Multivector>
    where
        F: Fn(usize, usize) -> Option<(usize, f64)>,
    {
        same_dim(self.dim, other.dim)?;
        let mut out = vec![0.0; self.coeffs.len()];
        for (a, &x) in self.coeffs.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (b, &y) in other.coeffs.iter().enumerate() {
                if y == 0.0 {
                    continue;
                }
                if let Some((m, s)) = rule(a, b) {
                    out[m] += s * x * y;
                }
            }
        }
        Ok(Multivector {
            dim: self.dim,
            coeffs: out,
        })
    }

    /// Exterior product `X ∧ Y`.
    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        self.bilinear(other, |a, b| {
            (a & b == 0).then(|| (a | b, reorder_sign(a, b)))
        })
    }

    /// Euclidean scalar product `X · Y`; distinct basis blades are
    /// orthogonal and each basis blade has unit square.
    pub fn dot(&self, other: &Multivector) -> Result<f64> {
        same_dim(self.dim, other.dim)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Left contraction `X ⌟ Y`.
    pub fn contract_left(&self, other: &Multivector) -> Result<Multivector> {
        self.bilinear(other, |a, b| {
            (a & b == a).then(|| (a ^ b, reorder_sign(a, b)))
        })
    }

    /// Right contraction `X ⌞ Y`.
    pub fn contract_right(&self, other: &Multivector) -> Result<Multivector> {
        self.bilinear(other, |a, b| {
            (a & b == b).then(|| (a ^ b, reorder_sign(a, b)))
        })
    }

    /// Euclidean Clifford product `X Y`.
    pub fn clifford(&self, other: &Multivector) -> Result<Multivector> {
        self.bilinear(other, |a, b| Some((a ^ b, reorder_sign(a, b))))
    }

    /// Clifford product for a metric that is diagonal in `{b_j}`, with
    /// `b_j b_j = diag[j]`.
    pub fn clifford_diagonal(&self, other: &Multivector, diag: &[f64]) -> Result<Multivector> {
        same_dim(self.dim, diag.len())?;
        self.bilinear(other, |a, b| {
            let s = indices(a & b).fold(reorder_sign(a, b), |s, i| s * diag[i]);
            (s != 0.0).then_some((a ^ b, s))
        })
    }

    /// `v ∧ X` for a vector given by components, in `O(2^n n)`.
    pub(crate) fn wedge_vector_left(v: &[f64], x: &Multivector) -> Multivector {
        let n = x.dim;
        let mut out = vec![0.0; x.coeffs.len()];
        for (m, &c) in x.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for (i, &vi) in v.iter().enumerate().take(n) {
                let bit = 1 << i;
                if m & bit != 0 || vi == 0.0 {
                    continue;
                }
                out[m | bit] += reorder_sign(bit, m) * vi * c;
            }
        }
        Multivector {
            dim: n,
            coeffs: out,
        }
    }

    /// `v ⌟ X` for a vector given by components, in `O(2^n n)`.
    pub(crate) fn contract_vector_left(v: &[f64], x: &Multivector) -> Multivector {
        let n = x.dim;
        let mut out = vec![0.0; x.coeffs.len()];
        for (m, &c) in x.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for (i, &vi) in v.iter().enumerate().take(n) {
                let bit = 1 << i;
                if m & bit == 0 || vi == 0.0 {
                    continue;
                }
                out[m ^ bit] += reorder_sign(bit, m) * vi * c;
            }
        }
        Multivector {
            dim: n,
            coeffs: out,
        }
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(n={}; ", self.dim)?;
        let mut first = true;
        for (m, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{}*{}", c, crate::blade::blade_name(m))?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

fn assert_same_dim(a: &Multivector, b: &Multivector) {
    assert_eq!(
        a.dim, b.dim,
        "multivector dimension mismatch: {} vs {}",
        a.dim, b.dim
    );
}

impl Add for &Multivector {
    type Output = Multivector;

    fn add(self, rhs: &Multivector) -> Multivector {
        assert_same_dim(self, rhs);
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for Multivector {
    type Output = Multivector;

    fn add(self, rhs: Multivector) -> Multivector {
        &self + &rhs
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_same_dim(self, rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;

    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_same_dim(self, rhs);
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for Multivector {
    type Output = Multivector;

    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl Neg for &Multivector {
    type Output = Multivector;

    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;

    fn mul(self, s: f64) -> Multivector {
        self.scale(s)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;

    fn mul(self, s: f64) -> Multivector {
        self.scale(s)
    }
}

/// A real number viewed as a grade-zero multivector.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Scalar(pub f64);

impl Scalar {
    pub fn to_multivector(self, dim: usize) -> Result<Multivector> {
        Multivector::scalar(dim, self.0)
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar(v)
    }
}

impl From<Scalar> for f64 {
    fn from(s: Scalar) -> Self {
        s.0
    }
}

impl TryFrom<&Multivector> for Scalar {
    type Error = GaError;

    fn try_from(m: &Multivector) -> Result<Self> {
        if m.coeffs[1..].iter().any(|&c| c != 0.0) {
            return Err(GaError::NotScalar);
        }
        Ok(Scalar(m.coeffs[0]))
    }
}
