//! (1,1)-extensors: linear operators on `V`, stored as matrices in the
//! orthonormal basis (column `j` holds `t(b_j)`), together with their
//! outermorphism extension to the whole exterior algebra.

use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::blade::{grade_of, reorder_sign};
use crate::eigen::{self, EigenDecomposition};
use crate::error::{GaError, Result};
use crate::multivector::{check_dim, same_dim, Multivector};

/// Scaled determinants at or below this magnitude count as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "ExtensorRepr", into = "ExtensorRepr")]
pub struct Extensor {
    matrix: DMatrix<f64>,
    table: OnceLock<Arc<Outermorphism>>,
}

/// Wire form `{"n": 2, "matrix": [[a, b], [c, d]]}`, rows first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensorRepr {
    pub n: usize,
    pub matrix: Vec<Vec<f64>>,
}

impl ExtensorRepr {
    pub fn validate(&self) -> std::result::Result<DMatrix<f64>, String> {
        if check_dim(self.n).is_err() {
            return Err(format!("field `n`: dimension {} outside 2..=12", self.n));
        }
        if self.matrix.len() != self.n {
            return Err(format!(
                "field `matrix`: expected {} rows, found {}",
                self.n,
                self.matrix.len()
            ));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != self.n {
                return Err(format!(
                    "field `matrix[{i}]`: expected {} entries, found {}",
                    self.n,
                    row.len()
                ));
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(format!("field `matrix[{i}][{j}]`: entry is not finite"));
            }
        }
        Ok(DMatrix::from_fn(self.n, self.n, |i, j| self.matrix[i][j]))
    }
}

impl TryFrom<ExtensorRepr> for Extensor {
    type Error = String;

    fn try_from(r: ExtensorRepr) -> std::result::Result<Self, String> {
        r.validate().map(Extensor::from_matrix_unchecked)
    }
}

impl From<Extensor> for ExtensorRepr {
    fn from(t: Extensor) -> Self {
        t.to_repr()
    }
}

impl PartialEq for Extensor {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl std::fmt::Debug for Extensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Extensor")
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl Extensor {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(GaError::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        check_dim(matrix.nrows())?;
        Ok(Self::from_matrix_unchecked(matrix))
    }

    fn from_matrix_unchecked(matrix: DMatrix<f64>) -> Self {
        Extensor {
            matrix,
            table: OnceLock::new(),
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        for r in rows {
            same_dim(n, r.len())?;
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Operator whose `j`-th column is `columns[j]`, i.e. `t(b_j) = columns[j]`.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let n = columns.len();
        check_dim(n)?;
        for c in columns {
            same_dim(n, c.len())?;
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| columns[j][i]))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(DMatrix::identity(n, n))
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            entries,
        )))
    }

    /// `Σ_k w_k (a·x_k) x_k` for orthonormal columns `x_k` of `basis`.
    pub fn spectral(weights: &[f64], basis: &DMatrix<f64>) -> Result<Self> {
        same_dim(basis.nrows(), weights.len())?;
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(weights));
        Self::new(basis * d * basis.transpose())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[(row, col)]
    }

    /// `t(b_j)` for zero-based `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.matrix.column(j).iter().copied().collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| self.matrix.row(i).iter().copied().collect())
            .collect()
    }

    pub fn to_repr(&self) -> ExtensorRepr {
        ExtensorRepr {
            n: self.dim(),
            matrix: self.rows(),
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        same_dim(self.dim(), v.len())?;
        let n = self.dim();
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.matrix[(i, j)] * v[j]).sum())
            .collect())
    }

    /// Euclidean adjoint `t†`, the transpose in the orthonormal basis.
    pub fn adjoint(&self) -> Extensor {
        Self::from_matrix_unchecked(self.matrix.transpose())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Extensor) -> Result<Extensor> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self::from_matrix_unchecked(&self.matrix * &other.matrix))
    }

    pub fn scale(&self, s: f64) -> Extensor {
        Self::from_matrix_unchecked(&self.matrix * s)
    }

    pub fn sub(&self, other: &Extensor) -> Result<Extensor> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self::from_matrix_unchecked(&self.matrix - &other.matrix))
    }

    /// Determinant, read off as the pseudoscalar coefficient of
    /// `t(b_1) ∧ … ∧ t(b_n)`.
    pub fn determinant(&self) -> f64 {
        let n = self.dim();
        let mut acc = Multivector::scalar(n, 1.0).expect("dimension validated");
        for j in (0..n).rev() {
            acc = Multivector::wedge_vector_left(&self.column(j), &acc);
        }
        acc.get((1 << n) - 1)
    }

    /// `det(t) / Π_i ‖row_i‖`, zero when some row vanishes.
    pub fn scaled_determinant(&self) -> f64 {
        let mut scale = 1.0;
        for i in 0..self.dim() {
            let r = self.matrix.row(i).norm();
            if r == 0.0 {
                return 0.0;
            }
            scale *= r;
        }
        self.determinant() / scale
    }

    pub fn is_singular(&self) -> bool {
        self.scaled_determinant().abs() <= SINGULAR_TOL
    }

    pub fn inverse(&self) -> Result<Extensor> {
        let sd = self.scaled_determinant();
        if sd.abs() <= SINGULAR_TOL {
            return Err(GaError::SingularExtensor(sd.abs()));
        }
        self.matrix
            .clone()
            .try_inverse()
            .map(Self::from_matrix_unchecked)
            .ok_or(GaError::SingularExtensor(sd.abs()))
    }

    /// `t* = (t⁻¹)† = (t†)⁻¹`.
    pub fn adjoint_inverse(&self) -> Result<Extensor> {
        Ok(self.inverse()?.adjoint())
    }

    pub fn asymmetry(&self) -> f64 {
        eigen::asymmetry(&self.matrix)
    }

    /// `max |t†∘t − I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.dim();
        let r = self.matrix.transpose() * &self.matrix - DMatrix::<f64>::identity(n, n);
        r.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)] == 0.0))
    }

    pub fn norm_max(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Extensor) -> Result<f64> {
        same_dim(self.dim(), other.dim())?;
        Ok((&self.matrix - &other.matrix)
            .iter()
            .fold(0.0, |m, x| m.max(x.abs())))
    }

    pub fn sym_eigen(&self) -> Result<EigenDecomposition> {
        eigen::symmetric_eigen(&self.matrix)
    }

    /// Outermorphism table, built on first use.
    pub fn outermorphism(&self) -> &Outermorphism {
        self.table
            .get_or_init(|| Arc::new(Outermorphism::build(self)))
            .as_ref()
    }

    /// Extended action on multivectors: fixes scalars, acts as `t` on
    /// vectors and distributes over `∧`.
    pub fn extend(&self, x: &Multivector) -> Result<Multivector> {
        same_dim(self.dim(), x.dim())?;
        Ok(self.outermorphism().apply(x))
    }
}

/// Grade-block matrix of an extended operator. Block `k` maps grade-`k`
/// blades to grade-`k` blades; entry `(B, A)` is the coefficient of blade
/// `B` in the image of blade `A`.
#[derive(Debug, Clone)]
pub struct Outermorphism {
    dim: usize,
    position: Vec<usize>,
    blocks: Vec<GradeBlock>,
}

#[derive(Debug, Clone)]
struct GradeBlock {
    masks: Vec<usize>,
    data: Vec<f64>,
}

impl GradeBlock {
    fn size(&self) -> usize {
        self.masks.len()
    }
}

impl Outermorphism {
    fn build(t: &Extensor) -> Self {
        let n = t.dim();
        let full = 1usize << n;
        let mut position = vec![0usize; full];
        let mut masks_by_grade: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (m, pos) in position.iter_mut().enumerate() {
            let k = grade_of(m);
            *pos = masks_by_grade[k].len();
            masks_by_grade[k].push(m);
        }

        let mut blocks: Vec<GradeBlock> = Vec::with_capacity(n + 1);
        blocks.push(GradeBlock {
            masks: vec![0],
            data: vec![1.0],
        });
        for k in 1..=n {
            let masks = masks_by_grade[k].clone();
            let size = masks.len();
            let prev = &blocks[k - 1];
            let prev_size = prev.size();
            let mut data = vec![0.0; size * size];
            // image(A) = t(b_i) ∧ image(A \ {i}) with i the lowest index of A
            for (col, &a) in masks.iter().enumerate() {
                let i = a.trailing_zeros() as usize;
                let rest = a ^ (1 << i);
                let rest_col = position[rest];
                for (row, &b) in masks.iter().enumerate() {
                    let mut acc = 0.0;
                    let mut bits = b;
                    while bits != 0 {
                        let j = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let bit = 1 << j;
                        let sub = b ^ bit;
                        let coeff = prev.data[position[sub] * prev_size + rest_col];
                        if coeff != 0.0 {
                            acc += t.matrix[(j, i)] * reorder_sign(bit, sub) * coeff;
                        }
                    }
                    data[row * size + col] = acc;
                }
            }
            blocks.push(GradeBlock { masks, data });
        }
        Outermorphism {
            dim: n,
            position,
            blocks,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, x: &Multivector) -> Multivector {
        let mut out = vec![0.0; 1 << self.dim];
        for block in &self.blocks {
            let size = block.size();
            for (col, &a) in block.masks.iter().enumerate() {
                let xa = x.get(a);
                if xa == 0.0 {
                    continue;
                }
                for (row, &b) in block.masks.iter().enumerate() {
                    out[b] += block.data[row * size + col] * xa;
                }
            }
        }
        Multivector::from_coeffs(self.dim, out).expect("dimension validated")
    }

    /// Image of a single basis blade.
    pub fn image(&self, mask: usize) -> Multivector {
        let block = &self.blocks[grade_of(mask)];
        let col = self.position[mask];
        let size = block.size();
        let mut out = vec![0.0; 1 << self.dim];
        for (row, &b) in block.masks.iter().enumerate() {
            out[b] = block.data[row * size + col];
        }
        Multivector::from_coeffs(self.dim, out).expect("dimension validated")
    }
}
