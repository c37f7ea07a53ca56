//! Cyclic Jacobi eigensolver for real symmetric matrices.

use nalgebra::DMatrix;

use crate::error::{GaError, Result};

pub const SYMMETRY_TOL: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues with orthonormal eigenvectors stored as matrix columns.
///
/// Ordering: positive eigenvalues first in descending order, then the
/// remaining ones in descending order. Within a cluster of equal eigenvalues
/// the vectors are ordered by the index of their dominant component, and each
/// vector is signed so that its dominant component is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// The k-th eigenvector (zero-based).
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }

    /// Number of positive and negative eigenvalues.
    pub fn inertia(&self) -> (usize, usize) {
        let p = self.eigenvalues.iter().filter(|&&l| l > 0.0).count();
        let q = self.eigenvalues.iter().filter(|&&l| l < 0.0).count();
        (p, q)
    }

    /// `U diag(λ) Uᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let u = &self.eigenvectors;
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.eigenvalues.clone()));
        u * d * u.transpose()
    }
}

pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<EigenDecomposition> {
    let asym = asymmetry(m);
    if asym > SYMMETRY_TOL {
        return Err(GaError::NotSymmetric(asym));
    }
    let n = m.nrows();
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= 1e-15 * scale || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > 1e-15 * scale {
        return Err(GaError::NoConvergence(MAX_SWEEPS));
    }

    let values: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    Ok(order(values, v))
}

// A <- Jᵀ A J, V <- V J for the rotation J in the (p, q) plane.
fn rotate(a: &mut DMatrix<f64>, v: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

fn dominant_index(col: &[f64]) -> usize {
    let max = col.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    col.iter()
        .position(|x| x.abs() >= max * (1.0 - 1e-12))
        .unwrap_or(0)
}

fn order(values: Vec<f64>, vectors: DMatrix<f64>) -> EigenDecomposition {
    let n = values.len();
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let mut c: Vec<f64> = vectors.column(k).iter().copied().collect();
            let d = dominant_index(&c);
            if c[d] < 0.0 {
                c.iter_mut().for_each(|x| *x = -*x);
            }
            c
        })
        .collect();

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (values[i], values[j]);
        (b > 0.0).cmp(&(a > 0.0)).then(b.total_cmp(&a))
    });

    // regroup near-equal runs by dominant component index
    let spread = values.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let tie = 1e-12 * spread;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && (values[idx[end]] - values[idx[end - 1]]).abs() <= tie
            && (values[idx[end]] > 0.0) == (values[idx[start]] > 0.0)
        {
            end += 1;
        }
        idx[start..end].sort_by_key(|&k| dominant_index(&cols[k]));
        start = end;
    }

    let eigenvalues = idx.iter().map(|&k| values[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| cols[idx[c]][r]);
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}
