//! Metric extensors and the g-metric products built from them.
//!
//! A metric `G` on `V` is encoded by the symmetric non-degenerate operator
//! `g` with `v ·_G w = g(v) · w`. The scalar product and contractions follow
//! by inserting the extended operator `g̲` into the Euclidean ones; the
//! Clifford product is evaluated through a gauge deformation (see
//! [`crate::golden`]), with an independent axiomatic evaluation kept for
//! cross-checking.

use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::eigen::{EigenDecomposition, SYMMETRY_TOL};
use crate::error::{GaError, Result};
use crate::extensor::{Extensor, ExtensorRepr, SINGULAR_TOL};
use crate::golden::DeformedAlgebra;
use crate::multivector::{same_dim, Multivector};
use crate::ortho::OrthoMetric;

/// Counts of positive and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Self {
        Signature { p, q }
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn as_pair(&self) -> (usize, usize) {
        (self.p, self.q)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// The five products that every metric structure carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Product {
    Wedge,
    Scalar,
    Lcontract,
    Rcontract,
    Clifford,
}

impl Product {
    pub const ALL: [Product; 5] = [
        Product::Wedge,
        Product::Scalar,
        Product::Lcontract,
        Product::Rcontract,
        Product::Clifford,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Product::Wedge => "wedge",
            Product::Scalar => "scalar",
            Product::Lcontract => "lcontract",
            Product::Rcontract => "rcontract",
            Product::Clifford => "clifford",
        }
    }
}

impl std::str::FromStr for Product {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Product::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                format!("unknown product `{s}` (expected wedge, scalar, lcontract, rcontract or clifford)")
            })
    }
}

/// Expansion of one basis blade in ordered g-Clifford monomials
/// `b_{s1} *_g … *_g b_{sk}` (`s1 < … < sk`), as `(monomial mask, coefficient)`.
type BladeExpansion = Vec<Vec<(usize, f64)>>;

#[derive(Clone)]
pub struct MetricExtensor {
    base: Extensor,
    inverse: Extensor,
    eig: EigenDecomposition,
    signature: Signature,
    expansion: OnceLock<Arc<BladeExpansion>>,
    canonical: OnceLock<Arc<DeformedAlgebra>>,
}

impl fmt::Debug for MetricExtensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricExtensor")
            .field("matrix", self.base.matrix())
            .field("eigenvalues", &self.eig.eigenvalues)
            .field("signature", &self.signature)
            .finish()
    }
}

impl PartialEq for MetricExtensor {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

/// Wire form: extensor JSON with an optional `"signature": [p, q]` that is
/// checked against the computed one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricRepr {
    pub n: usize,
    pub matrix: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<[usize; 2]>,
}

impl MetricRepr {
    pub fn into_metric(self) -> std::result::Result<MetricExtensor, String> {
        let matrix = ExtensorRepr {
            n: self.n,
            matrix: self.matrix,
        }
        .validate()?;
        let g = MetricExtensor::from_matrix(matrix).map_err(|e| format!("field `matrix`: {e}"))?;
        if let Some([p, q]) = self.signature {
            if g.signature() != Signature::new(p, q) {
                return Err(format!(
                    "field `signature`: declared [{p}, {q}] but eigenvalues give [{}, {}]",
                    g.signature().p,
                    g.signature().q
                ));
            }
        }
        Ok(g)
    }
}

impl From<&MetricExtensor> for MetricRepr {
    fn from(g: &MetricExtensor) -> Self {
        let r = g.base.to_repr();
        MetricRepr {
            n: r.n,
            matrix: r.matrix,
            signature: Some([g.signature.p, g.signature.q]),
        }
    }
}

impl MetricExtensor {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        Self::from_extensor(Extensor::new(matrix)?)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_extensor(Extensor::from_rows(rows)?)
    }

    pub fn from_extensor(base: Extensor) -> Result<Self> {
        let asym = base.asymmetry();
        if asym > SYMMETRY_TOL {
            return Err(GaError::NotSymmetric(asym));
        }
        let sd = base.scaled_determinant();
        if sd.abs() <= SINGULAR_TOL {
            return Err(GaError::Degenerate(sd.abs()));
        }
        let eig = base.sym_eigen()?;
        let (p, q) = eig.inertia();
        if p + q != base.dim() {
            return Err(GaError::Degenerate(0.0));
        }
        let inverse = base.inverse().map_err(|e| match e {
            GaError::SingularExtensor(d) => GaError::Degenerate(d),
            other => other,
        })?;
        Ok(MetricExtensor {
            base,
            inverse,
            eig,
            signature: Signature::new(p, q),
            expansion: OnceLock::new(),
            canonical: OnceLock::new(),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_extensor(Extensor::identity(n)?)
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::from_extensor(Extensor::diagonal(entries)?)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn extensor(&self) -> &Extensor {
        &self.base
    }

    pub fn inverse_extensor(&self) -> &Extensor {
        &self.inverse
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Smallest `|λ|` relative to the largest.
    pub fn degeneracy_margin(&self) -> f64 {
        let abs: Vec<f64> = self.eig.eigenvalues.iter().map(|l| l.abs()).collect();
        let max = abs.iter().cloned().fold(0.0, f64::max);
        let min = abs.iter().cloned().fold(f64::INFINITY, f64::min);
        min / max
    }

    /// The metric extensor `g⁻¹` of the reciprocal metric.
    pub fn inverse_metric(&self) -> Result<MetricExtensor> {
        Self::from_extensor(self.inverse.clone())
    }

    /// `X ·_g Y = g̲(X) · Y`.
    pub fn scalar(&self, x: &Multivector, y: &Multivector) -> Result<f64> {
        same_dim(self.dim(), x.dim())?;
        self.base.extend(x)?.dot(y)
    }

    /// `X ⌟_g Y = g̲(X) ⌟ Y`.
    pub fn contract_left(&self, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        same_dim(self.dim(), x.dim())?;
        self.base.extend(x)?.contract_left(y)
    }

    /// `X ⌞_g Y = X ⌞ g̲(Y)`.
    pub fn contract_right(&self, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        same_dim(self.dim(), y.dim())?;
        x.contract_right(&self.base.extend(y)?)
    }

    /// g-Clifford product, evaluated as `h̲⁻¹[h̲(X) *_η h̲(Y)]` for the gauge of
    /// `g` against the diagonal reference metric of the same signature.
    pub fn clifford(&self, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        self.deformation()?.product(Product::Clifford, x, y)
    }

    /// The cached deformation used by [`MetricExtensor::clifford`].
    pub fn deformation(&self) -> Result<&DeformedAlgebra> {
        if let Some(d) = self.canonical.get() {
            return Ok(d);
        }
        let eta = OrthoMetric::standard(self.signature.p, self.dim())?;
        let built = DeformedAlgebra::from_metric(self.clone(), eta)?;
        Ok(self.canonical.get_or_init(|| Arc::new(built)))
    }

    /// `v *_g X = v ⌟_g X + v ∧ X` for a vector `v`.
    pub fn vector_clifford_left(&self, v: &[f64], x: &Multivector) -> Result<Multivector> {
        same_dim(self.dim(), v.len())?;
        same_dim(self.dim(), x.dim())?;
        let gv = self.base.apply(v)?;
        let mut out = Multivector::contract_vector_left(&gv, x);
        out += &Multivector::wedge_vector_left(v, x);
        Ok(out)
    }

    /// `X *_g v = X ⌞_g v + X ∧ v` for a vector `v`.
    pub fn vector_clifford_right(&self, x: &Multivector, v: &[f64]) -> Result<Multivector> {
        same_dim(self.dim(), v.len())?;
        let vm = Multivector::vector(v)?;
        let gv = Multivector::vector(&self.base.apply(v)?)?;
        Ok(&x.contract_right(&gv)? + &x.wedge(&vm)?)
    }

    fn blade_expansion(&self) -> &BladeExpansion {
        self.expansion
            .get_or_init(|| Arc::new(build_expansion(&self.base)))
    }

    /// Coefficients of `X` in the ordered monomial basis
    /// `b_{s1} *_g … *_g b_{sk}`, indexed by monomial mask.
    pub fn monomial_coefficients(&self, x: &Multivector) -> Result<Vec<f64>> {
        same_dim(self.dim(), x.dim())?;
        let exp = self.blade_expansion();
        let mut w = vec![0.0; 1 << self.dim()];
        for (a, &xa) in x.coeffs().iter().enumerate() {
            if xa == 0.0 {
                continue;
            }
            for &(s, c) in &exp[a] {
                w[s] += xa * c;
            }
        }
        Ok(w)
    }

    /// g-Clifford product evaluated from the defining relations alone:
    /// `X` is expanded in ordered monomials of basis vectors and each vector
    /// factor acts through `v *_g Z = g(v) ⌟ Z + v ∧ Z`. No gauge is used.
    pub fn clifford_axiomatic(&self, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        same_dim(self.dim(), y.dim())?;
        let w = self.monomial_coefficients(x)?;
        let n = self.dim();
        let columns: Vec<Vec<f64>> = (0..n).map(|j| self.base.column(j)).collect();
        let mut acc = Multivector::zero(n)?;
        self.monomial_walk(0, n, y.clone(), &w, &columns, &mut acc);
        Ok(acc)
    }

    // Visits monomials by prepending indices below the current minimum, so
    // `value` is always `M_mask *_g Y`.
    fn monomial_walk(
        &self,
        mask: usize,
        limit: usize,
        value: Multivector,
        w: &[f64],
        columns: &[Vec<f64>],
        acc: &mut Multivector,
    ) {
        if w[mask] != 0.0 {
            *acc += &value.scale(w[mask]);
        }
        for i in 0..limit {
            let mut next = Multivector::contract_vector_left(&columns[i], &value);
            let mut unit = vec![0.0; columns.len()];
            unit[i] = 1.0;
            next += &Multivector::wedge_vector_left(&unit, &value);
            self.monomial_walk(mask | (1 << i), i, next, w, columns, acc);
        }
    }

    /// The product `op` computed directly from its definition, without any
    /// gauge: extended-metric insertion for the scalar product and the
    /// contractions, the axiomatic evaluation for the Clifford product.
    pub fn direct_product(&self, op: Product, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        same_dim(x.dim(), y.dim())?;
        match op {
            Product::Wedge => x.wedge(y),
            Product::Scalar => Multivector::scalar(x.dim(), self.scalar(x, y)?),
            Product::Lcontract => self.contract_left(x, y),
            Product::Rcontract => self.contract_right(x, y),
            Product::Clifford => self.clifford_axiomatic(x, y),
        }
    }

    /// Metric adjoint `t†(g) = g⁻¹ ∘ t† ∘ g`.
    pub fn metric_adjoint(&self, t: &Extensor) -> Result<Extensor> {
        same_dim(self.dim(), t.dim())?;
        self.inverse.compose(&t.adjoint())?.compose(&self.base)
    }
}

fn build_expansion(g: &Extensor) -> BladeExpansion {
    let n = g.dim();
    let full = 1usize << n;
    let mut table: BladeExpansion = Vec::with_capacity(full);
    table.push(vec![(0, 1.0)]);
    let mut scratch = vec![0.0; full];
    for a in 1..full {
        // b_i ∧ A' = b_i *_g A' − (g(b_i) ⌟ A'), with i the lowest index of A
        let i = a.trailing_zeros() as usize;
        let rest = a ^ (1 << i);
        let mut touched: Vec<usize> = Vec::new();
        for &(s, c) in &table[rest] {
            let m = s | (1 << i);
            if scratch[m] == 0.0 {
                touched.push(m);
            }
            scratch[m] += c;
        }
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let gji = g.entry(j, i);
            if gji == 0.0 {
                continue;
            }
            let sub = rest ^ (1 << j);
            let sign = crate::blade::reorder_sign(1 << j, sub);
            for &(s, c) in &table[sub] {
                if scratch[s] == 0.0 {
                    touched.push(s);
                }
                scratch[s] -= gji * sign * c;
            }
        }
        touched.sort_unstable();
        touched.dedup();
        let mut entry = Vec::with_capacity(touched.len());
        for m in touched {
            if scratch[m] != 0.0 {
                entry.push((m, scratch[m]));
            }
            scratch[m] = 0.0;
        }
        table.push(entry);
    }
    table
}
