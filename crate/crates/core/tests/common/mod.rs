//! Helpers shared by the integration tests, including an independent Clifford
//! algebra built only from the generator relations `e_i e_j + e_j e_i = 2 g_ij`.

#![allow(dead_code)]

use gauge_ga::Multivector;
use nalgebra::DMatrix;

/// Reduces the word `e_{w0} e_{w1} …` to ordered monomials
/// `e_{i1} e_{i2} … (i1 < i2 < …)`, adding `coeff` times the result into
/// `out` (indexed by the set of indices as a bitmask).
fn normal_order(word: Vec<usize>, coeff: f64, g: &DMatrix<f64>, out: &mut [f64]) {
    if coeff == 0.0 {
        return;
    }
    let Some(i) = (0..word.len().saturating_sub(1)).find(|&i| word[i] >= word[i + 1]) else {
        let mask = word.iter().fold(0usize, |m, &k| m | (1 << k));
        out[mask] += coeff;
        return;
    };
    let (a, b) = (word[i], word[i + 1]);
    let mut shorter = word.clone();
    shorter.drain(i..i + 2);
    if a == b {
        normal_order(shorter, coeff * g[(a, a)], g, out);
    } else {
        let mut swapped = word;
        swapped.swap(i, i + 1);
        normal_order(swapped, -coeff, g, out);
        normal_order(shorter, 2.0 * coeff * g[(a, b)], g, out);
    }
}

fn monomial_word(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|k| mask & (1 << k) != 0).collect()
}

/// Product of two elements given in the ordered-monomial basis.
fn multiply(x: &[f64], y: &[f64], g: &DMatrix<f64>) -> Vec<f64> {
    let n = g.nrows();
    let mut out = vec![0.0; x.len()];
    for (a, &xa) in x.iter().enumerate() {
        if xa == 0.0 {
            continue;
        }
        for (b, &yb) in y.iter().enumerate() {
            if yb == 0.0 {
                continue;
            }
            let mut w = monomial_word(a, n);
            w.extend(monomial_word(b, n));
            normal_order(w, xa * yb, g, &mut out);
        }
    }
    out
}

fn permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    if k == 0 {
        return vec![(vec![], 1.0)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(k - 1) {
        // insert k-1 at every position; moving it left past j entries flips the sign j times
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            let flips = p.len() - pos;
            out.push((q, if flips % 2 == 0 { s } else { -s }));
        }
    }
    out
}

/// Multiplication table of the basis blades `e_S = e_{s1} ∧ … ∧ e_{sk}`,
/// where each blade is the antisymmetrized product of its vectors.
pub struct CayleyTable {
    pub n: usize,
    blade_to_monomial: Vec<Vec<f64>>,
    monomial_to_blade: DMatrix<f64>,
    g: DMatrix<f64>,
}

impl CayleyTable {
    pub fn new(g: &DMatrix<f64>) -> CayleyTable {
        let n = g.nrows();
        let full = 1usize << n;
        let mut blade_to_monomial = Vec::with_capacity(full);
        for mask in 0..full {
            let idx = monomial_word(mask, n);
            let k = idx.len();
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            let mut acc = vec![0.0; full];
            for (perm, sign) in permutations(k) {
                let word: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
                normal_order(word, sign / fact, g, &mut acc);
            }
            blade_to_monomial.push(acc);
        }
        let b = DMatrix::from_fn(full, full, |i, j| blade_to_monomial[j][i]);
        let monomial_to_blade = b.try_inverse().expect("blades form a basis");
        CayleyTable {
            n,
            blade_to_monomial,
            monomial_to_blade,
            g: g.clone(),
        }
    }

    /// `e_A e_C` in blade coordinates.
    pub fn product(&self, a: usize, c: usize) -> Vec<f64> {
        let m = multiply(&self.blade_to_monomial[a], &self.blade_to_monomial[c], &self.g);
        let v = &self.monomial_to_blade * nalgebra::DVector::from_vec(m);
        v.iter().copied().collect()
    }
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn mv(n: usize, coeffs: &[f64]) -> Multivector {
    Multivector::from_coeffs(n, coeffs.to_vec()).unwrap()
}

pub fn blade(n: usize, mask: usize) -> Multivector {
    Multivector::blade(n, mask).unwrap()
}
