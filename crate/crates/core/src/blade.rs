//! Bitmask bookkeeping for basis blades.
//!
//! Bit `i` of a mask stands for the basis vector `b_{i+1}`. A mask names the
//! blade `b_{i1} ∧ … ∧ b_{ik}` with its set bits taken in increasing order.

/// Sign picked up when the concatenated factor list `a ++ b` is sorted into
/// increasing order, i.e. `(-1)^(number of transpositions)`.
#[inline]
pub fn reorder_sign(a: usize, b: usize) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
pub fn grade_of(mask: usize) -> usize {
    mask.count_ones() as usize
}

/// `(-1)^(k(k-1)/2)`, the reversion sign of a grade-`k` blade.
#[inline]
pub fn reverse_sign(grade: usize) -> f64 {
    if (grade / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Zero-based indices of the set bits of `mask`, increasing.
pub fn indices(mask: usize) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// All masks of a given grade in `n` dimensions, increasing.
pub fn masks_of_grade(n: usize, grade: usize) -> Vec<usize> {
    (0..1usize << n).filter(|&m| grade_of(m) == grade).collect()
}

/// Human-readable blade name, e.g. `b13` for mask `0b101`; `1` for the scalar.
pub fn blade_name(mask: usize) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut s = String::from("b");
    for i in indices(mask) {
        if i >= 9 {
            s.push('_');
        }
        s.push_str(&(i + 1).to_string());
    }
    s
}
