//! Monomial feature vectors in graded-lexicographic order.

use crate::complexity::binomial;

/// Exponent tuples of all monomials in `n` variables of total degree `<= k`,
/// graded-lexicographic: by total degree, then lexicographically with the
/// first variable's exponent decreasing. The first tuple is the constant.
pub fn exponents(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    for degree in 0..=k as u32 {
        fill(&mut out, &mut current, 0, degree);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos == current.len() - 1 {
        current[pos] = remaining;
        out.push(current.clone());
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// Number of monomials: `C(n + k, k)`.
pub fn feature_count(n: usize, k: usize) -> usize {
    binomial((n + k) as u64, k as u64).expect("feature count overflow") as usize
}

/// Evaluate the monomial vector `z_k(x)` into `out` following `exps`.
/// `powers` is scratch space of size `n * (k + 1)`.
pub fn eval_into(x: &[f64], k: usize, exps: &[Vec<u32>], powers: &mut [f64], out: &mut [f64]) {
    let n = x.len();
    debug_assert_eq!(powers.len(), n * (k + 1));
    for (j, &xj) in x.iter().enumerate() {
        let row = &mut powers[j * (k + 1)..(j + 1) * (k + 1)];
        row[0] = 1.0;
        for p in 1..=k {
            row[p] = row[p - 1] * xj;
        }
    }
    for (slot, exp) in out.iter_mut().zip(exps) {
        let mut v = 1.0;
        for (j, &e) in exp.iter().enumerate() {
            if e > 0 {
                v *= powers[j * (k + 1) + e as usize];
            }
        }
        *slot = v;
    }
}

/// Monomial vector of `x` with degree bound `k` (convenience allocation).
pub fn monomials(x: &[f64], k: usize) -> Vec<f64> {
    let n = x.len();
    let exps = exponents(n, k);
    let mut powers = vec![0.0; n * (k + 1)];
    let mut out = vec![0.0; exps.len()];
    eval_into(x, k, &exps, &mut powers, &mut out);
    out
}
