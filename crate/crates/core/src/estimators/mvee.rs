//! Minimum-volume enclosing ellipsoid via barycentric-coordinate ascent on
//! the lifted dual (Khachiyan's algorithm with Wolfe-Atwood away steps).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default relative dual-violation tolerance.
pub const DEFAULT_TOL: f64 = 1e-7;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Shape matrix `E` and center `c` of the enclosing ellipsoid
/// `{ x : (x - c)^T E (x - c) <= 1 }`.
pub struct Mvee {
    pub shape: DMatrix<f64>,
    pub center: DVector<f64>,
}

/// Compute the MVEE of `n` points given row-major in `points` (`n x dim`).
///
/// Stops once the maximum relative dual violation drops below `tol`; every
/// input point then satisfies `(x - c)^T E (x - c) <= 1 + tol * (dim + 1) / dim`,
/// well inside the `1 + 10*tol` membership slack used downstream.
pub fn mvee(points: &[f64], dim: usize, tol: f64, max_iter: usize) -> Result<Mvee> {
    if dim == 0 || points.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let n = points.len() / dim;
    if n * dim != points.len() {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: points.len(),
        });
    }
    if n < dim + 1 {
        return Err(Error::RankDeficientData);
    }
    check_affine_rank(points, n, dim)?;

    let d1 = dim + 1;
    // lifted points q_i = (x_i, 1)
    let q = |i: usize| -> DVector<f64> {
        let mut v = DVector::zeros(d1);
        for j in 0..dim {
            v[j] = points[i * dim + j];
        }
        v[dim] = 1.0;
        v
    };
    let lifted: Vec<DVector<f64>> = (0..n).map(q).collect();

    let mut u = vec![1.0 / n as f64; n];
    let mut m_vals = vec![0.0; n];
    let threshold = (1.0 + tol) * d1 as f64;

    let mut converged = false;
    for _ in 0..max_iter {
        // X = sum_i u_i q_i q_i^T
        let mut x = DMatrix::<f64>::zeros(d1, d1);
        for (i, qi) in lifted.iter().enumerate() {
            if u[i] > 0.0 {
                x.ger(u[i], qi, qi, 1.0);
            }
        }
        let x_inv = x
            .clone()
            .try_inverse()
            .ok_or(Error::RankDeficientData)?;
        for (i, qi) in lifted.iter().enumerate() {
            m_vals[i] = (qi.transpose() * &x_inv * qi)[(0, 0)];
        }

        let (i_max, &max_m) = argmax(&m_vals);
        if max_m <= threshold {
            converged = true;
            break;
        }

        // candidate away step: smallest M among active weights
        let mut i_min = usize::MAX;
        let mut min_m = f64::INFINITY;
        for i in 0..n {
            if u[i] > 0.0 && m_vals[i] < min_m {
                min_m = m_vals[i];
                i_min = i;
            }
        }

        let add_gain = max_m - d1 as f64;
        let away_gain = d1 as f64 - min_m;
        if away_gain > add_gain && i_min != usize::MAX && min_m > 1.0 + 1e-12 {
            // away step: shift weight off the least-supported point
            let beta_opt = away_gain / (d1 as f64 * (min_m - 1.0));
            let beta_max = u[i_min] / (1.0 - u[i_min]);
            let beta = beta_opt.min(beta_max);
            for w in u.iter_mut() {
                *w *= 1.0 + beta;
            }
            u[i_min] -= beta;
            if u[i_min] < 1e-300 {
                u[i_min] = 0.0;
            }
        } else {
            let lambda = add_gain / (d1 as f64 * (max_m - 1.0));
            for w in u.iter_mut() {
                *w *= 1.0 - lambda;
            }
            u[i_max] += lambda;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure { max_iter });
    }

    // center c = P^T u, scatter S = P^T diag(u) P - c c^T, E = S^{-1} / dim
    let mut center = DVector::<f64>::zeros(dim);
    for i in 0..n {
        for j in 0..dim {
            center[j] += u[i] * points[i * dim + j];
        }
    }
    let mut scatter = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..n {
        if u[i] > 0.0 {
            let xi = DVector::from_iterator(dim, (0..dim).map(|j| points[i * dim + j]));
            scatter.ger(u[i], &xi, &xi, 1.0);
        }
    }
    scatter.ger(-1.0, &center, &center, 1.0);
    symmetrize(&mut scatter);

    let mut shape = scatter.try_inverse().ok_or(Error::RankDeficientData)? / dim as f64;
    symmetrize(&mut shape);
    Ok(Mvee { shape, center })
}

/// Symmetric positive-semidefinite square root via eigendecomposition.
pub fn symmetric_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let v = &eig.eigenvectors;
    let mut out = v * DMatrix::from_diagonal(&DVector::from_vec(roots)) * v.transpose();
    symmetrize(&mut out);
    out
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for a in 0..n {
        for b in 0..a {
            let s = 0.5 * (m[(a, b)] + m[(b, a)]);
            m[(a, b)] = s;
            m[(b, a)] = s;
        }
    }
}

fn argmax(values: &[f64]) -> (usize, &f64) {
    values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
}

/// Error out when the points lie in a proper affine subspace.
fn check_affine_rank(points: &[f64], n: usize, dim: usize) -> Result<()> {
    let mut mean = vec![0.0; dim];
    for i in 0..n {
        for j in 0..dim {
            mean[j] += points[i * dim + j];
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }
    let centered = DMatrix::from_fn(n, dim, |i, j| points[i * dim + j] - mean[j]);
    let svd = centered.svd(false, false);
    let max_sv = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if max_sv == 0.0 {
        return Err(Error::RankDeficientData);
    }
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-10 * max_sv)
        .count();
    if rank < dim {
        return Err(Error::RankDeficientData);
    }
    Ok(())
}
