//! Empirical inverse Christoffel function fit.
//!
//! `C(x) = z_k(x)^T M_inv z_k(x)` where the moment matrix
//! `M = (1/N) sum_i z_k(x_i) z_k(x_i)^T` is averaged over the samples and
//! inverted with a ridge `rho` (pseudo-inverted when `rho = 0`). The estimate
//! is the sublevel set `{ x : C(x) <= level }` with `level` the maximum of
//! `C` over the training samples.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::monomials;
use crate::ode::SampleSet;

/// Relative singular-value cutoff for the `rho = 0` pseudo-inverse.
pub const PSEUDO_INVERSE_CUTOFF: f64 = 1e-10;

/// Fitted inverse-Christoffel sublevel set.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChristoffelSet {
    pub k: usize,
    pub rho: f64,
    pub normalize: bool,
    /// Per-dimension affine normalization: `x_norm = (x - shift) / scale`.
    pub shift: Vec<f64>,
    pub scale: Vec<f64>,
    #[serde(rename = "M_inv", with = "crate::serde_mat")]
    pub m_inv: DMatrix<f64>,
    pub level: f64,
    /// Dimensions whose empirical standard deviation was zero (scale forced
    /// to 1). Diagnostic only; not part of the serialized format.
    #[serde(skip)]
    pub degenerate_dims: Vec<usize>,
}

impl ChristoffelSet {
    pub fn state_dim(&self) -> usize {
        self.shift.len()
    }

    /// Evaluate `C(x)` (in normalized coordinates when normalization is on).
    pub fn eval(&self, x: &[f64]) -> f64 {
        let z = self.features(x);
        (&z.transpose() * &self.m_inv * &z)[(0, 0)]
    }

    /// Membership: `C(x) <= level`.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.eval(x) <= self.level
    }

    fn features(&self, x: &[f64]) -> DVector<f64> {
        let normed: Vec<f64> = x
            .iter()
            .zip(self.shift.iter().zip(&self.scale))
            .map(|(v, (sh, sc))| (v - sh) / sc)
            .collect();
        DVector::from_vec(monomials::monomials(&normed, self.k))
    }
}

/// Fit the sublevel-set estimate to the terminal states of `samples`.
pub fn fit_christoffel(
    samples: &SampleSet,
    k: usize,
    rho: f64,
    normalize: bool,
) -> Result<ChristoffelSet> {
    fit_christoffel_rows(
        samples.terminal_flat(),
        samples.state_dim(),
        k,
        rho,
        normalize,
    )
}

/// Same fit on a raw `n x dim` row-major state array (used for tube slices).
///
/// The fit runs in stages that callers can also drive individually (for
/// per-stage timing): [`normalization`], [`build_moment`], [`invert_moment`],
/// [`max_level`].
pub fn fit_christoffel_rows(
    rows: &[f64],
    dim: usize,
    k: usize,
    rho: f64,
    normalize: bool,
) -> Result<ChristoffelSet> {
    if rows.is_empty() || dim == 0 {
        return Err(Error::EmptySampleSet);
    }
    if rho < 0.0 {
        return Err(Error::InvalidParam {
            field: "rho",
            reason: "ridge constant must be nonnegative".into(),
        });
    }
    let (shift, scale, degenerate_dims) = normalization(rows, dim, normalize);
    let moment = build_moment(rows, dim, k, &shift, &scale);
    let m_inv = invert_moment(moment, rho);
    let mut set = ChristoffelSet {
        k,
        rho,
        normalize,
        shift,
        scale,
        m_inv,
        level: 0.0,
        degenerate_dims,
    };
    set.level = max_level(&set, rows);
    Ok(set)
}

/// Per-dimension `(shift, scale, degenerate_dims)`: zero mean and unit
/// standard deviation per coordinate; a zero-spread coordinate keeps scale 1
/// and is reported as degenerate.
pub fn normalization(rows: &[f64], dim: usize, normalize: bool) -> (Vec<f64>, Vec<f64>, Vec<usize>) {
    let n = rows.len() / dim;
    let mut shift = vec![0.0; dim];
    let mut scale = vec![1.0; dim];
    let mut degenerate_dims = Vec::new();
    if normalize {
        for j in 0..dim {
            let mean = (0..n).map(|i| rows[i * dim + j]).sum::<f64>() / n as f64;
            let var = (0..n)
                .map(|i| {
                    let d = rows[i * dim + j] - mean;
                    d * d
                })
                .sum::<f64>()
                / n as f64;
            let std = var.sqrt();
            shift[j] = mean;
            if std == 0.0 {
                degenerate_dims.push(j);
                scale[j] = 1.0;
            } else {
                scale[j] = std;
            }
        }
    }
    (shift, scale, degenerate_dims)
}

/// The empirical moment matrix `M = (1/N) sum_i z_k(x_i) z_k(x_i)^T`,
/// accumulated in sample order (deterministic).
pub fn build_moment(
    rows: &[f64],
    dim: usize,
    k: usize,
    shift: &[f64],
    scale: &[f64],
) -> DMatrix<f64> {
    let n = rows.len() / dim;
    let exps = monomials::exponents(dim, k);
    let d = exps.len();
    let mut powers = vec![0.0; dim * (k + 1)];
    let mut z = vec![0.0; d];
    let mut normed = vec![0.0; dim];

    let mut moment = DMatrix::<f64>::zeros(d, d);
    for i in 0..n {
        for j in 0..dim {
            normed[j] = (rows[i * dim + j] - shift[j]) / scale[j];
        }
        monomials::eval_into(&normed, k, &exps, &mut powers, &mut z);
        for a in 0..d {
            let za = z[a];
            for b in a..d {
                moment[(a, b)] += za * z[b];
            }
        }
    }
    moment /= n as f64;
    for a in 0..d {
        for b in 0..a {
            moment[(a, b)] = moment[(b, a)];
        }
    }
    moment
}

/// Maximum of `C` over the training rows: the level parameter.
pub fn max_level(set: &ChristoffelSet, rows: &[f64]) -> f64 {
    let dim = set.state_dim();
    let n = rows.len() / dim;
    let mut level = f64::NEG_INFINITY;
    for i in 0..n {
        level = level.max(set.eval(&rows[i * dim..(i + 1) * dim]));
    }
    level
}

/// `(M + rho I)^{-1}` via the symmetric eigendecomposition; for `rho = 0`
/// eigenvalues below `cutoff * max` are dropped (pseudo-inverse).
pub fn invert_moment(moment: DMatrix<f64>, rho: f64) -> DMatrix<f64> {
    let d = moment.nrows();
    let eig = moment.symmetric_eigen();
    let max_eig = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let inv_eig: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            if rho > 0.0 {
                1.0 / (l + rho)
            } else if l > PSEUDO_INVERSE_CUTOFF * max_eig && l > 0.0 {
                1.0 / l
            } else {
                0.0
            }
        })
        .collect();
    let v = &eig.eigenvectors;
    let mut m_inv = v * DMatrix::from_diagonal(&DVector::from_vec(inv_eig)) * v.transpose();
    // enforce exact symmetry lost to rounding
    for a in 0..d {
        for b in 0..a {
            let s = 0.5 * (m_inv[(a, b)] + m_inv[(b, a)]);
            m_inv[(a, b)] = s;
            m_inv[(b, a)] = s;
        }
    }
    m_inv
}
