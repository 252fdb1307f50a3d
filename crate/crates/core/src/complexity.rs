//! Minimum sample counts guaranteeing the (epsilon, delta) coverage bound,
//! one formula per estimation method. Logarithms are natural.

use crate::error::{Error, Result};

/// Probabilistic parameters of a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbParams {
    /// Accuracy: the estimate must cover at least `1 - epsilon` of the reach
    /// distribution's mass.
    pub epsilon: f64,
    /// Confidence: the coverage claim may fail with probability at most
    /// `delta` over the drawn samples.
    pub delta: f64,
    /// State dimension after any dimension isolation.
    pub state_dim: usize,
    /// Monomial half-degree (inverse-Christoffel method only).
    pub k: Option<usize>,
}

impl ProbParams {
    pub fn new(epsilon: f64, delta: f64, state_dim: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParam {
                field: "epsilon",
                reason: format!("must lie in (0, 1), got {epsilon}"),
            });
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParam {
                field: "delta",
                reason: format!("must lie in (0, 1), got {delta}"),
            });
        }
        if state_dim == 0 {
            return Err(Error::InvalidParam {
                field: "state_dim",
                reason: "must be positive".into(),
            });
        }
        Ok(Self {
            epsilon,
            delta,
            state_dim,
            k: None,
        })
    }

    pub fn with_degree(mut self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParam {
                field: "k",
                reason: "degree must be at least 1".into(),
            });
        }
        self.k = Some(k);
        Ok(self)
    }
}

/// Exact binomial coefficient in integer arithmetic; errors on overflow.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::BinomialOverflow)?;
        acc /= (i + 1) as u128; // exact: product of j consecutive integers is divisible by j!
    }
    Ok(acc)
}

/// Samples required by the p-norm-ball scenario program:
/// `ceil((1/eps) * (e/(e-1)) * (ln(1/delta) + (n^2 + 3n)/2))`.
pub fn pnorm_sample_count(p: &ProbParams) -> Result<u64> {
    let n = p.state_dim as f64;
    let e = std::f64::consts::E;
    let raw = (1.0 / p.epsilon) * (e / (e - 1.0)) * ((1.0 / p.delta).ln() + 0.5 * (n * n + 3.0 * n));
    Ok(raw.ceil() as u64)
}

/// Samples required by the inverse-Christoffel method:
/// `ceil((5/eps) * (ln(4/delta) + C(n + 2k, n) * ln(40/eps)))`.
pub fn christoffel_sample_count(p: &ProbParams) -> Result<u64> {
    let k = p.k.ok_or(Error::InvalidParam {
        field: "k",
        reason: "the Christoffel bound needs the polynomial degree".into(),
    })? as u64;
    let n = p.state_dim as u64;
    let binom = binomial(n + 2 * k, n)? as f64;
    let raw = (5.0 / p.epsilon) * ((4.0 / p.delta).ln() + binom * (40.0 / p.epsilon).ln());
    if !raw.is_finite() {
        return Err(Error::BinomialOverflow);
    }
    Ok(raw.ceil() as u64)
}
