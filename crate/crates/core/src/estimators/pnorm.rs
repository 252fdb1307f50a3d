//! Scenario p-norm-ball estimates: `{ x : ||A x - b||_p <= 1 }`.
//!
//! `p = 2` is the minimum-volume enclosing ellipsoid of the samples; `p = inf`
//! with diagonal `A` is the tight axis-aligned bounding box in closed form.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::mvee::{self, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::ode::SampleSet;

/// Norm exponent of a [`PNormBall`]; the scenario program is solved for 2 and
/// infinity (diagonal `A`) only. Serialized as the number `2` or the string
/// `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PNorm {
    Two,
    Inf,
}

impl serde::Serialize for PNorm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PNorm::Two => s.serialize_u64(2),
            PNorm::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> serde::Deserialize<'de> for PNorm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = PNorm;

            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("2 or \"inf\"")
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<PNorm, E> {
                if v == 2 {
                    Ok(PNorm::Two)
                } else {
                    Err(E::custom(format!("unsupported norm exponent {v}")))
                }
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<PNorm, E> {
                if v == 2 {
                    Ok(PNorm::Two)
                } else {
                    Err(E::custom(format!("unsupported norm exponent {v}")))
                }
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<PNorm, E> {
                if v == 2.0 {
                    Ok(PNorm::Two)
                } else if v.is_infinite() && v > 0.0 {
                    Ok(PNorm::Inf)
                } else {
                    Err(E::custom(format!("unsupported norm exponent {v}")))
                }
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<PNorm, E> {
                match v {
                    "inf" | "Inf" | "INF" | "infinity" => Ok(PNorm::Inf),
                    "2" => Ok(PNorm::Two),
                    other => Err(E::custom(format!("unsupported norm exponent `{other}`"))),
                }
            }
        }
        d.deserialize_any(Visitor)
    }
}

/// Minimum width substituted for a zero-extent coordinate so that `A` stays
/// invertible.
pub const MIN_BOX_WIDTH: f64 = 1e-12;

/// Fitted p-norm ball `{ x : ||A x - b||_p <= 1 }` with symmetric `A`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PNormBall {
    pub p: PNorm,
    #[serde(rename = "A", with = "crate::serde_mat")]
    pub a: DMatrix<f64>,
    #[serde(with = "crate::serde_mat::vec")]
    pub b: DVector<f64>,
    /// Solver tolerance behind the `1 + 10*tol` membership slack (`p = 2`).
    pub tol: f64,
}

impl PNormBall {
    pub fn state_dim(&self) -> usize {
        self.b.len()
    }

    /// `||A x - b||_p`.
    pub fn defining_value(&self, x: &[f64]) -> f64 {
        let v = DVector::from_iterator(x.len(), x.iter().cloned());
        let r = &self.a * v - &self.b;
        match self.p {
            PNorm::Two => r.norm(),
            PNorm::Inf => r.iter().fold(0.0f64, |acc, &v| acc.max(v.abs())),
        }
    }

    /// Membership threshold slack: `10 * tol` for the ellipsoid (the dual
    /// stops at a relative violation of `tol`), ulp-level for the box.
    pub fn slack(&self) -> f64 {
        match self.p {
            PNorm::Two => 10.0 * self.tol,
            PNorm::Inf => 1e-12,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.defining_value(x) <= 1.0 + self.slack()
    }
}

/// Fit the scenario ball to the terminal states of `samples`.
pub fn fit_pnorm_ball(samples: &SampleSet, p: PNorm) -> Result<PNormBall> {
    fit_pnorm_rows(samples.terminal_flat(), samples.state_dim(), p, DEFAULT_TOL)
}

/// Same fit on a raw `n x dim` row-major state array with an explicit
/// ellipsoid tolerance.
pub fn fit_pnorm_rows(rows: &[f64], dim: usize, p: PNorm, tol: f64) -> Result<PNormBall> {
    if rows.is_empty() || dim == 0 {
        return Err(Error::EmptySampleSet);
    }
    match p {
        PNorm::Two => {
            let e = mvee::mvee(rows, dim, tol, DEFAULT_MAX_ITER)?;
            let a = mvee::symmetric_sqrt(&e.shape);
            let b = &a * &e.center;
            Ok(PNormBall { p, a, b, tol })
        }
        PNorm::Inf => {
            let n = rows.len() / dim;
            let mut a = DMatrix::<f64>::zeros(dim, dim);
            let mut b = DVector::<f64>::zeros(dim);
            for j in 0..dim {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i in 0..n {
                    let v = rows[i * dim + j];
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                let width = (hi - lo).max(MIN_BOX_WIDTH);
                let ajj = 2.0 / width;
                a[(j, j)] = ajj;
                b[j] = ajj * (hi + lo) / 2.0;
            }
            Ok(PNormBall { p, a, b, tol })
        }
    }
}

/// Volume proxy `-log det A` via Cholesky; errors when `A` is not positive
/// definite.
pub fn negative_log_det(a: &DMatrix<f64>) -> Result<f64> {
    let chol = a.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let mut log_det = 0.0;
    for i in 0..a.nrows() {
        log_det += l[(i, i)].ln();
    }
    Ok(-2.0 * log_det)
}
