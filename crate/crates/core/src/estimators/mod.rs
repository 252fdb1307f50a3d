//! Reach-set estimators: scenario p-norm balls and empirical inverse
//! Christoffel sublevel sets.

pub mod christoffel;
pub mod monomials;
pub mod mvee;
pub mod pnorm;

pub use christoffel::{fit_christoffel, ChristoffelSet};
pub use monomials::monomials;
pub use pnorm::{fit_pnorm_ball, negative_log_det, PNorm, PNormBall};

use serde::{Deserialize, Serialize};

/// Estimation method plus its hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MethodConfig {
    Pnorm {
        p: PNorm,
    },
    Christoffel {
        k: usize,
        #[serde(default = "default_rho")]
        rho: f64,
        #[serde(default = "default_normalize")]
        normalize: bool,
    },
}

fn default_rho() -> f64 {
    1e-4
}

fn default_normalize() -> bool {
    true
}

impl MethodConfig {
    pub fn christoffel(k: usize) -> Self {
        MethodConfig::Christoffel {
            k,
            rho: default_rho(),
            normalize: default_normalize(),
        }
    }

    pub fn pnorm(p: PNorm) -> Self {
        MethodConfig::Pnorm { p }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MethodConfig::Pnorm { .. } => "p-Norm Ball",
            MethodConfig::Christoffel { .. } => "Inverse Christoffel Function",
        }
    }
}
