//! Data-driven reachability analysis.
//!
//! Estimates the forward reachable set of a dynamical system from i.i.d.
//! trajectory samples, with a PAC-style `(epsilon, delta)` guarantee: the
//! fitted set covers at least `1 - epsilon` of the reach distribution's mass
//! with probability at least `1 - delta` over the drawn samples.
//!
//! Two estimators are provided, each with its own sample-count bound:
//!
//! * scenario p-norm balls (`p = 2`: minimum-volume enclosing ellipsoid,
//!   `p = inf`: tight axis-aligned box), and
//! * empirical inverse Christoffel function sublevel sets.
//!
//! The typical workflow mirrors the module layout: describe a system
//! ([`ode::SystemSpec`], or one of the built-ins in [`systems`]), look up the
//! sample count for the target guarantee ([`complexity`]), draw samples
//! ([`ode::sample_system`]), fit ([`reachset::ReachEstimate::fit`] or
//! [`reachset::fit_tube`]) and query ([`reachset`]).

pub mod complexity;
pub mod contour;
pub mod disturbance;
pub mod error;
pub mod estimators;
pub mod ode;
pub mod reachset;
pub mod rng;
pub mod serde_mat;
pub mod systems;

pub use complexity::{christoffel_sample_count, pnorm_sample_count, ProbParams};
pub use disturbance::{DisturbanceInstance, DisturbanceSpec, ScalarDisturbance};
pub use error::{Error, Result};
pub use estimators::{
    fit_christoffel, fit_pnorm_ball, negative_log_det, ChristoffelSet, MethodConfig, PNorm,
    PNormBall,
};
pub use ode::{draw_initial, integrate, sample_system, SampleSet, SystemSpec, Trajectory};
pub use reachset::{
    check_unsafe, check_unsafe_tube, fit_tube, grid_contour, iso_dim, ReachEstimate, ReachTube,
    ScalarField, UnsafePredicate, Verdict,
};
