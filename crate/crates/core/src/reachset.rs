//! Post-fit geometry: membership queries, dimension isolation, per-timestep
//! reach tubes, grid fields for contour plotting and unsafe-set checks.

use std::io::Write;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::christoffel::{fit_christoffel_rows, ChristoffelSet};
use crate::estimators::mvee::DEFAULT_TOL;
use crate::estimators::pnorm::{fit_pnorm_rows, PNorm, PNormBall};
use crate::estimators::MethodConfig;
use crate::ode::SampleSet;

/// A fitted set of either method.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum SetKind {
    Pnorm(PNormBall),
    Christoffel(ChristoffelSet),
}

/// A reach-set estimate together with the original state indices it covers.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReachEstimate {
    #[serde(flatten)]
    pub set: SetKind,
    pub dims: Vec<usize>,
}

impl ReachEstimate {
    /// Fit an estimate to the terminal states of `samples`.
    pub fn fit(samples: &SampleSet, method: &MethodConfig) -> Result<Self> {
        Self::fit_rows(
            samples.terminal_flat(),
            samples.state_dim(),
            samples.dims(),
            method,
        )
    }

    fn fit_rows(
        rows: &[f64],
        dim: usize,
        dims: &[usize],
        method: &MethodConfig,
    ) -> Result<Self> {
        let set = match method {
            MethodConfig::Pnorm { p } => {
                SetKind::Pnorm(fit_pnorm_rows(rows, dim, *p, DEFAULT_TOL)?)
            }
            MethodConfig::Christoffel { k, rho, normalize } => SetKind::Christoffel(
                fit_christoffel_rows(rows, dim, *k, *rho, *normalize)?,
            ),
        };
        Ok(ReachEstimate {
            set,
            dims: dims.to_vec(),
        })
    }

    /// Ambient dimension of the estimate.
    pub fn state_dim(&self) -> usize {
        match &self.set {
            SetKind::Pnorm(b) => b.state_dim(),
            SetKind::Christoffel(c) => c.state_dim(),
        }
    }

    /// Value of the defining function (`||Ax - b||_p` or `C(x)`).
    pub fn defining_value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.state_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.state_dim(),
                got: x.len(),
            });
        }
        Ok(match &self.set {
            SetKind::Pnorm(b) => b.defining_value(x),
            SetKind::Christoffel(c) => c.eval(x),
        })
    }

    /// Sublevel threshold of the defining function: 1 for p-norm balls, the
    /// level parameter for Christoffel sets.
    pub fn threshold(&self) -> f64 {
        match &self.set {
            SetKind::Pnorm(_) => 1.0,
            SetKind::Christoffel(c) => c.level,
        }
    }

    /// Membership tolerance added to the threshold (solver slack for the
    /// ellipsoid, ulp guard for the box, none for Christoffel).
    pub fn slack(&self) -> f64 {
        match &self.set {
            SetKind::Pnorm(b) => b.slack(),
            SetKind::Christoffel(_) => 0.0,
        }
    }

    /// Membership: defining value at most `threshold + slack`.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        Ok(self.defining_value(x)? <= self.threshold() + self.slack())
    }
}

/// Project a sample set onto a subset of its dimensions (strictly increasing
/// indices into the set's current columns). Shrinks the state dimension that
/// the sample-count formulas depend on.
pub fn iso_dim(samples: &SampleSet, dims: &[usize]) -> Result<SampleSet> {
    samples.project(dims)
}

/// A reach-set estimate per recorded time step.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReachTube {
    pub times: Vec<f64>,
    pub slices: Vec<ReachEstimate>,
}

impl ReachTube {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Fit one estimate per recorded time step; slices are fitted independently
/// with the same method. Requires full trajectories.
pub fn fit_tube(samples: &SampleSet, method: &MethodConfig) -> Result<ReachTube> {
    let full = samples.full().ok_or(Error::MissingFullTrajectories)?;
    let times = full.times.clone();
    let dim = samples.state_dim();
    let dims = samples.dims().to_vec();
    let mut slices = Vec::with_capacity(times.len());
    for t_idx in 0..times.len() {
        let rows = samples.slice_at(t_idx)?;
        let estimate =
            ReachEstimate::fit_rows(&rows, dim, &dims, method).map_err(|e| Error::TubeFit {
                time_index: t_idx,
                source: Box::new(e),
            })?;
        slices.push(estimate);
    }
    Ok(ReachTube { times, slices })
}

/// Defining-function values on a uniform lattice, with the sublevel threshold
/// a contour extractor needs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ScalarField {
    pub bounds: Vec<(f64, f64)>,
    pub grid_n: usize,
    pub threshold: f64,
    /// Row-major values: the last dimension's index varies fastest.
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    /// Lattice coordinate along axis `axis` at index `i`.
    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        lo + (hi - lo) * i as f64 / (self.grid_n - 1) as f64
    }

    pub fn value_2d(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid_n + j]
    }

    /// CSV rows `i,j[,k],x1,x2[,x3],value`.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        match self.dim() {
            2 => {
                writeln!(w, "i,j,x1,x2,value")?;
                for i in 0..self.grid_n {
                    for j in 0..self.grid_n {
                        writeln!(
                            w,
                            "{},{},{},{},{}",
                            i,
                            j,
                            self.coord(0, i),
                            self.coord(1, j),
                            self.value_2d(i, j)
                        )?;
                    }
                }
            }
            3 => {
                writeln!(w, "i,j,k,x1,x2,x3,value")?;
                let n = self.grid_n;
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            writeln!(
                                w,
                                "{},{},{},{},{},{},{}",
                                i,
                                j,
                                k,
                                self.coord(0, i),
                                self.coord(1, j),
                                self.coord(2, k),
                                self.values[(i * n + j) * n + k]
                            )?;
                        }
                    }
                }
            }
            d => panic!("unsupported field dimension {d}"),
        }
        Ok(())
    }

    /// The JSON sidecar describing the lattice.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "threshold": self.threshold,
            "bounds": self.bounds,
            "grid_n": self.grid_n,
        })
    }
}

/// Evaluate the estimate's defining function on a `grid_n^d` lattice over
/// `bounds` (`d` must be 2 or 3).
pub fn grid_contour(
    estimate: &ReachEstimate,
    bounds: &[(f64, f64)],
    grid_n: usize,
) -> Result<ScalarField> {
    let dim = estimate.state_dim();
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if bounds.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bounds.len(),
        });
    }
    if grid_n < 2 {
        return Err(Error::InvalidParam {
            field: "grid_n",
            reason: "at least 2 lattice points per axis".into(),
        });
    }
    let field = ScalarField {
        bounds: bounds.to_vec(),
        grid_n,
        threshold: estimate.threshold(),
        values: Vec::new(),
    };
    let mut values = vec![0.0; grid_n.pow(dim as u32)];
    let mut point = vec![0.0; dim];
    for (flat, v) in values.iter_mut().enumerate() {
        let mut rest = flat;
        for axis in (0..dim).rev() {
            point[axis] = field.coord(axis, rest % grid_n);
            rest /= grid_n;
        }
        *v = estimate.defining_value(&point)?;
    }
    Ok(ScalarField { values, ..field })
}

/// A region the system must avoid, written in original state indices.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum UnsafePredicate {
    /// Unsafe iff `coeffs . x >= offset`.
    Halfspace { coeffs: Vec<f64>, offset: f64 },
    /// Unsafe iff the distance to `center` in the two non-axis dimensions is
    /// at most `radius` (an infinite cylinder along `axis`).
    Cylinder {
        axis: usize,
        center: [f64; 2],
        radius: f64,
    },
}

impl UnsafePredicate {
    /// Reduce to the estimate's coordinate system. Errors if the predicate
    /// involves original dimensions not covered by `dims`.
    fn project(&self, dims: &[usize]) -> Result<ProjectedPredicate> {
        match self {
            UnsafePredicate::Halfspace { coeffs, offset } => {
                let mut projected = vec![0.0; dims.len()];
                for (orig, &c) in coeffs.iter().enumerate() {
                    if c == 0.0 {
                        continue;
                    }
                    match dims.iter().position(|&d| d == orig) {
                        Some(local) => projected[local] = c,
                        None => {
                            return Err(Error::DimensionOutOfRange {
                                dim: orig,
                                state_dim: dims.len(),
                            })
                        }
                    }
                }
                Ok(ProjectedPredicate::Halfspace {
                    coeffs: projected,
                    offset: *offset,
                })
            }
            UnsafePredicate::Cylinder {
                axis,
                center,
                radius,
            } => {
                if *radius <= 0.0 {
                    return Err(Error::InvalidParam {
                        field: "radius",
                        reason: "must be positive".into(),
                    });
                }
                let cross: Vec<usize> = (0..dims.len())
                    .filter(|&local| dims[local] != *axis)
                    .collect();
                if cross.len() != 2 {
                    return Err(Error::InvalidParam {
                        field: "axis",
                        reason: "a cylinder needs exactly two cross dimensions in the estimate"
                            .into(),
                    });
                }
                Ok(ProjectedPredicate::Cylinder {
                    cross: [cross[0], cross[1]],
                    center: *center,
                    radius: *radius,
                })
            }
        }
    }
}

enum ProjectedPredicate {
    Halfspace { coeffs: Vec<f64>, offset: f64 },
    Cylinder {
        cross: [usize; 2],
        center: [f64; 2],
        radius: f64,
    },
}

impl ProjectedPredicate {
    fn is_unsafe(&self, x: &[f64]) -> bool {
        match self {
            ProjectedPredicate::Halfspace { coeffs, offset } => {
                let v: f64 = coeffs.iter().zip(x).map(|(c, xi)| c * xi).sum();
                v >= *offset
            }
            ProjectedPredicate::Cylinder {
                cross,
                center,
                radius,
            } => {
                let dx = x[cross[0]] - center[0];
                let dy = x[cross[1]] - center[1];
                (dx * dx + dy * dy).sqrt() <= *radius
            }
        }
    }
}

/// Outcome of an unsafe-set check. Grid testing cannot certify clearance at
/// coarse resolution, hence the three-valued verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Intersects { witness: Vec<f64> },
    Clear,
    Unknown,
}

/// Minimum per-axis resolution at which an all-clear grid sweep is reported
/// as `Clear` rather than `Unknown`.
pub const CLEAR_GRID_MIN: usize = 64;

/// Check an estimate against an unsafe region over `bounds`.
///
/// For ellipsoids against halfspaces the exact support-function test decides;
/// otherwise a `grid_n`-per-axis lattice sweep looks for a point that is both
/// a member and unsafe. When `training` is given, its samples must lie inside
/// `bounds`.
pub fn check_unsafe(
    estimate: &ReachEstimate,
    predicate: &UnsafePredicate,
    bounds: &[(f64, f64)],
    grid_n: usize,
    training: Option<&SampleSet>,
) -> Result<Verdict> {
    let dim = estimate.state_dim();
    if bounds.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bounds.len(),
        });
    }
    if let Some(set) = training {
        for i in 0..set.n_samples() {
            let row = set.terminal_row(i);
            let inside = row
                .iter()
                .zip(bounds)
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi);
            if !inside {
                return Err(Error::BoundsTooSmall { sample: i });
            }
        }
    }
    let projected = predicate.project(&estimate.dims)?;

    // Exact route: ellipsoid vs halfspace via the support function.
    if let (SetKind::Pnorm(ball), ProjectedPredicate::Halfspace { coeffs, offset }) =
        (&estimate.set, &projected)
    {
        if ball.p == PNorm::Two {
            return Ok(ellipsoid_halfspace(ball, coeffs, *offset));
        }
    }

    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if grid_n < 2 {
        return Err(Error::InvalidParam {
            field: "grid_n",
            reason: "at least 2 lattice points per axis".into(),
        });
    }
    let coord = |axis: usize, i: usize| {
        let (lo, hi) = bounds[axis];
        lo + (hi - lo) * i as f64 / (grid_n - 1) as f64
    };
    let mut point = vec![0.0; dim];
    for flat in 0..grid_n.pow(dim as u32) {
        let mut rest = flat;
        for axis in (0..dim).rev() {
            point[axis] = coord(axis, rest % grid_n);
            rest /= grid_n;
        }
        if estimate.contains(&point)? && projected.is_unsafe(&point) {
            return Ok(Verdict::Intersects { witness: point });
        }
    }
    if grid_n >= CLEAR_GRID_MIN {
        Ok(Verdict::Clear)
    } else {
        Ok(Verdict::Unknown)
    }
}

/// Exact test: the ellipsoid `||Ax - b|| <= s` intersects `{c.x >= d}` iff
/// its support value `c.A^{-1}b + s*||A^{-1}c||` reaches `d`.
fn ellipsoid_halfspace(ball: &PNormBall, coeffs: &[f64], offset: f64) -> Verdict {
    let c = DVector::from_iterator(coeffs.len(), coeffs.iter().cloned());
    let s = 1.0 + ball.slack();
    let a_inv = match ball.a.clone().try_inverse() {
        Some(inv) => inv,
        None => return Verdict::Unknown,
    };
    let center = &a_inv * &ball.b;
    let a_inv_c = &a_inv * &c; // symmetric A: A^{-T} c = A^{-1} c
    let reach = a_inv_c.norm();
    let support = c.dot(&center) + s * reach;
    if support >= offset {
        let witness = if reach > 0.0 {
            &center + &a_inv * (&a_inv_c * (s / reach))
        } else {
            center
        };
        Verdict::Intersects {
            witness: witness.iter().cloned().collect(),
        }
    } else {
        Verdict::Clear
    }
}

/// Check every slice of a tube; returns the per-time verdicts.
pub fn check_unsafe_tube(
    tube: &ReachTube,
    predicate: &UnsafePredicate,
    bounds: &[(f64, f64)],
    grid_n: usize,
) -> Result<Vec<(f64, Verdict)>> {
    tube.times
        .iter()
        .zip(&tube.slices)
        .map(|(t, slice)| Ok((*t, check_unsafe(slice, predicate, bounds, grid_n, None)?)))
        .collect()
}

/// Aggregate slice verdicts: any intersection dominates, then any unknown.
pub fn aggregate_verdicts(per_time: &[(f64, Verdict)]) -> Verdict {
    for (_, v) in per_time {
        if let Verdict::Intersects { witness } = v {
            return Verdict::Intersects {
                witness: witness.clone(),
            };
        }
    }
    if per_time.iter().any(|(_, v)| *v == Verdict::Unknown) {
        Verdict::Unknown
    } else {
        Verdict::Clear
    }
}

/// The tight interval covered by a one-dimensional estimate.
///
/// Closed form for p-norm balls; for Christoffel sets the member range is
/// found by scanning `grid_n` lattice points over `bounds`.
pub fn interval_of(
    estimate: &ReachEstimate,
    bounds: (f64, f64),
    grid_n: usize,
) -> Result<(f64, f64)> {
    if estimate.state_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: estimate.state_dim(),
        });
    }
    match &estimate.set {
        SetKind::Pnorm(ball) => {
            let s = 1.0 + ball.slack();
            let a = ball.a[(0, 0)];
            let b = ball.b[0];
            Ok(((b - s) / a, (b + s) / a))
        }
        SetKind::Christoffel(_) => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 0..grid_n {
                let x = bounds.0 + (bounds.1 - bounds.0) * i as f64 / (grid_n - 1) as f64;
                if estimate.contains(&[x])? {
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
            }
            if lo.is_infinite() {
                return Err(Error::InvalidParam {
                    field: "bounds",
                    reason: "no member lattice point found in the scan range".into(),
                });
            }
            Ok((lo, hi))
        }
    }
}
