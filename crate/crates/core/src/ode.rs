//! System definition, fixed-step integration and i.i.d. trajectory sampling.
//!
//! A [`SystemSpec`] couples a dynamics function with an initial box, a uniform
//! time grid and an optional disturbance model. [`sample_system`] draws `n`
//! independent trajectories from it, optionally in parallel; the result is a
//! pure function of `(spec, n, seed, keep_full)` regardless of worker count.

use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::disturbance::{DisturbanceInstance, DisturbanceSpec};
use crate::error::{Error, Result};
use crate::rng::{sample_stream, uniform_closed, SampleStream};

/// Dynamics: writes the state derivative at `(state, t)` into `out`.
/// `dist` carries the per-dimension disturbance values at `t` when the system
/// is disturbed, `None` otherwise.
pub type DynamicsFn = Arc<dyn Fn(&[f64], f64, Option<&[f64]>, &mut [f64]) + Send + Sync>;

/// Context handed to a custom sampler for one sample.
pub struct SamplerCtx<'a> {
    pub seed: u64,
    pub index: u64,
    pub rng: &'a mut SampleStream,
    pub times: &'a [f64],
}

/// User-supplied replacement for dynamics-based sampling. Must return one
/// trajectory on the given time grid.
pub type CustomSampler = Arc<dyn Fn(SamplerCtx<'_>) -> Result<Trajectory> + Send + Sync>;

/// A dynamical system plus the distribution its trajectories are drawn from.
#[derive(Clone)]
pub struct SystemSpec {
    state_dim: usize,
    dynamics: Option<DynamicsFn>,
    init_intervals: Vec<(f64, f64)>,
    t0: f64,
    t1: f64,
    parts: usize,
    disturbance: Option<DisturbanceSpec>,
    custom_sampler: Option<CustomSampler>,
}

impl fmt::Debug for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemSpec")
            .field("state_dim", &self.state_dim)
            .field("init_intervals", &self.init_intervals)
            .field("t0", &self.t0)
            .field("t1", &self.t1)
            .field("parts", &self.parts)
            .field("disturbed", &self.disturbance.is_some())
            .field("custom_sampler", &self.custom_sampler.is_some())
            .finish()
    }
}

impl SystemSpec {
    /// Dynamics-based system over the uniform grid of `parts` points on
    /// `[t0, t1]`, with initial states drawn uniformly from `init_intervals`.
    pub fn new(
        state_dim: usize,
        dynamics: DynamicsFn,
        init_intervals: Vec<(f64, f64)>,
        t0: f64,
        t1: f64,
        parts: usize,
    ) -> Result<Self> {
        if state_dim == 0 {
            return Err(Error::InvalidParam {
                field: "state_dim",
                reason: "must be positive".into(),
            });
        }
        if init_intervals.len() != state_dim {
            return Err(Error::DimensionMismatch {
                expected: state_dim,
                got: init_intervals.len(),
            });
        }
        for (i, (lo, hi)) in init_intervals.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(Error::InvalidParam {
                    field: "init_intervals",
                    reason: format!("interval {i} = [{lo}, {hi}] is not a valid closed interval"),
                });
            }
        }
        validate_grid(t0, t1, parts)?;
        Ok(Self {
            state_dim,
            dynamics: Some(dynamics),
            init_intervals,
            t0,
            t1,
            parts,
            disturbance: None,
            custom_sampler: None,
        })
    }

    /// System whose trajectories come from a user-supplied sampler instead of
    /// dynamics-based integration.
    pub fn from_sampler(
        state_dim: usize,
        sampler: CustomSampler,
        t0: f64,
        t1: f64,
        parts: usize,
    ) -> Result<Self> {
        if state_dim == 0 {
            return Err(Error::InvalidParam {
                field: "state_dim",
                reason: "must be positive".into(),
            });
        }
        validate_grid(t0, t1, parts)?;
        Ok(Self {
            state_dim,
            dynamics: None,
            init_intervals: Vec::new(),
            t0,
            t1,
            parts,
            disturbance: None,
            custom_sampler: Some(sampler),
        })
    }

    /// Attach a disturbance model (dynamics-based systems only).
    pub fn with_disturbance(mut self, disturbance: DisturbanceSpec) -> Result<Self> {
        if self.custom_sampler.is_some() {
            return Err(Error::InvalidParam {
                field: "disturbance",
                reason: "a custom sampler models its own disturbance".into(),
            });
        }
        if disturbance.state_dim() != self.state_dim {
            return Err(Error::DimensionMismatch {
                expected: self.state_dim,
                got: disturbance.state_dim(),
            });
        }
        self.disturbance = Some(disturbance);
        Ok(self)
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn init_intervals(&self) -> &[(f64, f64)] {
        &self.init_intervals
    }

    pub fn disturbance(&self) -> Option<&DisturbanceSpec> {
        self.disturbance.as_ref()
    }

    pub fn has_custom_sampler(&self) -> bool {
        self.custom_sampler.is_some()
    }

    /// The uniform time grid `t0 = grid[0] < ... < grid[parts-1] = t1`.
    pub fn time_grid(&self) -> Vec<f64> {
        let span = self.t1 - self.t0;
        let steps = (self.parts - 1) as f64;
        let mut grid: Vec<f64> = (0..self.parts)
            .map(|i| self.t0 + span * (i as f64) / steps)
            .collect();
        grid[self.parts - 1] = self.t1;
        grid
    }
}

fn validate_grid(t0: f64, t1: f64, parts: usize) -> Result<()> {
    if !(t0.is_finite() && t1.is_finite()) || t1 <= t0 {
        return Err(Error::InvalidParam {
            field: "t_range",
            reason: format!("need finite t1 > t0, got [{t0}, {t1}]"),
        });
    }
    if parts < 2 {
        return Err(Error::InvalidParam {
            field: "parts",
            reason: "at least 2 grid points are required".into(),
        });
    }
    Ok(())
}

/// One trajectory on the system's time grid, stored row-major
/// (`parts x state_dim`).
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    state_dim: usize,
    states: Vec<f64>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, state_dim: usize, states: Vec<f64>) -> Result<Self> {
        if states.len() != times.len() * state_dim {
            return Err(Error::MalformedTrajectory(format!(
                "expected {} x {} states, got {} values",
                times.len(),
                state_dim,
                states.len()
            )));
        }
        Ok(Self {
            times,
            state_dim,
            states,
        })
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// State at time index `i`.
    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.state_dim..(i + 1) * self.state_dim]
    }

    pub fn terminal(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    pub fn states_flat(&self) -> &[f64] {
        &self.states
    }
}

/// Classical fixed-step 4th-order Runge-Kutta over the spec's uniform grid.
///
/// Disturbance values, when an instance is supplied, are evaluated at the
/// exact stage times `t`, `t + h/2`, `t + h` and passed to the dynamics.
/// A non-finite state aborts with the first bad time index.
pub fn integrate(
    spec: &SystemSpec,
    x0: &[f64],
    disturbance: Option<&DisturbanceInstance>,
) -> Result<Trajectory> {
    let dynamics = spec.dynamics.as_ref().ok_or(Error::InvalidParam {
        field: "dynamics",
        reason: "integrate requires a dynamics-based system".into(),
    })?;
    let n = spec.state_dim;
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }

    let times = spec.time_grid();
    let h = (spec.t1 - spec.t0) / (spec.parts - 1) as f64;

    let mut states = Vec::with_capacity(spec.parts * n);
    states.extend_from_slice(x0);

    let mut x = x0.to_vec();
    let mut stage = vec![0.0; n];
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut dist_buf = vec![0.0; n];

    let eval = |x: &[f64], t: f64, out: &mut [f64], dist_buf: &mut [f64]| -> Result<()> {
        let dist = match disturbance {
            Some(inst) => {
                inst.eval_all(t, dist_buf)?;
                Some(&dist_buf[..])
            }
            None => None,
        };
        dynamics(x, t, dist, out);
        Ok(())
    };

    for (step, &t) in times.iter().enumerate().take(spec.parts - 1) {
        eval(&x, t, &mut k1, &mut dist_buf)?;
        for j in 0..n {
            stage[j] = x[j] + 0.5 * h * k1[j];
        }
        eval(&stage, t + 0.5 * h, &mut k2, &mut dist_buf)?;
        for j in 0..n {
            stage[j] = x[j] + 0.5 * h * k2[j];
        }
        eval(&stage, t + 0.5 * h, &mut k3, &mut dist_buf)?;
        for j in 0..n {
            stage[j] = x[j] + h * k3[j];
        }
        eval(&stage, t + h, &mut k4, &mut dist_buf)?;
        for j in 0..n {
            x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::IntegrationDiverged {
                time_index: step + 1,
                sample: None,
            });
        }
        states.extend_from_slice(&x);
    }

    Trajectory::new(times, n, states)
}

/// Initial state with each coordinate drawn independently from its interval.
pub fn draw_initial(spec: &SystemSpec, rng: &mut SampleStream) -> Vec<f64> {
    spec.init_intervals
        .iter()
        .map(|&(lo, hi)| uniform_closed(rng, lo, hi))
        .collect()
}

/// Full trajectories of a sample set: shared time grid plus an
/// `n_samples x parts x state_dim` array.
#[derive(Clone, Debug, PartialEq)]
pub struct FullTrajectories {
    pub times: Vec<f64>,
    states: Vec<f64>,
    state_dim: usize,
}

impl FullTrajectories {
    pub fn parts(&self) -> usize {
        self.times.len()
    }

    /// State of sample `sample` at time index `i`.
    pub fn state(&self, sample: usize, i: usize) -> &[f64] {
        let stride = self.times.len() * self.state_dim;
        let base = sample * stride + i * self.state_dim;
        &self.states[base..base + self.state_dim]
    }
}

/// `n` i.i.d. draws from the reach distribution: terminal states, and the
/// full trajectories when requested.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    n_samples: usize,
    state_dim: usize,
    terminal: Vec<f64>,
    full: Option<FullTrajectories>,
    seed: u64,
    /// Original state indices covered by each column (identity unless the set
    /// was produced by dimension isolation).
    dims: Vec<usize>,
}

impl SampleSet {
    pub fn from_terminal(terminal: Vec<f64>, state_dim: usize, seed: u64) -> Result<Self> {
        if state_dim == 0 || !terminal.len().is_multiple_of(state_dim) {
            return Err(Error::DimensionMismatch {
                expected: state_dim,
                got: terminal.len(),
            });
        }
        let n_samples = terminal.len() / state_dim;
        Ok(Self {
            n_samples,
            state_dim,
            terminal,
            full: None,
            seed,
            dims: (0..state_dim).collect(),
        })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Terminal state of sample `i`.
    pub fn terminal_row(&self, i: usize) -> &[f64] {
        &self.terminal[i * self.state_dim..(i + 1) * self.state_dim]
    }

    pub fn terminal_flat(&self) -> &[f64] {
        &self.terminal
    }

    pub fn full(&self) -> Option<&FullTrajectories> {
        self.full.as_ref()
    }

    /// Rows of sample states at one time index (requires full trajectories).
    pub fn slice_at(&self, time_index: usize) -> Result<Vec<f64>> {
        let full = self.full.as_ref().ok_or(Error::MissingFullTrajectories)?;
        let mut out = Vec::with_capacity(self.n_samples * self.state_dim);
        for s in 0..self.n_samples {
            out.extend_from_slice(full.state(s, time_index));
        }
        Ok(out)
    }

    /// Keep every `every`-th recorded time slice (the terminal slice is always
    /// kept); thins the stored full trajectories in place.
    pub fn thin_full(&mut self, every: usize) {
        if every <= 1 {
            return;
        }
        let Some(full) = self.full.take() else {
            return;
        };
        let parts = full.parts();
        let mut keep: Vec<usize> = (0..parts).step_by(every).collect();
        if *keep.last().unwrap() != parts - 1 {
            keep.push(parts - 1);
        }
        let times: Vec<f64> = keep.iter().map(|&i| full.times[i]).collect();
        let mut states = Vec::with_capacity(self.n_samples * keep.len() * self.state_dim);
        for s in 0..self.n_samples {
            for &i in &keep {
                states.extend_from_slice(full.state(s, i));
            }
        }
        self.full = Some(FullTrajectories {
            times,
            states,
            state_dim: self.state_dim,
        });
    }

    /// Projection onto `dims` (strictly increasing original column indices).
    pub(crate) fn project(&self, dims: &[usize]) -> Result<SampleSet> {
        if dims.is_empty() {
            return Err(Error::InvalidParam {
                field: "dims",
                reason: "at least one dimension is required".into(),
            });
        }
        let mut prev: Option<usize> = None;
        for &d in dims {
            if d >= self.state_dim {
                return Err(Error::DimensionOutOfRange {
                    dim: d,
                    state_dim: self.state_dim,
                });
            }
            if let Some(p) = prev {
                if d == p {
                    return Err(Error::DuplicateDimension { dim: d });
                }
                if d < p {
                    return Err(Error::InvalidParam {
                        field: "dims",
                        reason: "indices must be strictly increasing".into(),
                    });
                }
            }
            prev = Some(d);
        }

        let m = dims.len();
        let mut terminal = Vec::with_capacity(self.n_samples * m);
        for i in 0..self.n_samples {
            let row = self.terminal_row(i);
            terminal.extend(dims.iter().map(|&d| row[d]));
        }
        let full = self.full.as_ref().map(|full| {
            let parts = full.parts();
            let mut states = Vec::with_capacity(self.n_samples * parts * m);
            for s in 0..self.n_samples {
                for i in 0..parts {
                    let row = full.state(s, i);
                    states.extend(dims.iter().map(|&d| row[d]));
                }
            }
            FullTrajectories {
                times: full.times.clone(),
                states,
                state_dim: m,
            }
        });
        Ok(SampleSet {
            n_samples: self.n_samples,
            state_dim: m,
            terminal,
            full,
            seed: self.seed,
            dims: dims.iter().map(|&d| self.dims[d]).collect(),
        })
    }

    /// CSV of terminal states: header `x1,...,xn` (original-index labels), one
    /// row per sample.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header: Vec<String> = self.dims.iter().map(|d| format!("x{}", d + 1)).collect();
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.n_samples {
            let row: Vec<String> = self.terminal_row(i).iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// CSV of full trajectories: `sample,t,x1,...,xn`.
    pub fn full_to_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let full = self.full.as_ref().ok_or(Error::MissingFullTrajectories)?;
        let header: Vec<String> = self.dims.iter().map(|d| format!("x{}", d + 1)).collect();
        writeln!(w, "sample,t,{}", header.join(",")).map_err(io_err)?;
        for s in 0..self.n_samples {
            for i in 0..full.parts() {
                let row: Vec<String> = full.state(s, i).iter().map(|v| v.to_string()).collect();
                writeln!(w, "{},{},{}", s, full.times[i], row.join(",")).map_err(io_err)?;
            }
        }
        Ok(())
    }

    /// Parse a terminal-state CSV produced by [`SampleSet::to_csv`].
    pub fn from_csv<R: BufRead>(reader: R, seed: u64) -> Result<SampleSet> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let dims = parse_header_dims(&header)?;
        let state_dim = dims.len();
        let mut terminal = Vec::new();
        let mut n = 0usize;
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != state_dim {
                return Err(Error::Parse(format!(
                    "row {}: expected {} fields, got {}",
                    lineno + 2,
                    state_dim,
                    fields.len()
                )));
            }
            for f in fields {
                terminal.push(
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("row {}: {e}", lineno + 2)))?,
                );
            }
            n += 1;
        }
        if n == 0 {
            return Err(Error::EmptySampleSet);
        }
        Ok(SampleSet {
            n_samples: n,
            state_dim,
            terminal,
            full: None,
            seed,
            dims,
        })
    }

    /// Parse a full-trajectory CSV produced by [`SampleSet::full_to_csv`].
    pub fn from_full_csv<R: BufRead>(reader: R, seed: u64) -> Result<SampleSet> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 3 || cols[0] != "sample" || cols[1] != "t" {
            return Err(Error::Parse("expected header sample,t,x...".into()));
        }
        let dims = parse_header_dims(&cols[2..].join(","))?;
        let state_dim = dims.len();

        let mut times: Vec<f64> = Vec::new();
        let mut states: Vec<f64> = Vec::new();
        let mut cur = 0usize; // current sample index
        let mut row = 0usize; // row within the current sample
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |e: &dyn fmt::Display| Error::Parse(format!("row {}: {e}", lineno + 2));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != state_dim + 2 {
                return Err(bad(&format!(
                    "expected {} fields, got {}",
                    state_dim + 2,
                    fields.len()
                )));
            }
            let sample: usize = fields[0].parse().map_err(|e| bad(&e))?;
            let t: f64 = fields[1].parse().map_err(|e| bad(&e))?;
            if sample != cur {
                if sample != cur + 1 {
                    return Err(bad(&"sample indices out of order"));
                }
                if row != times.len() {
                    return Err(bad(&format!(
                        "sample {cur} has {row} rows, expected {}",
                        times.len()
                    )));
                }
                cur = sample;
                row = 0;
            }
            if cur == 0 {
                times.push(t);
            }
            for f in &fields[2..] {
                states.push(f.trim().parse::<f64>().map_err(|e| bad(&e))?);
            }
            row += 1;
        }
        if times.is_empty() {
            return Err(Error::EmptySampleSet);
        }
        if row != times.len() {
            return Err(Error::Parse(format!(
                "sample {cur} has {row} rows, expected {}",
                times.len()
            )));
        }
        let n_samples = cur + 1;
        let parts = times.len();
        if states.len() != n_samples * parts * state_dim {
            return Err(Error::Parse("ragged trajectory table".into()));
        }
        let mut terminal = Vec::with_capacity(n_samples * state_dim);
        for s in 0..n_samples {
            let base = s * parts * state_dim + (parts - 1) * state_dim;
            terminal.extend_from_slice(&states[base..base + state_dim]);
        }
        Ok(SampleSet {
            n_samples,
            state_dim,
            terminal,
            full: Some(FullTrajectories {
                times,
                states,
                state_dim,
            }),
            seed,
            dims,
        })
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Parse(e.to_string())
}

fn parse_header_dims(header: &str) -> Result<Vec<usize>> {
    header
        .split(',')
        .map(|c| {
            let c = c.trim();
            c.strip_prefix('x')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .map(|i| i - 1)
                .ok_or_else(|| Error::Parse(format!("bad column label `{c}`")))
        })
        .collect()
}

fn draw_one(spec: &SystemSpec, seed: u64, index: u64) -> Result<Trajectory> {
    let mut rng = sample_stream(seed, index);
    if let Some(sampler) = &spec.custom_sampler {
        let times = spec.time_grid();
        let traj = sampler(SamplerCtx {
            seed,
            index,
            rng: &mut rng,
            times: &times,
        })?;
        if traj.state_dim() != spec.state_dim || traj.len() != spec.parts {
            return Err(Error::MalformedTrajectory(format!(
                "sample {index}: expected {} x {}, got {} x {}",
                spec.parts,
                spec.state_dim,
                traj.len(),
                traj.state_dim()
            )));
        }
        return Ok(traj);
    }
    let x0 = draw_initial(spec, &mut rng);
    let instance = spec.disturbance.as_ref().map(|d| d.draw(&mut rng));
    integrate(spec, &x0, instance.as_ref()).map_err(|e| match e {
        Error::IntegrationDiverged { time_index, .. } => Error::IntegrationDiverged {
            time_index,
            sample: Some(index as usize),
        },
        other => other,
    })
}

/// Draw `n` i.i.d. samples. Each sample index gets its own RNG stream derived
/// from `(seed, index)`, so the result is identical for any `workers` count;
/// `workers = 0` uses the current thread pool (or all cores).
pub fn sample_system(
    spec: &SystemSpec,
    n: usize,
    seed: u64,
    keep_full: bool,
    workers: usize,
) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::InvalidParam {
            field: "n",
            reason: "at least one sample is required".into(),
        });
    }

    let trajectories = run_indexed(n, workers, |j| draw_one(spec, seed, j as u64))?;

    let state_dim = spec.state_dim;
    let mut terminal = Vec::with_capacity(n * state_dim);
    for traj in &trajectories {
        terminal.extend_from_slice(traj.terminal());
    }
    let full = keep_full.then(|| {
        let times = trajectories[0].times.clone();
        let mut states = Vec::with_capacity(n * times.len() * state_dim);
        for traj in &trajectories {
            states.extend_from_slice(traj.states_flat());
        }
        FullTrajectories {
            times,
            states,
            state_dim,
        }
    });

    Ok(SampleSet {
        n_samples: n,
        state_dim,
        terminal,
        full,
        seed,
        dims: (0..state_dim).collect(),
    })
}

#[cfg(feature = "parallel")]
fn run_indexed<T: Send, F>(n: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T> + Send + Sync,
{
    use rayon::prelude::*;
    let map = || (0..n).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    if workers == 0 {
        map()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParam {
                field: "workers",
                reason: e.to_string(),
            })?;
        pool.install(map)
    }
}

#[cfg(not(feature = "parallel"))]
fn run_indexed<T: Send, F>(n: usize, _workers: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T> + Send + Sync,
{
    (0..n).map(f).collect()
}
