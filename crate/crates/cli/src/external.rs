//! External-command sampler: trajectories produced by a user program.
//!
//! The executable is invoked once per sample as
//! `<command> <seed> <index> <t0> <t1> <parts>` and must print the trajectory
//! as CSV on standard output: one row per grid point with the state
//! coordinates, optionally preceded by a `t` column and/or a header row.

use std::process::Command;
use std::sync::Arc;

use reachkit::ode::{CustomSampler, SamplerCtx, Trajectory};
use reachkit::{Error, Result};

pub fn external_sampler(command: String) -> CustomSampler {
    Arc::new(move |ctx: SamplerCtx<'_>| run_external(&command, ctx))
}

fn run_external(command: &str, ctx: SamplerCtx<'_>) -> Result<Trajectory> {
    let t0 = ctx.times[0];
    let t1 = *ctx.times.last().unwrap();
    let output = Command::new(command)
        .arg(ctx.seed.to_string())
        .arg(ctx.index.to_string())
        .arg(t0.to_string())
        .arg(t1.to_string())
        .arg(ctx.times.len().to_string())
        .output()
        .map_err(|e| Error::MalformedTrajectory(format!("spawning `{command}`: {e}")))?;
    if !output.status.success() {
        return Err(Error::MalformedTrajectory(format!(
            "`{command}` exited with {}",
            output.status
        )));
    }
    let text = String::from_utf8(output.stdout)
        .map_err(|e| Error::MalformedTrajectory(format!("non-UTF8 output: {e}")))?;
    parse_trajectory(&text, ctx.times)
}

/// Parse CSV rows into a trajectory on the given grid. The state dimension is
/// inferred from the first data row; a leading time column is detected by
/// matching the grid within 1e-9.
pub fn parse_trajectory(text: &str, times: &[f64]) -> Result<Trajectory> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(values) => rows.push(values),
            Err(_) if rows.is_empty() => continue, // header row
            Err(e) => {
                return Err(Error::MalformedTrajectory(format!("bad row `{line}`: {e}")))
            }
        }
    }
    if rows.len() != times.len() {
        return Err(Error::MalformedTrajectory(format!(
            "expected {} rows, got {}",
            times.len(),
            rows.len()
        )));
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::MalformedTrajectory("ragged rows".into()));
    }
    // a leading time column matches the grid
    let has_time = width > 1
        && rows
            .iter()
            .zip(times)
            .all(|(r, t)| (r[0] - t).abs() <= 1e-9 * (1.0 + t.abs()));
    let offset = usize::from(has_time);
    let state_dim = width - offset;
    if state_dim == 0 {
        return Err(Error::MalformedTrajectory("no state columns".into()));
    }
    let mut states = Vec::with_capacity(times.len() * state_dim);
    for row in &rows {
        states.extend_from_slice(&row[offset..]);
    }
    Trajectory::new(times.to_vec(), state_dim, states)
}
