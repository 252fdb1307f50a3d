//! The summary / sample / estimate / check / plot workflow.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};

use reachkit::estimators::christoffel::{
    build_moment, invert_moment, max_level, normalization, ChristoffelSet,
};
use reachkit::estimators::MethodConfig;
use reachkit::ode::{sample_system, SampleSet};
use reachkit::reachset::{
    aggregate_verdicts, check_unsafe, check_unsafe_tube, fit_tube, grid_contour, interval_of,
    iso_dim, ReachEstimate, ReachTube, SetKind, Verdict,
};
use reachkit::{PNorm, SystemSpec};

use crate::config::{GoalClause, RunConfig};
use crate::manifest::{format_duration, Manifest};
use crate::plot::{render_2d, render_tube};

pub const SAMPLES_FILE: &str = "samples.csv";
pub const FULL_SAMPLES_FILE: &str = "samples_full.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const ESTIMATE_FILE: &str = "estimate.json";
pub const TUBE_FILE: &str = "tube.json";
pub const FIELD_FILE: &str = "field.csv";
pub const FIELD_SIDECAR_FILE: &str = "field.json";
pub const PLOT_FILE: &str = "plot.svg";
pub const BAND_FILE: &str = "band.csv";
pub const CHECK_FILE: &str = "check.json";

/// Grid resolution for unsafe-set sweeps and 1-D interval scans.
const CHECK_GRID_N: usize = 256;

pub struct CheckOutcome {
    pub report: String,
    /// 0 clear/pass, 2 intersects/fail, 3 unknown.
    pub exit: i32,
}

fn out_path(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.outputs.join(name)
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_manifest(cfg: &RunConfig, command: &str, n: usize, void: bool, wall_ms: u128) -> anyhow::Result<()> {
    let manifest = Manifest::new(command, cfg, n, void, wall_ms);
    let name = if command == "sample" {
        MANIFEST_FILE.to_string()
    } else {
        format!("manifest-{command}.json")
    };
    write_file(
        &out_path(cfg, &name),
        serde_json::to_string_pretty(&manifest)?.as_bytes(),
    )?;
    Ok(())
}

// ---------------------------------------------------------------- summary --

pub fn cmd_summary(cfg: &RunConfig) -> anyhow::Result<String> {
    let spec = cfg.build_system()?;
    let dim = cfg.analysis_dim(spec.state_dim());
    let n = cfg.required_samples(spec.state_dim())?;
    let has_estimate = out_path(cfg, ESTIMATE_FILE).exists() || out_path(cfg, TUBE_FILE).exists();

    let mut lines = Vec::new();
    let rule_minor = "-".repeat(71);
    let rule_major = "=".repeat(71);
    lines.push(rule_minor.clone());
    lines.push("Estimator Summary".to_string());
    lines.push(rule_major);
    lines.push(format!("State dimension: {dim}"));
    lines.push(format!(
        "Accuracy parameter epsilon: {}",
        cfg.probabilistic.epsilon
    ));
    lines.push(format!(
        "Confidence parameter delta: {:e}",
        cfg.probabilistic.delta
    ));
    lines.push(format!("Number of samples: {n}"));
    lines.push(format!("Method of estimation: {}", cfg.method.name()));
    match &cfg.method {
        MethodConfig::Christoffel { k, rho, normalize } => {
            lines.push(format!("Degree of polynomial features: {k}"));
            lines.push(format!("Constant rho: {rho}"));
            lines.push(format!("Normalized: {normalize}"));
        }
        MethodConfig::Pnorm { p } => {
            lines.push(format!(
                "Norm exponent p: {}",
                match p {
                    PNorm::Two => "2",
                    PNorm::Inf => "inf",
                }
            ));
        }
    }
    lines.push(format!(
        "Status of estimate: {}",
        if has_estimate {
            "An estimate has been computed"
        } else {
            "No estimate has been made yet"
        }
    ));
    lines.push(rule_minor);
    Ok(lines.join("\n") + "\n")
}

// ----------------------------------------------------------------- sample --

pub fn cmd_sample(cfg: &RunConfig, n_override: Option<usize>) -> anyhow::Result<String> {
    let spec = cfg.build_system()?;
    let required = cfg.required_samples(spec.state_dim())?;
    let n = n_override.unwrap_or(usize::try_from(required).context("sample count overflow")?);
    let keep_full = cfg.tube;
    let workers = cfg.effective_workers();

    let mut report = String::new();
    report.push_str(&format!("Drawing {n} samples\n"));
    if workers > 0 {
        report.push_str(&format!("Using {workers} workers\n"));
    }
    if n_override.is_some() {
        report.push_str(
            "warning: explicit --n overrides the sample bound; the (epsilon, delta) guarantee no longer applies\n",
        );
    }

    let start = Instant::now();
    let mut samples = sample_system(&spec, n, cfg.seed, keep_full, workers)?;
    let wall = start.elapsed();
    report.push_str(&format!(
        "Time to draw {n} samples: {}\n",
        format_duration(wall)
    ));

    if cfg.system.record_every > 1 {
        samples.thin_full(cfg.system.record_every);
    }

    let mut csv = Vec::new();
    samples.to_csv(&mut csv)?;
    write_file(&out_path(cfg, SAMPLES_FILE), &csv)?;
    report.push_str(&format!("wrote {}\n", out_path(cfg, SAMPLES_FILE).display()));

    if keep_full {
        let mut full_csv = Vec::new();
        samples.full_to_csv(&mut full_csv)?;
        write_file(&out_path(cfg, FULL_SAMPLES_FILE), &full_csv)?;
        report.push_str(&format!(
            "wrote {}\n",
            out_path(cfg, FULL_SAMPLES_FILE).display()
        ));
    }

    write_manifest(cfg, "sample", n, n_override.is_some(), wall.as_millis())?;
    report.push_str(&format!("wrote {}\n", out_path(cfg, MANIFEST_FILE).display()));
    Ok(report)
}

// --------------------------------------------------------------- estimate --

/// Load previously drawn samples, or draw them now (writing the usual sample
/// artifacts). Returns the full-state sample set.
fn load_or_draw_samples(cfg: &RunConfig, report: &mut String) -> anyhow::Result<SampleSet> {
    let path = if cfg.tube {
        out_path(cfg, FULL_SAMPLES_FILE)
    } else {
        out_path(cfg, SAMPLES_FILE)
    };
    if path.exists() {
        let reader = BufReader::new(
            fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?,
        );
        let samples = if cfg.tube {
            SampleSet::from_full_csv(reader, cfg.seed)?
        } else {
            SampleSet::from_csv(reader, cfg.seed)?
        };
        report.push_str(&format!(
            "loaded {} samples from {}\n",
            samples.n_samples(),
            path.display()
        ));
        Ok(samples)
    } else {
        report.push_str(&cmd_sample(cfg, None)?);
        let reader = BufReader::new(fs::File::open(&path)?);
        Ok(if cfg.tube {
            SampleSet::from_full_csv(reader, cfg.seed)?
        } else {
            SampleSet::from_csv(reader, cfg.seed)?
        })
    }
}

fn isolate(cfg: &RunConfig, samples: &SampleSet) -> anyhow::Result<SampleSet> {
    match &cfg.iso_dims {
        Some(dims) => Ok(iso_dim(samples, dims)?),
        None => Ok(samples.clone()),
    }
}

/// Christoffel fit with per-stage timing, matching the workflow's stage
/// report (moment matrix, inversion, level parameter).
fn fit_christoffel_timed(
    rows: &[f64],
    dim: usize,
    k: usize,
    rho: f64,
    normalize: bool,
    report: &mut String,
) -> anyhow::Result<ChristoffelSet> {
    let start = Instant::now();
    let (shift, scale, degenerate_dims) = normalization(rows, dim, normalize);
    let moment = build_moment(rows, dim, k, &shift, &scale);
    report.push_str(&format!(
        "Time to construct moment matrix: {}\n",
        format_duration(start.elapsed())
    ));

    let start = Instant::now();
    let m_inv = invert_moment(moment, rho);
    report.push_str(&format!(
        "Time to (pseudo)invert moment matrix: {}\n",
        format_duration(start.elapsed())
    ));

    let start = Instant::now();
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
    report.push_str(&format!(
        "Time to compute level parameter: {}\n",
        format_duration(start.elapsed())
    ));
    if !set.degenerate_dims.is_empty() {
        report.push_str(&format!(
            "warning: zero-spread coordinates {:?} kept unit scale\n",
            set.degenerate_dims
        ));
    }
    Ok(set)
}

pub fn cmd_estimate(cfg: &RunConfig) -> anyhow::Result<String> {
    let mut report = String::new();
    let run_start = Instant::now();
    let samples = load_or_draw_samples(cfg, &mut report)?;
    let analysis = isolate(cfg, &samples)?;

    let n = analysis.n_samples();
    if cfg.tube {
        let start = Instant::now();
        let tube = fit_tube(&analysis, &cfg.method)?;
        report.push_str(&format!(
            "Time to fit {} tube slices: {}\n",
            tube.len(),
            format_duration(start.elapsed())
        ));
        let json = serde_json::to_string_pretty(&tube)?;
        write_file(&out_path(cfg, TUBE_FILE), json.as_bytes())?;
        report.push_str(&format!("wrote {}\n", out_path(cfg, TUBE_FILE).display()));
    } else {
        let estimate = match &cfg.method {
            MethodConfig::Christoffel { k, rho, normalize } => {
                let set = fit_christoffel_timed(
                    analysis.terminal_flat(),
                    analysis.state_dim(),
                    *k,
                    *rho,
                    *normalize,
                    &mut report,
                )?;
                ReachEstimate {
                    set: SetKind::Christoffel(set),
                    dims: analysis.dims().to_vec(),
                }
            }
            MethodConfig::Pnorm { .. } => {
                let start = Instant::now();
                let estimate = ReachEstimate::fit(&analysis, &cfg.method)?;
                report.push_str(&format!(
                    "Time to fit p-norm ball: {}\n",
                    format_duration(start.elapsed())
                ));
                estimate
            }
        };
        let json = serde_json::to_string_pretty(&estimate)?;
        write_file(&out_path(cfg, ESTIMATE_FILE), json.as_bytes())?;
        report.push_str(&format!(
            "wrote {}\n",
            out_path(cfg, ESTIMATE_FILE).display()
        ));
    }

    write_manifest(cfg, "estimate", n, false, run_start.elapsed().as_millis())?;
    Ok(report)
}

// -------------------------------------------------------------------- check --

fn load_estimate(cfg: &RunConfig) -> anyhow::Result<ReachEstimate> {
    let path = out_path(cfg, ESTIMATE_FILE);
    let text =
        fs::read_to_string(&path).with_context(|| format!("missing estimate {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

fn load_tube(cfg: &RunConfig) -> anyhow::Result<ReachTube> {
    let path = out_path(cfg, TUBE_FILE);
    let text =
        fs::read_to_string(&path).with_context(|| format!("missing tube {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

fn load_samples_if_present(cfg: &RunConfig) -> anyhow::Result<Option<SampleSet>> {
    let path = if cfg.tube {
        out_path(cfg, FULL_SAMPLES_FILE)
    } else {
        out_path(cfg, SAMPLES_FILE)
    };
    if !path.exists() {
        return Ok(None);
    }
    let reader = BufReader::new(fs::File::open(&path)?);
    let set = if cfg.tube {
        SampleSet::from_full_csv(reader, cfg.seed)?
    } else {
        SampleSet::from_csv(reader, cfg.seed)?
    };
    Ok(Some(isolate(cfg, &set)?))
}

/// Per-dimension bounds: configured, else the sample bounding box with a 10%
/// margin.
fn resolve_bounds(
    cfg: &RunConfig,
    dim: usize,
    samples: Option<&SampleSet>,
) -> anyhow::Result<Vec<(f64, f64)>> {
    if let Some(bounds) = &cfg.plot.bounds {
        if bounds.len() != dim {
            bail!(
                "plot.bounds: expected {dim} entries matching the analysis dimension, got {}",
                bounds.len()
            );
        }
        return Ok(bounds.iter().map(|[lo, hi]| (*lo, *hi)).collect());
    }
    let samples = samples.ok_or_else(|| {
        anyhow!("plot.bounds: required because no sample files are present to infer bounds from")
    })?;
    Ok(sample_bounds(samples))
}

fn sample_bounds(samples: &SampleSet) -> Vec<(f64, f64)> {
    let dim = samples.state_dim();
    let mut bounds = vec![(f64::INFINITY, f64::NEG_INFINITY); dim];
    let mut update = |row: &[f64]| {
        for (j, v) in row.iter().enumerate() {
            bounds[j].0 = bounds[j].0.min(*v);
            bounds[j].1 = bounds[j].1.max(*v);
        }
    };
    if let Some(full) = samples.full() {
        for s in 0..samples.n_samples() {
            for i in 0..full.parts() {
                update(full.state(s, i));
            }
        }
    } else {
        for i in 0..samples.n_samples() {
            update(samples.terminal_row(i));
        }
    }
    bounds
        .into_iter()
        .map(|(lo, hi)| {
            let span = (hi - lo).max(1e-6);
            (lo - 0.1 * span, hi + 0.1 * span)
        })
        .collect()
}

fn verdict_word(v: &Verdict) -> &'static str {
    match v {
        Verdict::Clear => "clear",
        Verdict::Unknown => "unknown",
        Verdict::Intersects { .. } => "intersects",
    }
}

fn goal_outcomes(
    tube: &ReachTube,
    intervals: &[(f64, f64)],
    clauses: &[GoalClause],
) -> Vec<(String, bool)> {
    clauses
        .iter()
        .map(|clause| match clause {
            GoalClause::Below { value, after } => {
                let ok = tube
                    .times
                    .iter()
                    .zip(intervals)
                    .filter(|(t, _)| **t >= *after)
                    .all(|(_, (_, hi))| hi < value);
                (format!("below {value} for t >= {after}"), ok)
            }
            GoalClause::Above { value, after } => {
                let ok = tube
                    .times
                    .iter()
                    .zip(intervals)
                    .filter(|(t, _)| **t > *after)
                    .all(|(_, (lo, _))| lo > value);
                (format!("above {value} for t > {after}"), ok)
            }
            GoalClause::Window { lo, hi, at } => {
                // slice whose time is closest to `at`
                let idx = tube
                    .times
                    .iter()
                    .enumerate()
                    .min_by(|a, b| {
                        (a.1 - at).abs().partial_cmp(&(b.1 - at).abs()).unwrap()
                    })
                    .map(|(i, _)| i)
                    .unwrap();
                let (s_lo, s_hi) = intervals[idx];
                let ok = s_lo >= *lo && s_hi <= *hi;
                (format!("within [{lo}, {hi}] at t = {at}"), ok)
            }
        })
        .collect()
}

/// Member interval per tube slice (1-D tubes), scanned over `bounds`.
fn tube_intervals(tube: &ReachTube, bounds: (f64, f64)) -> anyhow::Result<Vec<(f64, f64)>> {
    tube.slices
        .iter()
        .map(|s| Ok(interval_of(s, bounds, CHECK_GRID_N)?))
        .collect()
}

pub fn cmd_check(cfg: &RunConfig) -> anyhow::Result<CheckOutcome> {
    if cfg.unsafe_set.is_none() && cfg.goal.is_none() {
        bail!("config: at least one of [unsafe] or [[goal]] is required for `check`");
    }
    let run_start = Instant::now();
    let mut report = String::new();
    let samples = load_samples_if_present(cfg)?;
    let mut results = serde_json::Map::new();
    let mut exit = 0i32;

    if cfg.tube {
        let tube = load_tube(cfg)?;
        let dim = tube.slices[0].state_dim();
        let bounds = resolve_bounds(cfg, dim, samples.as_ref())?;

        if let Some(predicate) = &cfg.unsafe_set {
            let per_time = check_unsafe_tube(&tube, predicate, &bounds, CHECK_GRID_N)?;
            let aggregate = aggregate_verdicts(&per_time);
            report.push_str(&format!("unsafe set: {}\n", verdict_word(&aggregate)));
            if let Verdict::Intersects { witness } = &aggregate {
                let (t, _) = per_time
                    .iter()
                    .find(|(_, v)| matches!(v, Verdict::Intersects { .. }))
                    .unwrap();
                report.push_str(&format!("  witness at t = {t}: {witness:?}\n"));
            }
            exit = exit.max(match &aggregate {
                Verdict::Clear => 0,
                Verdict::Unknown => 3,
                Verdict::Intersects { .. } => 2,
            });
            results.insert("unsafe".into(), serde_json::to_value(&aggregate)?);
        }

        if let Some(clauses) = &cfg.goal {
            if dim != 1 {
                bail!("goal: clauses apply to 1-dimensional tubes (isolate one dimension)");
            }
            let scan = resolve_bounds(cfg, 1, samples.as_ref())?[0];
            let intervals = tube_intervals(&tube, scan)?;
            let outcomes = goal_outcomes(&tube, &intervals, clauses);
            let mut all_ok = true;
            for (label, ok) in &outcomes {
                report.push_str(&format!(
                    "goal {}: {}\n",
                    label,
                    if *ok { "pass" } else { "FAIL" }
                ));
                all_ok &= *ok;
            }
            if !all_ok {
                exit = exit.max(2);
            }
            results.insert(
                "goal".into(),
                serde_json::to_value(
                    outcomes
                        .iter()
                        .map(|(label, ok)| serde_json::json!({"clause": label, "pass": ok}))
                        .collect::<Vec<_>>(),
                )?,
            );
        }
    } else {
        let estimate = load_estimate(cfg)?;
        let bounds = resolve_bounds(cfg, estimate.state_dim(), samples.as_ref())?;
        let predicate = cfg
            .unsafe_set
            .as_ref()
            .ok_or_else(|| anyhow!("config: [unsafe] is required for non-tube checks"))?;
        let verdict = check_unsafe(
            &estimate,
            predicate,
            &bounds,
            cfg.plot.grid_n.max(CHECK_GRID_N),
            samples.as_ref(),
        )?;
        report.push_str(&format!("unsafe set: {}\n", verdict_word(&verdict)));
        if let Verdict::Intersects { witness } = &verdict {
            report.push_str(&format!("  witness: {witness:?}\n"));
        }
        exit = match &verdict {
            Verdict::Clear => 0,
            Verdict::Unknown => 3,
            Verdict::Intersects { .. } => 2,
        };
        results.insert("unsafe".into(), serde_json::to_value(&verdict)?);
    }

    write_file(
        &out_path(cfg, CHECK_FILE),
        serde_json::to_string_pretty(&serde_json::Value::Object(results))?.as_bytes(),
    )?;
    report.push_str(&format!("wrote {}\n", out_path(cfg, CHECK_FILE).display()));
    write_manifest(cfg, "check", 0, false, run_start.elapsed().as_millis())?;
    Ok(CheckOutcome { report, exit })
}

// -------------------------------------------------------------------- plot --

pub fn cmd_plot(cfg: &RunConfig) -> anyhow::Result<String> {
    let run_start = Instant::now();
    let mut report = String::new();
    let samples = load_samples_if_present(cfg)?;

    if cfg.tube {
        let tube = load_tube(cfg)?;
        let dim = tube.slices[0].state_dim();
        if dim != 1 {
            bail!("plot: tube plots support 1-dimensional slices, got {dim}");
        }
        let scan = resolve_bounds(cfg, 1, samples.as_ref())?[0];
        let intervals = tube_intervals(&tube, scan)?;

        let mut band = String::from("t,lo,hi\n");
        for (t, (lo, hi)) in tube.times.iter().zip(&intervals) {
            band.push_str(&format!("{t},{lo},{hi}\n"));
        }
        write_file(&out_path(cfg, BAND_FILE), band.as_bytes())?;
        report.push_str(&format!("wrote {}\n", out_path(cfg, BAND_FILE).display()));

        let label = format!("x{}", tube.slices[0].dims[0] + 1);
        let svg = render_tube(
            &tube,
            &intervals,
            if cfg.plot.scatter { samples.as_ref() } else { None },
            cfg.plot.fan,
            &label,
        )?;
        write_file(&out_path(cfg, PLOT_FILE), svg.as_bytes())?;
        report.push_str(&format!("wrote {}\n", out_path(cfg, PLOT_FILE).display()));
    } else {
        let estimate = load_estimate(cfg)?;
        let dim = estimate.state_dim();
        let bounds = resolve_bounds(cfg, dim, samples.as_ref())?;
        match dim {
            2 | 3 => {
                let start = Instant::now();
                let field = grid_contour(&estimate, &bounds, cfg.plot.grid_n)?;
                report.push_str(&format!(
                    "Time to compute contour: {}\n",
                    format_duration(start.elapsed())
                ));
                let mut csv = Vec::new();
                field.to_csv(&mut csv)?;
                write_file(&out_path(cfg, FIELD_FILE), &csv)?;
                write_file(
                    &out_path(cfg, FIELD_SIDECAR_FILE),
                    serde_json::to_string_pretty(&field.sidecar())?.as_bytes(),
                )?;
                report.push_str(&format!(
                    "wrote {} and {}\n",
                    out_path(cfg, FIELD_FILE).display(),
                    out_path(cfg, FIELD_SIDECAR_FILE).display()
                ));
                if dim == 2 {
                    let labels = (
                        format!("x{}", estimate.dims[0] + 1),
                        format!("x{}", estimate.dims[1] + 1),
                    );
                    let svg = render_2d(
                        &field,
                        &estimate,
                        if cfg.plot.scatter { samples.as_ref() } else { None },
                        (&labels.0, &labels.1),
                    )?;
                    write_file(&out_path(cfg, PLOT_FILE), svg.as_bytes())?;
                    report.push_str(&format!("wrote {}\n", out_path(cfg, PLOT_FILE).display()));
                } else {
                    report.push_str("3-D estimate: lattice CSV written; no SVG\n");
                }
            }
            other => bail!("plot: unsupported ambient dimension {other}"),
        }
    }
    write_manifest(cfg, "plot", 0, false, run_start.elapsed().as_millis())?;
    Ok(report)
}

/// Convenience used by tests: build the configured system.
pub fn build_system(cfg: &RunConfig) -> anyhow::Result<SystemSpec> {
    cfg.build_system()
}
