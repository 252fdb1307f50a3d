//! Declarative run configuration: a single TOML file describes the system,
//! the probabilistic target, the estimation method and the outputs. CLI flags
//! override file fields one-for-one.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};

use reachkit::disturbance::{DisturbanceSpec, ScalarDisturbance};
use reachkit::estimators::MethodConfig;
use reachkit::reachset::UnsafePredicate;
use reachkit::systems::{
    duffing_spec, laub_loomis_spec, quadrotor_spec, rendezvous_spec, DuffingParams, K2Reading,
    LaubLoomisParams, QuadrotorParams, RendezvousParams,
};
use reachkit::{ProbParams, SystemSpec};

use crate::external::external_sampler;

/// Environment variable supplying the default worker count.
pub const WORKERS_ENV: &str = "REACHKIT_WORKERS";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    /// Worker threads for sampling; 0 lets the runtime pick.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_outputs")]
    pub outputs: PathBuf,
    /// Fit one estimate per recorded time step instead of the terminal set.
    #[serde(default)]
    pub tube: bool,
    /// 0-based original state indices to isolate before fitting.
    #[serde(default)]
    pub iso_dims: Option<Vec<usize>>,
    pub system: SystemConfig,
    pub probabilistic: ProbConfig,
    pub method: MethodConfig,
    #[serde(default)]
    pub plot: PlotConfig,
    #[serde(rename = "unsafe", default)]
    pub unsafe_set: Option<UnsafePredicate>,
    #[serde(default)]
    pub goal: Option<Vec<GoalClause>>,
}

fn default_outputs() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbConfig {
    pub epsilon: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// `duffing`, `laub_loomis`, `rendezvous`, `quadrotor` or `external`.
    pub name: String,
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub parts: Option<usize>,
    /// Keep every n-th recorded time slice of full trajectories.
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    /// Initial-state intervals, overriding the benchmark defaults.
    pub intervals: Option<Vec<[f64; 2]>>,
    /// Per-dimension disturbance templates.
    pub disturbance: Option<Vec<DisturbanceConfig>>,
    // -- per-system parameters --
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub omega: Option<f64>,
    pub w: Option<f64>,
    pub k2: Option<K2Reading>,
    pub u1: Option<f64>,
    pub u2: Option<f64>,
    pub u3: Option<f64>,
    // -- external sampler --
    /// Executable invoked as `<command> seed index t0 t1 parts`; prints one
    /// trajectory as CSV on stdout.
    pub command: Option<String>,
    pub state_dim: Option<usize>,
}

fn default_record_every() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DisturbanceConfig {
    None,
    Sin { m: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotConfig {
    #[serde(default = "default_grid_n")]
    pub grid_n: usize,
    pub bounds: Option<Vec<[f64; 2]>>,
    /// Overlay the sample scatter on 2-D plots.
    #[serde(default = "default_true")]
    pub scatter: bool,
    /// Number of trajectories drawn in 1-D tube plots.
    #[serde(default = "default_fan")]
    pub fan: usize,
}

impl Default for PlotConfig {
    fn default() -> Self {
        Self {
            grid_n: default_grid_n(),
            bounds: None,
            scatter: true,
            fan: default_fan(),
        }
    }
}

fn default_grid_n() -> usize {
    200
}

fn default_true() -> bool {
    true
}

fn default_fan() -> usize {
    100
}

/// One clause of a goal specification for 1-D tubes.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GoalClause {
    /// Tube upper bound must stay strictly below `value` (optionally only
    /// for times after `after`).
    Below {
        value: f64,
        #[serde(default)]
        after: f64,
    },
    /// Tube lower bound must stay strictly above `value` after `after`.
    Above {
        value: f64,
        #[serde(default)]
        after: f64,
    },
    /// The slice at time `at` must lie within `[lo, hi]`.
    Window { lo: f64, hi: f64, at: f64 },
}

impl RunConfig {
    pub fn from_path(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| anyhow!("config error: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Domain checks beyond what deserialization enforces; error messages
    /// name the offending field.
    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.probabilistic.epsilon > 0.0 && self.probabilistic.epsilon < 1.0) {
            bail!("probabilistic.epsilon: must lie in (0, 1)");
        }
        if !(self.probabilistic.delta > 0.0 && self.probabilistic.delta < 1.0) {
            bail!("probabilistic.delta: must lie in (0, 1)");
        }
        if let Some(parts) = self.system.parts {
            if parts < 2 {
                bail!("system.parts: at least 2 grid points are required");
            }
        }
        if self.system.record_every == 0 {
            bail!("system.record_every: must be at least 1");
        }
        if self.plot.grid_n < 2 {
            bail!("plot.grid_n: must be at least 2");
        }
        if let MethodConfig::Christoffel { k, rho, .. } = &self.method {
            if *k == 0 {
                bail!("method.k: degree must be at least 1");
            }
            if *rho < 0.0 {
                bail!("method.rho: must be nonnegative");
            }
        }
        if let Some(dims) = &self.iso_dims {
            if dims.is_empty() {
                bail!("iso_dims: must not be empty when present");
            }
            if dims.windows(2).any(|w| w[0] >= w[1]) {
                bail!("iso_dims: indices must be strictly increasing");
            }
        }
        if self.system.name == "external" {
            if self.system.command.is_none() {
                bail!("system.command: required for the external sampler");
            }
            if self.system.state_dim.is_none() {
                bail!("system.state_dim: required for the external sampler");
            }
        }
        if let Some(intervals) = &self.system.intervals {
            for (i, [lo, hi]) in intervals.iter().enumerate() {
                if lo > hi {
                    bail!("system.intervals[{i}]: lower bound exceeds upper bound");
                }
            }
        }
        Ok(())
    }

    /// Construct the system the config describes.
    pub fn build_system(&self) -> anyhow::Result<SystemSpec> {
        let s = &self.system;
        let t_range = match (s.t0, s.t1) {
            (Some(t0), Some(t1)) => Some((t0, t1)),
            (None, None) => None,
            _ => bail!("system.t0/system.t1: specify both or neither"),
        };
        let intervals: Option<Vec<(f64, f64)>> = s
            .intervals
            .as_ref()
            .map(|v| v.iter().map(|[lo, hi]| (*lo, *hi)).collect());

        let spec = match s.name.as_str() {
            "duffing" => {
                let params = DuffingParams {
                    alpha: s.alpha.unwrap_or(0.05),
                    gamma: s.gamma.unwrap_or(0.4),
                    omega: s.omega.unwrap_or(1.3),
                };
                let intervals = match intervals {
                    Some(v) => {
                        let arr: [(f64, f64); 2] = v
                            .try_into()
                            .map_err(|_| anyhow!("system.intervals: duffing needs 2 entries"))?;
                        Some(arr)
                    }
                    None => None,
                };
                duffing_spec(params, intervals, t_range, s.parts.unwrap_or(1001))?
            }
            "laub_loomis" => {
                let params = LaubLoomisParams {
                    w: s.w.unwrap_or(0.1),
                    ..LaubLoomisParams::default()
                };
                laub_loomis_spec(params, t_range, s.parts.unwrap_or(2001))?
            }
            "rendezvous" => {
                let params = RendezvousParams {
                    k2_reading: s.k2.unwrap_or_default(),
                    ..RendezvousParams::default()
                };
                rendezvous_spec(params, t_range, s.parts.unwrap_or(2001))?
            }
            "quadrotor" => {
                let params = QuadrotorParams {
                    u1: s.u1.unwrap_or(1.0),
                    u2: s.u2.unwrap_or(0.0),
                    u3: s.u3.unwrap_or(0.0),
                    ..QuadrotorParams::default()
                };
                quadrotor_spec(params, intervals, t_range, s.parts.unwrap_or(501))?
            }
            "external" => {
                let command = s.command.clone().expect("validated");
                let state_dim = s.state_dim.expect("validated");
                let (t0, t1) = t_range.ok_or_else(|| {
                    anyhow!("system.t0/system.t1: required for the external sampler")
                })?;
                SystemSpec::from_sampler(
                    state_dim,
                    external_sampler(command),
                    t0,
                    t1,
                    s.parts.unwrap_or(101),
                )?
            }
            other => bail!("system.name: unknown system `{other}`"),
        };

        let spec = match &s.disturbance {
            Some(entries) => {
                let per_dim = entries
                    .iter()
                    .map(|d| match d {
                        DisturbanceConfig::None => None,
                        DisturbanceConfig::Sin { m } => {
                            Some(ScalarDisturbance::sin_disturbance(*m))
                        }
                    })
                    .collect::<Vec<_>>();
                spec.with_disturbance(DisturbanceSpec::new(per_dim))?
            }
            None => spec,
        };
        Ok(spec)
    }

    /// State dimension after isolation.
    pub fn analysis_dim(&self, full_dim: usize) -> usize {
        self.iso_dims.as_ref().map(|d| d.len()).unwrap_or(full_dim)
    }

    /// Probabilistic parameters for the analysis dimension.
    pub fn prob_params(&self, full_dim: usize) -> anyhow::Result<ProbParams> {
        let mut params = ProbParams::new(
            self.probabilistic.epsilon,
            self.probabilistic.delta,
            self.analysis_dim(full_dim),
        )?;
        if let MethodConfig::Christoffel { k, .. } = &self.method {
            params = params.with_degree(*k)?;
        }
        Ok(params)
    }

    /// Required sample count for the configured method.
    pub fn required_samples(&self, full_dim: usize) -> anyhow::Result<u64> {
        let params = self.prob_params(full_dim)?;
        Ok(match &self.method {
            MethodConfig::Pnorm { .. } => reachkit::pnorm_sample_count(&params)?,
            MethodConfig::Christoffel { .. } => reachkit::christoffel_sample_count(&params)?,
        })
    }

    /// Resolved worker count: explicit field, else environment, else 0
    /// (runtime default).
    pub fn effective_workers(&self) -> usize {
        self.workers.unwrap_or_else(|| {
            std::env::var(WORKERS_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [system]
        name = "duffing"

        [probabilistic]
        epsilon = 0.05
        delta = 1e-9

        [method]
        kind = "christoffel"
        k = 10
    "#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = RunConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.outputs, PathBuf::from("out"));
        assert!(!cfg.tube);
        assert_eq!(cfg.plot.grid_n, 200);
        let spec = cfg.build_system().unwrap();
        assert_eq!(spec.state_dim(), 2);
        assert_eq!(spec.parts(), 1001);
        assert_eq!(cfg.required_samples(2).unwrap(), 156_626);
    }

    #[test]
    fn method_defaults_fill_in() {
        let cfg = RunConfig::from_toml(MINIMAL).unwrap();
        match cfg.method {
            MethodConfig::Christoffel { k, rho, normalize } => {
                assert_eq!(k, 10);
                assert_eq!(rho, 1e-4);
                assert!(normalize);
            }
            _ => panic!("expected christoffel"),
        }
    }

    #[test]
    fn rejected_configs_name_the_field() {
        let bad = MINIMAL.replace("epsilon = 0.05", "epsilon = 1.5");
        let err = RunConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("epsilon"), "{err}");

        let bad = MINIMAL.replace("k = 10", "k = 0");
        let err = RunConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("method.k"), "{err}");

        let unknown = format!("not_a_field = 3\n{MINIMAL}");
        let err = RunConfig::from_toml(&unknown).unwrap_err().to_string();
        assert!(err.contains("not_a_field"), "{err}");
    }

    #[test]
    fn pnorm_config_with_inf() {
        let text = r#"
            [system]
            name = "laub_loomis"
            [probabilistic]
            epsilon = 0.1
            delta = 1e-3
            [method]
            kind = "pnorm"
            p = "inf"
        "#;
        let cfg = RunConfig::from_toml(text).unwrap();
        assert!(matches!(
            cfg.method,
            MethodConfig::Pnorm {
                p: reachkit::PNorm::Inf
            }
        ));
        let spec = cfg.build_system().unwrap();
        assert_eq!(spec.state_dim(), 7);
    }

    #[test]
    fn disturbance_entries_build() {
        let text = r#"
            [system]
            name = "duffing"
            disturbance = [{ kind = "sin", m = 2 }, { kind = "none" }]
            [probabilistic]
            epsilon = 0.1
            delta = 1e-3
            [method]
            kind = "pnorm"
            p = 2
        "#;
        let cfg = RunConfig::from_toml(text).unwrap();
        let spec = cfg.build_system().unwrap();
        assert!(spec.disturbance().is_some());
        assert!(spec.disturbance().unwrap().is_disturbed(0));
        assert!(!spec.disturbance().unwrap().is_disturbed(1));
    }

    #[test]
    fn unsafe_and_goal_tables() {
        let text = r#"
            tube = true
            iso_dims = [3]
            [system]
            name = "laub_loomis"
            [probabilistic]
            epsilon = 0.1
            delta = 1e-3
            [method]
            kind = "pnorm"
            p = "inf"
            [unsafe]
            kind = "halfspace"
            coeffs = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]
            offset = 5.0
            [[goal]]
            kind = "below"
            value = 5.0
        "#;
        let cfg = RunConfig::from_toml(text).unwrap();
        assert!(cfg.unsafe_set.is_some());
        assert_eq!(cfg.goal.as_ref().unwrap().len(), 1);
        assert_eq!(cfg.analysis_dim(7), 1);
    }
}
