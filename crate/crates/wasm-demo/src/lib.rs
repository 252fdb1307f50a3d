//! Interactive browser demo for the reach-set estimators.
//!
//! Three operations are exposed to JavaScript, all deterministic in their
//! inputs: explore the Duffing oscillator's reachable set, fit estimators to
//! hand-placed points, and sweep the quadrotor altitude tube.

use wasm_bindgen::prelude::*;

use reachkit::contour::extract_contours;
use reachkit::estimators::MethodConfig;
use reachkit::ode::{sample_system, SampleSet};
use reachkit::reachset::{fit_tube, grid_contour, interval_of, iso_dim, ReachEstimate};
use reachkit::systems::{duffing_spec, quadrotor_spec, DuffingParams, QuadrotorParams};
use reachkit::PNorm;

fn method_from_name(name: &str, k: usize) -> Result<MethodConfig, String> {
    match name {
        "christoffel" => Ok(MethodConfig::christoffel(k.max(1))),
        "mvee" => Ok(MethodConfig::pnorm(PNorm::Two)),
        "box" => Ok(MethodConfig::pnorm(PNorm::Inf)),
        other => Err(format!("unknown method `{other}`")),
    }
}

/// A fitted 2-D estimate prepared for canvas rendering: lattice values,
/// extracted boundary polylines and the sample scatter.
#[wasm_bindgen]
pub struct Field2D {
    bounds: [f64; 4],
    grid_n: usize,
    threshold: f64,
    values: Vec<f64>,
    samples: Vec<f64>,
    contour_points: Vec<f64>,
    contour_lengths: Vec<u32>,
    volume_proxy: f64,
}

#[wasm_bindgen]
impl Field2D {
    /// `[x_lo, x_hi, y_lo, y_hi]`.
    pub fn bounds(&self) -> Vec<f64> {
        self.bounds.to_vec()
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Row-major defining-function values (`grid_n x grid_n`).
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    /// Interleaved `x, y` sample coordinates.
    pub fn samples(&self) -> Vec<f64> {
        self.samples.clone()
    }

    /// Interleaved `x, y` points of all boundary polylines, concatenated.
    pub fn contour_points(&self) -> Vec<f64> {
        self.contour_points.clone()
    }

    /// Number of points of each polyline within `contour_points`.
    pub fn contour_lengths(&self) -> Vec<u32> {
        self.contour_lengths.clone()
    }

    /// `-log det A` for p-norm balls; NaN for Christoffel sets.
    pub fn volume_proxy(&self) -> f64 {
        self.volume_proxy
    }
}

fn field_from_samples(
    samples: &SampleSet,
    method: &MethodConfig,
    grid_n: usize,
) -> Result<Field2D, String> {
    let estimate = ReachEstimate::fit(samples, method).map_err(|e| e.to_string())?;

    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut scatter = Vec::with_capacity(samples.n_samples() * 2);
    for i in 0..samples.n_samples() {
        let row = samples.terminal_row(i);
        scatter.extend_from_slice(row);
        for j in 0..2 {
            lo[j] = lo[j].min(row[j]);
            hi[j] = hi[j].max(row[j]);
        }
    }
    let bounds: Vec<(f64, f64)> = (0..2)
        .map(|j| {
            let span = (hi[j] - lo[j]).max(1e-6);
            (lo[j] - 0.15 * span, hi[j] + 0.15 * span)
        })
        .collect();

    let grid_n = grid_n.clamp(16, 512);
    let field = grid_contour(&estimate, &bounds, grid_n).map_err(|e| e.to_string())?;
    let level = field.threshold + estimate.slack();
    let contours = extract_contours(&field, level, true);
    let mut contour_points = Vec::new();
    let mut contour_lengths = Vec::new();
    for polyline in &contours {
        contour_lengths.push(polyline.len() as u32);
        for &(x, y) in polyline {
            contour_points.push(x);
            contour_points.push(y);
        }
    }
    let volume_proxy = match &estimate.set {
        reachkit::reachset::SetKind::Pnorm(ball) => {
            reachkit::negative_log_det(&ball.a).unwrap_or(f64::NAN)
        }
        reachkit::reachset::SetKind::Christoffel(_) => f64::NAN,
    };
    Ok(Field2D {
        bounds: [bounds[0].0, bounds[0].1, bounds[1].0, bounds[1].1],
        grid_n,
        threshold: level,
        values: field.values,
        samples: scatter,
        contour_points,
        contour_lengths,
        volume_proxy,
    })
}

/// Sample the Duffing oscillator and fit a reach-set estimate.
///
/// `method` is `"christoffel"`, `"mvee"` or `"box"`; `k` is the Christoffel
/// degree; `t1` the time horizon.
#[wasm_bindgen]
pub fn duffing_field(
    n: usize,
    seed: u64,
    method: &str,
    k: usize,
    t1: f64,
    grid_n: usize,
) -> Result<Field2D, JsValue> {
    let inner = || -> Result<Field2D, String> {
        if !(0.5..=200.0).contains(&t1) {
            return Err("t1 must lie in [0.5, 200]".into());
        }
        let n = n.clamp(8, 20_000);
        let parts = ((t1 / 0.1).round() as usize + 1).max(2);
        let spec = duffing_spec(DuffingParams::default(), None, Some((0.0, t1)), parts)
            .map_err(|e| e.to_string())?;
        let samples = sample_system(&spec, n, seed, false, 1).map_err(|e| e.to_string())?;
        let method = method_from_name(method, k)?;
        field_from_samples(&samples, &method, grid_n)
    };
    inner().map_err(|e| JsValue::from_str(&e))
}

/// Fit an estimator to hand-placed points (interleaved `x, y`).
#[wasm_bindgen]
pub fn fit_points(
    points: &[f64],
    method: &str,
    k: usize,
    grid_n: usize,
) -> Result<Field2D, JsValue> {
    let inner = || -> Result<Field2D, String> {
        if points.len() < 2 || !points.len().is_multiple_of(2) {
            return Err("need interleaved x,y coordinates".into());
        }
        let samples =
            SampleSet::from_terminal(points.to_vec(), 2, 0).map_err(|e| e.to_string())?;
        let method = method_from_name(method, k)?;
        field_from_samples(&samples, &method, grid_n)
    };
    inner().map_err(|e| JsValue::from_str(&e))
}

/// The quadrotor altitude reach tube under the height setpoint `u1`.
#[wasm_bindgen]
pub struct Tube1D {
    times: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    fan: Vec<f64>,
    fan_count: usize,
}

#[wasm_bindgen]
impl Tube1D {
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }

    pub fn lo(&self) -> Vec<f64> {
        self.lo.clone()
    }

    pub fn hi(&self) -> Vec<f64> {
        self.hi.clone()
    }

    /// `fan_count` trajectories, concatenated; each has `times().length`
    /// altitude values.
    pub fn fan(&self) -> Vec<f64> {
        self.fan.clone()
    }

    pub fn fan_count(&self) -> usize {
        self.fan_count
    }
}

#[wasm_bindgen]
pub fn quadrotor_tube(n: usize, seed: u64, u1: f64, fan: usize) -> Result<Tube1D, JsValue> {
    let inner = || -> Result<Tube1D, String> {
        if !(0.2..=2.0).contains(&u1) {
            return Err("u1 must lie in [0.2, 2]".into());
        }
        let n = n.clamp(8, 5_000);
        let params = QuadrotorParams {
            u1,
            ..QuadrotorParams::default()
        };
        let spec = quadrotor_spec(params, None, None, 251).map_err(|e| e.to_string())?;
        let mut samples = sample_system(&spec, n, seed, true, 1).map_err(|e| e.to_string())?;
        samples.thin_full(2);
        let altitude = iso_dim(&samples, &[2]).map_err(|e| e.to_string())?;
        let tube = fit_tube(&altitude, &MethodConfig::pnorm(PNorm::Inf))
            .map_err(|e| e.to_string())?;
        let mut lo = Vec::with_capacity(tube.len());
        let mut hi = Vec::with_capacity(tube.len());
        for slice in &tube.slices {
            let (a, b) = interval_of(slice, (-2.0, 3.0), 64).map_err(|e| e.to_string())?;
            lo.push(a);
            hi.push(b);
        }
        let fan_count = n.min(fan.max(1));
        let full = altitude.full().expect("full trajectories retained");
        let mut fan_values = Vec::with_capacity(fan_count * full.parts());
        for s in 0..fan_count {
            for i in 0..full.parts() {
                fan_values.push(full.state(s, i)[0]);
            }
        }
        Ok(Tube1D {
            times: tube.times,
            lo,
            hi,
            fan: fan_values,
            fan_count,
        })
    };
    inner().map_err(|e| JsValue::from_str(&e))
}

/// Required sample count for the method at the given guarantee, so the page
/// can show how N scales with epsilon, delta and the degree.
#[wasm_bindgen]
pub fn required_samples(
    method: &str,
    state_dim: usize,
    k: usize,
    epsilon: f64,
    delta: f64,
) -> Result<u64, JsValue> {
    let inner = || -> Result<u64, String> {
        let params = reachkit::ProbParams::new(epsilon, delta, state_dim.max(1))
            .map_err(|e| e.to_string())?;
        match method {
            "christoffel" => {
                let params = params.with_degree(k.max(1)).map_err(|e| e.to_string())?;
                reachkit::christoffel_sample_count(&params).map_err(|e| e.to_string())
            }
            _ => reachkit::pnorm_sample_count(&params).map_err(|e| e.to_string()),
        }
    };
    inner().map_err(|e| JsValue::from_str(&e))
}
