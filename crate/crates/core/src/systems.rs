//! Built-in benchmark systems, each exposed as a ready-made [`SystemSpec`]
//! constructor with the published parameter values as defaults.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ode::{DynamicsFn, SystemSpec};

/// Duffing oscillator parameters (chaotic regime by default).
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct DuffingParams {
    pub alpha: f64,
    pub gamma: f64,
    pub omega: f64,
}

impl Default for DuffingParams {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            gamma: 0.4,
            omega: 1.3,
        }
    }
}

pub const DUFFING_INTERVALS: [(f64, f64); 2] = [(0.95, 1.05), (-0.05, 0.05)];

/// Duffing oscillator: `x' = y`, `y' = -alpha*y + x - x^3 + gamma*cos(omega*t)`.
pub fn duffing_dynamics(p: DuffingParams) -> DynamicsFn {
    Arc::new(move |x, t, _d, out| {
        out[0] = x[1];
        out[1] = -p.alpha * x[1] + x[0] - x[0] * x[0] * x[0] + p.gamma * (p.omega * t).cos();
    })
}

pub fn duffing_spec(
    params: DuffingParams,
    intervals: Option<[(f64, f64); 2]>,
    t_range: Option<(f64, f64)>,
    parts: usize,
) -> Result<SystemSpec> {
    let intervals = intervals.unwrap_or(DUFFING_INTERVALS);
    let (t0, t1) = t_range.unwrap_or((0.0, 100.0));
    SystemSpec::new(2, duffing_dynamics(params), intervals.to_vec(), t0, t1, parts)
}

/// Laub-Loomis enzyme model parameters: box half-width `w` around the
/// published initial point.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct LaubLoomisParams {
    pub w: f64,
    pub centers: [f64; 7],
}

impl Default for LaubLoomisParams {
    fn default() -> Self {
        Self {
            w: 0.1,
            centers: [1.2, 1.05, 1.5, 2.4, 1.0, 0.1, 0.45],
        }
    }
}

/// The 7-variable Laub-Loomis ODE.
pub fn laub_loomis_dynamics() -> DynamicsFn {
    Arc::new(|x, _t, _d, out| {
        out[0] = 1.4 * x[2] - 0.9 * x[0];
        out[1] = 2.5 * x[4] - 1.5 * x[1];
        out[2] = 0.6 * x[6] - 0.8 * x[1] * x[2];
        out[3] = 2.0 - 1.3 * x[2] * x[3];
        out[4] = 0.7 * x[0] - x[3] * x[4];
        out[5] = 0.3 * x[0] - 3.1 * x[5];
        out[6] = 1.8 * x[5] - 1.5 * x[1] * x[6];
    })
}

pub fn laub_loomis_spec(
    params: LaubLoomisParams,
    t_range: Option<(f64, f64)>,
    parts: usize,
) -> Result<SystemSpec> {
    let (t0, t1) = t_range.unwrap_or((0.0, 20.0));
    let intervals = params
        .centers
        .iter()
        .map(|&c| (c - params.w, c + params.w))
        .collect();
    SystemSpec::new(7, laub_loomis_dynamics(), intervals, t0, t1, parts)
}

/// The benchmark's unsafe threshold: `x4 >= 5`.
pub const LAUB_LOOMIS_UNSAFE_DIM: usize = 3;
pub const LAUB_LOOMIS_UNSAFE_LEVEL: f64 = 5.0;

/// The benchmark's unsafe set as a halfspace predicate over the full state.
pub fn laub_loomis_unsafe() -> crate::reachset::UnsafePredicate {
    let mut coeffs = vec![0.0; 7];
    coeffs[LAUB_LOOMIS_UNSAFE_DIM] = 1.0;
    crate::reachset::UnsafePredicate::Halfspace {
        coeffs,
        offset: LAUB_LOOMIS_UNSAFE_LEVEL,
    }
}

/// Which reading of the published rendezvous-attempt gain matrix to use. The
/// printed matrix mixes magnitudes (one entry appears as -96149898 where its
/// row partner is -9614.9883), so both readings stay selectable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum K2Reading {
    /// Scale-consistent value -9614.9898.
    #[default]
    Consistent,
    /// Verbatim value -96149898.
    Printed,
}

/// Spacecraft rendezvous parameters (meters, minutes, kilograms).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RendezvousParams {
    pub mu: f64,
    pub r: f64,
    pub m_c: f64,
    pub k2_reading: K2Reading,
    pub abort_time: f64,
    pub approach_boundary: f64,
}

impl Default for RendezvousParams {
    fn default() -> Self {
        Self {
            mu: 3.986e14 * 60.0 * 60.0,
            r: 42_164e3,
            m_c: 500.0,
            k2_reading: K2Reading::default(),
            abort_time: 120.0,
            approach_boundary: -100.0,
        }
    }
}

impl RendezvousParams {
    /// Mean motion `n = sqrt(mu / r^3)` [rad/min].
    pub fn mean_motion(&self) -> f64 {
        (self.mu / (self.r * self.r * self.r)).sqrt()
    }

    pub fn k1(&self) -> [[f64; 4]; 2] {
        [
            [-28.8287, 0.1005, -1449.9754, 0.0046],
            [-0.087, -33.2562, 0.00462, -1451.5013],
        ]
    }

    pub fn k2(&self) -> [[f64; 4]; 2] {
        let k13 = match self.k2_reading {
            K2Reading::Consistent => -9614.9898,
            K2Reading::Printed => -96149898.0,
        };
        [
            [-288.0288, 0.1312, k13, 0.0],
            [-0.1312, -288.0, 0.0, -9614.9883],
        ]
    }
}

/// Controller mode of the rendezvous benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RendezvousMode {
    Approaching,
    RendezvousAttempt,
    Aborting,
}

/// Mode selection: aborting (t >= abort_time) takes precedence over the
/// position-based modes; rendezvous attempt covers `x >= -100`.
pub fn rendezvous_mode(x: f64, t: f64, p: &RendezvousParams) -> RendezvousMode {
    if t >= p.abort_time {
        RendezvousMode::Aborting
    } else if x >= p.approach_boundary {
        RendezvousMode::RendezvousAttempt
    } else {
        RendezvousMode::Approaching
    }
}

/// Control force `(u_x, u_y)` at the given state and time.
pub fn rendezvous_control(state: &[f64], t: f64, p: &RendezvousParams) -> [f64; 2] {
    let gain = match rendezvous_mode(state[0], t, p) {
        RendezvousMode::Approaching => p.k1(),
        RendezvousMode::RendezvousAttempt => p.k2(),
        RendezvousMode::Aborting => return [0.0, 0.0],
    };
    let mut u = [0.0; 2];
    for (row, g) in gain.iter().enumerate() {
        u[row] = g.iter().zip(state).map(|(gi, xi)| gi * xi).sum();
    }
    u
}

/// Planar orbital rendezvous with the switched feedback controller; states
/// `(x, y, v_x, v_y)`.
pub fn rendezvous_dynamics(params: RendezvousParams) -> DynamicsFn {
    Arc::new(move |x, t, _d, out| {
        let p = &params;
        let n = p.mean_motion();
        let u = rendezvous_control(x, t, p);
        let r = p.r;
        let rc = ((r + x[0]) * (r + x[0]) + x[1] * x[1]).sqrt();
        out[0] = x[2];
        out[1] = x[3];
        out[2] =
            n * n * x[0] + 2.0 * n * x[3] + p.mu / (r * r) - p.mu / (r * r * r) * (r + x[0])
                + u[0] / p.m_c;
        out[3] = n * n * x[1] - 2.0 * n * x[2] - p.mu / (rc * rc * rc) * x[1] + u[1] / p.m_c;
    })
}

pub const RENDEZVOUS_INTERVALS: [(f64, f64); 4] =
    [(-925.0, -875.0), (-425.0, -375.0), (0.0, 0.0), (0.0, 0.0)];

pub fn rendezvous_spec(
    params: RendezvousParams,
    t_range: Option<(f64, f64)>,
    parts: usize,
) -> Result<SystemSpec> {
    let (t0, t1) = t_range.unwrap_or((0.0, 200.0));
    SystemSpec::new(
        4,
        rendezvous_dynamics(params),
        RENDEZVOUS_INTERVALS.to_vec(),
        t0,
        t1,
        parts,
    )
}

/// 12-state quadrotor parameters with the embedded PD setpoints
/// `(u1, u2, u3)` for height, roll and pitch.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct QuadrotorParams {
    pub g: f64,
    /// Radius of the center mass in meters.
    pub radius: f64,
    /// Distance of the rotors to the center of mass in meters.
    pub arm: f64,
    pub m_rotor: f64,
    pub m_center: f64,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

impl Default for QuadrotorParams {
    fn default() -> Self {
        Self {
            g: 9.81,
            radius: 0.1,
            arm: 0.5,
            m_rotor: 0.1,
            m_center: 1.0,
            u1: 1.0,
            u2: 0.0,
            u3: 0.0,
        }
    }
}

impl QuadrotorParams {
    pub fn mass(&self) -> f64 {
        self.m_center + 4.0 * self.m_rotor
    }

    pub fn jx(&self) -> f64 {
        0.4 * self.m_center * self.radius * self.radius + 2.0 * self.arm * self.arm * self.m_rotor
    }

    pub fn jy(&self) -> f64 {
        self.jx()
    }

    pub fn jz(&self) -> f64 {
        0.4 * self.m_center * self.radius * self.radius + 4.0 * self.arm * self.arm * self.m_rotor
    }
}

/// State layout: `x1` north, `x2` east, `x3` altitude, `x4..x6` body-frame
/// velocities, `x7..x9` roll/pitch/yaw, `x10..x12` angular rates.
///
/// One transcription note: the published system repeats the north-channel
/// rotation term in the east equation; here `x2'` uses the standard
/// body-to-inertial rotation (`cos(x8)sin(x9)` on the first term), which
/// restores independent north/east motion at zero angles.
pub fn quadrotor_dynamics(p: QuadrotorParams) -> DynamicsFn {
    let m = p.mass();
    let (jx, jy, jz) = (p.jx(), p.jy(), p.jz());
    Arc::new(move |x, _t, _d, out| {
        let (s7, c7) = x[6].sin_cos();
        let (s8, c8) = x[7].sin_cos();
        let (s9, c9) = x[8].sin_cos();
        let t8 = s8 / c8;

        // PD controllers for height, roll and pitch; heading uncontrolled.
        let f = m * p.g - 10.0 * (x[2] - p.u1) + 3.0 * x[5];
        let tau_phi = -(x[6] - p.u2) - x[9];
        let tau_theta = -(x[7] - p.u3) - x[10];
        let tau_psi = 0.0;

        out[0] = c8 * c9 * x[3] + (s7 * s8 * c9 - c7 * s9) * x[4] + (c7 * s8 * c9 + s7 * s9) * x[5];
        out[1] = c8 * s9 * x[3] + (s7 * s8 * s9 + c7 * c9) * x[4] + (c7 * s8 * s9 - s7 * c9) * x[5];
        out[2] = s8 * x[3] - s7 * c8 * x[4] - c7 * c8 * x[5];
        out[3] = x[11] * x[4] - x[10] * x[5] - p.g * s8;
        out[4] = x[9] * x[5] - x[11] * x[3] + p.g * c8 * s7;
        out[5] = x[10] * x[3] - x[9] * x[4] + p.g * c8 * c7 - f / m;
        out[6] = x[9] + s7 * t8 * x[10] + c7 * t8 * x[11];
        out[7] = c7 * x[10] - s7 * x[11];
        out[8] = s7 / c8 * x[10] + c7 / c8 * x[11];
        out[9] = (jy - jz) / jx * x[10] * x[11] + tau_phi / jx;
        out[10] = (jz - jx) / jy * x[9] * x[11] + tau_theta / jy;
        out[11] = (jx - jy) / jz * x[9] * x[10] + tau_psi / jz;
    })
}

/// Benchmark initial set: positions and velocities uncertain in
/// `[-0.4, 0.4]`, angles and rates zero.
pub fn quadrotor_default_intervals() -> Vec<(f64, f64)> {
    let mut intervals = vec![(-0.4, 0.4); 6];
    intervals.extend(std::iter::repeat_n((0.0, 0.0), 6));
    intervals
}

pub fn quadrotor_spec(
    params: QuadrotorParams,
    intervals: Option<Vec<(f64, f64)>>,
    t_range: Option<(f64, f64)>,
    parts: usize,
) -> Result<SystemSpec> {
    let (t0, t1) = t_range.unwrap_or((0.0, 5.0));
    let intervals = intervals.unwrap_or_else(quadrotor_default_intervals);
    SystemSpec::new(12, quadrotor_dynamics(params), intervals, t0, t1, parts)
}

/// Altitude index within the quadrotor state (0-based).
pub const QUADROTOR_ALTITUDE_DIM: usize = 2;

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(dynamics: &DynamicsFn, x: &[f64], t: f64) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        dynamics(x, t, None, &mut out);
        out
    }

    #[test]
    fn duffing_at_origin_and_cubic_root() {
        let dyn_f = duffing_dynamics(DuffingParams::default());
        let d = eval(&dyn_f, &[0.0, 0.0], 0.0);
        assert_eq!(d, vec![0.0, 0.4]);

        let no_forcing = duffing_dynamics(DuffingParams {
            gamma: 0.0,
            ..DuffingParams::default()
        });
        let d = eval(&no_forcing, &[1.0, 0.0], 0.7);
        assert_eq!(d, vec![0.0, 0.0]);
    }

    #[test]
    fn duffing_default_spec_shape() {
        let spec = duffing_spec(DuffingParams::default(), None, None, 1001).unwrap();
        assert_eq!(spec.state_dim(), 2);
        assert_eq!(spec.t_range(), (0.0, 100.0));
        assert_eq!(spec.init_intervals(), &DUFFING_INTERVALS);
    }

    #[test]
    fn laub_loomis_center_and_origin() {
        let dyn_f = laub_loomis_dynamics();
        let centers = LaubLoomisParams::default().centers;
        let d = eval(&dyn_f, &centers, 0.0);
        assert!((d[3] - (2.0 - 1.3 * 1.5 * 2.4)).abs() < 1e-15);
        assert!((d[3] + 2.68).abs() < 1e-12);

        let d0 = eval(&dyn_f, &[0.0; 7], 0.0);
        assert_eq!(d0, vec![0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn laub_loomis_default_unsafe_is_x4_at_5() {
        match laub_loomis_unsafe() {
            crate::reachset::UnsafePredicate::Halfspace { coeffs, offset } => {
                assert_eq!(offset, 5.0);
                assert_eq!(coeffs[3], 1.0);
                assert!(coeffs.iter().enumerate().all(|(i, &c)| i == 3 || c == 0.0));
            }
            other => panic!("expected halfspace, got {other:?}"),
        }
    }

    #[test]
    fn laub_loomis_boxes_center_plus_minus_w() {
        let p = LaubLoomisParams {
            w: 0.05,
            ..LaubLoomisParams::default()
        };
        let spec = laub_loomis_spec(p, None, 201).unwrap();
        let iv = spec.init_intervals();
        assert_eq!(iv.len(), 7);
        assert!((iv[3].0 - 2.35).abs() < 1e-12 && (iv[3].1 - 2.45).abs() < 1e-12);
        assert_eq!(spec.t_range(), (0.0, 20.0));
    }

    #[test]
    fn rendezvous_mode_regions_and_precedence() {
        let p = RendezvousParams::default();
        assert_eq!(rendezvous_mode(-500.0, 0.0, &p), RendezvousMode::Approaching);
        assert_eq!(rendezvous_mode(-100.0, 0.0, &p), RendezvousMode::RendezvousAttempt);
        assert_eq!(rendezvous_mode(-50.0, 119.9, &p), RendezvousMode::RendezvousAttempt);
        // aborting wins over both position modes
        assert_eq!(rendezvous_mode(-50.0, 120.0, &p), RendezvousMode::Aborting);
        assert_eq!(rendezvous_mode(-500.0, 150.0, &p), RendezvousMode::Aborting);
    }

    #[test]
    fn rendezvous_control_zero_after_abort() {
        let p = RendezvousParams::default();
        let u = rendezvous_control(&[-50.0, 10.0, 3.0, -2.0], 150.0, &p);
        assert_eq!(u, [0.0, 0.0]);
    }

    #[test]
    fn rendezvous_control_uses_k1_when_approaching() {
        let p = RendezvousParams::default();
        let state = [-500.0, 0.0, 0.0, 0.0];
        let u = rendezvous_control(&state, 0.0, &p);
        let k1 = p.k1();
        assert_eq!(u[0], k1[0][0] * -500.0);
        assert_eq!(u[1], k1[1][0] * -500.0);
    }

    #[test]
    fn rendezvous_equilibrium_at_origin() {
        // n^2*0 + mu/r^2 - mu/r^3 * r = 0 exactly (gravity terms cancel).
        let p = RendezvousParams::default();
        let dyn_f = rendezvous_dynamics(p.clone());
        let d = eval(&dyn_f, &[0.0, 0.0, 0.0, 0.0], 150.0); // aborting: controls off
        assert!(d[2].abs() < 1e-9, "v_x' = {}", d[2]);
        assert!(d[3].abs() < 1e-9, "v_y' = {}", d[3]);
    }

    #[test]
    fn rendezvous_mean_motion_squares_back() {
        let p = RendezvousParams::default();
        let n = p.mean_motion();
        assert!((n * n * p.r * p.r * p.r - p.mu).abs() / p.mu < 1e-12);
    }

    #[test]
    fn k2_readings_differ_only_in_one_entry() {
        let consistent = RendezvousParams::default().k2();
        let printed = RendezvousParams {
            k2_reading: K2Reading::Printed,
            ..RendezvousParams::default()
        }
        .k2();
        assert_eq!(consistent[0][2], -9614.9898);
        assert_eq!(printed[0][2], -96149898.0);
        assert_eq!(consistent[1], printed[1]);
    }

    #[test]
    fn quadrotor_inertia_and_mass() {
        let p = QuadrotorParams::default();
        assert!((p.mass() - 1.4).abs() < 1e-15);
        assert!((p.jz() - 0.104).abs() < 1e-15);
        assert!(p.jz() > p.jx() && p.jx() == p.jy() && p.jx() > 0.0);
    }

    #[test]
    fn quadrotor_hover_is_an_equilibrium() {
        let p = QuadrotorParams::default();
        let dyn_f = quadrotor_dynamics(p);
        let mut state = [0.0; 12];
        state[2] = p.u1; // at the height setpoint
        let d = eval(&dyn_f, &state, 0.0);
        for (i, v) in d.iter().enumerate() {
            assert!(v.abs() < 1e-14, "x{}' = {v}", i + 1);
        }
    }

    #[test]
    fn quadrotor_thrust_at_ground() {
        // F = m*g - 10*(x3 - u1) + 3*x6 at x3 = 0, x6 = 0, u1 = 1.
        let p = QuadrotorParams::default();
        let f = p.mass() * p.g + 10.0;
        assert!((f - 23.734).abs() < 1e-12);
    }

    #[test]
    fn quadrotor_default_initial_set() {
        let spec = quadrotor_spec(QuadrotorParams::default(), None, None, 501).unwrap();
        assert_eq!(spec.state_dim(), 12);
        let iv = spec.init_intervals();
        for (i, interval) in iv.iter().enumerate() {
            let expected = if i < 6 { (-0.4, 0.4) } else { (0.0, 0.0) };
            assert_eq!(*interval, expected);
        }
    }
}
