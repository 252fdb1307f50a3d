//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test -p reachkit-cli --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, Matrix2, Vector2};

use reachkit::estimators::MethodConfig;
use reachkit::ode::{sample_system, SystemSpec};
use reachkit::reachset::{fit_tube, interval_of, iso_dim, ReachEstimate, SetKind};
use reachkit::systems::{
    duffing_spec, laub_loomis_spec, quadrotor_spec, rendezvous_control, rendezvous_dynamics,
    rendezvous_mode, DuffingParams, K2Reading, LaubLoomisParams, QuadrotorParams,
    RendezvousMode, RendezvousParams, RENDEZVOUS_INTERVALS,
};
use reachkit::{
    christoffel_sample_count, fit_christoffel, fit_pnorm_ball, negative_log_det,
    pnorm_sample_count, PNorm, ProbParams, SampleSet,
};

fn pass(criterion: &str) {
    println!("acceptance {criterion}: PASS");
}

/// Deterministic xorshift generator, independent of the crate's RNG.
struct Gen(u64);

impl Gen {
    fn next_unit(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_unit()
    }
}

// ===========================================================================
// 1. sample-count regression
// ===========================================================================

#[test]
fn criterion_1_sample_count_regression() {
    let start = Instant::now();
    let chris = ProbParams::new(0.05, 1e-9, 2)
        .unwrap()
        .with_degree(10)
        .unwrap();
    assert_eq!(christoffel_sample_count(&chris).unwrap(), 156_626);
    let pnorm = ProbParams::new(0.05, 1e-9, 2).unwrap();
    assert_eq!(pnorm_sample_count(&pnorm).unwrap(), 814);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    pass("1 (sample-count regression: 156626 and 814, < 1 ms)");
}

// ===========================================================================
// 2. MVEE oracle equivalence
// ===========================================================================

/// Conic `a x^2 + 2b xy + c y^2 + d x + e y + f = 0` as the coefficient
/// vector `(a, b, c, d, e, f)`.
#[derive(Clone, Copy)]
struct Conic([f64; 6]);

impl Conic {
    /// Normalized ellipse `(x - m)^T En (x - m) <= 1`, when the conic is a
    /// real ellipse.
    fn to_ellipse(self) -> Option<(Matrix2<f64>, Vector2<f64>)> {
        let [a, b, c, d, e, f] = self.0;
        let det2 = a * c - b * b;
        if det2 <= 0.0 {
            return None;
        }
        let (a, b, c, d, e, f) = if a > 0.0 {
            (a, b, c, d, e, f)
        } else {
            (-a, -b, -c, -d, -e, -f)
        };
        let em = Matrix2::new(a, b, b, c);
        let g = Vector2::new(d, e);
        let m = -em.try_inverse()? * g * 0.5;
        let s = (m.transpose() * em * m)[(0, 0)] - f;
        if s <= 0.0 {
            return None;
        }
        Some((em / s, m))
    }
}

fn ellipse_contains_all(en: &Matrix2<f64>, m: &Vector2<f64>, pts: &[[f64; 2]]) -> bool {
    pts.iter().all(|p| {
        let v = Vector2::new(p[0], p[1]) - m;
        (v.transpose() * en * v)[(0, 0)] <= 1.0 + 1e-9
    })
}

fn ellipse_objective(en: &Matrix2<f64>) -> f64 {
    // -log det A with A = sqrt(En)
    -0.5 * en.determinant().ln()
}

/// Null vector of a constraint matrix (rows x 6). Rows are zero-padded to a
/// square matrix so the thin SVD carries the full right singular basis,
/// including the null direction.
fn conic_from_constraints(rows: &[[f64; 6]]) -> Option<Conic> {
    let m = DMatrix::from_fn(6, 6, |i, j| if i < rows.len() { rows[i][j] } else { 0.0 });
    let svd = m.svd(false, true);
    let vt = svd.v_t.as_ref()?;
    // right singular vector of the smallest singular value
    let mut coef = [0.0; 6];
    for (j, c) in coef.iter_mut().enumerate() {
        *c = vt[(5, j)];
    }
    Some(Conic(coef))
}

fn on_conic_row(p: [f64; 2]) -> [f64; 6] {
    let [x, y] = p;
    [x * x, 2.0 * x * y, y * y, x, y, 1.0]
}

/// Minimal-area ellipse through exactly three points (its center is their
/// centroid), as a constrained null space.
fn steiner_candidate(pts: [[f64; 2]; 3]) -> Option<Conic> {
    let gx = (pts[0][0] + pts[1][0] + pts[2][0]) / 3.0;
    let gy = (pts[0][1] + pts[1][1] + pts[2][1]) / 3.0;
    let mut rows = Vec::with_capacity(5);
    for p in pts {
        rows.push(on_conic_row(p));
    }
    // gradient vanishes at the centroid: 2aGx + 2bGy + d = 0, 2bGx + 2cGy + e = 0
    rows.push([2.0 * gx, 2.0 * gy, 0.0, 1.0, 0.0, 0.0]);
    rows.push([0.0, 2.0 * gx, 2.0 * gy, 0.0, 1.0, 0.0]);
    conic_from_constraints(&rows)
}

/// The unique conic through five points.
fn five_point_candidate(pts: [[f64; 2]; 5]) -> Option<Conic> {
    let rows: Vec<[f64; 6]> = pts.iter().map(|&p| on_conic_row(p)).collect();
    conic_from_constraints(&rows)
}

/// Degenerate conic: the product of two lines, as a symmetric matrix
/// turned back into coefficients.
fn line_pair(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> Conic {
    // line through (x1,y1),(x2,y2): (y2-y1) x - (x2-x1) y + (x2 y1 - y2 x1) = 0
    let line = |a: [f64; 2], b: [f64; 2]| [b[1] - a[1], -(b[0] - a[0]), b[0] * a[1] - b[1] * a[0]];
    let l1 = line(p1, p2);
    let l2 = line(q1, q2);
    // symmetric product: M = (l1 l2^T + l2 l1^T) / 2 over homogeneous (x, y, 1)
    let m = |i: usize, j: usize| 0.5 * (l1[i] * l2[j] + l2[i] * l1[j]);
    Conic([
        m(0, 0),
        m(0, 1),
        m(1, 1),
        2.0 * m(0, 2),
        2.0 * m(1, 2),
        m(2, 2),
    ])
}

/// Best valid ellipse in the pencil through four points, by a dense scan
/// plus a fine rescan around the best angle.
fn four_point_candidate(pts: [[f64; 2]; 4], cloud: &[[f64; 2]]) -> Option<f64> {
    let q1 = line_pair(pts[0], pts[1], pts[2], pts[3]);
    let q2 = line_pair(pts[0], pts[2], pts[1], pts[3]);
    let blend = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let mut coef = [0.0; 6];
        for (j, v) in coef.iter_mut().enumerate() {
            *v = c * q1.0[j] + s * q2.0[j];
        }
        Conic(coef)
    };
    let evaluate = |theta: f64| -> Option<f64> {
        let (en, m) = blend(theta).to_ellipse()?;
        if !ellipse_contains_all(&en, &m, cloud) {
            return None;
        }
        Some(ellipse_objective(&en))
    };

    let coarse = 2000;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..coarse {
        let theta = std::f64::consts::PI * i as f64 / coarse as f64;
        if let Some(obj) = evaluate(theta) {
            if best.map(|(b, _)| obj < b).unwrap_or(true) {
                best = Some((obj, theta));
            }
        }
    }
    let (_, theta0) = best?;
    let step = std::f64::consts::PI / coarse as f64;
    let mut best_obj = f64::INFINITY;
    let fine = 800;
    for i in 0..=fine {
        let theta = theta0 - step + 2.0 * step * i as f64 / fine as f64;
        if let Some(obj) = evaluate(theta) {
            best_obj = best_obj.min(obj);
        }
    }
    best_obj.is_finite().then_some(best_obj)
}

/// Brute-force MVEE objective over all support subsets of size 3, 4 and 5.
fn brute_force_mvee_objective(cloud: &[[f64; 2]]) -> f64 {
    let consider = |conic: Option<Conic>| -> f64 {
        match conic.and_then(Conic::to_ellipse) {
            Some((en, m)) if ellipse_contains_all(&en, &m, cloud) => ellipse_objective(&en),
            _ => f64::INFINITY,
        }
    };
    let n = cloud.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                best = best.min(consider(steiner_candidate([cloud[i], cloud[j], cloud[k]])));
                for l in k + 1..n {
                    if let Some(obj) =
                        four_point_candidate([cloud[i], cloud[j], cloud[k], cloud[l]], cloud)
                    {
                        best = best.min(obj);
                    }
                    for m5 in l + 1..n {
                        best = best.min(consider(five_point_candidate([
                            cloud[i], cloud[j], cloud[k], cloud[l], cloud[m5],
                        ])));
                    }
                }
            }
        }
    }
    best
}

fn spanning(cloud: &[[f64; 2]]) -> bool {
    for i in 0..cloud.len() {
        for j in i + 1..cloud.len() {
            for k in j + 1..cloud.len() {
                let [ax, ay] = cloud[i];
                let [bx, by] = cloud[j];
                let [cx, cy] = cloud[k];
                if ((bx - ax) * (cy - ay) - (cx - ax) * (by - ay)).abs() > 1e-2 {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn criterion_2_mvee_oracle_equivalence() {
    let start = Instant::now();
    let mut gen = Gen(0xC0FFEE);
    let mut done = 0usize;
    while done < 50 {
        let n = 3 + (gen.next_unit() * 6.0) as usize; // 3..=8
        let cloud: Vec<[f64; 2]> = (0..n)
            .map(|_| [gen.next_in(-4.0, 4.0), gen.next_in(-4.0, 4.0)])
            .collect();
        if !spanning(&cloud) {
            continue;
        }
        done += 1;

        let flat: Vec<f64> = cloud.iter().flatten().copied().collect();
        let samples = SampleSet::from_terminal(flat, 2, 0).unwrap();
        let ball = fit_pnorm_ball(&samples, PNorm::Two).unwrap();
        let fitted = negative_log_det(&ball.a).unwrap();
        let oracle = brute_force_mvee_objective(&cloud);

        assert!(
            (fitted - oracle).abs() <= 1e-3,
            "cloud {done}: fitted {fitted} vs oracle {oracle} (n = {n})"
        );
        for p in &cloud {
            assert!(
                ball.defining_value(p) <= 1.0 + 10.0 * ball.tol,
                "cloud {done}: point {p:?} escaped"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    pass("2 (MVEE within 1e-3 of support-subset search on 50 clouds, < 10 s)");
}

// ===========================================================================
// 3. Christoffel hand case
// ===========================================================================

#[test]
fn criterion_3_christoffel_hand_case() {
    let samples = SampleSet::from_terminal(vec![-1.0, 1.0], 1, 0).unwrap();
    let set = fit_christoffel(&samples, 1, 0.0, false).unwrap();
    // C(x) = 1 + x^2
    for x in [-2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 1.7] {
        assert!((set.eval(&[x]) - (1.0 + x * x)).abs() < 1e-12, "C({x})");
    }
    assert!((set.level - 2.0).abs() < 1e-12);
    // sublevel set is exactly [-1, 1]
    assert!(set.contains(&[-1.0]) && set.contains(&[1.0]));
    assert!(!set.contains(&[-1.0 - 1e-9]) && !set.contains(&[1.0 + 1e-9]));
    pass("3 (Christoffel hand case: C = 1 + x^2, level 2, set [-1, 1])");
}

// ===========================================================================
// 4. PAC validation at desk scale
// ===========================================================================

#[test]
fn criterion_4_pac_validation_duffing() {
    let start = Instant::now();
    let (epsilon, delta, k) = (0.1, 1e-3, 4);
    let params = ProbParams::new(epsilon, delta, 2)
        .unwrap()
        .with_degree(k)
        .unwrap();
    let n = christoffel_sample_count(&params).unwrap() as usize;
    assert_eq!(n, 13_896); // frozen from the bound at these parameters

    let spec = duffing_spec(DuffingParams::default(), None, None, 1001).unwrap();
    let validation_m = 100_000;
    for seed in 0..10u64 {
        let train = sample_system(&spec, n, seed, false, 0).unwrap();
        let set = fit_christoffel(&train, k, 1e-4, true).unwrap();
        let fresh = sample_system(&spec, validation_m, 1_000_000 + seed, false, 0).unwrap();
        let mut inside = 0usize;
        for i in 0..validation_m {
            if set.contains(fresh.terminal_row(i)) {
                inside += 1;
            }
        }
        let fraction = inside as f64 / validation_m as f64;
        assert!(
            fraction >= 1.0 - epsilon,
            "seed {seed}: coverage {fraction} < {}",
            1.0 - epsilon
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    pass("4 (PAC validation: 10 seeds x 100k fresh samples, coverage >= 0.9, < 10 min)");
}

// ===========================================================================
// 5. Laub-Loomis safety
// ===========================================================================

#[test]
fn criterion_5_laub_loomis_safety() {
    let start = Instant::now();
    let spec = laub_loomis_spec(LaubLoomisParams::default(), None, 2001).unwrap();
    // N = 1000 is an explicit override: property check, guarantee not claimed.
    let samples = sample_system(&spec, 1000, 11, true, 0).unwrap();
    let altitude = iso_dim(&samples, &[3]).unwrap(); // x4
    let tube = fit_tube(&altitude, &MethodConfig::pnorm(PNorm::Inf)).unwrap();
    let mut max_upper = f64::NEG_INFINITY;
    for slice in &tube.slices {
        let (_, hi) = interval_of(slice, (0.0, 6.0), 64).unwrap();
        max_upper = max_upper.max(hi);
    }
    assert!(
        max_upper < 5.0,
        "x4 tube upper band reached {max_upper}, unsafe threshold 5"
    );

    // the unsafe-set checker agrees: clear at every recorded time
    let per_time = reachkit::check_unsafe_tube(
        &tube,
        &reachkit::systems::laub_loomis_unsafe(),
        &[(0.0, 6.0)],
        256,
    )
    .unwrap();
    assert!(per_time
        .iter()
        .all(|(_, v)| *v == reachkit::Verdict::Clear));

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    pass("5 (Laub-Loomis x4 tube upper band < 5 over [0, 20], < 2 min)");
}

// ===========================================================================
// 6. quadrotor goal region
// ===========================================================================

#[test]
fn criterion_6_quadrotor_goal_region() {
    let start = Instant::now();
    let spec = quadrotor_spec(QuadrotorParams::default(), None, None, 501).unwrap();
    let samples = sample_system(&spec, 2000, 21, true, 0).unwrap();
    let altitude = iso_dim(&samples, &[2]).unwrap(); // x3
    let tube = fit_tube(&altitude, &MethodConfig::pnorm(PNorm::Inf)).unwrap();
    let intervals: Vec<(f64, f64)> = tube
        .slices
        .iter()
        .map(|s| interval_of(s, (-1.0, 2.0), 64).unwrap())
        .collect();

    // height < 1.4 always
    let max_h = intervals.iter().map(|(_, hi)| *hi).fold(f64::MIN, f64::max);
    assert!(max_h < 1.4, "height reached {max_h}");
    // height > 0.9 for t > 1 s
    let min_after_1 = tube
        .times
        .iter()
        .zip(&intervals)
        .filter(|(t, _)| **t > 1.0)
        .map(|(_, (lo, _))| *lo)
        .fold(f64::MAX, f64::min);
    assert!(min_after_1 > 0.9, "height fell to {min_after_1} after 1 s");
    // within [0.98, 1.02] at t = 5 s
    let (lo5, hi5) = *intervals.last().unwrap();
    assert!(
        lo5 >= 0.98 && hi5 <= 1.02,
        "terminal band [{lo5}, {hi5}] misses [0.98, 1.02]"
    );
    // the whole tube stays inside [-0.5, 1.45]
    let min_h = intervals.iter().map(|(lo, _)| *lo).fold(f64::MAX, f64::min);
    assert!(min_h > -0.5 && max_h < 1.45, "band [{min_h}, {max_h}]");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    pass("6 (quadrotor altitude: < 1.4 always, > 0.9 after 1 s, in [0.98, 1.02] at 5 s, < 5 min)");
}

// ===========================================================================
// 7. determinism across worker counts
// ===========================================================================

#[test]
fn criterion_7_determinism_across_workers() {
    use reachkit_cli::commands;
    use reachkit_cli::config::RunConfig;

    let tmp = std::env::temp_dir().join(format!("reachkit-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&tmp);

    let make_cfg = |workers: usize| -> RunConfig {
        let out = tmp.join(format!("w{workers}"));
        let text = format!(
            r#"
            seed = 99
            workers = {workers}
            outputs = "{}"
            [system]
            name = "duffing"
            parts = 1001
            [probabilistic]
            epsilon = 0.1
            delta = 1e-3
            [method]
            kind = "christoffel"
            k = 4
            [plot]
            grid_n = 80
            "#,
            out.display()
        );
        RunConfig::from_toml(&text).unwrap()
    };

    let mut outputs: Vec<Vec<Vec<u8>>> = Vec::new();
    for workers in [1usize, 4, 8] {
        let cfg = make_cfg(workers);
        commands::cmd_sample(&cfg, Some(500)).unwrap();
        commands::cmd_estimate(&cfg).unwrap();
        commands::cmd_plot(&cfg).unwrap();
        let dir = tmp.join(format!("w{workers}"));
        let files = ["samples.csv", "estimate.json", "field.csv", "plot.svg"]
            .iter()
            .map(|f| std::fs::read(dir.join(f)).unwrap())
            .collect();
        outputs.push(files);
    }
    for later in &outputs[1..] {
        for (a, b) in outputs[0].iter().zip(later) {
            assert_eq!(a, b, "artifact differs across worker counts");
        }
    }
    let _ = std::fs::remove_dir_all(&tmp);
    pass("7 (byte-identical sampling, estimation and plot artifacts for workers 1, 4, 8)");
}

// ===========================================================================
// 8. transcription tables
// ===========================================================================

mod tables {
    //! Second transcription of each benchmark right-hand side, written
    //! independently of the library implementations.

    pub fn duffing(s: &[f64], t: f64) -> Vec<f64> {
        let (x, y) = (s[0], s[1]);
        vec![y, x - x.powi(3) - 0.05 * y + 0.4 * f64::cos(1.3 * t)]
    }

    pub fn laub_loomis(s: &[f64]) -> Vec<f64> {
        vec![
            1.4 * s[2] - 0.9 * s[0],
            2.5 * s[4] - 1.5 * s[1],
            0.6 * s[6] - 0.8 * s[1] * s[2],
            2.0 - 1.3 * s[2] * s[3],
            0.7 * s[0] - s[3] * s[4],
            0.3 * s[0] - 3.1 * s[5],
            1.8 * s[5] - 1.5 * s[1] * s[6],
        ]
    }

    pub fn rendezvous(s: &[f64], t: f64, printed: bool) -> Vec<f64> {
        let (x, y, vx, vy) = (s[0], s[1], s[2], s[3]);
        let mu = 3.986e14 * 3600.0;
        let r: f64 = 42_164_000.0;
        let n = (mu / (r * r * r)).sqrt();
        let rc = ((r + x) * (r + x) + y * y).sqrt();
        let (ux, uy) = if t >= 120.0 {
            (0.0, 0.0)
        } else if x >= -100.0 {
            let k13 = if printed { -96149898.0 } else { -9614.9898 };
            (
                -288.0288 * x + 0.1312 * y + k13 * vx,
                -0.1312 * x - 288.0 * y - 9614.9883 * vy,
            )
        } else {
            (
                -28.8287 * x + 0.1005 * y - 1449.9754 * vx + 0.0046 * vy,
                -0.087 * x - 33.2562 * y + 0.00462 * vx - 1451.5013 * vy,
            )
        };
        vec![
            vx,
            vy,
            n * n * x + 2.0 * n * vy + mu / (r * r) - mu / (r * r * r) * (r + x) + ux / 500.0,
            n * n * y - 2.0 * n * vx - mu / (rc * rc * rc) * y + uy / 500.0,
        ]
    }

    pub fn quadrotor(s: &[f64]) -> Vec<f64> {
        let g = 9.81;
        let m = 1.4;
        let jx = 0.054;
        let jy = 0.054;
        let jz = 0.104;
        let (x4, x5, x6) = (s[3], s[4], s[5]);
        let (x7, x8, x9) = (s[6], s[7], s[8]);
        let (x10, x11, x12) = (s[9], s[10], s[11]);
        let f = m * g - 10.0 * (s[2] - 1.0) + 3.0 * x6;
        vec![
            x8.cos() * x9.cos() * x4
                + (x7.sin() * x8.sin() * x9.cos() - x7.cos() * x9.sin()) * x5
                + (x7.cos() * x8.sin() * x9.cos() + x7.sin() * x9.sin()) * x6,
            x8.cos() * x9.sin() * x4
                + (x7.sin() * x8.sin() * x9.sin() + x7.cos() * x9.cos()) * x5
                + (x7.cos() * x8.sin() * x9.sin() - x7.sin() * x9.cos()) * x6,
            x8.sin() * x4 - x7.sin() * x8.cos() * x5 - x7.cos() * x8.cos() * x6,
            x12 * x5 - x11 * x6 - g * x8.sin(),
            x10 * x6 - x12 * x4 + g * x8.cos() * x7.sin(),
            x11 * x4 - x10 * x5 + g * x8.cos() * x7.cos() - f / m,
            x10 + x7.sin() * x8.tan() * x11 + x7.cos() * x8.tan() * x12,
            x7.cos() * x11 - x7.sin() * x12,
            x7.sin() / x8.cos() * x11 + x7.cos() / x8.cos() * x12,
            (jy - jz) / jx * x11 * x12 + (-(x7 - 0.0) - x10) / jx,
            (jz - jx) / jy * x10 * x12 + (-(x8 - 0.0) - x11) / jy,
            (jx - jy) / jz * x10 * x11,
        ]
    }
}

#[test]
fn criterion_8_transcription_tables() {
    let eval = |d: &reachkit::ode::DynamicsFn, s: &[f64], t: f64| -> Vec<f64> {
        let mut out = vec![0.0; s.len()];
        d(s, t, None, &mut out);
        out
    };
    let check = |actual: &[f64], expected: &[f64], label: &str| {
        for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
            let scale = e.abs().max(1.0);
            assert!(
                (a - e).abs() <= 1e-12 * scale,
                "{label} component {i}: {a} vs {e}"
            );
        }
    };

    let mut gen = Gen(4242);
    let duffing = reachkit::systems::duffing_dynamics(DuffingParams::default());
    let laub = reachkit::systems::laub_loomis_dynamics();
    let quad = reachkit::systems::quadrotor_dynamics(QuadrotorParams::default());
    for i in 0..20 {
        let s2: Vec<f64> = (0..2).map(|_| gen.next_in(-2.0, 2.0)).collect();
        let t = gen.next_in(0.0, 100.0);
        check(&eval(&duffing, &s2, t), &tables::duffing(&s2, t), "duffing");

        let s7: Vec<f64> = (0..7).map(|_| gen.next_in(0.0, 3.0)).collect();
        check(&eval(&laub, &s7, 0.0), &tables::laub_loomis(&s7), "laub-loomis");

        let mut s12: Vec<f64> = (0..12).map(|_| gen.next_in(-0.4, 0.4)).collect();
        for v in s12.iter_mut().skip(6) {
            *v = gen.next_in(-0.3, 0.3);
        }
        check(&eval(&quad, &s12, 0.0), &tables::quadrotor(&s12), "quadrotor");

        for (reading, printed) in [(K2Reading::Consistent, false), (K2Reading::Printed, true)] {
            let dyn_f = rendezvous_dynamics(RendezvousParams {
                k2_reading: reading,
                ..RendezvousParams::default()
            });
            let mut s4: Vec<f64> = (0..4).map(|_| gen.next_in(-950.0, -50.0)).collect();
            s4[2] = gen.next_in(-20.0, 20.0);
            s4[3] = gen.next_in(-20.0, 20.0);
            let t = match i % 3 {
                0 => gen.next_in(0.0, 119.0),
                1 => gen.next_in(120.0, 200.0),
                _ => {
                    s4[0] = gen.next_in(-99.0, -1.0);
                    gen.next_in(0.0, 119.0)
                }
            };
            check(
                &eval(&dyn_f, &s4, t),
                &tables::rendezvous(&s4, t, printed),
                "rendezvous",
            );
        }
    }
    pass("8 (all four benchmark dynamics match independent tables to 1e-12 relative)");
}

// ===========================================================================
// 9. rendezvous properties (mode logic and boundedness under both gains)
// ===========================================================================

/// Integrate in windows so long stiff horizons do not materialize the whole
/// grid at once.
fn integrate_windowed(
    params: RendezvousParams,
    x0: &[f64],
    t1: f64,
    windows: usize,
    parts_per_window: usize,
) -> Vec<f64> {
    let mut state = x0.to_vec();
    for w in 0..windows {
        let a = t1 * w as f64 / windows as f64;
        let b = t1 * (w + 1) as f64 / windows as f64;
        let spec = SystemSpec::new(
            4,
            rendezvous_dynamics(params.clone()),
            vec![(0.0, 0.0); 4],
            a,
            b,
            parts_per_window,
        )
        .unwrap();
        let traj = reachkit::integrate(&spec, &state, None).unwrap();
        state = traj.terminal().to_vec();
    }
    state
}

#[test]
fn criterion_9_rendezvous_properties() {
    let p = RendezvousParams::default();

    // mode precedence: aborting dominates both position modes
    assert_eq!(rendezvous_mode(-500.0, 0.0, &p), RendezvousMode::Approaching);
    assert_eq!(rendezvous_mode(-100.0, 10.0, &p), RendezvousMode::RendezvousAttempt);
    assert_eq!(rendezvous_mode(-500.0, 120.0, &p), RendezvousMode::Aborting);
    assert_eq!(rendezvous_mode(-50.0, 120.0, &p), RendezvousMode::Aborting);
    assert_eq!(rendezvous_mode(-50.0, 119.999, &p), RendezvousMode::RendezvousAttempt);

    // zero control after the abort time, anywhere in the state space
    let mut gen = Gen(777);
    for _ in 0..50 {
        let state = [
            gen.next_in(-1000.0, 100.0),
            gen.next_in(-500.0, 100.0),
            gen.next_in(-50.0, 50.0),
            gen.next_in(-50.0, 50.0),
        ];
        let t = gen.next_in(120.0, 200.0);
        assert_eq!(rendezvous_control(&state, t, &p), [0.0, 0.0]);
    }

    // bounded trajectories over [0, 200] min under the consistent gains
    let spec = reachkit::systems::rendezvous_spec(p.clone(), None, 2001).unwrap();
    let samples = sample_system(&spec, 20, 5, false, 0).unwrap();
    for i in 0..20 {
        let row = samples.terminal_row(i);
        assert!(row.iter().all(|v| v.is_finite()));
        assert!(row[0].abs() < 5000.0 && row[1].abs() < 5000.0, "position escaped: {row:?}");
        assert!(row[2].abs() < 500.0 && row[3].abs() < 500.0, "velocity escaped: {row:?}");
    }

    // the verbatim gain produces a stiff rendezvous-attempt mode; a finer
    // fixed step keeps the explicit integrator inside its stability region
    let printed = RendezvousParams {
        k2_reading: K2Reading::Printed,
        ..RendezvousParams::default()
    };
    let mut gen = Gen(31337);
    for _ in 0..3 {
        let x0: Vec<f64> = RENDEZVOUS_INTERVALS
            .iter()
            .map(|(lo, hi)| gen.next_in(*lo, *hi))
            .collect();
        let end = integrate_windowed(printed.clone(), &x0, 200.0, 2000, 10_001);
        assert!(end.iter().all(|v| v.is_finite()));
        assert!(end[0].abs() < 5000.0 && end[1].abs() < 5000.0, "position escaped: {end:?}");
        assert!(end[2].abs() < 500.0 && end[3].abs() < 500.0, "velocity escaped: {end:?}");
    }
    pass("9 (rendezvous: mode precedence, zero control after t = 120, bounded under both gains)");
}

// ===========================================================================
// opt-in slow test: the full-size workflow with the reach-set hole
// ===========================================================================

/// Above-threshold lattice components strictly inside the box (not touching
/// the border) -- the "hole" of a non-convex estimate.
fn has_interior_hole(values: &[f64], grid_n: usize, threshold: f64) -> bool {
    let above = |i: usize, j: usize| values[i * grid_n + j] > threshold;
    let mut seen = vec![false; grid_n * grid_n];
    for si in 0..grid_n {
        for sj in 0..grid_n {
            if seen[si * grid_n + sj] || !above(si, sj) {
                continue;
            }
            // flood fill the component of (si, sj)
            let mut touches_border = false;
            let mut stack = vec![(si, sj)];
            seen[si * grid_n + sj] = true;
            while let Some((i, j)) = stack.pop() {
                if i == 0 || j == 0 || i == grid_n - 1 || j == grid_n - 1 {
                    touches_border = true;
                }
                let neighbors = [
                    (i.wrapping_sub(1), j),
                    (i + 1, j),
                    (i, j.wrapping_sub(1)),
                    (i, j + 1),
                ];
                for (ni, nj) in neighbors {
                    if ni < grid_n && nj < grid_n && !seen[ni * grid_n + nj] && above(ni, nj) {
                        seen[ni * grid_n + nj] = true;
                        stack.push((ni, nj));
                    }
                }
            }
            if !touches_border {
                return true;
            }
        }
    }
    false
}

/// The published full-size run: 156626 Duffing samples, degree-10 fit, and
/// the non-convex hole visible at grid_n = 200. Several minutes of compute;
/// run with `cargo test -p reachkit-cli --test acceptance -- --ignored`.
#[test]
#[ignore]
fn slow_full_duffing_run_with_hole() {
    let params = ProbParams::new(0.05, 1e-9, 2)
        .unwrap()
        .with_degree(10)
        .unwrap();
    let n = christoffel_sample_count(&params).unwrap() as usize;
    assert_eq!(n, 156_626);

    let spec = duffing_spec(DuffingParams::default(), None, None, 1001).unwrap();
    let samples = sample_system(&spec, n, 2024, false, 0).unwrap();
    let set = fit_christoffel(&samples, 10, 1e-4, true).unwrap();

    // every training sample is inside
    for i in 0..n {
        assert!(set.contains(samples.terminal_row(i)));
    }

    // sample bounding box
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for i in 0..n {
        let row = samples.terminal_row(i);
        for j in 0..2 {
            lo[j] = lo[j].min(row[j]);
            hi[j] = hi[j].max(row[j]);
        }
    }

    let estimate = ReachEstimate {
        set: SetKind::Christoffel(set),
        dims: vec![0, 1],
    };
    let grid_n = 200;
    let bounds = [(lo[0], hi[0]), (lo[1], hi[1])];
    let field = reachkit::grid_contour(&estimate, &bounds, grid_n).unwrap();
    assert!(
        has_interior_hole(&field.values, grid_n, field.threshold),
        "no above-threshold region strictly inside the sample bounding box"
    );
    pass("slow (full 156626-sample run reproduces the interior hole at grid_n = 200)");
}
