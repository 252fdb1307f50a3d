//! Time-varying disturbances modeled as random weighted sums of basis
//! functions: `d(t) = sum_i alpha_i * f_i(t)`.
//!
//! A template holds the basis; drawing weights produces a fresh instance per
//! trajectory, so one template serves every sample.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rng::{uniform_closed, SampleStream};

/// A scalar basis function of time.
pub type BasisFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Disturbance along a single state dimension: `m + 1` basis functions
/// `f_0..f_m` and, once drawn, a weight vector `alpha` of the same length.
#[derive(Clone)]
pub struct ScalarDisturbance {
    basis: Vec<BasisFn>,
    alpha: Option<Vec<f64>>,
}

impl fmt::Debug for ScalarDisturbance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarDisturbance")
            .field("m", &self.m())
            .field("alpha", &self.alpha)
            .finish()
    }
}

impl ScalarDisturbance {
    /// Template from explicit basis functions `f_0..f_m` (so `basis.len() = m + 1`).
    pub fn new(basis: Vec<BasisFn>) -> Self {
        assert!(!basis.is_empty(), "at least the constant basis f_0 is required");
        Self { basis, alpha: None }
    }

    /// The built-in sinusoidal family: `f_0 = 1`, `f_i(t) = sin(2*pi*i*t)` for
    /// `1 <= i <= m`.
    pub fn sin_disturbance(m: usize) -> Self {
        let mut basis: Vec<BasisFn> = Vec::with_capacity(m + 1);
        basis.push(Arc::new(|_t| 1.0));
        for i in 1..=m {
            let freq = 2.0 * std::f64::consts::PI * i as f64;
            basis.push(Arc::new(move |t| (freq * t).sin()));
        }
        Self { basis, alpha: None }
    }

    /// Number of non-constant basis functions.
    pub fn m(&self) -> usize {
        self.basis.len() - 1
    }

    /// Evaluate basis function `i` at time `t`.
    pub fn basis_at(&self, i: usize, t: f64) -> f64 {
        (self.basis[i])(t)
    }

    pub fn alpha(&self) -> Option<&[f64]> {
        self.alpha.as_deref()
    }

    /// New instance with weights drawn from the stream: `alpha_0 ~ U[0, 1]`,
    /// `alpha_i ~ U[0, 1/i]` independently for `i >= 1`. The template itself
    /// is never mutated.
    pub fn draw_alpha(&self, rng: &mut SampleStream) -> ScalarDisturbance {
        let alpha = (0..self.basis.len())
            .map(|i| {
                let hi = if i == 0 { 1.0 } else { 1.0 / i as f64 };
                uniform_closed(rng, 0.0, hi)
            })
            .collect();
        ScalarDisturbance {
            basis: self.basis.clone(),
            alpha: Some(alpha),
        }
    }

    /// `sum_i alpha_i * f_i(t)`. Errors if the weights were never drawn.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let alpha = self.alpha.as_ref().ok_or(Error::WeightsNotDrawn)?;
        Ok(alpha
            .iter()
            .zip(&self.basis)
            .map(|(a, f)| a * f(t))
            .sum())
    }

    /// Instance with explicit weights (mainly for tests and replaying runs).
    pub fn with_alpha(&self, alpha: Vec<f64>) -> ScalarDisturbance {
        assert_eq!(alpha.len(), self.basis.len(), "one weight per basis function");
        ScalarDisturbance {
            basis: self.basis.clone(),
            alpha: Some(alpha),
        }
    }
}

/// Per-dimension disturbance templates; `None` marks an undisturbed dimension.
#[derive(Clone, Debug, Default)]
pub struct DisturbanceSpec {
    per_dim: Vec<Option<ScalarDisturbance>>,
}

impl DisturbanceSpec {
    pub fn new(per_dim: Vec<Option<ScalarDisturbance>>) -> Self {
        Self { per_dim }
    }

    pub fn state_dim(&self) -> usize {
        self.per_dim.len()
    }

    pub fn is_disturbed(&self, dim: usize) -> bool {
        self.per_dim.get(dim).map(|d| d.is_some()).unwrap_or(false)
    }

    /// Draw weights for every disturbed dimension, in dimension order, from
    /// the given per-sample stream.
    pub fn draw(&self, rng: &mut SampleStream) -> DisturbanceInstance {
        let per_dim = self
            .per_dim
            .iter()
            .map(|d| d.as_ref().map(|t| t.draw_alpha(rng)))
            .collect();
        DisturbanceInstance { per_dim }
    }
}

/// A drawn disturbance: weights fixed for one trajectory.
#[derive(Clone, Debug)]
pub struct DisturbanceInstance {
    per_dim: Vec<Option<ScalarDisturbance>>,
}

impl DisturbanceInstance {
    pub fn state_dim(&self) -> usize {
        self.per_dim.len()
    }

    /// Disturbance value of dimension `dim` at time `t`; 0 for undisturbed
    /// dimensions.
    pub fn get_dist(&self, dim: usize, t: f64) -> Result<f64> {
        let entry = self.per_dim.get(dim).ok_or(Error::DimensionOutOfRange {
            dim,
            state_dim: self.per_dim.len(),
        })?;
        match entry {
            Some(d) => d.eval(t),
            None => Ok(0.0),
        }
    }

    /// All per-dimension values at time `t`, written into `out`.
    pub fn eval_all(&self, t: f64, out: &mut [f64]) -> Result<()> {
        for (dim, slot) in out.iter_mut().enumerate() {
            *slot = self.get_dist(dim, t)?;
        }
        Ok(())
    }

    pub fn dim(&self, dim: usize) -> Option<&ScalarDisturbance> {
        self.per_dim.get(dim).and_then(|d| d.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sample_stream;

    #[test]
    fn sin_basis_values() {
        let d = ScalarDisturbance::sin_disturbance(4);
        // f_1(0.5) = sin(pi) = 0
        assert!(d.basis_at(1, 0.5).abs() < 1e-15);
        // f_3(1/12) = sin(pi/2) = 1
        assert!((d.basis_at(3, 1.0 / 12.0) - 1.0).abs() < 1e-12);
        // f_2 has period 0.5
        for t in [0.1, 0.37] {
            assert!((d.basis_at(2, t) - d.basis_at(2, t + 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn eval_matches_hand_computation() {
        let d = ScalarDisturbance::sin_disturbance(2).with_alpha(vec![0.2, 0.1, 0.05]);
        let expected = 0.2 + 0.1 * (std::f64::consts::FRAC_PI_4).sin() + 0.05;
        assert!((d.eval(0.125).unwrap() - expected).abs() < 1e-12);
        assert!((d.eval(0.125).unwrap() - 0.320710678118).abs() < 1e-10);
    }

    #[test]
    fn eval_at_zero_returns_alpha0() {
        let d = ScalarDisturbance::sin_disturbance(3).with_alpha(vec![0.7, 0.3, 0.2, 0.1]);
        assert_eq!(d.eval(0.0).unwrap(), 0.7);
    }

    #[test]
    fn sin_with_unit_weight_on_f1() {
        let d = ScalarDisturbance::sin_disturbance(1).with_alpha(vec![0.0, 1.0]);
        assert!((d.eval(0.25).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eval_before_draw_is_an_error() {
        let d = ScalarDisturbance::sin_disturbance(1);
        assert!(matches!(d.eval(0.3), Err(Error::WeightsNotDrawn)));
    }

    #[test]
    fn draw_alpha_respects_bounds() {
        let template = ScalarDisturbance::sin_disturbance(3);
        for idx in 0..200 {
            let mut rng = sample_stream(7, idx);
            let d = template.draw_alpha(&mut rng);
            let alpha = d.alpha().unwrap();
            assert_eq!(alpha.len(), 4);
            assert!(alpha[0] >= 0.0 && alpha[0] <= 1.0);
            for (i, a) in alpha.iter().enumerate().skip(1) {
                assert!(*a >= 0.0 && *a <= 1.0 / i as f64, "alpha_{i} out of range");
            }
        }
    }

    #[test]
    fn draw_alpha_m0_single_constant() {
        let template = ScalarDisturbance::sin_disturbance(0);
        let mut rng = sample_stream(1, 0);
        let d = template.draw_alpha(&mut rng);
        let alpha = d.alpha().unwrap();
        assert_eq!(alpha.len(), 1);
        assert!((0.0..=1.0).contains(&alpha[0]));
    }

    #[test]
    fn alpha2_empirical_mean_is_one_quarter() {
        // alpha_2 ~ U[0, 1/2], mean 1/4.
        let template = ScalarDisturbance::sin_disturbance(2);
        let n = 100_000;
        let mut sum = 0.0;
        for idx in 0..n {
            let mut rng = sample_stream(11, idx);
            let d = template.draw_alpha(&mut rng);
            sum += d.alpha().unwrap()[2];
        }
        let mean = sum / n as f64;
        assert!((mean - 0.25).abs() < 0.01, "mean = {mean}");
    }

    #[test]
    fn draw_does_not_mutate_template() {
        let template = ScalarDisturbance::sin_disturbance(2);
        let mut rng = sample_stream(3, 0);
        let _ = template.draw_alpha(&mut rng);
        assert!(template.alpha().is_none());
    }

    #[test]
    fn get_dist_zero_for_undisturbed_and_err_out_of_range() {
        let spec = DisturbanceSpec::new(vec![Some(ScalarDisturbance::sin_disturbance(1)), None]);
        let mut rng = sample_stream(5, 0);
        let inst = spec.draw(&mut rng);
        assert_eq!(inst.get_dist(1, 0.73).unwrap(), 0.0);
        assert!(matches!(
            inst.get_dist(2, 0.0),
            Err(Error::DimensionOutOfRange { dim: 2, state_dim: 2 })
        ));
    }

    #[test]
    fn per_dim_instance_evaluates_its_own_weights() {
        let spec = DisturbanceSpec::new(vec![Some(ScalarDisturbance::sin_disturbance(1)), None]);
        let mut rng = sample_stream(5, 1);
        let mut inst = spec.draw(&mut rng);
        // Overwrite with the hand-picked weights from the contract example.
        inst.per_dim[0] = Some(ScalarDisturbance::sin_disturbance(1).with_alpha(vec![0.0, 1.0]));
        assert!((inst.get_dist(0, 0.25).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_disturbed_dimensions_get_distinct_weights() {
        let spec = DisturbanceSpec::new(vec![
            Some(ScalarDisturbance::sin_disturbance(2)),
            Some(ScalarDisturbance::sin_disturbance(2)),
        ]);
        let mut rng = sample_stream(9, 0);
        let inst = spec.draw(&mut rng);
        let a0 = inst.dim(0).unwrap().alpha().unwrap().to_vec();
        let a1 = inst.dim(1).unwrap().alpha().unwrap().to_vec();
        assert_ne!(a0, a1);
    }

    #[test]
    fn sin_eval_bounded_by_weight_sum() {
        // |d(t)| <= sum_i alpha_i <= 1 + H_m for the sin basis.
        let template = ScalarDisturbance::sin_disturbance(5);
        let h5: f64 = (1..=5).map(|i| 1.0 / i as f64).sum();
        for idx in 0..50 {
            let mut rng = sample_stream(13, idx);
            let d = template.draw_alpha(&mut rng);
            for step in 0..100 {
                let t = step as f64 * 0.04;
                let v = d.eval(t).unwrap();
                assert!(v.abs() <= 1.0 + h5 + 1e-12);
            }
        }
    }
}
