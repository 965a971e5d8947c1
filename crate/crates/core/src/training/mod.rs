//! Stress-loss training of [`ModelParams`](crate::ModelParams).

mod adam;
mod loss;
mod trainer;

pub use adam::{adam_step, AdamState};
pub use loss::{gradients, loss, loss_and_gradients, stress, Gradients};
pub use trainer::{fit, init_model, StopReason, TrainReport, Trainer};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DEFAULT_EPSILON;

/// Embedded pairs closer than this contribute no gradient through their
/// distance term.
pub const COINCIDENT_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub num_units: usize,
    pub output_dim: usize,
    /// Restrict the loss to k-nearest-neighbour pairs; `None` uses all pairs.
    pub k_neighbors: Option<usize>,
    pub max_epochs: usize,
    pub patience: usize,
    /// Relative decrease of the best loss that counts as progress.
    pub min_improvement: f64,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub optimize_centers: bool,
    pub seed: u64,
    pub sigma_floor: f64,
    /// Half-width of the uniform matrix initialization; `1/sqrt(input_dim)`
    /// when unset.
    pub matrix_init_scale: Option<f64>,
    pub epsilon: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            num_units: 100,
            output_dim: 2,
            k_neighbors: None,
            max_epochs: 2000,
            patience: 100,
            min_improvement: 1e-6,
            learning_rate: 1e-2,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            optimize_centers: false,
            seed: 42,
            sigma_floor: 1e-3,
            matrix_init_scale: None,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl TrainConfig {
    /// Checks the settings against a dataset of `n` points in `input_dim`
    /// dimensions.
    pub fn validate(&self, n: usize, input_dim: usize) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.num_units == 0 {
            return fail("num_units must be at least 1".into());
        }
        if self.num_units > n {
            return fail(format!(
                "num_units ({}) cannot exceed the number of points ({n})",
                self.num_units
            ));
        }
        if self.output_dim == 0 || self.output_dim >= input_dim {
            return fail(format!(
                "output_dim must be in 1..{input_dim}, got {}",
                self.output_dim
            ));
        }
        if let Some(k) = self.k_neighbors {
            if k == 0 || k + 1 > n {
                return fail(format!("k must be in 1..={}, got {k}", n.saturating_sub(1)));
            }
        }
        if self.patience == 0 {
            return fail("patience must be at least 1".into());
        }
        let positive = [
            ("learning_rate", self.learning_rate),
            ("adam_eps", self.adam_eps),
            ("sigma_floor", self.sigma_floor),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return fail(format!("{name} must be positive, got {v}"));
            }
        }
        for (name, v) in [("adam_beta1", self.adam_beta1), ("adam_beta2", self.adam_beta2)] {
            if !(0.0..1.0).contains(&v) {
                return fail(format!("{name} must be in [0, 1), got {v}"));
            }
        }
        if !(self.min_improvement.is_finite() && self.min_improvement >= 0.0) {
            return fail(format!(
                "min_improvement must be >= 0, got {}",
                self.min_improvement
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return fail(format!("epsilon must be >= 0, got {}", self.epsilon));
        }
        if let Some(a) = self.matrix_init_scale {
            if !(a.is_finite() && a > 0.0) {
                return fail(format!("matrix_init_scale must be positive, got {a}"));
            }
        }
        Ok(())
    }
}
