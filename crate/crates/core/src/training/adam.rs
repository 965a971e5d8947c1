use super::{Gradients, TrainConfig};
use crate::model::ModelParams;

#[derive(Debug, Clone, Default)]
struct Moments {
    first: Vec<f64>,
    second: Vec<f64>,
}

impl Moments {
    fn zeros(len: usize) -> Self {
        Self {
            first: vec![0.0; len],
            second: vec![0.0; len],
        }
    }

    fn apply(&mut self, params: &mut [f64], grads: &[f64], config: &TrainConfig, step: i32) {
        let (b1, b2) = (config.adam_beta1, config.adam_beta2);
        let bias1 = 1.0 - b1.powi(step);
        let bias2 = 1.0 - b2.powi(step);
        for (((p, &g), m), v) in params
            .iter_mut()
            .zip(grads)
            .zip(self.first.iter_mut())
            .zip(self.second.iter_mut())
        {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            let m_hat = *m / bias1;
            let v_hat = *v / bias2;
            *p -= config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_eps);
        }
    }
}

/// Adam moment estimates for every trainable parameter group.
#[derive(Debug, Clone)]
pub struct AdamState {
    step: i32,
    matrices: Moments,
    sigmas: Moments,
    centers: Option<Moments>,
}

impl AdamState {
    pub fn new(model: &ModelParams, with_centers: bool) -> Self {
        Self {
            step: 0,
            matrices: Moments::zeros(model.matrices_flat().len()),
            sigmas: Moments::zeros(model.num_units()),
            centers: with_centers.then(|| Moments::zeros(model.centers_flat().len())),
        }
    }

    pub fn steps_taken(&self) -> i32 {
        self.step
    }
}

/// One bias-corrected Adam update. Sigmas are clamped to
/// `config.sigma_floor` afterwards. Center gradients are applied only when
/// both the state and the gradients carry them.
pub fn adam_step(
    state: &mut AdamState,
    model: &mut ModelParams,
    grads: &Gradients,
    config: &TrainConfig,
) {
    state.step = state.step.saturating_add(1);
    let step = state.step;
    let (centers, sigmas, matrices) = model.parts_mut();
    state.matrices.apply(matrices, &grads.matrices, config, step);
    state.sigmas.apply(sigmas, &grads.sigmas, config, step);
    if let (Some(moments), Some(g)) = (state.centers.as_mut(), grads.centers.as_ref()) {
        moments.apply(centers, g, config, step);
    }
    for s in sigmas.iter_mut() {
        if *s < config.sigma_floor {
            *s = config.sigma_floor;
        }
    }
}
