use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::{adam_step, loss_and_gradients, AdamState, TrainConfig};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::neighbors::{all_pairs, knn_pairs, PairSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    MaxEpochs,
    Patience,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Loss of the parameters at the start of each epoch.
    pub loss_history: Vec<f64>,
    pub epochs_run: usize,
    pub stop_reason: StopReason,
    pub final_loss: Option<f64>,
    pub best_loss: Option<f64>,
    pub best_epoch: Option<usize>,
}

/// Samples `num_units` distinct data rows as centers, sets every sigma to 1
/// and draws matrix entries uniformly from `[-a, a]`.
pub fn init_model(data: &Dataset, config: &TrainConfig) -> Result<ModelParams> {
    config.validate(data.len(), data.dim())?;
    let d1 = data.dim();
    let d2 = config.output_dim;
    let m = config.num_units;
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);

    let mut centers = Vec::with_capacity(m * d1);
    for idx in sample(&mut rng, data.len(), m) {
        centers.extend_from_slice(data.row(idx));
    }
    let half_width = config
        .matrix_init_scale
        .unwrap_or_else(|| 1.0 / (d1 as f64).sqrt());
    let matrices = (0..m * d2 * d1)
        .map(|_| rng.random_range(-half_width..=half_width))
        .collect();
    ModelParams::from_flat(d1, d2, config.epsilon, centers, vec![1.0; m], matrices)
}

/// Full-batch training loop that can be advanced one epoch at a time.
#[derive(Debug, Clone)]
pub struct Trainer {
    data: Dataset,
    pairs: PairSet,
    config: TrainConfig,
    model: ModelParams,
    adam: AdamState,
    best: ModelParams,
    best_loss: Option<f64>,
    best_epoch: Option<usize>,
    stale_epochs: usize,
    history: Vec<f64>,
    stop: Option<StopReason>,
}

impl Trainer {
    pub fn new(data: Dataset, config: TrainConfig) -> Result<Self> {
        let model = init_model(&data, &config)?;
        let pairs = match config.k_neighbors {
            Some(k) => knn_pairs(&data, k)?,
            None => all_pairs(&data)?,
        };
        let adam = AdamState::new(&model, config.optimize_centers);
        let stop = (config.max_epochs == 0).then_some(StopReason::MaxEpochs);
        Ok(Self {
            data,
            pairs,
            best: model.clone(),
            model,
            adam,
            config,
            best_loss: None,
            best_epoch: None,
            stale_epochs: 0,
            history: Vec::new(),
            stop,
        })
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn pairs(&self) -> &PairSet {
        &self.pairs
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    /// Parameters the next epoch will start from.
    pub fn current_model(&self) -> &ModelParams {
        &self.model
    }

    /// Parameters with the lowest loss seen so far.
    pub fn best_model(&self) -> &ModelParams {
        &self.best
    }

    pub fn best_loss(&self) -> Option<f64> {
        self.best_loss
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn is_finished(&self) -> bool {
        self.stop.is_some()
    }

    /// Evaluates the loss at the current parameters, updates the stopping
    /// state and takes an Adam step unless training just ended.
    ///
    /// Returns the evaluated loss, or `None` once training has finished.
    pub fn step(&mut self) -> Result<Option<f64>> {
        if self.stop.is_some() {
            return Ok(None);
        }
        let (loss, grads) = loss_and_gradients(
            &self.model,
            &self.data,
            &self.pairs,
            self.config.optimize_centers,
        )?;
        if !loss.is_finite() {
            return Err(Error::Numerical(format!(
                "loss became {loss} at epoch {}",
                self.history.len()
            )));
        }
        let epoch = self.history.len();
        self.history.push(loss);

        let improved = match self.best_loss {
            None => true,
            Some(best) => loss < best - self.config.min_improvement * best,
        };
        if self.best_loss.is_none_or(|best| loss < best) {
            self.best_loss = Some(loss);
            self.best_epoch = Some(epoch);
            self.best.clone_from(&self.model);
        }
        if improved {
            self.stale_epochs = 0;
        } else {
            self.stale_epochs += 1;
        }

        if self.stale_epochs >= self.config.patience {
            self.stop = Some(StopReason::Patience);
        } else if self.history.len() >= self.config.max_epochs {
            self.stop = Some(StopReason::MaxEpochs);
        } else {
            adam_step(&mut self.adam, &mut self.model, &grads, &self.config);
        }
        Ok(Some(loss))
    }

    pub fn run(&mut self) -> Result<()> {
        while self.step()?.is_some() {}
        Ok(())
    }

    /// Runs to completion and returns the best parameters with the report.
    pub fn finish(mut self) -> Result<(ModelParams, TrainReport)> {
        self.run()?;
        let report = TrainReport {
            epochs_run: self.history.len(),
            final_loss: self.history.last().copied(),
            stop_reason: self.stop.unwrap_or(StopReason::MaxEpochs),
            best_loss: self.best_loss,
            best_epoch: self.best_epoch,
            loss_history: self.history,
        };
        Ok((self.best, report))
    }
}

pub fn fit(data: &Dataset, config: &TrainConfig) -> Result<(ModelParams, TrainReport)> {
    Trainer::new(data.clone(), config.clone())?.finish()
}
