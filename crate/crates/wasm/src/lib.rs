//! Browser bindings: train a map on a synthetic S-curve and probe it.
//!
//! Build with `wasm-pack build crates/wasm --target web --out-dir www/pkg`
//! and serve `crates/wasm/www/`.

use gaussmap::interpret::DEFAULT_GRID_MARGIN;
use gaussmap::{
    global_influence, make_grid, reconstruction_error, s_curve, Embedding, Field, Inspector,
    TrainConfig, Trainer,
};
use wasm_bindgen::prelude::*;

fn js_err(e: gaussmap::Error) -> String {
    e.to_string()
}

/// A training session on S-curve data.
#[wasm_bindgen]
pub struct Explorer {
    trainer: Trainer,
    colors: Vec<f64>,
    embedding: Embedding,
}

#[wasm_bindgen]
impl Explorer {
    /// `k` of `None` trains on all pairs.
    #[wasm_bindgen(constructor)]
    pub fn new(
        n: u32,
        seed: u32,
        noise: f64,
        units: u32,
        learning_rate: f64,
        k: Option<u32>,
    ) -> Result<Explorer, String> {
        let curve = s_curve(n as usize, u64::from(seed), noise).map_err(js_err)?;
        let config = TrainConfig {
            num_units: units as usize,
            k_neighbors: k.map(|k| k as usize),
            learning_rate,
            seed: u64::from(seed),
            max_epochs: usize::MAX,
            patience: usize::MAX,
            ..TrainConfig::default()
        };
        let trainer = Trainer::new(curve.data, config).map_err(js_err)?;
        let embedding = trainer.best_model().transform_batch(trainer.data()).map_err(js_err)?;
        Ok(Explorer {
            trainer,
            colors: curve.color,
            embedding,
        })
    }

    /// Runs up to `epochs` more epochs and returns the best loss so far.
    pub fn train(&mut self, epochs: u32) -> Result<f64, String> {
        for _ in 0..epochs {
            if self.trainer.step().map_err(js_err)?.is_none() {
                break;
            }
        }
        self.embedding = self
            .trainer
            .best_model()
            .transform_batch(self.trainer.data())
            .map_err(js_err)?;
        Ok(self.trainer.best_loss().unwrap_or(f64::NAN))
    }

    #[wasm_bindgen(getter)]
    pub fn epochs(&self) -> u32 {
        self.trainer.history().len() as u32
    }

    /// Embedding of the best model so far as flat `[x0, y0, x1, y1, ...]`.
    pub fn embedding(&self) -> Vec<f64> {
        self.embedding.as_flat().to_vec()
    }

    pub fn colors(&self) -> Vec<f64> {
        self.colors.clone()
    }

    pub fn reconstruction_error(&self) -> Result<f64, String> {
        reconstruction_error(self.trainer.data(), &self.embedding).map_err(js_err)
    }

    pub fn global_influence(&self) -> Result<Vec<f64>, String> {
        global_influence(self.trainer.best_model())
            .map(|p| p.into_vec())
            .map_err(js_err)
    }

    /// Scalar field over a `resolution x resolution` grid around the
    /// embedding, prefixed by the grid corners `[min_x, min_y, max_x, max_y]`.
    ///
    /// Values run row by row from the minimum corner with x varying fastest.
    /// `kind` is `norm`, `variance` or `influence:J`.
    pub fn field(&self, kind: &str, resolution: u32) -> Result<Vec<f64>, String> {
        let field: Field = kind.parse().map_err(js_err)?;
        let grid =
            make_grid(&self.embedding, resolution as usize, DEFAULT_GRID_MARGIN).map_err(js_err)?;
        let inspector = Inspector::new(self.trainer.best_model());
        let mut out = Vec::with_capacity(4 + grid.points.len());
        out.extend_from_slice(&[grid.min[0], grid.min[1], grid.max[0], grid.max[1]]);
        for p in &grid.points {
            let value = inspector.evaluate(field, p).map_err(js_err)?;
            out.push(match field {
                Field::Influence(j) => value[j],
                _ => value[0],
            });
        }
        Ok(out)
    }

    /// `[norm, variance, w_0, w_1, ...]` at a point of the reduced space.
    pub fn probe(&self, x: f64, y: f64) -> Result<Vec<f64>, String> {
        let inspector = Inspector::new(self.trainer.best_model());
        let p = [x, y];
        let profile = inspector.local_influence(&p).map_err(js_err)?;
        let mut out = vec![inspector.local_norm(&p).map_err(js_err)?, profile.variance()];
        out.extend_from_slice(profile.as_slice());
        Ok(out)
    }
}
