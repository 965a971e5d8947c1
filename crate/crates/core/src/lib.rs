//! Non-linear dimensionality reduction built from linear maps blended by
//! normalized Gaussian responsibilities, trained to preserve pairwise
//! distances, together with tools to read what a trained model does.
//!
//! ```
//! use gaussmap::{fit, reconstruction_error, s_curve, TrainConfig};
//!
//! let curve = s_curve(60, 1, 0.0).unwrap();
//! let config = TrainConfig { num_units: 6, max_epochs: 40, ..TrainConfig::default() };
//! let (model, report) = fit(&curve.data, &config).unwrap();
//! let embedding = model.transform_batch(&curve.data).unwrap();
//! assert_eq!(embedding.dim(), 2);
//! assert!(report.best_loss.unwrap() <= report.loss_history[0]);
//! assert!(reconstruction_error(&curve.data, &embedding).unwrap() < 1.0);
//! ```

pub mod data;
pub mod error;
pub mod interpret;
pub mod io;
pub mod linalg;
pub mod model;
pub mod neighbors;
pub mod svg;
pub mod synth;
pub mod training;

pub use data::{Dataset, Embedding, Points};
pub use error::{Error, Result};
pub use interpret::{
    global_influence, grid_report, influence_variance, local_influence, local_norm, make_grid,
    reconstruction_error, reduced_space_weights, Field, Grid, GridReport, InfluenceProfile,
    Inspector,
};
pub use model::{ModelParams, DEFAULT_EPSILON};
pub use neighbors::{all_pairs, knn_pairs, pairwise_distances, PairSet};
pub use synth::{s_curve, SCurve};
pub use training::{fit, init_model, StopReason, TrainConfig, TrainReport, Trainer};
