//! Trains on a 1,000-point S-curve and prints the interpretability summary.
//!
//! cargo run --release -p gaussmap --example s_curve -- [seed]

use std::time::Instant;

use gaussmap::{
    fit, global_influence, grid_report, reconstruction_error, s_curve, Field, TrainConfig,
};

fn main() -> gaussmap::Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    let curve = s_curve(1000, seed, 0.0)?;
    let config = TrainConfig {
        num_units: 100,
        max_epochs: 2000,
        seed,
        ..TrainConfig::default()
    };

    let start = Instant::now();
    let (model, report) = fit(&curve.data, &config)?;
    println!(
        "trained {} epochs in {:.1?} ({:?}), best loss {:.6}",
        report.epochs_run,
        start.elapsed(),
        report.stop_reason,
        report.best_loss.unwrap_or(f64::NAN)
    );

    let embedding = model.transform_batch(&curve.data)?;
    println!(
        "reconstruction error {:.4}",
        reconstruction_error(&curve.data, &embedding)?
    );
    println!("global influence {:?}", global_influence(&model)?.as_slice());

    let norms = grid_report(&model, &embedding, Field::Norm, 100, 0.05)?;
    let contracted = norms.scalars().iter().filter(|&&v| v < 1.0).count();
    let (lo, hi) = norms.range();
    println!(
        "local norm in [{lo:.3}, {hi:.3}], {:.1}% of cells contracted",
        contracted as f64 / 100.0
    );
    Ok(())
}
