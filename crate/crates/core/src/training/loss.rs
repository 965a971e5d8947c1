use super::{TrainConfig, COINCIDENT_DISTANCE};
use crate::data::{distance, squared_distance, Dataset, Embedding};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::neighbors::PairSet;

/// Loss gradients laid out like the model's own parameter buffers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    /// `m * output_dim * input_dim`, row-major per unit.
    pub matrices: Vec<f64>,
    pub sigmas: Vec<f64>,
    /// `m * input_dim`; present only when centers are trained.
    pub centers: Option<Vec<f64>>,
}

impl Gradients {
    pub fn max_abs(&self) -> f64 {
        self.matrices
            .iter()
            .chain(&self.sigmas)
            .chain(self.centers.iter().flatten())
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

fn check_inputs(model: &ModelParams, data: &Dataset, pairs: &PairSet) -> Result<()> {
    if data.dim() != model.input_dim() {
        return Err(Error::Shape {
            expected: model.input_dim(),
            found: data.dim(),
        });
    }
    if pairs.is_empty() {
        return Err(Error::Config("the pair set is empty".into()));
    }
    let n = data.len();
    if pairs.pairs().iter().any(|&(i, j)| i >= n || j >= n) {
        return Err(Error::Config(format!(
            "pair set references points beyond the {n} in the dataset"
        )));
    }
    Ok(())
}

/// Mean squared discrepancy between target and embedded pair distances.
pub fn stress(embedding: &Embedding, pairs: &PairSet) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::Config("the pair set is empty".into()));
    }
    let mut sum = 0.0;
    for ((i, j), target) in pairs.iter() {
        let r = target - distance(embedding.row(i), embedding.row(j));
        sum += r * r;
    }
    Ok(sum / pairs.len() as f64)
}

pub fn loss(model: &ModelParams, data: &Dataset, pairs: &PairSet) -> Result<f64> {
    check_inputs(model, data, pairs)?;
    let embedding = model.transform_batch(data)?;
    stress(&embedding, pairs)
}

pub fn gradients(
    model: &ModelParams,
    data: &Dataset,
    pairs: &PairSet,
    config: &TrainConfig,
) -> Result<Gradients> {
    loss_and_gradients(model, data, pairs, config.optimize_centers).map(|(_, g)| g)
}

/// Loss and its exact gradient in one forward/backward sweep.
///
/// The loss value is bitwise equal to [`loss`] on the same inputs.
pub fn loss_and_gradients(
    model: &ModelParams,
    data: &Dataset,
    pairs: &PairSet,
    with_centers: bool,
) -> Result<(f64, Gradients)> {
    check_inputs(model, data, pairs)?;
    let n = data.len();
    let m = model.num_units();
    let d1 = model.input_dim();
    let d2 = model.output_dim();

    let mut weights = vec![0.0; n * m];
    let mut outputs = vec![0.0; n * d2];
    for (a, x) in data.rows().enumerate() {
        model.transform_into(
            x,
            &mut weights[a * m..(a + 1) * m],
            &mut outputs[a * d2..(a + 1) * d2],
        );
    }

    // dL/df for every point
    let scale = 1.0 / pairs.len() as f64;
    let mut upstream = vec![0.0; n * d2];
    let mut sum = 0.0;
    for ((a, b), target) in pairs.iter() {
        let fa = &outputs[a * d2..(a + 1) * d2];
        let fb = &outputs[b * d2..(b + 1) * d2];
        let embedded = distance(fa, fb);
        let r = target - embedded;
        sum += r * r;
        if embedded < COINCIDENT_DISTANCE {
            continue;
        }
        let coef = -2.0 * r * scale / embedded;
        for k in 0..d2 {
            let g = coef * (fa[k] - fb[k]);
            upstream[a * d2 + k] += g;
            upstream[b * d2 + k] -= g;
        }
    }
    let loss = sum * scale;

    let mut grads = Gradients {
        matrices: vec![0.0; m * d2 * d1],
        sigmas: vec![0.0; m],
        centers: with_centers.then(|| vec![0.0; m * d1]),
    };
    for (a, x) in data.rows().enumerate() {
        let up = &upstream[a * d2..(a + 1) * d2];
        if up.iter().all(|&v| v == 0.0) {
            continue;
        }
        let f = &outputs[a * d2..(a + 1) * d2];
        let up_dot_f: f64 = up.iter().zip(f).map(|(u, v)| u * v).sum();
        for i in 0..m {
            let w = weights[a * m + i];
            if w == 0.0 {
                continue;
            }
            // h = up . (M_i x); dL/dM_i[k][j] = w up_k x_j
            let mut h = 0.0;
            let block = &mut grads.matrices[i * d2 * d1..(i + 1) * d2 * d1];
            for (k, row) in model.matrix(i).chunks_exact(d1).enumerate() {
                let y: f64 = row.iter().zip(x).map(|(p, q)| p * q).sum();
                h += up[k] * y;
                let wk = w * up[k];
                for (gm, &xj) in block[k * d1..(k + 1) * d1].iter_mut().zip(x) {
                    *gm += wk * xj;
                }
            }
            // dL/dg_i scaled by g_i / (S + eps) = w_i
            let c = (h - up_dot_f) * w;
            let sigma = model.sigma(i);
            let s2 = sigma * sigma;
            let center = model.center(i);
            grads.sigmas[i] += c * 2.0 * squared_distance(x, center) / (s2 * sigma);
            if let Some(gc) = grads.centers.as_mut() {
                let factor = c * 2.0 / s2;
                for ((g, &xj), &cj) in gc[i * d1..(i + 1) * d1].iter_mut().zip(x).zip(center) {
                    *g += factor * (xj - cj);
                }
            }
        }
    }
    Ok((loss, grads))
}
