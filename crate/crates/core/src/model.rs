//! The forward map: a blend of linear maps weighted by normalized Gaussian
//! responsibilities.
//!
//! For an input `x` the model computes
//!
//! ```text
//! g_i(x) = exp(-|x - mu_i|^2 / sigma_i^2)
//! w_i(x) = g_i(x) / (sum_j g_j(x) + eps)
//! f(x)   = sum_i w_i(x) M_i x
//! ```
//!
//! Each `M_i` is stored as an `output_dim x input_dim` row-major block, so
//! rows index output dimensions and columns index input dimensions.

use crate::data::{squared_distance, Dataset, Embedding, Points};
use crate::error::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    input_dim: usize,
    output_dim: usize,
    epsilon: f64,
    /// `m * input_dim`
    centers: Vec<f64>,
    sigmas: Vec<f64>,
    /// `m * output_dim * input_dim`
    matrices: Vec<f64>,
}

impl ModelParams {
    /// Builds a model from nested parts.
    ///
    /// `matrices[i][k][j]` is the weight of input dimension `j` in output
    /// dimension `k` for unit `i`. `epsilon` may be zero, in which case the
    /// weights are exact responsibilities wherever at least one activation
    /// is nonzero.
    pub fn new(
        centers: Vec<Vec<f64>>,
        sigmas: Vec<f64>,
        matrices: Vec<Vec<Vec<f64>>>,
        epsilon: f64,
    ) -> Result<Self> {
        let m = centers.len();
        if m == 0 {
            return Err(Error::Config("a model needs at least one unit".into()));
        }
        let input_dim = centers[0].len();
        let output_dim = matrices.first().map_or(0, Vec::len);
        if sigmas.len() != m || matrices.len() != m {
            return Err(Error::Config(format!(
                "unit count mismatch: {} centers, {} sigmas, {} matrices",
                m,
                sigmas.len(),
                matrices.len()
            )));
        }
        let mut flat_centers = Vec::with_capacity(m * input_dim);
        for c in &centers {
            if c.len() != input_dim {
                return Err(Error::Shape {
                    expected: input_dim,
                    found: c.len(),
                });
            }
            flat_centers.extend_from_slice(c);
        }
        let mut flat_matrices = Vec::with_capacity(m * output_dim * input_dim);
        for mat in &matrices {
            if mat.len() != output_dim {
                return Err(Error::Shape {
                    expected: output_dim,
                    found: mat.len(),
                });
            }
            for row in mat {
                if row.len() != input_dim {
                    return Err(Error::Shape {
                        expected: input_dim,
                        found: row.len(),
                    });
                }
                flat_matrices.extend_from_slice(row);
            }
        }
        Self::from_flat(
            input_dim,
            output_dim,
            epsilon,
            flat_centers,
            sigmas,
            flat_matrices,
        )
    }

    pub(crate) fn from_flat(
        input_dim: usize,
        output_dim: usize,
        epsilon: f64,
        centers: Vec<f64>,
        sigmas: Vec<f64>,
        matrices: Vec<f64>,
    ) -> Result<Self> {
        if input_dim == 0 || output_dim == 0 || output_dim >= input_dim {
            return Err(Error::Config(format!(
                "need 1 <= output_dim < input_dim, got output_dim={output_dim}, input_dim={input_dim}"
            )));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon must be finite and >= 0, got {epsilon}")));
        }
        let m = sigmas.len();
        if m == 0
            || centers.len() != m * input_dim
            || matrices.len() != m * output_dim * input_dim
        {
            return Err(Error::Config("inconsistent parameter buffer sizes".into()));
        }
        if let Some(s) = sigmas.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(Error::Config(format!("sigma must be finite and positive, got {s}")));
        }
        if centers.iter().chain(&matrices).any(|v| !v.is_finite()) {
            return Err(Error::Config("non-finite center or matrix entry".into()));
        }
        Ok(Self {
            input_dim,
            output_dim,
            epsilon,
            centers,
            sigmas,
            matrices,
        })
    }

    pub fn num_units(&self) -> usize {
        self.sigmas.len()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn center(&self, i: usize) -> &[f64] {
        &self.centers[i * self.input_dim..(i + 1) * self.input_dim]
    }

    pub fn sigma(&self, i: usize) -> f64 {
        self.sigmas[i]
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    /// Row-major `output_dim x input_dim` block of unit `i`.
    pub fn matrix(&self, i: usize) -> &[f64] {
        let size = self.matrix_len();
        &self.matrices[i * size..(i + 1) * size]
    }

    pub fn matrix_rows(&self, i: usize) -> Vec<Vec<f64>> {
        self.matrix(i)
            .chunks_exact(self.input_dim)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub(crate) fn matrix_len(&self) -> usize {
        self.output_dim * self.input_dim
    }

    pub(crate) fn centers_flat(&self) -> &[f64] {
        &self.centers
    }

    pub(crate) fn matrices_flat(&self) -> &[f64] {
        &self.matrices
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut [f64], &mut [f64], &mut [f64]) {
        (&mut self.centers, &mut self.sigmas, &mut self.matrices)
    }

    /// Returns every parameter with all matrices multiplied by `factor`.
    pub fn with_scaled_matrices(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.matrices.iter_mut().for_each(|v| *v *= factor);
        out
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::Shape {
                expected: self.input_dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Unnormalized Gaussian activations `g_i(x)`, each in `[0, 1]`.
    pub fn gaussian_activations(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut out = vec![0.0; self.num_units()];
        self.activations_into(x, &mut out);
        Ok(out)
    }

    /// Blend weights `w_i(x)`. They sum to `S / (S + eps)` where `S` is the
    /// activation total; if every activation underflows the weights are zero.
    pub fn normalized_weights(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut out = vec![0.0; self.num_units()];
        self.weights_into(x, &mut out);
        Ok(out)
    }

    pub fn transform_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut weights = vec![0.0; self.num_units()];
        let mut out = vec![0.0; self.output_dim];
        self.transform_into(x, &mut weights, &mut out);
        Ok(out)
    }

    /// Maps every row of `data`. Each row goes through the same code path as
    /// [`ModelParams::transform_point`], so results are bitwise identical.
    pub fn transform_batch(&self, data: &Dataset) -> Result<Embedding> {
        if data.is_empty() {
            return Ok(Points::empty(self.output_dim));
        }
        self.check_input(data.row(0))?;
        let mut weights = vec![0.0; self.num_units()];
        let mut values = vec![0.0; data.len() * self.output_dim];
        for (x, out) in data.rows().zip(values.chunks_exact_mut(self.output_dim)) {
            self.transform_into(x, &mut weights, out);
        }
        Ok(Points::from_flat_unchecked(self.output_dim, values))
    }

    /// `sum_i weights[i] * M_i` as a row-major `output_dim x input_dim` block.
    pub fn aggregate_matrix(&self, weights: &[f64]) -> Result<Vec<f64>> {
        if weights.len() != self.num_units() {
            return Err(Error::Shape {
                expected: self.num_units(),
                found: weights.len(),
            });
        }
        let mut out = vec![0.0; self.matrix_len()];
        for (i, &w) in weights.iter().enumerate() {
            for (o, &v) in out.iter_mut().zip(self.matrix(i)) {
                *o += w * v;
            }
        }
        Ok(out)
    }

    pub(crate) fn activations_into(&self, x: &[f64], out: &mut [f64]) {
        for (i, g) in out.iter_mut().enumerate() {
            let s = self.sigmas[i];
            *g = (-squared_distance(x, self.center(i)) / (s * s)).exp();
        }
    }

    /// Writes the weights and returns the activation total `S`.
    pub(crate) fn weights_into(&self, x: &[f64], out: &mut [f64]) -> f64 {
        self.activations_into(x, out);
        let total: f64 = out.iter().sum();
        let denom = total + self.epsilon;
        if denom > 0.0 {
            out.iter_mut().for_each(|g| *g /= denom);
        } else {
            out.iter_mut().for_each(|g| *g = 0.0);
        }
        total
    }

    pub(crate) fn transform_into(&self, x: &[f64], weights: &mut [f64], out: &mut [f64]) {
        self.weights_into(x, weights);
        out.iter_mut().for_each(|v| *v = 0.0);
        for (i, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (o, row) in out.iter_mut().zip(self.matrix(i).chunks_exact(self.input_dim)) {
                let y: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
                *o += w * y;
            }
        }
    }
}
