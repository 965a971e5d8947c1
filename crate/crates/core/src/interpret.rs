//! Introspection of a trained model: distance distortion, per-dimension
//! influence, influence skewness and local expansion/contraction.
//!
//! The location-dependent quantities are evaluated at points `p` of the
//! reduced space. Unit responsibilities there come from Gaussians with the
//! trained sigmas placed at the projected centers `f(mu_i)`.

use std::fmt;
use std::str::FromStr;

use crate::data::{distance, squared_distance, Dataset, Embedding};
use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::model::ModelParams;

pub const DEFAULT_GRID_RESOLUTION: usize = 100;
pub const DEFAULT_GRID_MARGIN: f64 = 0.05;

/// Nonnegative per-input-dimension weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceProfile(Vec<f64>);

impl InfluenceProfile {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Population variance of the entries.
    pub fn variance(&self) -> f64 {
        population_variance(&self.0)
    }

    /// Index of the least influential input dimension.
    pub fn argmin(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(j, _)| j)
    }
}

impl std::ops::Index<usize> for InfluenceProfile {
    type Output = f64;

    fn index(&self, j: usize) -> &f64 {
        &self.0[j]
    }
}

fn population_variance(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    // shifted by the first entry, so identical entries give exactly zero
    let n = values.len() as f64;
    let shift = values[0];
    let mean = values.iter().map(|v| v - shift).sum::<f64>() / n;
    let spread = values
        .iter()
        .map(|v| (v - shift - mean) * (v - shift - mean))
        .sum::<f64>();
    spread / n
}

/// Sum of absolute pair-distance discrepancies over the sum of original
/// distances, across all unordered pairs. Zero means every distance is kept.
pub fn reconstruction_error(data: &Dataset, embedding: &Embedding) -> Result<f64> {
    if data.len() != embedding.len() {
        return Err(Error::Shape {
            expected: data.len(),
            found: embedding.len(),
        });
    }
    if data.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 points, got {}",
            data.len()
        )));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..data.len() {
        let (xi, yi) = (data.row(i), embedding.row(i));
        for j in (i + 1)..data.len() {
            let d = distance(xi, data.row(j));
            num += (d - distance(yi, embedding.row(j))).abs();
            den += d;
        }
    }
    if den == 0.0 {
        return Err(Error::DegenerateData(
            "all points coincide, so no distance can be normalized".into(),
        ));
    }
    Ok(num / den)
}

/// Per-unit share of absolute matrix mass held by each input column,
/// `m` rows of `input_dim` entries. Each row sums to one.
pub fn column_shares(model: &ModelParams) -> Result<Vec<Vec<f64>>> {
    let d1 = model.input_dim();
    (0..model.num_units())
        .map(|i| {
            let mut share = vec![0.0; d1];
            for row in model.matrix(i).chunks_exact(d1) {
                for (s, v) in share.iter_mut().zip(row) {
                    *s += v.abs();
                }
            }
            let total: f64 = share.iter().sum();
            if total == 0.0 {
                return Err(Error::DegenerateMatrix(i));
            }
            share.iter_mut().for_each(|s| *s /= total);
            Ok(share)
        })
        .collect()
}

/// Unweighted mean of the per-unit column shares.
pub fn global_influence(model: &ModelParams) -> Result<InfluenceProfile> {
    let shares = column_shares(model)?;
    let uniform = vec![1.0; shares.len()];
    blend_shares(&shares, &uniform)
}

/// Blends the per-unit column shares with `weights`, normalized to sum to
/// one.
pub fn blend_influence(model: &ModelParams, weights: &[f64]) -> Result<InfluenceProfile> {
    if weights.len() != model.num_units() {
        return Err(Error::Shape {
            expected: model.num_units(),
            found: weights.len(),
        });
    }
    blend_shares(&column_shares(model)?, weights)
}

fn blend_shares(shares: &[Vec<f64>], weights: &[f64]) -> Result<InfluenceProfile> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::Config("blend weights must be finite and nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Config("blend weights sum to zero".into()));
    }
    let d1 = shares.first().map_or(0, Vec::len);
    let mut out = vec![0.0; d1];
    for (share, &w) in shares.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        for (o, s) in out.iter_mut().zip(share) {
            *o += w * s;
        }
    }
    out.iter_mut().for_each(|o| *o /= total);
    Ok(InfluenceProfile(out))
}

/// Cached reduced-space view of a model for repeated point queries.
#[derive(Debug, Clone)]
pub struct Inspector<'a> {
    model: &'a ModelParams,
    /// `m * output_dim`
    projected: Vec<f64>,
    shares: Result<Vec<Vec<f64>>, usize>,
}

impl<'a> Inspector<'a> {
    pub fn new(model: &'a ModelParams) -> Self {
        let d2 = model.output_dim();
        let m = model.num_units();
        let mut projected = vec![0.0; m * d2];
        let mut scratch = vec![0.0; m];
        for i in 0..m {
            model.transform_into(
                model.center(i),
                &mut scratch,
                &mut projected[i * d2..(i + 1) * d2],
            );
        }
        let shares = column_shares(model).map_err(|e| match e {
            Error::DegenerateMatrix(i) => i,
            _ => unreachable!("column_shares only reports degenerate matrices"),
        });
        Self {
            model,
            projected,
            shares,
        }
    }

    pub fn model(&self) -> &ModelParams {
        self.model
    }

    pub fn projected_center(&self, i: usize) -> &[f64] {
        let d2 = self.model.output_dim();
        &self.projected[i * d2..(i + 1) * d2]
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.model.output_dim() {
            return Err(Error::Shape {
                expected: self.model.output_dim(),
                found: p.len(),
            });
        }
        Ok(())
    }

    fn exponents(&self, p: &[f64]) -> Vec<f64> {
        (0..self.model.num_units())
            .map(|i| {
                let s = self.model.sigma(i);
                -squared_distance(p, self.projected_center(i)) / (s * s)
            })
            .collect()
    }

    /// Blend weights at a reduced-space point, normalized with the model's
    /// epsilon exactly as in the forward map.
    pub fn reduced_space_weights(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_point(p)?;
        let mut g: Vec<f64> = self.exponents(p).into_iter().map(f64::exp).collect();
        let denom = g.iter().sum::<f64>() + self.model.epsilon();
        if denom > 0.0 {
            g.iter_mut().for_each(|v| *v /= denom);
        } else {
            g.iter_mut().for_each(|v| *v = 0.0);
        }
        Ok(g)
    }

    /// Reduced-space weights rescaled to sum to one, computed with a shifted
    /// exponent so they stay defined where every activation underflows.
    pub fn responsibilities(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_point(p)?;
        let mut e = self.exponents(p);
        let top = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        e.iter_mut().for_each(|v| *v = (*v - top).exp());
        let total: f64 = e.iter().sum();
        e.iter_mut().for_each(|v| *v /= total);
        Ok(e)
    }

    pub fn local_influence(&self, p: &[f64]) -> Result<InfluenceProfile> {
        let shares = self.shares.as_ref().map_err(|&i| Error::DegenerateMatrix(i))?;
        blend_shares(shares, &self.responsibilities(p)?)
    }

    pub fn influence_variance(&self, p: &[f64]) -> Result<f64> {
        Ok(self.local_influence(p)?.variance())
    }

    /// Spectral norm of the weight-blended matrix at `p`; above one the map
    /// stretches space there, below one it shrinks it.
    pub fn local_norm(&self, p: &[f64]) -> Result<f64> {
        let w = self.reduced_space_weights(p)?;
        let a = self.model.aggregate_matrix(&w)?;
        Ok(spectral_norm(&a, self.model.output_dim(), self.model.input_dim()))
    }

    /// Value of `field` at `p`: the full profile for influence fields, a
    /// single value otherwise.
    pub fn evaluate(&self, field: Field, p: &[f64]) -> Result<Vec<f64>> {
        match field {
            Field::Influence(j) => {
                if j >= self.model.input_dim() {
                    return Err(Error::Config(format!(
                        "influence dimension {j} out of range for {} inputs",
                        self.model.input_dim()
                    )));
                }
                Ok(self.local_influence(p)?.into_vec())
            }
            Field::Variance => Ok(vec![self.influence_variance(p)?]),
            Field::Norm => Ok(vec![self.local_norm(p)?]),
        }
    }
}

pub fn reduced_space_weights(model: &ModelParams, p: &[f64]) -> Result<Vec<f64>> {
    Inspector::new(model).reduced_space_weights(p)
}

pub fn local_influence(model: &ModelParams, p: &[f64]) -> Result<InfluenceProfile> {
    Inspector::new(model).local_influence(p)
}

pub fn influence_variance(model: &ModelParams, p: &[f64]) -> Result<f64> {
    Inspector::new(model).influence_variance(p)
}

pub fn local_norm(model: &ModelParams, p: &[f64]) -> Result<f64> {
    Inspector::new(model).local_norm(p)
}

/// Which quantity a grid report maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// Local influence; the report keeps the whole profile and the selected
    /// input dimension is the displayed scalar.
    Influence(usize),
    Variance,
    Norm,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Influence(j) => write!(f, "influence:{j}"),
            Field::Variance => f.write_str("variance"),
            Field::Norm => f.write_str("norm"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "variance" => Ok(Field::Variance),
            "norm" => Ok(Field::Norm),
            _ => s
                .strip_prefix("influence:")
                .and_then(|j| j.parse().ok())
                .map(Field::Influence)
                .ok_or_else(|| {
                    Error::Config(format!(
                        "unknown field `{s}`, expected influence:J, variance or norm"
                    ))
                }),
        }
    }
}

/// Axis-aligned mesh over a 2-D embedding, row-major from the minimum
/// corner (x varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub min: [f64; 2],
    pub max: [f64; 2],
    pub resolution: usize,
    pub points: Vec<[f64; 2]>,
}

fn axis(lo: f64, hi: f64, resolution: usize) -> Vec<f64> {
    let last = resolution - 1;
    (0..resolution)
        .map(|i| {
            if i == last {
                hi
            } else {
                lo + (hi - lo) * i as f64 / last as f64
            }
        })
        .collect()
}

pub fn make_grid(embedding: &Embedding, resolution: usize, margin_fraction: f64) -> Result<Grid> {
    if embedding.dim() != 2 {
        return Err(Error::UnsupportedDimension(embedding.dim()));
    }
    if resolution < 2 {
        return Err(Error::Config(format!("grid resolution must be >= 2, got {resolution}")));
    }
    if !(margin_fraction.is_finite() && margin_fraction >= 0.0) {
        return Err(Error::Config(format!(
            "grid margin must be finite and >= 0, got {margin_fraction}"
        )));
    }
    let (lo, hi) = embedding
        .bounding_box()
        .ok_or_else(|| Error::InsufficientData("cannot grid an empty embedding".into()))?;
    let mut min = [0.0; 2];
    let mut max = [0.0; 2];
    for a in 0..2 {
        let pad = margin_fraction * (hi[a] - lo[a]);
        min[a] = lo[a] - pad;
        max[a] = hi[a] + pad;
    }
    let xs = axis(min[0], max[0], resolution);
    let ys = axis(min[1], max[1], resolution);
    let points = ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| [x, y]))
        .collect();
    Ok(Grid {
        min,
        max,
        resolution,
        points,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridReport {
    pub field: Field,
    pub grid: Grid,
    /// One entry per grid point: the full profile for influence fields,
    /// a single value otherwise.
    pub values: Vec<Vec<f64>>,
}

impl GridReport {
    /// Displayed value of cell `i`.
    pub fn scalar(&self, i: usize) -> f64 {
        match self.field {
            Field::Influence(j) => self.values[i][j],
            _ => self.values[i][0],
        }
    }

    pub fn scalars(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.scalar(i)).collect()
    }

    /// Minimum and maximum displayed value.
    pub fn range(&self) -> (f64, f64) {
        self.scalars()
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    }
}

pub fn grid_report(
    model: &ModelParams,
    embedding: &Embedding,
    field: Field,
    resolution: usize,
    margin_fraction: f64,
) -> Result<GridReport> {
    if embedding.dim() != model.output_dim() {
        return Err(Error::Shape {
            expected: model.output_dim(),
            found: embedding.dim(),
        });
    }
    let grid = make_grid(embedding, resolution, margin_fraction)?;
    let inspector = Inspector::new(model);
    let values = grid
        .points
        .iter()
        .map(|p| inspector.evaluate(field, p))
        .collect::<Result<_>>()?;
    Ok(GridReport {
        field,
        grid,
        values,
    })
}
