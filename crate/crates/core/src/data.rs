//! Dense row-major point sets.

use crate::error::{Error, Result};

/// `n` points of a common dimension stored row-major.
///
/// Used both for datasets in the original space and for their embeddings.
#[derive(Debug, Clone, PartialEq)]
pub struct Points {
    dim: usize,
    values: Vec<f64>,
}

pub type Dataset = Points;
pub type Embedding = Points;

impl Points {
    /// Builds a point set from a flat row-major buffer.
    ///
    /// Rejects a zero dimension, a buffer that is not a whole number of rows
    /// and any non-finite coordinate.
    pub fn from_flat(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("points must have at least one coordinate".into()));
        }
        if !values.len().is_multiple_of(dim) {
            return Err(Error::Shape {
                expected: dim,
                found: values.len() % dim,
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::DegenerateData(format!(
                "non-finite coordinate at point {}, dimension {}",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self { dim, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::Shape {
                    expected: dim,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::from_flat(dim, values)
    }

    /// An empty set of `dim`-dimensional points.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            values: Vec::new(),
        }
    }

    pub(crate) fn from_flat_unchecked(dim: usize, values: Vec<f64>) -> Self {
        debug_assert!(dim > 0 && values.len().is_multiple_of(dim));
        Self { dim, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim.max(1))
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Per-axis minimum and maximum, `None` for an empty set.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let mut rows = self.rows();
        let first = rows.next()?;
        let mut lo = first.to_vec();
        let mut hi = first.to_vec();
        for row in rows {
            for ((l, h), &v) in lo.iter_mut().zip(hi.iter_mut()).zip(row) {
                *l = l.min(v);
                *h = h.max(v);
            }
        }
        Some((lo, hi))
    }
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip() {
        let p = Points::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.dim(), 2);
        assert_eq!(p.row(1), &[3.0, 4.0]);
        assert_eq!(p.to_rows()[2], vec![5.0, 6.0]);
    }

    #[test]
    fn rejects_ragged_and_non_finite() {
        let ragged: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![3.0]];
        assert!(matches!(
            Points::from_rows(&ragged),
            Err(Error::Shape { expected: 2, found: 1 })
        ));
        assert!(matches!(
            Points::from_flat(2, vec![1.0, f64::NAN]),
            Err(Error::DegenerateData(_))
        ));
        assert!(Points::from_flat(0, vec![]).is_err());
    }

    #[test]
    fn bounding_box() {
        let p = Points::from_rows(&[[1.0, -2.0], [-3.0, 4.0]]).unwrap();
        let (lo, hi) = p.bounding_box().unwrap();
        assert_eq!(lo, vec![-3.0, -2.0]);
        assert_eq!(hi, vec![1.0, 4.0]);
        assert!(Points::empty(2).bounding_box().is_none());
    }
}
