//! Original-space distances and the pair sets the stress loss runs over.

use crate::data::{distance, Dataset};
use crate::error::{Error, Result};

/// Unordered index pairs `(i, j)` with `i < j` and their original-space
/// distances.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSet {
    pairs: Vec<(usize, usize)>,
    target_distances: Vec<f64>,
}

impl PairSet {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn target_distances(&self) -> &[f64] {
        &self.target_distances
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.pairs.iter().copied().zip(self.target_distances.iter().copied())
    }
}

/// Symmetric matrix of Euclidean distances, returned as rows.
pub fn pairwise_distances<R: AsRef<[f64]>>(points: &[R]) -> Result<Vec<Vec<f64>>> {
    let n = points.len();
    if let Some(first) = points.first() {
        let dim = first.as_ref().len();
        if let Some(bad) = points.iter().find(|p| p.as_ref().len() != dim) {
            return Err(Error::Shape {
                expected: dim,
                found: bad.as_ref().len(),
            });
        }
    }
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = distance(points[i].as_ref(), points[j].as_ref());
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    Ok(out)
}

fn check_min_points(data: &Dataset) -> Result<()> {
    if data.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 points, got {}",
            data.len()
        )));
    }
    Ok(())
}

/// Every unordered pair, in lexicographic order.
pub fn all_pairs(data: &Dataset) -> Result<PairSet> {
    check_min_points(data)?;
    let n = data.len();
    let count = n * (n - 1) / 2;
    let mut pairs = Vec::with_capacity(count);
    let mut target_distances = Vec::with_capacity(count);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
            target_distances.push(distance(data.row(i), data.row(j)));
        }
    }
    Ok(PairSet {
        pairs,
        target_distances,
    })
}

/// Indices of the `k` nearest neighbours of point `i`, nearest first.
/// Equal distances are ordered by index.
pub fn nearest_neighbors(data: &Dataset, i: usize, k: usize) -> Vec<usize> {
    let mut candidates: Vec<(f64, usize)> = (0..data.len())
        .filter(|&j| j != i)
        .map(|j| (distance(data.row(i), data.row(j)), j))
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    candidates.truncate(k);
    candidates.into_iter().map(|(_, j)| j).collect()
}

/// Union of every point's `k`-nearest-neighbour relation, folded into
/// unordered pairs (mutual neighbours count once), in lexicographic order.
pub fn knn_pairs(data: &Dataset, k: usize) -> Result<PairSet> {
    check_min_points(data)?;
    let n = data.len();
    if k == 0 || k > n - 1 {
        return Err(Error::Config(format!(
            "k must be in 1..={} for {} points, got {}",
            n - 1,
            n,
            k
        )));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n * k);
    for i in 0..n {
        for j in nearest_neighbors(data, i, k) {
            pairs.push((i.min(j), i.max(j)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let target_distances = pairs
        .iter()
        .map(|&(i, j)| distance(data.row(i), data.row(j)))
        .collect();
    Ok(PairSet {
        pairs,
        target_distances,
    })
}
