//! Core domain types: data matrices and two-set partitions.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use rand::Rng;

/// An n x d data matrix, one observation per row. Immutable after
/// construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    n: usize,
    d: usize,
}

impl DataMatrix {
    /// Builds a matrix from row-major storage. Requires n >= 2, d >= 1 and
    /// finite entries.
    pub fn new(values: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("need at least 2 observations, got {n}")));
        }
        if d < 1 {
            return Err(Error::invalid("need at least 1 feature"));
        }
        if values.len() != n * d {
            return Err(Error::invalid(format!(
                "storage length {} does not match {n} x {d}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite entry at row {}, column {}",
                pos / d,
                pos % d
            )));
        }
        Ok(DataMatrix { values, n, d })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::invalid("ragged rows"));
        }
        DataMatrix::new(rows.concat(), n, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.d + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mean of all rows.
    pub fn grand_mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.d];
        for i in 0..self.n {
            for (m, v) in mean.iter_mut().zip(self.row(i)) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= self.n as f64;
        }
        mean
    }
}

/// Arithmetic mean of the selected rows.
pub fn centroid(data: &DataMatrix, indices: &[usize]) -> Result<Vec<f64>> {
    if indices.is_empty() {
        return Err(Error::invalid("centroid of an empty index set"));
    }
    let mut mean = vec![0.0; data.d()];
    for &i in indices {
        if i >= data.n() {
            return Err(Error::invalid(format!("index {i} out of range for n={}", data.n())));
        }
        for (m, v) in mean.iter_mut().zip(data.row(i)) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= indices.len() as f64;
    }
    Ok(mean)
}

/// A two-set partition of the observation indices. Label 0 marks cluster 1,
/// label 1 marks cluster 2; both clusters are nonempty by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<u8>,
    size1: usize,
    size2: usize,
}

impl Partition {
    pub fn from_labels(labels: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::invalid(format!("label {bad} is not 0 or 1")));
        }
        let size2 = labels.iter().filter(|&&l| l == 1).count();
        let size1 = labels.len() - size2;
        if size1 == 0 || size2 == 0 {
            return Err(Error::invalid("both clusters must be nonempty"));
        }
        Ok(Partition { labels, size1, size2 })
    }

    /// Partition that puts the first `k` positions of `ordering` in cluster 1.
    pub fn from_ordered_split(ordering: &[usize], k: usize) -> Result<Self> {
        let n = ordering.len();
        if k == 0 || k >= n {
            return Err(Error::invalid(format!("split position {k} not in 1..{n}")));
        }
        let mut labels = vec![1u8; n];
        for &i in &ordering[..k] {
            labels[i] = 0;
        }
        Partition::from_labels(labels)
    }

    /// Independent fair coin flips per observation, resampled wholesale
    /// whenever either cluster comes up empty.
    pub fn coin_flip(n: usize, stream: RngStream) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("need n >= 2 to partition"));
        }
        let mut rng = stream.rng();
        loop {
            let labels: Vec<u8> = (0..n).map(|_| rng.gen::<bool>() as u8).collect();
            if let Ok(p) = Partition::from_labels(labels) {
                return Ok(p);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn size1(&self) -> usize {
        self.size1
    }

    pub fn size2(&self) -> usize {
        self.size2
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    /// Indices of cluster 1 (label 0) or cluster 2 (label 1).
    pub fn cluster(&self, which: u8) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == which)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn swapped(&self) -> Partition {
        Partition {
            labels: self.labels.iter().map(|&l| 1 - l).collect(),
            size1: self.size2,
            size2: self.size1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centroid_midpoint() {
        let data = DataMatrix::from_rows(&[vec![0.0, 0.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(centroid(&data, &[0, 1]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn centroid_singleton() {
        let data = DataMatrix::from_rows(&[vec![5.0, 5.0], vec![9.0, 9.0]]).unwrap();
        assert_eq!(centroid(&data, &[0]).unwrap(), vec![5.0, 5.0]);
    }

    #[test]
    fn centroid_subset() {
        let data =
            DataMatrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(centroid(&data, &[0, 2]).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn centroid_empty_errors() {
        let data = DataMatrix::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(matches!(centroid(&data, &[]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn matrix_rejects_nan() {
        assert!(DataMatrix::new(vec![0.0, f64::NAN], 2, 1).is_err());
        assert!(DataMatrix::new(vec![0.0, f64::INFINITY], 2, 1).is_err());
    }

    #[test]
    fn partition_rejects_single_label() {
        assert!(Partition::from_labels(vec![0, 0, 0]).is_err());
        assert!(Partition::from_labels(vec![1, 1]).is_err());
        assert!(Partition::from_labels(vec![0, 1, 0]).is_ok());
        assert!(Partition::from_labels(vec![0, 2]).is_err());
    }

    #[test]
    fn coin_flip_n2_always_split() {
        for seed in 0..20 {
            let p = Partition::coin_flip(2, RngStream::new(seed)).unwrap();
            assert_eq!(p.size1(), 1);
            assert_eq!(p.size2(), 1);
        }
    }

    #[test]
    fn coin_flip_deterministic() {
        let a = Partition::coin_flip(100, RngStream::new(9)).unwrap();
        let b = Partition::coin_flip(100, RngStream::new(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coin_flip_binomial_mean() {
        // Mean of size1 over 500 seeds should sit near n/2.
        let n = 1000;
        let total: usize = (0..500)
            .map(|seed| Partition::coin_flip(n, RngStream::new(seed)).unwrap().size1())
            .sum();
        let mean = total as f64 / 500.0;
        assert!((mean - 500.0).abs() < 50.0, "mean size1 = {mean}");
    }
}
