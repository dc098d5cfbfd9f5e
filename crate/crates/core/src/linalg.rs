//! Distances, sums of squares, PCA, and covariance-eigenvalue estimation
//! for the Gaussian null model.

use crate::data::{centroid, DataMatrix};
use crate::error::{Error, Result};
use crate::parallel;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Symmetric matrix of pairwise squared Euclidean distances.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    values: Vec<f64>,
    n: usize,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Full double sum over a block of indices (both orderings counted).
    pub fn block_sum(&self, indices: &[usize]) -> f64 {
        let mut total = 0.0;
        for &i in indices {
            for &j in indices {
                total += self.get(i, j);
            }
        }
        total
    }
}

pub fn pairwise_sq_distances(data: &DataMatrix) -> DistanceMatrix {
    let n = data.n();
    let rows = parallel::map_indexed(n, |i| {
        let xi = data.row(i);
        (0..n)
            .map(|j| sq_dist(xi, data.row(j)))
            .collect::<Vec<f64>>()
    });
    DistanceMatrix { values: rows.concat(), n }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Sum over `indices` of squared distance to `center`.
pub fn total_ss_about(data: &DataMatrix, indices: &[usize], center: &[f64]) -> Result<f64> {
    if indices.is_empty() {
        return Err(Error::invalid("empty index set"));
    }
    if center.len() != data.d() {
        return Err(Error::invalid(format!(
            "center has length {}, expected {}",
            center.len(),
            data.d()
        )));
    }
    Ok(indices.iter().map(|&i| sq_dist(data.row(i), center)).sum())
}

/// Within-group SS about the group mean, and Σx_i - x̄² via the squared
/// distances to the overall data mean.
pub fn squared_dists_to_mean(data: &DataMatrix) -> Vec<f64> {
    let mean = data.grand_mean();
    (0..data.n()).map(|i| sq_dist(data.row(i), &mean)).collect()
}

/// Evaluates the within-group sum of squares two ways: directly about the
/// group mean, and as 1/(2k) times the full pairwise double sum over the
/// group. The two routes agree analytically.
pub fn lemma1_check(data: &DataMatrix, indices: &[usize]) -> Result<(f64, f64)> {
    let center = centroid(data, indices)?;
    let direct = total_ss_about(data, indices, &center)?;
    let k = indices.len() as f64;
    let mut double_sum = 0.0;
    for &i in indices {
        for &j in indices {
            double_sum += sq_dist(data.row(i), data.row(j));
        }
    }
    Ok((direct, double_sum / (2.0 * k)))
}

/// Principal component scores and loadings of the mean-centered data.
#[derive(Debug, Clone)]
pub struct PcaResult {
    /// n x P scores, row-major.
    pub scores: Vec<f64>,
    /// d x P loadings, column p at offset p*d, mutually orthonormal.
    pub loadings: Vec<f64>,
    /// Covariance eigenvalues for the kept components, descending.
    pub explained: Vec<f64>,
    pub n: usize,
    pub d: usize,
    pub num_components: usize,
}

impl PcaResult {
    pub fn score(&self, i: usize, p: usize) -> f64 {
        self.scores[i * self.num_components + p]
    }

    pub fn component_scores(&self, p: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.score(i, p)).collect()
    }
}

/// PCA via SVD of the centered matrix.
pub fn pca(data: &DataMatrix, num_components: usize) -> Result<PcaResult> {
    let n = data.n();
    let d = data.d();
    let max_p = (n - 1).min(d);
    if num_components < 1 || num_components > max_p {
        return Err(Error::invalid(format!(
            "num_components {num_components} not in 1..={max_p}"
        )));
    }
    let mean = data.grand_mean();
    let centered = DMatrix::from_fn(n, d, |i, j| data.get(i, j) - mean[j]);
    let svd = centered.svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with v_t");

    // Order components by singular value, descending.
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let order = &order[..num_components];

    let mut scores = vec![0.0; n * num_components];
    let mut loadings = vec![0.0; d * num_components];
    let mut explained = Vec::with_capacity(num_components);
    for (p, &c) in order.iter().enumerate() {
        let s = svd.singular_values[c];
        explained.push(s * s / (n as f64 - 1.0));
        // Canonical sign: largest-magnitude loading entry is positive.
        let mut sign = 1.0;
        let mut best = 0.0;
        for j in 0..d {
            let v = vt[(c, j)];
            if v.abs() > best {
                best = v.abs();
                sign = if v >= 0.0 { 1.0 } else { -1.0 };
            }
        }
        for j in 0..d {
            loadings[p * d + j] = sign * vt[(c, j)];
        }
        for i in 0..n {
            scores[i * num_components + p] = sign * u[(i, c)] * s;
        }
    }
    Ok(PcaResult { scores, loadings, explained, n, d, num_components })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenvalueMethod {
    Sample,
    Hard,
    Soft,
}

impl std::str::FromStr for EigenvalueMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sample" => Ok(EigenvalueMethod::Sample),
            "hard" => Ok(EigenvalueMethod::Hard),
            "soft" => Ok(EigenvalueMethod::Soft),
            other => Err(Error::invalid(format!("unknown eigenvalue method '{other}'"))),
        }
    }
}

/// Covariance eigenvalues used to parameterize the Gaussian null.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenvalueEstimate {
    /// d nonnegative eigenvalues, descending.
    pub lambdas: Vec<f64>,
    pub method: EigenvalueMethod,
    /// Background noise variance estimated from the centered entries.
    pub noise_variance: f64,
}

/// Sample covariance eigenvalues (zero-padded to length d when n-1 < d),
/// optionally thresholded against the MAD-based noise floor.
///
/// `hard` floors every eigenvalue at the noise variance. `soft` additionally
/// shifts all eigenvalues down by the smallest tau >= 0 such that the total
/// does not exceed the sample total, found by bisection.
pub fn estimate_null_eigenvalues(
    data: &DataMatrix,
    method: EigenvalueMethod,
) -> EigenvalueEstimate {
    let d = data.d();
    let n = data.n();
    let mean = data.grand_mean();
    let centered = DMatrix::from_fn(n, d, |i, j| data.get(i, j) - mean[j]);
    let mut lambdas: Vec<f64> = centered
        .svd(false, false)
        .singular_values
        .iter()
        .map(|s| s * s / (n as f64 - 1.0))
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    lambdas.resize(d, 0.0);

    // Column-centered entries; robust sigma-hat via scaled MAD.
    let mut entries: Vec<f64> = (0..n)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| data.get(i, j) - mean[j])
        .collect();
    let med = median(&mut entries.clone());
    for e in &mut entries {
        *e = (*e - med).abs();
    }
    let mad = median(&mut entries);
    let noise_variance = (1.4826 * mad).powi(2);

    let lambdas = match method {
        EigenvalueMethod::Sample => lambdas,
        EigenvalueMethod::Hard => lambdas.iter().map(|&l| l.max(noise_variance)).collect(),
        EigenvalueMethod::Soft => soft_threshold(&lambdas, noise_variance),
    };
    EigenvalueEstimate { lambdas, method, noise_variance }
}

fn soft_threshold(lambdas: &[f64], floor: f64) -> Vec<f64> {
    let total: f64 = lambdas.iter().sum();
    let shifted_sum = |tau: f64| -> f64 { lambdas.iter().map(|&l| (l - tau).max(floor)).sum() };
    if shifted_sum(0.0) <= total {
        return lambdas.to_vec();
    }
    let mut lo = 0.0;
    let mut hi = lambdas.iter().cloned().fold(0.0, f64::max);
    // When the floor alone exceeds the sample total no tau satisfies the
    // constraint; the bisection then settles at the maximal shift.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if shifted_sum(mid) > total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lambdas.iter().map(|&l| (l - hi).max(floor)).collect()
}

fn median(values: &mut Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
