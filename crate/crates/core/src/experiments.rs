//! Simulation-study harnesses: wishbone cluster-size sweeps, the power-vs-g
//! analysis with null cluster-size histograms, and the uniformity
//! (impartiality) check on cluster-size distributions.

use crate::data::{DataMatrix, Partition};
use crate::error::{Error, Result};
use crate::parallel;
use crate::rng::RngStream;
use crate::scan::minimize_wci;
use crate::synth::gen_gaussian;
use crate::testing::{test_confirmatory, TestConfig, TestResult};
use rand::Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Cluster sizes recorded from WCI-clustering standard Gaussian samples over
/// a grid of exponents.
#[derive(Debug, Clone, Serialize)]
pub struct WishboneRun {
    pub d: usize,
    pub n: usize,
    pub g_grid: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
    /// sizes[rep][gi] = one uniformly-chosen cluster size.
    pub sizes: Vec<Vec<usize>>,
}

impl WishboneRun {
    pub fn sizes_for_g(&self, gi: usize) -> Vec<usize> {
        self.sizes.iter().map(|row| row[gi]).collect()
    }

    /// Interquartile range of recorded sizes per grid point.
    pub fn iqr_by_g(&self) -> Vec<f64> {
        (0..self.g_grid.len())
            .map(|gi| {
                let mut s = self.sizes_for_g(gi);
                s.sort_unstable();
                let q = |f: f64| s[((s.len() - 1) as f64 * f).round() as usize] as f64;
                q(0.75) - q(0.25)
            })
            .collect()
    }
}

/// Default g grid: 21 points on [0, 1], step 0.05.
pub fn default_g_grid() -> Vec<f64> {
    (0..21).map(|i| i as f64 * 0.05).collect()
}

/// For each (g, rep): draw N_d(0, I), minimize the WCI along the top PCs,
/// record one uniformly-chosen cluster's size. The (g, rep) cells are
/// independent jobs keyed by index.
pub fn run_wishbone(
    d: usize,
    n: usize,
    g_grid: &[f64],
    reps: usize,
    num_pcs: usize,
    stream: RngStream,
) -> Result<WishboneRun> {
    if reps < 1 || g_grid.is_empty() {
        return Err(Error::invalid("need reps >= 1 and a nonempty g grid"));
    }
    let eigenvalues = vec![1.0; d];
    let cells: Vec<Result<usize>> = parallel::map_indexed(reps * g_grid.len(), |cell| {
        let gi = cell % g_grid.len();
        let cell_stream = stream.substream(cell as u64);
        let ds = gen_gaussian(n, &eigenvalues, cell_stream.substream(0))?;
        let res = minimize_wci(&ds.data, g_grid[gi], num_pcs, true)?;
        let pick_first = cell_stream.substream(1).rng().gen::<bool>();
        Ok(if pick_first { res.best_partition.size1() } else { res.best_partition.size2() })
    });
    let mut sizes = vec![vec![0usize; g_grid.len()]; reps];
    for (cell, size) in cells.into_iter().enumerate() {
        sizes[cell / g_grid.len()][cell % g_grid.len()] = size?;
    }
    Ok(WishboneRun { d, n, g_grid: g_grid.to_vec(), reps, seed: stream.seed(), sizes })
}

/// Per-g confirmatory test results, plus a per-g cluster-size sample from
/// clustering standard-Gaussian reference draws of the same shape. The
/// reference sizes show how balanced the minimizer's clusters are at each
/// exponent (the same quantity the wishbone sweep records), free of the
/// input data's covariance anisotropy.
#[derive(Debug, Clone, Serialize)]
pub struct PowerRun {
    pub g_grid: Vec<f64>,
    pub results: Vec<TestResult>,
    /// reference_sizes[gi] = one uniformly-chosen cluster size per
    /// standard-Gaussian reference draw.
    pub reference_sizes: Vec<Vec<usize>>,
}

impl PowerRun {
    /// Histogram of the reference cluster sizes for grid point `gi`, as
    /// (size, count) pairs in ascending size order.
    pub fn size_histogram(&self, gi: usize) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for &s in &self.reference_sizes[gi] {
            *counts.entry(s).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }
}

pub fn run_power_analysis(
    data: &DataMatrix,
    labels: &Partition,
    g_grid: &[f64],
    config: &TestConfig,
) -> Result<PowerRun> {
    let num_pcs = match config.optimizer {
        crate::testing::Optimizer::PcScan { num_pcs, .. } => num_pcs,
        crate::testing::Optimizer::TwoMeans(_) => 3,
    };
    let mut results = Vec::with_capacity(g_grid.len());
    let mut reference_sizes = Vec::with_capacity(g_grid.len());
    for (i, &g) in g_grid.iter().enumerate() {
        let sub = TestConfig { stream: config.stream.substream(i as u64), ..*config };
        results.push(test_confirmatory(data, labels, g, &sub)?);
        let reference = run_wishbone(
            data.d(),
            data.n(),
            &[g],
            config.n_sims,
            num_pcs,
            config.stream.substream(10_000 + i as u64),
        )?;
        reference_sizes.push(reference.sizes_for_g(0));
    }
    Ok(PowerRun { g_grid: g_grid.to_vec(), results, reference_sizes })
}

/// Chi-square goodness of fit against the discrete uniform on {1,...,n-1},
/// with adjacent categories coalesced until every expected count is >= 5,
/// plus the total-variation distance to uniform.
#[derive(Debug, Clone, Serialize)]
pub struct UniformityReport {
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub tv_distance: f64,
}

pub fn impartiality_test(sizes: &[usize], n: usize) -> Result<UniformityReport> {
    if sizes.is_empty() {
        return Err(Error::invalid("no sizes supplied"));
    }
    if sizes.iter().any(|&s| s < 1 || s >= n) {
        return Err(Error::invalid("sizes must lie in [1, n-1]"));
    }
    let categories = n - 1;
    let mut counts = vec![0usize; categories];
    for &s in sizes {
        counts[s - 1] += 1;
    }
    let total = sizes.len() as f64;
    let expected_each = total / categories as f64;

    // TV distance on the raw categories.
    let uniform = 1.0 / categories as f64;
    let tv_distance = 0.5
        * counts
            .iter()
            .map(|&c| (c as f64 / total - uniform).abs())
            .sum::<f64>();

    // Coalesce adjacent categories until expected counts reach 5.
    let min_expected = 5.0;
    let per_bin = (min_expected / expected_each).ceil().max(1.0) as usize;
    let mut observed = Vec::new();
    let mut expected = Vec::new();
    let mut i = 0;
    while i < categories {
        let hi = (i + per_bin).min(categories);
        // Fold a short trailing bin into its predecessor.
        if categories - hi > 0 && categories - hi < per_bin && hi + per_bin > categories {
            let hi = categories;
            observed.push(counts[i..hi].iter().sum::<usize>() as f64);
            expected.push(expected_each * (hi - i) as f64);
            break;
        }
        observed.push(counts[i..hi].iter().sum::<usize>() as f64);
        expected.push(expected_each * (hi - i) as f64);
        i = hi;
    }
    if observed.len() < 2 {
        return Err(Error::invalid("too few simulations for a goodness-of-fit bin split"));
    }
    let chi_square: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let degrees_of_freedom = observed.len() - 1;
    let dist = ChiSquared::new(degrees_of_freedom as f64)
        .map_err(|e| Error::invalid(e.to_string()))?;
    let p_value = 1.0 - dist.cdf(chi_square);
    Ok(UniformityReport { chi_square, degrees_of_freedom, p_value, tv_distance })
}
