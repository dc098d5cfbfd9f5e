//! The hypothesis-test engine: parametric-bootstrap null simulation, the
//! empirical p-value and z-score, and exploratory/confirmatory modes.
//!
//! The null model is a single d-dimensional Gaussian whose covariance
//! eigenvalues are estimated from the data. Each simulated dataset is
//! clustered with the same optimizer that produces (or would produce) the
//! sample statistic, and the minimized criterion values form the null
//! sample. Small statistics relative to the left tail of that sample are
//! evidence of real cluster structure.

use crate::criteria::{cluster_index, weighted_cluster_index, CriterionValue};
use crate::data::{DataMatrix, Partition};
use crate::error::{Error, Result};
use crate::kmeans::{two_means, KMeansConfig};
use crate::linalg::{estimate_null_eigenvalues, EigenvalueEstimate, EigenvalueMethod};
use crate::parallel;
use crate::rng::RngStream;
use crate::scan::minimize_wci;
use crate::synth::gen_gaussian;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// The optimizer used both for the sample statistic (exploratory mode) and
/// for every null simulation.
#[derive(Debug, Clone, Copy)]
pub enum Optimizer {
    /// Conventional procedure: 2-means minimization of the CI. Only valid
    /// with g = 0.
    TwoMeans(KMeansConfig),
    /// Weighted procedure: sliding-hyperplane WCI minimization along the
    /// top principal components.
    PcScan { num_pcs: usize, use_fast: bool },
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::PcScan { num_pcs: 3, use_fast: true }
    }
}

impl Optimizer {
    fn minimize(&self, data: &DataMatrix, g: f64, stream: RngStream) -> Result<(Partition, CriterionValue)> {
        match *self {
            Optimizer::TwoMeans(cfg) => {
                let res = two_means(data, cfg, stream)?;
                Ok((res.partition, res.ci))
            }
            Optimizer::PcScan { num_pcs, use_fast } => {
                let res = minimize_wci(data, g, num_pcs, use_fast)?;
                Ok((res.best_partition, res.best_wci))
            }
        }
    }

    fn validate(&self, g: f64) -> Result<()> {
        if matches!(self, Optimizer::TwoMeans(_)) && g != 0.0 {
            return Err(Error::invalid("the 2-means optimizer minimizes the CI; g must be 0"));
        }
        if !(g >= 0.0) {
            return Err(Error::invalid("g must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TestConfig {
    pub optimizer: Optimizer,
    pub n_sims: usize,
    pub eigen_method: EigenvalueMethod,
    pub stream: RngStream,
}

impl TestConfig {
    pub fn new(seed: u64) -> Self {
        TestConfig {
            optimizer: Optimizer::default(),
            n_sims: 1000,
            eigen_method: EigenvalueMethod::Sample,
            stream: RngStream::new(seed),
        }
    }
}

/// Monte Carlo sample of minimized criterion values under H0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NullDistribution {
    pub values: Vec<f64>,
    pub g: f64,
    pub eigenvalues: Vec<f64>,
    pub n: usize,
    pub seed: u64,
    /// One uniformly-chosen cluster size per simulation.
    pub cluster_sizes: Vec<usize>,
}

impl NullDistribution {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Sample standard deviation (n-1 denominator).
    pub fn sd(&self) -> f64 {
        let m = self.mean();
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        (self.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n as f64 - 1.0)).sqrt()
    }
}

/// Left-tail empirical p-value: (1 + #{null <= statistic}) / (1 + N).
pub fn empirical_p(null_values: &[f64], statistic: f64) -> f64 {
    let count = null_values.iter().filter(|&&v| v <= statistic).count();
    (1 + count) as f64 / (1 + null_values.len()) as f64
}

/// Standardized statistic; the flag marks a degenerate null sd, in which
/// case the score is signed infinity.
pub fn z_score(null: &NullDistribution, statistic: f64) -> (f64, bool) {
    let sd = null.sd();
    if sd == 0.0 {
        let sign = if statistic <= null.mean() { f64::NEG_INFINITY } else { f64::INFINITY };
        return (sign, true);
    }
    ((statistic - null.mean()) / sd, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exploratory,
    Confirmatory,
}

#[derive(Debug, Clone, Serialize)]
pub struct TestResult {
    pub statistic: CriterionValue,
    pub p_empirical: f64,
    pub z_score: f64,
    pub mode: Mode,
    pub g: f64,
    pub null: NullDistribution,
    /// Provenance of the candidate labels (confirmatory mode).
    pub label_source: String,
    /// Set when all null values coincide and the z-score is infinite.
    pub degenerate_null_sd: bool,
}

impl TestResult {
    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.p_empirical <= alpha
    }
}

/// Simulates the null distribution of the minimized criterion. Simulations
/// run in parallel on per-index substreams; output order is by simulation
/// index regardless of schedule.
pub fn simulate_null(
    n: usize,
    eigenvalues: &EigenvalueEstimate,
    g: f64,
    n_sims: usize,
    optimizer: Optimizer,
    stream: RngStream,
) -> Result<NullDistribution> {
    if n < 2 {
        return Err(Error::invalid("need n >= 2"));
    }
    if n_sims < 1 {
        return Err(Error::invalid("need n_sims >= 1"));
    }
    optimizer.validate(g)?;
    if eigenvalues.lambdas.iter().all(|&l| l <= 0.0) {
        return Err(Error::invalid("all null eigenvalues are zero"));
    }

    let sims: Vec<Result<(f64, usize)>> = parallel::map_indexed(n_sims, |i| {
        let sim_stream = stream.substream(i as u64);
        let ds = gen_gaussian(n, &eigenvalues.lambdas, sim_stream.substream(0))?;
        let (partition, value) = optimizer.minimize(&ds.data, g, sim_stream.substream(1))?;
        let pick_first = sim_stream.substream(2).rng().gen::<bool>();
        let size = if pick_first { partition.size1() } else { partition.size2() };
        Ok((value.value, size))
    });

    let mut values = Vec::with_capacity(n_sims);
    let mut cluster_sizes = Vec::with_capacity(n_sims);
    for sim in sims {
        let (v, s) = sim?;
        values.push(v);
        cluster_sizes.push(s);
    }
    Ok(NullDistribution {
        values,
        g,
        eigenvalues: eigenvalues.lambdas.clone(),
        n,
        seed: stream.seed(),
        cluster_sizes,
    })
}

fn build_result(
    statistic: CriterionValue,
    null: NullDistribution,
    mode: Mode,
    g: f64,
    label_source: String,
) -> TestResult {
    let p_empirical = empirical_p(&null.values, statistic.value);
    let (z, degenerate) = z_score(&null, statistic.value);
    TestResult {
        statistic,
        p_empirical,
        z_score: z,
        mode,
        g,
        null,
        label_source,
        degenerate_null_sd: degenerate,
    }
}

/// Confirmatory mode: tests an externally supplied candidate labeling.
///
/// The candidate labels need not come from the optimizer that generates the
/// null, so the statistic is not necessarily minimal on the sample; the
/// report records the label provenance for that reason.
pub fn test_confirmatory(
    data: &DataMatrix,
    labels: &Partition,
    g: f64,
    config: &TestConfig,
) -> Result<TestResult> {
    test_confirmatory_with_source(data, labels, g, config, "user-supplied labels")
}

pub fn test_confirmatory_with_source(
    data: &DataMatrix,
    labels: &Partition,
    g: f64,
    config: &TestConfig,
    label_source: &str,
) -> Result<TestResult> {
    if labels.n() != data.n() {
        return Err(Error::invalid("labels length does not match data"));
    }
    config.optimizer.validate(g)?;
    let statistic = criterion_of(data, labels, g)?;
    let eig = estimate_null_eigenvalues(data, config.eigen_method);
    let null = simulate_null(data.n(), &eig, g, config.n_sims, config.optimizer, config.stream.substream(0))?;
    Ok(build_result(statistic, null, Mode::Confirmatory, g, label_source.to_string()))
}

/// Exploratory mode: the statistic is the minimized criterion on the sample,
/// found with the same optimizer the null uses.
pub fn test_exploratory(data: &DataMatrix, g: f64, config: &TestConfig) -> Result<TestResult> {
    config.optimizer.validate(g)?;
    let (_, statistic) = config.optimizer.minimize(data, g, config.stream.substream(1))?;
    let eig = estimate_null_eigenvalues(data, config.eigen_method);
    let null = simulate_null(data.n(), &eig, g, config.n_sims, config.optimizer, config.stream.substream(0))?;
    Ok(build_result(statistic, null, Mode::Exploratory, g, "sample optimizer".to_string()))
}

pub const RECOMMENDED_G: [f64; 3] = [0.0, 0.25, 0.5];

#[derive(Debug, Clone, Serialize)]
pub struct GRecommendation {
    pub results: Vec<TestResult>,
    /// Index into `results` of the g with the strongest (most negative)
    /// z-score.
    pub best: usize,
}

/// Runs the test at each recommended g (0, 0.25, 0.5) and flags the one
/// with the strongest z-score. With labels the tests are confirmatory,
/// without them exploratory.
pub fn recommend_g(
    data: &DataMatrix,
    labels: Option<&Partition>,
    config: &TestConfig,
) -> Result<GRecommendation> {
    let mut results = Vec::with_capacity(RECOMMENDED_G.len());
    for (i, &g) in RECOMMENDED_G.iter().enumerate() {
        let sub = TestConfig { stream: config.stream.substream(100 + i as u64), ..*config };
        let res = match labels {
            Some(labels) => test_confirmatory(data, labels, g, &sub)?,
            None => test_exploratory(data, g, &sub)?,
        };
        results.push(res);
    }
    let best = results
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.z_score.total_cmp(&b.z_score))
        .map(|(i, _)| i)
        .expect("nonempty grid");
    Ok(GRecommendation { results, best })
}

fn criterion_of(data: &DataMatrix, labels: &Partition, g: f64) -> Result<CriterionValue> {
    if g == 0.0 {
        cluster_index(data, labels)
    } else {
        weighted_cluster_index(data, labels, g)
    }
}
