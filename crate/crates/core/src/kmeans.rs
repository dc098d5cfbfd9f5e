//! 2-means clustering by Lloyd iteration, best of several seeded restarts.

use crate::criteria::{cluster_index, CriterionValue};
use crate::data::{DataMatrix, Partition};
use crate::error::{Error, Result};
use crate::parallel;
use crate::rng::RngStream;
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig { restarts: 20, max_iter: 300 }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansResult {
    pub partition: Partition,
    pub ci: CriterionValue,
    pub iterations: usize,
    pub restarts_used: usize,
}

struct RestartOutcome {
    labels: Vec<u8>,
    within_ss: f64,
    iterations: usize,
    /// Recorded per-iteration objective, for the monotonicity contract.
    trajectory: Vec<f64>,
}

/// Best-of-restarts Lloyd iteration for k = 2. Restarts run on independent
/// RNG substreams and the reduction picks the minimum CI with ties broken by
/// the lowest restart index, so the result is schedule-independent.
pub fn two_means(data: &DataMatrix, config: KMeansConfig, stream: RngStream) -> Result<KMeansResult> {
    if config.restarts < 1 {
        return Err(Error::invalid("restarts must be >= 1"));
    }
    let grand = data.grand_mean();
    let total_ss: f64 = (0..data.n()).map(|i| sq_dist(data.row(i), &grand)).sum();
    if total_ss <= 0.0 {
        return Err(Error::degenerate("all points identical"));
    }

    let outcomes = parallel::map_indexed(config.restarts, |r| {
        lloyd_restart(data, config.max_iter, stream.substream(r as u64))
    });
    let mut best: Option<(usize, &RestartOutcome)> = None;
    for (r, o) in outcomes.iter().enumerate() {
        let better = match best {
            None => true,
            Some((_, b)) => o.within_ss < b.within_ss,
        };
        if better {
            best = Some((r, o));
        }
    }
    let (best_idx, best) = best.expect("at least one restart");
    debug_assert!(best.trajectory.windows(2).all(|w| w[1] <= w[0] + 1e-9 * w[0].abs()));
    let partition = Partition::from_labels(best.labels.clone())?;
    let ci = cluster_index(data, &partition)?;
    Ok(KMeansResult { partition, ci, iterations: best.iterations, restarts_used: best_idx + 1 })
}

fn lloyd_restart(data: &DataMatrix, max_iter: usize, stream: RngStream) -> RestartOutcome {
    let n = data.n();
    let d = data.d();
    let mut rng = stream.rng();

    // Distance-weighted seeding: first centroid uniform, second proportional
    // to squared distance from the first.
    let first = rng.gen_range(0..n);
    let weights: Vec<f64> = (0..n).map(|i| sq_dist(data.row(i), data.row(first))).collect();
    let total: f64 = weights.iter().sum();
    let second = if total > 0.0 {
        let mut target = rng.gen::<f64>() * total;
        let mut pick = n - 1;
        for (i, w) in weights.iter().enumerate() {
            if target < *w {
                pick = i;
                break;
            }
            target -= w;
        }
        pick
    } else {
        (first + 1) % n
    };

    let mut centroids = [data.row(first).to_vec(), data.row(second).to_vec()];
    let mut labels = vec![0u8; n];
    let mut trajectory = Vec::new();
    let mut iterations = 0;

    for _ in 0..max_iter {
        iterations += 1;
        // Assignment step; ties break toward the lower label.
        let mut changed = false;
        for i in 0..n {
            let d0 = sq_dist(data.row(i), &centroids[0]);
            let d1 = sq_dist(data.row(i), &centroids[1]);
            let label = (d1 < d0) as u8;
            if label != labels[i] {
                labels[i] = label;
                changed = true;
            }
        }
        // Empty-cluster collapse: reseed at the point farthest from the
        // surviving centroid.
        for empty in 0..2u8 {
            if labels.iter().all(|&l| l != empty) {
                let survivor = &centroids[(1 - empty) as usize];
                let far = (0..n)
                    .max_by(|&a, &b| {
                        sq_dist(data.row(a), survivor).total_cmp(&sq_dist(data.row(b), survivor))
                    })
                    .unwrap();
                labels[far] = empty;
                changed = true;
            }
        }
        for which in 0..2usize {
            let members: Vec<usize> =
                (0..n).filter(|&i| labels[i] as usize == which).collect();
            let mut c = vec![0.0; d];
            for &i in &members {
                for (cv, v) in c.iter_mut().zip(data.row(i)) {
                    *cv += v;
                }
            }
            for cv in &mut c {
                *cv /= members.len() as f64;
            }
            centroids[which] = c;
        }
        let within: f64 = (0..n)
            .map(|i| sq_dist(data.row(i), &centroids[labels[i] as usize]))
            .sum();
        trajectory.push(within);
        if !changed {
            break;
        }
    }
    let within_ss = *trajectory.last().unwrap();
    RestartOutcome { labels, within_ss, iterations, trajectory }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Exhaustive minimum of a criterion over all 2^(n-1) - 1 partitions.
/// Test oracle; only feasible for small n.
pub fn exhaustive_minimum<F>(n: usize, mut eval: F) -> Result<(Partition, f64)>
where
    F: FnMut(&Partition) -> Result<f64>,
{
    if n < 2 || n > 25 {
        return Err(Error::invalid("exhaustive search supports 2 <= n <= 25"));
    }
    let mut best: Option<(Partition, f64)> = None;
    // Fix observation 0 in cluster 1 to halve the label-swap symmetry.
    for mask in 1u32..(1u32 << (n - 1)) {
        let labels: Vec<u8> = (0..n)
            .map(|i| if i == 0 { 0 } else { ((mask >> (i - 1)) & 1) as u8 })
            .collect();
        let part = Partition::from_labels(labels)?;
        let v = eval(&part)?;
        if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
            best = Some((part, v));
        }
    }
    Ok(best.expect("nonempty search"))
}
