//! Sliding-hyperplane WCI minimization along top principal components.
//!
//! `scan_pc_reference` evaluates the WCI of every split position directly.
//! `scan_pc_fast` evaluates the same splits through incremental updates of
//! four running sums over the pairwise distance matrix, which drops the cost
//! of one PC from O(n^2 d) to O(n^2) given the distances.

use crate::criteria::{weighted_cluster_index, CriterionValue};
use crate::data::{DataMatrix, Partition};
use crate::error::{Error, Result};
use crate::linalg::{pairwise_sq_distances, pca, squared_dists_to_mean, DistanceMatrix, PcaResult};
use crate::parallel;

/// Running sums at split position k: `alpha`/`beta` are the full pairwise
/// double sums over the first and second block, `gamma`/`delta` the sums of
/// squared distances to the overall mean. `gamma + delta` is constant in k.
#[derive(Debug, Clone, Copy)]
pub struct ScanState {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub k: usize,
}

impl ScanState {
    /// WCI of the split this state describes, for n points and exponent g.
    ///
    /// By the pairwise identity, a block of size m has within-SS equal to
    /// 1/(2m) times its full double sum, so the weighted numerator blocks
    /// carry coefficient (1/2) m^-(g+1).
    pub fn criterion(&self, n: usize, g: f64) -> CriterionValue {
        let k = self.k as f64;
        let m = (n - self.k) as f64;
        let numerator = 0.5 * k.powf(-(g + 1.0)) * self.alpha + 0.5 * m.powf(-(g + 1.0)) * self.beta;
        let denominator = k.powf(-g) * self.gamma + m.powf(-g) * self.delta;
        CriterionValue { value: numerator / denominator, g, numerator, denominator }
    }
}

/// Stable ordering of observation indices by ascending PC-p score.
pub fn ordering_by_score(scores: &PcaResult, p: usize) -> Vec<usize> {
    let col = scores.component_scores(p);
    let mut order: Vec<usize> = (0..scores.n).collect();
    order.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
    order
}

/// Direct evaluation of the WCI at every split along PC p (0-based).
pub fn scan_pc_reference(
    data: &DataMatrix,
    scores: &PcaResult,
    p: usize,
    g: f64,
) -> Result<Vec<CriterionValue>> {
    if p >= scores.num_components {
        return Err(Error::invalid(format!("PC index {p} out of range")));
    }
    let ordering = ordering_by_score(scores, p);
    let n = data.n();
    (1..n)
        .map(|k| {
            let part = Partition::from_ordered_split(&ordering, k)?;
            weighted_cluster_index(data, &part, g)
        })
        .collect()
}

/// Incremental-update evaluation of the WCI at every split of `ordering`.
///
/// Walking the split from k to k+1 moves one observation across the
/// boundary: alpha gains that observation's distance row/column pair within
/// the first block, beta loses the pair within the second, and the
/// observation's squared distance to the overall mean transfers from delta
/// to gamma.
pub fn scan_pc_fast(
    dist: &DistanceMatrix,
    r: &[f64],
    ordering: &[usize],
    g: f64,
) -> Result<Vec<CriterionValue>> {
    let n = dist.n();
    if r.len() != n || ordering.len() != n {
        return Err(Error::invalid("dist, r, and ordering sizes disagree"));
    }
    // Neumaier-compensated accumulators: the running sums mix magnitudes
    // that differ by orders of magnitude across n updates, and plain f64
    // accumulation loses enough precision at late splits to be visible in
    // the criterion values.
    let mut alpha = Compensated::default();
    let mut beta = Compensated::default();
    for i in 0..n {
        for &v in dist.row(i) {
            beta.add(v);
        }
    }
    let mut gamma = Compensated::default();
    let mut delta = Compensated::default();
    for &v in r {
        delta.add(v);
    }
    let mut out = Vec::with_capacity(n - 1);
    for k in 1..n {
        let entering = ordering[k - 1];
        let row = dist.row(entering);
        for &j in &ordering[..k - 1] {
            alpha.add(2.0 * row[j]);
        }
        for &j in &ordering[k..] {
            beta.add(-2.0 * row[j]);
        }
        gamma.add(r[entering]);
        delta.add(-r[entering]);
        let state = ScanState {
            alpha: alpha.value(),
            beta: beta.value(),
            gamma: gamma.value(),
            delta: delta.value(),
            k,
        };
        out.push(state.criterion(n, g));
    }
    Ok(out)
}

/// Neumaier-variant Kahan summation: the running compensation keeps the
/// accumulated error O(eps) rather than O(n eps).
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    correction: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        self.correction += if self.sum.abs() >= v.abs() {
            (self.sum - t) + v
        } else {
            (v - t) + self.sum
        };
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.correction
    }
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub best_partition: Partition,
    pub best_wci: CriterionValue,
    /// 0-based index of the PC whose scan attained the minimum.
    pub best_pc: usize,
    /// Split position (cluster-1 size) of the minimizer on that PC.
    pub best_split: usize,
    /// per_split_values[p][k-1] is the WCI of split k on PC p.
    pub per_split_values: Vec<Vec<CriterionValue>>,
}

/// Minimizes the WCI over all hyperplane splits along the top `num_pcs`
/// principal components. Ties break toward the lower PC, then the lower
/// split position; per-PC scans run in parallel.
pub fn minimize_wci(data: &DataMatrix, g: f64, num_pcs: usize, use_fast: bool) -> Result<ScanResult> {
    if num_pcs < 1 {
        return Err(Error::invalid("num_pcs must be >= 1"));
    }
    let n = data.n();
    let p_max = (n - 1).min(data.d());
    let num_pcs = num_pcs.min(p_max);
    let scores = pca(data, num_pcs)?;

    let r = squared_dists_to_mean(data);
    if r.iter().sum::<f64>() <= 0.0 {
        return Err(Error::degenerate("total sum of squares is zero"));
    }
    let dist = if use_fast { Some(pairwise_sq_distances(data)) } else { None };

    let per_pc: Vec<Result<Vec<CriterionValue>>> = parallel::map_indexed(num_pcs, |p| {
        if let Some(dist) = &dist {
            let ordering = ordering_by_score(&scores, p);
            scan_pc_fast(dist, &r, &ordering, g)
        } else {
            scan_pc_reference(data, &scores, p, g)
        }
    });
    let mut per_split_values = Vec::with_capacity(num_pcs);
    for res in per_pc {
        per_split_values.push(res?);
    }

    let (mut best_pc, mut best_split) = (0, 1);
    let mut best = per_split_values[0][0];
    for (p, values) in per_split_values.iter().enumerate() {
        for (i, v) in values.iter().enumerate() {
            if v.value < best.value {
                best = *v;
                best_pc = p;
                best_split = i + 1;
            }
        }
    }
    let ordering = ordering_by_score(&scores, best_pc);
    let best_partition = Partition::from_ordered_split(&ordering, best_split)?;
    Ok(ScanResult { best_partition, best_wci: best, best_pc, best_split, per_split_values })
}
