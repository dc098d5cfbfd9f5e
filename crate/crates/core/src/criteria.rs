//! The cluster index (CI) and its size-weighted generalization (WCI).

use crate::data::{centroid, DataMatrix, Partition};
use crate::error::{Error, Result};
use crate::linalg::total_ss_about;
use serde::{Deserialize, Serialize};

/// A CI or WCI evaluation, together with the exponent that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionValue {
    pub value: f64,
    pub g: f64,
    pub numerator: f64,
    pub denominator: f64,
}

fn cluster_terms(data: &DataMatrix, part: &Partition) -> Result<[(usize, f64, f64); 2]> {
    let grand = data.grand_mean();
    let mut out = [(0usize, 0.0, 0.0); 2];
    for which in 0..2u8 {
        let idx = part.cluster(which);
        let center = centroid(data, &idx)?;
        let within = total_ss_about(data, &idx, &center)?;
        let about_grand = total_ss_about(data, &idx, &grand)?;
        out[which as usize] = (idx.len(), within, about_grand);
    }
    Ok(out)
}

/// Within-cluster sum of squares over total sum of squares; lies in [0, 1].
pub fn cluster_index(data: &DataMatrix, part: &Partition) -> Result<CriterionValue> {
    let [(_, w1, t1), (_, w2, t2)] = cluster_terms(data, part)?;
    let numerator = w1 + w2;
    let denominator = t1 + t2;
    if denominator <= 0.0 {
        return Err(Error::degenerate("total sum of squares is zero"));
    }
    Ok(CriterionValue { value: numerator / denominator, g: 0.0, numerator, denominator })
}

/// WCI: both the within-SS blocks and the distance-to-overall-mean blocks
/// are weighted by |C_k|^-g. Recovers the CI at g = 0 and whenever the two
/// clusters have the same size.
pub fn weighted_cluster_index(data: &DataMatrix, part: &Partition, g: f64) -> Result<CriterionValue> {
    if !(g >= 0.0) {
        return Err(Error::invalid(format!("exponent g must be nonnegative, got {g}")));
    }
    let terms = cluster_terms(data, part)?;
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for (size, within, about_grand) in terms {
        let w = (size as f64).powf(-g);
        numerator += w * within;
        denominator += w * about_grand;
    }
    if denominator <= 0.0 {
        return Err(Error::degenerate("total sum of squares is zero"));
    }
    Ok(CriterionValue { value: numerator / denominator, g, numerator, denominator })
}

/// Diagnostic for the two defining branches of the CI property: the value is
/// 0 exactly when both within-SS vanish, and 1 exactly when the centroids
/// coincide with positive total variance.
#[derive(Debug, Clone, Serialize)]
pub struct CiPropertyReport {
    pub value: f64,
    pub both_within_ss_zero: bool,
    pub centroids_equal: bool,
    pub total_ss_positive: bool,
    /// value == 0 iff both within-SS are 0.
    pub zero_branch_holds: bool,
    /// value == 1 iff centroids coincide under positive total SS.
    pub one_branch_holds: bool,
}

pub fn check_ci_property<F>(evaluator: F, data: &DataMatrix, part: &Partition) -> Result<CiPropertyReport>
where
    F: Fn(&DataMatrix, &Partition) -> Result<CriterionValue>,
{
    let cv = evaluator(data, part)?;
    let [(_, w1, t1), (_, w2, t2)] = cluster_terms(data, part)?;
    let c1 = centroid(data, &part.cluster(0))?;
    let c2 = centroid(data, &part.cluster(1))?;
    let both_within_ss_zero = w1 == 0.0 && w2 == 0.0;
    let centroids_equal = c1
        .iter()
        .zip(&c2)
        .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0));
    let total_ss_positive = t1 + t2 > 0.0;
    Ok(CiPropertyReport {
        value: cv.value,
        both_within_ss_zero,
        centroids_equal,
        total_ss_positive,
        zero_branch_holds: (cv.value == 0.0) == both_within_ss_zero,
        one_branch_holds: ((cv.value - 1.0).abs() < 1e-12) == (centroids_equal && total_ss_positive),
    })
}
