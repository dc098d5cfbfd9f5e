//! Result serialization: versioned JSON reports, null-sample CSV export,
//! and a dependency-light SVG diagnostic histogram.

use crate::error::Result;
use crate::linalg::EigenvalueMethod;
use crate::testing::{Mode, TestResult};
use serde::Serialize;

/// Structured result document written by the CLI and usable as a stable
/// machine interface.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub mode: Mode,
    pub g: f64,
    pub statistic: f64,
    pub statistic_numerator: f64,
    pub statistic_denominator: f64,
    pub p_empirical: f64,
    /// Serialized as a number, or as the string "inf"/"-inf" when the null
    /// sd is degenerate (JSON has no literal for infinities).
    #[serde(serialize_with = "serialize_signed_infinite")]
    pub z_score: f64,
    pub degenerate_null_sd: bool,
    pub n: usize,
    pub n_sims: usize,
    pub seed: u64,
    pub eigenvalue_method: EigenvalueMethod,
    pub label_source: String,
    pub null_values: Vec<f64>,
    pub null_cluster_sizes: Vec<usize>,
}

fn serialize_signed_infinite<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

impl Report {
    pub fn from_test(result: &TestResult, seed: u64, method: EigenvalueMethod) -> Report {
        Report {
            schema_version: "1".to_string(),
            mode: result.mode,
            g: result.g,
            statistic: result.statistic.value,
            statistic_numerator: result.statistic.numerator,
            statistic_denominator: result.statistic.denominator,
            p_empirical: result.p_empirical,
            z_score: result.z_score,
            degenerate_null_sd: result.degenerate_null_sd,
            n: result.null.n,
            n_sims: result.null.values.len(),
            seed,
            eigenvalue_method: method,
            label_source: result.label_source.clone(),
            null_values: result.null.values.clone(),
            null_cluster_sizes: result.null.cluster_sizes.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| crate::error::Error::invalid(e.to_string()))
    }
}

/// Null sample as CSV: one row per simulation, plus marker lines carried in
/// the header comment for plotting tools.
pub fn null_sample_csv(result: &TestResult) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# statistic={} z={} p={}\n",
        result.statistic.value, result.z_score, result.p_empirical
    ));
    out.push_str("sim,value,cluster_size\n");
    for (i, (v, s)) in result.null.values.iter().zip(&result.null.cluster_sizes).enumerate() {
        out.push_str(&format!("{i},{v},{s}\n"));
    }
    out
}

/// Diagnostic plot: histogram of the null sample with vertical marker lines
/// for the labeled statistics.
pub fn svg_histogram(null_values: &[f64], markers: &[(String, f64)], title: &str) -> String {
    let width = 640.0;
    let height = 420.0;
    let margin = 50.0;
    let bins = 30usize;

    let lo = null_values
        .iter()
        .chain(markers.iter().map(|(_, v)| v))
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let hi = null_values
        .iter()
        .chain(markers.iter().map(|(_, v)| v))
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(1e-12);
    let lo = lo - 0.05 * span;
    let hi = hi + 0.05 * span;
    let bin_width = (hi - lo) / bins as f64;

    let mut counts = vec![0usize; bins];
    for &v in null_values {
        let b = (((v - lo) / bin_width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let max_count = counts.iter().cloned().max().unwrap_or(1).max(1) as f64;

    let x = |v: f64| margin + (v - lo) / (hi - lo) * (width - 2.0 * margin);
    let y = |c: f64| height - margin - c / max_count * (height - 2.0 * margin);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">{}</text>\n",
        width / 2.0,
        xml_escape(title)
    ));
    for (b, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let x0 = x(lo + b as f64 * bin_width);
        let x1 = x(lo + (b + 1) as f64 * bin_width);
        let y1 = y(c as f64);
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#9aa7b5\" stroke=\"#5b6570\"/>\n",
            x0,
            y1,
            x1 - x0,
            height - margin - y1
        ));
    }
    let palette = ["#c0392b", "#2471a3", "#1e8449", "#9b59b6"];
    for (i, (label, v)) in markers.iter().enumerate() {
        let color = palette[i % palette.len()];
        let xv = x(*v);
        svg.push_str(&format!(
            "<line x1=\"{xv:.2}\" y1=\"{:.2}\" x2=\"{xv:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            margin,
            height - margin
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"{color}\" font-family=\"sans-serif\">{}</text>\n",
            xv + 4.0,
            margin + 14.0 * (i as f64 + 1.0),
            xml_escape(label)
        ));
    }
    // Axis line.
    svg.push_str(&format!(
        "<line x1=\"{margin}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#222\"/>\n",
        height - margin,
        width - margin,
        height - margin
    ));
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let v = lo + frac * (hi - lo);
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">{:.3}</text>\n",
            x(v),
            height - margin + 18.0,
            v
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_contains_markers_and_bars() {
        let values: Vec<f64> = (0..100).map(|i| 0.4 + 0.002 * i as f64).collect();
        let svg = svg_histogram(&values, &[("statistic".into(), 0.2)], "diagnostic");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<rect"));
        assert!(svg.contains("statistic"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn csv_has_one_row_per_sim() {
        use crate::criteria::CriterionValue;
        use crate::testing::{Mode, NullDistribution, TestResult};
        let result = TestResult {
            statistic: CriterionValue { value: 0.2, g: 0.0, numerator: 1.0, denominator: 5.0 },
            p_empirical: 0.25,
            z_score: -2.0,
            mode: Mode::Exploratory,
            g: 0.0,
            null: NullDistribution {
                values: vec![0.5, 0.6, 0.7],
                g: 0.0,
                eigenvalues: vec![1.0],
                n: 10,
                seed: 1,
                cluster_sizes: vec![4, 5, 6],
            },
            label_source: "test".into(),
            degenerate_null_sd: false,
        };
        let csv = null_sample_csv(&result);
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.contains("1,0.6,5"));
    }
}
