//! Statistical validation of two-cluster structure via the cluster index (CI)
//! and its size-weighted generalization (WCI).
//!
//! The library provides:
//!
//! - direct evaluation of the CI and WCI for arbitrary two-way partitions
//!   ([`criteria`]),
//! - a 2-means optimizer for the conventional procedure ([`kmeans`]),
//! - a sliding-hyperplane WCI minimizer along top principal components, in
//!   both a reference form and an incremental-update accelerated form
//!   ([`scan`]),
//! - the parametric-bootstrap hypothesis test engine with exploratory and
//!   confirmatory modes ([`testing`]),
//! - toy-data generators and simulation-study harnesses ([`synth`],
//!   [`experiments`]),
//! - report serialization (JSON, CSV, SVG diagnostics) ([`report`]).
//!
//! Monte Carlo loops and per-PC scans run on rayon when the default
//! `parallel` feature is enabled; disabling it yields a sequential build
//! with identical outputs.

pub mod criteria;
pub mod data;
pub mod error;
pub mod experiments;
pub mod kmeans;
pub mod linalg;
mod parallel;
pub mod report;
pub mod rng;
pub mod scan;
pub mod synth;
pub mod testing;

pub use criteria::{cluster_index, weighted_cluster_index, CriterionValue};
pub use data::{DataMatrix, Partition};
pub use error::{Error, Result};
pub use rng::RngStream;
