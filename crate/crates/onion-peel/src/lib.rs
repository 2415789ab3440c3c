//! Convex-layer (onion peeling) outlier detection for 2-D point sets.
//!
//! A point set is peeled into nested convex hulls; points surfacing on
//! shallow layers are outlier candidates. The detector iterates: build the
//! hull of the surviving points, score its vertices under a configurable
//! distance metric (Euclidean, standardized Euclidean, or Mahalanobis),
//! report the highest-scoring vertex, and remove it (or the whole ring)
//! before the next round.
//!
//! ```
//! use onion_peel::{detect, generate, DetectionConfig, GenSpec, MetricKind};
//!
//! let data = generate(&GenSpec::benchmark_default(42))?;
//! let config = DetectionConfig::new(15).with_metric(MetricKind::Mahalanobis);
//! let report = detect(&data.points, &config)?;
//! assert_eq!(report.outlier_ids.len(), 15);
//! # Ok::<(), onion_peel::Error>(())
//! ```
//!
//! The `examples/` directory has one runnable program per capability
//! (generation, peeling, detection, metric comparison, plotting), and the
//! `onion-peel` binary exposes the same functionality as `generate`, `peel`,
//! `detect`, and `eval` subcommands.

pub mod cli;
pub mod datagen;
pub mod detector;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod metrics;
pub mod svg;

pub use datagen::{generate, load_points, save_points, DataSet, FileFormat, GenSpec};
pub use detector::{
    detect, score_hull_vertices, select_max, DetectionConfig, OutlierReport, Removal, ScoredVertex,
    Scoring,
};
pub use error::{Error, Result};
pub use eval::{
    common_outliers, grade, recall, run_experiment, summarize, EvalSummary, Grade, MeritGrade,
    RunMatrix, Scenario,
};
pub use geometry::{
    convex_hull, hull_area, onion_peel, orientation, Hull, Orientation, PeelDecomposition, Point2,
};
pub use metrics::{
    estimate_covariance, euclidean, mahalanobis, standardize, standardized_euclidean, Covariance2,
    MetricContext, MetricKind, Variances2,
};
