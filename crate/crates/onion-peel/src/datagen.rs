//! Seedable synthetic dataset generation and CSV/JSON persistence.
//!
//! Inliers are drawn from an axis-aligned Gaussian; optional planted outliers
//! sit on or beyond a Mahalanobis shell around the mean (measured against the
//! generating covariance), giving metric-neutral ground truth for recall
//! measurement.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::metrics::Variances2;

/// Parameters for one synthetic dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub mean: Point2,
    pub variances: Variances2,
    /// Fraction of points planted as outliers, in `[0, 1)`.
    pub contamination: f64,
    /// Minimum Mahalanobis distance of planted outliers from the mean.
    pub outlier_radius_multiplier: f64,
    pub seed: u64,
}

impl GenSpec {
    /// The benchmark configuration: 1500 points, unit variance in x, variance
    /// 100 in y, 1% contamination planted at Mahalanobis radius 4 or more.
    pub fn benchmark_default(seed: u64) -> Self {
        Self {
            n: 1500,
            mean: Point2::new(0.0, 0.0),
            variances: Variances2::new(1.0, 100.0).unwrap(),
            contamination: 0.01,
            outlier_radius_multiplier: 4.0,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidParameter {
                reason: format!("n must be at least 3, got {}", self.n),
            });
        }
        if !self.mean.is_finite() {
            return Err(Error::NonFinite {
                context: "generator mean".into(),
            });
        }
        if !self.contamination.is_finite() || !(0.0..1.0).contains(&self.contamination) {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "contamination must lie in [0, 1), got {}",
                    self.contamination
                ),
            });
        }
        if !self.outlier_radius_multiplier.is_finite() || self.outlier_radius_multiplier <= 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "outlier radius multiplier must be positive, got {}",
                    self.outlier_radius_multiplier
                ),
            });
        }
        Ok(())
    }
}

/// A point set with optional planted ground truth and the seed that built it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSet {
    pub points: Vec<Point2>,
    #[serde(rename = "truth_outliers", default)]
    pub truth_outlier_ids: Vec<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl DataSet {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn is_labeled(&self) -> bool {
        !self.truth_outlier_ids.is_empty()
    }

    fn validate(&self, path: &Path) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::EmptyDataset {
                path: path.display().to_string(),
            });
        }
        for &id in &self.truth_outlier_ids {
            if id >= self.points.len() {
                return Err(Error::InvalidInput {
                    reason: format!(
                        "truth outlier id {id} out of range for {} points",
                        self.points.len()
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Standard normal pair via Box-Muller.
fn gauss_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

/// Exponential(1) draw.
fn exp1(rng: &mut ChaCha8Rng) -> f64 {
    -(1.0 - rng.gen::<f64>()).ln()
}

/// Generate a dataset from `spec`. Deterministic: the same spec always yields
/// the same points bit for bit.
///
/// `floor((1 - contamination) * n)` inliers come from the Gaussian; the rest
/// are planted uniformly in direction at Mahalanobis radius
/// `multiplier + Exp(1)` and appended after the inliers with truth labels.
pub fn generate(spec: &GenSpec) -> Result<DataSet> {
    spec.validate()?;
    // Nudge before flooring: (1 - c) * n rounds just below whole numbers for
    // decimal contaminations like 0.01.
    let n_inliers = ((1.0 - spec.contamination) * spec.n as f64 + 1e-9).floor() as usize;
    let n_outliers = spec.n - n_inliers;

    let sx = spec.variances.var_x().sqrt();
    let sy = spec.variances.var_y().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut points = Vec::with_capacity(spec.n);
    for _ in 0..n_inliers {
        let (z1, z2) = gauss_pair(&mut rng);
        points.push(Point2::new(spec.mean.x + sx * z1, spec.mean.y + sy * z2));
    }
    for _ in 0..n_outliers {
        let theta = std::f64::consts::TAU * rng.gen::<f64>();
        let radius = spec.outlier_radius_multiplier + exp1(&mut rng);
        points.push(Point2::new(
            spec.mean.x + sx * radius * theta.cos(),
            spec.mean.y + sy * radius * theta.sin(),
        ));
    }

    Ok(DataSet {
        points,
        truth_outlier_ids: (n_inliers..spec.n).collect(),
        seed: Some(spec.seed),
    })
}

/// On-disk dataset encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    /// Infer a format from a path extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Some(FileFormat::Csv),
            Some(e) if e.eq_ignore_ascii_case("json") => Some(FileFormat::Json),
            _ => None,
        }
    }
}

impl std::fmt::Display for FileFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FileFormat::Csv => "csv",
            FileFormat::Json => "json",
        })
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write a dataset. CSV keeps only coordinates (header `x,y`, shortest
/// round-trip decimal encoding); JSON also carries truth labels and the seed.
pub fn save_points(ds: &DataSet, path: &Path, format: FileFormat) -> Result<()> {
    match format {
        FileFormat::Csv => {
            let mut wtr = csv::Writer::from_path(path).map_err(|e| csv_to_error(path, e))?;
            wtr.write_record(["x", "y"])
                .map_err(|e| csv_to_error(path, e))?;
            for p in &ds.points {
                wtr.write_record([p.x.to_string(), p.y.to_string()])
                    .map_err(|e| csv_to_error(path, e))?;
            }
            wtr.flush().map_err(|e| io_err(path, e))?;
        }
        FileFormat::Json => {
            let mut text = serde_json::to_string_pretty(ds)
                .map_err(|e| Error::Internal(format!("dataset serialization failed: {e}")))?;
            text.push('\n');
            let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
            file.write_all(text.as_bytes())
                .map_err(|e| io_err(path, e))?;
        }
    }
    Ok(())
}

fn csv_to_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io_err(path, io),
        other => Error::Parse {
            path: path.display().to_string(),
            line,
            message: format!("{other:?}"),
        },
    }
}

/// Read a dataset back. CSV loads are unlabeled (no truth, no seed); malformed
/// rows are reported with their line number, and non-finite values rejected.
pub fn load_points(path: &Path, format: FileFormat) -> Result<DataSet> {
    let ds = match format {
        FileFormat::Csv => load_csv(path)?,
        FileFormat::Json => load_json(path)?,
    };
    ds.validate(path)?;
    Ok(ds)
}

fn parse_field(path: &Path, line: u64, name: &str, raw: &str) -> Result<f64> {
    let value: f64 = raw.trim().parse().map_err(|_| Error::Parse {
        path: path.display().to_string(),
        line,
        message: format!("invalid {name} value {raw:?}"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line,
            message: format!("non-finite {name} value {raw:?}"),
        });
    }
    Ok(value)
}

fn load_csv(path: &Path) -> Result<DataSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_to_error(path, e))?;
    {
        let headers = rdr.headers().map_err(|e| csv_to_error(path, e))?;
        let cols: Vec<String> = headers
            .iter()
            .map(|h| h.trim().to_ascii_lowercase())
            .collect();
        if cols != ["x", "y"] {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: 1,
                message: format!(
                    "expected header \"x,y\", got {:?}",
                    headers.iter().collect::<Vec<_>>()
                ),
            });
        }
    }
    let mut points = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_to_error(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line,
                message: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let x = parse_field(path, line, "x", &record[0])?;
        let y = parse_field(path, line, "y", &record[1])?;
        points.push(Point2::new(x, y));
    }
    Ok(DataSet {
        points,
        truth_outlier_ids: Vec::new(),
        seed: None,
    })
}

fn load_json(path: &Path) -> Result<DataSet> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line() as u64,
        message: e.to_string(),
    })
}
