//! Distance metrics and the statistics behind them: Euclidean, standardized
//! Euclidean (per-dimension variance weighting), and Mahalanobis with a 2x2
//! sample covariance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ensure_finite, Point2};

/// Ridge added to a near-singular covariance diagonal, as a fraction of the
/// mean variance. Escalates by 10x up to [`RIDGE_ESCALATIONS`] times.
pub const RIDGE_FACTOR: f64 = 1e-8;
pub const RIDGE_ESCALATIONS: u32 = 3;

/// A covariance determinant at or below `PD_DET_FACTOR * (trace/2)^2` is
/// treated as singular and triggers ridge regularization.
pub const PD_DET_FACTOR: f64 = 1e-12;

/// Strictly positive per-dimension sample variances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Variances2 {
    var_x: f64,
    var_y: f64,
}

impl Variances2 {
    pub fn new(var_x: f64, var_y: f64) -> Result<Self> {
        if !var_x.is_finite() || !var_y.is_finite() {
            return Err(Error::NonFinite {
                context: "variances".into(),
            });
        }
        if var_x <= 0.0 || var_y <= 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!("variances must be strictly positive, got ({var_x}, {var_y})"),
            });
        }
        Ok(Self { var_x, var_y })
    }

    /// Per-dimension sample variances (1/(n-1) normalization) of a point set.
    pub fn estimate(points: &[Point2]) -> Result<Self> {
        let (var_x, var_y) = sample_variances(points)?;
        if var_x <= 0.0 {
            return Err(Error::DegenerateInput {
                reason: "zero sample variance in x dimension".into(),
            });
        }
        if var_y <= 0.0 {
            return Err(Error::DegenerateInput {
                reason: "zero sample variance in y dimension".into(),
            });
        }
        Ok(Self { var_x, var_y })
    }

    pub fn var_x(&self) -> f64 {
        self.var_x
    }

    pub fn var_y(&self) -> f64 {
        self.var_y
    }
}

impl TryFrom<[f64; 2]> for Variances2 {
    type Error = Error;

    fn try_from([var_x, var_y]: [f64; 2]) -> Result<Self> {
        Variances2::new(var_x, var_y)
    }
}

impl From<Variances2> for [f64; 2] {
    fn from(v: Variances2) -> Self {
        [v.var_x, v.var_y]
    }
}

/// 2x2 sample covariance with its mean and precomputed inverse. Only
/// constructible in positive-definite form, so the inverse always exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covariance2 {
    sxx: f64,
    sxy: f64,
    syy: f64,
    mean: Point2,
    inv_xx: f64,
    inv_xy: f64,
    inv_yy: f64,
}

impl Covariance2 {
    /// Build from explicit matrix entries, validating positive definiteness.
    pub fn from_matrix(sxx: f64, sxy: f64, syy: f64, mean: Point2) -> Result<Self> {
        if ![sxx, sxy, syy].iter().all(|v| v.is_finite()) || !mean.is_finite() {
            return Err(Error::NonFinite {
                context: "covariance entries".into(),
            });
        }
        let det = sxx * syy - sxy * sxy;
        if sxx <= 0.0 || syy <= 0.0 || det <= 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "covariance is not positive definite (sxx={sxx}, syy={syy}, det={det})"
                ),
            });
        }
        Ok(Self {
            sxx,
            sxy,
            syy,
            mean,
            inv_xx: syy / det,
            inv_xy: -sxy / det,
            inv_yy: sxx / det,
        })
    }

    /// The identity matrix centered at the origin; Mahalanobis distance under
    /// it reduces to Euclidean.
    pub fn identity() -> Self {
        Self::from_matrix(1.0, 0.0, 1.0, Point2::new(0.0, 0.0)).unwrap()
    }

    pub fn sxx(&self) -> f64 {
        self.sxx
    }

    pub fn sxy(&self) -> f64 {
        self.sxy
    }

    pub fn syy(&self) -> f64 {
        self.syy
    }

    pub fn mean(&self) -> Point2 {
        self.mean
    }

    pub fn det(&self) -> f64 {
        self.sxx * self.syy - self.sxy * self.sxy
    }

    /// Entries of the inverse as `(inv_xx, inv_xy, inv_yy)`.
    pub fn inverse(&self) -> (f64, f64, f64) {
        (self.inv_xx, self.inv_xy, self.inv_yy)
    }

    /// Quadratic form `d^T Sigma^-1 d`, clamped at zero against rounding.
    fn quad_form_inv(&self, dx: f64, dy: f64) -> f64 {
        let q =
            dx * (self.inv_xx * dx + self.inv_xy * dy) + dy * (self.inv_xy * dx + self.inv_yy * dy);
        q.max(0.0)
    }
}

fn mean_point(points: &[Point2]) -> Point2 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.x).sum();
    let sy: f64 = points.iter().map(|p| p.y).sum();
    Point2::new(sx / n, sy / n)
}

fn sample_variances(points: &[Point2]) -> Result<(f64, f64)> {
    ensure_finite(points)?;
    if points.len() < 2 {
        return Err(Error::InsufficientData {
            reason: format!(
                "sample variance needs at least 2 points, got {}",
                points.len()
            ),
        });
    }
    let mean = mean_point(points);
    let denom = (points.len() - 1) as f64;
    let var_x = points.iter().map(|p| (p.x - mean.x).powi(2)).sum::<f64>() / denom;
    let var_y = points.iter().map(|p| (p.y - mean.y).powi(2)).sum::<f64>() / denom;
    Ok((var_x, var_y))
}

/// Plain Euclidean distance between two points.
pub fn euclidean(x: Point2, y: Point2) -> Result<f64> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite {
            context: "distance operands".into(),
        });
    }
    Ok(euclidean_raw(x, y))
}

fn euclidean_raw(x: Point2, y: Point2) -> f64 {
    let dx = x.x - y.x;
    let dy = x.y - y.y;
    (dx * dx + dy * dy).sqrt()
}

/// Euclidean distance with each squared coordinate difference divided by
/// that dimension's variance.
pub fn standardized_euclidean(x: Point2, y: Point2, v: &Variances2) -> Result<f64> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite {
            context: "distance operands".into(),
        });
    }
    Ok(standardized_euclidean_raw(x, y, v))
}

fn standardized_euclidean_raw(x: Point2, y: Point2, v: &Variances2) -> f64 {
    let dx = x.x - y.x;
    let dy = x.y - y.y;
    (dx * dx / v.var_x + dy * dy / v.var_y).sqrt()
}

/// Covariance-weighted distance `sqrt((x - y) Sigma^-1 (x - y)^T)`.
pub fn mahalanobis(x: Point2, y: Point2, cov: &Covariance2) -> Result<f64> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite {
            context: "distance operands".into(),
        });
    }
    if cov.det() <= 0.0 {
        return Err(Error::InvalidParameter {
            reason: "covariance is not positive definite".into(),
        });
    }
    Ok(mahalanobis_raw(x, y, cov))
}

fn mahalanobis_raw(x: Point2, y: Point2, cov: &Covariance2) -> f64 {
    cov.quad_form_inv(x.x - y.x, x.y - y.y).sqrt()
}

/// Sample mean and covariance with 1/(n-1) normalization. A determinant at or
/// below the positive-definiteness floor triggers ridge regularization on the
/// diagonal, escalating 10x per attempt before giving up.
pub fn estimate_covariance(points: &[Point2]) -> Result<Covariance2> {
    ensure_finite(points)?;
    if points.len() < 3 {
        return Err(Error::InsufficientData {
            reason: format!(
                "covariance estimation needs at least 3 points, got {}",
                points.len()
            ),
        });
    }
    let mean = mean_point(points);
    let denom = (points.len() - 1) as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for p in points {
        let dx = p.x - mean.x;
        let dy = p.y - mean.y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    sxx /= denom;
    sxy /= denom;
    syy /= denom;

    let trace = sxx + syy;
    let det_floor = PD_DET_FACTOR * (trace / 2.0) * (trace / 2.0);
    let base_ridge = RIDGE_FACTOR * trace / 2.0;
    for attempt in 0..=RIDGE_ESCALATIONS {
        let ridge = if attempt == 0 {
            0.0
        } else {
            base_ridge * 10f64.powi(attempt as i32 - 1)
        };
        let cand_xx = sxx + ridge;
        let cand_yy = syy + ridge;
        let det = cand_xx * cand_yy - sxy * sxy;
        if cand_xx > 0.0 && cand_yy > 0.0 && det > det_floor {
            return Covariance2::from_matrix(cand_xx, sxy, cand_yy, mean);
        }
    }
    Err(Error::SingularCovariance)
}

/// Divide each dimension by its sample standard deviation. The mean is not
/// subtracted; every downstream distance is translation-invariant, so
/// centering would be a no-op.
pub fn standardize(points: &[Point2]) -> Result<Vec<Point2>> {
    let v = Variances2::estimate(points)?;
    let sx = v.var_x().sqrt();
    let sy = v.var_y().sqrt();
    Ok(points
        .iter()
        .map(|p| Point2::new(p.x / sx, p.y / sy))
        .collect())
}

/// The three distance metrics the detector can run with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Euclidean,
    #[serde(rename = "std-euclidean")]
    StandardizedEuclidean,
    Mahalanobis,
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            MetricKind::Euclidean => "euclidean",
            MetricKind::StandardizedEuclidean => "std-euclidean",
            MetricKind::Mahalanobis => "mahalanobis",
        };
        f.write_str(name)
    }
}

/// A metric resolved against a dataset: variance or covariance context is
/// estimated once from the full input and then held fixed, so scores keep the
/// same meaning across peel iterations.
#[derive(Debug, Clone)]
pub enum MetricContext {
    Euclidean,
    Standardized(Variances2),
    Mahalanobis(Covariance2),
}

impl MetricContext {
    pub fn build(kind: MetricKind, points: &[Point2]) -> Result<Self> {
        match kind {
            MetricKind::Euclidean => Ok(MetricContext::Euclidean),
            MetricKind::StandardizedEuclidean => {
                Ok(MetricContext::Standardized(Variances2::estimate(points)?))
            }
            MetricKind::Mahalanobis => Ok(MetricContext::Mahalanobis(estimate_covariance(points)?)),
        }
    }

    pub fn kind(&self) -> MetricKind {
        match self {
            MetricContext::Euclidean => MetricKind::Euclidean,
            MetricContext::Standardized(_) => MetricKind::StandardizedEuclidean,
            MetricContext::Mahalanobis(_) => MetricKind::Mahalanobis,
        }
    }

    /// Distance between two points under this metric. Inputs are assumed
    /// finite; the detector validates once at its boundary.
    pub fn distance(&self, a: Point2, b: Point2) -> f64 {
        match self {
            MetricContext::Euclidean => euclidean_raw(a, b),
            MetricContext::Standardized(v) => standardized_euclidean_raw(a, b, v),
            MetricContext::Mahalanobis(cov) => mahalanobis_raw(a, b, cov),
        }
    }
}
