//! Independent reference implementations used as oracles by the acceptance
//! suite. Nothing here shares code with the library's hull or detector paths:
//! hull membership comes from an exhaustive extreme-point test, areas from an
//! angle-sorted shoelace, scores from direct loops, and the statistics from
//! their own summations.

use onion_peel::{Point2, Removal, Scoring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn disk_points(n: usize, radius: f64, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    (0..n)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let t = rng.gen::<f64>() * std::f64::consts::TAU;
            Point2::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

pub fn square_points(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    (0..n)
        .map(|_| {
            Point2::new(
                scale * (rng.gen::<f64>() * 2.0 - 1.0),
                scale * (rng.gen::<f64>() * 2.0 - 1.0),
            )
        })
        .collect()
}

fn cross_sign(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn inside_or_on_triangle(p: Point2, a: Point2, b: Point2, c: Point2) -> bool {
    let s1 = cross_sign(a, b, p);
    let s2 = cross_sign(b, c, p);
    let s3 = cross_sign(c, a, p);
    (s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0) || (s1 <= 0.0 && s2 <= 0.0 && s3 <= 0.0)
}

fn on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    cross_sign(a, b, p) == 0.0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// Brute-force hull vertex test over a subset of `points`: an id is a hull
/// vertex iff its point is not contained in the convex hull of the others,
/// checked exhaustively against every triangle and segment of other points.
pub fn brute_hull_vertex_ids(points: &[Point2], subset: &[usize]) -> Vec<usize> {
    let mut vertices = Vec::new();
    'candidate: for &i in subset {
        let p = points[i];
        let others: Vec<Point2> = subset
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| points[j])
            .collect();
        for (ai, &a) in others.iter().enumerate() {
            for (bi, &b) in others.iter().enumerate().skip(ai + 1) {
                if on_segment(p, a, b) {
                    continue 'candidate;
                }
                for &c in others.iter().skip(bi + 1) {
                    if cross_sign(a, b, c) != 0.0 && inside_or_on_triangle(p, a, b, c) {
                        continue 'candidate;
                    }
                }
            }
        }
        vertices.push(i);
    }
    vertices
}

/// Polygon area of a hull vertex set: order by angle about the centroid,
/// then apply the plain cyclic shoelace sum.
pub fn brute_hull_area(points: &[Point2], vertex_ids: &[usize]) -> f64 {
    if vertex_ids.len() < 3 {
        return 0.0;
    }
    let n = vertex_ids.len() as f64;
    let cx = vertex_ids.iter().map(|&i| points[i].x).sum::<f64>() / n;
    let cy = vertex_ids.iter().map(|&i| points[i].y).sum::<f64>() / n;
    let mut ordered: Vec<usize> = vertex_ids.to_vec();
    ordered.sort_by(|&a, &b| {
        let ta = (points[a].y - cy).atan2(points[a].x - cx);
        let tb = (points[b].y - cy).atan2(points[b].x - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    let mut sum = 0.0;
    for w in 0..ordered.len() {
        let a = points[ordered[w]];
        let b = points[ordered[(w + 1) % ordered.len()]];
        sum += a.x * b.y - b.x * a.y;
    }
    0.5 * sum.abs()
}

#[derive(Debug, Clone, Copy)]
pub enum OracleMetric {
    Euclidean,
    Standardized { vx: f64, vy: f64 },
    Mahalanobis { ixx: f64, ixy: f64, iyy: f64 },
}

impl OracleMetric {
    /// Resolve a metric against the full dataset with independent statistics.
    pub fn build(kind: onion_peel::MetricKind, points: &[Point2]) -> OracleMetric {
        match kind {
            onion_peel::MetricKind::Euclidean => OracleMetric::Euclidean,
            onion_peel::MetricKind::StandardizedEuclidean => {
                let (vx, vy) = oracle_variances(points);
                OracleMetric::Standardized { vx, vy }
            }
            onion_peel::MetricKind::Mahalanobis => {
                let (sxx, sxy, syy) = oracle_covariance(points);
                let det = sxx * syy - sxy * sxy;
                OracleMetric::Mahalanobis {
                    ixx: syy / det,
                    ixy: -sxy / det,
                    iyy: sxx / det,
                }
            }
        }
    }

    pub fn distance(&self, a: Point2, b: Point2) -> f64 {
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        match *self {
            OracleMetric::Euclidean => (dx * dx + dy * dy).sqrt(),
            OracleMetric::Standardized { vx, vy } => (dx * dx / vx + dy * dy / vy).sqrt(),
            OracleMetric::Mahalanobis { ixx, ixy, iyy } => (dx * (ixx * dx + ixy * dy)
                + dy * (ixy * dx + iyy * dy))
                .max(0.0)
                .sqrt(),
        }
    }
}

pub fn oracle_variances(points: &[Point2]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.x).sum::<f64>() / n;
    let my = points.iter().map(|p| p.y).sum::<f64>() / n;
    let vx = points.iter().map(|p| (p.x - mx) * (p.x - mx)).sum::<f64>() / (n - 1.0);
    let vy = points.iter().map(|p| (p.y - my) * (p.y - my)).sum::<f64>() / (n - 1.0);
    (vx, vy)
}

pub fn oracle_covariance(points: &[Point2]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.x).sum::<f64>() / n;
    let my = points.iter().map(|p| p.y).sum::<f64>() / n;
    let sxx = points.iter().map(|p| (p.x - mx) * (p.x - mx)).sum::<f64>() / (n - 1.0);
    let sxy = points.iter().map(|p| (p.x - mx) * (p.y - my)).sum::<f64>() / (n - 1.0);
    let syy = points.iter().map(|p| (p.y - my) * (p.y - my)).sum::<f64>() / (n - 1.0);
    (sxx, sxy, syy)
}

pub struct OracleReport {
    pub outlier_ids: Vec<usize>,
    pub volumes: Vec<f64>,
    pub scores: Vec<f64>,
    pub early_termination: bool,
}

/// Step-by-step reference simulator for the detection loop, built on the
/// brute-force hull and direct double-loop scoring.
pub fn naive_detect(
    points: &[Point2],
    k: usize,
    metric: onion_peel::MetricKind,
    scoring: Scoring,
    removal: Removal,
) -> OracleReport {
    let ctx = OracleMetric::build(metric, points);
    let mut survivors: Vec<usize> = (0..points.len()).collect();
    let mut outlier_ids = Vec::new();
    let mut volumes = Vec::new();
    let mut scores = Vec::new();
    let mut early_termination = false;

    for _ in 0..k {
        if survivors.len() < 3 {
            early_termination = true;
            break;
        }
        let verts = brute_hull_vertex_ids(points, &survivors);
        if verts.len() < 3 {
            early_termination = true;
            break;
        }
        let area = brute_hull_area(points, &verts);

        let center = {
            let n = survivors.len() as f64;
            let cx = survivors.iter().map(|&i| points[i].x).sum::<f64>() / n;
            let cy = survivors.iter().map(|&i| points[i].y).sum::<f64>() / n;
            Point2::new(cx, cy)
        };
        let mut best: Option<(usize, f64)> = None;
        for &v in &verts {
            let score = match scoring {
                Scoring::SumToAll => survivors
                    .iter()
                    .filter(|&&j| j != v)
                    .map(|&j| ctx.distance(points[v], points[j]))
                    .sum(),
                Scoring::DistanceToCenter => ctx.distance(points[v], center),
            };
            best = match best {
                None => Some((v, score)),
                Some((bid, bscore)) => {
                    if score > bscore || (score == bscore && v < bid) {
                        Some((v, score))
                    } else {
                        Some((bid, bscore))
                    }
                }
            };
        }
        let (best_id, best_score) = best.unwrap();
        outlier_ids.push(best_id);
        volumes.push(area);
        scores.push(best_score);

        match removal {
            Removal::SinglePoint => survivors.retain(|&i| i != best_id),
            Removal::WholeHull => survivors.retain(|i| !verts.contains(i)),
        }
    }

    OracleReport {
        outlier_ids,
        volumes,
        scores,
        early_termination,
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
