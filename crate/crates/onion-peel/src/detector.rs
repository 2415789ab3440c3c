//! Iterative hull-based top-k outlier extraction.
//!
//! Each round builds the convex hull of the surviving points, scores the hull
//! vertices under the configured metric, reports the highest-scoring vertex
//! as the next outlier, records the hull area, and removes either that single
//! point or the whole hull ring. Standardization and metric context
//! (variances, covariance) are resolved once against the full input so the
//! score definition stays fixed across rounds.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, ensure_finite, Hull, Point2};
use crate::metrics::{standardize, MetricContext, MetricKind};

/// How hull vertices are scored each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scoring {
    /// Sum of distances from the vertex to every other surviving point.
    #[serde(rename = "sum")]
    SumToAll,
    /// Distance from the vertex to the mean of the surviving points.
    #[serde(rename = "center")]
    DistanceToCenter,
}

/// What gets removed after a round's outlier is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Removal {
    /// Remove only the selected vertex.
    #[serde(rename = "point")]
    SinglePoint,
    /// Remove every vertex of the round's hull.
    #[serde(rename = "hull")]
    WholeHull,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Outlier budget; must be strictly less than the point count.
    pub k: usize,
    pub metric: MetricKind,
    pub scoring: Scoring,
    pub removal: Removal,
    /// Rescale each dimension to unit sample variance before peeling.
    pub standardize_first: bool,
}

impl DetectionConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            metric: MetricKind::Euclidean,
            scoring: Scoring::SumToAll,
            removal: Removal::SinglePoint,
            standardize_first: false,
        }
    }

    pub fn with_metric(mut self, metric: MetricKind) -> Self {
        self.metric = metric;
        self
    }

    pub fn with_scoring(mut self, scoring: Scoring) -> Self {
        self.scoring = scoring;
        self
    }

    pub fn with_removal(mut self, removal: Removal) -> Self {
        self.removal = removal;
        self
    }

    pub fn standardized(mut self, yes: bool) -> Self {
        self.standardize_first = yes;
        self
    }
}

/// A hull vertex with its outlier score and the round that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredVertex {
    pub point_id: usize,
    pub score: f64,
    pub iteration: usize,
}

/// Detection output: outlier indices most-outlying first, one hull area and
/// winning score per round, the configuration that ran, and whether the peel
/// degenerated before the budget was spent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    pub outlier_ids: Vec<usize>,
    pub volumes: Vec<f64>,
    pub scores: Vec<f64>,
    pub config: DetectionConfig,
    pub early_termination: bool,
}

/// Score every hull vertex against the surviving points. `hull.vertex_ids`
/// index into `survivors`, and so do the returned `point_id`s.
pub fn score_hull_vertices(
    hull: &Hull,
    survivors: &[Point2],
    ctx: &MetricContext,
    scoring: Scoring,
    iteration: usize,
) -> Vec<ScoredVertex> {
    match scoring {
        Scoring::SumToAll => hull
            .vertex_ids
            .iter()
            .map(|&v| {
                let score = survivors
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != v)
                    .map(|(_, p)| ctx.distance(survivors[v], *p))
                    .sum();
                ScoredVertex {
                    point_id: v,
                    score,
                    iteration,
                }
            })
            .collect(),
        Scoring::DistanceToCenter => {
            let n = survivors.len() as f64;
            let cx = survivors.iter().map(|p| p.x).sum::<f64>() / n;
            let cy = survivors.iter().map(|p| p.y).sum::<f64>() / n;
            let center = Point2::new(cx, cy);
            hull.vertex_ids
                .iter()
                .map(|&v| ScoredVertex {
                    point_id: v,
                    score: ctx.distance(survivors[v], center),
                    iteration,
                })
                .collect()
        }
    }
}

/// Highest-scoring vertex; equal scores go to the lowest point id.
pub fn select_max(scored: &[ScoredVertex]) -> Result<&ScoredVertex> {
    scored
        .iter()
        .max_by(|a, b| {
            a.score
                .partial_cmp(&b.score)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(b.point_id.cmp(&a.point_id))
        })
        .ok_or_else(|| Error::Internal("select_max called on empty score list".into()))
}

/// Run the full detection loop over `points`.
///
/// Requires `points.len() > config.k` and at least three points. Degenerate
/// hulls before the budget is spent end the run early with the flag set
/// rather than failing. `k = 0` is accepted and reports just the initial
/// hull's area.
pub fn detect(points: &[Point2], config: &DetectionConfig) -> Result<OutlierReport> {
    ensure_finite(points)?;
    if points.len() <= config.k {
        return Err(Error::SizeNotGreaterThanOutliers {
            n: points.len(),
            k: config.k,
        });
    }
    if points.len() < 3 {
        return Err(Error::DegenerateInput {
            reason: format!("need at least 3 points, got {}", points.len()),
        });
    }

    let working: Vec<Point2> = if config.standardize_first {
        standardize(points)?
    } else {
        points.to_vec()
    };
    let ctx = MetricContext::build(config.metric, &working)?;

    let mut alive: Vec<usize> = (0..working.len()).collect();
    let mut outlier_ids = Vec::with_capacity(config.k);
    let mut volumes = Vec::with_capacity(config.k.max(1));
    let mut scores = Vec::with_capacity(config.k);
    let mut early_termination = false;

    if config.k == 0 {
        match convex_hull(&working) {
            Ok(hull) => volumes.push(hull.area),
            Err(Error::DegenerateInput { .. }) => early_termination = true,
            Err(e) => return Err(e),
        }
        return Ok(OutlierReport {
            outlier_ids,
            volumes,
            scores,
            config: config.clone(),
            early_termination,
        });
    }

    for iteration in 0..config.k {
        if alive.len() < 3 {
            early_termination = true;
            break;
        }
        let survivors: Vec<Point2> = alive.iter().map(|&i| working[i]).collect();
        let hull = match convex_hull(&survivors) {
            Ok(hull) => hull,
            Err(Error::DegenerateInput { .. }) => {
                early_termination = true;
                break;
            }
            Err(e) => return Err(e),
        };
        // Rebase scored vertices onto original ids so the tie rule and the
        // report speak the caller's index space.
        let scored: Vec<ScoredVertex> =
            score_hull_vertices(&hull, &survivors, &ctx, config.scoring, iteration)
                .into_iter()
                .map(|sv| ScoredVertex {
                    point_id: alive[sv.point_id],
                    ..sv
                })
                .collect();
        let best = select_max(&scored)?.clone();

        outlier_ids.push(best.point_id);
        volumes.push(hull.area);
        scores.push(best.score);

        match config.removal {
            Removal::SinglePoint => alive.retain(|&i| i != best.point_id),
            Removal::WholeHull => {
                let ring: HashSet<usize> = hull.vertex_ids.iter().map(|&j| alive[j]).collect();
                alive.retain(|i| !ring.contains(i));
            }
        }
    }

    Ok(OutlierReport {
        outlier_ids,
        volumes,
        scores,
        config: config.clone(),
        early_termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn disk_points(n: usize, seed: u64) -> Vec<Point2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let r = rng.gen::<f64>().sqrt();
                let t = rng.gen::<f64>() * std::f64::consts::TAU;
                Point2::new(r * t.cos(), r * t.sin())
            })
            .collect()
    }

    #[test]
    fn far_point_dominates_unit_disk() {
        let mut points = disk_points(100, 1);
        points.push(Point2::new(50.0, 0.0));
        let report = detect(&points, &DetectionConfig::new(1)).unwrap();
        assert_eq!(report.outlier_ids, vec![100]);
        assert!(!report.early_termination);
        assert_eq!(report.volumes.len(), 1);
    }

    #[test]
    fn budget_must_be_below_point_count() {
        let points = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.5, 0.5),
        ];
        let err = detect(&points, &DetectionConfig::new(5)).unwrap_err();
        assert!(matches!(
            err,
            Error::SizeNotGreaterThanOutliers { n: 5, k: 5 }
        ));
        assert!(err
            .to_string()
            .contains("Size must be greater than outliers"));
    }

    #[test]
    fn zero_budget_reports_initial_hull_only() {
        let points = disk_points(30, 2);
        let report = detect(&points, &DetectionConfig::new(0)).unwrap();
        assert!(report.outlier_ids.is_empty());
        assert!(report.scores.is_empty());
        assert_eq!(report.volumes.len(), 1);
        assert!(report.volumes[0] > 0.0);
        assert!(!report.early_termination);
    }

    #[test]
    fn whole_hull_removal_terminates_early() {
        // Square corners plus center: the first ring removes four points,
        // leaving one survivor and no further hulls.
        let points = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.5, 0.5),
        ];
        let config = DetectionConfig::new(4).with_removal(Removal::WholeHull);
        let report = detect(&points, &config).unwrap();
        assert!(report.early_termination);
        assert_eq!(report.outlier_ids.len(), 1);
        assert_eq!(report.volumes.len(), 1);
    }

    #[test]
    fn collinear_remainder_terminates_early() {
        let points = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(3.0, 0.0),
            Point2::new(1.5, 5.0),
        ];
        // The apex wins the first round; what remains is a line, so the run
        // must flag early termination, not fail.
        let report = detect(&points, &DetectionConfig::new(4)).unwrap();
        assert!(report.early_termination);
        assert!(report.outlier_ids.len() < 4);
    }

    #[test]
    fn select_max_breaks_ties_toward_lowest_id() {
        let scored = vec![
            ScoredVertex {
                point_id: 3,
                score: 7.0,
                iteration: 0,
            },
            ScoredVertex {
                point_id: 1,
                score: 7.0,
                iteration: 0,
            },
        ];
        assert_eq!(select_max(&scored).unwrap().point_id, 1);

        let single = vec![ScoredVertex {
            point_id: 9,
            score: 0.5,
            iteration: 2,
        }];
        assert_eq!(select_max(&single).unwrap().point_id, 9);

        let rising: Vec<ScoredVertex> = (0..5)
            .map(|i| ScoredVertex {
                point_id: i,
                score: i as f64,
                iteration: 0,
            })
            .collect();
        assert_eq!(select_max(&rising).unwrap().point_id, 4);

        assert!(matches!(select_max(&[]), Err(Error::Internal(_))));
    }

    #[test]
    fn equilateral_triangle_scores_are_symmetric() {
        let points = vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, 3f64.sqrt()),
        ];
        let hull = convex_hull(&points).unwrap();
        let scored = score_hull_vertices(
            &hull,
            &points,
            &MetricContext::Euclidean,
            Scoring::SumToAll,
            0,
        );
        assert_eq!(scored.len(), 3);
        for sv in &scored {
            assert!((sv.score - scored[0].score).abs() < 1e-12);
        }
    }

    #[test]
    fn far_point_has_strictly_largest_sum() {
        let mut points = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        points.push(Point2::new(10.0, 10.0));
        let hull = convex_hull(&points).unwrap();
        let scored = score_hull_vertices(
            &hull,
            &points,
            &MetricContext::Euclidean,
            Scoring::SumToAll,
            0,
        );
        let far = scored.iter().find(|sv| sv.point_id == 4).unwrap();
        for sv in &scored {
            if sv.point_id != 4 {
                assert!(far.score > sv.score);
            }
        }
    }

    #[test]
    fn scores_match_direct_double_loop() {
        let points = disk_points(50, 3);
        let hull = convex_hull(&points).unwrap();
        for (scoring, ctx) in [
            (Scoring::SumToAll, MetricContext::Euclidean),
            (Scoring::DistanceToCenter, MetricContext::Euclidean),
        ] {
            let scored = score_hull_vertices(&hull, &points, &ctx, scoring, 0);
            for sv in &scored {
                let expected = match scoring {
                    Scoring::SumToAll => points
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != sv.point_id)
                        .map(|(_, p)| {
                            let dx = points[sv.point_id].x - p.x;
                            let dy = points[sv.point_id].y - p.y;
                            (dx * dx + dy * dy).sqrt()
                        })
                        .sum::<f64>(),
                    Scoring::DistanceToCenter => {
                        let n = points.len() as f64;
                        let cx = points.iter().map(|p| p.x).sum::<f64>() / n;
                        let cy = points.iter().map(|p| p.y).sum::<f64>() / n;
                        let dx = points[sv.point_id].x - cx;
                        let dy = points[sv.point_id].y - cy;
                        (dx * dx + dy * dy).sqrt()
                    }
                };
                assert!((sv.score - expected).abs() <= 1e-9 * expected.max(1.0));
            }
        }
    }

    #[test]
    fn reported_outliers_were_hull_vertices_of_their_round() {
        let points = disk_points(60, 4);
        let config = DetectionConfig::new(6);
        let report = detect(&points, &config).unwrap();

        // Replay the removals and confirm hull membership per round.
        let mut alive: Vec<usize> = (0..points.len()).collect();
        for &outlier in &report.outlier_ids {
            let survivors: Vec<Point2> = alive.iter().map(|&i| points[i]).collect();
            let hull = convex_hull(&survivors).unwrap();
            let ring: Vec<usize> = hull.vertex_ids.iter().map(|&j| alive[j]).collect();
            assert!(ring.contains(&outlier));
            alive.retain(|&i| i != outlier);
        }
    }

    #[test]
    fn volumes_never_increase() {
        let points = disk_points(200, 5);
        for removal in [Removal::SinglePoint, Removal::WholeHull] {
            let config = DetectionConfig::new(10).with_removal(removal);
            let report = detect(&points, &config).unwrap();
            for w in report.volumes.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
        }
    }

    #[test]
    fn standardize_flag_matches_standardized_metric() {
        let spec = crate::datagen::GenSpec {
            n: 120,
            contamination: 0.05,
            ..crate::datagen::GenSpec::benchmark_default(31)
        };
        let ds = crate::datagen::generate(&spec).unwrap();
        let a = detect(&ds.points, &DetectionConfig::new(8).standardized(true)).unwrap();
        let b = detect(
            &ds.points,
            &DetectionConfig::new(8).with_metric(MetricKind::StandardizedEuclidean),
        )
        .unwrap();
        assert_eq!(a.outlier_ids, b.outlier_ids);
    }

    #[test]
    fn report_json_round_trips() {
        let points = disk_points(40, 6);
        let config = DetectionConfig::new(3).with_metric(MetricKind::Mahalanobis);
        let report = detect(&points, &config).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"outlier_ids\""));
        assert!(text.contains("\"early_termination\""));
        assert!(text.contains("\"mahalanobis\""));
        let back: OutlierReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }

    mod prop {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn budget_is_respected(seed in 0u64..500, n in 8usize..40, k in 1usize..6) {
                let points = disk_points(n, seed);
                let report = detect(&points, &DetectionConfig::new(k)).unwrap();
                prop_assert!(report.outlier_ids.len() <= k);
                if !report.early_termination {
                    prop_assert_eq!(report.outlier_ids.len(), k);
                }
                let set: std::collections::HashSet<_> = report.outlier_ids.iter().collect();
                prop_assert_eq!(set.len(), report.outlier_ids.len());
            }

            #[test]
            fn argmax_is_scale_invariant(seed in 0u64..200, scale in 0.01f64..100.0) {
                let points = disk_points(50, seed);
                let scaled: Vec<Point2> = points.iter()
                    .map(|p| Point2::new(p.x * scale, p.y * scale))
                    .collect();
                let config = DetectionConfig::new(5);
                let a = detect(&points, &config).unwrap();
                let b = detect(&scaled, &config).unwrap();
                prop_assert_eq!(a.outlier_ids, b.outlier_ids);
            }

            #[test]
            fn mahalanobis_selection_is_affine_invariant(
                seed in 0u64..100,
                m00 in -2.0..2.0f64, m01 in -2.0..2.0f64,
                m10 in -2.0..2.0f64, m11 in -2.0..2.0f64,
            ) {
                prop_assume!((m00 * m11 - m01 * m10).abs() > 0.2);
                let points = disk_points(40, seed);
                let mapped: Vec<Point2> = points.iter()
                    .map(|p| Point2::new(m00 * p.x + m01 * p.y, m10 * p.x + m11 * p.y))
                    .collect();
                let config = DetectionConfig::new(4).with_metric(MetricKind::Mahalanobis);
                let a = detect(&points, &config).unwrap();
                let b = detect(&mapped, &config).unwrap();
                prop_assert_eq!(a.outlier_ids, b.outlier_ids);
            }
        }
    }
}
