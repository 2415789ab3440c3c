//! Exact 2-D convex hulls and convex-layer (onion) decompositions.
//!
//! The hull builder is a Graham scan: pick the rightmost-lowest point as the
//! pivot, sort the rest radially counter-clockwise about it with cross-product
//! comparisons, then run the linear stack scan that keeps only strict left
//! turns. Radial ties (points on the same ray from the pivot) keep the
//! farthest point; boundary-collinear points are dropped by the scan, so the
//! resulting ring is strictly convex.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative half-width of the collinearity band: a cross product whose
/// magnitude is below `ORIENT_EPS_FACTOR * scale^2` counts as collinear,
/// where `scale` is the largest coordinate difference entering the product.
pub const ORIENT_EPS_FACTOR: f64 = 1e-12;

/// A 2-D sample. Coordinates must be finite; every operation in this crate
/// rejects NaN and infinities at its boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl TryFrom<[f64; 2]> for Point2 {
    type Error = Error;

    fn try_from([x, y]: [f64; 2]) -> Result<Self> {
        let p = Point2::new(x, y);
        if p.is_finite() {
            Ok(p)
        } else {
            Err(Error::NonFinite {
                context: "point coordinates".into(),
            })
        }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// Turn direction of an ordered point triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

impl Orientation {
    /// Swapping the last two points of a non-collinear triple flips the turn.
    pub fn reversed(self) -> Self {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// A convex polygon over a point list: `vertex_ids` index into the source
/// list, run counter-clockwise starting at the rightmost-lowest vertex, and
/// every cyclic triple is a strict left turn when produced by [`convex_hull`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hull {
    pub vertex_ids: Vec<usize>,
    pub area: f64,
}

impl Hull {
    pub fn len(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_ids.is_empty()
    }
}

/// Nested hull layers of a point set, outermost first, plus the indices left
/// over once fewer than three (or only collinear) points remain. Layer id
/// sets and `residual_ids` partition the full index set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelDecomposition {
    pub layers: Vec<Hull>,
    pub residual_ids: Vec<usize>,
}

impl PeelDecomposition {
    /// Layer index of a point id, or `None` for residual points.
    pub fn layer_of(&self, id: usize) -> Option<usize> {
        self.layers
            .iter()
            .position(|layer| layer.vertex_ids.contains(&id))
    }
}

fn cross(p: Point2, q: Point2, r: Point2) -> f64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

fn orient_eps(p: Point2, q: Point2, r: Point2) -> f64 {
    let sx = (q.x - p.x).abs().max((r.x - p.x).abs());
    let sy = (q.y - p.y).abs().max((r.y - p.y).abs());
    let s = sx.max(sy);
    ORIENT_EPS_FACTOR * s * s
}

fn orient_raw(p: Point2, q: Point2, r: Point2) -> Orientation {
    let c = cross(p, q, r);
    if c.abs() <= orient_eps(p, q, r) {
        Orientation::Collinear
    } else if c > 0.0 {
        Orientation::CounterClockwise
    } else {
        Orientation::Clockwise
    }
}

pub(crate) fn ensure_finite(points: &[Point2]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite {
                context: format!("coordinates of point {i}"),
            });
        }
    }
    Ok(())
}

/// Classify the turn of the triple `(p, q, r)` by the sign of the cross
/// product `(q - p) x (r - p)`, with a scale-relative collinearity band.
pub fn orientation(p: Point2, q: Point2, r: Point2) -> Result<Orientation> {
    for (name, pt) in [("p", p), ("q", q), ("r", r)] {
        if !pt.is_finite() {
            return Err(Error::NonFinite {
                context: format!("coordinates of {name}"),
            });
        }
    }
    Ok(orient_raw(p, q, r))
}

fn normalized_bits(x: f64) -> u64 {
    // -0.0 and 0.0 are the same coordinate
    if x == 0.0 {
        0.0f64.to_bits()
    } else {
        x.to_bits()
    }
}

/// One index per distinct coordinate pair, keeping the lowest original index,
/// sorted ascending.
fn dedup_lowest_index(points: &[Point2]) -> Vec<usize> {
    let mut seen = std::collections::HashMap::new();
    for (i, p) in points.iter().enumerate() {
        seen.entry((normalized_bits(p.x), normalized_bits(p.y)))
            .or_insert(i);
    }
    let mut ids: Vec<usize> = seen.into_values().collect();
    ids.sort_unstable();
    ids
}

fn dist2(a: Point2, b: Point2) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    dx * dx + dy * dy
}

/// Shoelace area of a vertex ring, anchored at the first vertex to limit
/// cancellation for far-from-origin data. Returns 0 for rings of fewer than
/// three vertices.
fn ring_area(ids: &[usize], points: &[Point2]) -> f64 {
    if ids.len() < 3 {
        return 0.0;
    }
    let o = points[ids[0]];
    let mut sum = 0.0;
    for w in ids[1..].windows(2) {
        let a = points[w[0]];
        let b = points[w[1]];
        sum += (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    }
    0.5 * sum.abs()
}

/// Polygon area of `hull` against its source points, by the shoelace formula.
pub fn hull_area(hull: &Hull, points: &[Point2]) -> Result<f64> {
    for &id in &hull.vertex_ids {
        if id >= points.len() {
            return Err(Error::InvalidInput {
                reason: format!(
                    "hull vertex index {id} out of range for {} points",
                    points.len()
                ),
            });
        }
        if !points[id].is_finite() {
            return Err(Error::NonFinite {
                context: format!("coordinates of point {id}"),
            });
        }
    }
    Ok(ring_area(&hull.vertex_ids, points))
}

/// Convex hull of `points` by Graham's scan.
///
/// Exact duplicates are collapsed to their lowest index before scanning, and
/// collinear points on the hull boundary are discarded, so the returned ring
/// is strictly convex. Fails with a degenerate-input error when fewer than
/// three distinct points exist or all points are collinear.
pub fn convex_hull(points: &[Point2]) -> Result<Hull> {
    ensure_finite(points)?;
    if points.len() < 3 {
        return Err(Error::DegenerateInput {
            reason: format!("need at least 3 points, got {}", points.len()),
        });
    }

    let mut candidates = dedup_lowest_index(points);
    if candidates.len() < 3 {
        return Err(Error::DegenerateInput {
            reason: format!("only {} distinct points", candidates.len()),
        });
    }

    // Pivot: lowest y, ties broken toward larger x.
    let pivot_pos = candidates
        .iter()
        .enumerate()
        .min_by(|(_, &a), (_, &b)| {
            points[a]
                .y
                .partial_cmp(&points[b].y)
                .unwrap()
                .then(points[b].x.partial_cmp(&points[a].x).unwrap())
        })
        .map(|(pos, _)| pos)
        .unwrap();
    let pivot = candidates.swap_remove(pivot_pos);
    let p0 = points[pivot];

    // Radial CCW sort about the pivot; same-ray ties closest first, then by
    // index so the order is total.
    candidates.sort_unstable_by(|&a, &b| {
        let c = cross(p0, points[a], points[b]);
        if c.abs() <= orient_eps(p0, points[a], points[b]) {
            dist2(p0, points[a])
                .partial_cmp(&dist2(p0, points[b]))
                .unwrap()
                .then(a.cmp(&b))
        } else if c > 0.0 {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });

    // Same-ray runs keep only the farthest point.
    let mut filtered: Vec<usize> = Vec::with_capacity(candidates.len());
    for id in candidates {
        match filtered.last() {
            Some(&last) if orient_raw(p0, points[last], points[id]) == Orientation::Collinear => {
                *filtered.last_mut().unwrap() = id;
            }
            _ => filtered.push(id),
        }
    }
    if filtered.len() < 2 {
        return Err(Error::DegenerateInput {
            reason: "all points collinear".into(),
        });
    }

    // Stack scan: advance on strict left turns, drop the middle vertex
    // otherwise.
    let mut stack = vec![pivot, filtered[0]];
    for &id in &filtered[1..] {
        while stack.len() >= 2 {
            let a = points[stack[stack.len() - 2]];
            let b = points[stack[stack.len() - 1]];
            if orient_raw(a, b, points[id]) == Orientation::CounterClockwise {
                break;
            }
            stack.pop();
        }
        stack.push(id);
    }
    debug_assert!(stack.len() >= 3);

    let area = ring_area(&stack, points);
    Ok(Hull {
        vertex_ids: stack,
        area,
    })
}

/// Convex-layer decomposition: repeatedly extract the hull and remove its
/// vertices until fewer than three points remain or the remainder is
/// collinear. Leftovers land in `residual_ids`.
pub fn onion_peel(points: &[Point2]) -> Result<PeelDecomposition> {
    ensure_finite(points)?;
    if points.len() < 3 {
        return Err(Error::DegenerateInput {
            reason: format!("need at least 3 points, got {}", points.len()),
        });
    }

    let mut alive: Vec<usize> = (0..points.len()).collect();
    let mut layers = Vec::new();
    while alive.len() >= 3 {
        let subset: Vec<Point2> = alive.iter().map(|&i| points[i]).collect();
        match convex_hull(&subset) {
            Ok(hull) => {
                let vertex_ids: Vec<usize> = hull.vertex_ids.iter().map(|&j| alive[j]).collect();
                let on_hull: HashSet<usize> = vertex_ids.iter().copied().collect();
                layers.push(Hull {
                    vertex_ids,
                    area: hull.area,
                });
                alive.retain(|i| !on_hull.contains(i));
            }
            Err(Error::DegenerateInput { .. }) => break,
            Err(e) => return Err(e),
        }
    }

    Ok(PeelDecomposition {
        layers,
        residual_ids: alive,
    })
}
