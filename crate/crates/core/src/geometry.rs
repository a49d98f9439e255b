//! Axis-aligned 2D primitives in feet.
//!
//! Every comparison goes through [`EPS`] so that float noise from parsing and
//! stepping never flips a predicate that is meant to be exact on the 0.05 ft
//! scale the layout engine works at.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for all geometric comparisons, in feet.
pub const EPS: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("zero-length segment at ({x}, {y})")]
    ZeroLength { x: f64, y: f64 },
    #[error("segment ({x0}, {y0})-({x1}, {y1}) is not axis-aligned")]
    NotAxisAligned { x0: f64, y0: f64, x1: f64, y1: f64 },
    #[error("box corners are inverted")]
    InvertedBox,
    #[error("dimensions must be positive, got {width} x {depth}")]
    NonPositiveDimensions { width: f64, depth: f64 },
    #[error("polygon is degenerate: {0}")]
    DegeneratePolygon(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn approx_eq(&self, other: Point2) -> bool {
        (self.x - other.x).abs() <= EPS && (self.y - other.y).abs() <= EPS
    }

    pub fn offset(&self, dx: f64, dy: f64) -> Point2 {
        Point2::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Line orientation of an axis-aligned segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Runs along x (constant y).
    Horizontal,
    /// Runs along y (constant x).
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment2 {
    pub start: Point2,
    pub end: Point2,
}

impl Segment2 {
    pub fn new(start: Point2, end: Point2) -> Result<Self, GeometryError> {
        if !start.is_finite() || !end.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if start.distance(end) <= EPS {
            return Err(GeometryError::ZeroLength {
                x: start.x,
                y: start.y,
            });
        }
        Ok(Self { start, end })
    }

    /// Like [`Segment2::new`] but also rejects diagonal segments.
    pub fn axis_aligned(start: Point2, end: Point2) -> Result<Self, GeometryError> {
        let seg = Self::new(start, end)?;
        if seg.axis().is_none() {
            return Err(GeometryError::NotAxisAligned {
                x0: start.x,
                y0: start.y,
                x1: end.x,
                y1: end.y,
            });
        }
        Ok(seg)
    }

    pub fn length(&self) -> f64 {
        self.start.distance(self.end)
    }

    pub fn midpoint(&self) -> Point2 {
        Point2::new(
            0.5 * (self.start.x + self.end.x),
            0.5 * (self.start.y + self.end.y),
        )
    }

    pub fn axis(&self) -> Option<Axis> {
        if (self.start.y - self.end.y).abs() <= EPS {
            Some(Axis::Horizontal)
        } else if (self.start.x - self.end.x).abs() <= EPS {
            Some(Axis::Vertical)
        } else {
            None
        }
    }

    /// Bounding box of the segment; zero-thickness for axis-aligned segments.
    pub fn bounds(&self) -> AlignedBox {
        AlignedBox {
            min: Point2::new(self.start.x.min(self.end.x), self.start.y.min(self.end.y)),
            max: Point2::new(self.start.x.max(self.end.x), self.start.y.max(self.end.y)),
        }
    }

    /// Closest point on the segment to `p`, endpoints included.
    pub fn closest_point(&self, p: Point2) -> Point2 {
        let dx = self.end.x - self.start.x;
        let dy = self.end.y - self.start.y;
        let len2 = dx * dx + dy * dy;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((p.x - self.start.x) * dx + (p.y - self.start.y) * dy) / len2).clamp(0.0, 1.0)
        };
        Point2::new(self.start.x + t * dx, self.start.y + t * dy)
    }

    /// Same segment with endpoints ordered by increasing coordinate.
    pub fn normalized(&self) -> Segment2 {
        if (self.start.x, self.start.y) <= (self.end.x, self.end.y) {
            *self
        } else {
            Segment2 {
                start: self.end,
                end: self.start,
            }
        }
    }
}

impl fmt::Display for Segment2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start, self.end)
    }
}

/// Closed axis-aligned rectangle. Zero extent along one axis is allowed so that
/// wall centerlines and openings can live in the same obstacle set as furniture.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AlignedBox {
    pub min: Point2,
    pub max: Point2,
}

impl AlignedBox {
    pub fn new(min: Point2, max: Point2) -> Result<Self, GeometryError> {
        if !min.is_finite() || !max.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if min.x > max.x || min.y > max.y {
            return Err(GeometryError::InvertedBox);
        }
        Ok(Self { min, max })
    }

    /// Box of the given extents centered on `center`.
    pub fn from_center(center: Point2, width: f64, depth: f64) -> Result<Self, GeometryError> {
        if !(width > 0.0 && depth > 0.0) || !width.is_finite() || !depth.is_finite() {
            return Err(GeometryError::NonPositiveDimensions { width, depth });
        }
        if !center.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        let (hw, hd) = (0.5 * width, 0.5 * depth);
        Ok(Self {
            min: Point2::new(center.x - hw, center.y - hd),
            max: Point2::new(center.x + hw, center.y + hd),
        })
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point2 {
        Point2::new(
            0.5 * (self.min.x + self.max.x),
            0.5 * (self.min.y + self.max.y),
        )
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }

    /// Grows (or shrinks, for negative `by`) every side.
    pub fn inflate(&self, by: f64) -> AlignedBox {
        AlignedBox {
            min: Point2::new(self.min.x - by, self.min.y - by),
            max: Point2::new(self.max.x + by, self.max.y + by),
        }
    }

    /// Closed-set intersection: touching boxes intersect.
    pub fn intersects(&self, other: &AlignedBox) -> bool {
        self.min.x <= other.max.x + EPS
            && other.min.x <= self.max.x + EPS
            && self.min.y <= other.max.y + EPS
            && other.min.y <= self.max.y + EPS
    }

    /// True when the interiors share positive area.
    pub fn overlaps_interior(&self, other: &AlignedBox) -> bool {
        self.min.x < other.max.x - EPS
            && other.min.x < self.max.x - EPS
            && self.min.y < other.max.y - EPS
            && other.min.y < self.max.y - EPS
    }

    pub fn contains_point(&self, p: Point2) -> bool {
        p.x >= self.min.x - EPS
            && p.x <= self.max.x + EPS
            && p.y >= self.min.y - EPS
            && p.y <= self.max.y + EPS
    }

    pub fn union(&self, other: &AlignedBox) -> AlignedBox {
        AlignedBox {
            min: Point2::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point2::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }
}

impl fmt::Display for AlignedBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.min, self.max)
    }
}

/// Euclidean gap between the closest points of two boxes; zero when they
/// overlap or touch.
pub fn box_distance(a: &AlignedBox, b: &AlignedBox) -> f64 {
    let dx = (b.min.x - a.max.x).max(a.min.x - b.max.x).max(0.0);
    let dy = (b.min.y - a.max.y).max(a.min.y - b.max.y).max(0.0);
    dx.hypot(dy)
}

pub fn point_to_segment_distance(p: Point2, s: &Segment2) -> f64 {
    p.distance(s.closest_point(p))
}

/// Shared sub-segment of two segments lying on the same horizontal or vertical
/// line, when it has positive length. Result endpoints are in increasing order.
pub fn segments_collinear_overlap(a: &Segment2, b: &Segment2) -> Option<Segment2> {
    let (axis_a, axis_b) = (a.axis()?, b.axis()?);
    if axis_a != axis_b {
        return None;
    }
    let (a, b) = (a.normalized(), b.normalized());
    match axis_a {
        Axis::Horizontal => {
            if (a.start.y - b.start.y).abs() > EPS {
                return None;
            }
            let lo = a.start.x.max(b.start.x);
            let hi = a.end.x.min(b.end.x);
            (hi - lo > EPS).then(|| Segment2 {
                start: Point2::new(lo, a.start.y),
                end: Point2::new(hi, a.start.y),
            })
        }
        Axis::Vertical => {
            if (a.start.x - b.start.x).abs() > EPS {
                return None;
            }
            let lo = a.start.y.max(b.start.y);
            let hi = a.end.y.min(b.end.y);
            (hi - lo > EPS).then(|| Segment2 {
                start: Point2::new(a.start.x, lo),
                end: Point2::new(a.start.x, hi),
            })
        }
    }
}

/// Distance from a segment to a closed box; zero when they meet.
pub fn segment_box_distance(s: &Segment2, b: &AlignedBox) -> f64 {
    if clip_segment(s, b).is_some() {
        return 0.0;
    }
    let d_ends = box_point_distance(b, s.start).min(box_point_distance(b, s.end));
    b.corners()
        .iter()
        .map(|&c| point_to_segment_distance(c, s))
        .fold(d_ends, f64::min)
}

fn box_point_distance(b: &AlignedBox, p: Point2) -> f64 {
    let dx = (b.min.x - p.x).max(p.x - b.max.x).max(0.0);
    let dy = (b.min.y - p.y).max(p.y - b.max.y).max(0.0);
    dx.hypot(dy)
}

/// Liang-Barsky clip of `s` against the closed box. Returns the parameter
/// interval of the part inside.
fn clip_segment(s: &Segment2, b: &AlignedBox) -> Option<(f64, f64)> {
    let dx = s.end.x - s.start.x;
    let dy = s.end.y - s.start.y;
    let mut t0 = 0.0_f64;
    let mut t1 = 1.0_f64;
    let checks = [
        (-dx, s.start.x - b.min.x),
        (dx, b.max.x - s.start.x),
        (-dy, s.start.y - b.min.y),
        (dy, b.max.y - s.start.y),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then_some((t0, t1))
}

/// Simple polygon, stored counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon2 {
    vertices: Vec<Point2>,
}

impl Polygon2 {
    /// Validates and normalizes orientation to counterclockwise.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::DegeneratePolygon(
                "fewer than three vertices",
            ));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let signed = signed_area(&vertices);
        if signed.abs() <= EPS {
            return Err(GeometryError::DegeneratePolygon("zero area"));
        }
        if signed < 0.0 {
            vertices.reverse();
        }
        let poly = Self { vertices };
        if !poly.is_simple() {
            return Err(GeometryError::DegeneratePolygon("self-intersecting"));
        }
        Ok(poly)
    }

    pub fn rectangle(b: &AlignedBox) -> Result<Self, GeometryError> {
        Self::new(b.corners().to_vec())
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment2> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment2 {
            start: self.vertices[i],
            end: self.vertices[(i + 1) % n],
        })
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).abs()
    }

    pub fn bounds(&self) -> AlignedBox {
        let mut b = AlignedBox {
            min: self.vertices[0],
            max: self.vertices[0],
        };
        for v in &self.vertices[1..] {
            b.min.x = b.min.x.min(v.x);
            b.min.y = b.min.y.min(v.y);
            b.max.x = b.max.x.max(v.x);
            b.max.y = b.max.y.max(v.y);
        }
        b
    }

    pub fn on_boundary(&self, p: Point2) -> bool {
        self.edges()
            .any(|e| point_to_segment_distance(p, &e) <= EPS)
    }

    /// Strict interior test: points within [`EPS`] of an edge are outside.
    pub fn contains_strict(&self, p: Point2) -> bool {
        !self.on_boundary(p) && self.crossing_parity(p)
    }

    fn crossing_parity(&self, p: Point2) -> bool {
        let mut inside = false;
        for e in self.edges() {
            let (a, b) = (e.start, e.end);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn is_simple(&self) -> bool {
        let edges: Vec<Segment2> = self.edges().collect();
        let n = edges.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_intersect(&edges[i], &edges[j]) {
                    return false;
                }
            }
        }
        true
    }
}

fn signed_area(vs: &[Point2]) -> f64 {
    let n = vs.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (vs[i], vs[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn segments_intersect(s: &Segment2, t: &Segment2) -> bool {
    let d1 = cross(t.start, t.end, s.start);
    let d2 = cross(t.start, t.end, s.end);
    let d3 = cross(s.start, s.end, t.start);
    let d4 = cross(s.start, s.end, t.end);
    if ((d1 > EPS && d2 < -EPS) || (d1 < -EPS && d2 > EPS))
        && ((d3 > EPS && d4 < -EPS) || (d3 < -EPS && d4 > EPS))
    {
        return true;
    }
    point_to_segment_distance(s.start, t) <= EPS
        || point_to_segment_distance(s.end, t) <= EPS
        || point_to_segment_distance(t.start, s) <= EPS
        || point_to_segment_distance(t.end, s) <= EPS
}

/// True when the closed box lies in the open interior of the polygon: every
/// corner is strictly inside and no edge of the polygon reaches the box.
/// Works for non-convex rooms.
pub fn box_inside_polygon(b: &AlignedBox, poly: &Polygon2) -> bool {
    b.corners().iter().all(|&c| poly.contains_strict(c))
        && poly.edges().all(|e| segment_box_distance(&e, b) > EPS)
}
