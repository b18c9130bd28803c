//! Planar primitives over normalized image coordinates.
//!
//! Coordinates live in `[0,1]²` with the origin at the top-left corner and
//! `y` growing downward, the same frame a touchscreen reports.

use std::fmt;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

/// Points closer than this to a polygon edge count as on the boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Polygons whose absolute area falls below this are treated as degenerate.
pub const DEGENERATE_AREA: f64 = 1e-12;

const COLLINEAR_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    pub fn in_unit_square(self) -> bool {
        (0.0..=1.0).contains(&self.x) && (0.0..=1.0).contains(&self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Rounds to at most nine fractional digits, the precision used by every
/// file format in this crate.
pub fn round9(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&round9(self.x))?;
        t.serialize_element(&round9(self.y))?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PointVisitor;

        impl<'de> Visitor<'de> for PointVisitor {
            type Value = Point;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a two-element [x, y] array")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Point, A::Error> {
                let x = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let y = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Point::new(x, y))
            }
        }

        deserializer.deserialize_tuple(2, PointVisitor)
    }
}

/// Axis-aligned rectangle, inclusive on all sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn center(&self) -> Point {
        Point::new((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)
    }
}

impl Serialize for Rect {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.x0, self.y0, self.x1, self.y1].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rect {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [x0, y0, x1, y1] = <[f64; 4]>::deserialize(deserializer)?;
        if !(x0 <= x1 && y0 <= y1) {
            return Err(de::Error::custom("rectangle corners out of order"));
        }
        Ok(Rect::new(x0, y0, x1, y1))
    }
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn edges(poly: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    let n = poly.len();
    (0..n).map(move |i| (poly[i], poly[(i + 1) % n]))
}

/// Shoelace signed area; positive for counter-clockwise winding in a
/// y-up frame (clockwise on screen).
pub fn signed_area(poly: &[Point]) -> f64 {
    edges(poly).map(|(a, b)| a.x * b.y - b.x * a.y).sum::<f64>() / 2.0
}

pub fn polygon_area(poly: &[Point]) -> f64 {
    signed_area(poly).abs()
}

/// Area-weighted centroid. Falls back to the vertex mean when the polygon
/// has (near-)zero area.
pub fn centroid(poly: &[Point]) -> Point {
    let a = signed_area(poly);
    if a.abs() < DEGENERATE_AREA {
        return vertex_mean(poly);
    }
    let (mut cx, mut cy) = (0.0, 0.0);
    for (p, q) in edges(poly) {
        let w = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    Point::new(cx / (6.0 * a), cy / (6.0 * a))
}

pub fn vertex_mean(poly: &[Point]) -> Point {
    if poly.is_empty() {
        return Point::default();
    }
    let n = poly.len() as f64;
    let (sx, sy) = poly.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point::new(sx / n, sy / n)
}

/// Even-odd crossing test with a horizontal ray toward +x. Points exactly
/// on an edge may land on either side; use [`contains`] for the inclusive
/// test.
pub fn even_odd(poly: &[Point], p: Point) -> bool {
    let mut inside = false;
    for (a, b) in edges(poly) {
        if (a.y > p.y) != (b.y > p.y) {
            let x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x_at {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn distance_to_segment(p: Point, a: Point, b: Point) -> f64 {
    p.distance(closest_on_segment(p, a, b))
}

pub fn closest_on_segment(p: Point, a: Point, b: Point) -> Point {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return a;
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    Point::new(a.x + t * dx, a.y + t * dy)
}

pub fn distance_to_boundary(poly: &[Point], p: Point) -> f64 {
    edges(poly)
        .map(|(a, b)| distance_to_segment(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

/// Nearest point on the polygon boundary.
pub fn closest_on_boundary(poly: &[Point], p: Point) -> Point {
    edges(poly)
        .map(|(a, b)| closest_on_segment(p, a, b))
        .min_by(|u, v| p.distance(*u).total_cmp(&p.distance(*v)))
        .unwrap_or(p)
}

/// Inclusive containment: interior by the even-odd rule, or within
/// [`BOUNDARY_TOLERANCE`] of an edge.
pub fn contains(poly: &[Point], p: Point) -> bool {
    even_odd(poly, p) || distance_to_boundary(poly, p) <= BOUNDARY_TOLERANCE
}

/// Interior containment that excludes the tolerance band around edges.
pub fn contains_strictly(poly: &[Point], p: Point) -> bool {
    even_odd(poly, p) && distance_to_boundary(poly, p) > BOUNDARY_TOLERANCE
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    cross(a, b, p).abs() <= COLLINEAR_EPS
        && p.x >= a.x.min(b.x) - COLLINEAR_EPS
        && p.x <= a.x.max(b.x) + COLLINEAR_EPS
        && p.y >= a.y.min(b.y) - COLLINEAR_EPS
        && p.y <= a.y.max(b.y) + COLLINEAR_EPS
}

fn sign(v: f64) -> i8 {
    if v > COLLINEAR_EPS {
        1
    } else if v < -COLLINEAR_EPS {
        -1
    } else {
        0
    }
}

/// Closed segments `ab` and `cd` share at least one point.
pub fn segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = sign(cross(c, d, a));
    let d2 = sign(cross(c, d, b));
    let d3 = sign(cross(a, b, c));
    let d4 = sign(cross(a, b, d));
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(a, c, d))
        || (d2 == 0 && on_segment(b, c, d))
        || (d3 == 0 && on_segment(c, a, b))
        || (d4 == 0 && on_segment(d, a, b))
}

/// Segments cross at a single interior point of both.
pub fn segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = sign(cross(c, d, a));
    let d2 = sign(cross(c, d, b));
    let d3 = sign(cross(a, b, c));
    let d4 = sign(cross(a, b, d));
    d1 * d2 < 0 && d3 * d4 < 0
}

/// True when no two edges meet except adjacent edges at their shared vertex.
pub fn is_simple(poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let edge = |i: usize| (poly[i], poly[(i + 1) % n]);
    for i in 0..n {
        let (a, b) = edge(i);
        if a == b {
            return false;
        }
        for j in (i + 1)..n {
            let (c, d) = edge(j);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared vertex is fine; folding back along the same line is not.
                let (shared, far_i, far_j) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                if sign(cross(shared, far_i, far_j)) == 0 {
                    let u = (far_i.x - shared.x, far_i.y - shared.y);
                    let v = (far_j.x - shared.x, far_j.y - shared.y);
                    if u.0 * v.0 + u.1 * v.1 > 0.0 {
                        return false;
                    }
                }
            } else if segments_touch(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

pub fn bounding_box(poly: &[Point]) -> Rect {
    poly.iter().fold(
        Rect::new(f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        |r, p| Rect::new(r.x0.min(p.x), r.y0.min(p.y), r.x1.max(p.x), r.y1.max(p.y)),
    )
}

/// Sutherland-Hodgman clip of an arbitrary polygon against a rectangle.
/// The result may contain zero-width slivers for concave inputs; its area
/// is still exact.
pub fn clip_to_rect(poly: &[Point], rect: Rect) -> Vec<Point> {
    #[derive(Clone, Copy)]
    enum Side {
        Left,
        Right,
        Top,
        Bottom,
    }

    let inside = |p: Point, side: Side| match side {
        Side::Left => p.x >= rect.x0,
        Side::Right => p.x <= rect.x1,
        Side::Top => p.y >= rect.y0,
        Side::Bottom => p.y <= rect.y1,
    };
    let intersect = |a: Point, b: Point, side: Side| match side {
        Side::Left | Side::Right => {
            let x = if matches!(side, Side::Left) { rect.x0 } else { rect.x1 };
            let t = (x - a.x) / (b.x - a.x);
            Point::new(x, a.y + t * (b.y - a.y))
        }
        Side::Top | Side::Bottom => {
            let y = if matches!(side, Side::Top) { rect.y0 } else { rect.y1 };
            let t = (y - a.y) / (b.y - a.y);
            Point::new(a.x + t * (b.x - a.x), y)
        }
    };

    let mut output = poly.to_vec();
    for side in [Side::Left, Side::Right, Side::Top, Side::Bottom] {
        let input = std::mem::take(&mut output);
        if input.is_empty() {
            break;
        }
        let mut prev = input[input.len() - 1];
        for &cur in &input {
            match (inside(cur, side), inside(prev, side)) {
                (true, true) => output.push(cur),
                (true, false) => {
                    output.push(intersect(prev, cur, side));
                    output.push(cur);
                }
                (false, true) => output.push(intersect(prev, cur, side)),
                (false, false) => {}
            }
            prev = cur;
        }
    }
    output
}

/// Polygon and rectangle share interior area.
pub fn intersects_rect(poly: &[Point], rect: Rect) -> bool {
    polygon_area(&clip_to_rect(poly, rect)) > DEGENERATE_AREA
}

/// Splits every edge of `poly` at vertices of `other` lying on it and
/// returns the midpoints of the resulting pieces.
fn piece_midpoints(poly: &[Point], other: &[Point]) -> Vec<Point> {
    let mut mids = Vec::new();
    for (a, b) in edges(poly) {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len2 = dx * dx + dy * dy;
        let mut ts = vec![0.0, 1.0];
        for &v in other {
            if distance_to_segment(v, a, b) <= BOUNDARY_TOLERANCE && len2 > 0.0 {
                ts.push(((v.x - a.x) * dx + (v.y - a.y) * dy) / len2);
            }
        }
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            if w[1] - w[0] > 1e-12 {
                let t = (w[0] + w[1]) / 2.0;
                mids.push(Point::new(a.x + t * dx, a.y + t * dy));
            }
        }
    }
    mids
}

/// Two simple polygons share interior area. Touching along edges or at
/// vertices does not count.
pub fn polygons_overlap(a: &[Point], b: &[Point]) -> bool {
    for (p, q) in edges(a) {
        for (r, s) in edges(b) {
            if segments_cross_properly(p, q, r, s) {
                return true;
            }
        }
    }
    let a_mids = piece_midpoints(a, b);
    let b_mids = piece_midpoints(b, a);
    if a_mids.iter().any(|&m| contains_strictly(b, m))
        || b_mids.iter().any(|&m| contains_strictly(a, m))
    {
        return true;
    }
    // Every boundary piece lies on the other boundary: identical outlines.
    a_mids.iter().all(|&m| distance_to_boundary(b, m) <= BOUNDARY_TOLERANCE)
        && b_mids.iter().all(|&m| distance_to_boundary(a, m) <= BOUNDARY_TOLERANCE)
}
