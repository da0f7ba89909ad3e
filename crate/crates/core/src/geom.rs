//! Planar geometry primitives shared by layout, population and export.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

/// Tolerance used for metric comparisons on coordinates that were snapped to
/// the layout grid.
pub const EPS: f64 = 1e-6;

/// A 2D point in meters. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Rotates by a multiple of 90 degrees counter-clockwise about the origin.
    pub fn rotate_quarter(self, quarter_turns: u8) -> Point {
        match quarter_turns % 4 {
            0 => self,
            1 => Point::new(-self.y, self.x),
            2 => Point::new(-self.x, -self.y),
            _ => Point::new(self.y, -self.x),
        }
    }
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Orientation of the triple: positive for a left turn.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Axis-aligned rectangle in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Self {
        Self { min, max }
    }

    pub fn from_xywh(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self::new(Point::new(x, y), Point::new(x + w, y + h))
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }

    pub fn center(&self) -> Point {
        Point::new((self.min.x + self.max.x) / 2.0, (self.min.y + self.max.y) / 2.0)
    }

    pub fn is_empty(&self) -> bool {
        self.width() <= 0.0 || self.height() <= 0.0
    }

    /// Counter-clockwise corners starting at `min`.
    pub fn corners(&self) -> Vec<Point> {
        vec![self.min, Point::new(self.max.x, self.min.y), self.max, Point::new(self.min.x, self.max.y)]
    }

    pub fn shrink(&self, by: f64) -> Rect {
        Rect::new(Point::new(self.min.x + by, self.min.y + by), Point::new(self.max.x - by, self.max.y - by))
    }

    pub fn contains_rect(&self, o: &Rect, tol: f64) -> bool {
        o.min.x >= self.min.x - tol
            && o.min.y >= self.min.y - tol
            && o.max.x <= self.max.x + tol
            && o.max.y <= self.max.y + tol
    }

    /// True if the open interiors overlap by more than `tol` on both axes.
    pub fn overlaps(&self, o: &Rect, tol: f64) -> bool {
        self.min.x < o.max.x - tol
            && o.min.x < self.max.x - tol
            && self.min.y < o.max.y - tol
            && o.min.y < self.max.y - tol
    }

    pub fn bounding(points: &[Point]) -> Option<Rect> {
        let first = *points.first()?;
        let mut r = Rect::new(first, first);
        for p in &points[1..] {
            r.min.x = r.min.x.min(p.x);
            r.min.y = r.min.y.min(p.y);
            r.max.x = r.max.x.max(p.x);
            r.max.y = r.max.y.max(p.y);
        }
        Some(r)
    }
}

/// A closed line segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[Point; 2]", into = "[Point; 2]")]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn midpoint(&self) -> Point {
        (self.a + self.b) * 0.5
    }

    /// Euclidean distance from `p` to the closest point on the segment.
    pub fn distance_to(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        let len2 = d.dot(d);
        if len2 == 0.0 {
            return p.dist(self.a);
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        p.dist(self.a + d * t)
    }
}

impl From<[Point; 2]> for Segment {
    fn from(v: [Point; 2]) -> Self {
        Segment::new(v[0], v[1])
    }
}

impl From<Segment> for [Point; 2] {
    fn from(s: Segment) -> Self {
        [s.a, s.b]
    }
}

/// Signed shoelace area; positive for counter-clockwise vertex order.
pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        acc += poly[i].cross(poly[(i + 1) % n]);
    }
    acc / 2.0
}

pub fn centroid(poly: &[Point]) -> Point {
    let a = signed_area(poly);
    if a.abs() < 1e-12 {
        let n = poly.len().max(1) as f64;
        let s = poly.iter().fold(Point::default(), |acc, p| acc + *p);
        return s * (1.0 / n);
    }
    let n = poly.len();
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let c = p.cross(q);
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    Point::new(cx / (6.0 * a), cy / (6.0 * a))
}

pub fn edges(poly: &[Point]) -> impl Iterator<Item = Segment> + '_ {
    let n = poly.len();
    (0..n).map(move |i| Segment::new(poly[i], poly[(i + 1) % n]))
}

/// Distance from `p` to the polygon boundary.
pub fn boundary_distance(poly: &[Point], p: Point) -> f64 {
    edges(poly).map(|e| e.distance_to(p)).fold(f64::INFINITY, f64::min)
}

/// Even-odd point-in-polygon test. Points exactly on the boundary may go
/// either way; callers that care combine this with [`boundary_distance`].
pub fn point_in_polygon(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (pi, pj) = (poly[i], poly[j]);
        if (pi.y > p.y) != (pj.y > p.y) {
            let x = pj.x + (p.y - pj.y) * (pi.x - pj.x) / (pi.y - pj.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Point inside or on the boundary of a counter-clockwise convex polygon.
pub fn point_in_convex(poly: &[Point], p: Point, tol: f64) -> bool {
    edges(poly).all(|e| orient(e.a, e.b, p) >= -tol * e.length().max(1e-12))
}

/// True if the convex CCW polygon is strictly convex-or-straight at every vertex.
pub fn is_convex_ccw(poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 || signed_area(poly) <= 0.0 {
        return false;
    }
    (0..n).all(|i| orient(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]) >= -1e-12)
}

/// Translates and rotates a polygon defined around the origin.
pub fn transform(poly: &[Point], quarter_turns: u8, offset: Point) -> Vec<Point> {
    poly.iter().map(|p| p.rotate_quarter(quarter_turns) + offset).collect()
}

/// Proper or touching intersection of two closed segments.
pub fn segments_intersect(s: &Segment, t: &Segment) -> bool {
    let d1 = orient(t.a, t.b, s.a);
    let d2 = orient(t.a, t.b, s.b);
    let d3 = orient(s.a, s.b, t.a);
    let d4 = orient(s.a, s.b, t.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: Point, b: Point, p: Point, d: f64| {
        d == 0.0 && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
    };
    on(t.a, t.b, s.a, d1) || on(t.a, t.b, s.b, d2) || on(s.a, s.b, t.a, d3) || on(s.a, s.b, t.b, d4)
}

/// Segments cross at a single interior point of both (no touching, no overlap).
pub fn segments_cross_properly(s: &Segment, t: &Segment) -> bool {
    let d1 = orient(t.a, t.b, s.a);
    let d2 = orient(t.a, t.b, s.b);
    let d3 = orient(s.a, s.b, t.a);
    let d4 = orient(s.a, s.b, t.b);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Rounds to the canonical 3-decimal representation used in documents.
pub fn round3(v: f64) -> f64 {
    let r = (v * 1000.0).round() / 1000.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(s: f64) -> Vec<Point> {
        Rect::from_xywh(0.0, 0.0, s, s).corners()
    }

    #[test]
    fn area_and_centroid_of_square() {
        let sq = square(2.0);
        assert_eq!(signed_area(&sq), 4.0);
        assert_eq!(centroid(&sq), Point::new(1.0, 1.0));
    }

    #[test]
    fn point_tests() {
        let sq = square(1.0);
        assert!(point_in_polygon(&sq, Point::new(0.5, 0.5)));
        assert!(!point_in_polygon(&sq, Point::new(1.5, 0.5)));
        assert!(point_in_convex(&sq, Point::new(1.0, 0.5), 1e-9));
        assert!((boundary_distance(&sq, Point::new(0.5, 0.25)) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn quarter_rotation_cycles() {
        let p = Point::new(1.0, 2.0);
        assert_eq!(p.rotate_quarter(1), Point::new(-2.0, 1.0));
        assert_eq!(p.rotate_quarter(4), p);
    }

    #[test]
    fn segment_crossing() {
        let s = Segment::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0));
        let t = Segment::new(Point::new(0.0, 1.0), Point::new(1.0, 0.0));
        assert!(segments_cross_properly(&s, &t));
        let u = Segment::new(Point::new(1.0, 1.0), Point::new(2.0, 0.0));
        assert!(!segments_cross_properly(&s, &u));
        assert!(segments_intersect(&s, &u));
    }
}
