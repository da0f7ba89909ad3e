use crate::geom::{edges, Point};

const TOL: f64 = 1e-9;

fn project(poly: &[Point], axis: Point) -> (f64, f64) {
    poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let d = p.dot(axis);
        (lo.min(d), hi.max(d))
    })
}

/// Separating-axis test for convex polygons. True only when the interiors
/// overlap; shared edges or vertices do not count.
pub fn hulls_intersect(a: &[Point], b: &[Point]) -> bool {
    for e in edges(a).chain(edges(b)) {
        let d = e.b - e.a;
        let len = d.norm();
        if len < 1e-15 {
            continue;
        }
        let axis = Point::new(-d.y / len, d.x / len);
        let (a0, a1) = project(a, axis);
        let (b0, b1) = project(b, axis);
        if a1 <= b0 + TOL || b1 <= a0 + TOL {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rect;

    fn sq(x: f64, y: f64) -> Vec<Point> {
        Rect::from_xywh(x, y, 1.0, 1.0).corners()
    }

    #[test]
    fn touching_is_not_intersecting() {
        assert!(!hulls_intersect(&sq(0.0, 0.0), &sq(1.0, 0.0)));
        assert!(!hulls_intersect(&sq(0.0, 0.0), &sq(1.0, 1.0)));
    }

    #[test]
    fn overlap_detected() {
        assert!(hulls_intersect(&sq(0.0, 0.0), &sq(0.5, 0.0)));
        assert!(hulls_intersect(&sq(0.0, 0.0), &sq(0.0, 0.0)));
        let diamond = vec![Point::new(1.5, 0.5), Point::new(2.5, -0.5), Point::new(3.5, 0.5), Point::new(2.5, 1.5)];
        assert!(!hulls_intersect(&sq(0.0, 0.0), &diamond));
        let diamond: Vec<Point> = diamond.iter().map(|p| *p - Point::new(0.6, 0.0)).collect();
        assert!(hulls_intersect(&sq(0.0, 0.0), &diamond));
    }
}
