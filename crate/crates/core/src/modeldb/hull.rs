use thiserror::Error;

use crate::geom::{orient, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HullError {
    #[error("degenerate input: need at least 3 non-collinear points")]
    DegenerateInput,
}

/// Convex hull by Andrew's monotone chain. Vertices are counter-clockwise,
/// start at the lexicographically smallest point and exclude collinear
/// boundary points.
pub fn convex_hull_2d(points: &[Point]) -> Result<Vec<Point>, HullError> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return Err(HullError::DegenerateInput);
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(HullError::DegenerateInput);
    }
    Ok(lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn square_with_center() {
        let h = convex_hull_2d(&[p(1.0, 1.0), p(0.0, 0.0), p(0.5, 0.5), p(1.0, 0.0), p(0.0, 1.0)]).unwrap();
        assert_eq!(h, vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]);
    }

    #[test]
    fn triangle_reordered_ccw() {
        let h = convex_hull_2d(&[p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0)]).unwrap();
        assert_eq!(h, vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)]);
    }

    #[test]
    fn degenerate() {
        assert_eq!(convex_hull_2d(&[p(0.0, 0.0), p(1.0, 1.0)]), Err(HullError::DegenerateInput));
        assert_eq!(
            convex_hull_2d(&[p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0), p(1.0, 1.0)]),
            Err(HullError::DegenerateInput)
        );
    }

    #[test]
    fn collinear_edge_points_dropped_and_idempotent() {
        let h = convex_hull_2d(&[p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0), p(2.0, 2.0), p(0.0, 2.0)]).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(convex_hull_2d(&h).unwrap(), h);
    }
}
