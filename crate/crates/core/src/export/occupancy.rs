//! Occupancy raster in the ROS `map_server` conventions: binary PGM plus a
//! YAML sidecar.

use thiserror::Error;

use crate::geom::{Point, Rect, Segment};
use crate::layout::FloorPlan;
use crate::populate::{hulls_intersect, Placement};

pub const OCCUPIED: u8 = 0;
pub const UNKNOWN: u8 = 205;
pub const FREE: u8 = 254;
/// Unknown border around the plan, meters.
pub const MARGIN: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    pub width: usize,
    pub height: usize,
    pub resolution: f64,
    /// World coordinates of the lower-left corner of the bottom-left cell.
    pub origin: [f64; 2],
    /// Row-major, first row at the top (highest y) as in the image file.
    pub data: Vec<u8>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PgmError {
    #[error("bad PGM header: {0}")]
    Header(String),
    #[error("PGM payload has {got} bytes, expected {want}")]
    Truncated { got: usize, want: usize },
}

impl OccupancyGrid {
    fn blank(width: usize, height: usize, resolution: f64, origin: [f64; 2]) -> Self {
        Self { width, height, resolution, origin, data: vec![UNKNOWN; width * height] }
    }

    /// Cell at column `i`, row `j` counted from the bottom.
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[(self.height - 1 - j) * self.width + i]
    }

    fn set(&mut self, i: usize, j: usize, v: u8) {
        let idx = (self.height - 1 - j) * self.width + i;
        self.data[idx] = v;
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin[0] + (i as f64 + 0.5) * self.resolution,
            self.origin[1] + (j as f64 + 0.5) * self.resolution,
        )
    }

    /// Column and row ranges of cells whose centers may fall in `r`.
    fn cells_in(&self, r: &Rect) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        let clamp = |v: f64, n: usize| v.max(0.0).min(n as f64) as usize;
        let i0 = clamp(((r.min.x - self.origin[0]) / self.resolution - 0.5).floor(), self.width);
        let i1 = clamp(((r.max.x - self.origin[0]) / self.resolution + 0.5).ceil(), self.width);
        let j0 = clamp(((r.min.y - self.origin[1]) / self.resolution - 0.5).floor(), self.height);
        let j1 = clamp(((r.max.y - self.origin[1]) / self.resolution + 0.5).ceil(), self.height);
        (i0..i1, j0..j1)
    }

    pub fn count(&self, v: u8) -> usize {
        self.data.iter().filter(|&&c| c == v).count()
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    pub fn map_yaml(&self, image: &str) -> String {
        format!(
            "image: {image}\nresolution: {}\norigin: [{}, {}, 0.0]\nnegate: 0\noccupied_thresh: 0.65\nfree_thresh: 0.196\n",
            fmt_num(self.resolution),
            fmt_num(self.origin[0]),
            fmt_num(self.origin[1]),
        )
    }
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v}");
    if s.contains('.') || s.contains('e') {
        s
    } else {
        format!("{s}.0")
    }
}

/// Parses a binary PGM (P5, maxval 255) into (width, height, pixels).
pub fn parse_pgm(bytes: &[u8]) -> Result<(usize, usize, Vec<u8>), PgmError> {
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(PgmError::Header("unexpected end of header".into()));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    if fields[0] != "P5" {
        return Err(PgmError::Header(format!("magic {:?}", fields[0])));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| PgmError::Header(format!("bad number {s:?}")));
    let (w, h, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
    if maxval != 255 {
        return Err(PgmError::Header(format!("maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let data = bytes.get(pos..).unwrap_or_default();
    if data.len() != w * h {
        return Err(PgmError::Truncated { got: data.len(), want: w * h });
    }
    Ok((w, h, data.to_vec()))
}

/// Rasterizes the plan at its resolution with a [`MARGIN`] border. Cells are
/// free inside rooms, occupied on wall strips (minus doorway openings) and on
/// any cell overlapping a placed hull, unknown elsewhere.
pub fn export_occupancy_grid(fp: &FloorPlan, placements: &[Placement]) -> OccupancyGrid {
    let res = fp.resolution;
    let b = fp.bounds;
    let finite = [b.min.x, b.min.y, b.max.x, b.max.y].iter().all(|v| v.is_finite());
    if fp.rooms.is_empty() || !finite || b.width() <= 0.0 || b.height() <= 0.0 || res <= 0.0 {
        let origin = if finite { [b.min.x, b.min.y] } else { [0.0, 0.0] };
        return OccupancyGrid::blank(1, 1, if res > 0.0 { res } else { 0.05 }, origin);
    }
    let origin = [b.min.x - MARGIN, b.min.y - MARGIN];
    let width = ((b.width() + 2.0 * MARGIN) / res - 1e-9).ceil() as usize;
    let height = ((b.height() + 2.0 * MARGIN) / res - 1e-9).ceil() as usize;
    let mut g = OccupancyGrid::blank(width, height, res, origin);
    let half = fp.wall_thickness / 2.0;
    let tol = 1e-9;

    for room in &fp.rooms {
        let r = room.rect();
        let (is, js) = g.cells_in(&r);
        for j in js {
            for i in is.clone() {
                let c = g.cell_center(i, j);
                if c.x > r.min.x && c.x < r.max.x && c.y > r.min.y && c.y < r.max.y {
                    g.set(i, j, FREE);
                }
            }
        }
    }
    let strip = |s: &Segment| {
        Rect::new(
            Point::new(s.a.x.min(s.b.x) - half, s.a.y.min(s.b.y) - half),
            Point::new(s.a.x.max(s.b.x) + half, s.a.y.max(s.b.y) + half),
        )
    };
    for room in &fp.rooms {
        for e in crate::geom::edges(&room.polygon) {
            let sr = strip(&e);
            let (is, js) = g.cells_in(&sr);
            for j in js {
                for i in is.clone() {
                    let c = g.cell_center(i, j);
                    if e.distance_to(c) <= half + tol {
                        g.set(i, j, OCCUPIED);
                    }
                }
            }
        }
    }
    for d in &fp.doorways {
        let s = d.segment;
        let dir = s.b - s.a;
        let len = dir.norm();
        if len <= 0.0 {
            continue;
        }
        let u = Point::new(dir.x / len, dir.y / len);
        let (is, js) = g.cells_in(&strip(&s));
        for j in js {
            for i in is.clone() {
                let c = g.cell_center(i, j);
                let along = (c - s.a).dot(u);
                let across = (c - s.a).cross(u).abs();
                if along > tol && along < len - tol && across <= half + tol {
                    g.set(i, j, FREE);
                }
            }
        }
    }
    for p in placements {
        let Some(hb) = Rect::bounding(&p.world_hull) else { continue };
        let (is, js) = g.cells_in(&hb);
        for j in js {
            for i in is.clone() {
                let c = g.cell_center(i, j);
                let cell = Rect::from_xywh(c.x - res / 2.0, c.y - res / 2.0, res, res).corners();
                if hulls_intersect(&cell, &p.world_hull) {
                    g.set(i, j, OCCUPIED);
                }
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_round_trip_and_rejects() {
        let g = OccupancyGrid {
            width: 3,
            height: 2,
            resolution: 0.05,
            origin: [0.0, 0.0],
            data: vec![0, 205, 254, 254, 205, 0],
        };
        let bytes = g.to_pgm();
        assert!(bytes.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(parse_pgm(&bytes).unwrap(), (3, 2, g.data.clone()));
        assert!(matches!(parse_pgm(&bytes[..bytes.len() - 1]), Err(PgmError::Truncated { .. })));
        assert!(parse_pgm(b"P2\n1 1\n255\n\x00").is_err());
    }

    #[test]
    fn yaml_keys() {
        let g = OccupancyGrid { width: 1, height: 1, resolution: 0.05, origin: [-1.0, -2.5], data: vec![205] };
        let y: serde_yaml::Value = serde_yaml::from_str(&g.map_yaml("map.pgm")).unwrap();
        assert_eq!(y["image"].as_str(), Some("map.pgm"));
        assert_eq!(y["origin"][1].as_f64(), Some(-2.5));
        assert_eq!(y["negate"].as_i64(), Some(0));
        assert_eq!(y["free_thresh"].as_f64(), Some(0.196));
    }
}
