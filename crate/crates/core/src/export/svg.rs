use std::fmt::Write;

use crate::geom::Point;
use crate::layout::{DoorKind, FloorPlan};
use crate::populate::Placement;
use crate::scenario::Scenario;

/// Pixels per meter.
const SCALE: f64 = 40.0;
const PAD: f64 = 0.5;
/// Background and title.
pub const CHROME_ELEMENTS: usize = 2;

const PALETTE: [&str; 12] = [
    "#f4d9b0", "#c9e4ca", "#bcd4e6", "#f2c4ce", "#e3d5f2", "#fbe7a1", "#cfe8e3", "#f7cfae", "#d8d8d8", "#d5e8b5",
    "#e8c8b8", "#c6d8f0",
];

fn category_color(cat: &str) -> &'static str {
    let mut h: u32 = 0x811c_9dc5;
    for b in cat.bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    PALETTE[h as usize % PALETTE.len()]
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders plan, placements and agents. Every drawn entity carries a
/// `data-kind` attribute (`chrome`, `room`, `doorway`, `placement`, `agent`),
/// so the element count is rooms + doorways + placements + agents +
/// [`CHROME_ELEMENTS`].
pub fn export_svg(fp: &FloorPlan, placements: &[Placement], scenario: &Scenario, title: &str) -> String {
    let b = fp.bounds;
    let (w, h) = if b.width() > 0.0 && b.height() > 0.0 { (b.width(), b.height()) } else { (0.0, 0.0) };
    let (x0, y1) = if w > 0.0 { (b.min.x - PAD, b.max.y + PAD) } else { (-PAD, PAD) };
    let px = |p: Point| ((p.x - x0) * SCALE, (y1 - p.y) * SCALE);
    let pts = |poly: &[Point]| {
        poly.iter()
            .map(|p| {
                let (x, y) = px(*p);
                format!("{x:.1},{y:.1}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let (wpx, hpx) = ((w + 2.0 * PAD) * SCALE, (h + 2.0 * PAD) * SCALE);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{wpx:.0}" height="{hpx:.0}" viewBox="0 0 {wpx:.1} {hpx:.1}">"#
    );
    let _ =
        writeln!(s, r##"<rect data-kind="chrome" x="0" y="0" width="{wpx:.1}" height="{hpx:.1}" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r#"<text data-kind="chrome" x="4" y="14" font-size="12" font-family="sans-serif">{}</text>"#,
        esc(title)
    );
    let wall = fp.wall_thickness * SCALE;
    let _ = writeln!(s, r#"<g id="rooms">"#);
    for r in &fp.rooms {
        let _ = writeln!(
            s,
            r##"<polygon data-kind="room" data-id="{}" data-category="{}" points="{}" fill="{}" stroke="#333333" stroke-width="{wall:.1}"/>"##,
            esc(&r.id),
            esc(&r.category),
            pts(&r.polygon),
            category_color(&r.category)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="doorways">"#);
    for d in &fp.doorways {
        let (ax, ay) = px(d.segment.a);
        let (bx, by) = px(d.segment.b);
        let kind = match d.kind {
            DoorKind::InterRoom => "inter_room",
            DoorKind::External => "external",
        };
        let _ = writeln!(
            s,
            r##"<line data-kind="doorway" data-door="{kind}" data-rooms="{}" x1="{ax:.1}" y1="{ay:.1}" x2="{bx:.1}" y2="{by:.1}" stroke="#ffffff" stroke-width="{:.1}"/>"##,
            esc(&d.rooms.join(" ")),
            wall + 2.0
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="placements">"#);
    for p in placements {
        let _ = writeln!(
            s,
            r##"<polygon data-kind="placement" data-model="{}" data-zone="{}" points="{}" fill="none" stroke="#7a4b20" stroke-width="1.5"/>"##,
            esc(&p.model_id),
            esc(&p.zone_ref),
            pts(&p.world_hull)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="agents">"#);
    for a in &scenario.agents {
        let (x, y) = px(a.spawn());
        let _ = writeln!(
            s,
            r##"<g data-kind="agent" data-id="{}"><circle cx="{x:.1}" cy="{y:.1}" r="6" fill="#d62728"/><text x="{:.1}" y="{:.1}" font-size="9" font-family="sans-serif">{}</text></g>"##,
            esc(&a.id),
            x + 7.0,
            y - 7.0,
            esc(&a.role)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

/// Number of elements carrying a `data-kind` attribute.
pub fn count_kind_elements(svg: &str) -> usize {
    svg.matches("data-kind=\"").count()
}
