//! SVG snapshots of a solution at chosen times.

use std::fmt::Write;

use crate::envelope::SolutionTimeline;
use crate::geometry::{MovingInstance, Point2, Real};
use crate::{KdcError, Result};

/// Drawing area: `[0, width] × [0, height]` in instance units.
#[derive(Clone, Copy, Debug)]
pub struct Canvas {
    pub width: f64,
    pub height: f64,
}

impl Canvas {
    /// Grow `base` so every station and trajectory end fits.
    pub fn covering(inst: &MovingInstance, base: [f64; 2]) -> Canvas {
        let pts = inst.stations.iter().chain(inst.objects.iter().flat_map(|o| [&o.start, &o.end]));
        let [w, h] = pts.fold(base, |c, p| [c[0].max(p.x), c[1].max(p.y)]);
        Canvas { width: if w > 0.0 { w } else { 1.0 }, height: if h > 0.0 { h } else { 1.0 } }
    }
}

/// Radius of every station at `t`: distance to its farthest assigned object.
pub fn radii_at(inst: &MovingInstance, timeline: &SolutionTimeline, t: f64) -> Vec<f64> {
    let mode = timeline.mode();
    let seg = &timeline.segments[timeline.segment_index_at(&Real::from_f64(t, mode))];
    let pos = inst.positions_at(t);
    let mut r = vec![0.0f64; inst.m()];
    for (j, &s) in seg.assignment.iter().enumerate() {
        r[s] = r[s].max(inst.stations[s].dist(&pos[j]));
    }
    r
}

/// One snapshot: dotted trajectories, object positions, disks, and stations
/// as green triangles (solid when their radius is zero).
pub fn render_svg(inst: &MovingInstance, timeline: &SolutionTimeline, t: f64, canvas: Canvas) -> Result<String> {
    if !(0.0..=1.0).contains(&t) {
        return Err(KdcError::Invalid(format!("time {t} outside [0, 1]")));
    }
    let radii = if inst.n() == 0 { vec![0.0; inst.m()] } else { radii_at(inst, timeline, t) };
    let margin = 0.05 * canvas.width.max(canvas.height);
    let unit = canvas.width.max(canvas.height) / 200.0;
    let (w, h) = (canvas.width + 2.0 * margin, canvas.height + 2.0 * margin);
    // flip y so the picture has the usual orientation
    let xy = |p: &Point2| (p.x + margin, canvas.height - p.y + margin);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="800" height="{}">"#, (800.0 * h / w).round());
    let _ = writeln!(s, "<title>t = {t}</title>");
    let _ = writeln!(
        s,
        r##"<rect x="{margin}" y="{margin}" width="{}" height="{}" fill="white" stroke="#999" stroke-width="{}"/>"##,
        canvas.width,
        canvas.height,
        unit * 0.3
    );
    for o in &inst.objects {
        let ((x1, y1), (x2, y2)) = (xy(&o.start), xy(&o.end));
        let _ = writeln!(
            s,
            r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#777" stroke-width="{}" stroke-dasharray="{} {}"/>"##,
            unit * 0.3,
            unit,
            unit
        );
    }
    for (st, r) in inst.stations.iter().zip(&radii) {
        if *r > 0.0 {
            let (cx, cy) = xy(st);
            let _ = writeln!(
                s,
                r##"<circle cx="{cx}" cy="{cy}" r="{r}" fill="#4a90d9" fill-opacity="0.2" stroke="#4a90d9" stroke-width="{}"/>"##,
                unit * 0.4
            );
        }
    }
    for p in inst.positions_at(t) {
        let (cx, cy) = xy(&p);
        let _ = writeln!(s, r##"<circle cx="{cx}" cy="{cy}" r="{}" fill="#222"/>"##, unit * 0.8);
    }
    for (st, r) in inst.stations.iter().zip(&radii) {
        let (cx, cy) = xy(st);
        let k = unit * 2.0;
        let opacity = if *r == 0.0 { 1.0 } else { 0.5 };
        let _ = writeln!(
            s,
            r##"<polygon points="{},{} {},{} {},{}" fill="#2e9e44" fill-opacity="{opacity}"/>"##,
            cx,
            cy - k,
            cx - k,
            cy + k * 0.8,
            cx + k,
            cy + k * 0.8
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
