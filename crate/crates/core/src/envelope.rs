//! Piecewise-quadratic solution timelines over `[0, 1]`.
//!
//! Within a segment the assignment is fixed, so the total squared radius is
//! a sum of one distance quadratic per station: an upward-opening parabola.
//! Objectives are stored without the factor `π`; [`SolutionTimeline::area`]
//! applies it.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::geometry::{Arithmetic, QuadraticPoly, Real};
use crate::{KdcError, Result};

/// Float-mode pieces shorter than this are folded into their neighbour.
const TIME_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct TimelineSegment {
    pub t_start: Real,
    pub t_end: Real,
    /// Station of each object.
    pub assignment: Arc<Vec<usize>>,
    /// Farthest assigned object per station, `None` for idle stations.
    pub supports: Arc<Vec<Option<usize>>>,
    /// `Σ_s r_s(t)²` on this segment.
    pub objective: QuadraticPoly,
}

impl TimelineSegment {
    pub fn len_f64(&self) -> f64 {
        self.t_end.to_f64() - self.t_start.to_f64()
    }

    fn same_source(&self, other: &TimelineSegment) -> bool {
        Arc::ptr_eq(&self.assignment, &other.assignment)
            && Arc::ptr_eq(&self.supports, &other.supports)
            && self.objective == other.objective
    }
}

#[derive(Clone, Debug)]
pub struct SolutionTimeline {
    pub segments: Vec<TimelineSegment>,
    /// Peak of the objective over `[0, 1]`.
    pub value: Real,
    /// Earliest time the peak is attained.
    pub peak_time: Real,
}

impl SolutionTimeline {
    /// Wrap contiguous segments covering `[0, 1]`.
    pub fn new(segments: Vec<TimelineSegment>) -> Result<SolutionTimeline> {
        validate(&segments)?;
        let (peak_time, value) = argmax_segments(&segments);
        Ok(SolutionTimeline { segments, value, peak_time })
    }

    pub fn mode(&self) -> Arithmetic {
        self.value.mode()
    }

    /// Peak total disk area.
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.value.to_f64()
    }

    /// Index of the segment in force at `t`; at a shared boundary the later one.
    pub fn segment_index_at(&self, t: &Real) -> usize {
        let k = self.segments.partition_point(|s| s.t_start.cmp_strict(t) != Ordering::Greater);
        k.saturating_sub(1)
    }

    /// Times at which the segment changes, excluding 0 and 1.
    pub fn boundaries(&self) -> Vec<Real> {
        self.segments.iter().skip(1).map(|s| s.t_start.clone()).collect()
    }
}

fn validate(segments: &[TimelineSegment]) -> Result<()> {
    let bad = |m: &str| Err(KdcError::Invalid(format!("timeline: {m}")));
    let (Some(first), Some(last)) = (segments.first(), segments.last()) else {
        return bad("no segments");
    };
    let mode = first.t_start.mode();
    if first.t_start.cmp_strict(&Real::zero(mode)) != Ordering::Equal {
        return bad("does not start at 0");
    }
    if last.t_end.cmp_strict(&Real::one(mode)) != Ordering::Equal {
        return bad("does not end at 1");
    }
    for w in segments.windows(2) {
        if w[0].t_end.cmp_strict(&w[1].t_start) != Ordering::Equal {
            return bad("gap or overlap between segments");
        }
    }
    if segments.iter().any(|s| s.t_start.cmp_strict(&s.t_end) == Ordering::Greater) {
        return bad("segment ends before it starts");
    }
    Ok(())
}

/// Objective value at `t` (without `π`).
pub fn timeline_cost(tl: &SolutionTimeline, t: &Real) -> Result<Real> {
    let mode = t.mode();
    if t.cmp_strict(&Real::zero(mode)) == Ordering::Less || t.cmp_strict(&Real::one(mode)) == Ordering::Greater {
        return Err(KdcError::Invalid(format!("time {t} outside [0, 1]")));
    }
    Ok(tl.segments[tl.segment_index_at(t)].objective.eval(t))
}

/// Peak time and value. Objectives open upward, so only segment endpoints
/// need checking; ties go to the smallest time.
pub fn argmax_timeline(tl: &SolutionTimeline) -> (Real, Real) {
    (tl.peak_time.clone(), tl.value.clone())
}

fn argmax_segments(segments: &[TimelineSegment]) -> (Real, Real) {
    let mut best: Option<(Real, Real)> = None;
    for s in segments {
        for t in [&s.t_start, &s.t_end] {
            let v = s.objective.eval(t);
            if best.as_ref().map_or(true, |(_, bv)| v.cmp_strict(bv) == Ordering::Greater) {
                best = Some((t.clone(), v));
            }
        }
    }
    best.expect("nonempty timeline")
}

pub use crate::geometry::intersect_quadratics;

/// Pointwise minimum of two timelines. Where both cost the same the first
/// argument's assignment is kept.
pub fn merge_lower_envelope(a: &SolutionTimeline, b: &SolutionTimeline) -> SolutionTimeline {
    merge_window(a, &b.segments)
}

/// Pointwise minimum of `a` and a contiguous run of segments `b` that may
/// cover only part of `[0, 1]`; outside `b`'s window `a` is kept.
pub fn merge_window(a: &SolutionTimeline, b: &[TimelineSegment]) -> SolutionTimeline {
    let mut out = Builder::default();
    let (Some(bf), Some(bl)) = (b.first(), b.last()) else {
        return a.clone();
    };
    let (lo, hi) = (&bf.t_start, &bl.t_end);
    let mut j = 0;
    for sa in &a.segments {
        // part of sa before b's window
        let pre_end = min_t(&sa.t_end, lo);
        if lt(&sa.t_start, &pre_end) {
            out.push(&sa.t_start, &pre_end, sa);
        }
        // overlap with b's window
        let mut x = max_t(&sa.t_start, lo);
        let a_in_end = min_t(&sa.t_end, hi);
        while lt(&x, &a_in_end) {
            while j < b.len() && !lt(&x, &b[j].t_end) {
                j += 1;
            }
            if j == b.len() {
                break;
            }
            let y = min_t(&a_in_end, &b[j].t_end);
            merge_piece(&mut out, &x, &y, sa, &b[j]);
            x = y;
        }
        // part after the window
        let post_start = max_t(&sa.t_start, hi);
        if lt(&post_start, &sa.t_end) {
            out.push(&post_start, &sa.t_end, sa);
        }
    }
    let segments = out.finish();
    SolutionTimeline::new(segments).expect("merging contiguous timelines stays contiguous")
}

fn lt(a: &Real, b: &Real) -> bool {
    a.cmp_strict(b) == Ordering::Less
}

fn min_t(a: &Real, b: &Real) -> Real {
    if lt(b, a) {
        b.clone()
    } else {
        a.clone()
    }
}

fn max_t(a: &Real, b: &Real) -> Real {
    if lt(a, b) {
        b.clone()
    } else {
        a.clone()
    }
}

/// Split `[x, y]` at the crossings of the two objectives and keep the lower one.
fn merge_piece(out: &mut Builder, x: &Real, y: &Real, sa: &TimelineSegment, sb: &TimelineSegment) {
    let h = sa.objective.sub(&sb.objective);
    let scale = sa.objective.magnitude().max(sb.objective.magnitude()).max(1.0);
    let mut cuts = vec![x.clone()];
    for r in h.roots_in_scaled(x, y, scale).points() {
        let inside = match (r, x, y) {
            (Real::Exact(_), _, _) if x.is_exact() => lt(x, r) && lt(r, y),
            _ => {
                let v = r.to_f64();
                v > x.to_f64() + TIME_TOL && v < y.to_f64() - TIME_TOL
            }
        };
        if inside {
            cuts.push(r.clone());
        }
    }
    cuts.push(y.clone());
    for w in cuts.windows(2) {
        let pick_b = cheaper_is_b(&h, &w[0], &w[1], scale);
        out.push(&w[0], &w[1], if pick_b { sb } else { sa });
    }
}

/// Does `h = fa − fb` stay positive on the open piece `(u, v)`?
fn cheaper_is_b(h: &QuadraticPoly, u: &Real, v: &Real, scale: f64) -> bool {
    if u.is_exact() && v.is_exact() {
        // no crossing inside, so the sign just right of u holds throughout
        let s = h.eval(u).sign();
        if s != 0 {
            return s > 0;
        }
        let d = h.derivative_at(u).sign();
        if d != 0 {
            return d > 0;
        }
        return h.a.sign() > 0;
    }
    let (uf, vf) = (u.to_f64(), v.to_f64());
    let p = h.eval_f64(uf + (vf - uf) / 3.0);
    let q = h.eval_f64(uf + 2.0 * (vf - uf) / 3.0);
    let x = if p.abs() >= q.abs() { p } else { q };
    x > crate::geometry::EPS * scale * 1e-3
}

#[derive(Default)]
struct Builder {
    segs: Vec<TimelineSegment>,
}

impl Builder {
    fn push(&mut self, u: &Real, v: &Real, src: &TimelineSegment) {
        if u.cmp_strict(v) != Ordering::Less {
            return;
        }
        let tiny = !u.is_exact() && v.to_f64() - u.to_f64() < TIME_TOL;
        if let Some(last) = self.segs.last_mut() {
            if last.same_source(src) || tiny {
                last.t_end = v.clone();
                return;
            }
        }
        self.segs.push(TimelineSegment {
            t_start: u.clone(),
            t_end: v.clone(),
            assignment: src.assignment.clone(),
            supports: src.supports.clone(),
            objective: src.objective.clone(),
        });
    }

    fn finish(self) -> Vec<TimelineSegment> {
        self.segs
    }
}
