use std::cmp::Ordering;

use crate::envelope::TimelineSegment;
use crate::geometry::{MovingInstance, EPS};

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Largest `(d² − r²) / max(1, r², d²)` seen, or 0.
    pub worst_violation: f64,
    /// Time and object of the worst violation.
    pub worst_at: Option<(f64, usize)>,
}

/// Sample `samples` evenly spaced times and check that every object is
/// within the disk of its assigned station. Radii come from the segment's
/// support objects; positions are recomputed from the coordinates.
pub fn check_feasible(segments: &[TimelineSegment], inst: &MovingInstance, samples: usize) -> FeasibilityReport {
    let mut report = FeasibilityReport { feasible: true, worst_violation: 0.0, worst_at: None };
    if inst.n() == 0 || segments.is_empty() {
        return report;
    }
    let lo = segments[0].t_start.to_f64();
    let hi = segments[segments.len() - 1].t_end.to_f64();
    let count = samples.max(2);
    for k in 0..count {
        let t = lo + (hi - lo) * k as f64 / (count - 1) as f64;
        let idx = segments.partition_point(|s| s.t_start.to_f64().total_cmp(&t) != Ordering::Greater).saturating_sub(1);
        let seg = &segments[idx];
        let pos = inst.positions_at(t);
        let radius: Vec<f64> = seg
            .supports
            .iter()
            .enumerate()
            .map(|(s, sup)| sup.map_or(0.0, |j| inst.stations[s].dist_sq(&pos[j])))
            .collect();
        for (j, p) in pos.iter().enumerate() {
            let Some(&s) = seg.assignment.get(j) else {
                report.feasible = false;
                report.worst_violation = f64::INFINITY;
                report.worst_at = Some((t, j));
                continue;
            };
            let d = inst.stations[s].dist_sq(p);
            let r = radius[s];
            let v = (d - r) / 1f64.max(r).max(d);
            if v > report.worst_violation {
                report.worst_violation = v;
                report.worst_at = Some((t, j));
            }
        }
    }
    report.feasible = report.worst_violation <= EPS;
    report
}
