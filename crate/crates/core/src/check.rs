//! Independent verification of a stored result against its instance.

use std::cmp::Ordering;

use serde::Serialize;

use crate::envelope::SolutionTimeline;
use crate::geometry::{squared_distance_poly, MovingInstance, QuadraticPoly, Real};
use crate::instances::instance_digest;
use crate::kinetic::check_feasible;
use crate::result_file::ResultFile;
use crate::static_cover::relative_gap;
use crate::{KdcError, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub segments: usize,
    pub worst_violation: f64,
    /// First problem found, if any.
    pub failure: Option<String>,
}

/// Verify `result` against `inst`: contiguity over `[0, 1]`, objective
/// coefficients re-derived from the stored supports, supports belonging to
/// their stations, feasibility at `samples` evenly spaced times, and the
/// stored bounds. An instance that does not match the result is an error
/// rather than a failed check.
pub fn check_result(result: &ResultFile, inst: &MovingInstance, samples: usize) -> Result<CheckReport> {
    let digest = instance_digest(inst);
    if result.instance_digest != digest {
        return Err(KdcError::Invalid(format!(
            "result belongs to instance {:?} ({}), not this one ({})",
            result.instance_id, result.instance_digest, digest
        )));
    }
    let mut report = CheckReport { passed: false, segments: result.segments.len(), worst_violation: 0.0, failure: None };
    match verify(result, inst, samples, &mut report) {
        Ok(()) => report.passed = true,
        Err(msg) => report.failure = Some(msg),
    }
    Ok(report)
}

fn verify(result: &ResultFile, inst: &MovingInstance, samples: usize, report: &mut CheckReport) -> Result<(), String> {
    let mode = result.mode();
    let segs = result.raw_segments().map_err(|e| e.to_string())?;
    if segs.is_empty() {
        return Err("no segments".into());
    }
    let (zero, one) = (Real::zero(mode), Real::one(mode));
    if segs[0].t_start.cmp_strict(&zero) != Ordering::Equal {
        return Err(format!("segment 0 starts at {} instead of 0", segs[0].t_start));
    }
    if segs[segs.len() - 1].t_end.cmp_strict(&one) != Ordering::Equal {
        return Err(format!("last segment ends at {} instead of 1", segs[segs.len() - 1].t_end));
    }
    for (i, s) in segs.iter().enumerate() {
        if s.t_start.cmp_strict(&s.t_end) != Ordering::Less {
            return Err(format!("segment {i} is empty or reversed"));
        }
        if let Some(next) = segs.get(i + 1) {
            if s.t_end.cmp_strict(&next.t_start) != Ordering::Equal {
                return Err(format!("gap or overlap between segments {i} and {}", i + 1));
            }
        }
        if s.assignment.len() != inst.n() || s.supports.len() != inst.m() {
            return Err(format!(
                "segment {i} sizes {} objects / {} stations, instance has {} / {}",
                s.assignment.len(),
                s.supports.len(),
                inst.n(),
                inst.m()
            ));
        }
        if let Some(j) = s.assignment.iter().position(|&st| st >= inst.m()) {
            return Err(format!("segment {i}: object {j} assigned to missing station {}", s.assignment[j]));
        }
        let mut expected = QuadraticPoly::zero(mode);
        for (st, sup) in s.supports.iter().enumerate() {
            let has_members = s.assignment.contains(&st);
            match sup {
                Some(j) if *j >= inst.n() || s.assignment[*j] != st => {
                    return Err(format!("segment {i}: support {j} of station {st} is not assigned to it"))
                }
                Some(j) => expected = expected.add(&squared_distance_poly(&inst.stations[st], &inst.objects[*j], mode)),
                None if has_members => return Err(format!("segment {i}: station {st} has objects but no support")),
                None => {}
            }
        }
        if !same_poly(&expected, &s.objective) {
            return Err(format!(
                "segment {i}: stored objective [{}, {}, {}] differs from re-derived [{}, {}, {}]",
                s.objective.a, s.objective.b, s.objective.c, expected.a, expected.b, expected.c
            ));
        }
    }
    let feas = check_feasible(&segs, inst, samples);
    report.worst_violation = feas.worst_violation;
    if !feas.feasible {
        return Err(format!("infeasible: worst violation {:.3e} at {:?}", feas.worst_violation, feas.worst_at));
    }
    let tl = SolutionTimeline::new(segs).map_err(|e| e.to_string())?;
    let upper = result.upper_value().map_err(|e| e.to_string())?;
    let lower = result.lower_value().map_err(|e| e.to_string())?;
    if !close(&tl.value, &upper) {
        return Err(format!("stored upper {} but the timeline peaks at {}", upper, tl.value));
    }
    if lower.cmp_strict(&upper) == Ordering::Greater && !close(&lower, &upper) {
        return Err(format!("lower {lower} exceeds upper {upper}"));
    }
    let gap = relative_gap(&upper, &lower);
    match result.gap {
        Some(g) if (g - gap).abs() > 1e-12 * gap.max(1.0) => Err(format!("stored gap {g} but bounds give {gap}")),
        None if gap.is_finite() => Err(format!("gap missing though bounds give {gap}")),
        _ => Ok(()),
    }
}

fn close(a: &Real, b: &Real) -> bool {
    if a.is_exact() && b.is_exact() {
        return a.cmp_strict(b) == Ordering::Equal;
    }
    let (x, y) = (a.to_f64(), b.to_f64());
    (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
}

fn same_poly(p: &QuadraticPoly, q: &QuadraticPoly) -> bool {
    close(&p.a, &q.a) && close(&p.b, &q.b) && close(&p.c, &q.c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point2, Trajectory};
    use crate::minmax::{solve_minmax, SolverConfig};

    fn solved(exact: bool) -> (MovingInstance, ResultFile) {
        let inst = MovingInstance::new(
            vec![Point2::new(0.0, 0.0), Point2::new(10.0, 0.0)],
            vec![Trajectory::new(Point2::new(2.0, 0.0), Point2::new(8.0, 0.0)), Trajectory::new(Point2::new(5.0, 5.0), Point2::new(5.0, -5.0))],
        );
        let config = SolverConfig { exact_arithmetic: exact, ..SolverConfig::default() };
        let r = solve_minmax(&inst, &config).unwrap();
        let f = ResultFile::new(&r, "exact", &config, "t", &instance_digest(&inst));
        (inst, f)
    }

    #[test]
    fn fresh_results_pass() {
        for exact in [false, true] {
            let (inst, f) = solved(exact);
            let rep = check_result(&f, &inst, 1000).unwrap();
            assert!(rep.passed, "{:?}", rep.failure);
        }
    }

    #[test]
    fn tampering_is_caught() {
        let (inst, f) = solved(false);
        let mut bad = f.clone();
        let last = bad.segments.len() - 1;
        bad.segments[last].objective[2] = "12345".into();
        let rep = check_result(&bad, &inst, 100).unwrap();
        assert!(rep.failure.unwrap().contains(&format!("segment {last}")));

        let mut bad = f.clone();
        bad.segments[0].t_end = "0.4".into();
        if bad.segments.len() > 1 {
            assert!(!check_result(&bad, &inst, 100).unwrap().passed);
        }

        let mut bad = f.clone();
        bad.upper = "1".into();
        assert!(!check_result(&bad, &inst, 100).unwrap().passed);

        let mut other = inst.clone();
        other.stations[0].x = 0.5;
        assert!(check_result(&f, &other, 100).is_err());
    }
}
