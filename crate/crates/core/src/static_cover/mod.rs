//! Disk cover at a fixed time.
//!
//! Every optimal cover uses *candidate disks*: a station together with the
//! object that sits on its boundary. For each station the candidates are
//! nested, so a solution is one radius level per station.

mod branch_bound;
mod brute;
mod candidates;
mod levels;
mod nn;

use std::time::Duration;

pub use branch_bound::BranchAndBound;
pub use brute::{brute_force_cover, BruteForce, BRUTE_FORCE_MAX_N};
pub use candidates::{enumerate_candidates, enumerate_candidates_at, CandidateDisk, CandidateSet};
pub use nn::{nn_heuristic, NearestNeighbor};

use levels::Levels;
use crate::geometry::Real;
use crate::{KdcError, Result};

/// What a backend hands back: the chosen candidates and a certified lower
/// bound on the optimal cost (zero when the backend certifies nothing).
#[derive(Clone, Debug)]
pub struct BackendOutcome {
    pub selected: Vec<usize>,
    pub lower_bound: Real,
    pub timed_out: bool,
}

/// A fixed-time disk cover solver over a candidate set.
///
/// This is the extension point for plugging in an external MILP solver.
/// Inputs are the candidates, a relative target gap and an optional time
/// limit; the outcome must cover every object and its lower bound must not
/// exceed the optimal cost.
pub trait SolverBackend: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether `lower_bound` is meaningful (an exact method) or always zero.
    fn certifies(&self) -> bool;

    fn solve(&self, candidates: &CandidateSet, target_gap: f64, time_limit: Option<Duration>)
        -> Result<BackendOutcome>;
}

/// A fixed-time cover. Costs are kept as sums of squared radii; the disk area
/// is `π` times that.
#[derive(Clone, Debug)]
pub struct StaticSolution {
    /// Station serving each object.
    pub assignment: Vec<usize>,
    /// Squared radius per station; zero for unused stations.
    pub radius_sq: Vec<Real>,
    /// `Σ radius_sq`.
    pub cost: Real,
    pub lower_bound: Real,
    /// `(cost − lower_bound) / lower_bound`; 0 when both vanish, ∞ without a bound.
    pub gap: f64,
    /// Indices into the candidate set the solution was built from.
    pub selected: Vec<usize>,
    pub timed_out: bool,
}

impl StaticSolution {
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.cost.to_f64()
    }

    /// Worst coverage violation `max(0, d² − r²)` over objects, given the squared
    /// distances at the solve time.
    pub fn max_violation(&self, dist_sq: &[Vec<Real>]) -> f64 {
        self.assignment
            .iter()
            .enumerate()
            .map(|(j, &s)| (dist_sq[s][j].to_f64() - self.radius_sq[s].to_f64()).max(0.0))
            .fold(0.0, f64::max)
    }
}

pub fn relative_gap(upper: &Real, lower: &Real) -> f64 {
    let (u, l) = (upper.to_f64(), lower.to_f64());
    if l <= 0.0 {
        if u <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        ((u - l) / l).max(0.0)
    }
}

/// Turn a backend's selection into an assignment: each object goes to the
/// nearest selected station whose disk covers it (lower index on ties), and
/// each station's radius shrinks to its farthest assigned object.
pub fn solution_from_selection(cands: &CandidateSet, outcome: BackendOutcome) -> Result<StaticSolution> {
    let lv = Levels::build(cands)?;
    if let Some(&bad) = outcome.selected.iter().find(|&&c| c >= cands.len()) {
        return Err(KdcError::MalformedCandidates(format!("selected candidate {bad} out of range")));
    }
    let level = lv.levels_of(&outcome.selected);
    Ok(solution_from_levels(&lv, &level, outcome.lower_bound, outcome.timed_out)?)
}

pub(crate) fn solution_from_levels(lv: &Levels, level: &[u32], lower_bound: Real, timed_out: bool) -> Result<StaticSolution> {
    let mode = lower_bound.mode();
    let mut assignment = Vec::with_capacity(lv.n);
    let mut radius_sq = vec![Real::zero(mode); lv.m];
    let mut used = vec![0u32; lv.m];
    for j in 0..lv.n {
        let mut best: Option<(usize, &Real)> = None;
        for s in 0..lv.m {
            if !lv.covers(s, level[s], j) {
                continue;
            }
            let d = &lv.r2[s][lv.rank[s][j] as usize];
            if best.map_or(true, |(_, b)| d.cmp_strict(b) == std::cmp::Ordering::Less) {
                best = Some((s, d));
            }
        }
        let (s, d) = best.ok_or_else(|| KdcError::MalformedCandidates(format!("selection leaves object {j} uncovered")))?;
        assignment.push(s);
        radius_sq[s] = radius_sq[s].clone().max_strict(d.clone());
        used[s] = used[s].max(lv.rank[s][j]);
    }
    let cost = radius_sq.iter().fold(Real::zero(mode), |acc, r| acc + r);
    // shrinking to the assigned objects can only lower the cost
    let lower_bound = lower_bound.min_strict(cost.clone());
    let gap = relative_gap(&cost, &lower_bound);
    Ok(StaticSolution {
        assignment,
        radius_sq,
        cost,
        lower_bound,
        gap,
        selected: lv.selection(&used),
        timed_out,
    })
}

/// Solve a candidate set with the built-in branch-and-bound.
pub fn solve_exact(cands: &CandidateSet, target_gap: f64, time_limit: Option<Duration>) -> Result<StaticSolution> {
    let outcome = BranchAndBound::default().solve(cands, target_gap, time_limit)?;
    solution_from_selection(cands, outcome)
}

/// Solve with any backend.
pub fn solve_with(
    backend: &dyn SolverBackend,
    cands: &CandidateSet,
    target_gap: f64,
    time_limit: Option<Duration>,
) -> Result<StaticSolution> {
    let outcome = backend.solve(cands, target_gap, time_limit)?;
    solution_from_selection(cands, outcome)
}

#[cfg(test)]
mod tests;
