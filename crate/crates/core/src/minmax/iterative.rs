use std::cmp::Ordering;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::config::{scheduled_gap, SolverConfig};
use crate::envelope::{argmax_timeline, merge_window, SolutionTimeline, TimelineSegment};
use crate::geometry::{MovingInstance, QuadraticPoly, Real};
use crate::kinetic::{extend_with, Flags, KineticContext, StopAt};
use crate::static_cover::{enumerate_candidates_at, relative_gap, solve_with, SolverBackend, StaticSolution};
use crate::{KdcError, Result};

/// Wall-clock split and counters of one solve.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    /// Seconds spent in fixed-time solves.
    pub time_static: f64,
    /// Seconds spent extending assignments and merging timelines.
    pub time_extend_merge: f64,
    pub time_total: f64,
    pub static_solves: usize,
    pub events_processed: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Upper and lower bound within the target gap.
    Certified,
    /// The fixed-time solve at the peak did not beat the timeline.
    NoImprovement,
    TimeLimit,
    IterationCap,
    /// Fixed grid finished (baseline).
    Completed,
}

/// Outcome of a kinetic solve. `upper` and `lower` are sums of squared radii;
/// multiply by `π` for areas.
#[derive(Clone, Debug)]
pub struct KineticResult {
    pub timeline: SolutionTimeline,
    pub upper: Real,
    pub lower: Real,
    /// `(upper − lower) / lower`; infinite when nothing is certified.
    pub gap: f64,
    pub iterations: usize,
    pub stats: Stats,
    pub timed_out: bool,
    pub stop_reason: StopReason,
}

impl KineticResult {
    pub fn upper_area(&self) -> f64 {
        std::f64::consts::PI * self.upper.to_f64()
    }

    pub fn lower_area(&self) -> f64 {
        std::f64::consts::PI * self.lower.to_f64()
    }
}

/// Iterative min-max solve with the backend named in `config`.
pub fn solve_minmax(inst: &MovingInstance, config: &SolverConfig) -> Result<KineticResult> {
    let registry = crate::registry::Registry::builtin();
    let backend = registry.backend(&config.static_backend)?;
    solve_minmax_with(inst, config, backend.as_ref())
}

/// Iterative min-max solve with an explicit fixed-time backend.
///
/// Start from a fixed-time solution at `t = 0` carried over all of `[0, 1]`.
/// Then repeatedly solve at the timeline's peak and, if that beats the
/// timeline there, carry the new assignment both ways and keep the pointwise
/// cheaper of the two.
pub fn solve_minmax_with(inst: &MovingInstance, config: &SolverConfig, backend: &dyn SolverBackend) -> Result<KineticResult> {
    config.validate()?;
    inst.validate()?;
    let started = Instant::now();
    let deadline = started + Duration::from_secs_f64(config.time_limit);
    let mode = config.arithmetic();
    let ctx = KineticContext::new(inst, mode);
    let mut run = Run::new(&ctx, backend, deadline);

    if inst.n() == 0 {
        return Ok(empty_result(inst, mode, started));
    }

    let zero = Real::zero(mode);
    let certifies = backend.certifies();
    let seed = run.static_at(&zero, scheduled_gap(f64::INFINITY, config))?;
    let mut lower = if certifies { seed.lower_bound.clone() } else { zero.clone() };
    let mut timeline = run.extend_full(&seed.assignment, &zero, config.flags)?;

    let mut iterations = 0;
    let stop_reason = loop {
        let (t_peak, upper) = argmax_timeline(&timeline);
        let gap = relative_gap(&upper, &lower);
        if certifies && certified(&upper, &lower, config.target_gap) {
            break StopReason::Certified;
        }
        if run.timed_out || Instant::now() >= deadline {
            run.timed_out = true;
            break StopReason::TimeLimit;
        }
        if iterations >= config.max_iterations {
            break StopReason::IterationCap;
        }
        iterations += 1;

        let mut g = if certifies { scheduled_gap(gap, config) } else { config.target_gap };
        let mut sol = run.static_at(&t_peak, g)?;
        if certifies {
            lower = lower.max_strict(sol.lower_bound.clone());
        }
        // before giving up, make sure a coarse solve did not hide an improvement
        while !improves(&sol.cost, &upper) && certifies && g > config.target_gap && !run.timed_out {
            g = config.target_gap;
            sol = run.static_at(&t_peak, g)?;
            lower = lower.max_strict(sol.lower_bound.clone());
        }
        if !improves(&sol.cost, &upper) {
            if certifies && certified(&upper, &lower, config.target_gap) {
                break StopReason::Certified;
            }
            if run.timed_out {
                break StopReason::TimeLimit;
            }
            break StopReason::NoImprovement;
        }
        timeline = run.improve(&timeline, &sol.assignment, &t_peak, config.flags);
    };

    let (_, upper) = argmax_timeline(&timeline);
    let lower = if certifies { lower.min_strict(upper.clone()) } else { zero };
    let gap = if certifies { relative_gap(&upper, &lower) } else { f64::INFINITY };
    let mut stats = run.stats;
    stats.time_total = started.elapsed().as_secs_f64();
    Ok(KineticResult {
        timeline,
        upper,
        lower,
        gap,
        iterations,
        stats,
        timed_out: run.timed_out,
        stop_reason,
    })
}

/// `upper ≤ lower · (1 + target)`.
fn certified(upper: &Real, lower: &Real, target: f64) -> bool {
    if lower.sign() <= 0 {
        return upper.sign() <= 0;
    }
    let bound = lower.scale_by(1.0 + target);
    if upper.is_exact() {
        upper.cmp_strict(&bound) != Ordering::Greater
    } else {
        upper.to_f64() <= bound.to_f64() * (1.0 + 1e-12)
    }
}

/// Is `cost` strictly below `peak`? Float costs must win by more than rounding.
fn improves(cost: &Real, peak: &Real) -> bool {
    if cost.is_exact() {
        cost.cmp_strict(peak) == Ordering::Less
    } else {
        let (c, p) = (cost.to_f64(), peak.to_f64());
        c < p - 1e-12 * p.abs().max(1.0)
    }
}

pub(crate) fn empty_result(inst: &MovingInstance, mode: crate::Arithmetic, started: Instant) -> KineticResult {
    let seg = TimelineSegment {
        t_start: Real::zero(mode),
        t_end: Real::one(mode),
        assignment: Arc::new(Vec::new()),
        supports: Arc::new(vec![None; inst.m()]),
        objective: QuadraticPoly::zero(mode),
    };
    let timeline = SolutionTimeline::new(vec![seg]).expect("single full segment");
    KineticResult {
        timeline,
        upper: Real::zero(mode),
        lower: Real::zero(mode),
        gap: 0.0,
        iterations: 0,
        stats: Stats { time_total: started.elapsed().as_secs_f64(), ..Stats::default() },
        timed_out: false,
        stop_reason: StopReason::Certified,
    }
}

/// Mutable state shared by the solver loop and the baseline.
pub(crate) struct Run<'a> {
    pub ctx: &'a KineticContext,
    pub backend: &'a dyn SolverBackend,
    pub deadline: Instant,
    pub stats: Stats,
    /// Earlier fixed-time results, reused when the peak lands on a time
    /// already solved at a gap at least as tight.
    cache: Vec<(Real, f64, StaticSolution)>,
    pub timed_out: bool,
}

impl<'a> Run<'a> {
    pub fn new(ctx: &'a KineticContext, backend: &'a dyn SolverBackend, deadline: Instant) -> Self {
        Run { ctx, backend, deadline, stats: Stats::default(), cache: Vec::new(), timed_out: false }
    }

    pub fn static_at(&mut self, t: &Real, gap: f64) -> Result<StaticSolution> {
        if let Some((_, _, sol)) =
            self.cache.iter().find(|(ct, cg, _)| *cg <= gap && ct.cmp_strict(t) == Ordering::Equal)
        {
            return Ok(sol.clone());
        }
        let clock = Instant::now();
        let remaining = self.deadline.saturating_duration_since(clock);
        let cands = enumerate_candidates_at(&self.ctx.polys.at(t));
        let sol = solve_with(self.backend, &cands, gap, Some(remaining))?;
        self.stats.time_static += clock.elapsed().as_secs_f64();
        self.stats.static_solves += 1;
        if sol.timed_out {
            self.timed_out = true;
        } else {
            self.cache.push((t.clone(), gap, sol.clone()));
        }
        Ok(sol)
    }

    /// Carry `assignment` from `t_anchor` over all of `[0, 1]`.
    pub fn extend_full(&mut self, assignment: &[usize], t_anchor: &Real, flags: Flags) -> Result<SolutionTimeline> {
        let clock = Instant::now();
        let segments = self.both_ways(assignment, t_anchor, flags, None);
        let tl = SolutionTimeline::new(segments);
        self.stats.time_extend_merge += clock.elapsed().as_secs_f64();
        tl.map_err(|e| KdcError::Invalid(format!("extension did not cover [0, 1]: {e}")))
    }

    /// Carry `assignment` from `t_anchor` both ways and merge it into `timeline`.
    pub fn improve(&mut self, timeline: &SolutionTimeline, assignment: &[usize], t_anchor: &Real, flags: Flags) -> SolutionTimeline {
        let clock = Instant::now();
        let incumbent = if flags.part_ext { Some(timeline) } else { None };
        let window = self.both_ways(assignment, t_anchor, flags, incumbent);
        let merged = merge_window(timeline, &window);
        self.stats.time_extend_merge += clock.elapsed().as_secs_f64();
        merged
    }

    /// Backward then forward extension from `t_anchor`, as one contiguous
    /// run of segments in time order.
    fn both_ways(
        &mut self,
        assignment: &[usize],
        t_anchor: &Real,
        flags: Flags,
        incumbent: Option<&SolutionTimeline>,
    ) -> Vec<TimelineSegment> {
        let mode = self.ctx.mode();
        let stop = match incumbent {
            Some(tl) => StopAt::Crossing(tl),
            None => StopAt::End,
        };
        let mut out = Vec::new();
        let zero = Real::zero(mode);
        let one = Real::one(mode);
        if t_anchor.cmp_strict(&zero) == Ordering::Greater {
            let back = extend_with(self.ctx, assignment, t_anchor, &zero, flags, stop);
            self.stats.events_processed += back.events.len();
            out.extend(back.segments);
        }
        if t_anchor.cmp_strict(&one) == Ordering::Less {
            let fwd = extend_with(self.ctx, assignment, t_anchor, &one, flags, stop);
            self.stats.events_processed += fwd.events.len();
            out.extend(fwd.segments);
        }
        out
    }
}
