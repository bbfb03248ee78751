use std::cmp::Ordering;
use std::sync::Arc;

use super::dedup::dedup_in_place;
use super::events::{directional_argmax, handover_in, right_sign, roots_ahead, sooner, support_change_in};
use super::{Assignment, Direction, EventKind, Flags, KineticEvent};
use crate::envelope::{SolutionTimeline, TimelineSegment};
use crate::geometry::{Arithmetic, DistancePolys, MovingInstance, QuadraticPoly, Real, EPS};

/// Immutable per-instance data shared by every extension run.
#[derive(Clone, Debug)]
pub struct KineticContext {
    pub polys: DistancePolys,
}

impl KineticContext {
    pub fn new(inst: &MovingInstance, mode: Arithmetic) -> Self {
        KineticContext { polys: DistancePolys::new(inst, mode) }
    }

    pub fn mode(&self) -> Arithmetic {
        self.polys.mode
    }

    pub fn m(&self) -> usize {
        self.polys.m()
    }

    /// `Σ_s f_{s, support(s)}`.
    pub fn objective(&self, supports: &[Option<usize>]) -> QuadraticPoly {
        supports
            .iter()
            .enumerate()
            .filter_map(|(s, sup)| sup.map(|j| self.polys.get(s, j)))
            .fold(QuadraticPoly::zero(self.mode()), |acc, p| acc.add(p))
    }

    /// Farthest member of each station, looking along `dir` from `t`.
    pub fn supports_at(&self, assignment: &[usize], t: &Real, dir: Direction) -> Vec<Option<usize>> {
        let members = members_by_station(assignment, self.m());
        (0..self.m()).map(|s| directional_argmax(&self.polys, s, &members[s], t, dir)).collect()
    }
}

fn members_by_station(assignment: &[usize], m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); m];
    for (j, &s) in assignment.iter().enumerate() {
        out[s].push(j);
    }
    out
}

/// When to give up extending.
#[derive(Clone, Copy, Debug)]
pub enum StopAt<'a> {
    /// Run to `t_stop`.
    End,
    /// Stop where the new solution first costs at least as much as this one.
    Crossing(&'a SolutionTimeline),
}

#[derive(Clone, Debug)]
pub struct Extension {
    /// In increasing time order whatever the direction.
    pub segments: Vec<TimelineSegment>,
    pub events: Vec<KineticEvent>,
    /// Where the run ended: `t_stop`, or the crossing with the incumbent.
    pub reached: Real,
}

/// Extend `assignment` from `t_anchor` toward `t_stop`.
pub fn extend(
    assignment: &Assignment,
    t_anchor: &Real,
    direction: Direction,
    t_stop: &Real,
    flags: Flags,
    inst: &MovingInstance,
) -> Vec<TimelineSegment> {
    debug_assert_eq!(direction, Direction::of(t_anchor, t_stop));
    let ctx = KineticContext::new(inst, t_anchor.mode());
    extend_with(&ctx, assignment, t_anchor, t_stop, flags, StopAt::End).segments
}

/// As [`extend`], on a prepared context, optionally halting at the first
/// crossing with an incumbent timeline.
pub fn extend_with(
    ctx: &KineticContext,
    assignment: &[usize],
    t_anchor: &Real,
    t_stop: &Real,
    flags: Flags,
    stop: StopAt<'_>,
) -> Extension {
    Extender::new(ctx, assignment, t_anchor, t_stop, flags).run(stop)
}

struct Extender<'a> {
    ctx: &'a KineticContext,
    dir: Direction,
    t_stop: Real,
    flags: Flags,
    assignment: Vec<usize>,
    members: Vec<Vec<usize>>,
    support: Vec<Option<usize>>,
    /// Cached next support change per station; `None` means stale.
    sc: Vec<Option<Option<Real>>>,
    /// Cached next handover per ordered station pair.
    ho: Vec<Vec<Option<Option<Real>>>>,
    t: Real,
    seg_start: Real,
    snap: (Arc<Vec<usize>>, Arc<Vec<Option<usize>>>, QuadraticPoly),
    segments: Vec<TimelineSegment>,
    events: Vec<KineticEvent>,
}

impl<'a> Extender<'a> {
    fn new(ctx: &'a KineticContext, assignment: &[usize], t_anchor: &Real, t_stop: &Real, flags: Flags) -> Self {
        let m = ctx.m();
        let dir = Direction::of(t_anchor, t_stop);
        let members = members_by_station(assignment, m);
        let support = (0..m).map(|s| directional_argmax(&ctx.polys, s, &members[s], t_anchor, dir)).collect();
        let mut ex = Extender {
            ctx,
            dir,
            t_stop: t_stop.clone(),
            flags,
            assignment: assignment.to_vec(),
            members,
            support,
            sc: vec![None; m],
            ho: vec![vec![None; m]; if flags.imp_ext { m } else { 0 }],
            t: t_anchor.clone(),
            seg_start: t_anchor.clone(),
            snap: (Arc::new(vec![]), Arc::new(vec![]), QuadraticPoly::zero(ctx.mode())),
            segments: Vec::new(),
            events: Vec::new(),
        };
        if flags.no_dup {
            ex.dedup();
        }
        ex.refresh_snapshot();
        ex
    }

    fn refresh_snapshot(&mut self) {
        let obj = self.ctx.objective(&self.support);
        self.snap = (Arc::new(self.assignment.clone()), Arc::new(self.support.clone()), obj);
    }

    fn close_segment(&mut self, at: &Real) {
        let (lo, hi) = match self.dir {
            Direction::Forward => (self.seg_start.clone(), at.clone()),
            Direction::Backward => (at.clone(), self.seg_start.clone()),
        };
        if lo.cmp_strict(&hi) == Ordering::Less {
            self.segments.push(TimelineSegment {
                t_start: lo,
                t_end: hi,
                assignment: self.snap.0.clone(),
                supports: self.snap.1.clone(),
                objective: self.snap.2.clone(),
            });
        }
        self.seg_start = at.clone();
    }

    fn invalidate(&mut self, s: usize) {
        self.sc[s] = None;
        if self.flags.imp_ext {
            for k in 0..self.ctx.m() {
                self.ho[s][k] = None;
                self.ho[k][s] = None;
            }
        }
    }

    fn dedup(&mut self) -> bool {
        let moves = dedup_in_place(
            &self.ctx.polys,
            &mut self.assignment,
            &mut self.members,
            &mut self.support,
            &self.t,
            self.dir,
        );
        for &(object, from, to) in &moves {
            self.events.push(KineticEvent {
                time: self.t.clone(),
                kind: EventKind::Handover { from_station: from, to_station: to, object },
            });
            self.invalidate(from);
            self.invalidate(to);
        }
        !moves.is_empty()
    }

    fn support_change(&mut self, s: usize) -> Option<Real> {
        if self.sc[s].is_none() {
            let v = self.support[s].and_then(|p| {
                support_change_in(&self.ctx.polys, s, &self.members[s], p, &self.t, &self.t_stop, self.dir)
            });
            self.sc[s] = Some(v);
        }
        self.sc[s].clone().flatten()
    }

    fn handover(&mut self, s1: usize, s2: usize) -> Option<Real> {
        if self.ho[s1][s2].is_none() {
            let v = self.support[s1].and_then(|b| {
                handover_in(
                    &self.ctx.polys,
                    s1,
                    &self.members[s1],
                    b,
                    s2,
                    self.support[s2],
                    &self.t,
                    &self.t_stop,
                    self.dir,
                )
            });
            self.ho[s1][s2] = Some(v);
        }
        self.ho[s1][s2].clone().flatten()
    }

    fn same_time(&self, a: &Real, b: &Real) -> bool {
        if a.is_exact() && b.is_exact() {
            a.cmp_strict(b) == Ordering::Equal
        } else {
            (a.to_f64() - b.to_f64()).abs() <= EPS
        }
    }

    fn run(mut self, stop: StopAt<'_>) -> Extension {
        let m = self.ctx.m();
        loop {
            let mut next: Option<Real> = None;
            let dir = self.dir;
            let take = |x: Option<Real>, next: &mut Option<Real>| {
                if let Some(x) = x {
                    if next.as_ref().map_or(true, |n| sooner(&x, n, dir)) {
                        *next = Some(x);
                    }
                }
            };
            for s in 0..m {
                let v = self.support_change(s);
                take(v, &mut next);
            }
            if self.flags.imp_ext {
                for s1 in 0..m {
                    for s2 in 0..m {
                        if s1 != s2 {
                            let v = self.handover(s1, s2);
                            take(v, &mut next);
                        }
                    }
                }
            }
            let tau = next.unwrap_or_else(|| self.t_stop.clone());

            if let StopAt::Crossing(inc) = stop {
                if let Some(x) = first_crossing(&self.snap.2, inc, &self.t, &tau, self.dir) {
                    self.close_segment(&x);
                    return self.finish(x);
                }
            }
            if tau.cmp_strict(&self.t_stop) == Ordering::Equal {
                let end = self.t_stop.clone();
                self.close_segment(&end);
                return self.finish(end);
            }

            self.t = tau.clone();
            let mut touched = vec![false; m];
            for s in 0..m {
                let due = self.sc[s].clone().flatten().is_some_and(|x| self.same_time(&x, &tau));
                if !due {
                    continue;
                }
                self.sc[s] = None;
                let new = directional_argmax(&self.ctx.polys, s, &self.members[s], &tau, self.dir);
                if new != self.support[s] {
                    self.events.push(KineticEvent {
                        time: tau.clone(),
                        kind: EventKind::SupportChange {
                            station: s,
                            old_support: self.support[s].expect("a station with a pending change has members"),
                            new_support: new.expect("members do not vanish on a support change"),
                        },
                    });
                    self.support[s] = new;
                    touched[s] = true;
                }
            }
            if self.flags.imp_ext {
                for s1 in 0..m {
                    for s2 in 0..m {
                        if s1 == s2 {
                            continue;
                        }
                        let due = self.ho[s1][s2].clone().flatten().is_some_and(|x| self.same_time(&x, &tau));
                        if !due {
                            continue;
                        }
                        self.ho[s1][s2] = None;
                        if touched[s1] || touched[s2] {
                            continue;
                        }
                        let b = self.support[s1].expect("handover source has a support");
                        self.assignment[b] = s2;
                        self.members[s1].retain(|&j| j != b);
                        self.members[s2].push(b);
                        self.support[s1] = directional_argmax(&self.ctx.polys, s1, &self.members[s1], &tau, self.dir);
                        self.support[s2] = directional_argmax(&self.ctx.polys, s2, &self.members[s2], &tau, self.dir);
                        self.events.push(KineticEvent {
                            time: tau.clone(),
                            kind: EventKind::Handover { from_station: s1, to_station: s2, object: b },
                        });
                        touched[s1] = true;
                        touched[s2] = true;
                    }
                }
            }
            for s in 0..m {
                if touched[s] {
                    self.invalidate(s);
                }
            }
            let mut changed = touched.iter().any(|&x| x);
            if self.flags.no_dup {
                changed |= self.dedup();
            }
            if changed {
                self.close_segment(&tau);
                self.refresh_snapshot();
            }
        }
    }

    fn finish(mut self, reached: Real) -> Extension {
        if self.dir == Direction::Backward {
            self.segments.reverse();
        }
        Extension { segments: self.segments, events: self.events, reached }
    }
}

/// First time from `t` toward `tau` at which `objective` is no longer below
/// the incumbent.
fn first_crossing(objective: &QuadraticPoly, inc: &SolutionTimeline, t: &Real, tau: &Real, dir: Direction) -> Option<Real> {
    let (lo, hi) = match dir {
        Direction::Forward => (t, tau),
        Direction::Backward => (tau, t),
    };
    let mut idx: Vec<usize> = (0..inc.segments.len())
        .filter(|&k| {
            let s = &inc.segments[k];
            s.t_start.cmp_strict(hi) == Ordering::Less && s.t_end.cmp_strict(lo) == Ordering::Greater
        })
        .collect();
    if dir == Direction::Backward {
        idx.reverse();
    }
    for k in idx {
        let s = &inc.segments[k];
        let (u, v) = match dir {
            Direction::Forward => (max_r(&s.t_start, lo), min_r(&s.t_end, hi)),
            Direction::Backward => (min_r(&s.t_end, hi), max_r(&s.t_start, lo)),
        };
        let h = objective.sub(&s.objective);
        let scale = objective.magnitude().max(s.objective.magnitude()).max(1.0);
        if right_sign(&h, &u, dir, scale) >= 0 {
            return Some(u);
        }
        for r in roots_ahead(&h, &u, &v, dir, scale) {
            if right_sign(&h, &r, dir, scale) >= 0 {
                return Some(r);
            }
        }
    }
    None
}

fn max_r(a: &Real, b: &Real) -> Real {
    if a.cmp_strict(b) == Ordering::Less {
        b.clone()
    } else {
        a.clone()
    }
}

fn min_r(a: &Real, b: &Real) -> Real {
    if a.cmp_strict(b) == Ordering::Greater {
        b.clone()
    } else {
        a.clone()
    }
}
