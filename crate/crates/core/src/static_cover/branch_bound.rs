//! Best-first branch-and-bound over per-station radius levels.
//!
//! A node fixes a floor `cur[s]` and a ceiling `cap[s]` on every station's
//! level. Branching takes the uncovered object that is most expensive to
//! reach and creates one child per station able to reach it; the i-th child
//! covers it by station `s_i` and forbids `s_1..s_{i-1}` from reaching it, so
//! the children partition the node's solutions. Bounds come from a
//! dual-ascent on the covering LP restricted to the free levels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use super::levels::{Levels, NO_RANK};
use super::nn::nn_levels;
use super::{BackendOutcome, CandidateSet, SolverBackend};
use crate::geometry::{Arithmetic, Real};
use crate::Result;

/// Arithmetic the search runs in: plain floats, or exact reals.
pub(crate) trait Cost: Clone + std::fmt::Debug {
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn order(&self, o: &Self) -> Ordering;
    fn times(&self, k: f64) -> Self;
    fn into_real(self) -> Real;
}

impl Cost for f64 {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        // slacks must never go negative through rounding
        (self - o).max(0.0)
    }
    fn order(&self, o: &Self) -> Ordering {
        self.total_cmp(o)
    }
    fn times(&self, k: f64) -> Self {
        self * k
    }
    fn into_real(self) -> Real {
        Real::Float(self)
    }
}

impl Cost for Real {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn order(&self, o: &Self) -> Ordering {
        self.cmp_strict(o)
    }
    fn times(&self, k: f64) -> Self {
        self.scale_by(k)
    }
    fn into_real(self) -> Real {
        self
    }
}

fn min_of<C: Cost>(a: C, b: C) -> C {
    if b.order(&a) == Ordering::Less {
        b
    } else {
        a
    }
}

/// The default exact backend.
#[derive(Clone, Copy, Debug)]
pub struct BranchAndBound {
    /// Run a greedy completion from every expanded node.
    pub dive: bool,
}

impl Default for BranchAndBound {
    fn default() -> Self {
        BranchAndBound { dive: true }
    }
}

impl SolverBackend for BranchAndBound {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn certifies(&self) -> bool {
        true
    }

    fn solve(&self, cands: &CandidateSet, target_gap: f64, time_limit: Option<Duration>) -> Result<BackendOutcome> {
        let lv = Levels::build(cands)?;
        if lv.n == 0 {
            return Ok(BackendOutcome { selected: vec![], lower_bound: Real::zero(cands.mode()), timed_out: false });
        }
        let deadline = time_limit.map(|d| Instant::now() + d);
        let (level, lower, timed_out) = match cands.mode() {
            Arithmetic::Float => {
                let w: Vec<Vec<f64>> = lv.r2.iter().map(|r| r.iter().map(Real::to_f64).collect()).collect();
                let (level, lower, t) = Search::new(&lv, w, target_gap, self.dive).run(deadline);
                (level, lower.into_real(), t)
            }
            Arithmetic::Exact => {
                let (level, lower, t) = Search::new(&lv, lv.r2.clone(), target_gap, self.dive).run(deadline);
                (level, lower, t)
            }
        };
        Ok(BackendOutcome { selected: lv.selection(&level), lower_bound: lower, timed_out })
    }
}

struct Node<C> {
    bound: C,
    depth: u32,
    seq: u64,
    cur: Box<[u32]>,
    cap: Box<[u32]>,
}

impl<C: Cost> PartialEq for Node<C> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<C: Cost> Eq for Node<C> {}
impl<C: Cost> PartialOrd for Node<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<C: Cost> Ord for Node<C> {
    // max-heap: smallest bound first, then deeper, then older
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .order(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Result of settling a node.
enum Settled<C> {
    Infeasible,
    Complete(C),
    Open { bound: C, object: usize, choices: Vec<(usize, C)> },
}

struct Search<'a, C> {
    lv: &'a Levels,
    w: Vec<Vec<C>>,
    factor: f64,
    dive: bool,
    incumbent: Option<(C, Vec<usize>, Vec<u32>)>,
    pruned_min: Option<C>,
    seq: u64,
    covered: Vec<bool>,
}

impl<'a, C: Cost> Search<'a, C> {
    fn new(lv: &'a Levels, w: Vec<Vec<C>>, gap: f64, dive: bool) -> Self {
        Search {
            lv,
            w,
            factor: 1.0 + gap.max(0.0),
            dive,
            incumbent: None,
            pruned_min: None,
            seq: 0,
            covered: vec![false; lv.n],
        }
    }

    fn zero(&self) -> C {
        self.w[0][0].clone()
    }

    fn cost_of(&self, level: &[u32]) -> C {
        (0..self.lv.m).fold(self.zero(), |acc, s| acc.plus(&self.w[s][level[s] as usize]))
    }

    fn offer(&mut self, mut level: Vec<u32>) {
        self.lv.trim(&mut level);
        let cost = self.cost_of(&level);
        let sel = self.lv.selection(&level);
        let better = match &self.incumbent {
            None => true,
            Some((c, s, _)) => match cost.order(c) {
                Ordering::Less => true,
                Ordering::Equal => sel < *s,
                Ordering::Greater => false,
            },
        };
        if better {
            self.incumbent = Some((cost, sel, level));
        }
    }

    /// `bound · (1 + gap) ≥ incumbent`: nothing in here can improve enough.
    fn dominated(&self, bound: &C) -> bool {
        match &self.incumbent {
            Some((c, _, _)) => bound.times(self.factor).order(c) != Ordering::Less,
            None => false,
        }
    }

    fn note_pruned(&mut self, bound: C) {
        self.pruned_min = Some(match self.pruned_min.take() {
            None => bound,
            Some(p) => min_of(p, bound),
        });
    }

    fn mark_covered(&mut self, cur: &[u32]) {
        self.covered.iter_mut().for_each(|c| *c = false);
        for s in 0..self.lv.m {
            for l in 1..=cur[s] as usize {
                for &j in &self.lv.members[s][l] {
                    self.covered[j] = true;
                }
            }
        }
    }

    /// Force objects with a single remaining station, then bound.
    fn settle(&mut self, cur: &mut [u32], cap: &[u32], with_bound: bool) -> Settled<C> {
        let lv = self.lv;
        loop {
            self.mark_covered(cur);
            let mut changed = false;
            for j in 0..lv.n {
                if self.covered[j] {
                    continue;
                }
                let mut only = None;
                let mut count = 0;
                for s in 0..lv.m {
                    if lv.rank[s][j] <= cap[s] {
                        count += 1;
                        only = Some(s);
                    }
                }
                match count {
                    0 => return Settled::Infeasible,
                    1 => {
                        let s = only.unwrap();
                        if lv.rank[s][j] > cur[s] {
                            cur[s] = lv.rank[s][j];
                            changed = true;
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let committed = self.cost_of(cur);
        let uncovered: Vec<usize> = (0..lv.n).filter(|&j| !self.covered[j]).collect();
        if uncovered.is_empty() {
            return Settled::Complete(committed);
        }

        // cheapest way to reach each uncovered object
        let mut inc: Vec<C> = Vec::with_capacity(uncovered.len());
        for &j in &uncovered {
            let mut best: Option<C> = None;
            for s in 0..lv.m {
                let r = lv.rank[s][j];
                if r <= cap[s] {
                    let d = self.w[s][r as usize].minus(&self.w[s][cur[s] as usize]);
                    best = Some(match best {
                        None => d,
                        Some(b) => min_of(b, d),
                    });
                }
            }
            inc.push(best.expect("settled objects have a station"));
        }
        let mut pick = 0;
        for k in 1..uncovered.len() {
            if inc[k].order(&inc[pick]) == Ordering::Greater {
                pick = k;
            }
        }
        let object = uncovered[pick];
        let mut choices: Vec<(usize, C)> = (0..lv.m)
            .filter(|&s| lv.rank[s][object] <= cap[s])
            .map(|s| (s, self.w[s][lv.rank[s][object] as usize].minus(&self.w[s][cur[s] as usize])))
            .collect();
        choices.sort_by(|a, b| a.1.order(&b.1).then(a.0.cmp(&b.0)));

        let extra = if with_bound {
            self.dual_ascent(cur, cap, &uncovered, &inc)
        } else {
            inc[pick].clone()
        };
        Settled::Open { bound: committed.plus(&extra), object, choices }
    }

    /// Lower bound on the extra cost needed to cover `uncovered` from `cur`.
    fn dual_ascent(&self, cur: &[u32], cap: &[u32], uncovered: &[usize], inc: &[C]) -> C {
        let lv = self.lv;
        // free levels of each station that pick up some uncovered object
        let mut lvls: Vec<Vec<u32>> = vec![Vec::new(); lv.m];
        let mut slack: Vec<Vec<C>> = vec![Vec::new(); lv.m];
        for s in 0..lv.m {
            for l in cur[s] + 1..=cap[s].min(lv.levels(s) as u32) {
                if lv.members[s][l as usize].iter().any(|&j| !self.covered[j]) {
                    lvls[s].push(l);
                    slack[s].push(self.w[s][l as usize].minus(&self.w[s][cur[s] as usize]));
                }
            }
        }
        let mut order: Vec<usize> = (0..uncovered.len()).collect();
        order.sort_by(|&a, &b| inc[b].order(&inc[a]).then(a.cmp(&b)));
        let mut total = self.zero();
        for k in order {
            let j = uncovered[k];
            let mut y: Option<C> = None;
            let mut spots: Vec<(usize, usize)> = Vec::new();
            for s in 0..lv.m {
                let r = lv.rank[s][j];
                if r == NO_RANK || r > cap[s] {
                    continue;
                }
                let p = lvls[s].partition_point(|&l| l < r);
                spots.push((s, p));
                for v in &slack[s][p..] {
                    y = Some(match y {
                        None => v.clone(),
                        Some(b) => min_of(b, v.clone()),
                    });
                }
            }
            let Some(y) = y else { continue };
            if y.order(&self.zero()) != Ordering::Greater {
                continue;
            }
            for (s, p) in spots {
                for v in &mut slack[s][p..] {
                    *v = v.minus(&y);
                }
            }
            total = total.plus(&y);
        }
        total
    }

    /// Greedy completion: keep covering the most expensive object by its
    /// cheapest station.
    fn dive_from(&mut self, cur: &[u32], cap: &[u32]) {
        let mut cur = cur.to_vec();
        loop {
            match self.settle(&mut cur, cap, false) {
                Settled::Infeasible => return,
                Settled::Complete(_) => {
                    self.offer(cur);
                    return;
                }
                Settled::Open { object, choices, .. } => {
                    let s = choices[0].0;
                    cur[s] = self.lv.rank[s][object];
                }
            }
        }
    }

    fn push_child(&mut self, heap: &mut BinaryHeap<Node<C>>, mut cur: Vec<u32>, cap: Vec<u32>, depth: u32, parent: Option<&C>) {
        match self.settle(&mut cur, &cap, true) {
            Settled::Infeasible => {}
            Settled::Complete(_) => self.offer(cur),
            Settled::Open { bound, .. } => {
                // the parent's bound holds for the whole subtree
                let bound = match parent {
                    Some(p) if p.order(&bound) == Ordering::Greater => p.clone(),
                    _ => bound,
                };
                if self.dominated(&bound) {
                    self.note_pruned(bound);
                } else {
                    self.seq += 1;
                    heap.push(Node { bound, depth, seq: self.seq, cur: cur.into(), cap: cap.into() });
                }
            }
        }
    }

    /// Returns the best level vector, a certified lower bound and whether the
    /// deadline cut the search short.
    fn run(mut self, deadline: Option<Instant>) -> (Vec<u32>, C, bool) {
        let lv = self.lv;
        self.offer(nn_levels(lv));
        let root_cap: Vec<u32> = (0..lv.m).map(|s| lv.levels(s) as u32).collect();
        let mut heap = BinaryHeap::new();
        if self.dive {
            self.dive_from(&vec![0; lv.m], &root_cap);
        }
        self.push_child(&mut heap, vec![0; lv.m], root_cap, 0, None);

        let mut timed_out = false;
        let mut expanded = 0u64;
        while let Some(node) = heap.peek() {
            if self.dominated(&node.bound) {
                break;
            }
            if expanded % 16 == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
                timed_out = true;
                break;
            }
            let node = heap.pop().unwrap();
            expanded += 1;
            let mut cur = node.cur.to_vec();
            let cap = node.cap.to_vec();
            let Settled::Open { object, choices, .. } = self.settle(&mut cur, &cap, false) else {
                unreachable!("queued nodes are open")
            };
            if self.dive {
                self.dive_from(&cur, &cap);
            }
            let mut child_cap = cap.clone();
            for (s, _) in choices {
                let mut child_cur = cur.clone();
                child_cur[s] = child_cur[s].max(lv.rank[s][object]);
                self.push_child(&mut heap, child_cur, child_cap.clone(), node.depth + 1, Some(&node.bound));
                // later siblings may not use s for this object
                child_cap[s] = lv.rank[s][object] - 1;
            }
        }

        let (best_cost, _, best_level) = self.incumbent.take().expect("nearest-neighbour seeds an incumbent");
        let mut lower = best_cost.clone();
        if let Some(top) = heap.peek() {
            lower = min_of(lower, top.bound.clone());
        }
        if let Some(p) = self.pruned_min.take() {
            lower = min_of(lower, p);
        }
        (best_level, lower, timed_out)
    }
}
