use std::cmp::Ordering;
use std::time::Duration;

use super::levels::{Levels, NO_RANK};
use super::{enumerate_candidates, solution_from_levels, BackendOutcome, CandidateSet, SolverBackend, StaticSolution};
use crate::geometry::{MovingInstance, Real};
use crate::Result;

/// Nearest-neighbour cover: objects far from every station go first, and each
/// uncovered object makes its nearest station grow just enough to reach it.
pub(crate) fn nn_levels(lv: &Levels) -> Vec<u32> {
    let nearest: Vec<(usize, u32)> = (0..lv.n)
        .map(|j| {
            let mut best: Option<(usize, u32)> = None;
            for s in 0..lv.m {
                let r = lv.rank[s][j];
                if r == NO_RANK {
                    continue;
                }
                let closer = match best {
                    None => true,
                    Some((bs, br)) => lv.r2[s][r as usize].cmp_strict(&lv.r2[bs][br as usize]) == Ordering::Less,
                };
                if closer {
                    best = Some((s, r));
                }
            }
            best.expect("levels guarantee every object is coverable")
        })
        .collect();
    let mut order: Vec<usize> = (0..lv.n).collect();
    order.sort_by(|&a, &b| {
        let (sa, ra) = nearest[a];
        let (sb, rb) = nearest[b];
        lv.r2[sb][rb as usize].cmp_strict(&lv.r2[sa][ra as usize]).then(a.cmp(&b))
    });
    let mut level = vec![0u32; lv.m];
    for j in order {
        if (0..lv.m).any(|s| lv.covers(s, level[s], j)) {
            continue;
        }
        let (s, r) = nearest[j];
        level[s] = level[s].max(r);
    }
    level
}

/// The nearest-neighbour heuristic at time `t`.
pub fn nn_heuristic(inst: &MovingInstance, t: &Real) -> Result<StaticSolution> {
    let cands = enumerate_candidates(inst, t);
    let lv = Levels::build(&cands)?;
    let level = nn_levels(&lv);
    solution_from_levels(&lv, &level, Real::zero(t.mode()), false)
}

/// Backend wrapper for [`nn_heuristic`]; certifies nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NearestNeighbor;

impl SolverBackend for NearestNeighbor {
    fn name(&self) -> &'static str {
        "nn"
    }

    fn certifies(&self) -> bool {
        false
    }

    fn solve(&self, cands: &CandidateSet, _gap: f64, _limit: Option<Duration>) -> Result<BackendOutcome> {
        let lv = Levels::build(cands)?;
        let level = nn_levels(&lv);
        Ok(BackendOutcome {
            selected: lv.selection(&level),
            lower_bound: Real::zero(cands.mode()),
            timed_out: false,
        })
    }
}
