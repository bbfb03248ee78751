use std::cmp::Ordering;
use std::time::Duration;

use super::levels::{Levels, NO_RANK};
use super::{solution_from_levels, BackendOutcome, CandidateSet, SolverBackend, StaticSolution};
use crate::geometry::Real;
use crate::{KdcError, Result};

pub const BRUTE_FORCE_MAX_N: usize = 12;

/// Exhaustive search: every uncovered object in turn is handed to each
/// station that can reach it. Refuses sets with more than
/// [`BRUTE_FORCE_MAX_N`] objects.
pub fn brute_force_cover(cands: &CandidateSet) -> Result<StaticSolution> {
    let (lv, level) = search(cands)?;
    let cost = lv.cost(&level);
    solution_from_levels(&lv, &level, cost, false)
}

fn search(cands: &CandidateSet) -> Result<(Levels, Vec<u32>)> {
    if cands.n_objects > BRUTE_FORCE_MAX_N {
        return Err(KdcError::TooLarge { n: cands.n_objects, limit: BRUTE_FORCE_MAX_N });
    }
    let lv = Levels::build(cands)?;
    let mut best: Option<(Real, Vec<usize>, Vec<u32>)> = None;
    let mut level = vec![0u32; lv.m];
    dfs(&lv, 0, &mut level, &mut best);
    let (_, _, level) = best.expect("levels guarantee a cover exists");
    Ok((lv, level))
}

fn dfs(lv: &Levels, from: usize, level: &mut Vec<u32>, best: &mut Option<(Real, Vec<usize>, Vec<u32>)>) {
    let next = (from..lv.n).find(|&j| (0..lv.m).all(|s| !lv.covers(s, level[s], j)));
    let Some(j) = next else {
        let mut trimmed = level.clone();
        lv.trim(&mut trimmed);
        let cost = lv.cost(&trimmed);
        let sel = lv.selection(&trimmed);
        let better = match best {
            None => true,
            Some((c, s, _)) => match cost.cmp_strict(c) {
                Ordering::Less => true,
                Ordering::Equal => sel < *s,
                Ordering::Greater => false,
            },
        };
        if better {
            *best = Some((cost, sel, trimmed));
        }
        return;
    };
    for s in 0..lv.m {
        let r = lv.rank[s][j];
        if r == NO_RANK {
            continue;
        }
        let saved = level[s];
        level[s] = saved.max(r);
        dfs(lv, j + 1, level, best);
        level[s] = saved;
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BruteForce;

impl SolverBackend for BruteForce {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn certifies(&self) -> bool {
        true
    }

    fn solve(&self, cands: &CandidateSet, _gap: f64, _limit: Option<Duration>) -> Result<BackendOutcome> {
        let (lv, level) = search(cands)?;
        Ok(BackendOutcome { selected: lv.selection(&level), lower_bound: lv.cost(&level), timed_out: false })
    }
}
