use std::time::{Duration, Instant};

use super::config::SolverConfig;
use super::iterative::{empty_result, KineticResult, Run, StopReason};
use crate::envelope::{argmax_timeline, merge_lower_envelope};
use crate::geometry::{MovingInstance, Real};
use crate::kinetic::{Flags, KineticContext};
use crate::static_cover::NearestNeighbor;
use crate::{KdcError, Result};

/// Nearest-neighbour assignments taken at `t = i/k` for `i = 0..=k`, each
/// carried over all of `[0, 1]`, combined into their lower envelope.
/// Certifies nothing, so the lower bound is zero.
pub fn fixed_nn_baseline(inst: &MovingInstance, k: usize, config: &SolverConfig) -> Result<KineticResult> {
    if k == 0 {
        return Err(KdcError::Invalid("fixed_nn needs k ≥ 1".into()));
    }
    inst.validate()?;
    let started = Instant::now();
    let mode = config.arithmetic();
    if inst.n() == 0 {
        return Ok(empty_result(inst, mode, started));
    }
    let ctx = KineticContext::new(inst, mode);
    let backend = NearestNeighbor;
    let deadline = started + Duration::from_secs_f64(config.time_limit.max(0.0));
    let mut run = Run::new(&ctx, &backend, deadline);
    let flags = Flags { part_ext: false, ..config.flags };

    let mut timeline = None;
    for i in 0..=k {
        let t = Real::ratio(i as i64, k as i64, mode);
        let sol = run.static_at(&t, 0.0)?;
        let tl = run.extend_full(&sol.assignment, &t, flags)?;
        timeline = Some(match timeline {
            None => tl,
            Some(acc) => {
                let clock = Instant::now();
                let merged = merge_lower_envelope(&acc, &tl);
                run.stats.time_extend_merge += clock.elapsed().as_secs_f64();
                merged
            }
        });
    }
    let timeline = timeline.expect("k ≥ 1 gives at least two grid times");
    let (_, upper) = argmax_timeline(&timeline);
    let mut stats = run.stats;
    stats.time_total = started.elapsed().as_secs_f64();
    Ok(KineticResult {
        timeline,
        upper,
        lower: Real::zero(mode),
        gap: f64::INFINITY,
        iterations: k + 1,
        stats,
        timed_out: false,
        stop_reason: StopReason::Completed,
    })
}
