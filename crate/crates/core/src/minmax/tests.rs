use super::*;
use crate::geometry::{Arithmetic, MovingInstance, Point2, Real, Trajectory};
use crate::kinetic::{check_feasible, Flags};
use crate::static_cover::{brute_force_cover, enumerate_candidates};
use proptest::prelude::*;

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn mv(a: (f64, f64), b: (f64, f64)) -> Trajectory {
    Trajectory::new(p(a.0, a.1), p(b.0, b.1))
}

fn cfg(mode: Arithmetic) -> SolverConfig {
    SolverConfig { exact_arithmetic: mode == Arithmetic::Exact, ..SolverConfig::default() }
}

const MODES: [Arithmetic; 2] = [Arithmetic::Float, Arithmetic::Exact];

fn crossing() -> MovingInstance {
    MovingInstance::new(vec![p(0.0, 0.0), p(10.0, 0.0)], vec![mv((2.0, 0.0), (8.0, 0.0))])
}

#[test]
fn single_object_peaks_at_the_ends() {
    let inst = MovingInstance::new(vec![p(0.0, 0.0)], vec![mv((1.0, 0.0), (0.0, 1.0))]);
    for mode in MODES {
        let r = solve_minmax(&inst, &cfg(mode)).unwrap();
        assert_eq!(r.upper.cmp_strict(&Real::one(mode)), std::cmp::Ordering::Equal, "{mode:?}");
        assert_eq!(r.gap, 0.0);
        assert!((r.upper_area() - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(r.stop_reason, StopReason::Certified);
    }
}

#[test]
fn stationary_object() {
    let inst = MovingInstance::new(vec![p(0.0, 0.0)], vec![Trajectory::stationary(p(3.0, 0.0))]);
    let r = solve_minmax(&inst, &SolverConfig::default()).unwrap();
    assert_eq!(r.upper.to_f64(), 9.0);
    assert_eq!(r.gap, 0.0);
    assert!(r.iterations <= 1);
    let b = fixed_nn_baseline(&inst, 10, &SolverConfig::default()).unwrap();
    assert_eq!(b.upper.to_f64(), 9.0);
    assert_eq!(b.timeline.segments.len(), 1);
}

#[test]
fn two_station_crossing() {
    for mode in MODES {
        let r = solve_minmax(&inst_mode(mode), &cfg(mode)).unwrap();
        assert_eq!(r.upper.cmp_strict(&Real::from_i64(25, mode)), std::cmp::Ordering::Equal, "{mode:?}");
        assert!(r.gap <= 1e-4);
        assert!(r.stats.static_solves >= 2);
        for k in [1, 2, 10] {
            let b = fixed_nn_baseline(&crossing(), k, &cfg(mode)).unwrap();
            assert!(b.upper.to_f64() >= 25.0 - 1e-9, "k = {k}");
            assert_eq!(b.lower.sign(), 0);
            assert!(b.gap.is_infinite());
        }
    }
}

fn inst_mode(_: Arithmetic) -> MovingInstance {
    crossing()
}

#[test]
fn nn_backend_certifies_nothing() {
    let r = solve_minmax(&crossing(), &SolverConfig { static_backend: "nn".into(), ..SolverConfig::default() }).unwrap();
    assert_eq!(r.lower.sign(), 0);
    assert!(r.gap.is_infinite());
    assert!((r.upper.to_f64() - 25.0).abs() < 1e-9);
}

#[test]
fn empty_and_invalid() {
    let r = solve_minmax(&MovingInstance::new(vec![p(0.0, 0.0)], vec![]), &SolverConfig::default()).unwrap();
    assert_eq!(r.upper.to_f64(), 0.0);
    assert!(solve_minmax(&MovingInstance::new(vec![], vec![mv((0.0, 0.0), (1.0, 0.0))]), &SolverConfig::default()).is_err());
    let bad = SolverConfig { static_backend: "cplex".into(), ..SolverConfig::default() };
    assert!(solve_minmax(&crossing(), &bad).is_err());
    assert!(fixed_nn_baseline(&crossing(), 0, &SolverConfig::default()).is_err());
}

#[test]
fn tiny_time_limit_still_returns() {
    let inst = MovingInstance::new(
        (0..6).map(|i| p(i as f64 * 17.0, (i * 31 % 50) as f64)).collect(),
        (0..60).map(|j| mv(((j * 7 % 100) as f64, (j * 13 % 100) as f64), ((j * 29 % 100) as f64, (j * 3 % 100) as f64))).collect(),
    );
    let c = SolverConfig { time_limit: 1e-6, ..SolverConfig::default() };
    let r = solve_minmax(&inst, &c).unwrap();
    assert!(r.timed_out);
    assert!(r.upper.cmp_strict(&r.lower) != std::cmp::Ordering::Less);
    assert!(check_feasible(&r.timeline.segments, &inst, 1000).feasible);
}

fn arb_instance(max_n: usize, max_m: usize, grid: i32) -> impl Strategy<Value = MovingInstance> {
    let coord = move || (-grid..=grid).prop_map(|v| v as f64);
    let pt = move || (coord(), coord()).prop_map(|(x, y)| p(x, y));
    (1..=max_m, 1..=max_n).prop_flat_map(move |(m, n)| {
        (prop::collection::vec(pt(), m), prop::collection::vec((pt(), pt()), n))
            .prop_map(|(st, ob)| MovingInstance::new(st, ob.into_iter().map(|(a, b)| Trajectory::new(a, b)).collect()))
    })
}

fn arb_flags() -> impl Strategy<Value = Flags> {
    (any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(no_dup, imp_ext, part_ext)| Flags { no_dup, imp_ext, part_ext })
}

fn grid_max(inst: &MovingInstance, mode: Arithmetic, steps: i64) -> Real {
    (0..=steps)
        .map(|i| brute_force_cover(&enumerate_candidates(inst, &Real::ratio(i, steps, mode))).unwrap().cost)
        .fold(Real::zero(mode), |a, b| a.max_strict(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn float_runs_are_sandwiched(inst in arb_instance(8, 3, 100), flags in arb_flags()) {
        let c = SolverConfig { flags, target_gap: 0.0, ..SolverConfig::default() };
        let r = solve_minmax(&inst, &c).unwrap();
        let (u, l) = (r.upper.to_f64(), r.lower.to_f64());
        prop_assert!(u >= l && l >= 0.0);
        prop_assert!(u <= l * (1.0 + 1e-9) + 1e-12, "gap 0 run not certified: {} vs {}", u, l);
        prop_assert_eq!(r.upper.to_f64(), crate::envelope::argmax_timeline(&r.timeline).1.to_f64());
        let g = grid_max(&inst, Arithmetic::Float, 20).to_f64();
        prop_assert!(g <= u * (1.0 + 1e-9) + 1e-12, "grid {} above upper {}", g, u);
        let rep = check_feasible(&r.timeline.segments, &inst, 1000);
        prop_assert!(rep.feasible, "violation {} at {:?}", rep.worst_violation, rep.worst_at);
        let b = fixed_nn_baseline(&inst, 10, &c).unwrap();
        prop_assert!(b.upper.to_f64() >= u * (1.0 - 1e-9));
    }

    #[test]
    fn flags_do_not_change_the_optimum(inst in arb_instance(10, 4, 100)) {
        let base = SolverConfig { target_gap: 0.0, ..SolverConfig::default() };
        let off = solve_minmax(&inst, &base).unwrap().upper.to_f64();
        let on = solve_minmax(&inst, &SolverConfig { flags: Flags::ALL, ..base }).unwrap().upper.to_f64();
        prop_assert!((off - on).abs() <= 1e-9 * off.max(1.0), "{} vs {}", off, on);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn exact_runs_are_sandwiched(inst in arb_instance(5, 3, 6), flags in arb_flags()) {
        let c = SolverConfig { flags, target_gap: 0.0, exact_arithmetic: true, ..SolverConfig::default() };
        let r = solve_minmax(&inst, &c).unwrap();
        prop_assert_eq!(r.upper.cmp_strict(&r.lower), std::cmp::Ordering::Equal);
        let g = grid_max(&inst, Arithmetic::Exact, 12);
        prop_assert!(g.cmp_strict(&r.upper) != std::cmp::Ordering::Greater);
        prop_assert!(check_feasible(&r.timeline.segments, &inst, 1000).feasible);
    }
}
