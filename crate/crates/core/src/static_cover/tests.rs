use super::*;
use crate::geometry::{Arithmetic, MovingInstance, Point2, Trajectory};
use proptest::prelude::*;

fn still(pts: &[(f64, f64)]) -> Vec<Trajectory> {
    pts.iter().map(|&(x, y)| Trajectory::stationary(Point2::new(x, y))).collect()
}

fn stations(pts: &[(f64, f64)]) -> Vec<Point2> {
    pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()
}

/// Independent oracle: try every way of assigning objects to stations.
fn oracle_cost(inst: &MovingInstance, t: f64) -> f64 {
    let (n, m) = (inst.n(), inst.m());
    let pos = inst.positions_at(t);
    let mut best = f64::INFINITY;
    let total = m.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut r = vec![0.0f64; m];
        for p in &pos {
            let s = c % m;
            c /= m;
            r[s] = r[s].max(inst.stations[s].dist_sq(p));
        }
        best = best.min(r.iter().sum());
    }
    best
}

#[test]
fn equidistant_objects_share_a_candidate() {
    let inst = MovingInstance::new(stations(&[(0.0, 0.0)]), still(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, 2.0)]));
    for mode in [Arithmetic::Float, Arithmetic::Exact] {
        let c = enumerate_candidates(&inst, &Real::zero(mode));
        assert_eq!(c.len(), 2);
        assert_eq!(c.candidates[0].support_index, 0);
        assert_eq!(c.candidates[0].covered, vec![0, 1, 2]);
        assert_eq!(c.candidates[1].covered, vec![0, 1, 2, 3]);
        assert_eq!(c.candidates[1].radius_sq, Real::from_i64(4, mode));
    }
}

#[test]
fn distinct_distances_give_m_times_n_candidates() {
    let inst = MovingInstance::new(stations(&[(0.0, 0.0), (10.0, 0.0)]), still(&[(1.0, 0.0), (2.0, 0.5), (7.0, 0.25)]));
    let c = enumerate_candidates(&inst, &Real::Float(0.0));
    assert_eq!(c.len(), 6);
    assert!(Levels::build(&c).is_ok());
}

#[test]
fn nn_versus_optimum_example() {
    let inst = MovingInstance::new(stations(&[(0.0, 0.0), (4.0, 0.0)]), still(&[(1.9, 0.0), (2.1, 0.0)]));
    let t = Real::Float(0.0);
    let nn = nn_heuristic(&inst, &t).unwrap();
    let opt = solve_exact(&enumerate_candidates(&inst, &t), 0.0, None).unwrap();
    assert!((nn.cost.to_f64() - 7.22).abs() < 1e-9, "{}", nn.cost);
    assert!((opt.cost.to_f64() - 4.41).abs() < 1e-9, "{}", opt.cost);
    assert_eq!(opt.gap, 0.0);
}

#[test]
fn exact_mode_agrees_with_float() {
    let inst = MovingInstance::new(stations(&[(0.0, 0.0), (4.0, 0.0)]), still(&[(1.9, 0.0), (2.1, 0.0)]));
    let t = Real::zero(Arithmetic::Exact);
    let opt = solve_exact(&enumerate_candidates(&inst, &t), 0.0, None).unwrap();
    assert_eq!(opt.cost, Real::ratio(441, 100, Arithmetic::Exact));
    assert_eq!(opt.lower_bound, opt.cost);
}

#[test]
fn spec_examples() {
    let inst = MovingInstance::new(stations(&[(0.0, 0.0)]), still(&[(1.0, 0.0), (3.0, 0.0)]));
    let c = enumerate_candidates(&inst, &Real::Float(0.0));
    assert_eq!(c.len(), 2);
    assert_eq!((c.candidates[0].radius_sq.to_f64(), c.candidates[0].covered.clone()), (1.0, vec![0]));
    assert_eq!((c.candidates[1].radius_sq.to_f64(), c.candidates[1].covered.clone()), (9.0, vec![0, 1]));
    assert_eq!(brute_force_cover(&c).unwrap().cost.to_f64(), 9.0);

    let inst = MovingInstance::new(stations(&[(0.0, 0.0), (5.0, 0.0)]), still(&[(1.0, 0.0)]));
    let c = enumerate_candidates(&inst, &Real::Float(0.0));
    assert_eq!(c.candidates.iter().map(|d| (d.station_index, d.radius_sq.to_f64())).collect::<Vec<_>>(), vec![(0, 1.0), (1, 16.0)]);

    let inst = MovingInstance::new(stations(&[(-1.0, 0.0), (1.0, 0.0)]), still(&[(-0.5, 0.0), (0.5, 0.0)]));
    let t = Real::Float(0.0);
    let nn = nn_heuristic(&inst, &t).unwrap();
    let opt = solve_exact(&enumerate_candidates(&inst, &t), 0.0, None).unwrap();
    assert_eq!(nn.assignment, vec![0, 1]);
    assert!((nn.cost.to_f64() - 0.5).abs() < 1e-12);
    assert!((opt.cost.to_f64() - 0.5).abs() < 1e-12);
    assert_eq!(brute_force_cover(&enumerate_candidates(&inst, &t)).unwrap().selected.len(), 2);
}

#[test]
fn brute_force_refuses_large_sets() {
    let pts: Vec<(f64, f64)> = (0..13).map(|i| (i as f64, 0.0)).collect();
    let inst = MovingInstance::new(stations(&[(0.0, 0.0)]), still(&pts));
    let c = enumerate_candidates(&inst, &Real::Float(0.0));
    assert!(matches!(brute_force_cover(&c), Err(KdcError::TooLarge { .. })));
}

#[test]
fn malformed_candidate_sets_are_rejected() {
    let mode = Arithmetic::Float;
    let disk = |s, r: f64, cov: Vec<usize>| CandidateDisk {
        station_index: s,
        support_index: cov[0],
        radius_sq: Real::from_f64(r, mode),
        covered: cov,
    };
    let not_nested = CandidateSet { n_objects: 2, m_stations: 1, candidates: vec![disk(0, 1.0, vec![0]), disk(0, 2.0, vec![1])] };
    assert!(matches!(solve_exact(&not_nested, 0.0, None), Err(KdcError::MalformedCandidates(_))));
    let bad_station = CandidateSet { n_objects: 1, m_stations: 1, candidates: vec![disk(3, 1.0, vec![0])] };
    assert!(solve_exact(&bad_station, 0.0, None).is_err());
    let uncoverable = CandidateSet { n_objects: 2, m_stations: 1, candidates: vec![disk(0, 1.0, vec![0])] };
    assert!(solve_exact(&uncoverable, 0.0, None).is_err());
}

#[test]
fn stations_with_objects_on_top_cost_nothing() {
    let inst = MovingInstance::new(stations(&[(0.0, 0.0), (3.0, 0.0)]), still(&[(0.0, 0.0), (3.0, 0.0)]));
    let sol = solve_exact(&enumerate_candidates(&inst, &Real::Float(0.0)), 0.0, None).unwrap();
    assert_eq!(sol.cost.to_f64(), 0.0);
    assert_eq!(sol.assignment, vec![0, 1]);
}

#[test]
fn empty_instance() {
    let inst = MovingInstance::new(stations(&[(0.0, 0.0)]), vec![]);
    let sol = solve_exact(&enumerate_candidates(&inst, &Real::Float(0.0)), 0.0, None).unwrap();
    assert_eq!(sol.cost.to_f64(), 0.0);
    assert!(sol.assignment.is_empty());
}

#[test]
fn ties_pick_the_lexicographically_smallest_selection() {
    // a single object equidistant from both stations
    let inst = MovingInstance::new(stations(&[(0.0, 0.0), (2.0, 0.0)]), still(&[(1.0, 0.0)]));
    let c = enumerate_candidates(&inst, &Real::Float(0.0));
    let sol = solve_exact(&c, 0.0, None).unwrap();
    assert_eq!(sol.assignment, vec![0]);
    assert_eq!(sol.selected, vec![0]);
    let b = brute_force_cover(&c).unwrap();
    assert_eq!(b.selected, vec![0]);
}

fn arb_instance(max_n: usize, max_m: usize) -> impl Strategy<Value = MovingInstance> {
    let pt = || (0i32..40, 0i32..40).prop_map(|(x, y)| Point2::new(x as f64 / 4.0, y as f64 / 4.0));
    (
        proptest::collection::vec(pt(), 1..=max_m),
        proptest::collection::vec((pt(), pt()), 0..=max_n),
    )
        .prop_map(|(st, ob)| MovingInstance::new(st, ob.into_iter().map(|(a, b)| Trajectory::new(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_solver_matches_oracle(inst in arb_instance(7, 3), t in 0u32..=4) {
        let t = t as f64 / 4.0;
        let c = enumerate_candidates(&inst, &Real::Float(t));
        let sol = solve_exact(&c, 0.0, None).unwrap();
        let want = oracle_cost(&inst, t);
        prop_assert!((sol.cost.to_f64() - want).abs() <= 1e-9 * want.max(1.0));
        let brute = brute_force_cover(&c).unwrap();
        prop_assert!((brute.cost.to_f64() - want).abs() <= 1e-9 * want.max(1.0));
        prop_assert!(sol.lower_bound.to_f64() <= want * (1.0 + 1e-12));
    }

    #[test]
    fn exact_arithmetic_matches_oracle(inst in arb_instance(6, 3)) {
        let t = Real::ratio(1, 3, Arithmetic::Exact);
        let c = enumerate_candidates(&inst, &t);
        let sol = solve_exact(&c, 0.0, None).unwrap();
        let want = oracle_cost(&inst, 1.0 / 3.0);
        prop_assert!((sol.cost.to_f64() - want).abs() <= 1e-9 * want.max(1.0));
        prop_assert_eq!(&sol.lower_bound, &sol.cost);
    }

    #[test]
    fn solutions_cover_everything(inst in arb_instance(10, 4), gap in 0.0..0.2f64) {
        let t = Real::Float(0.5);
        let c = enumerate_candidates(&inst, &t);
        let dist = crate::geometry::DistancePolys::new(&inst, Arithmetic::Float).at(&t);
        for sol in [solve_exact(&c, gap, None).unwrap(), nn_heuristic(&inst, &t).unwrap()] {
            prop_assert_eq!(sol.max_violation(&dist), 0.0);
            let sum: f64 = sol.radius_sq.iter().map(Real::to_f64).sum();
            prop_assert!((sum - sol.cost.to_f64()).abs() <= 1e-9 * sum.max(1.0));
        }
        let sol = solve_exact(&c, gap, None).unwrap();
        prop_assert!(sol.cost.to_f64() <= sol.lower_bound.to_f64() * (1.0 + gap) + 1e-9);
    }

    #[test]
    fn lower_bound_tightens_with_the_gap(inst in arb_instance(10, 4), g1 in 0.0..0.1f64, dg in 0.0..0.2f64) {
        let c = enumerate_candidates(&inst, &Real::Float(0.25));
        let a = solve_exact(&c, g1, None).unwrap();
        let b = solve_exact(&c, g1 + dg, None).unwrap();
        prop_assert!(a.lower_bound.to_f64() >= b.lower_bound.to_f64() - 1e-9);
    }

    #[test]
    fn nn_never_beats_the_optimum(inst in arb_instance(8, 3)) {
        let t = Real::Float(0.0);
        let nn = nn_heuristic(&inst, &t).unwrap();
        let opt = solve_exact(&enumerate_candidates(&inst, &t), 0.0, None).unwrap();
        prop_assert!(opt.cost.to_f64() <= nn.cost.to_f64() + 1e-9);
    }
}
