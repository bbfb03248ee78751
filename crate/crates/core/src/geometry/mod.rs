//! Points, linear trajectories over the unit time horizon, and the
//! time-parameterised squared distances everything else is built from.

pub mod exact;
pub mod poly;
pub mod real;

use serde::{Deserialize, Serialize};

pub use exact::Surd;
pub use poly::{intersect_quadratics, QuadraticPoly, Roots};
pub use real::{compare_event_times, Arithmetic, EventTime, Real, EPS};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist_sq(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Straight-line motion from `start` at t = 0 to `end` at t = 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: Point2,
    pub end: Point2,
}

impl Trajectory {
    pub const fn new(start: Point2, end: Point2) -> Self {
        Trajectory { start, end }
    }

    pub const fn stationary(p: Point2) -> Self {
        Trajectory { start: p, end: p }
    }

    pub fn at(&self, t: f64) -> Point2 {
        Point2::new(
            (1.0 - t) * self.start.x + t * self.end.x,
            (1.0 - t) * self.start.y + t * self.end.y,
        )
    }

    pub fn length(&self) -> f64 {
        self.start.dist(&self.end)
    }
}

/// Fixed stations plus moving objects. Indices into both lists are the
/// identifiers used throughout the solvers.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MovingInstance {
    pub stations: Vec<Point2>,
    pub objects: Vec<Trajectory>,
}

impl MovingInstance {
    pub fn new(stations: Vec<Point2>, objects: Vec<Trajectory>) -> Self {
        MovingInstance { stations, objects }
    }

    pub fn n(&self) -> usize {
        self.objects.len()
    }

    pub fn m(&self) -> usize {
        self.stations.len()
    }

    /// The stationary instance at time `t`.
    pub fn positions_at(&self, t: f64) -> Vec<Point2> {
        self.objects.iter().map(|o| o.at(t)).collect()
    }

    pub fn validate(&self) -> Result<(), crate::KdcError> {
        if !self.objects.is_empty() && self.stations.is_empty() {
            return Err(crate::KdcError::Invalid("objects present but no stations".into()));
        }
        let finite = self.stations.iter().all(Point2::is_finite)
            && self.objects.iter().all(|o| o.start.is_finite() && o.end.is_finite());
        if !finite {
            return Err(crate::KdcError::Invalid("non-finite coordinate".into()));
        }
        Ok(())
    }
}

/// `‖station − obj(t)‖²` as a polynomial in `t`. The leading coefficient is
/// `‖end − start‖²`, so the parabola opens upward or is flat.
pub fn squared_distance_poly(station: &Point2, obj: &Trajectory, mode: Arithmetic) -> QuadraticPoly {
    match mode {
        Arithmetic::Float => {
            let (dx, dy) = (obj.start.x - station.x, obj.start.y - station.y);
            let (vx, vy) = (obj.end.x - obj.start.x, obj.end.y - obj.start.y);
            QuadraticPoly::new(
                Real::Float(vx * vx + vy * vy),
                Real::Float(2.0 * (dx * vx + dy * vy)),
                Real::Float(dx * dx + dy * dy),
            )
        }
        Arithmetic::Exact => {
            let r = |x: f64| Real::from_f64(x, mode);
            let (sx, sy) = (r(station.x), r(station.y));
            let (px, py) = (r(obj.start.x), r(obj.start.y));
            let (ex, ey) = (r(obj.end.x), r(obj.end.y));
            let dx = &px - &sx;
            let dy = &py - &sy;
            let vx = &ex - &px;
            let vy = &ey - &py;
            let two = Real::from_i64(2, mode);
            QuadraticPoly::new(
                &vx * &vx + &vy * &vy,
                two * (&dx * &vx + &dy * &vy),
                &dx * &dx + &dy * &dy,
            )
        }
    }
}

/// `polys[s][j]` is the squared distance from station `s` to object `j` over time.
#[derive(Clone, Debug)]
pub struct DistancePolys {
    pub mode: Arithmetic,
    pub polys: Vec<Vec<QuadraticPoly>>,
}

impl DistancePolys {
    pub fn new(inst: &MovingInstance, mode: Arithmetic) -> Self {
        let polys = inst
            .stations
            .iter()
            .map(|st| inst.objects.iter().map(|o| squared_distance_poly(st, o, mode)).collect())
            .collect();
        DistancePolys { mode, polys }
    }

    pub fn m(&self) -> usize {
        self.polys.len()
    }

    pub fn n(&self) -> usize {
        self.polys.first().map_or(0, Vec::len)
    }

    pub fn get(&self, s: usize, j: usize) -> &QuadraticPoly {
        &self.polys[s][j]
    }

    /// Squared distances at time `t`, indexed `[station][object]`.
    pub fn at(&self, t: &Real) -> Vec<Vec<Real>> {
        self.polys.iter().map(|row| row.iter().map(|p| p.eval(t)).collect()).collect()
    }
}

/// All real roots of `p` in `[lo, hi]`, ascending, or [`Roots::Identical`] for
/// the zero polynomial.
pub fn quadratic_roots(p: &QuadraticPoly, lo: &Real, hi: &Real) -> Roots {
    p.roots_in(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly_f(station: (f64, f64), a: (f64, f64), b: (f64, f64)) -> [f64; 3] {
        let traj = Trajectory::new(Point2::new(a.0, a.1), Point2::new(b.0, b.1));
        squared_distance_poly(&Point2::new(station.0, station.1), &traj, Arithmetic::Float).to_f64_coeffs()
    }

    #[test]
    fn coefficient_extraction() {
        assert_eq!(poly_f((0.0, 0.0), (0.0, 1.0), (0.0, 3.0)), [4.0, 4.0, 1.0]);
        assert_eq!(poly_f((0.0, 0.0), (2.0, 0.0), (2.0, 0.0)), [0.0, 0.0, 4.0]);
        assert_eq!(poly_f((1.0, 1.0), (1.0, 1.0), (2.0, 1.0)), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn exact_coefficients_match() {
        let traj = Trajectory::new(Point2::new(0.1, 0.2), Point2::new(0.3, -0.7));
        let st = Point2::new(0.5, 0.25);
        let e = squared_distance_poly(&st, &traj, Arithmetic::Exact);
        let f = squared_distance_poly(&st, &traj, Arithmetic::Float);
        for (x, y) in e.to_f64_coeffs().iter().zip(f.to_f64_coeffs()) {
            assert!((x - y).abs() < 1e-14);
        }
        // 0.1 is one tenth exactly, not its binary neighbour
        assert_eq!(e.c.to_string(), "13/80");
    }

    proptest! {
        #[test]
        fn eval_matches_direct_distance(
            sx in -100.0..100.0f64, sy in -100.0..100.0f64,
            ax in -100.0..100.0f64, ay in -100.0..100.0f64,
            bx in -100.0..100.0f64, by in -100.0..100.0f64,
            t in 0.0..=1.0f64,
        ) {
            let st = Point2::new(sx, sy);
            let traj = Trajectory::new(Point2::new(ax, ay), Point2::new(bx, by));
            let p = squared_distance_poly(&st, &traj, Arithmetic::Float);
            let direct = st.dist_sq(&traj.at(t));
            let scale = direct.max(p.magnitude()).max(1.0);
            prop_assert!((p.eval_f64(t) - direct).abs() <= 1e-12 * scale);
            prop_assert!(p.a.to_f64() >= 0.0);
        }

        #[test]
        fn float_roots_vanish(a in -50.0..50.0f64, b in -50.0..50.0f64, c in -50.0..50.0f64) {
            let p = QuadraticPoly::from_f64(a, b, c, Arithmetic::Float);
            let lo = Real::Float(-10.0);
            let hi = Real::Float(10.0);
            for r in p.roots_in(&lo, &hi).points() {
                let scale = p.magnitude().max(1.0);
                let t = r.to_f64();
                prop_assert!(p.eval_f64(t).abs() / scale <= 1e-9 * (1.0 + t * t));
            }
        }

        #[test]
        fn exact_roots_vanish(a in -20i64..20, b in -20i64..20, c in -20i64..20, d in 1i64..9) {
            let mode = Arithmetic::Exact;
            let p = QuadraticPoly::new(Real::ratio(a, d, mode), Real::ratio(b, 1, mode), Real::ratio(c, d, mode));
            let lo = Real::from_i64(-30, mode);
            let hi = Real::from_i64(30, mode);
            for r in p.roots_in(&lo, &hi).points() {
                prop_assert!(p.eval(r).as_surd().unwrap().is_zero());
            }
        }

        #[test]
        fn event_time_order_is_total(
            xs in proptest::collection::vec((-9i64..9, 1i64..5, 0i64..4, 1i64..30), 3)
        ) {
            use std::cmp::Ordering;
            let v: Vec<Real> = xs.iter().map(|&(p, r, q, d)| {
                Real::exact(Surd::new(
                    num_rational::BigRational::new(p.into(), r.into()),
                    num_rational::BigRational::new(q.into(), r.into()),
                    d.into(),
                ))
            }).collect();
            for i in 0..3 {
                for j in 0..3 {
                    let ij = compare_event_times(&v[i], &v[j]);
                    prop_assert_eq!(ij, compare_event_times(&v[j], &v[i]).reverse());
                    for k in 0..3 {
                        if ij != Ordering::Greater && compare_event_times(&v[j], &v[k]) != Ordering::Greater {
                            prop_assert!(compare_event_times(&v[i], &v[k]) != Ordering::Greater);
                        }
                    }
                }
                // agrees with the float approximation when well separated
                for j in 0..3 {
                    let (a, b) = (v[i].to_f64(), v[j].to_f64());
                    if (a - b).abs() > 1e-9 {
                        prop_assert_eq!(compare_event_times(&v[i], &v[j]), a.partial_cmp(&b).unwrap());
                    }
                }
            }
        }
    }
}
