use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::exact::Surd;
use super::real::{Arithmetic, Real, EPS};

/// `a·t² + b·t + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticPoly {
    pub a: Real,
    pub b: Real,
    pub c: Real,
}

/// Zero set of a quadratic inside a window.
#[derive(Clone, Debug, PartialEq)]
pub enum Roots {
    /// The polynomial vanishes everywhere; there are no isolated roots.
    Identical,
    /// Isolated roots in ascending order (0, 1 or 2 of them).
    Points(Vec<Real>),
}

impl Roots {
    pub fn points(&self) -> &[Real] {
        match self {
            Roots::Identical => &[],
            Roots::Points(p) => p,
        }
    }

    pub fn is_identical(&self) -> bool {
        matches!(self, Roots::Identical)
    }
}

impl QuadraticPoly {
    pub fn new(a: Real, b: Real, c: Real) -> Self {
        QuadraticPoly { a, b, c }
    }

    pub fn from_f64(a: f64, b: f64, c: f64, mode: Arithmetic) -> Self {
        QuadraticPoly {
            a: Real::from_f64(a, mode),
            b: Real::from_f64(b, mode),
            c: Real::from_f64(c, mode),
        }
    }

    pub fn zero(mode: Arithmetic) -> Self {
        QuadraticPoly {
            a: Real::zero(mode),
            b: Real::zero(mode),
            c: Real::zero(mode),
        }
    }

    pub fn mode(&self) -> Arithmetic {
        self.c.mode()
    }

    pub fn eval(&self, t: &Real) -> Real {
        (&self.a * t + &self.b) * t + &self.c
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        (self.a.to_f64() * t + self.b.to_f64()) * t + self.c.to_f64()
    }

    /// `2a·t + b`.
    pub fn derivative_at(&self, t: &Real) -> Real {
        let two_a = &self.a + &self.a;
        two_a * t + &self.b
    }

    /// Largest coefficient magnitude; the natural tolerance scale for float decisions.
    pub fn magnitude(&self) -> f64 {
        self.a.abs_f64().max(self.b.abs_f64()).max(self.c.abs_f64())
    }

    pub fn add(&self, other: &Self) -> Self {
        QuadraticPoly {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            c: &self.c + &other.c,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        QuadraticPoly {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            c: &self.c - &other.c,
        }
    }

    pub fn to_f64_coeffs(&self) -> [f64; 3] {
        [self.a.to_f64(), self.b.to_f64(), self.c.to_f64()]
    }

    /// Real roots inside `[lo, hi]`, ascending. Float coefficients below
    /// `EPS · max(magnitude, 1)` count as zero.
    pub fn roots_in(&self, lo: &Real, hi: &Real) -> Roots {
        let scale = self.magnitude().max(1.0);
        self.roots_in_scaled(lo, hi, scale)
    }

    /// As [`roots_in`](Self::roots_in), with the zero threshold relative to `scale`
    /// (use the magnitude of the operands when `self` is a difference).
    pub fn roots_in_scaled(&self, lo: &Real, hi: &Real, scale: f64) -> Roots {
        debug_assert!(lo.cmp_strict(hi) != Ordering::Greater, "empty window");
        let all = match (&self.a, &self.b, &self.c) {
            (Real::Exact(a), Real::Exact(b), Real::Exact(c)) => exact_roots(a, b, c),
            _ => float_roots(self.to_f64_coeffs(), scale),
        };
        match all {
            Roots::Identical => Roots::Identical,
            Roots::Points(pts) => {
                let window = (lo.to_f64(), hi.to_f64());
                let inside = pts
                    .into_iter()
                    .filter_map(|r| match r {
                        Real::Float(x) => {
                            if x < window.0 - EPS || x > window.1 + EPS {
                                None
                            } else {
                                Some(Real::Float(x.clamp(window.0, window.1)))
                            }
                        }
                        exact => {
                            if exact.cmp_strict(lo) == Ordering::Less || exact.cmp_strict(hi) == Ordering::Greater {
                                None
                            } else {
                                Some(exact)
                            }
                        }
                    })
                    .collect();
                Roots::Points(inside)
            }
        }
    }
}

/// Roots of `f − g` inside the window; delegates to [`QuadraticPoly::roots_in_scaled`]
/// with the operands' magnitude as the tolerance scale.
pub fn intersect_quadratics(f: &QuadraticPoly, g: &QuadraticPoly, lo: &Real, hi: &Real) -> Roots {
    let scale = f.magnitude().max(g.magnitude()).max(1.0);
    f.sub(g).roots_in_scaled(lo, hi, scale)
}

fn float_roots([a, b, c]: [f64; 3], scale: f64) -> Roots {
    let tiny = EPS * scale;
    let a = if a.abs() <= tiny * 1e-6 { 0.0 } else { a };
    if a.abs() <= tiny && b.abs() <= tiny && c.abs() <= tiny {
        return Roots::Identical;
    }
    if a == 0.0 {
        if b.abs() <= tiny * 1e-6 {
            return Roots::Points(vec![]);
        }
        return Roots::Points(vec![Real::Float(-c / b)]);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // touching within rounding: report the double root
        if disc >= -EPS * EPS * (b * b + (4.0 * a * c).abs()) {
            return Roots::Points(vec![Real::Float(-b / (2.0 * a))]);
        }
        return Roots::Points(vec![]);
    }
    if disc == 0.0 {
        return Roots::Points(vec![Real::Float(-b / (2.0 * a))]);
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let (mut r1, mut r2) = if q == 0.0 {
        let r = (-c / a).max(0.0).sqrt();
        (-r, r)
    } else {
        (q / a, c / q)
    };
    if r1 > r2 {
        std::mem::swap(&mut r1, &mut r2);
    }
    if r1 == r2 {
        Roots::Points(vec![Real::Float(r1)])
    } else {
        Roots::Points(vec![Real::Float(r1), Real::Float(r2)])
    }
}

fn rational_coeff(s: &Surd) -> &BigRational {
    assert!(s.is_rational(), "polynomial coefficients must be rational in exact mode");
    s.rational_part()
}

fn exact_roots(a: &Surd, b: &Surd, c: &Surd) -> Roots {
    let (a, b, c) = (rational_coeff(a), rational_coeff(b), rational_coeff(c));
    // clear denominators so the discriminant is an integer
    let l = a.denom().lcm(b.denom()).lcm(c.denom());
    let scale = BigRational::from_integer(l);
    let ai = (a * &scale).to_integer();
    let bi = (b * &scale).to_integer();
    let ci = (c * &scale).to_integer();
    let mk = |x: BigRational| Real::exact(Surd::from_rational(x));
    if ai.is_zero() {
        if bi.is_zero() {
            return if ci.is_zero() { Roots::Identical } else { Roots::Points(vec![]) };
        }
        return Roots::Points(vec![mk(BigRational::new(-ci, bi))]);
    }
    let disc: BigInt = &bi * &bi - BigInt::from(4) * &ai * &ci;
    if disc.is_negative() {
        return Roots::Points(vec![]);
    }
    let two_a = BigInt::from(2) * &ai;
    let center = BigRational::new(-bi, two_a.clone());
    if disc.is_zero() {
        return Roots::Points(vec![mk(center)]);
    }
    let half_width = BigRational::new(BigInt::one(), two_a.abs());
    let lo = Surd::new(center.clone(), -half_width.clone(), disc.clone());
    let hi = Surd::new(center, half_width, disc);
    Roots::Points(vec![Real::exact(lo), Real::exact(hi)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(mode: Arithmetic) -> (Real, Real) {
        (Real::zero(mode), Real::one(mode))
    }

    #[test]
    fn quadratic_with_one_root_in_window() {
        for mode in [Arithmetic::Float, Arithmetic::Exact] {
            let p = QuadraticPoly::from_f64(4.0, 4.0, -3.0, mode);
            let (lo, hi) = window(mode);
            let r = p.roots_in(&lo, &hi);
            assert_eq!(r.points().len(), 1);
            assert!(r.points()[0].approx_eq(&Real::Float(0.5)));
            if mode == Arithmetic::Exact {
                assert_eq!(r.points()[0], Real::ratio(1, 2, mode));
            }
        }
    }

    #[test]
    fn linear_and_empty_cases() {
        for mode in [Arithmetic::Float, Arithmetic::Exact] {
            let (lo, hi) = window(mode);
            let lin = QuadraticPoly::from_f64(0.0, 2.0, -1.0, mode).roots_in(&lo, &hi);
            assert_eq!(lin.points().len(), 1);
            assert!(lin.points()[0].approx_eq(&Real::Float(0.5)));
            let none = QuadraticPoly::from_f64(1.0, 0.0, 1.0, mode).roots_in(&lo, &hi);
            assert_eq!(none, Roots::Points(vec![]));
            let konst = QuadraticPoly::from_f64(0.0, 0.0, 3.0, mode).roots_in(&lo, &hi);
            assert_eq!(konst, Roots::Points(vec![]));
            assert!(QuadraticPoly::zero(mode).roots_in(&lo, &hi).is_identical());
        }
    }

    #[test]
    fn irrational_roots_are_exact() {
        // 2t² − 1 = 0 → t = √2/2
        let mode = Arithmetic::Exact;
        let (lo, hi) = window(mode);
        let r = QuadraticPoly::from_f64(2.0, 0.0, -1.0, mode).roots_in(&lo, &hi);
        let t = &r.points()[0];
        let p = QuadraticPoly::from_f64(2.0, 0.0, -1.0, mode);
        assert!(p.eval(t).as_surd().unwrap().is_zero());
        assert!((t.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn double_root_reported_once() {
        for mode in [Arithmetic::Float, Arithmetic::Exact] {
            let (lo, hi) = window(mode);
            // (t − 0.5)² = t² − t + 0.25
            let r = QuadraticPoly::from_f64(1.0, -1.0, 0.25, mode).roots_in(&lo, &hi);
            assert_eq!(r.points().len(), 1);
        }
    }

    #[test]
    fn intersections() {
        let mode = Arithmetic::Float;
        let (lo, hi) = window(mode);
        let f = QuadraticPoly::from_f64(1.0, 0.0, 0.0, mode);
        let g = QuadraticPoly::from_f64(1.0, -2.0, 1.0, mode);
        let r = intersect_quadratics(&f, &g, &lo, &hi);
        assert_eq!(r.points().len(), 1);
        assert!(r.points()[0].approx_eq(&Real::Float(0.5)));
        assert!(intersect_quadratics(&f, &f, &lo, &hi).is_identical());
        let f2 = QuadraticPoly::from_f64(1.0, 0.0, 2.0, mode);
        assert_eq!(intersect_quadratics(&f2, &f, &lo, &hi), Roots::Points(vec![]));
    }
}
