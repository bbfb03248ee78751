//! Scalar values used for times, coefficients and costs.
//!
//! A run works entirely in one [`Arithmetic`] mode. Float values carry a
//! tolerance of [`EPS`] in decisions that ask "equal?"; exact values are
//! quadratic surds and every decision is made by integer sign computations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::exact::Surd;
use crate::error::KdcError;

/// Tolerance for float-mode equality decisions.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Float,
    Exact,
}

#[derive(Clone, Debug)]
pub enum Real {
    Float(f64),
    Exact(Box<Surd>),
}

/// Times are reals; an event time is simply where a quadratic vanishes.
pub type EventTime = Real;

impl Real {
    pub fn zero(mode: Arithmetic) -> Self {
        Self::from_i64(0, mode)
    }

    pub fn one(mode: Arithmetic) -> Self {
        Self::from_i64(1, mode)
    }

    pub fn from_i64(v: i64, mode: Arithmetic) -> Self {
        match mode {
            Arithmetic::Float => Real::Float(v as f64),
            Arithmetic::Exact => Real::Exact(Box::new(Surd::from_integer(v))),
        }
    }

    pub fn ratio(num: i64, den: i64, mode: Arithmetic) -> Self {
        match mode {
            Arithmetic::Float => Real::Float(num as f64 / den as f64),
            Arithmetic::Exact => Real::Exact(Box::new(Surd::from_rational(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            )))),
        }
    }

    /// A coordinate or parameter given as f64. In exact mode the value is the
    /// rational spelled by its shortest decimal representation.
    pub fn from_f64(x: f64, mode: Arithmetic) -> Self {
        match mode {
            Arithmetic::Float => Real::Float(x),
            Arithmetic::Exact => Real::Exact(Box::new(Surd::from_f64_decimal(x))),
        }
    }

    pub fn exact(s: Surd) -> Self {
        Real::Exact(Box::new(s))
    }

    pub fn mode(&self) -> Arithmetic {
        match self {
            Real::Float(_) => Arithmetic::Float,
            Real::Exact(_) => Arithmetic::Exact,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_surd(&self) -> Option<&Surd> {
        match self {
            Real::Exact(s) => Some(s),
            Real::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Float(x) => *x,
            Real::Exact(s) => s.to_f64(),
        }
    }

    /// Strict ordering: exact when both sides are exact, plain float order otherwise.
    /// Safe to use as a sort key.
    pub fn cmp_strict(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp_exact(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }

    /// Tolerant ordering. Float values within `EPS · max(1, |a|, |b|)` compare equal.
    pub fn cmp_approx(&self, other: &Self) -> Ordering {
        self.cmp_scaled(other, 1.0)
    }

    /// Tolerant ordering with the tolerance scaled by `max(scale, |a|, |b|)`.
    pub fn cmp_scaled(&self, other: &Self, scale: f64) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp_exact(b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let tol = EPS * scale.max(a.abs()).max(b.abs());
                if (a - b).abs() <= tol {
                    Ordering::Equal
                } else {
                    a.total_cmp(&b)
                }
            }
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.cmp_approx(other) == Ordering::Equal
    }

    /// Sign, with float values of magnitude at most `EPS · scale` treated as zero.
    pub fn sign_scaled(&self, scale: f64) -> i32 {
        match self {
            Real::Exact(s) => s.signum(),
            Real::Float(x) => {
                if x.abs() <= EPS * scale.max(f64::MIN_POSITIVE) {
                    0
                } else if *x > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Exact sign (floats: sign of the stored value, zero only for ±0).
    pub fn sign(&self) -> i32 {
        match self {
            Real::Exact(s) => s.signum(),
            Real::Float(x) => {
                if *x > 0.0 {
                    1
                } else if *x < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    pub fn max_strict(self, other: Self) -> Self {
        if other.cmp_strict(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn min_strict(self, other: Self) -> Self {
        if other.cmp_strict(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Multiply by a parameter given as f64 (a gap ratio, say).
    pub fn scale_by(&self, k: f64) -> Self {
        match self {
            Real::Float(x) => Real::Float(x * k),
            Real::Exact(s) => Real::exact(s.mul(&Surd::from_f64_decimal(k))),
        }
    }

    pub fn parse(text: &str, mode: Arithmetic) -> Result<Self, KdcError> {
        match mode {
            Arithmetic::Float => text
                .trim()
                .parse::<f64>()
                .map(Real::Float)
                .map_err(|_| KdcError::Parse(format!("not a number: {text:?}"))),
            Arithmetic::Exact => Surd::from_str(text).map(Real::exact),
        }
    }
}

fn binop(a: &Real, b: &Real, ff: impl Fn(f64, f64) -> f64, ee: impl Fn(&Surd, &Surd) -> Surd) -> Real {
    match (a, b) {
        (Real::Float(x), Real::Float(y)) => Real::Float(ff(*x, *y)),
        (Real::Exact(x), Real::Exact(y)) => Real::exact(ee(x, y)),
        _ => Real::Float(ff(a.to_f64(), b.to_f64())),
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        binop(self, rhs, |x, y| x + y, Surd::add)
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        binop(self, rhs, |x, y| x - y, Surd::sub)
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        binop(self, rhs, |x, y| x * y, Surd::mul)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Float(x) => Real::Float(-x),
            Real::Exact(s) => Real::exact(s.neg()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

/// Structural equality after strict comparison; floats compare bitwise-by-value.
impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_strict(other) == Ordering::Equal
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Float(x) => write!(f, "{x}"),
            Real::Exact(s) => write!(f, "{s}"),
        }
    }
}

/// Compare two event times: exact values by integer signs, anything involving a
/// float with tolerance [`EPS`].
pub fn compare_event_times(a: &EventTime, b: &EventTime) -> Ordering {
    a.cmp_approx(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(a: (i64, i64), b: (i64, i64), d: i64) -> Real {
        Real::exact(Surd::new(
            BigRational::new(a.0.into(), a.1.into()),
            BigRational::new(b.0.into(), b.1.into()),
            BigInt::from(d),
        ))
    }

    #[test]
    fn event_time_comparisons() {
        let r2 = q((0, 1), (1, 2), 2);
        assert_eq!(compare_event_times(&r2, &r2.clone()), Ordering::Equal);
        let half = q((-4, 8), (1, 8), 64);
        assert_eq!(compare_event_times(&half, &Real::Float(0.5)), Ordering::Equal);
        let r3 = q((0, 1), (1, 2), 3);
        assert_eq!(compare_event_times(&r2, &r3), Ordering::Less);
    }

    #[test]
    fn float_tolerance() {
        let a = Real::Float(0.5);
        let b = Real::Float(0.5 + 1e-12);
        assert_eq!(a.cmp_approx(&b), Ordering::Equal);
        assert_eq!(a.cmp_strict(&b), Ordering::Less);
        assert_eq!(Real::Float(1e6).cmp_approx(&Real::Float(1e6 + 1e-4)), Ordering::Equal);
    }

    #[test]
    fn mixed_ops_fall_back_to_float() {
        let x = Real::ratio(1, 4, Arithmetic::Exact) + Real::Float(0.25);
        assert!(!x.is_exact());
        assert_eq!(x.to_f64(), 0.5);
    }

    #[test]
    fn parse_round_trip() {
        let r = q((1, 3), (-2, 5), 7);
        assert_eq!(Real::parse(&r.to_string(), Arithmetic::Exact).unwrap(), r);
        let f = Real::Float(0.1 + 0.2);
        assert_eq!(Real::parse(&f.to_string(), Arithmetic::Float).unwrap().to_f64(), 0.1 + 0.2);
    }
}
