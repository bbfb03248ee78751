//! Exact quadratic surds `a + b·√d` with rational `a`, `b` and a non-negative
//! integer radicand `d`.
//!
//! Roots of quadratics with rational coefficients live in exactly this class,
//! and so does every polynomial value evaluated at such a root. Sums and
//! products are only defined between surds sharing a radicand (or where one
//! side is rational); comparisons work across arbitrary radicands.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::KdcError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    rat: BigRational,
    coef: BigRational,
    rad: BigInt,
}

fn sign_of(x: &BigRational) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Sign of `a + b·√d` for `d ≥ 0`.
fn sign_linear(a: &BigRational, b: &BigRational, d: &BigInt) -> i32 {
    let sa = sign_of(a);
    let sb = if d.is_zero() { 0 } else { sign_of(b) };
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // opposite signs: compare a² with b²·d
    let lhs = a * a;
    let rhs = b * b * BigRational::from_integer(d.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

impl Surd {
    pub fn new(rat: BigRational, coef: BigRational, rad: BigInt) -> Self {
        assert!(!rad.is_negative(), "negative radicand");
        let mut s = Surd { rat, coef, rad };
        s.normalize();
        s
    }

    pub fn from_rational(rat: BigRational) -> Self {
        Surd {
            rat,
            coef: BigRational::zero(),
            rad: BigInt::zero(),
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// Exact value of a plain decimal literal such as `-12.0625`.
    pub fn parse_decimal(text: &str) -> Result<Self, KdcError> {
        parse_decimal_rational(text).map(Self::from_rational)
    }

    /// Exact value of the shortest decimal representation of `x`.
    ///
    /// This is the literal that `x` prints as, so a coordinate read from a
    /// file and re-printed maps to the rational the file spelled out.
    pub fn from_f64_decimal(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite coordinate {x}");
        Self::parse_decimal(&format!("{x}")).expect("f64 display is a decimal literal")
    }

    fn normalize(&mut self) {
        if self.coef.is_zero() || self.rad.is_zero() {
            self.coef = BigRational::zero();
            self.rad = BigInt::zero();
            return;
        }
        let root = self.rad.sqrt();
        if &root * &root == self.rad {
            self.rat = &self.rat + &self.coef * BigRational::from_integer(root);
            self.coef = BigRational::zero();
            self.rad = BigInt::zero();
        }
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn surd_part(&self) -> (&BigRational, &BigInt) {
        (&self.coef, &self.rad)
    }

    pub fn signum(&self) -> i32 {
        sign_linear(&self.rat, &self.coef, &self.rad)
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.is_rational() {
            return a;
        }
        let b = self.coef.to_f64().unwrap_or(f64::NAN);
        let d = self.rad.to_f64().unwrap_or(f64::NAN);
        a + b * d.sqrt()
    }

    fn common_radicand<'a>(&'a self, other: &'a Self) -> &'a BigInt {
        if self.is_rational() {
            &other.rad
        } else if other.is_rational() || self.rad == other.rad {
            &self.rad
        } else {
            panic!(
                "arithmetic between incompatible radicands {} and {}",
                self.rad, other.rad
            )
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let rad = self.common_radicand(other).clone();
        Surd::new(&self.rat + &other.rat, &self.coef + &other.coef, rad)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let rad = self.common_radicand(other).clone();
        Surd::new(&self.rat - &other.rat, &self.coef - &other.coef, rad)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let rad = self.common_radicand(other).clone();
        let d = BigRational::from_integer(rad.clone());
        let rat = &self.rat * &other.rat + &self.coef * &other.coef * d;
        let coef = &self.rat * &other.coef + &self.coef * &other.rat;
        Surd::new(rat, coef, rad)
    }

    pub fn neg(&self) -> Self {
        Surd {
            rat: -&self.rat,
            coef: -&self.coef,
            rad: self.rad.clone(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Surd::new(&self.rat * k, &self.coef * k, self.rad.clone())
    }

    /// Exact ordering, valid for any pair of radicands.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let s = if self.is_rational() || other.is_rational() || self.rad == other.rad {
            self.sub(other).signum()
        } else {
            // sign of A + B√d1 − C√d2 with u = A + B√d1 and v = C√d2
            let a = &self.rat - &other.rat;
            let su = sign_linear(&a, &self.coef, &self.rad);
            let sv = sign_of(&other.coef);
            if su != sv {
                if su > sv {
                    1
                } else {
                    -1
                }
            } else if su == 0 {
                0
            } else {
                // u² − v² = A² + B²d1 − C²d2 + 2AB√d1
                let d1 = BigRational::from_integer(self.rad.clone());
                let d2 = BigRational::from_integer(other.rad.clone());
                let rat = &a * &a + &self.coef * &self.coef * d1 - &other.coef * &other.coef * d2;
                let coef = BigRational::from_integer(BigInt::from(2)) * &a * &self.coef;
                let sw = sign_linear(&rat, &coef, &self.rad);
                if su > 0 {
                    sw
                } else {
                    -sw
                }
            }
        };
        s.cmp(&0)
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

pub(crate) fn parse_decimal_rational(text: &str) -> Result<BigRational, KdcError> {
    let t = text.trim();
    let bad = || KdcError::Parse(format!("not a decimal literal: {text:?}"));
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], body[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    if neg {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

fn parse_rational(text: &str) -> Result<BigRational, KdcError> {
    let t = text.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| KdcError::Parse(format!("bad rational {t:?}")))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| KdcError::Parse(format!("bad rational {t:?}")))?;
            if d.is_zero() {
                return Err(KdcError::Parse(format!("zero denominator in {t:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => parse_decimal_rational(t),
    }
}

fn fmt_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Text form: `p/q` for rationals, `p/q + r/s*sqrt(d)` otherwise.
impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", fmt_rational(&self.rat));
        }
        let (op, mag) = if self.coef.is_negative() {
            ("-", -&self.coef)
        } else {
            ("+", self.coef.clone())
        };
        write!(
            f,
            "{} {} {}*sqrt({})",
            fmt_rational(&self.rat),
            op,
            fmt_rational(&mag),
            self.rad
        )
    }
}

impl FromStr for Surd {
    type Err = KdcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let Some(sq) = t.find("*sqrt(") else {
            return parse_rational(t).map(Surd::from_rational);
        };
        let bad = || KdcError::Parse(format!("bad surd literal {s:?}"));
        let rad_text = t[sq + 6..].strip_suffix(')').ok_or_else(bad)?;
        let rad = BigInt::from_str(rad_text.trim()).map_err(|_| bad())?;
        let head = &t[..sq];
        // split "a + b" / "a - b" at the last binary operator
        let split = head
            .char_indices()
            .rev()
            .find(|&(i, c)| (c == '+' || c == '-') && i > 0 && head[..i].ends_with(' '))
            .map(|(i, _)| i)
            .ok_or_else(bad)?;
        let rat = parse_rational(&head[..split])?;
        let mut coef = parse_rational(&head[split + 1..])?;
        if &head[split..split + 1] == "-" {
            coef = -coef;
        }
        if rad.is_negative() {
            return Err(bad());
        }
        Ok(Surd::new(rat, coef, rad))
    }
}
