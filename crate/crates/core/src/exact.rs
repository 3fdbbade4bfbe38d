//! Exact arithmetic in a quadratic field `Q(sqrt d)`.
//!
//! Distances `R = sqrt(r^2 + r0^2 - 2 r r0 c)` between points with rational
//! coordinates are generally irrational, so closed forms that depend on
//! `x = s + R` and `y = s - R` are evaluated as `a + b sqrt(d)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::special::poly::PolyField;

/// `a + b sqrt(d)`. A value with `b = 0` is rational and carries `d = 0`;
/// mixing two values with different non-zero `d` panics.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadSurd {
    pub a: BigRational,
    pub b: BigRational,
    pub d: BigRational,
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {} sqrt({})", self.a, self.b, self.d)
        }
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact square root of a non-negative rational, if it has one.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let sn = n.sqrt();
    let sd = d.sqrt();
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

impl QuadSurd {
    pub fn rational(a: BigRational) -> Self {
        QuadSurd {
            a,
            b: BigRational::zero(),
            d: BigRational::zero(),
        }
    }

    /// `sqrt(x)` for rational `x >= 0`.
    pub fn sqrt_of(x: &BigRational) -> Self {
        assert!(!x.is_negative(), "QuadSurd::sqrt_of needs x >= 0");
        match rational_sqrt(x) {
            Some(s) => Self::rational(s),
            None => QuadSurd {
                a: BigRational::zero(),
                b: BigRational::one(),
                d: x.clone(),
            },
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value, if the irrational part vanishes.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    /// `a - b sqrt(d)`.
    pub fn conj(&self) -> Self {
        QuadSurd {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// `a^2 - b^2 d`, rational.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * &self.d
    }

    fn field(&self, other: &Self) -> BigRational {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => BigRational::zero(),
            (false, true) => self.d.clone(),
            (true, false) => other.d.clone(),
            (false, false) => {
                assert_eq!(self.d, other.d, "QuadSurd values from different fields");
                self.d.clone()
            }
        }
    }

    fn normalized(a: BigRational, b: BigRational, d: BigRational) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            QuadSurd { a, b, d }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &BigRational| crate::bigfloat::BigFloat::from_rational(x).to_f64();
        f(&self.a) + f(&self.b) * f(&self.d).sqrt()
    }
}

impl From<BigRational> for QuadSurd {
    fn from(a: BigRational) -> Self {
        Self::rational(a)
    }
}

impl Add for QuadSurd {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = self.field(&o);
        Self::normalized(self.a + o.a, self.b + o.b, d)
    }
}

impl Sub for QuadSurd {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let d = self.field(&o);
        Self::normalized(self.a - o.a, self.b - o.b, d)
    }
}

impl Mul for QuadSurd {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.field(&o);
        let a = &self.a * &o.a + &self.b * &o.b * &d;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::normalized(a, b, d)
    }
}

impl Div for QuadSurd {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "QuadSurd division by zero");
        let num = self * o.conj();
        Self::normalized(num.a / &n, num.b / &n, num.d)
    }
}

/// Always zero: the field has no meaningful remainder.
impl Rem for QuadSurd {
    type Output = Self;
    fn rem(self, _o: Self) -> Self {
        Self::zero()
    }
}

impl Neg for QuadSurd {
    type Output = Self;
    fn neg(self) -> Self {
        QuadSurd {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Zero for QuadSurd {
    fn zero() -> Self {
        Self::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadSurd {
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
}

impl Num for QuadSurd {
    type FromStrRadixErr = <BigRational as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        BigRational::from_str_radix(s, radix).map(Self::rational)
    }
}

impl PolyField for QuadSurd {
    fn from_int(n: i64) -> Self {
        Self::rational(q(n))
    }
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> BigRational {
    assert!(x.is_finite(), "rational_from_f64 needs a finite value");
    if x == 0.0 {
        return BigRational::zero();
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { Sign::Minus } else { Sign::Plus };
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), biased - 1075)
    };
    let m = BigInt::from_biguint(sign, mant.into());
    if exp >= 0 {
        BigRational::from_integer(m << exp as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-exp) as usize)
    }
}

/// Parse `"p/q"`, `"p"` or a finite decimal such as `"3.25"` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").trim_start_matches('0').parse().unwrap_or_default();
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let v = BigRational::new(digits, scale);
    Some(if neg { -v } else { v })
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_serde {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).ok_or_else(|| D::Error::custom(format!("not a rational: {s}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn field_arithmetic() {
        let s = QuadSurd::sqrt_of(&r(2, 1));
        assert_eq!((s.clone() * s.clone()).as_rational(), Some(r(2, 1)));
        let x = QuadSurd::from(r(3, 1)) + s.clone();
        let y = QuadSurd::from(r(3, 1)) - s.clone();
        assert_eq!((x.clone() * y.clone()).as_rational(), Some(r(7, 1)));
        let back = (x.clone() / y.clone()) * y;
        assert_eq!(back, x);
        assert!((s.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn perfect_squares_stay_rational() {
        assert_eq!(QuadSurd::sqrt_of(&r(9, 4)).as_rational(), Some(r(3, 2)));
        assert_eq!(rational_sqrt(&r(2, 1)), None);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("7/3"), Some(r(7, 3)));
        assert_eq!(parse_rational("-3.25"), Some(r(-13, 4)));
        assert_eq!(parse_rational("11"), Some(r(11, 1)));
        assert_eq!(parse_rational("0.0"), Some(r(0, 1)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(rational_from_f64(0.375), r(3, 8));
        assert_eq!(rational_from_f64(-6.0), r(-6, 1));
    }
}
