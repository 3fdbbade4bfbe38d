//! Binary floating point with a run-time selectable mantissa width.
//!
//! A [`BigFloat`] is `mant * 2^exp` with an arbitrary-size integer mantissa.
//! Every arithmetic result is rounded (half away from zero) to the working
//! precision of the calling thread, which is set with [`with_digits`] or
//! [`with_bits`]. Values created at one precision may be freely combined with
//! values created at another; the result always takes the current precision.
//!
//! The exponent range is that of `i64`, so quantities such as `330!` or
//! `2^-2000` are represented without scaling tricks.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Decimal digits used when no precision has been selected on this thread.
pub const DEFAULT_DIGITS: u32 = 60;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const GUARD_BITS: u64 = 8;

thread_local! {
    static PREC_BITS: Cell<u64> = const { Cell::new(0) };
    static CONSTANTS: RefCell<HashMap<(u8, u64), BigFloat>> = RefCell::new(HashMap::new());
}

pub fn digits_to_bits(digits: u32) -> u64 {
    (digits as f64 * LOG2_10).ceil() as u64 + GUARD_BITS
}

/// Mantissa width, in bits, of the current thread.
pub fn precision_bits() -> u64 {
    PREC_BITS.with(|p| {
        let b = p.get();
        if b == 0 {
            digits_to_bits(DEFAULT_DIGITS)
        } else {
            b
        }
    })
}

/// Decimal digits carried by the current thread's working precision.
pub fn working_digits() -> u32 {
    ((precision_bits().saturating_sub(GUARD_BITS)) as f64 / LOG2_10).floor() as u32
}

struct Restore(u64);

impl Drop for Restore {
    fn drop(&mut self) {
        PREC_BITS.with(|p| p.set(self.0));
    }
}

/// Run `f` with the working precision set to `bits` mantissa bits.
pub fn with_bits<R>(bits: u64, f: impl FnOnce() -> R) -> R {
    let old = PREC_BITS.with(|p| p.replace(bits.max(16)));
    let _restore = Restore(old);
    f()
}

/// Run `f` with the working precision set to `digits` decimal digits.
pub fn with_digits<R>(digits: u32, f: impl FnOnce() -> R) -> R {
    with_bits(digits_to_bits(digits), f)
}

#[derive(Clone)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

fn round_to(mant: BigInt, exp: i64, prec: u64) -> BigFloat {
    if mant.is_zero() {
        return BigFloat::zero();
    }
    let bits = mant.bits();
    if bits <= prec {
        return BigFloat { mant, exp };
    }
    let shift = bits - prec;
    let (sign, mag) = mant.into_parts();
    let half = BigUint::one() << (shift - 1);
    let mag: BigUint = (mag + half) >> shift;
    BigFloat {
        mant: BigInt::from_biguint(sign, mag),
        exp: exp + shift as i64,
    }
}

fn pow2(e: i64) -> f64 {
    let mut x = 1.0f64;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

impl BigFloat {
    pub fn from_parts(mant: BigInt, exp: i64) -> Self {
        round_to(mant, exp, precision_bits())
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        round_to(n.clone(), 0, precision_bits())
    }

    pub fn from_i64(n: i64) -> Self {
        round_to(BigInt::from(n), 0, precision_bits())
    }

    /// Exact conversion; panics on NaN or infinity.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "BigFloat::from_f64 called with {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let mant = if negative {
            -BigInt::from(m)
        } else {
            BigInt::from(m)
        };
        round_to(mant, e, precision_bits().max(53))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let prec = precision_bits();
        with_bits(prec + 4, || {
            BigFloat::from_bigint(q.numer()) / BigFloat::from_bigint(q.denom())
        })
        .rounded(prec)
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    fn rounded(self, prec: u64) -> Self {
        round_to(self.mant, self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    /// `e` such that `2^(e-1) <= |x| < 2^e`; `i64::MIN` for zero.
    pub fn top_exponent(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    /// Multiply by `2^k` exactly.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 64 {
            (self.mant.magnitude() >> (bits - 64), self.exp + (bits - 64) as i64)
        } else {
            (self.mant.magnitude().clone(), self.exp)
        };
        let top = e + 64;
        if top > 1100 {
            return if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if top < -1200 {
            return if self.is_negative() { -0.0 } else { 0.0 };
        }
        let v = m.to_u64().unwrap_or(u64::MAX) as f64 * pow2(e);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    fn add_impl(a: &BigFloat, b: &BigFloat, prec: u64) -> BigFloat {
        if a.is_zero() {
            return b.clone().rounded(prec);
        }
        if b.is_zero() {
            return a.clone().rounded(prec);
        }
        let (hi, lo) = if a.top_exponent() >= b.top_exponent() {
            (a, b)
        } else {
            (b, a)
        };
        if hi.top_exponent() - lo.top_exponent() > prec as i64 + 2 {
            return hi.clone().rounded(prec);
        }
        let e = a.exp.min(b.exp);
        let m = (&a.mant << (a.exp - e) as usize) + (&b.mant << (b.exp - e) as usize);
        round_to(m, e, prec)
    }

    fn mul_impl(a: &BigFloat, b: &BigFloat, prec: u64) -> BigFloat {
        round_to(&a.mant * &b.mant, a.exp + b.exp, prec)
    }

    fn div_impl(a: &BigFloat, b: &BigFloat, prec: u64) -> BigFloat {
        assert!(!b.is_zero(), "BigFloat division by zero");
        if a.is_zero() {
            return BigFloat::zero();
        }
        let shift = (prec as i64 + 2 + b.mant.bits() as i64 - a.mant.bits() as i64).max(0);
        let q = (&a.mant << shift as usize) / &b.mant;
        round_to(q, a.exp - shift - b.exp, prec)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "BigFloat::sqrt of a negative number");
        if self.is_zero() {
            return self.clone();
        }
        let prec = precision_bits();
        let mut s = 2 * prec as i64 + 4 - self.mant.bits() as i64;
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let mag = self.mant.magnitude();
        let m = if s >= 0 {
            mag << s as usize
        } else {
            mag >> (-s) as usize
        };
        let r = m.sqrt();
        round_to(BigInt::from(r), (self.exp - s) / 2, prec)
    }

    pub fn floor(&self) -> Self {
        if self.exp >= 0 || self.is_zero() {
            return self.clone();
        }
        let q = self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize));
        BigFloat::from_parts(q, 0)
    }

    /// Nearest integer as `i64`, if it fits.
    pub fn round_i64(&self) -> Option<i64> {
        let half = BigFloat::from_f64(0.5);
        (self + &half).floor().to_bigint().to_i64()
    }

    fn to_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            // truncates toward zero
            let d = BigInt::one() << (-self.exp) as usize;
            &self.mant / d
        }
    }

    fn cached(key: u8, compute: fn(u64) -> BigFloat) -> BigFloat {
        let prec = precision_bits();
        CONSTANTS.with(|c| {
            if let Some(v) = c.borrow().get(&(key, prec)) {
                return v.clone();
            }
            let v = compute(prec);
            c.borrow_mut().insert((key, prec), v.clone());
            v
        })
    }

    pub fn pi() -> Self {
        Self::cached(0, |prec| {
            let b = prec + 32;
            let pi = atan_inv_fixed(5, b) * 16 - atan_inv_fixed(239, b) * 4;
            round_to(pi, -(b as i64), prec)
        })
    }

    pub fn ln2() -> Self {
        Self::cached(1, |prec| {
            let b = prec + 32;
            round_to(atanh_inv_fixed(3, b) * 2, -(b as i64), prec)
        })
    }

    pub fn exp(&self) -> Self {
        let prec = precision_bits();
        if self.is_zero() {
            return BigFloat::one();
        }
        let xf = self.to_f64();
        assert!(xf.abs() < 1e15, "BigFloat::exp argument {xf} out of range");
        let k = (xf / std::f64::consts::LN_2).round() as i64;
        let scale = 8i64;
        let wp = prec + 24 + 64 - (k.unsigned_abs().leading_zeros() as u64) + scale as u64;
        with_bits(wp, || {
            let r = self - &(BigFloat::ln2() * BigFloat::from_i64(k));
            let r = r.ldexp(-scale);
            let mut sum = BigFloat::one();
            let mut term = BigFloat::one();
            let mut n = 1i64;
            loop {
                term = &(&term * &r) / &BigFloat::from_i64(n);
                if term.is_zero() || term.top_exponent() < sum.top_exponent() - wp as i64 - 4 {
                    break;
                }
                sum += &term;
                n += 1;
            }
            for _ in 0..scale {
                sum = &sum * &sum;
            }
            sum.ldexp(k)
        })
        .rounded(prec)
    }

    pub fn ln(&self) -> Self {
        assert!(
            !self.is_negative() && !self.is_zero(),
            "BigFloat::ln of a non-positive number"
        );
        let prec = precision_bits();
        let mut t = self.top_exponent();
        let wp = prec + 24 + 64 - (t.unsigned_abs().leading_zeros() as u64);
        with_bits(wp, || {
            let mut y = self.ldexp(-t);
            // y in [1/2, 1); move to [1/sqrt2, sqrt2)
            if y.to_f64() < std::f64::consts::FRAC_1_SQRT_2 {
                y = y.ldexp(1);
                t -= 1;
            }
            let one = BigFloat::one();
            let u = &(&y - &one) / &(&y + &one);
            let u2 = &u * &u;
            let mut pow = u.clone();
            let mut sum = u.clone();
            let mut k = 1i64;
            loop {
                pow = &pow * &u2;
                let term = &pow / &BigFloat::from_i64(2 * k + 1);
                if term.is_zero() || term.top_exponent() < sum.top_exponent() - wp as i64 - 4 {
                    break;
                }
                sum += &term;
                k += 1;
            }
            sum.ldexp(1) + BigFloat::ln2() * BigFloat::from_i64(t)
        })
        .rounded(prec)
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = precision_bits();
        if self.is_zero() {
            return (BigFloat::zero(), BigFloat::one());
        }
        let xf = self.to_f64();
        assert!(xf.abs() < 1e15, "BigFloat::sin_cos argument {xf} out of range");
        let k = (xf / std::f64::consts::FRAC_PI_2).round() as i64;
        let wp = prec + 24 + 64 - (k.unsigned_abs().leading_zeros() as u64);
        let (s, c) = with_bits(wp, || {
            let r = self - &(BigFloat::pi().ldexp(-1) * BigFloat::from_i64(k));
            let r2 = &r * &r;
            let mut s_sum = r.clone();
            let mut c_sum = BigFloat::one();
            let mut s_term = r.clone();
            let mut c_term = BigFloat::one();
            let mut n = 1i64;
            loop {
                s_term = -(&(&s_term * &r2) / &BigFloat::from_i64((2 * n) * (2 * n + 1)));
                c_term = -(&(&c_term * &r2) / &BigFloat::from_i64((2 * n - 1) * (2 * n)));
                s_sum += &s_term;
                c_sum += &c_term;
                let tiny = |t: &BigFloat| t.is_zero() || t.top_exponent() < -(wp as i64) - 8;
                if tiny(&s_term) && tiny(&c_term) {
                    break;
                }
                n += 1;
            }
            match k.rem_euclid(4) {
                0 => (s_sum, c_sum),
                1 => (c_sum, -s_sum),
                2 => (-s_sum, -c_sum),
                _ => (-c_sum, s_sum),
            }
        });
        (s.rounded(prec), c.rounded(prec))
    }

    pub fn atan(&self) -> Self {
        let prec = precision_bits();
        if self.is_zero() {
            return self.clone();
        }
        let wp = prec + 24;
        with_bits(wp, || {
            let neg = self.is_negative();
            let mut a = self.abs();
            let one = BigFloat::one();
            let mut offset = None;
            if a > one {
                a = &one / &a;
                offset = Some(BigFloat::pi().ldexp(-1));
            }
            for _ in 0..3 {
                a = &a / &(&one + &(&one + &(&a * &a)).sqrt());
            }
            let a2 = &a * &a;
            let mut pow = a.clone();
            let mut sum = a.clone();
            let mut k = 1i64;
            loop {
                pow = -(&pow * &a2);
                let term = &pow / &BigFloat::from_i64(2 * k + 1);
                if term.is_zero() || term.top_exponent() < sum.top_exponent() - wp as i64 - 4 {
                    break;
                }
                sum += &term;
                k += 1;
            }
            let mut res = sum.ldexp(3);
            if let Some(o) = offset {
                res = o - res;
            }
            if neg {
                -res
            } else {
                res
            }
        })
        .rounded(prec)
    }

    pub fn atan2(&self, x: &BigFloat) -> Self {
        let y = self;
        if x.is_zero() {
            return if y.is_zero() {
                BigFloat::zero()
            } else if y.is_negative() {
                -BigFloat::pi().ldexp(-1)
            } else {
                BigFloat::pi().ldexp(-1)
            };
        }
        let base = (y / x).atan();
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base - BigFloat::pi()
        } else {
            base + BigFloat::pi()
        }
    }

    /// Scientific notation with `digits` significant digits, e.g. `-1.25e-3`.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return format!("{}e0", format_mantissa(&"0".repeat(digits)));
        }
        let mut e10 = ((self.top_exponent() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        for _ in 0..4 {
            let n = self.scaled_integer(digits as i64 - 1 - e10);
            let s = n.magnitude().to_string();
            if s.len() > digits {
                e10 += 1;
                continue;
            }
            if s.len() < digits {
                e10 -= 1;
                continue;
            }
            let sign = if self.is_negative() { "-" } else { "" };
            return format!("{sign}{}e{e10}", format_mantissa(&s));
        }
        // unreachable for sane input; fall back to the last attempt
        let n = self.scaled_integer(digits as i64 - 1 - e10);
        let sign = if self.is_negative() { "-" } else { "" };
        format!("{sign}{}e{e10}", format_mantissa(&n.magnitude().to_string()))
    }

    /// `round(self * 10^k)` computed exactly.
    fn scaled_integer(&self, k: i64) -> BigInt {
        let ten = BigInt::from(10);
        let mut num = self.mant.clone();
        let mut den = BigInt::one();
        if k >= 0 {
            num *= num_traits::pow(ten, k as usize);
        } else {
            den *= num_traits::pow(ten, (-k) as usize);
        }
        if self.exp >= 0 {
            num <<= self.exp as usize;
        } else {
            den <<= (-self.exp) as usize;
        }
        let two = BigInt::from(2);
        let (q, r) = num.div_rem(&den);
        if (r.abs() * &two) >= den {
            if num.is_negative() {
                q - 1
            } else {
                q + 1
            }
        } else {
            q
        }
    }

    /// Parse `[-]digits[.digits][e[+-]digits]`.
    pub fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (mant_str, exp_part) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
            None => (s, 0),
        };
        let (neg, body) = match mant_str.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mant_str.strip_prefix('+').unwrap_or(mant_str)),
        };
        let (int_part, frac_part) = match body.find('.') {
            Some(i) => (&body[..i], &body[i + 1..]),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let mut n = BigInt::parse_bytes(digits.as_bytes(), 10)?;
        if neg {
            n = -n;
        }
        let e10 = exp_part - frac_part.len() as i64;
        let prec = precision_bits();
        let v = with_bits(prec + 8, || {
            let ten = BigInt::from(10);
            if e10 >= 0 {
                BigFloat::from_bigint(&(n * num_traits::pow(ten, e10 as usize)))
            } else {
                BigFloat::from_bigint(&n)
                    / BigFloat::from_bigint(&num_traits::pow(ten, (-e10) as usize))
            }
        });
        Some(v.rounded(prec))
    }
}

fn format_mantissa(s: &str) -> String {
    if s.len() == 1 {
        s.to_string()
    } else {
        format!("{}.{}", &s[..1], &s[1..])
    }
}

/// `atan(1/n) * 2^bits` in fixed point.
fn atan_inv_fixed(n: u64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits as usize;
    let n2 = BigInt::from(n * n);
    let mut x = one / BigInt::from(n);
    let mut sum = x.clone();
    let mut k = 1u64;
    loop {
        x /= &n2;
        let term = &x / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// `atanh(1/n) * 2^bits` in fixed point.
fn atanh_inv_fixed(n: u64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits as usize;
    let n2 = BigInt::from(n * n);
    let mut x = one / BigInt::from(n);
    let mut sum = x.clone();
    let mut k = 1u64;
    loop {
        x /= &n2;
        let term = &x / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum += term;
        k += 1;
    }
    sum
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat {
            mant: BigInt::one(),
            exp: 0,
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl BigFloat {
    fn cmp_value(&self, other: &Self) -> Ordering {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        let rank = |s: Sign| match s {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        match rank(sa).cmp(&rank(sb)) {
            Ordering::Equal => {}
            o => return o,
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let mag = match self.top_exponent().cmp(&other.top_exponent()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let a = self.mant.magnitude() << (self.exp - e) as usize;
                let b = other.mant.magnitude() << (other.exp - e) as usize;
                a.cmp(&b)
            }
            o => o,
        };
        if sa == Sign::Minus {
            mag.reverse()
        } else {
            mag
        }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -(self.clone())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:expr) => {
        impl $tr<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                $imp(self, rhs, precision_bits())
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                $imp(&self, &rhs, precision_bits())
            }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                $imp(&self, rhs, precision_bits())
            }
        }
        impl $tr<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                $imp(self, &rhs, precision_bits())
            }
        }
    };
}

fn sub_impl(a: &BigFloat, b: &BigFloat, prec: u64) -> BigFloat {
    BigFloat::add_impl(a, &(-b), prec)
}

fn rem_impl(a: &BigFloat, b: &BigFloat, prec: u64) -> BigFloat {
    // truncated remainder, matching f64 semantics
    let q = BigFloat::div_impl(a, b, prec + a.top_exponent().max(0) as u64 + 8);
    let qi = BigFloat::from_parts(q.to_bigint(), 0);
    sub_impl(a, &BigFloat::mul_impl(&qi, b, prec), prec)
}

forward_binop!(Add, add, BigFloat::add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, BigFloat::mul_impl);
forward_binop!(Div, div, BigFloat::div_impl);
forward_binop!(Rem, rem, rem_impl);

impl AddAssign<&BigFloat> for BigFloat {
    fn add_assign(&mut self, rhs: &BigFloat) {
        *self = BigFloat::add_impl(self, rhs, precision_bits());
    }
}
impl AddAssign<BigFloat> for BigFloat {
    fn add_assign(&mut self, rhs: BigFloat) {
        *self = BigFloat::add_impl(self, &rhs, precision_bits());
    }
}
impl SubAssign<BigFloat> for BigFloat {
    fn sub_assign(&mut self, rhs: BigFloat) {
        *self = sub_impl(self, &rhs, precision_bits());
    }
}
impl MulAssign<BigFloat> for BigFloat {
    fn mul_assign(&mut self, rhs: BigFloat) {
        *self = BigFloat::mul_impl(self, &rhs, precision_bits());
    }
}
impl DivAssign<BigFloat> for BigFloat {
    fn div_assign(&mut self, rhs: BigFloat) {
        *self = BigFloat::div_impl(self, &rhs, precision_bits());
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err(format!("radix {radix} not supported"));
        }
        BigFloat::parse_decimal(s).ok_or_else(|| format!("cannot parse {s:?}"))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(25))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(working_digits() as usize);
        write!(f, "{}", self.to_decimal_string(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigFloat, b: &str, digits: u32) {
        let b = BigFloat::parse_decimal(b).unwrap();
        let err = (a - &b).abs();
        let tol = b.abs() * BigFloat::parse_decimal(&format!("1e-{digits}")).unwrap();
        assert!(err <= tol, "{a} vs {b}");
    }

    #[test]
    fn constants_to_sixty_digits() {
        with_digits(60, || {
            close(
                &BigFloat::pi(),
                "3.14159265358979323846264338327950288419716939937510582097494459",
                60,
            );
            close(
                &BigFloat::ln2(),
                "0.693147180559945309417232121458176568075500134360255254120680009",
                60,
            );
        });
    }

    #[test]
    fn exp_ln_sqrt_trig() {
        with_digits(50, || {
            let one = BigFloat::one();
            close(&one.exp(), "2.71828182845904523536028747135266249775724709369995957", 50);
            close(
                &BigFloat::from_i64(10).ln(),
                "2.30258509299404568401799145468436420760110148862877298",
                50,
            );
            close(
                &BigFloat::from_i64(2).sqrt(),
                "1.41421356237309504880168872420969807856967187537694807",
                50,
            );
            let (s, c) = BigFloat::from_i64(1).sin_cos();
            close(&s, "0.841470984807896506652502321630298999622563060798371065", 50);
            close(&c, "0.540302305868139717400936607442976603732310420617922227", 50);
            close(
                &BigFloat::from_i64(1).atan(),
                "0.785398163397448309615660845819875721049292349843776456",
                50,
            );
            close(
                &BigFloat::from_f64(-30.5).exp(),
                "5.6756852326327224618727887238066512771477108512075e-14",
                48,
            );
        });
    }

    #[test]
    fn f64_round_trip_is_exact() {
        for x in [0.1, -3.75e-200, 1.0e300, 5e-324, 123456.789] {
            assert_eq!(BigFloat::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn decimal_string_round_trip() {
        with_digits(40, || {
            let x = BigFloat::from_i64(1) / BigFloat::from_i64(3);
            let s = x.to_decimal_string(40);
            assert_eq!(s, "3.333333333333333333333333333333333333333e-1");
            let back = BigFloat::parse_decimal(&s).unwrap();
            assert!((back - x).abs().to_f64() < 1e-40);
        });
    }

    #[test]
    fn floor_and_ordering() {
        let x = BigFloat::from_f64(-2.5);
        assert_eq!(x.floor().to_f64(), -3.0);
        assert_eq!(BigFloat::from_f64(2.5).floor().to_f64(), 2.0);
        assert!(BigFloat::from_f64(-1.0) < BigFloat::from_f64(0.5));
        assert_eq!(BigFloat::from_f64(2.5).round_i64(), Some(3));
    }

    #[test]
    fn huge_exponent_range() {
        with_digits(30, || {
            let mut f = BigFloat::one();
            for k in 1..=400 {
                f = f * BigFloat::from_i64(k);
            }
            let expected: f64 = (1..=400).map(|k| (k as f64).ln()).sum();
            let l = f.ln().to_f64();
            assert!((l - expected).abs() < 1e-9 * expected);
            assert!(f.to_f64().is_infinite());
        });
    }
}
