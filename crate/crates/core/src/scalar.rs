//! Scalar abstraction shared by the hardware (`f64`) and extended
//! ([`BigFloat`]) code paths, plus complex helpers that stay finite where the
//! naive `num_complex` formulas would overflow.

use std::fmt::Debug;
use std::ops::Neg;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::bigfloat::{self, BigFloat};
use crate::special::poly::PolyField;

pub type ComplexScalar = Complex<f64>;
pub type ExtendedScalar = Complex<BigFloat>;

/// Real field used by the generic numerics.
pub trait Real: Clone + Debug + Num + Neg<Output = Self> + PartialOrd + PolyField + Send + Sync + 'static {
    /// True for the software floating type.
    const EXTENDED: bool;

    fn from_f64(x: f64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn from_big(x: &BigFloat) -> Self;
    fn to_big(&self) -> BigFloat;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn floor(&self) -> Self;
    fn pi() -> Self;
    /// Significant decimal digits carried by the current precision.
    fn digits() -> u32;
    fn is_finite(&self) -> bool;
    /// Bernoulli number `B_{2k}`.
    fn bernoulli_2k(k: usize) -> Self;

    fn epsilon() -> f64 {
        10f64.powi(-(Self::digits() as i32))
    }

    fn half() -> Self {
        Self::from_f64(0.5)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Real for f64 {
    const EXTENDED: bool = false;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn from_big(x: &BigFloat) -> Self {
        x.to_f64()
    }
    fn to_big(&self) -> BigFloat {
        BigFloat::from_f64(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn digits() -> u32 {
        16
    }
    fn epsilon() -> f64 {
        f64::EPSILON
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn bernoulli_2k(k: usize) -> Self {
        static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
        let table = TABLE.get_or_init(|| {
            (0..120)
                .map(|j| bernoulli_rational(j).to_f64().unwrap_or(f64::INFINITY))
                .collect()
        });
        match table.get(k) {
            Some(v) => *v,
            None => bernoulli_rational(k).to_f64().unwrap_or(f64::INFINITY),
        }
    }
}

impl Real for BigFloat {
    const EXTENDED: bool = true;

    fn from_f64(x: f64) -> Self {
        BigFloat::from_f64(x)
    }
    fn from_i64(n: i64) -> Self {
        BigFloat::from_i64(n)
    }
    fn from_rational(q: &BigRational) -> Self {
        BigFloat::from_rational(q)
    }
    fn from_big(x: &BigFloat) -> Self {
        x.clone() + BigFloat::zero()
    }
    fn to_big(&self) -> BigFloat {
        self.clone()
    }
    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
    fn abs(&self) -> Self {
        BigFloat::abs(self)
    }
    fn sqrt(&self) -> Self {
        BigFloat::sqrt(self)
    }
    fn exp(&self) -> Self {
        BigFloat::exp(self)
    }
    fn ln(&self) -> Self {
        BigFloat::ln(self)
    }
    fn sin(&self) -> Self {
        self.sin_cos().0
    }
    fn cos(&self) -> Self {
        self.sin_cos().1
    }
    fn atan2(&self, x: &Self) -> Self {
        BigFloat::atan2(self, x)
    }
    fn floor(&self) -> Self {
        BigFloat::floor(self)
    }
    fn pi() -> Self {
        BigFloat::pi()
    }
    fn digits() -> u32 {
        bigfloat::working_digits()
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn bernoulli_2k(k: usize) -> Self {
        BigFloat::from_rational(&bernoulli_rational(k))
    }
}

/// Exact `B_{2k}`, cached process-wide.
pub fn bernoulli_rational(k: usize) -> BigRational {
    static CACHE: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(BigRational::one());
    }
    while cache.len() <= k {
        let m = cache.len();
        let two_m1 = 2 * m + 1;
        // B_{2m} = [(2m+1)/2 - sum_{j<m} C(2m+1, 2j) B_{2j}] / (2m+1)
        let mut acc = BigRational::new(BigInt::from(two_m1), BigInt::from(2));
        let mut binom = BigInt::one();
        for (j, b) in cache.iter().enumerate() {
            if j > 0 {
                // C(n, 2j) from C(n, 2j-2)
                let i = 2 * j as u64;
                binom = binom * BigInt::from(two_m1 as u64 - i + 2) * BigInt::from(two_m1 as u64 - i + 1)
                    / (BigInt::from(i) * BigInt::from(i - 1));
            }
            acc -= BigRational::from_integer(binom.clone()) * b;
        }
        let v = acc / BigRational::from_integer(BigInt::from(two_m1));
        cache.push(v);
    }
    cache[k].clone()
}

pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x)
}

pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::from_f64(re), T::from_f64(im))
}

pub fn from_real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub fn to_c64<T: Real>(z: &Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

pub fn to_big_c<T: Real>(z: &Complex<T>) -> Complex<BigFloat> {
    Complex::new(z.re.to_big(), z.im.to_big())
}

pub fn from_big_c<T: Real>(z: &Complex<BigFloat>) -> Complex<T> {
    Complex::new(T::from_big(&z.re), T::from_big(&z.im))
}

/// Modulus without intermediate overflow.
pub fn cabs<T: Real>(z: &Complex<T>) -> T {
    let a = z.re.abs();
    let b = z.im.abs();
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi.is_zero() {
        return hi;
    }
    let q = lo / hi.clone();
    hi * (T::one() + q.clone() * q).sqrt()
}

pub fn cabs_f64<T: Real>(z: &Complex<T>) -> f64 {
    cabs(z).to_f64()
}

pub fn is_finite_c<T: Real>(z: &Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Complex quotient by Smith's method.
pub fn cdiv<T: Real>(a: &Complex<T>, b: &Complex<T>) -> Complex<T> {
    if b.im.is_zero() {
        return Complex::new(a.re.clone() / b.re.clone(), a.im.clone() / b.re.clone());
    }
    if b.re.abs() >= b.im.abs() {
        let r = b.im.clone() / b.re.clone();
        let den = b.re.clone() + b.im.clone() * r.clone();
        Complex::new(
            (a.re.clone() + a.im.clone() * r.clone()) / den.clone(),
            (a.im.clone() - a.re.clone() * r) / den,
        )
    } else {
        let r = b.re.clone() / b.im.clone();
        let den = b.re.clone() * r.clone() + b.im.clone();
        Complex::new(
            (a.re.clone() * r.clone() + a.im.clone()) / den.clone(),
            (a.im.clone() * r - a.re.clone()) / den,
        )
    }
}

pub fn cinv<T: Real>(b: &Complex<T>) -> Complex<T> {
    cdiv(&Complex::one(), b)
}

pub fn cscale<T: Real>(z: &Complex<T>, s: &T) -> Complex<T> {
    Complex::new(z.re.clone() * s.clone(), z.im.clone() * s.clone())
}

pub fn cexp<T: Real>(z: &Complex<T>) -> Complex<T> {
    let m = z.re.exp();
    if z.im.is_zero() {
        return Complex::new(m, T::zero());
    }
    Complex::new(m.clone() * z.im.cos(), m * z.im.sin())
}

/// Principal logarithm; `z` must be nonzero.
pub fn cln<T: Real>(z: &Complex<T>) -> Complex<T> {
    if z.im.is_zero() && z.re > T::zero() {
        return Complex::new(z.re.ln(), T::zero());
    }
    Complex::new(cabs(z).ln(), z.im.atan2(&z.re))
}

/// Principal power `z^w`; `0^w` is 0 for `Re w > 0` and 1 for `w = 0`.
pub fn cpow<T: Real>(z: &Complex<T>, w: &Complex<T>) -> Complex<T> {
    if z.is_zero() {
        return if w.is_zero() {
            Complex::one()
        } else {
            Complex::zero()
        };
    }
    cexp(&(cln(z) * w.clone()))
}

/// `x^w` for real `x > 0`.
pub fn rpow<T: Real>(x: &T, w: &Complex<T>) -> Complex<T> {
    if x.is_zero() {
        return if w.is_zero() {
            Complex::one()
        } else {
            Complex::zero()
        };
    }
    let l = x.ln();
    cexp(&cscale(w, &l))
}

pub fn cpowi<T: Real>(z: &Complex<T>, n: u32) -> Complex<T> {
    let mut result = Complex::one();
    let mut base = z.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            result = result * base.clone();
        }
        base = base.clone() * base;
        n >>= 1;
    }
    result
}

pub fn powi<T: Real>(x: &T, n: u32) -> T {
    let mut result = T::one();
    let mut base = x.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            result = result * base.clone();
        }
        base = base.clone() * base;
        n >>= 1;
    }
    result
}

pub fn csqrt<T: Real>(z: &Complex<T>) -> Complex<T> {
    if z.is_zero() {
        return Complex::zero();
    }
    if z.im.is_zero() {
        return if z.re > T::zero() {
            Complex::new(z.re.sqrt(), T::zero())
        } else {
            Complex::new(T::zero(), (-z.re.clone()).sqrt())
        };
    }
    let m = cabs(z);
    let two = T::from_i64(2);
    let re = ((m.clone() + z.re.abs()) / two.clone()).sqrt();
    let other = z.im.abs() / (two * re.clone());
    let sign_im = if z.im < T::zero() { -T::one() } else { T::one() };
    if z.re >= T::zero() {
        Complex::new(re, other * sign_im)
    } else {
        Complex::new(other, re * sign_im)
    }
}

/// Nearest integer to `x` if `x` lies within `tol * max(1, |x|)` of it.
pub fn near_integer<T: Real>(x: &T, tol: f64) -> Option<i64> {
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > 1e15 {
        return None;
    }
    let n = xf.round();
    let diff = (x.clone() - T::from_f64(n)).abs().to_f64();
    if diff <= tol * xf.abs().max(1.0) {
        Some(n as i64)
    } else {
        None
    }
}

/// The integer `z` equals, if `z` is real and (numerically) integral.
pub fn complex_integer<T: Real>(z: &Complex<T>) -> Option<i64> {
    let tol = 8.0 * T::epsilon();
    if z.im.abs().to_f64() > tol * cabs_f64(z).max(1.0) {
        return None;
    }
    near_integer(&z.re, tol)
}

pub fn is_nonpositive_integer<T: Real>(z: &Complex<T>) -> Option<i64> {
    complex_integer(z).filter(|n| *n <= 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        let b = |k| bernoulli_rational(k);
        assert_eq!(b(1), BigRational::new(1.into(), 6.into()));
        assert_eq!(b(2), BigRational::new((-1).into(), 30.into()));
        assert_eq!(b(6), BigRational::new(691.into(), 2730.into()).neg());
        assert!((f64::bernoulli_2k(10) + 529.124242424242).abs() < 1e-9);
    }

    #[test]
    fn smith_division_survives_large_magnitudes() {
        let a = Complex::new(1e300, 2e300);
        let b = Complex::new(3e300, -1e300);
        let q = cdiv(&a, &b);
        let expected = Complex::new(0.1, 0.7);
        assert!((q - expected).norm() < 1e-15);
    }

    #[test]
    fn sqrt_and_log_branches() {
        let z = Complex::new(-4.0, 0.0);
        assert_eq!(csqrt(&z), Complex::new(0.0, 2.0));
        let l = cln(&Complex::new(-1.0, 0.0));
        assert!((l.im - std::f64::consts::PI).abs() < 1e-15);
        let w = csqrt(&Complex::new(-3.0, -4.0));
        assert!((w - Complex::new(1.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn integer_detection() {
        assert_eq!(is_nonpositive_integer(&Complex::new(-3.0, 0.0)), Some(-3));
        assert_eq!(is_nonpositive_integer(&Complex::new(-3.0, 1e-3)), None);
        assert_eq!(is_nonpositive_integer(&Complex::new(2.0, 0.0)), None);
        assert_eq!(complex_integer(&Complex::new(4.000000000000001, 0.0)), Some(4));
    }
}
