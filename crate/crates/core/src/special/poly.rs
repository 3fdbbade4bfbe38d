//! Legendre, associated Legendre, Gegenbauer and Laguerre polynomials by
//! three-term recurrence, plus normalized spherical harmonics.
//!
//! The plain recurrences are generic over [`PolyField`], so the same code runs
//! in `f64`, extended precision, complex arithmetic and exact rationals.

use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Num;

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Field in which the polynomial recurrences are evaluated.
pub trait PolyField: Clone + Num + Neg<Output = Self> {
    fn from_int(n: i64) -> Self;
}

impl PolyField for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
}

impl PolyField for BigFloat {
    fn from_int(n: i64) -> Self {
        BigFloat::from_i64(n)
    }
}

impl PolyField for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl<T: Real> PolyField for Complex<T> {
    fn from_int(n: i64) -> Self {
        Complex::new(T::from_int(n), T::zero())
    }
}

/// Legendre polynomial `P_l(x)`.
pub fn legendre_gen<F: PolyField>(l: usize, x: &F) -> F {
    let mut p0 = F::one();
    if l == 0 {
        return p0;
    }
    let mut p1 = x.clone();
    for k in 1..l {
        let kk = F::from_int(k as i64);
        let p2 = (F::from_int(2 * k as i64 + 1) * x.clone() * p1.clone() - kk * p0)
            / F::from_int(k as i64 + 1);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// All `P_0(x) .. P_l(x)`.
pub fn legendre_table<F: PolyField>(l: usize, x: &F) -> Vec<F> {
    let mut out = Vec::with_capacity(l + 1);
    out.push(F::one());
    if l == 0 {
        return out;
    }
    out.push(x.clone());
    for k in 1..l {
        let p2 = (F::from_int(2 * k as i64 + 1) * x.clone() * out[k].clone()
            - F::from_int(k as i64) * out[k - 1].clone())
            / F::from_int(k as i64 + 1);
        out.push(p2);
    }
    out
}

/// Gegenbauer polynomial `C_n^{(mu)}(x)`.
pub fn gegenbauer_gen<F: PolyField>(n: usize, mu: &F, x: &F) -> F {
    let mut c0 = F::one();
    if n == 0 {
        return c0;
    }
    let two = F::from_int(2);
    let mut c1 = two.clone() * mu.clone() * x.clone();
    for k in 2..=n {
        let kk = F::from_int(k as i64);
        let c2 = (two.clone() * x.clone() * (kk.clone() + mu.clone() - F::one()) * c1.clone()
            - (kk.clone() + two.clone() * mu.clone() - two.clone()) * c0)
            / kk;
        c0 = c1;
        c1 = c2;
    }
    c1
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)`.
pub fn laguerre_gen<F: PolyField>(n: usize, alpha: &F, x: &F) -> F {
    let mut l0 = F::one();
    if n == 0 {
        return l0;
    }
    let mut l1 = F::one() + alpha.clone() - x.clone();
    for k in 1..n {
        let kk = F::from_int(k as i64);
        let l2 = ((F::from_int(2 * k as i64 + 1) + alpha.clone() - x.clone()) * l1.clone()
            - (kk + alpha.clone()) * l0)
            / F::from_int(k as i64 + 1);
        l0 = l1;
        l1 = l2;
    }
    l1
}

fn check_unit_interval(x: f64, what: &str) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("{what} needs x in [-1, 1], got {x}")));
    }
    Ok(())
}

/// Associated Legendre function `P_l^m(x)` with the Condon-Shortley phase;
/// negative `m` through `P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m`.
pub fn assoc_legendre_gen<T: Real>(l: usize, m: i64, x: &T) -> Result<T> {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Err(Error::IndexOutOfRange(format!("associated Legendre needs |m| <= l, got l = {l}, m = {m}")));
    }
    let s = (T::one() - x.clone() * x.clone()).abs().sqrt();
    // P_m^m = (-1)^m (2m-1)!! s^m
    let mut pmm = T::one();
    for k in 1..=am {
        pmm = -(pmm * T::from_i64(2 * k as i64 - 1) * s.clone());
    }
    let value = if l == am {
        pmm
    } else {
        let mut p0 = pmm;
        let mut p1 = x.clone() * T::from_i64(2 * am as i64 + 1) * p0.clone();
        for ll in (am + 2)..=l {
            let p2 = (x.clone() * T::from_i64(2 * ll as i64 - 1) * p1.clone()
                - T::from_i64((ll + am) as i64 - 1) * p0)
                / T::from_i64((ll - am) as i64);
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    if m >= 0 {
        return Ok(value);
    }
    // (l - |m|)! / (l + |m|)!
    let mut ratio = T::one();
    for k in (l - am + 1)..=(l + am) {
        ratio = ratio / T::from_i64(k as i64);
    }
    let sign = if am % 2 == 0 { T::one() } else { -T::one() };
    Ok(sign * ratio * value)
}

/// `P_l^m(x)` for `|x| <= 1`; `m = 0` is the Legendre polynomial.
pub fn legendre_p(l: usize, m: i64, x: f64) -> Result<f64> {
    check_unit_interval(x, "legendre_p")?;
    if m == 0 {
        return Ok(legendre_gen(l, &x));
    }
    assoc_legendre_gen(l, m, &x)
}

/// `C_l^{(mu)}(x)` for `mu > 0`, `|x| <= 1`.
pub fn gegenbauer_c(l: usize, mu: f64, x: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::IndexOutOfRange(format!("Gegenbauer needs mu > 0, got {mu}")));
    }
    check_unit_interval(x, "gegenbauer_c")?;
    Ok(gegenbauer_gen(l, &mu, &x))
}

/// `L_n^{(alpha)}(x)` for `alpha > -1`.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::IndexOutOfRange(format!("Laguerre needs alpha > -1, got {alpha}")));
    }
    Ok(laguerre_gen(n, &alpha, &x))
}

/// Normalized spherical harmonic
/// `Y_l^m = sqrt((2l+1)(l-m)! / (4 pi (l+m)!)) P_l^m(cos theta) e^{i m phi}`.
pub fn spherical_harmonic_gen<T: Real>(l: usize, m: i64, theta: &T, phi: &T) -> Result<Complex<T>> {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Err(Error::IndexOutOfRange(format!("spherical harmonic needs |m| <= l, got l = {l}, m = {m}")));
    }
    let p = assoc_legendre_gen(l, m, &theta.cos())?;
    // (l-m)!/(l+m)! for signed m
    let mut ratio = T::one();
    if m >= 0 {
        for k in (l - am + 1)..=(l + am) {
            ratio = ratio / T::from_i64(k as i64);
        }
    } else {
        for k in (l - am + 1)..=(l + am) {
            ratio = ratio * T::from_i64(k as i64);
        }
    }
    let norm = (T::from_i64(2 * l as i64 + 1) * ratio / (T::pi() * T::from_i64(4))).sqrt();
    let arg = T::from_i64(m) * phi.clone();
    let amp = norm * p;
    Ok(Complex::new(amp.clone() * arg.cos(), amp * arg.sin()))
}

pub fn spherical_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Result<Complex<f64>> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::invalid(format!("spherical harmonic needs theta in [0, pi], got {theta}")));
    }
    spherical_harmonic_gen(l, m, &theta, &phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_values() {
        for l in 0..=10 {
            assert!((legendre_p(l, 0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((legendre_p(2, 0, 0.5).unwrap() + 0.125).abs() < 1e-16);
        let neg = legendre_p(5, -3, 0.3).unwrap();
        let pos = legendre_p(5, 3, 0.3).unwrap();
        assert!((neg - (-1.0) * 2.0 / 40320.0 * pos).abs() < 1e-15 * pos.abs());
        assert!(legendre_p(2, 3, 0.1).is_err());
        assert!(legendre_p(2, 0, 1.5).is_err());
    }

    #[test]
    fn associated_legendre_closed_form() {
        // P_2^1(x) = -3 x sqrt(1 - x^2)
        let x: f64 = 0.4;
        let v = legendre_p(2, 1, x).unwrap();
        assert!((v + 3.0 * x * (1.0 - x * x).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gegenbauer_values() {
        assert!((gegenbauer_c(4, 0.5, 0.2).unwrap() - legendre_p(4, 0, 0.2).unwrap()).abs() < 1e-15);
        // C_l^(mu)(+-1) = (+-1)^l (2 mu)_l / l!, here (3)_3 / 3! = 10
        assert!((gegenbauer_c(3, 1.5, 1.0).unwrap() - 10.0).abs() < 1e-13);
        assert!((gegenbauer_c(3, 1.5, -1.0).unwrap() + 10.0).abs() < 1e-13);
    }

    #[test]
    fn laguerre_values() {
        for n in 0..=8 {
            assert_eq!(laguerre(n, 0.0, 0.0).unwrap(), 1.0);
            assert!((laguerre(n, 1.0, 0.0).unwrap() - (n as f64 + 1.0)).abs() < 1e-13);
        }
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let exact = laguerre_gen(3, &q(2, 1), &q(11, 10));
        // L_3^2(x) = 10 - 10x + 5x^2/2 - x^3/6
        let x = q(11, 10);
        let want = q(10, 1) - q(10, 1) * x.clone() + q(5, 2) * x.clone() * x.clone()
            - q(1, 6) * x.clone() * x.clone() * x;
        assert_eq!(exact, want);
    }

    #[test]
    fn spherical_harmonic_values() {
        let y00 = spherical_harmonic(0, 0, 0.3, 1.1).unwrap();
        assert!((y00.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-16);
        let y10 = spherical_harmonic(1, 0, PI / 3.0, 0.2).unwrap();
        assert!((y10.re - (3.0 / (4.0 * PI)).sqrt() / 2.0).abs() < 1e-15);
        let total: f64 = (-5..=5)
            .map(|m| spherical_harmonic(5, m, 0.7, 1.2).unwrap().norm_sqr())
            .sum();
        assert!((total - 11.0 / (4.0 * PI)).abs() < 1e-14);
        let (a, b) = (spherical_harmonic(4, -3, 1.1, 0.4).unwrap(), spherical_harmonic(4, 3, 1.1, 0.4).unwrap());
        assert!((a + b.conj()).norm() < 1e-15);
    }
}
