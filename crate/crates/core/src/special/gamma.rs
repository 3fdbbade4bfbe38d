//! Gamma, reciprocal gamma and digamma for complex arguments.
//!
//! All three shift the argument to `Re w >= N` with the recurrence and then
//! use the Stirling series, so no reflection formula is involved and the same
//! code serves every precision.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::bigfloat::{self, BigFloat};
use crate::error::{Error, Result};
use crate::scalar::{cabs, cexp, cinv, cln, cscale, from_big_c, is_nonpositive_integer, to_big_c, Real};

/// Run `f` with `extra` more mantissa bits when `T` is the software float.
pub(crate) fn with_guard_bits<T: Real, R>(extra: u64, f: impl FnOnce() -> R) -> R {
    if T::EXTENDED {
        bigfloat::with_bits(bigfloat::precision_bits() + extra, f)
    } else {
        f()
    }
}

/// Hardware callers are served by a 34-digit evaluation rounded to `f64`,
/// which keeps results within an ulp or two despite the `exp`/`ln` steps.
const HARDWARE_DIGITS: u32 = 34;

fn via_big<T: Real>(
    z: &Complex<T>,
    f: impl Fn(&Complex<BigFloat>) -> Result<Complex<BigFloat>>,
) -> Result<Complex<T>> {
    bigfloat::with_digits(HARDWARE_DIGITS, || f(&to_big_c(z)).map(|v| from_big_c(&v)))
}

fn shift_target<T: Real>() -> f64 {
    (0.4 * T::digits() as f64 + 4.0).max(12.0)
}

/// `(w, n)` with `w = z + n` and `Re w >= N`.
fn shifted<T: Real>(z: &Complex<T>) -> (Complex<T>, usize) {
    let target = shift_target::<T>();
    let re = z.re.to_f64();
    let n = if re >= target { 0 } else { (target - re).ceil() as usize };
    (Complex::new(z.re.clone() + T::from_i64(n as i64), z.im.clone()), n)
}

/// Stirling series for `ln Gamma(w)`, `Re w` large.
fn stirling_ln_gamma<T: Real>(w: &Complex<T>) -> Complex<T> {
    let half = T::half();
    let two_pi = T::pi() * T::from_i64(2);
    let mut s = cln(w) * Complex::new(w.re.clone() - half.clone(), w.im.clone()) - w.clone()
        + Complex::new(two_pi.ln() * half, T::zero());
    let inv = cinv(w);
    let inv2 = inv.clone() * inv.clone();
    let mut pow = inv;
    let eps = T::from_f64(T::epsilon() * 1e-3);
    for k in 1..400usize {
        let coef = T::bernoulli_2k(k) / T::from_i64((2 * k * (2 * k - 1)) as i64);
        let term = cscale(&pow, &coef);
        let small = cabs(&term) <= eps.clone() * cabs(&s);
        s = s + term;
        if small {
            break;
        }
        pow = pow * inv2.clone();
    }
    s
}

/// `Gamma(z)`; `PoleHit` at non-positive integers.
pub fn gamma<T: Real>(z: &Complex<T>) -> Result<Complex<T>> {
    if let Some(n) = is_nonpositive_integer(z) {
        if z.im.is_zero() && z.re == T::from_i64(n) {
            return Err(Error::PoleHit(format!("Gamma at {n}")));
        }
    }
    if !T::EXTENDED {
        return via_big(z, |w| gamma(w));
    }
    let g = rgamma(z);
    if g.is_zero() {
        return Err(Error::PoleHit(format!("Gamma at {:?}", z.re)));
    }
    Ok(cinv(&g))
}

/// `1/Gamma(z)`, entire; exactly zero at non-positive integers.
pub fn rgamma<T: Real>(z: &Complex<T>) -> Complex<T> {
    if z.im.is_zero() && z.re <= T::zero() && z.re.floor() == z.re {
        return Complex::zero();
    }
    if !T::EXTENDED {
        return via_big(z, |w| Ok(rgamma(w))).unwrap_or_else(|_| Complex::zero());
    }
    with_guard_bits::<T, _>(24, || {
        let (w, n) = shifted(z);
        let mut prod = Complex::<T>::one();
        for j in 0..n {
            prod = prod * Complex::new(z.re.clone() + T::from_i64(j as i64), z.im.clone());
        }
        let lg = stirling_ln_gamma(&w);
        prod * cexp(&(-lg))
    })
}

/// A logarithm of `Gamma(z)` (not necessarily the principal branch of the
/// continuous `ln Gamma`; its exponential is exact).
pub fn ln_gamma<T: Real>(z: &Complex<T>) -> Result<Complex<T>> {
    if z.im.is_zero() && z.re <= T::zero() && z.re.floor() == z.re {
        return Err(Error::PoleHit(format!("ln Gamma at {:?}", z.re)));
    }
    if !T::EXTENDED {
        return via_big(z, |w| ln_gamma(w));
    }
    Ok(with_guard_bits::<T, _>(24, || {
        let (w, n) = shifted(z);
        let mut s = stirling_ln_gamma(&w);
        for j in 0..n {
            s = s - cln(&Complex::new(z.re.clone() + T::from_i64(j as i64), z.im.clone()));
        }
        s
    }))
}

/// Real `Gamma(x)` for `x > 0`.
pub fn gamma_real<T: Real>(x: &T) -> Result<T> {
    Ok(gamma(&Complex::new(x.clone(), T::zero()))?.re)
}

/// `psi(z) = Gamma'(z)/Gamma(z)`.
pub fn digamma<T: Real>(z: &Complex<T>) -> Result<Complex<T>> {
    if z.im.is_zero() && z.re <= T::zero() && z.re.floor() == z.re {
        return Err(Error::PoleHit(format!("digamma at {:?}", z.re)));
    }
    if !T::EXTENDED {
        return via_big(z, |w| digamma(w));
    }
    Ok(with_guard_bits::<T, _>(16, || {
        let (w, n) = shifted(z);
        let inv = cinv(&w);
        let inv2 = inv.clone() * inv.clone();
        let mut s = cln(&w) - cscale(&inv, &T::half());
        let mut pow = inv2.clone();
        let eps = T::from_f64(T::epsilon() * 1e-3);
        for k in 1..400usize {
            let coef = T::bernoulli_2k(k) / T::from_i64(2 * k as i64);
            let term = cscale(&pow, &coef);
            let small = cabs(&term) <= eps.clone() * cabs(&s);
            s = s - term;
            if small {
                break;
            }
            pow = pow * inv2.clone();
        }
        for j in 0..n {
            let zj = Complex::new(z.re.clone() + T::from_i64(j as i64), z.im.clone());
            s = s - cinv(&zj);
        }
        s
    }))
}

/// Euler's constant at the working precision of `T`.
pub fn euler_gamma<T: Real>() -> T {
    -digamma(&Complex::<T>::one()).map(|v| v.re).unwrap_or_else(|_| T::zero())
}

/// `Gamma(a)/Gamma(b)`, zero when `b` is a pole of Gamma.
pub fn gamma_quotient<T: Real>(a: &Complex<T>, b: &Complex<T>) -> Result<Complex<T>> {
    let rb = rgamma(b);
    if rb.is_zero() {
        return Ok(Complex::zero());
    }
    let ga = gamma(a)?;
    Ok(ga * rb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::with_digits;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn gamma_real_values() {
        assert!((gamma(&c(5.0, 0.0)).unwrap().re - 24.0).abs() < 1e-13);
        let half = gamma(&c(0.5, 0.0)).unwrap().re;
        assert!((half - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        let neg = gamma(&c(-2.5, 0.0)).unwrap().re;
        assert!((neg - (-0.9453087204829419)).abs() < 1e-14);
        assert!(gamma(&c(-3.0, 0.0)).is_err());
        assert_eq!(rgamma(&c(-3.0, 0.0)), Complex::zero());
    }

    #[test]
    fn gamma_complex_value() {
        // Gamma(1+i) = 0.49801566811835604 - 0.15494982830181069 i
        let g = gamma(&c(1.0, 1.0)).unwrap();
        assert!((g - c(0.498015668118356, -0.15494982830181069)).norm() < 1e-14);
    }

    #[test]
    fn digamma_values() {
        let psi1 = digamma(&c(1.0, 0.0)).unwrap().re;
        assert!((psi1 + 0.5772156649015329).abs() < 1e-15);
        let p = digamma(&c(-0.5, 0.0)).unwrap().re;
        assert!((p - 0.03648997397857652).abs() < 1e-14);
    }

    #[test]
    fn extended_gamma() {
        with_digits(50, || {
            let g = gamma_real(&BigFloat::from_f64(0.5)).unwrap();
            let s = BigFloat::pi().sqrt();
            assert!(((g - s.clone()) / s).abs().to_f64() < 1e-49);
            let gam = euler_gamma::<BigFloat>();
            let want = BigFloat::parse_decimal("0.57721566490153286060651209008240243104215933593992").unwrap();
            assert!((gam - want).abs().to_f64() < 1e-49);
        });
    }
}
