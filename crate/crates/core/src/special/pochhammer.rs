//! Rising factorials, binomials and Gamma ratios evaluated as products.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cabs, cdiv, cexp, cln, Real};

/// `(a)_n = a (a+1) ... (a+n-1)`.
pub fn poch<T: Real>(a: &Complex<T>, n: usize) -> Complex<T> {
    let mut p = Complex::<T>::one();
    for j in 0..n {
        p = p * Complex::new(a.re.clone() + T::from_i64(j as i64), a.im.clone());
    }
    p
}

pub fn poch_real<T: Real>(a: &T, n: usize) -> T {
    let mut p = T::one();
    for j in 0..n {
        p = p * (a.clone() + T::from_i64(j as i64));
    }
    p
}

pub fn factorial<T: Real>(n: usize) -> T {
    let mut p = T::one();
    for j in 2..=n {
        p = p * T::from_i64(j as i64);
    }
    p
}

/// `(a)_n / (b)_n` as a product of factor ratios.
pub fn poch_quotient<T: Real>(a: &Complex<T>, b: &Complex<T>, n: usize) -> Result<Complex<T>> {
    let mut p = Complex::<T>::one();
    for j in 0..n {
        let jj = T::from_i64(j as i64);
        let den = Complex::new(b.re.clone() + jj.clone(), b.im.clone());
        if den.is_zero() {
            return Err(Error::PoleHit(format!("denominator factor {j} of a Pochhammer ratio vanishes")));
        }
        p = p * cdiv(&Complex::new(a.re.clone() + jj, a.im.clone()), &den);
    }
    Ok(p)
}

/// Value stored as `exp(ln_mag + i phase)`, with an explicit zero flag.
#[derive(Debug, Clone, PartialEq)]
pub struct LogScaled<T: Real> {
    pub ln_mag: T,
    pub phase: T,
    pub is_zero: bool,
}

impl<T: Real> LogScaled<T> {
    pub fn to_complex(&self) -> Complex<T> {
        if self.is_zero {
            return Complex::zero();
        }
        cexp(&Complex::new(self.ln_mag.clone(), self.phase.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        LogScaled {
            ln_mag: self.ln_mag.clone() + other.ln_mag.clone(),
            phase: self.phase.clone() + other.phase.clone(),
            is_zero: self.is_zero || other.is_zero,
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero {
            return Err(Error::PoleHit("division by a vanishing log-scaled product".into()));
        }
        Ok(LogScaled {
            ln_mag: self.ln_mag.clone() - other.ln_mag.clone(),
            phase: self.phase.clone() - other.phase.clone(),
            is_zero: self.is_zero,
        })
    }

    pub fn from_complex(z: &Complex<T>) -> Self {
        if z.is_zero() {
            return LogScaled {
                ln_mag: T::zero(),
                phase: T::zero(),
                is_zero: true,
            };
        }
        let l = cln(z);
        LogScaled {
            ln_mag: l.re,
            phase: l.im,
            is_zero: false,
        }
    }
}

const CHUNK: usize = 16;

/// `(a)_n` in log-scaled form. Factors are multiplied in chunks and the
/// logarithm taken per chunk, so no intermediate overflows.
pub fn poch_log<T: Real>(a: &Complex<T>, n: usize) -> LogScaled<T> {
    let mut ln_mag = T::zero();
    let mut phase = T::zero();
    let mut j = 0;
    while j < n {
        let end = (j + CHUNK).min(n);
        let mut p = Complex::<T>::one();
        for i in j..end {
            let f = Complex::new(a.re.clone() + T::from_i64(i as i64), a.im.clone());
            if f.is_zero() {
                return LogScaled {
                    ln_mag: T::zero(),
                    phase: T::zero(),
                    is_zero: true,
                };
            }
            p = p * f;
        }
        let m = cabs(&p);
        ln_mag = ln_mag + m.ln();
        phase = phase + p.im.atan2(&p.re);
        j = end;
    }
    LogScaled {
        ln_mag,
        phase,
        is_zero: false,
    }
}

/// `(a)_n` choosing the log-scaled route for `n > 30`.
pub fn poch_auto<T: Real>(a: &Complex<T>, n: usize) -> Complex<T> {
    if n > 30 {
        poch_log(a, n).to_complex()
    } else {
        poch(a, n)
    }
}

pub fn binomial_rational(n: u64, k: u64) -> BigRational {
    BigRational::from_integer(binomial_int(n, k))
}

pub fn binomial_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Exact `(a)_n` for rational `a`.
pub fn poch_rational(a: &BigRational, n: usize) -> BigRational {
    let mut p = BigRational::one();
    for j in 0..n {
        p *= a + BigRational::from_integer(BigInt::from(j));
    }
    p
}

/// Ratio kinds exposed through [`pochhammer_ratio`].
#[derive(Debug, Clone, PartialEq)]
pub enum PochhammerKind {
    /// `(a)_n`.
    Rising { a: Complex<f64>, n: usize },
    /// `Gamma(a + n) / Gamma(a)`, identical to `(a)_n`.
    GammaShift { a: Complex<f64>, n: usize },
    /// `(a)_n / (b)_n`.
    Quotient { a: Complex<f64>, b: Complex<f64>, n: usize },
    /// `C(n, k)`.
    Binomial { n: u64, k: u64 },
}

pub fn pochhammer_ratio(kind: &PochhammerKind) -> Result<Complex<f64>> {
    let v = match kind {
        PochhammerKind::Rising { a, n } | PochhammerKind::GammaShift { a, n } => poch_auto(a, *n),
        PochhammerKind::Quotient { a, b, n } => poch_quotient(a, b, *n)?,
        PochhammerKind::Binomial { n, k } => {
            Complex::new(f64::from_rational(&binomial_rational(*n, *k)), 0.0)
        }
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Overflow(format!("{kind:?} exceeds the double range; use poch_log")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::{with_digits, BigFloat};
    use crate::scalar::from_c64;

    #[test]
    fn rising_products() {
        let a = Complex::new(0.3, 0.0);
        assert_eq!(poch(&a, 0), Complex::one());
        let k = 0.3;
        let v = pochhammer_ratio(&PochhammerKind::GammaShift {
            a: Complex::new(1.0 - k, 0.0),
            n: 3,
        })
        .unwrap();
        assert!((v.re - 3.213).abs() < 1e-14);
    }

    #[test]
    fn quotient_detects_pole() {
        let r = poch_quotient(&Complex::new(1.0, 0.0), &Complex::new(-2.0, 0.0), 4);
        assert!(matches!(r, Err(Error::PoleHit(_))));
    }

    #[test]
    fn log_scaled_matches_direct_product() {
        let a = Complex::new(40.0, 0.0);
        let direct = with_digits(40, || poch(&from_c64::<BigFloat>(a), 290).re.ln().to_f64());
        let ls = poch_log(&a, 290);
        assert!((ls.ln_mag - direct).abs() < 1e-12 * direct);
        assert!(ls.phase.abs() < 1e-12);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_int(10, 3), BigInt::from(120));
        assert_eq!(binomial_int(3, 5), BigInt::zero());
    }
}
