//! Whittaker functions `M_{kappa,mu}`, `W_{kappa,mu}`, their first
//! derivatives, and the modified Bessel functions obtained from them.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cexp, cpow, cscale, is_nonpositive_integer, near_integer, rpow, Real};
use crate::special::gamma::gamma;
use crate::special::kummer::{hyp1f1, hyperu};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WhittakerOrder {
    pub kappa: Complex<f64>,
    pub mu: Complex<f64>,
}

impl WhittakerOrder {
    pub fn new(kappa: Complex<f64>, mu: Complex<f64>) -> Self {
        WhittakerOrder { kappa, mu }
    }

    pub fn real(kappa: f64, mu: f64) -> Self {
        WhittakerOrder {
            kappa: Complex::new(kappa, 0.0),
            mu: Complex::new(mu, 0.0),
        }
    }

    /// `2 mu + 1` must not be a non-positive integer for `M`.
    pub fn check_m(&self) -> Result<()> {
        let b = self.mu * 2.0 + 1.0;
        if let Some(n) = is_nonpositive_integer(&b) {
            return Err(Error::PoleAtNonpositiveB { b: n.to_string() });
        }
        Ok(())
    }
}

fn c<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

/// Kummer parameters `(mu - kappa + 1/2, 2 mu + 1)`.
pub fn kummer_params<T: Real>(kappa: &Complex<T>, mu: &Complex<T>) -> (Complex<T>, Complex<T>) {
    let half = Complex::new(T::half(), T::zero());
    let a = mu.clone() - kappa.clone() + half;
    let b = mu.clone() * T::from_i64(2) + Complex::<T>::one();
    (a, b)
}

/// `e^{-z/2} 1F1(mu - kappa + 1/2; 2 mu + 1; z)`, i.e. `M_{kappa,mu}(z) / z^{1/2+mu}`.
pub fn whittaker_m_reduced<T: Real>(kappa: &Complex<T>, mu: &Complex<T>, z: &Complex<T>) -> Result<Complex<T>> {
    let (a, b) = kummer_params(kappa, mu);
    let f = hyp1f1(&a, &b, z)?.value;
    Ok(cexp(&cscale(z, &(-T::half()))) * f)
}

/// `M_{kappa,mu}(z)` with the principal branch of `z^{1/2+mu}`.
pub fn whittaker_m_gen<T: Real>(kappa: &Complex<T>, mu: &Complex<T>, z: &Complex<T>) -> Result<Complex<T>> {
    let red = whittaker_m_reduced(kappa, mu, z)?;
    let p = mu.clone() + Complex::new(T::half(), T::zero());
    Ok(cpow(z, &p) * red)
}

/// `dM_{kappa,mu}/dz = e^{-z/2} z^{mu-1/2} [(1/2 + mu - z/2) F + z (a/b) F(a+1; b+1; z)]`.
pub fn whittaker_m_deriv_gen<T: Real>(kappa: &Complex<T>, mu: &Complex<T>, z: &Complex<T>) -> Result<Complex<T>> {
    let (a, b) = kummer_params(kappa, mu);
    let one = Complex::<T>::one();
    let half = Complex::new(T::half(), T::zero());
    let f = hyp1f1(&a, &b, z)?.value;
    let f1 = hyp1f1(&(a.clone() + one.clone()), &(b.clone() + one), z)?.value;
    let bracket = (half.clone() + mu.clone() - cscale(z, &T::half())) * f + z.clone() * a / b * f1;
    let pow = mu.clone() - half;
    if z.is_zero() && pow.re < T::zero() {
        return Err(Error::invalid("dM/dz is singular at z = 0 for Re mu < 1/2"));
    }
    Ok(cexp(&cscale(z, &(-T::half()))) * cpow(z, &pow) * bracket)
}

/// `W_{kappa,mu}(r)` for real `r > 0`.
pub fn whittaker_w_gen<T: Real>(kappa: &Complex<T>, mu: &Complex<T>, r: &T) -> Result<Complex<T>> {
    let (a, b) = kummer_params(kappa, mu);
    let u = hyperu(&a, &b, r)?.value;
    let p = mu.clone() + Complex::new(T::half(), T::zero());
    Ok(rpow(r, &p) * u * (-(r.clone() * T::half())).exp())
}

/// `dW_{kappa,mu}/dr = e^{-r/2} r^{mu-1/2} [(1/2 + mu - r/2) U - r a U(a+1, b+1, r)]`.
pub fn whittaker_w_deriv_gen<T: Real>(kappa: &Complex<T>, mu: &Complex<T>, r: &T) -> Result<Complex<T>> {
    let (a, b) = kummer_params(kappa, mu);
    let one = Complex::<T>::one();
    let half = Complex::new(T::half(), T::zero());
    let u = hyperu(&a, &b, r)?.value;
    let u1 = hyperu(&(a.clone() + one.clone()), &(b + one), r)?.value;
    let bracket = (half.clone() + mu.clone() - Complex::new(r.clone() * T::half(), T::zero())) * u
        - cscale(&(a * u1), r);
    Ok(rpow(r, &(mu.clone() - half)) * bracket * (-(r.clone() * T::half())).exp())
}

fn check_radius(r: f64, name: &str) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("{name} needs r > 0, got {r}")));
    }
    Ok(())
}

/// `M_{kappa,mu}(r)` or `dM/dr` at hardware precision.
pub fn whittaker_m(order: WhittakerOrder, r: f64, deriv: bool) -> Result<Complex<f64>> {
    order.check_m()?;
    check_radius(r, "whittaker_m")?;
    whittaker_m_complex(order, Complex::new(r, 0.0), deriv)
}

/// `M_{kappa,mu}(z)` or `dM/dz` for complex `z`.
pub fn whittaker_m_complex(order: WhittakerOrder, z: Complex<f64>, deriv: bool) -> Result<Complex<f64>> {
    order.check_m()?;
    let (k, m) = (c::<f64>(order.kappa), c::<f64>(order.mu));
    if deriv {
        whittaker_m_deriv_gen(&k, &m, &z)
    } else {
        whittaker_m_gen(&k, &m, &z)
    }
}

/// `W_{kappa,mu}(r)` or `dW/dr` at hardware precision.
pub fn whittaker_w(order: WhittakerOrder, r: f64, deriv: bool) -> Result<Complex<f64>> {
    check_radius(r, "whittaker_w")?;
    let (k, m) = (order.kappa, order.mu);
    if deriv {
        whittaker_w_deriv_gen(&k, &m, &r)
    } else {
        whittaker_w_gen(&k, &m, &r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BesselKind {
    I,
    K,
}

fn check_order(nu: f64) -> Result<()> {
    match near_integer(&(2.0 * nu), 1e-14) {
        Some(n) if n >= 0 => Ok(()),
        _ => Err(Error::UnsupportedOrder(format!(
            "modified Bessel functions need 2 nu to be a non-negative integer, got nu = {nu}"
        ))),
    }
}

/// `K_nu(z) = sqrt(pi / 2z) W_{0,nu}(2z)`.
pub fn bessel_k_gen<T: Real>(nu: &T, z: &T) -> Result<T> {
    check_order(nu.to_f64())?;
    let two_z = z.clone() * T::from_i64(2);
    let w = whittaker_w_gen(&Complex::zero(), &Complex::new(nu.clone(), T::zero()), &two_z)?;
    Ok((T::pi() / two_z).sqrt() * w.re)
}

/// `I_nu(z) / (z/2)^nu = e^{-z} 1F1(nu + 1/2; 2 nu + 1; 2z) / Gamma(nu + 1)`.
pub fn bessel_i_reduced<T: Real>(nu: &T, z: &T) -> Result<T> {
    check_order(nu.to_f64())?;
    let a = Complex::new(nu.clone() + T::half(), T::zero());
    let b = Complex::new(nu.clone() * T::from_i64(2) + T::one(), T::zero());
    let f = hyp1f1(&a, &b, &Complex::new(z.clone() * T::from_i64(2), T::zero()))?.value;
    let g = gamma(&Complex::new(nu.clone() + T::one(), T::zero()))?;
    Ok((-z.clone()).exp() * f.re / g.re)
}

/// `I_nu(z) = M_{0,nu}(2z) / (2^{2 nu} Gamma(nu + 1) sqrt(2z))`, evaluated in reduced form.
pub fn bessel_i_gen<T: Real>(nu: &T, z: &T) -> Result<T> {
    let red = bessel_i_reduced(nu, z)?;
    let half_z = z.clone() * T::half();
    if half_z.is_zero() {
        return Ok(if nu.is_zero() { red } else { T::zero() });
    }
    Ok(red * (nu.clone() * half_z.ln()).exp())
}

/// `I_nu(z)` or `K_nu(z)` for `2 nu` a non-negative integer and `z > 0`.
pub fn bessel_modified(nu: f64, z: f64, kind: BesselKind) -> Result<f64> {
    check_order(nu)?;
    if !(z > 0.0) {
        return Err(Error::invalid(format!("modified Bessel functions need z > 0, got {z}")));
    }
    match kind {
        BesselKind::I => bessel_i_gen(&nu, &z),
        BesselKind::K => bessel_k_gen(&nu, &z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex<f64>, b: Complex<f64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn elementary_half_order_values() {
        let m = whittaker_m(WhittakerOrder::real(0.0, 0.5), 2.0, false).unwrap();
        assert!(rel(m, Complex::new(2.0 * 1f64.sinh(), 0.0)) < 1e-14);
        let w = whittaker_w(WhittakerOrder::real(0.0, 0.5), 3.0, false).unwrap();
        assert!(rel(w, Complex::new((-1.5f64).exp(), 0.0)) < 1e-14);
    }

    #[test]
    fn derivative_at_origin() {
        let d = whittaker_m(WhittakerOrder::real(0.3, 0.5), 1e-300, true).unwrap();
        assert!((d.re - 1.0).abs() < 1e-12);
        let d0 = whittaker_m_complex(WhittakerOrder::real(0.3, 0.5), Complex::zero(), true).unwrap();
        assert_eq!(d0, Complex::new(1.0, 0.0));
    }

    #[test]
    fn bessel_closed_forms() {
        let k = bessel_modified(0.5, 1.0, BesselKind::K).unwrap();
        assert!((k - 0.4610685044478946).abs() < 1e-15);
        let i = bessel_modified(0.5, 1.0, BesselKind::I).unwrap();
        assert!((i - 0.9376748882454876).abs() < 1e-15);
        assert!(matches!(
            bessel_modified(0.3, 1.0, BesselKind::K),
            Err(Error::UnsupportedOrder(_))
        ));
    }

    #[test]
    fn m_pole_is_rejected() {
        let r = whittaker_m(WhittakerOrder::real(0.0, -1.0), 1.0, false);
        assert!(matches!(r, Err(Error::PoleAtNonpositiveB { .. })));
    }
}
