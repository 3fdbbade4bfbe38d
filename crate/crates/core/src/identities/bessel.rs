//! Classical addition theorems used as cross-checks: Graf's formula in the
//! plane, Gegenbauer's theorem for `K_nu(R)/R^nu` and the spherical harmonic
//! addition theorem.

use num_complex::Complex;
use num_traits::Zero;

use super::{check_radii, evaluate, sum_with, GegenbauerStep, Geom, Identity, IdentityReport, Sides, VerifyOptions};
use crate::error::{Error, Result};
use crate::scalar::{near_integer, to_c64, Real};
use crate::special::gamma::gamma_real;
use crate::special::poly::spherical_harmonic_gen;
use crate::special::whittaker::{bessel_i_gen, bessel_i_reduced, bessel_k_gen};
use crate::summation::{sum_terms, SeriesOutcome};

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `I_0(k r0) K_0(k r) + 2 sum_n I_n(k r0) K_n(k r) cos(n phi) = K_0(k R)`.
pub struct Graf2d {
    pub k: f64,
    pub r0: f64,
    pub r: f64,
    pub phi: f64,
}

impl Identity for Graf2d {
    const ID: &'static str = "graf_2d";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        let g = Geom::<T>::new(self.r, self.r0, self.phi);
        let k = T::from_f64(self.k);
        let (kr, kr0) = (k.clone() * g.r.clone(), k.clone() * g.r0.clone());
        let phi = T::from_f64(self.phi);
        let gen = |n: usize| -> Result<Complex<T>> {
            if n > 0 && kr0.is_zero() {
                return Ok(Complex::zero());
            }
            let nu = T::from_i64(n as i64);
            let i = bessel_i_gen(&nu, &kr0)?;
            let kk = bessel_k_gen(&nu, &kr)?;
            let weight = if n == 0 {
                T::one()
            } else {
                (phi.clone() * nu).cos() * T::from_i64(2)
            };
            Ok(re(i * kk * weight))
        };
        let (lhs, lhs_diag) = sum_with(gen, opts)?;
        let rhs = re(bessel_k_gen(&T::zero(), &(k * g.big_r))?);
        Ok(Sides {
            lhs,
            rhs,
            lhs_diag,
            rhs_diag: None,
        })
    }
}

pub fn verify_graf_2d(k: f64, r0: f64, r: f64, phi: f64, opts: &VerifyOptions) -> Result<IdentityReport> {
    check_radii(r0, r)?;
    if !(k > 0.0) {
        return Err(Error::invalid(format!("Graf's formula needs k > 0, got {k}")));
    }
    evaluate(&Graf2d { k, r0, r, phi }, opts)
}

/// Gegenbauer's theorem in the form
/// `Gamma(nu) r^-nu sum_n (nu+n) K_{nu+n}(r) (r0/2)^n Ired_{nu+n}(r0) C_n^nu(cos gamma) = K_nu(R)/R^nu`,
/// where `Ired_a(z) = I_a(z)/(z/2)^a` keeps the `r0 = 0` end finite.
pub struct GegenbauerAddition {
    pub nu: f64,
    pub r0: f64,
    pub r: f64,
    pub gamma: f64,
}

impl Identity for GegenbauerAddition {
    const ID: &'static str = "gegenbauer_addition";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        let g = Geom::<T>::new(self.r, self.r0, self.gamma);
        let nu = T::from_f64(self.nu);
        let half_r0 = g.r0.clone() * T::half();
        let mut pow = T::one();
        let mut geg = GegenbauerStep::new(nu.clone(), g.cos_g.clone());
        let gen = |n: usize| -> Result<Complex<T>> {
            if n > 0 {
                pow = pow.clone() * half_r0.clone();
            }
            let c = geg.at(n);
            if pow.is_zero() || c.is_zero() {
                return Ok(Complex::zero());
            }
            let order = nu.clone() + T::from_i64(n as i64);
            let kk = bessel_k_gen(&order, &g.r)?;
            let ired = bessel_i_reduced(&order, &g.r0)?;
            Ok(re(order * kk * pow.clone() * ired * c))
        };
        let (sum, lhs_diag) = sum_with(gen, opts)?;
        let scale = gamma_real(&nu)? / (nu.clone() * g.r.ln()).exp();
        let lhs = sum * scale;
        let rhs = bessel_k_gen(&nu, &g.big_r)? / (nu * g.big_r.ln()).exp();
        Ok(Sides {
            lhs,
            rhs: re(rhs),
            lhs_diag,
            rhs_diag: None,
        })
    }
}

/// Requires `2 nu` to be a positive integer, the orders the Whittaker-based
/// Bessel routines cover.
pub fn verify_gegenbauer_addition(nu: f64, r0: f64, r: f64, gamma: f64, opts: &VerifyOptions) -> Result<IdentityReport> {
    match near_integer(&(2.0 * nu), 1e-14) {
        Some(n) if n >= 1 => {}
        _ => {
            return Err(Error::UnsupportedOrder(format!(
                "Gegenbauer's theorem is checked for 2 nu a positive integer, got nu = {nu}"
            )))
        }
    }
    check_radii(r0, r)?;
    evaluate(&GegenbauerAddition { nu, r0, r, gamma }, opts)
}

/// `sum_m Y_l^m(theta, phi) conj(Y_l^m(theta0, phi0)) = (2l+1) P_l(cos gamma) / 4pi`.
pub struct SphericalAddition {
    pub l: usize,
    pub theta: f64,
    pub phi: f64,
    pub theta0: f64,
    pub phi0: f64,
}

impl Identity for SphericalAddition {
    const ID: &'static str = "spherical_addition";

    fn sides<T: Real>(&self, _opts: &VerifyOptions) -> Result<Sides<T>> {
        let f = T::from_f64;
        let (th, ph, th0, ph0) = (f(self.theta), f(self.phi), f(self.theta0), f(self.phi0));
        let l = self.l as i64;
        let mut terms = Vec::with_capacity(2 * self.l + 1);
        for m in -l..=l {
            let y = spherical_harmonic_gen(self.l, m, &th, &ph)?;
            let y0 = spherical_harmonic_gen(self.l, m, &th0, &ph0)?;
            terms.push(y * y0.conj());
        }
        let (lhs, lhs_diag) = sum_terms(&terms);

        let cos_g = th.cos() * th0.cos() + th.sin() * th0.sin() * (ph - ph0).cos();
        // rounding can push |cos gamma| a hair past 1
        let cos_g = if cos_g > T::one() {
            T::one()
        } else if cos_g < -T::one() {
            -T::one()
        } else {
            cos_g
        };
        let mut leg = GegenbauerStep::legendre(cos_g);
        let p = leg.at(self.l);
        let rhs = re(T::from_i64(2 * l + 1) * p / (T::pi() * T::from_i64(4)));
        let rhs_diag = Some(SeriesOutcome::single(to_c64(&rhs)));
        Ok(Sides {
            lhs,
            rhs,
            lhs_diag,
            rhs_diag,
        })
    }
}

pub fn verify_spherical_addition(
    l: usize,
    theta: f64,
    phi: f64,
    theta0: f64,
    phi0: f64,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    evaluate(
        &SphericalAddition {
            l,
            theta,
            phi,
            theta0,
            phi0,
        },
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn graf_grid_point() {
        let rep = verify_graf_2d(1.0, 1.0, 3.0, 2.0, &VerifyOptions::default()).unwrap();
        assert!(rep.rel_err < 1e-9, "{rep:?}");
        let origin = verify_graf_2d(0.7, 0.0, 2.0, 1.0, &VerifyOptions::default()).unwrap();
        assert!(origin.rel_err < 1e-14, "{origin:?}");
    }

    #[test]
    fn gegenbauer_theorem() {
        let rep = verify_gegenbauer_addition(1.0, 1.0, 4.0, 1.2, &VerifyOptions::default()).unwrap();
        assert!(rep.rel_err < 1e-8, "{rep:?}");
        let half = verify_gegenbauer_addition(0.5, 1.0, 4.0, 0.0, &VerifyOptions::default()).unwrap();
        // K_{1/2}(z)/z^{1/2} = sqrt(pi/2) e^{-z}/z
        let want = (PI / 2.0).sqrt() * (-3.0f64).exp() / 3.0;
        assert!((half.rhs.re - want).abs() < 1e-14 * want);
        assert!(half.rel_err < 1e-10);
        assert!(matches!(
            verify_gegenbauer_addition(0.3, 1.0, 4.0, 1.2, &VerifyOptions::default()),
            Err(Error::UnsupportedOrder(_))
        ));
    }

    #[test]
    fn spherical_addition() {
        let rep = verify_spherical_addition(7, 0.4, 1.3, 2.1, -0.6, &VerifyOptions::default()).unwrap();
        assert!(rep.rel_err < 1e-12, "{rep:?}");
        let same = verify_spherical_addition(3, 0.4, 1.3, 0.4, 1.3, &VerifyOptions::default()).unwrap();
        assert!((same.rhs.re - 7.0 / (4.0 * PI)).abs() < 1e-15);
    }
}
