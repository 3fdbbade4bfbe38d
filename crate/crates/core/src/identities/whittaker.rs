//! Addition theorem for `M_{kappa,l+1/2} W_{kappa,l+1/2}` against the Hostler
//! bracket, its `kappa = 1` limit, the collinear and antipodal special cases,
//! and the exponential summation formula for `M_{kappa,l+1/2}(z)`.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{check_kappa, check_radii, evaluate, sum_with, Geom, GegenbauerStep, GeometryConfig, Identity, IdentityReport, Sides, VerifyOptions};
use crate::error::{Error, Result};
use crate::scalar::{cabs, cexp, cscale, from_c64, Real};
use crate::special::gamma::{gamma, ln_gamma};
use crate::special::whittaker::{
    whittaker_m_deriv_gen, whittaker_m_gen, whittaker_m_reduced, whittaker_w_deriv_gen, whittaker_w_gen,
};
use crate::summation::SeriesOutcome;

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn order<T: Real>(l: usize) -> Complex<T> {
    re(T::from_i64(l as i64) + T::half())
}

/// `M'_{kappa,1/2}(y/2) W_{kappa,1/2}(x/2) - M_{kappa,1/2}(y/2) W'_{kappa,1/2}(x/2)`.
pub fn hostler_bracket<T: Real>(kappa: &Complex<T>, y_half: &T, x_half: &T) -> Result<Complex<T>> {
    let mu = order::<T>(0);
    let yz = re(y_half.clone());
    let m = whittaker_m_gen(kappa, &mu, &yz)?;
    let dm = whittaker_m_deriv_gen(kappa, &mu, &yz)?;
    let w = whittaker_w_gen(kappa, &mu, x_half)?;
    let dw = whittaker_w_deriv_gen(kappa, &mu, x_half)?;
    Ok(dm * w - m * dw)
}

/// `(1/(r r0)) sum_l (1-kappa)_l/(2l)! M(r0) W(r) P_l(cos gamma)` against
/// the Hostler bracket over `R`.
pub struct WhittakerAddition {
    pub kappa: Complex<f64>,
    pub geo: GeometryConfig,
}

impl Identity for WhittakerAddition {
    const ID: &'static str = "whittaker_addition";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        let g = Geom::<T>::new(self.geo.r, self.geo.r0, self.geo.gamma);
        let k = from_c64::<T>(self.kappa);
        let r0z = re(g.r0.clone());
        let mut coef = Complex::<T>::one();
        let mut r0_pow = T::one();
        let mut leg = GegenbauerStep::legendre(g.cos_g.clone());
        let gen = |l: usize| -> Result<Complex<T>> {
            if l > 0 {
                coef = (coef.clone() * (re(T::from_i64(l as i64)) - k.clone())) / T::from_i64((2 * l * (2 * l - 1)) as i64);
                r0_pow = r0_pow.clone() * g.r0.clone();
            }
            let p = leg.at(l);
            if p.is_zero() || r0_pow.is_zero() {
                return Ok(Complex::zero());
            }
            let mu = order::<T>(l);
            // M(r0)/r0 = r0^l e^{-r0/2} 1F1(...), finite at r0 = 0
            let m = whittaker_m_reduced(&k, &mu, &r0z)?;
            let w = whittaker_w_gen(&k, &mu, &g.r)?;
            Ok(coef.clone() * w * m * (r0_pow.clone() * p / g.r.clone()))
        };
        let (lhs, lhs_diag) = sum_with(gen, opts)?;
        let two = T::from_i64(2);
        let bracket = hostler_bracket(&k, &(g.y.clone() / two.clone()), &(g.x.clone() / two))?;
        let rhs = bracket / g.big_r;
        Ok(Sides {
            lhs,
            rhs,
            lhs_diag,
            rhs_diag: None,
        })
    }
}

pub fn verify_whittaker_addition(kappa: Complex<f64>, geo: &GeometryConfig, opts: &VerifyOptions) -> Result<IdentityReport> {
    geo.check_ordered()?;
    check_kappa(kappa, opts.kappa_guard)?;
    evaluate(&WhittakerAddition { kappa, geo: *geo }, opts)
}

/// The `kappa = 1` form: the `l >= 1` series against minus the kappa
/// derivative of the bracket with its singular `l = 0` term removed.
pub struct KappaOneLimit {
    pub geo: GeometryConfig,
}

const RICHARDSON_LEVELS: usize = 5;

/// `bracket(kappa)/R - M_{kappa,1/2}(r0) W_{kappa,1/2}(r)/(r r0)`.
fn regularized_bracket<T: Real>(kappa: &Complex<T>, g: &Geom<T>) -> Result<Complex<T>> {
    let two = T::from_i64(2);
    let b = hostler_bracket(kappa, &(g.y.clone() / two.clone()), &(g.x.clone() / two))? / g.big_r.clone();
    let mu = order::<T>(0);
    let m = whittaker_m_reduced(kappa, &mu, &re(g.r0.clone()))?;
    let w = whittaker_w_gen(kappa, &mu, &g.r)?;
    Ok(b - m * w / g.r.clone())
}

impl Identity for KappaOneLimit {
    const ID: &'static str = "kappa_integer_limit";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        let g = Geom::<T>::new(self.geo.r, self.geo.r0, self.geo.gamma);
        let k = Complex::<T>::one();
        let r0z = re(g.r0.clone());
        // (l-1)!/(2l)! starting from l = 1
        let mut coef = T::half();
        let mut r0_pow = g.r0.clone();
        let mut leg = GegenbauerStep::legendre(g.cos_g.clone());
        let gen = |i: usize| -> Result<Complex<T>> {
            let l = i + 1;
            if i > 0 {
                coef = coef.clone() * T::from_i64(l as i64 - 1) / T::from_i64((2 * l * (2 * l - 1)) as i64);
                r0_pow = r0_pow.clone() * g.r0.clone();
            }
            let p = leg.at(l);
            if p.is_zero() || r0_pow.is_zero() {
                return Ok(Complex::zero());
            }
            let mu = order::<T>(l);
            let m = whittaker_m_reduced(&k, &mu, &r0z)?;
            let w = whittaker_w_gen(&k, &mu, &g.r)?;
            // M(r0)/(r r0) = r0^l red / r
            Ok(w * m * (coef.clone() * r0_pow.clone() * p / g.r.clone()))
        };
        let (lhs, lhs_diag) = sum_with(gen, opts)?;

        let step = opts.derivative_step;
        let finest = step / 2f64.powi(RICHARDSON_LEVELS as i32 - 1);
        if !(step > 0.0) || !(finest > 1e3 * T::epsilon()) {
            return Err(Error::DerivativeStepUnderflow(step));
        }
        let mut table: Vec<Complex<T>> = Vec::with_capacity(RICHARDSON_LEVELS);
        for i in 0..RICHARDSON_LEVELS {
            let h = T::from_f64(step / 2f64.powi(i as i32));
            let plus = regularized_bracket(&re(T::one() + h.clone()), &g)?;
            let minus = regularized_bracket(&re(T::one() - h.clone()), &g)?;
            table.push((plus - minus) / (h * T::from_i64(2)));
        }
        // central differences have an even error expansion in h
        let mut prev_best = table[RICHARDSON_LEVELS - 1].clone();
        for j in 1..RICHARDSON_LEVELS {
            let f = T::from_i64(4i64.pow(j as u32));
            if j > 1 {
                prev_best = table[RICHARDSON_LEVELS - 1].clone();
            }
            for i in (j..RICHARDSON_LEVELS).rev() {
                table[i] = (table[i].clone() * f.clone() - table[i - 1].clone()) / (f.clone() - T::one());
            }
        }
        let deriv = table[RICHARDSON_LEVELS - 1].clone();
        let rhs = -deriv.clone();
        let rhs_diag = SeriesOutcome {
            value: crate::scalar::to_c64(&rhs),
            n_terms: RICHARDSON_LEVELS,
            max_term_mag: cabs(&deriv).to_f64(),
            condition_number: 1.0,
            tail_estimate: cabs(&(deriv - prev_best)).to_f64(),
            terms_log: None,
        };
        Ok(Sides {
            lhs,
            rhs,
            lhs_diag,
            rhs_diag: Some(rhs_diag),
        })
    }
}

/// The integer-`kappa` limit of the addition theorem; only `n = 1` has a
/// known closed combination.
pub fn verify_kappa_integer_limit(n: usize, geo: &GeometryConfig, opts: &VerifyOptions) -> Result<IdentityReport> {
    if n != 1 {
        return Err(Error::UnsupportedOrder(format!(
            "the integer-kappa limit is only available for kappa = 1, got {n}"
        )));
    }
    geo.check_ordered()?;
    evaluate(&KappaOneLimit { geo: *geo }, opts)
}

/// `Gamma(l+1-kappa)/(2l)!` through log-gamma, independent of the rising
/// product used by the general theorem.
fn gamma_coefficient<T: Real>(k: &Complex<T>, l: usize) -> Result<Complex<T>> {
    let a = re(T::from_i64(l as i64 + 1)) - k.clone();
    let num = ln_gamma(&a)?;
    let den = ln_gamma(&re(T::from_i64(2 * l as i64 + 1)))?;
    Ok(cexp(&(num - den)))
}

fn special_case_lhs<T: Real>(
    kappa: Complex<f64>,
    r0: f64,
    r: f64,
    alternating: bool,
    opts: &VerifyOptions,
) -> Result<(Complex<T>, SeriesOutcome)> {
    let k = from_c64::<T>(kappa);
    let (rt, r0t) = (T::from_f64(r), T::from_f64(r0));
    let r0z = re(r0t.clone());
    let scale = T::one() / (rt.clone() * r0t);
    let gen = |l: usize| -> Result<Complex<T>> {
        let mu = order::<T>(l);
        let m = whittaker_m_gen(&k, &mu, &r0z)?;
        let w = whittaker_w_gen(&k, &mu, &rt)?;
        let c = gamma_coefficient(&k, l)?;
        let t = c * m * w * scale.clone();
        Ok(if alternating && l % 2 == 1 { -t } else { t })
    };
    sum_with(gen, opts)
}

fn check_special(kappa: Complex<f64>, r0: f64, r: f64, opts: &VerifyOptions) -> Result<()> {
    if r0 == r {
        return Err(Error::GeometryViolation(format!("r0 = r = {r} makes 1/(r - r0) singular")));
    }
    if !(r0 > 0.0) {
        return Err(Error::GeometryViolation(format!("need r0 > 0, got {r0}")));
    }
    check_radii(r0, r)?;
    check_kappa(kappa, opts.kappa_guard)
}

/// `gamma = 0`: the Wronskian-type bracket at `(r0, r)` over `r - r0`.
pub struct GammaZero {
    pub kappa: Complex<f64>,
    pub r0: f64,
    pub r: f64,
}

impl Identity for GammaZero {
    const ID: &'static str = "gamma_zero";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        let (lhs, lhs_diag) = special_case_lhs::<T>(self.kappa, self.r0, self.r, false, opts)?;
        let k = from_c64::<T>(self.kappa);
        let (rt, r0t) = (T::from_f64(self.r), T::from_f64(self.r0));
        let mu = order::<T>(0);
        let r0z = re(r0t.clone());
        let bracket = whittaker_m_deriv_gen(&k, &mu, &r0z)? * whittaker_w_gen(&k, &mu, &rt)?
            - whittaker_m_gen(&k, &mu, &r0z)? * whittaker_w_deriv_gen(&k, &mu, &rt)?;
        let g = gamma(&(Complex::<T>::one() - k))?;
        let rhs = g * bracket / (rt - r0t);
        Ok(Sides {
            lhs,
            rhs,
            lhs_diag,
            rhs_diag: None,
        })
    }
}

pub fn verify_gamma_zero(kappa: Complex<f64>, r0: f64, r: f64, opts: &VerifyOptions) -> Result<IdentityReport> {
    check_special(kappa, r0, r, opts)?;
    evaluate(&GammaZero { kappa, r0, r }, opts)
}

/// `gamma = pi`: `Gamma(1-kappa) W_{kappa,1/2}(r + r0)/(r + r0)`.
pub struct GammaPi {
    pub kappa: Complex<f64>,
    pub r0: f64,
    pub r: f64,
}

impl Identity for GammaPi {
    const ID: &'static str = "gamma_pi";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        let (lhs, lhs_diag) = special_case_lhs::<T>(self.kappa, self.r0, self.r, true, opts)?;
        let k = from_c64::<T>(self.kappa);
        let s = T::from_f64(self.r) + T::from_f64(self.r0);
        let w = whittaker_w_gen(&k, &order::<T>(0), &s)?;
        let g = gamma(&(Complex::<T>::one() - k))?;
        Ok(Sides {
            lhs,
            rhs: g * w / s,
            lhs_diag,
            rhs_diag: None,
        })
    }
}

pub fn verify_gamma_pi(kappa: Complex<f64>, r0: f64, r: f64, opts: &VerifyOptions) -> Result<IdentityReport> {
    check_special(kappa, r0, r, opts)?;
    evaluate(&GammaPi { kappa, r0, r }, opts)
}

/// `(1/z) sum_l (-1)^l (1-kappa)_l/(2l)! M_{kappa,l+1/2}(z) = e^{-z/2}`.
pub struct MExpSum {
    pub kappa: Complex<f64>,
    pub z: Complex<f64>,
}

impl Identity for MExpSum {
    const ID: &'static str = "m_exp_sum";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        let k = from_c64::<T>(self.kappa);
        let z = from_c64::<T>(self.z);
        let mut coef = Complex::<T>::one();
        let gen = |l: usize| -> Result<Complex<T>> {
            if l > 0 {
                // (-1)^l (1-kappa)_l z^l / (2l)!
                coef = -(coef.clone() * (re(T::from_i64(l as i64)) - k.clone()) * z.clone())
                    / T::from_i64((2 * l * (2 * l - 1)) as i64);
            }
            if coef.is_zero() {
                return Ok(Complex::zero());
            }
            Ok(coef.clone() * whittaker_m_reduced(&k, &order::<T>(l), &z)?)
        };
        let (lhs, lhs_diag) = sum_with(gen, opts)?;
        let rhs = cexp(&cscale(&z, &(-T::half())));
        Ok(Sides {
            lhs,
            rhs,
            lhs_diag,
            rhs_diag: None,
        })
    }
}

pub fn verify_m_exp_sum(kappa: Complex<f64>, z: Complex<f64>, opts: &VerifyOptions) -> Result<IdentityReport> {
    check_kappa(kappa, opts.kappa_guard)?;
    evaluate(&MExpSum { kappa, z }, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::geometry_from;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn kappa_zero_reduces_to_exponential_kernel() {
        let geo = geometry_from(3.0, 1.0, 2.0 * PI / 3.0);
        let rep = verify_whittaker_addition(c(0.0, 0.0), &geo, &VerifyOptions::default()).unwrap();
        let want = (-geo.big_r / 2.0).exp() / geo.big_r;
        assert!((rep.rhs.re - want).abs() < 1e-14 * want);
        assert!(rep.rel_err < 1e-12, "{rep:?}");
    }

    #[test]
    fn complex_kappa_addition() {
        let geo = geometry_from(4.0, 1.5, 1.0);
        let rep = verify_whittaker_addition(c(0.4, 0.3), &geo, &VerifyOptions::default()).unwrap();
        assert!(rep.rel_err < 1e-9, "{rep:?}");
    }

    #[test]
    fn near_integer_kappa_is_refused() {
        let geo = geometry_from(4.0, 1.5, 1.0);
        let e = verify_whittaker_addition(c(2.0004, 0.0), &geo, &VerifyOptions::default()).unwrap_err();
        assert!(matches!(e, Error::NearPole { .. }));
        let e = verify_whittaker_addition(c(0.5, 0.0), &geometry_from(1.0, 1.0, 1.0), &VerifyOptions::default());
        assert!(matches!(e, Err(Error::GeometryViolation(_))));
    }

    #[test]
    fn special_angles_agree_with_dedicated_forms() {
        let k = c(0.3, 0.0);
        let o = VerifyOptions::default();
        let pi = verify_gamma_pi(k, 1.0, 4.0, &o).unwrap();
        assert!(pi.rel_err < 1e-9, "{pi:?}");
        let zero = verify_gamma_zero(c(-0.7, 0.0), 2.0, 5.0, &o).unwrap();
        assert!(zero.rel_err < 1e-9, "{zero:?}");
        // the theorem divides by Gamma(1 - kappa)
        let g = gamma(&c(0.7, 0.0)).unwrap();
        let gen = verify_whittaker_addition(k, &geometry_from(4.0, 1.0, PI), &o).unwrap();
        assert!((gen.lhs * g - pi.lhs).norm() < 1e-10 * pi.lhs.norm());
    }

    #[test]
    fn kappa_one_limit() {
        let rep = verify_kappa_integer_limit(1, &geometry_from(3.0, 1.0, PI / 2.0), &VerifyOptions::default()).unwrap();
        assert!(rep.rel_err < 1e-6, "{rep:?}");
        let col = verify_kappa_integer_limit(1, &geometry_from(3.0, 1.0, 0.0), &VerifyOptions::default()).unwrap();
        assert!(col.lhs.re.is_finite() && col.rhs.re.is_finite());
        assert!(verify_kappa_integer_limit(2, &geometry_from(3.0, 1.0, 0.0), &VerifyOptions::default()).is_err());
    }

    #[test]
    fn exponential_sum_for_complex_argument() {
        let rep = verify_m_exp_sum(c(1.7, 0.0), c(2.0, 1.0), &VerifyOptions::default()).unwrap();
        assert!(rep.rel_err < 1e-9, "{rep:?}");
        let tiny = verify_m_exp_sum(c(0.3, 0.0), c(1e-12, 0.0), &VerifyOptions::default()).unwrap();
        assert!((tiny.lhs.re - 1.0).abs() < 1e-11);
    }
}
