//! Summation formulas in the order `mu`: the downward sum for `W`, the
//! generalized antipodal addition theorem with its term diagnostics, the
//! Gegenbauer-weighted sum of `M`, and the binomial lemmas behind them.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{angle_parts, check_radii, evaluate, sum_with, ExactReport, GegenbauerStep, Identity, IdentityReport, Sides, VerifyOptions};
use crate::bigfloat::{self, BigFloat};
use crate::error::{Error, Result};
use crate::scalar::{cexp, cscale, from_c64, near_integer, rpow, Real};
use crate::special::gamma::gamma_real;
use crate::special::kummer::hyp1f1;
use crate::special::pochhammer::{binomial_rational, poch_auto, poch_rational};
use crate::special::whittaker::{whittaker_m_reduced, whittaker_w_gen};
use crate::summation::SeriesOutcome;

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn int<T: Real>(n: usize) -> T {
    T::from_i64(n as i64)
}

/// `(-1)^n r^{-n/2} W_{kappa-n/2, mu+n/2}(r)` as a finite sum of
/// `W_{kappa, mu+l}(r)` with binomial weights.
pub struct WDownwardSum {
    pub n: usize,
    pub kappa: Complex<f64>,
    pub mu: Complex<f64>,
    pub r: f64,
}

impl Identity for WDownwardSum {
    const ID: &'static str = "w_downward_sum";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        let (k, mu, r) = (from_c64::<T>(self.kappa), from_c64::<T>(self.mu), T::from_f64(self.r));
        let two_mu = mu.clone() * T::from_i64(2);
        let n = self.n;
        let gen = |l: usize| -> Result<Complex<T>> {
            let c = Complex::new(T::from_rational(&binomial_rational(n as u64, l as u64)), T::zero());
            let num = two_mu.clone() + re(int::<T>(2 * l));
            let den = poch_auto(&(two_mu.clone() + re(int::<T>(l))), n + 1);
            let w = whittaker_w_gen(&k, &(mu.clone() + re(int::<T>(l))), &r)?;
            let t = c * num / den * w;
            Ok(if l % 2 == 1 { -t } else { t })
        };
        let opts_fixed = VerifyOptions {
            lmax: Some(n),
            ..opts.clone()
        };
        let (lhs, lhs_diag) = sum_with(gen, &opts_fixed)?;
        let half_n = T::from_i64(n as i64) * T::half();
        let w = whittaker_w_gen(&(k - re(half_n.clone())), &(mu + re(half_n.clone())), &r)?;
        let mut rhs = w * (-(half_n * r.ln())).exp();
        if n % 2 == 1 {
            rhs = -rhs;
        }
        Ok(Sides {
            lhs,
            rhs,
            lhs_diag,
            rhs_diag: None,
        })
    }
}

fn check_two_mu(mu: Complex<f64>) -> Result<()> {
    if mu.im == 0.0 {
        if let Some(m) = near_integer(&(2.0 * mu.re), 0.0) {
            if m <= 0 {
                return Err(Error::ParameterPole(format!("2 mu = {m} is a non-positive integer")));
            }
        }
    }
    Ok(())
}

pub fn verify_w_downward_sum(
    n: usize,
    kappa: Complex<f64>,
    mu: Complex<f64>,
    r: f64,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    check_two_mu(mu)?;
    if !(r > 0.0) {
        return Err(Error::invalid(format!("the downward sum needs r > 0, got {r}")));
    }
    evaluate(&WDownwardSum { n, kappa, mu, r }, opts)
}

/// `r^{-mu-1/2} sum_l (-1)^l c_l r0^l Mred_{kappa,l+mu}(r0) W_{kappa,l+mu}(r)
/// = (r+r0)^{-mu-1/2} W_{kappa,mu}(r+r0)` with
/// `c_l = (mu-kappa+1/2)_l / ((l+2mu)_l l!)`, both sides already divided by
/// `r0^{mu+1/2}`.
pub struct PiAdditionGeneral {
    pub kappa: Complex<f64>,
    pub mu: Complex<f64>,
    pub r0: f64,
    pub r: f64,
}

impl Identity for PiAdditionGeneral {
    const ID: &'static str = "pi_addition_general";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        let (k, mu) = (from_c64::<T>(self.kappa), from_c64::<T>(self.mu));
        let (r0, r) = (T::from_f64(self.r0), T::from_f64(self.r));
        let r0z = re(r0.clone());
        let a = mu.clone() - k.clone() + re(T::half());
        let two_mu = mu.clone() * T::from_i64(2);
        let mut coef = Complex::<T>::one();
        let mut pow = T::one();
        let gen = |l: usize| -> Result<Complex<T>> {
            if l > 0 {
                // c_l / c_{l-1} = (a+l-1)/l * (l+2mu-1) / ((2l+2mu-2)(2l+2mu-1))
                let lm1 = re(int::<T>(l - 1));
                let num = (a.clone() + lm1.clone()) * (two_mu.clone() + lm1);
                let den = (two_mu.clone() + re(int::<T>(2 * l - 2))) * (two_mu.clone() + re(int::<T>(2 * l - 1)));
                coef = -(coef.clone() * num / den) / int::<T>(l);
                pow = pow.clone() * r0.clone();
            }
            if coef.is_zero() || pow.is_zero() {
                return Ok(Complex::zero());
            }
            let order = mu.clone() + re(int::<T>(l));
            let m = whittaker_m_reduced(&k, &order, &r0z)?;
            let w = whittaker_w_gen(&k, &order, &r)?;
            Ok(coef.clone() * m * w * pow.clone())
        };
        let (sum, lhs_diag) = sum_with(gen, opts)?;
        let expo = -(mu.clone() + re(T::half()));
        let lhs = sum * rpow(&r, &expo);
        let s = r.clone() + r0;
        let rhs = whittaker_w_gen(&k, &mu, &s)? * rpow(&s, &expo);
        Ok(Sides {
            lhs,
            rhs,
            lhs_diag,
            rhs_diag: None,
        })
    }
}

pub fn verify_pi_addition_general(
    kappa: Complex<f64>,
    mu: Complex<f64>,
    r0: f64,
    r: f64,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    check_radii(r0, r)?;
    if !(mu.re > 0.0) {
        return Err(Error::invalid(format!("the generalized addition theorem needs Re mu > 0, got {mu}")));
    }
    evaluate(&PiAdditionGeneral { kappa, mu, r0, r }, opts)
}

/// Normalized terms `t_l` of the generalized antipodal theorem, so that
/// `sum_l (-1)^l t_l = 1`:
/// `t_l = ((r+r0)/(r r0))^{mu+1/2} (mu-kappa+1/2)_l M_{kappa,l+mu}(r0) W_{kappa,l+mu}(r)
///        / ((l+2mu)_l l! W_{kappa,mu}(r+r0))`.
///
/// Evaluated at `digits` significant digits from closed-form rising products,
/// independently of the recursive coefficients used by the verifier. Returns
/// `t_0 .. t_{count-1}` and the alternating sum of all of them.
pub fn stress_terms(kappa: f64, mu: f64, r0: f64, r: f64, count: usize, digits: u32) -> Result<(Vec<f64>, f64)> {
    check_radii(r0, r)?;
    if !(r0 > 0.0 && mu > 0.0) {
        return Err(Error::invalid("stress terms need r0 > 0 and mu > 0"));
    }
    bigfloat::with_digits(digits.max(30), || {
        let f = BigFloat::from_f64;
        let (k, m, r0b, rb) = (re(f(kappa)), f(mu), f(r0), f(r));
        let s = rb.clone() + r0b.clone();
        let w0 = whittaker_w_gen(&k, &re(m.clone()), &s)?.re;
        // M(r0) = r0^{l+mu+1/2} Mred, so the r0 powers combine to r0^l
        let prefactor = ((m.clone() + BigFloat::half()) * (s / rb.clone()).ln()).exp() / w0;
        let a = re(m.clone() - k.re.clone() + BigFloat::half());
        let mut terms = Vec::with_capacity(count);
        let mut alt = BigFloat::zero();
        let mut fact = BigFloat::one();
        let mut pow = BigFloat::one();
        for l in 0..count {
            if l > 0 {
                fact = fact * int::<BigFloat>(l);
                pow = pow * r0b.clone();
            }
            let lb = int::<BigFloat>(l);
            let num = poch_auto(&a, l).re;
            let den = poch_auto(&re(lb.clone() + m.clone() * BigFloat::from_i64(2)), l).re * fact.clone();
            let order = re(lb + m.clone());
            let mr = whittaker_m_reduced(&k, &order, &re(r0b.clone()))?.re;
            let w = whittaker_w_gen(&k, &order, &rb)?.re;
            let t = prefactor.clone() * num / den * pow.clone() * mr * w;
            terms.push(t.to_f64());
            alt = if l % 2 == 0 { alt + t } else { alt - t };
        }
        Ok((terms, alt.to_f64()))
    })
}

/// First `l` at which the large-`mu` surrogate of `t_l` drops below
/// `threshold`. The surrogate replaces `M` and `W` by their leading large-order
/// forms `M_{kappa,nu}(z) ~ z^{nu+1/2}` and
/// `W_{kappa,nu}(x) ~ Gamma(kappa+nu) (x/4)^{1/2-nu} / sqrt(pi)`.
pub fn surrogate_first_below(kappa: f64, mu: f64, r0: f64, r: f64, threshold: f64, max_l: usize) -> Result<Option<usize>> {
    check_radii(r0, r)?;
    if !(r0 > 0.0 && mu > 0.0) {
        return Err(Error::invalid("the surrogate needs r0 > 0 and mu > 0"));
    }
    bigfloat::with_digits(30, || {
        let f = BigFloat::from_f64;
        let (k, m, r0b, rb) = (f(kappa), f(mu), f(r0), f(r));
        let s = rb.clone() + r0b.clone();
        let w0 = whittaker_w_gen(&re(k.clone()), &re(m.clone()), &s)?.re;
        let two = BigFloat::from_i64(2);
        let half = BigFloat::half();
        // 2^{2mu-1} (r+r0)^{mu+1/2} Gamma(kappa+mu) / (sqrt(pi) r^{2mu} W(r+r0))
        let mut t = ((two.clone() * m.clone() - BigFloat::one()) * two.clone().ln()).exp()
            * ((m.clone() + half.clone()) * s.ln()).exp()
            * gamma_real(&(k.clone() + m.clone()))?
            / (BigFloat::pi().sqrt() * (two.clone() * m.clone() * rb.ln()).exp() * w0);
        let thr = f(threshold);
        let ratio_base = BigFloat::from_i64(4) * r0b / rb;
        for l in 0..=max_l {
            if l > 0 {
                let lb = int::<BigFloat>(l);
                let num = (m.clone() - k.clone() + lb.clone() - half.clone())
                    * (lb.clone() - BigFloat::one() + k.clone() + m.clone())
                    * (lb.clone() + two.clone() * m.clone() - BigFloat::one());
                let den = lb.clone()
                    * (two.clone() * lb.clone() + two.clone() * m.clone() - two.clone())
                    * (two.clone() * lb + two.clone() * m.clone() - BigFloat::one());
                t = t * num / den * ratio_base.clone();
            }
            if t < thr {
                return Ok(Some(l));
            }
        }
        Ok(None)
    })
}

/// Term diagnostics of the generalized antipodal theorem at large `mu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressReport {
    pub kappa: f64,
    pub mu: f64,
    pub r0: f64,
    pub r: f64,
    pub digits: u32,
    pub t0: f64,
    /// `t_145`, the index singled out in the published diagnostics.
    pub t145: Option<f64>,
    pub max_term: f64,
    pub argmax: usize,
    /// `sum_l (-1)^l t_l` over all computed terms.
    pub alternating_sum: f64,
    pub n_terms: usize,
    /// First `l` with surrogate `t_l < 0.1`.
    pub surrogate_first_below: Option<usize>,
    /// The verifier run at the same precision.
    pub report: IdentityReport,
    pub terms: Vec<f64>,
}

const STRESS_FLOOR: f64 = 1e-25;
const STRESS_MAX_TERMS: usize = 2000;

/// Full diagnostics at `digits` digits. Terms are generated until they fall
/// below `1e-25` past the peak.
pub fn stress_report(kappa: f64, mu: f64, r0: f64, r: f64, digits: u32) -> Result<StressReport> {
    let opts = VerifyOptions {
        auto_escalate: false,
        ..VerifyOptions::extended(digits)
    };
    let report = verify_pi_addition_general(Complex::new(kappa, 0.0), Complex::new(mu, 0.0), r0, r, &opts)?;
    // the verifier already found where the series dies out
    let mut count = (report.lhs_diag.n_terms + 8).max(150);
    let (terms, alt) = loop {
        let (t, alt) = stress_terms(kappa, mu, r0, r, count, digits)?;
        let (argmax, _) = argmax(&t);
        if t.last().map_or(false, |&x| x < STRESS_FLOOR) && argmax + 1 < t.len() || count >= STRESS_MAX_TERMS {
            break (t, alt);
        }
        count = (count * 2).min(STRESS_MAX_TERMS);
    };
    let (argmax, max_term) = argmax(&terms);
    Ok(StressReport {
        kappa,
        mu,
        r0,
        r,
        digits,
        t0: terms[0],
        t145: terms.get(145).copied(),
        max_term,
        argmax,
        alternating_sum: alt,
        n_terms: terms.len(),
        surrogate_first_below: surrogate_first_below(kappa, mu, r0, r, 0.1, 100_000)?,
        report,
        terms,
    })
}

fn argmax(t: &[f64]) -> (usize, f64) {
    t.iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, x)| if x > best.1 { (i, x) } else { best })
}

/// The large-order stress case `mu = 20, kappa = 1, r0 = 1, r = 2`.
pub fn large_order_stress(digits: u32) -> Result<StressReport> {
    stress_report(1.0, 20.0, 1.0, 2.0, digits)
}

/// `z^{-mu-1/2} sum_l (mu-kappa+1/2)_l/(2mu)_{2l} M_{kappa,l+mu}(z) C_l^mu(cos gamma)
/// = e^{-z/2} 1F1(mu-kappa+1/2; mu+1/2; cos^2(gamma/2) z)`.
pub struct MGegenbauerSum {
    pub kappa: Complex<f64>,
    pub mu: f64,
    pub z: Complex<f64>,
    pub gamma: f64,
}

impl Identity for MGegenbauerSum {
    const ID: &'static str = "m_gegenbauer_sum";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        let k = from_c64::<T>(self.kappa);
        let mu = T::from_f64(self.mu);
        let z = from_c64::<T>(self.z);
        let (cos_g, _, c2) = angle_parts::<T>(self.gamma);
        let a = re(mu.clone()) - k.clone() + re(T::half());
        let two_mu = mu.clone() * T::from_i64(2);
        let mut geg = GegenbauerStep::new(mu.clone(), cos_g);
        let mut coef = Complex::<T>::one();
        let gen = |l: usize| -> Result<Complex<T>> {
            if l > 0 {
                // (a)_l / (2mu)_{2l}, times z^l
                let den = (two_mu.clone() + int::<T>(2 * l - 2)) * (two_mu.clone() + int::<T>(2 * l - 1));
                coef = coef.clone() * (a.clone() + re(int::<T>(l - 1))) * z.clone() / den;
            }
            let c = geg.at(l);
            if coef.is_zero() || c.is_zero() {
                return Ok(Complex::zero());
            }
            let m = whittaker_m_reduced(&k, &re(mu.clone() + int::<T>(l)), &z)?;
            Ok(coef.clone() * m * c)
        };
        let (lhs, lhs_diag) = sum_with(gen, opts)?;
        let b = re(mu + T::half());
        let f = hyp1f1(&a, &b, &cscale(&z, &c2))?;
        let rhs = cexp(&cscale(&z, &(-T::half()))) * f.value;
        let rhs_diag = SeriesOutcome {
            value: crate::scalar::to_c64(&rhs),
            n_terms: f.terms,
            max_term_mag: crate::scalar::cabs_f64(&rhs),
            condition_number: f.condition,
            tail_estimate: 0.0,
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

pub fn verify_m_gegenbauer_sum(
    kappa: Complex<f64>,
    mu: f64,
    z: Complex<f64>,
    gamma: f64,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    if !(mu > 0.0) {
        return Err(Error::invalid(format!("the Gegenbauer sum needs mu > 0, got {mu}")));
    }
    if !(gamma.abs() <= std::f64::consts::PI) {
        return Err(Error::invalid(format!("gamma = {gamma} lies outside [-pi, pi]")));
    }
    evaluate(&MGegenbauerSum { kappa, mu, z, gamma }, opts)
}

/// `sum_l C(n,l) s^l (2nu+2l)/(2nu+l)_{n+1}` in exact arithmetic, `s = +-1`.
fn binomial_sum(n: usize, nu: &BigRational, alternating: bool) -> Result<BigRational> {
    let two_nu = nu * BigRational::from_integer(2.into());
    let mut acc = BigRational::zero();
    for l in 0..=n {
        let lq = BigRational::from_integer((l as i64).into());
        let den = poch_rational(&(&two_nu + &lq), n + 1);
        if den.is_zero() {
            return Err(Error::PoleHit(format!("(2 nu + {l})_{} vanishes at nu = {nu}", n + 1)));
        }
        let t = binomial_rational(n as u64, l as u64) * (&two_nu + &lq * BigRational::from_integer(2.into())) / den;
        acc = if alternating && l % 2 == 1 { acc - t } else { acc + t };
    }
    Ok(acc)
}

/// `sum_l C(N,l) (2nu+2l)/(2nu+l)_{N+1} = 1/(nu+1/2)_N`, exactly.
pub fn verify_lemma_binomial(n: usize, nu: &BigRational) -> Result<ExactReport> {
    let lhs = binomial_sum(n, nu, false)?;
    let p = poch_rational(&(nu + BigRational::new(1.into(), 2.into())), n);
    if p.is_zero() {
        return Err(Error::PoleHit(format!("(nu + 1/2)_{n} vanishes at nu = {nu}")));
    }
    Ok(ExactReport::new("lemma_binomial", lhs, BigRational::one() / p))
}

/// `sum_l (-1)^l C(n,l) (2mu+2l)/(2mu+l)_{n+1} = delta_{n,0}`, exactly.
pub fn verify_delta_identity(n: usize, mu: &BigRational) -> Result<ExactReport> {
    let lhs = binomial_sum(n, mu, true)?;
    let rhs = if n == 0 { BigRational::one() } else { BigRational::zero() };
    Ok(ExactReport::new("delta_identity", lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::verify_gamma_pi;
    use crate::special::gamma::gamma;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn downward_sum() {
        let o = VerifyOptions::default();
        let rep = verify_w_downward_sum(7, c(0.6, 0.2), c(1.3, 0.0), 2.5, &o).unwrap();
        assert!(rep.rel_err < 1e-9, "{rep:?}");
        let triv = verify_w_downward_sum(0, c(0.6, 0.2), c(1.3, 0.0), 2.5, &o).unwrap();
        assert!(triv.rel_err < 1e-15);
        assert!(matches!(
            verify_w_downward_sum(2, c(0.6, 0.0), c(-1.0, 0.0), 2.5, &o),
            Err(Error::ParameterPole(_))
        ));
    }

    #[test]
    fn general_antipodal_theorem() {
        let rep = verify_pi_addition_general(c(0.9, 0.0), c(2.2, 0.0), 1.0, 3.0, &VerifyOptions::default()).unwrap();
        assert!(rep.rel_err < 1e-8, "{rep:?}");
    }

    #[test]
    fn half_order_matches_gamma_pi_after_rescaling() {
        let k = c(0.3, 0.0);
        let o = VerifyOptions::default();
        let general = verify_pi_addition_general(k, c(0.5, 0.0), 1.0, 4.0, &o).unwrap();
        let pi = verify_gamma_pi(k, 1.0, 4.0, &o).unwrap();
        // (1-kappa)_l Gamma(1-kappa) = Gamma(l+1-kappa)
        let g = gamma(&c(0.7, 0.0)).unwrap();
        let scaled = general.lhs * g;
        assert!((scaled - pi.lhs).norm() < 1e-10 * pi.lhs.norm(), "{scaled} vs {}", pi.lhs);
    }

    #[test]
    fn gegenbauer_weighted_sum() {
        let o = VerifyOptions::default();
        let rep = verify_m_gegenbauer_sum(c(1.1, 0.0), 0.8, c(1.5, 0.5), PI / 3.0, &o).unwrap();
        assert!(rep.rel_err < 1e-9, "{rep:?}");
        let anti = verify_m_gegenbauer_sum(c(1.1, 0.0), 0.8, c(1.5, 0.5), PI, &o).unwrap();
        let want = (-c(1.5, 0.5) / 2.0).exp();
        assert!((anti.rhs - want).norm() < 1e-14);
    }

    #[test]
    fn binomial_lemmas() {
        assert!(verify_lemma_binomial(0, &q(3, 7)).unwrap().exact);
        let rep = verify_lemma_binomial(2, &q(1, 1)).unwrap();
        assert!(rep.exact && rep.lhs == q(4, 15));
        assert!(verify_lemma_binomial(25, &q(7, 3)).unwrap().exact);
        assert!(matches!(verify_lemma_binomial(3, &q(-1, 1)), Err(Error::PoleHit(_))));
        let d = verify_delta_identity(3, &q(1, 2)).unwrap();
        assert!(d.exact && d.lhs.is_zero());
    }
}
