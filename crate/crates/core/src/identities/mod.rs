//! Verifiers for addition and summation formulas of Whittaker, Bessel,
//! Laguerre and Gegenbauer functions.
//!
//! Each verifier evaluates the two sides of an identity along disjoint code
//! paths (a series on one side, a closed form on the other) and returns an
//! [`IdentityReport`]. The sides are generic over [`Real`], so the same code
//! produces the hardware result, its extended-precision re-run and the
//! golden-file oracle.

pub mod bessel;
pub mod laguerre;
pub mod sums;
pub mod whittaker;

use num_complex::Complex;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bigfloat::{self, BigFloat};
use crate::error::{Error, Result};
use crate::scalar::{cabs, is_finite_c, to_c64, Real};
use crate::summation::{sum_fixed, sum_series, Precision, SeriesOptions, SeriesOutcome};

pub use bessel::{verify_gegenbauer_addition, verify_graf_2d, verify_spherical_addition};
pub use laguerre::{
    verify_laguerre_addition, verify_laguerre_addition_exact, verify_laguerre_symmetric,
    verify_laguerre_symmetric_exact, SymmetricVariant,
};
pub use sums::{
    large_order_stress, stress_terms, surrogate_first_below, verify_delta_identity, verify_lemma_binomial,
    verify_m_gegenbauer_sum, verify_pi_addition_general, verify_w_downward_sum, stress_report, StressReport,
};
pub use whittaker::{
    hostler_bracket, verify_gamma_pi, verify_gamma_zero, verify_kappa_integer_limit, verify_m_exp_sum,
    verify_whittaker_addition,
};

/// Denominator floor of the relative residual.
pub const REL_ERR_FLOOR: f64 = 1e-300;

/// `(r, r0, gamma)` with `R = |r - r0|` and `x = r + r0 + R`, `y = r + r0 - R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub r: f64,
    pub r0: f64,
    pub gamma: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub x: f64,
    pub y: f64,
}

/// Build the geometry for radii `r`, `r0` enclosing the angle `gamma`.
pub fn geometry_from(r: f64, r0: f64, gamma: f64) -> GeometryConfig {
    let g = Geom::<f64>::new(r, r0, gamma);
    GeometryConfig {
        r,
        r0,
        gamma,
        big_r: g.big_r,
        x: g.x,
        y: g.y,
    }
}

impl GeometryConfig {
    /// `0 <= r0 < r`, as the addition theorems require.
    pub fn check_ordered(&self) -> Result<()> {
        check_radii(self.r0, self.r)
    }
}

pub(crate) fn check_radii(r0: f64, r: f64) -> Result<()> {
    if !(r0 >= 0.0 && r0 < r && r.is_finite()) {
        return Err(Error::GeometryViolation(format!("need 0 <= r0 < r, got r0 = {r0}, r = {r}")));
    }
    Ok(())
}

/// `(cos gamma, sin^2(gamma/2), cos^2(gamma/2))`, with `gamma = 0` and
/// `gamma = +-pi` (the nearest doubles) treated as the exact angles.
pub(crate) fn angle_parts<T: Real>(gamma: f64) -> (T, T, T) {
    if gamma == 0.0 {
        return (T::one(), T::zero(), T::one());
    }
    if gamma.abs() == std::f64::consts::PI {
        return (-T::one(), T::one(), T::zero());
    }
    let g = T::from_f64(gamma);
    let h = g.clone() * T::half();
    let (s, c) = (h.sin(), h.cos());
    (g.cos(), s.clone() * s, c.clone() * c)
}

/// Geometry evaluated in `T`. `R` comes from `(r - r0)^2 + 4 r r0 sin^2(gamma/2)`
/// and `y` from `x y = 4 r r0 cos^2(gamma/2)`, which avoids cancellation at
/// both ends of the angle range.
#[derive(Debug, Clone)]
pub(crate) struct Geom<T: Real> {
    pub r: T,
    pub r0: T,
    pub cos_g: T,
    pub big_r: T,
    pub x: T,
    pub y: T,
}

impl<T: Real> Geom<T> {
    pub fn new(r: f64, r0: f64, gamma: f64) -> Self {
        let (cos_g, s2, c2) = angle_parts::<T>(gamma);
        let (rt, r0t) = (T::from_f64(r), T::from_f64(r0));
        let four_rr0 = rt.clone() * r0t.clone() * T::from_i64(4);
        let diff = rt.clone() - r0t.clone();
        let big_r = (diff.clone() * diff + four_rr0.clone() * s2).sqrt();
        let x = rt.clone() + r0t.clone() + big_r.clone();
        let y = if x.is_zero() { T::zero() } else { four_rr0 * c2 / x.clone() };
        Geom {
            r: rt,
            r0: r0t,
            cos_g,
            big_r,
            x,
            y,
        }
    }
}

/// Gegenbauer `C_n^{(nu)}(x)` advanced one degree per call, so a series can
/// pull its polynomial factor without re-running the recurrence.
pub(crate) struct GegenbauerStep<T: Real> {
    two_x: T,
    nu: T,
    prev: T,
    cur: T,
    n: usize,
}

impl<T: Real> GegenbauerStep<T> {
    pub fn new(nu: T, x: T) -> Self {
        GegenbauerStep {
            two_x: x * T::from_i64(2),
            nu,
            prev: T::zero(),
            cur: T::one(),
            n: 0,
        }
    }

    /// `P_l(x)` is `C_l^{(1/2)}(x)`.
    pub fn legendre(x: T) -> Self {
        Self::new(T::half(), x)
    }

    /// Value at degree `n`; degrees must be requested in increasing order.
    pub fn at(&mut self, n: usize) -> T {
        assert!(n >= self.n, "GegenbauerStep degrees must not decrease");
        while self.n < n {
            let k = T::from_i64(self.n as i64 + 1);
            let next = (self.two_x.clone() * (k.clone() + self.nu.clone() - T::one()) * self.cur.clone()
                - (k.clone() + self.nu.clone() * T::from_i64(2) - T::from_i64(2)) * self.prev.clone())
                / k;
            self.prev = std::mem::replace(&mut self.cur, next);
            self.n += 1;
        }
        self.cur.clone()
    }
}

/// Residual report of one identity evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub lhs: Complex<f64>,
    pub rhs: Complex<f64>,
    pub abs_err: f64,
    /// `abs_err / max(|lhs|, |rhs|, REL_ERR_FLOOR)`.
    pub rel_err: f64,
    pub lhs_diag: SeriesOutcome,
    pub rhs_diag: Option<SeriesOutcome>,
    /// Precision the reported values were computed at.
    pub precision: Precision,
}

impl IdentityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.rel_err <= tol
    }
}

/// Both sides of an identity evaluated in `T`.
#[derive(Debug, Clone)]
pub struct Sides<T: Real> {
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
    pub lhs_diag: SeriesOutcome,
    pub rhs_diag: Option<SeriesOutcome>,
}

impl<T: Real> Sides<T> {
    pub fn report(&self, identity: &str, precision: Precision) -> IdentityReport {
        let diff = cabs(&(self.lhs.clone() - self.rhs.clone()));
        let scale = T::max_of(cabs(&self.lhs), cabs(&self.rhs));
        let abs_err = diff.to_f64();
        let scale_f = scale.to_f64();
        let rel_err = if scale_f >= REL_ERR_FLOOR && scale_f.is_finite() {
            (diff / scale).to_f64()
        } else if scale_f.is_finite() {
            abs_err / REL_ERR_FLOOR
        } else {
            f64::NAN
        };
        IdentityReport {
            identity: identity.to_string(),
            lhs: to_c64(&self.lhs),
            rhs: to_c64(&self.rhs),
            abs_err,
            rel_err,
            lhs_diag: self.lhs_diag.clone(),
            rhs_diag: self.rhs_diag.clone(),
            precision,
        }
    }

    fn worst_condition(&self) -> f64 {
        let r = self.rhs_diag.as_ref().map_or(1.0, |d| d.condition_number);
        self.lhs_diag.condition_number.max(r)
    }
}

/// Knobs shared by the verifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub series: SeriesOptions,
    /// Sum exactly `lmax + 1` terms instead of stopping adaptively.
    pub lmax: Option<usize>,
    /// Refuse `kappa` closer than this to a positive integer.
    pub kappa_guard: f64,
    /// Residual the caller is after; drives the precision escalation.
    pub target_rel: f64,
    /// Re-run at extended precision when `condition * term_error > target_rel / 10`
    /// or when the hardware evaluation overflows.
    pub auto_escalate: bool,
    /// Initial step of the Richardson-extrapolated kappa derivative.
    pub derivative_step: f64,
    /// Evaluate the symmetric Laguerre identity at `u = v` through its limit.
    pub confluent_limit: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            series: SeriesOptions::default(),
            lmax: None,
            kappa_guard: 1e-3,
            target_rel: 1e-10,
            auto_escalate: true,
            derivative_step: 0.125,
            confluent_limit: false,
        }
    }
}

impl VerifyOptions {
    /// Everything at `digits` significant digits with ten times the term budget.
    pub fn oracle(digits: u32) -> Self {
        let base = SeriesOptions::default();
        VerifyOptions {
            series: SeriesOptions {
                max_terms: base.max_terms * 10,
                ..SeriesOptions::extended(digits)
            },
            target_rel: 10f64.powi(-(digits as i32) + 10),
            ..Default::default()
        }
    }

    pub fn extended(digits: u32) -> Self {
        VerifyOptions {
            series: SeriesOptions::extended(digits),
            ..Default::default()
        }
    }
}

/// An identity whose sides can be evaluated at any precision.
pub trait Identity {
    const ID: &'static str;
    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>>;
}

const MAX_ESCALATED_DIGITS: u32 = 2000;
/// Relative error of a single hardware term. The Kummer routines escalate
/// past a condition of 30, so a term carries a few dozen ulps at worst.
const TERM_ERROR: f64 = 64.0 * f64::EPSILON;

/// Evaluate `id` at the precision requested in `opts`, escalating hardware
/// runs to extended precision when the measured cancellation forecasts a
/// residual above `opts.target_rel`.
pub fn evaluate<I: Identity>(id: &I, opts: &VerifyOptions) -> Result<IdentityReport> {
    if let Precision::Extended { digits } = opts.series.precision {
        return evaluate_extended(id, opts, digits, false);
    }
    let first = id.sides::<f64>(opts);
    let cond = match &first {
        Ok(s) => {
            let c = s.worst_condition();
            let finite = is_finite_c(&s.lhs) && is_finite_c(&s.rhs);
            if !opts.auto_escalate || (finite && c * TERM_ERROR <= opts.target_rel / 10.0) {
                return Ok(s.report(I::ID, Precision::Hardware));
            }
            c
        }
        Err(Error::Overflow(_)) if opts.auto_escalate => f64::INFINITY,
        Err(_) => return first.map(|s| s.report(I::ID, Precision::Hardware)),
    };
    let digits = escalation_digits(cond, opts.target_rel);
    evaluate_extended(id, opts, digits, true)
}

/// Digits needed to absorb `cond` and still resolve `target`.
pub(crate) fn escalation_digits(cond: f64, target: f64) -> u32 {
    let loss = if cond.is_finite() { cond.max(1.0).log10().ceil() as u32 } else { 24 };
    let want = (-target.log10()).ceil().max(0.0) as u32;
    (want + loss + 10).max(30)
}

fn evaluate_extended<I: Identity>(id: &I, opts: &VerifyOptions, digits: u32, escalated: bool) -> Result<IdentityReport> {
    let mut digits = digits.max(30);
    loop {
        let mut o = opts.clone();
        o.series.precision = Precision::Extended { digits };
        if escalated {
            o.series.rel_tol = opts.series.rel_tol.min(opts.target_rel * 1e-3);
        }
        let sides = bigfloat::with_digits(digits, || id.sides::<BigFloat>(&o));
        let s = match sides {
            Err(Error::Overflow(_)) if escalated && digits < MAX_ESCALATED_DIGITS => {
                digits *= 2;
                continue;
            }
            r => r?,
        };
        let cond = s.worst_condition();
        let resolved = cond * 10f64.powi(-(digits as i32)) <= opts.target_rel / 10.0;
        if resolved || !escalated {
            return Ok(s.report(I::ID, Precision::Extended { digits }));
        }
        if digits >= MAX_ESCALATED_DIGITS {
            return Err(Error::PrecisionExhausted { digits, condition: cond });
        }
        digits = escalation_digits(cond, opts.target_rel).max(digits * 2).min(MAX_ESCALATED_DIGITS);
    }
}

/// Adaptive sum, or exactly `lmax + 1` terms when the caller fixed it.
pub(crate) fn sum_with<T, F>(gen: F, opts: &VerifyOptions) -> Result<(Complex<T>, SeriesOutcome)>
where
    T: Real,
    F: FnMut(usize) -> Result<Complex<T>>,
{
    match opts.lmax {
        Some(l) => sum_fixed(gen, l + 1, &opts.series),
        None => sum_series(gen, &opts.series),
    }
}

/// `NearPole` when `kappa` lies within `guard` of a positive integer.
pub(crate) fn check_kappa(kappa: Complex<f64>, guard: f64) -> Result<()> {
    let n = kappa.re.round();
    if n >= 1.0 && (kappa - Complex::new(n, 0.0)).norm() < guard.max(0.0) {
        return Err(Error::NearPole {
            kappa: format!("{kappa}"),
            guard,
        });
    }
    Ok(())
}

/// Residual report of an identity verified in exact rational arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactReport {
    pub identity: String,
    #[serde(with = "crate::exact::rational_serde")]
    pub lhs: BigRational,
    #[serde(with = "crate::exact::rational_serde")]
    pub rhs: BigRational,
    pub exact: bool,
    #[serde(with = "crate::exact::rational_serde")]
    pub residual: BigRational,
}

impl ExactReport {
    pub fn new(identity: &str, lhs: BigRational, rhs: BigRational) -> Self {
        let residual = &lhs - &rhs;
        ExactReport {
            identity: identity.to_string(),
            exact: residual == BigRational::from_integer(0.into()),
            lhs,
            rhs,
            residual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn geometry_special_angles() {
        let g = geometry_from(2.0, 1.0, 0.0);
        assert_eq!((g.big_r, g.x, g.y), (1.0, 4.0, 2.0));
        let g = geometry_from(2.0, 1.0, PI);
        assert_eq!((g.big_r, g.x, g.y), (3.0, 6.0, 0.0));
        let g = geometry_from(2.0, 1.0, PI / 2.0);
        assert!((g.big_r - 5f64.sqrt()).abs() < 1e-15);
        assert!((g.x * g.y - 4.0).abs() < 1e-14);
        assert_eq!(geometry_from(2.0, 1.0, -0.7), geometry_from(2.0, 1.0, 0.7).with_gamma(-0.7));
    }

    impl GeometryConfig {
        fn with_gamma(mut self, g: f64) -> Self {
            self.gamma = g;
            self
        }
    }

    #[test]
    fn escalation_digit_budget() {
        assert_eq!(escalation_digits(1.0, 1e-10), 30);
        assert_eq!(escalation_digits(1e20, 1e-10), 40);
        assert_eq!(escalation_digits(f64::INFINITY, 1e-10), 44);
    }

    #[test]
    fn kappa_guard() {
        assert!(check_kappa(Complex::new(1.0005, 0.0), 1e-3).is_err());
        assert!(check_kappa(Complex::new(0.0, 0.0), 1e-3).is_ok());
        assert!(check_kappa(Complex::new(2.0, 0.01), 1e-3).is_ok());
    }
}
