//! Sequential series summation with compensated accumulation and
//! cancellation diagnostics.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bigfloat;
use crate::error::{Error, Result};
use crate::scalar::{cabs, to_c64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Hardware,
    Extended { digits: u32 },
}

impl Precision {
    pub fn label(&self) -> String {
        match self {
            Precision::Hardware => "hardware".to_string(),
            Precision::Extended { digits } => format!("extended({digits})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailPolicy {
    /// Extrapolate from the ratio of the last two terms.
    RatioTest,
    /// Terms decay like `base^l * l^power`.
    AsymptoticRate { base: f64, power: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesOptions {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub precision: Precision,
    pub tail_policy: TailPolicy,
    /// Keep `|t_l|` for every term in the outcome.
    pub record_terms: bool,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            rel_tol: 1e-16,
            max_terms: 10_000,
            precision: Precision::Hardware,
            tail_policy: TailPolicy::RatioTest,
            record_terms: false,
        }
    }
}

impl SeriesOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if self.max_terms == 0 {
            return Err(Error::invalid("max_terms must be at least 1"));
        }
        if let Precision::Extended { digits } = self.precision {
            if digits < 30 {
                return Err(Error::invalid(format!(
                    "extended precision needs at least 30 digits, got {digits}"
                )));
            }
        }
        Ok(())
    }

    pub fn extended(digits: u32) -> Self {
        SeriesOptions {
            rel_tol: 10f64.powi(-(digits as i32)),
            precision: Precision::Extended { digits },
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesOutcome {
    pub value: Complex<f64>,
    pub n_terms: usize,
    pub max_term_mag: f64,
    /// `sum |t_l| / |sum t_l|`.
    pub condition_number: f64,
    pub tail_estimate: f64,
    pub terms_log: Option<Vec<f64>>,
}

impl SeriesOutcome {
    /// Outcome of a closed-form evaluation with no summation involved.
    pub fn single(value: Complex<f64>) -> Self {
        SeriesOutcome {
            value,
            n_terms: 1,
            max_term_mag: value.norm(),
            condition_number: 1.0,
            tail_estimate: 0.0,
            terms_log: None,
        }
    }
}

/// Neumaier-compensated complex accumulator that also tracks `sum |t|`.
#[derive(Debug, Clone)]
pub struct Accumulator<T: Real> {
    sum_re: T,
    sum_im: T,
    comp_re: T,
    comp_im: T,
    abs_sum: T,
    max_mag: T,
    count: usize,
}

fn neumaier<T: Real>(sum: &mut T, comp: &mut T, x: T) {
    let t = sum.clone() + x.clone();
    if sum.abs() >= x.abs() {
        *comp = comp.clone() + ((sum.clone() - t.clone()) + x);
    } else {
        *comp = comp.clone() + ((x - t.clone()) + sum.clone());
    }
    *sum = t;
}

impl<T: Real> Default for Accumulator<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Accumulator<T> {
    pub fn new() -> Self {
        Accumulator {
            sum_re: T::zero(),
            sum_im: T::zero(),
            comp_re: T::zero(),
            comp_im: T::zero(),
            abs_sum: T::zero(),
            max_mag: T::zero(),
            count: 0,
        }
    }

    /// Adds `t` and returns `|t|`.
    pub fn add(&mut self, t: &Complex<T>) -> T {
        let mag = cabs(t);
        neumaier(&mut self.sum_re, &mut self.comp_re, t.re.clone());
        neumaier(&mut self.sum_im, &mut self.comp_im, t.im.clone());
        self.abs_sum = self.abs_sum.clone() + mag.clone();
        if mag > self.max_mag {
            self.max_mag = mag.clone();
        }
        self.count += 1;
        mag
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(
            self.sum_re.clone() + self.comp_re.clone(),
            self.sum_im.clone() + self.comp_im.clone(),
        )
    }

    pub fn abs_sum(&self) -> T {
        self.abs_sum.clone()
    }

    pub fn max_mag(&self) -> T {
        self.max_mag.clone()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// `sum |t| / |sum t|`, at least 1; infinite for a zero sum of nonzero terms.
    pub fn condition(&self) -> f64 {
        condition_ratio(&self.abs_sum, &cabs(&self.value()))
    }
}

pub fn condition_ratio<T: Real>(abs_sum: &T, value_mag: &T) -> f64 {
    if abs_sum.is_zero() {
        return 1.0;
    }
    if value_mag.is_zero() {
        return f64::INFINITY;
    }
    let c = (abs_sum.clone() / value_mag.clone()).to_f64();
    if c.is_nan() {
        f64::INFINITY
    } else {
        c.max(1.0)
    }
}

fn mag_f64<T: Real>(x: &T) -> f64 {
    let v = x.to_f64();
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Sum `term_gen(0), term_gen(1), ...` in index order.
///
/// Stops once three consecutive terms are each below `rel_tol * |partial|`
/// and the tail predicted by `opts.tail_policy` is below the same bound.
/// Under `Precision::Extended` the generator runs at that working precision.
pub fn sum_series<T, F>(term_gen: F, opts: &SeriesOptions) -> Result<(Complex<T>, SeriesOutcome)>
where
    T: Real,
    F: FnMut(usize) -> Result<Complex<T>>,
{
    opts.validate()?;
    match opts.precision {
        Precision::Extended { digits } if T::EXTENDED => {
            bigfloat::with_digits(digits, || sum_series_inner(term_gen, opts))
        }
        _ => sum_series_inner(term_gen, opts),
    }
}

fn sum_series_inner<T, F>(mut term_gen: F, opts: &SeriesOptions) -> Result<(Complex<T>, SeriesOutcome)>
where
    T: Real,
    F: FnMut(usize) -> Result<Complex<T>>,
{
    let tol = T::from_f64(opts.rel_tol);
    let mut acc = Accumulator::<T>::new();
    let mut log = opts.record_terms.then(Vec::new);
    let mut small_run = 0usize;
    let mut prev_mag: Option<T> = None;
    let mut tail = f64::INFINITY;

    for n in 0..opts.max_terms {
        let t = term_gen(n)?;
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(Error::Overflow(format!("series term {n} is not finite")));
        }
        let mag = acc.add(&t);
        if let Some(l) = log.as_mut() {
            l.push(mag_f64(&mag));
        }
        let partial = cabs(&acc.value());
        let bound = tol.clone() * partial.clone();
        if mag <= bound {
            small_run += 1;
        } else {
            small_run = 0;
        }
        tail = tail_estimate(&opts.tail_policy, n, &mag, prev_mag.as_ref());
        prev_mag = Some(mag);
        if small_run >= 3 && T::from_f64(tail) <= bound {
            return Ok((acc.value(), outcome(&acc, tail, log)));
        }
    }
    Err(Error::no_convergence(outcome(&acc, tail, log)))
}

/// Sum exactly `count` terms in index order: a finite sum, or a series
/// truncated at a caller-chosen index. The tail estimate follows
/// `opts.tail_policy` from the last two terms.
pub fn sum_fixed<T, F>(term_gen: F, count: usize, opts: &SeriesOptions) -> Result<(Complex<T>, SeriesOutcome)>
where
    T: Real,
    F: FnMut(usize) -> Result<Complex<T>>,
{
    opts.validate()?;
    match opts.precision {
        Precision::Extended { digits } if T::EXTENDED => {
            bigfloat::with_digits(digits, || sum_fixed_inner(term_gen, count, opts))
        }
        _ => sum_fixed_inner(term_gen, count, opts),
    }
}

fn sum_fixed_inner<T, F>(mut term_gen: F, count: usize, opts: &SeriesOptions) -> Result<(Complex<T>, SeriesOutcome)>
where
    T: Real,
    F: FnMut(usize) -> Result<Complex<T>>,
{
    let mut acc = Accumulator::<T>::new();
    let mut log = opts.record_terms.then(Vec::new);
    let mut prev_mag: Option<T> = None;
    let mut tail = 0.0;
    for n in 0..count {
        let t = term_gen(n)?;
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(Error::Overflow(format!("series term {n} is not finite")));
        }
        let mag = acc.add(&t);
        if let Some(l) = log.as_mut() {
            l.push(mag_f64(&mag));
        }
        tail = tail_estimate(&opts.tail_policy, n, &mag, prev_mag.as_ref());
        prev_mag = Some(mag);
    }
    Ok((acc.value(), outcome(&acc, tail, log)))
}

/// Sum a finished list of terms.
pub fn sum_terms<T: Real>(terms: &[Complex<T>]) -> (Complex<T>, SeriesOutcome) {
    let mut acc = Accumulator::<T>::new();
    for t in terms {
        acc.add(t);
    }
    (acc.value(), outcome(&acc, 0.0, None))
}

fn tail_estimate<T: Real>(policy: &TailPolicy, n: usize, mag: &T, prev: Option<&T>) -> f64 {
    let m = mag_f64(mag);
    if m == 0.0 {
        return 0.0;
    }
    match *policy {
        TailPolicy::RatioTest => {
            let Some(p) = prev else {
                return f64::INFINITY;
            };
            let p = mag_f64(p);
            if p == 0.0 {
                return m;
            }
            let rho = m / p;
            if rho < 1.0 {
                m * rho / (1.0 - rho)
            } else {
                f64::INFINITY
            }
        }
        TailPolicy::AsymptoticRate { base, power } => {
            if !(base < 1.0) {
                return f64::INFINITY;
            }
            let l = (n.max(1)) as f64;
            let rho = base * ((l + 1.0) / l).powf(power);
            if rho < 1.0 {
                m * rho / (1.0 - rho)
            } else {
                f64::INFINITY
            }
        }
    }
}

fn outcome<T: Real>(acc: &Accumulator<T>, tail: f64, log: Option<Vec<f64>>) -> SeriesOutcome {
    let tail = if tail.is_nan() { f64::INFINITY } else { tail.max(0.0) };
    SeriesOutcome {
        value: to_c64(&acc.value()),
        n_terms: acc.count(),
        max_term_mag: mag_f64(&acc.max_mag()),
        condition_number: acc.condition(),
        tail_estimate: tail,
        terms_log: log,
    }
}

/// Leading-order magnitude `l^(2 Re mu - 1) (r0/r)^l` of the terms of the
/// generalized Whittaker addition series.
pub fn tail_rate_estimate(mu: Complex<f64>, r0: f64, r: f64, ell: usize) -> Result<f64> {
    if !(r0 >= 0.0 && r0 < r) {
        return Err(Error::GeometryViolation(format!(
            "tail estimate needs 0 <= r0 < r, got r0 = {r0}, r = {r}"
        )));
    }
    if ell == 0 {
        return Err(Error::IndexOutOfRange("tail estimate needs l >= 1".into()));
    }
    let l = ell as f64;
    let log_mag = (2.0 * mu.re - 1.0) * l.ln() + l * (r0 / r).ln();
    Ok(log_mag.exp())
}

/// Exact sum of rational terms.
pub fn exact_rational_sum<I>(terms: I) -> BigRational
where
    I: IntoIterator<Item = BigRational>,
{
    terms.into_iter().fold(BigRational::zero(), |acc, t| acc + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::BigFloat;
    use num_bigint::BigInt;

    #[test]
    fn geometric_series() {
        let (v, out) = sum_series(
            |n| Ok(Complex::new(0.5f64.powi(n as i32), 0.0)),
            &SeriesOptions::default(),
        )
        .unwrap();
        assert!((v.re - 2.0).abs() < 1e-15);
        assert_eq!(out.condition_number, 1.0);
    }

    #[test]
    fn alternating_series() {
        let (v, out) = sum_series(
            |n| Ok(Complex::new((-0.5f64).powi(n as i32), 0.0)),
            &SeriesOptions::default(),
        )
        .unwrap();
        assert!((v.re - 2.0 / 3.0).abs() < 1e-15);
        assert!((out.condition_number - 3.0).abs() < 1e-12);
    }

    #[test]
    fn no_convergence_carries_partial() {
        let opts = SeriesOptions {
            max_terms: 10,
            ..Default::default()
        };
        let err = sum_series(|_| Ok(Complex::new(1.0f64, 0.0)), &opts).unwrap_err();
        match err {
            Error::NoConvergence { partial } => {
                assert_eq!(partial.n_terms, 10);
                assert_eq!(partial.value.re, 10.0);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn extended_sum_matches_hardware_on_well_conditioned_terms() {
        let opts = SeriesOptions::extended(40);
        let (v, _) = sum_series::<BigFloat, _>(
            |n| {
                let d = BigFloat::from_i64(1) / BigFloat::from_i64(3).ldexp(n as i64);
                Ok(Complex::new(d, BigFloat::zero()))
            },
            &opts,
        )
        .unwrap();
        let expected = BigFloat::from_i64(2) / BigFloat::from_i64(3);
        assert!((v.re - expected).abs().to_f64() < 1e-40);
    }

    #[test]
    fn fixed_count_and_finite_sums() {
        let (v, out) = sum_fixed(|n| Ok(Complex::new(n as f64, 0.0)), 5, &SeriesOptions::default()).unwrap();
        assert_eq!(v.re, 10.0);
        assert_eq!(out.n_terms, 5);
        let (w, o) = sum_terms(&[Complex::new(1.0, 0.0), Complex::new(-0.5, 0.0)]);
        assert_eq!(w.re, 0.5);
        assert_eq!(o.condition_number, 3.0);
        assert_eq!(o.tail_estimate, 0.0);
    }

    #[test]
    fn tail_rate_ratio() {
        let mu = Complex::new(1.0, 0.0);
        let a = tail_rate_estimate(mu, 1.0, 2.0, 100).unwrap();
        let b = tail_rate_estimate(mu, 1.0, 2.0, 101).unwrap();
        assert!((b / a - 0.505).abs() < 1e-12);
        assert!(tail_rate_estimate(mu, 2.0, 2.0, 3).is_err());
    }

    #[test]
    fn rational_sum_is_exact() {
        let s = exact_rational_sum((1..=4).map(|k| BigRational::new(BigInt::from(1), BigInt::from(k))));
        assert_eq!(s, BigRational::new(BigInt::from(25), BigInt::from(12)));
    }
}
