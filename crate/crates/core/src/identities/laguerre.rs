//! Finite Laguerre addition formulas that come out of the residue of the
//! Coulomb Green function at a bound-state energy.
//!
//! Everything is a polynomial identity, so the sides are written once over
//! [`PolyField`] and evaluated both in floating point and exactly (rationals,
//! or `Q(sqrt d)` when the distance `R` is irrational).

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{evaluate, ExactReport, Geom, GeometryConfig, Identity, IdentityReport, Sides, VerifyOptions};
use crate::error::{Error, Result};
use crate::exact::QuadSurd;
use crate::scalar::{from_c64, Real};
use crate::special::poly::{laguerre_gen, legendre_table, PolyField};
use crate::summation::sum_terms;

/// Which of the two symmetric specializations to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetricVariant {
    /// Collinear points: the divided difference over `u - v`.
    Interior,
    /// Antipodal points: the alternating sum equal to `L_n^1(u + v)`.
    Pi,
}

impl SymmetricVariant {
    fn id(self) -> &'static str {
        match self {
            SymmetricVariant::Interior => "laguerre_symmetric_interior",
            SymmetricVariant::Pi => "laguerre_symmetric_pi",
        }
    }
}

fn lag<F: PolyField>(n: usize, alpha: i64, x: &F) -> F {
    laguerre_gen(n, &F::from_int(alpha), x)
}

/// `(2l+1) (n-l-1)! / (n+l)!`.
fn weight<F: PolyField>(n: usize, l: usize) -> F {
    let mut den = F::one();
    for j in (n - l)..=(n + l) {
        den = den * F::from_int(j as i64);
    }
    F::from_int(2 * l as i64 + 1) / den
}

/// Terms `weight (r r0)^l L_{n-l-1}^{2l+1}(r) L_{n-l-1}^{2l+1}(r0) p_l` for `l < n`.
fn addition_terms<F: PolyField>(n: usize, r: &F, r0: &F, p: &[F]) -> Vec<F> {
    let rr0 = r.clone() * r0.clone();
    let mut pow = F::one();
    let mut out = Vec::with_capacity(n);
    for l in 0..n {
        let a = 2 * l as i64 + 1;
        let m = n - l - 1;
        out.push(weight::<F>(n, l) * pow.clone() * lag(m, a, r) * lag(m, a, r0) * p[l].clone());
        pow = pow * rr0.clone();
    }
    out
}

/// `(x L_{n-1}^1(x/2) L_n(y/2) - y L_{n-1}^1(y/2) L_n(x/2)) / 2R`.
fn addition_rhs<F: PolyField>(n: usize, x: &F, y: &F, big_r: &F) -> F {
    let two = F::from_int(2);
    let (xh, yh) = (x.clone() / two.clone(), y.clone() / two.clone());
    let num = x.clone() * lag(n - 1, 1, &xh) * lag(n, 0, &yh) - y.clone() * lag(n - 1, 1, &yh) * lag(n, 0, &xh);
    num / (two * big_r.clone())
}

fn symmetric_signs<F: PolyField>(n: usize, variant: SymmetricVariant) -> Vec<F> {
    (0..=n)
        .map(|l| match variant {
            SymmetricVariant::Pi if l % 2 == 1 => -F::one(),
            _ => F::one(),
        })
        .collect()
}

/// `(u L_n^1(u) L_{n+1}(v) - v L_n^1(v) L_{n+1}(u)) / (u - v)`, or its limit
/// `(L_n^1(v) - v L_{n-1}^2(v)) L_{n+1}(v) + v L_n^1(v)^2` at `u = v`.
fn interior_rhs<F: PolyField>(n: usize, u: &F, v: &F, confluent: bool) -> Result<F> {
    let d = u.clone() - v.clone();
    if d.is_zero() {
        if !confluent {
            return Err(Error::ConfluentPoint);
        }
        let l1 = lag(n, 1, v);
        let l2 = if n == 0 { F::zero() } else { lag(n - 1, 2, v) };
        return Ok((l1.clone() - v.clone() * l2) * lag(n + 1, 0, v) + v.clone() * l1.clone() * l1);
    }
    let num = u.clone() * lag(n, 1, u) * lag(n + 1, 0, v) - v.clone() * lag(n, 1, v) * lag(n + 1, 0, u);
    Ok(num / d)
}

fn symmetric_rhs<F: PolyField>(n: usize, u: &F, v: &F, variant: SymmetricVariant, confluent: bool) -> Result<F> {
    match variant {
        SymmetricVariant::Interior => interior_rhs(n, u, v, confluent),
        SymmetricVariant::Pi => Ok(lag(n, 1, &(u.clone() + v.clone()))),
    }
}

/// The finite Laguerre addition formula with `0 <= r0 < r` and angle `gamma`.
pub struct LaguerreAddition {
    pub n: usize,
    pub geo: GeometryConfig,
}

impl Identity for LaguerreAddition {
    const ID: &'static str = "laguerre_addition";

    fn sides<T: Real>(&self, _opts: &VerifyOptions) -> Result<Sides<T>> {
        let g = Geom::<T>::new(self.geo.r, self.geo.r0, self.geo.gamma);
        let p = legendre_table(self.n - 1, &g.cos_g);
        let terms: Vec<Complex<T>> = addition_terms(self.n, &g.r, &g.r0, &p)
            .into_iter()
            .map(|t| Complex::new(t, T::zero()))
            .collect();
        let (lhs, lhs_diag) = sum_terms(&terms);
        let rhs = addition_rhs(self.n, &g.x, &g.y, &g.big_r);
        Ok(Sides {
            lhs,
            rhs: Complex::new(rhs, T::zero()),
            lhs_diag,
            rhs_diag: None,
        })
    }
}

pub fn verify_laguerre_addition(n: usize, geo: &GeometryConfig, opts: &VerifyOptions) -> Result<IdentityReport> {
    if n == 0 {
        return Err(Error::IndexOutOfRange("the Laguerre addition formula needs n >= 1".into()));
    }
    geo.check_ordered()?;
    evaluate(&LaguerreAddition { n, geo: *geo }, opts)
}

/// Exact check at rational `r`, `r0` and `cos gamma`. `R` is carried as a
/// quadratic surd, so the right side must come out rational on its own.
pub fn verify_laguerre_addition_exact(
    n: usize,
    r: &BigRational,
    r0: &BigRational,
    cos_gamma: &BigRational,
) -> Result<ExactReport> {
    if n == 0 {
        return Err(Error::IndexOutOfRange("the Laguerre addition formula needs n >= 1".into()));
    }
    if r0.is_negative() || r0 >= r {
        return Err(Error::GeometryViolation(format!("need 0 <= r0 < r, got r0 = {r0}, r = {r}")));
    }
    if cos_gamma.abs() > BigRational::from_integer(1.into()) {
        return Err(Error::invalid(format!("cos gamma = {cos_gamma} lies outside [-1, 1]")));
    }
    let p = legendre_table(n - 1, cos_gamma);
    let lhs = addition_terms(n, r, r0, &p).into_iter().fold(BigRational::zero(), |a, t| a + t);

    let two = BigRational::from_integer(2.into());
    let r2 = r * r + r0 * r0 - &two * r * r0 * cos_gamma;
    let big_r = QuadSurd::sqrt_of(&r2);
    let s = QuadSurd::rational(r + r0);
    let x = s.clone() + big_r.clone();
    let y = s - big_r.clone();
    let rhs = addition_rhs(n, &x, &y, &big_r);
    Ok(surd_report(LaguerreAddition::ID, lhs, rhs))
}

fn surd_report(id: &str, lhs: BigRational, rhs: QuadSurd) -> ExactReport {
    let rational = rhs.is_rational();
    let mut rep = ExactReport::new(id, lhs, rhs.a);
    rep.exact &= rational;
    rep
}

/// The `gamma = 0` or `gamma = pi` specialization at complex `u`, `v`.
pub struct LaguerreSymmetric {
    pub n: usize,
    pub u: Complex<f64>,
    pub v: Complex<f64>,
    pub variant: SymmetricVariant,
}

impl LaguerreSymmetric {
    fn sides_in<T: Real>(&self, confluent: bool) -> Result<Sides<T>> {
        let (u, v) = (from_c64::<T>(self.u), from_c64::<T>(self.v));
        let signs = symmetric_signs::<Complex<T>>(self.n, self.variant);
        let terms = addition_terms(self.n + 1, &u, &v, &signs);
        let (lhs, lhs_diag) = sum_terms(&terms);
        let rhs = symmetric_rhs(self.n, &u, &v, self.variant, confluent)?;
        Ok(Sides {
            lhs,
            rhs,
            lhs_diag,
            rhs_diag: None,
        })
    }
}

/// Both variants share one `Identity` impl; the report carries the variant id.
impl Identity for LaguerreSymmetric {
    const ID: &'static str = "laguerre_symmetric";

    fn sides<T: Real>(&self, opts: &VerifyOptions) -> Result<Sides<T>> {
        self.sides_in(opts.confluent_limit)
    }
}

pub fn verify_laguerre_symmetric(
    n: usize,
    u: Complex<f64>,
    v: Complex<f64>,
    variant: SymmetricVariant,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    if variant == SymmetricVariant::Interior && u == v && !opts.confluent_limit {
        return Err(Error::ConfluentPoint);
    }
    let mut rep = evaluate(&LaguerreSymmetric { n, u, v, variant }, opts)?;
    rep.identity = variant.id().to_string();
    Ok(rep)
}

pub fn verify_laguerre_symmetric_exact(
    n: usize,
    u: &BigRational,
    v: &BigRational,
    variant: SymmetricVariant,
    confluent_limit: bool,
) -> Result<ExactReport> {
    let signs = symmetric_signs::<BigRational>(n, variant);
    let lhs = addition_terms(n + 1, u, v, &signs).into_iter().fold(BigRational::zero(), |a, t| a + t);
    let rhs = symmetric_rhs(n, u, v, variant, confluent_limit)?;
    Ok(ExactReport::new(variant.id(), lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational_from_f64;
    use crate::identities::geometry_from;
    use std::f64::consts::PI;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn antipodal_case_is_shifted_laguerre() {
        let rep = verify_laguerre_addition(5, &geometry_from(2.5, 0.75, PI), &VerifyOptions::default()).unwrap();
        let want = crate::special::poly::laguerre(4, 1.0, 3.25).unwrap();
        assert!((rep.rhs.re - want).abs() < 1e-12 * want.abs().max(1.0));
        assert!(rep.rel_err < 1e-12, "{rep:?}");
    }

    #[test]
    fn exact_addition_with_irrational_distance() {
        let c = rational_from_f64(0.9f64.cos());
        let rep = verify_laguerre_addition_exact(6, &rational_from_f64(3.2), &rational_from_f64(1.1), &c).unwrap();
        assert!(rep.exact, "{rep:?}");
        let rep = verify_laguerre_addition_exact(1, &q(3, 1), &q(1, 1), &q(1, 3)).unwrap();
        assert!(rep.exact && rep.lhs == q(1, 1));
    }

    #[test]
    fn symmetric_forms() {
        let rep = verify_laguerre_symmetric_exact(2, &q(1, 1), &q(2, 1), SymmetricVariant::Interior, false).unwrap();
        assert!(rep.exact, "{rep:?}");
        let zero = verify_laguerre_symmetric_exact(4, &q(0, 1), &q(0, 1), SymmetricVariant::Pi, false).unwrap();
        assert!(zero.exact && zero.rhs == q(5, 1));
        let c = verify_laguerre_symmetric(
            3,
            Complex::new(1.0, 2.0),
            Complex::new(-0.5, 0.0),
            SymmetricVariant::Pi,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert!(c.rel_err < 1e-12, "{c:?}");
    }

    #[test]
    fn confluent_point_needs_opt_in() {
        let z = Complex::new(1.5, 0.0);
        let e = verify_laguerre_symmetric(3, z, z, SymmetricVariant::Interior, &VerifyOptions::default());
        assert!(matches!(e, Err(Error::ConfluentPoint)));
        let o = VerifyOptions {
            confluent_limit: true,
            ..Default::default()
        };
        let rep = verify_laguerre_symmetric(3, z, z, SymmetricVariant::Interior, &o).unwrap();
        assert!(rep.rel_err < 1e-12, "{rep:?}");
        for n in 0..6 {
            let rep = verify_laguerre_symmetric_exact(n, &q(3, 2), &q(3, 2), SymmetricVariant::Interior, true).unwrap();
            assert!(rep.exact, "n = {n}: {rep:?}");
        }
    }
}
