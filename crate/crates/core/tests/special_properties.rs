use hostler_core::bigfloat::{with_digits, BigFloat};
use hostler_core::exact::parse_rational;
use hostler_core::identities::{
    geometry_from, stress_terms, verify_laguerre_addition_exact, verify_lemma_binomial, verify_spherical_addition,
    verify_whittaker_addition, VerifyOptions,
};
use hostler_core::special::gamma::gamma;
use hostler_core::special::kummer::{kummer_m, kummer_u};
use hostler_core::special::pochhammer::poch;
use hostler_core::scalar::from_c64;
use hostler_core::special::whittaker::{whittaker_m, whittaker_w, whittaker_w_gen, WhittakerOrder};
use hostler_core::summation::tail_rate_estimate;
use num_complex::Complex;
use num_rational::BigRational;
use proptest::prelude::*;

type C = Complex<f64>;

fn c(re: f64) -> C {
    Complex::new(re, 0.0)
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kummer_transformation(a in -3.0f64..3.0, b in 0.3f64..4.0, z in 0.0f64..8.0) {
        let lhs = kummer_m(c(a), c(b), c(z)).unwrap();
        let rhs = kummer_m(c(b - a), c(b), c(-z)).unwrap() * z.exp();
        prop_assert!(rel(lhs, rhs) <= 1e-11 || (lhs - rhs).norm() <= 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn u_contiguous_relation(a in 0.2f64..3.0, b in 1.2f64..3.5, z in 0.5f64..10.0) {
        // U(a,b,z) - a U(a+1,b,z) - U(a,b-1,z) = 0
        let u = kummer_u(c(a), c(b), z).unwrap();
        let up = kummer_u(c(a + 1.0), c(b), z).unwrap();
        let down = kummer_u(c(a), c(b - 1.0), z).unwrap();
        let scale = u.norm() + a * up.norm() + down.norm();
        prop_assert!((u - up * a - down).norm() <= 1e-10 * scale);
    }

    #[test]
    fn whittaker_wronskian(kappa in -2.0f64..0.9, mu in 0.0f64..2.5, r in 0.3f64..12.0) {
        // M W' - M' W = -Gamma(1 + 2 mu) / Gamma(1/2 + mu - kappa)
        let o = WhittakerOrder::real(kappa, mu);
        let m = whittaker_m(o, r, false).unwrap();
        let dm = whittaker_m(o, r, true).unwrap();
        let w = whittaker_w(o, r, false).unwrap();
        let dw = whittaker_w(o, r, true).unwrap();
        let want = -gamma(&c(1.0 + 2.0 * mu)).unwrap() / gamma(&c(0.5 + mu - kappa)).unwrap();
        let got = m * dw - dm * w;
        let scale = (m * dw).norm().max((dm * w).norm());
        prop_assert!((got - want).norm() <= 1e-9 * scale.max(want.norm()), "{got} vs {want}");
    }

    #[test]
    fn pochhammer_splits(re in -4.0f64..4.0, im in -2.0f64..2.0, m in 0usize..12, n in 0usize..12) {
        let a = Complex::new(re, im);
        let whole = poch(&a, m + n);
        let split = poch(&a, m) * poch(&(a + m as f64), n);
        prop_assert!((whole - split).norm() <= 1e-12 * whole.norm().max(1e-300) + 1e-300);
    }

    #[test]
    fn addition_is_even_in_gamma(
        kappa in -1.5f64..0.8,
        r0 in 0.2f64..1.5,
        ratio in 1.5f64..5.0,
        gamma in 0.0f64..3.14,
    ) {
        let opts = VerifyOptions::default();
        let r = r0 * ratio;
        let plus = verify_whittaker_addition(c(kappa), &geometry_from(r, r0, gamma), &opts).unwrap();
        let minus = verify_whittaker_addition(c(kappa), &geometry_from(r, r0, -gamma), &opts).unwrap();
        prop_assert_eq!(plus.lhs, minus.lhs);
        prop_assert_eq!(plus.rhs, minus.rhs);
        prop_assert!(plus.rel_err <= 1e-9);
    }

    #[test]
    fn spherical_addition_holds(l in 0usize..20, t in 0.0f64..3.14, p in 0.0f64..6.28, t0 in 0.0f64..3.14, p0 in 0.0f64..6.28) {
        let rep = verify_spherical_addition(l, t, p, t0, p0, &VerifyOptions::default()).unwrap();
        prop_assert!(rep.abs_err <= 1e-11 * (2 * l + 1) as f64, "{:e}", rep.abs_err);
    }

    #[test]
    fn laguerre_addition_is_exact(
        n in 1usize..10,
        r0 in 0i64..20,
        extra in 1i64..20,
        den in 1i64..9,
        cn in -16i64..=16,
    ) {
        let r0q = q(&format!("{r0}/{den}"));
        let rq = q(&format!("{}/{den}", r0 + extra));
        let cg = q(&format!("{cn}/16"));
        let rep = verify_laguerre_addition_exact(n, &rq, &r0q, &cg).unwrap();
        prop_assert!(rep.exact, "residual {}", rep.residual);
    }

    #[test]
    fn binomial_lemma_is_exact(n in 0usize..30, num in 1i64..40, den in 1i64..12) {
        let rep = verify_lemma_binomial(n, &q(&format!("{num}/{den}"))).unwrap();
        prop_assert!(rep.exact);
    }
}

/// Leading constant `(r+r0)^{mu+1/2} / (Gamma(mu-kappa+1/2) r^{2 mu} W_{kappa,mu}(r+r0))`
/// of the large-order law, at 40 digits.
fn tail_constant(kappa: f64, mu: f64, r0: f64, r: f64) -> f64 {
    with_digits(40, || {
        let big = |x: f64| BigFloat::from_f64(x);
        let w = whittaker_w_gen(&from_c64::<BigFloat>(c(kappa)), &from_c64(c(mu)), &big(r + r0)).unwrap();
        let g = gamma(&from_c64::<BigFloat>(c(mu - kappa + 0.5))).unwrap();
        let num = (big(r + r0).ln() * big(mu + 0.5)).exp();
        let den = (big(r).ln() * big(2.0 * mu)).exp();
        (num / (g.re * den * w.re)).to_f64()
    })
}

#[test]
fn tail_rate_is_within_a_factor_of_ten_of_the_large_order_terms() {
    // mu = 20, kappa = 1, r0 = 1, r = 2
    let (terms, _) = stress_terms(1.0, 20.0, 1.0, 2.0, 400, 40).unwrap();
    let scale = tail_constant(1.0, 20.0, 1.0, 2.0);
    let mut off = Vec::new();
    for l in 50..400 {
        let est = scale * tail_rate_estimate(c(20.0), 1.0, 2.0, l).unwrap();
        let ratio = terms[l] / est;
        if !(0.1..=10.0).contains(&ratio) {
            off.push((l, ratio));
        }
    }
    assert!(off.is_empty(), "{} of 350 orders outside the envelope, first {:?}", off.len(), off.first());
}

#[test]
fn tail_rate_rejects_bad_geometry() {
    assert!(tail_rate_estimate(c(1.0), 2.0, 1.0, 5).is_err());
    assert!(tail_rate_estimate(c(1.0), 0.5, 1.0, 0).is_err());
}
