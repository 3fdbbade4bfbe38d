//! `hostler eval`: single special-function values.

use hostler_core::bigfloat::{with_digits, BigFloat};
use hostler_core::error::Result as CoreResult;
use hostler_core::green::{hostler_green, partial_wave_green, CoulombParams, SphericalPoint};
use hostler_core::identities::VerifyOptions;
use hostler_core::scalar::{from_c64, to_c64};
use hostler_core::special::kummer::{hyp1f1, hyperu};
use hostler_core::special::pochhammer::poch;
use hostler_core::special::poly::{gegenbauer_c, laguerre, legendre_p, spherical_harmonic};
use hostler_core::special::whittaker::{
    bessel_modified, kummer_params, whittaker_m_deriv_gen, whittaker_m_gen, whittaker_w_deriv_gen, whittaker_w_gen,
    BesselKind, WhittakerOrder,
};
use num_complex::Complex;

use crate::format::Params;

pub const FUNCTIONS: &[&str] = &[
    "whittaker_m",
    "whittaker_w",
    "kummer_m",
    "kummer_u",
    "legendre",
    "gegenbauer",
    "laguerre",
    "spherical_harmonic",
    "bessel_i",
    "bessel_k",
    "hostler",
    "partial_wave",
    "pochhammer",
];

/// Raw command-line arguments of `eval`; only the ones a function reads matter.
#[derive(Debug, Clone, Default)]
pub struct Args {
    pub kappa: Option<Complex<f64>>,
    pub mu: Option<Complex<f64>>,
    pub r: Option<f64>,
    pub z: Option<Complex<f64>>,
    pub a: Option<Complex<f64>>,
    pub b: Option<Complex<f64>>,
    pub x: Option<f64>,
    pub l: Option<usize>,
    pub m: Option<i64>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub nu: Option<f64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub g: Option<f64>,
    pub k: Option<f64>,
    pub p: Option<[f64; 3]>,
    pub p0: Option<[f64; 3]>,
    pub deriv: bool,
    pub extended: bool,
    pub digits: u32,
    pub lmax: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub params: Params,
    pub value: Complex<f64>,
    pub n_terms: usize,
    pub condition_number: f64,
    pub precision: String,
}

/// Usage problems (missing or meaningless arguments) versus numerical failures.
#[derive(Debug)]
pub enum EvalError {
    Usage(String),
    Numeric(String),
}

fn need<T: Copy>(v: Option<T>, name: &str, f: &str) -> Result<T, EvalError> {
    v.ok_or_else(|| EvalError::Usage(format!("{f} needs --{name}")))
}

fn num(e: hostler_core::error::Error) -> EvalError {
    EvalError::Numeric(e.to_string())
}

fn c_text(z: Complex<f64>) -> String {
    crate::values::Value::Complex(z).text()
}

pub fn point(v: [f64; 3]) -> Result<SphericalPoint, EvalError> {
    SphericalPoint::new(v[0], v[1], v[2].rem_euclid(2.0 * std::f64::consts::PI))
        .map_err(|e| EvalError::Usage(e.to_string()))
}

/// Value and Kummer diagnostics, at hardware or extended precision.
fn kummer_based(
    f: &str,
    a: Complex<f64>,
    b: Complex<f64>,
    z: Complex<f64>,
    args: &Args,
    eval: impl Fn(&Complex<BigFloat>, &Complex<BigFloat>, &Complex<BigFloat>) -> CoreResult<Complex<BigFloat>>,
    eval_hw: impl Fn(&Complex<f64>, &Complex<f64>, &Complex<f64>) -> CoreResult<Complex<f64>>,
    diag_is_u: bool,
) -> Result<(Complex<f64>, usize, f64, String), EvalError> {
    let (ka, kb) = match f {
        "whittaker_m" | "whittaker_w" => kummer_params(&a, &b),
        _ => (a, b),
    };
    let diag = if diag_is_u {
        hyperu(&ka, &kb, &z.re).map(|d| (d.terms, d.condition))
    } else {
        hyp1f1(&ka, &kb, &z).map(|d| (d.terms, d.condition))
    }
    .map_err(num)?;
    if args.extended {
        let v = with_digits(args.digits, || {
            eval(&from_c64(a), &from_c64(b), &from_c64(z)).map(|v| to_c64(&v))
        })
        .map_err(num)?;
        Ok((v, diag.0, diag.1, format!("extended({})", args.digits)))
    } else {
        let v = eval_hw(&a, &b, &z).map_err(num)?;
        Ok((v, diag.0, diag.1, "hardware".into()))
    }
}

pub fn evaluate(f: &str, args: &Args) -> Result<Evaluation, EvalError> {
    let mut params = Vec::<(String, String)>::new();
    let mut put = |k: &str, v: String| params.push((k.to_string(), v));
    let one = |v: Complex<f64>| (v, 1usize, 1.0f64, "hardware".to_string());
    let (value, n_terms, cond, precision) = match f {
        "whittaker_m" | "whittaker_w" => {
            let kappa = need(args.kappa, "kappa", f)?;
            let mu = need(args.mu, "mu", f)?;
            put("kappa", c_text(kappa));
            put("mu", c_text(mu));
            if f == "whittaker_m" {
                WhittakerOrder::new(kappa, mu).check_m().map_err(|e| EvalError::Usage(e.to_string()))?;
                let z = match (args.z, args.r) {
                    (Some(z), _) => z,
                    (None, Some(r)) => Complex::new(r, 0.0),
                    _ => return Err(EvalError::Usage("whittaker_m needs --r or --z".into())),
                };
                put("z", c_text(z));
                put("deriv", args.deriv.to_string());
                let d = args.deriv;
                kummer_based(
                    f,
                    kappa,
                    mu,
                    z,
                    args,
                    |k, m, z| if d { whittaker_m_deriv_gen(k, m, z) } else { whittaker_m_gen(k, m, z) },
                    |k, m, z| if d { whittaker_m_deriv_gen(k, m, z) } else { whittaker_m_gen(k, m, z) },
                    false,
                )?
            } else {
                let r = need(args.r, "r", f)?;
                if !(r > 0.0) {
                    return Err(EvalError::Usage(format!("whittaker_w needs r > 0, got {r}")));
                }
                put("r", format!("{r}"));
                put("deriv", args.deriv.to_string());
                let d = args.deriv;
                kummer_based(
                    f,
                    kappa,
                    mu,
                    Complex::new(r, 0.0),
                    args,
                    |k, m, z| if d { whittaker_w_deriv_gen(k, m, &z.re) } else { whittaker_w_gen(k, m, &z.re) },
                    |k, m, z| if d { whittaker_w_deriv_gen(k, m, &z.re) } else { whittaker_w_gen(k, m, &z.re) },
                    true,
                )?
            }
        }
        "kummer_m" | "kummer_u" => {
            let a = need(args.a, "a", f)?;
            let b = need(args.b, "b", f)?;
            put("a", c_text(a));
            put("b", c_text(b));
            if f == "kummer_m" {
                let z = need(args.z, "z", f)?;
                put("z", c_text(z));
                kummer_based(f, a, b, z, args, |a, b, z| hyp1f1(a, b, z).map(|v| v.value), |a, b, z| {
                    hyp1f1(a, b, z).map(|v| v.value)
                }, false)?
            } else {
                let z = args.z.map(|z| z.re).or(args.x).or(args.r);
                let z = need(z, "z", f)?;
                if !(z > 0.0) {
                    return Err(EvalError::Usage(format!("kummer_u needs a real z > 0, got {z}")));
                }
                put("z", format!("{z}"));
                kummer_based(
                    f,
                    a,
                    b,
                    Complex::new(z, 0.0),
                    args,
                    |a, b, z| hyperu(a, b, &z.re).map(|v| v.value),
                    |a, b, z| hyperu(a, b, &z.re).map(|v| v.value),
                    true,
                )?
            }
        }
        "legendre" => {
            let l = need(args.l, "l", f)?;
            let m = args.m.unwrap_or(0);
            let x = need(args.x, "x", f)?;
            put("l", l.to_string());
            put("m", m.to_string());
            put("x", format!("{x}"));
            one(Complex::new(legendre_p(l, m, x).map_err(num)?, 0.0))
        }
        "gegenbauer" => {
            let n = need(args.n.or(args.l), "n", f)?;
            let mu = need(args.mu, "mu", f)?.re;
            let x = need(args.x, "x", f)?;
            put("n", n.to_string());
            put("mu", format!("{mu}"));
            put("x", format!("{x}"));
            one(Complex::new(gegenbauer_c(n, mu, x).map_err(num)?, 0.0))
        }
        "laguerre" => {
            let n = need(args.n, "n", f)?;
            let alpha = args.alpha.unwrap_or(0.0);
            let x = need(args.x, "x", f)?;
            put("n", n.to_string());
            put("alpha", format!("{alpha}"));
            put("x", format!("{x}"));
            one(Complex::new(laguerre(n, alpha, x).map_err(num)?, 0.0))
        }
        "spherical_harmonic" => {
            let l = need(args.l, "l", f)?;
            let m = args.m.unwrap_or(0);
            let theta = need(args.theta, "theta", f)?;
            let phi = need(args.phi, "phi", f)?;
            put("l", l.to_string());
            put("m", m.to_string());
            put("theta", format!("{theta}"));
            put("phi", format!("{phi}"));
            one(spherical_harmonic(l, m, theta, phi).map_err(num)?)
        }
        "bessel_i" | "bessel_k" => {
            let nu = need(args.nu, "nu", f)?;
            let z = args.z.map(|z| z.re).or(args.x).or(args.r);
            let z = need(z, "z", f)?;
            put("nu", format!("{nu}"));
            put("z", format!("{z}"));
            let kind = if f == "bessel_i" { BesselKind::I } else { BesselKind::K };
            one(Complex::new(bessel_modified(nu, z, kind).map_err(num)?, 0.0))
        }
        "hostler" | "partial_wave" => {
            let g = need(args.g, "g", f)?;
            let k = need(args.k, "k", f)?;
            let p = point(need(args.p, "p", f)?)?;
            let p0 = point(need(args.p0, "p0", f)?)?;
            put("g", format!("{g}"));
            put("k", format!("{k}"));
            put("p", format!("{},{},{}", p.r, p.theta, p.phi));
            put("p0", format!("{},{},{}", p0.r, p0.theta, p0.phi));
            let params = CoulombParams::new(g, k).map_err(|e| EvalError::Usage(e.to_string()))?;
            if f == "hostler" {
                one(Complex::new(hostler_green(params, p, p0).map_err(num)?, 0.0))
            } else {
                let opts = VerifyOptions {
                    lmax: args.lmax,
                    ..Default::default()
                };
                let w = partial_wave_green(params, p, p0, &opts).map_err(num)?;
                (Complex::new(w.value, 0.0), w.diag.n_terms, w.diag.condition_number, "hardware".into())
            }
        }
        "pochhammer" => {
            let a = need(args.a, "a", f)?;
            let n = need(args.n, "n", f)?;
            put("a", c_text(a));
            put("n", n.to_string());
            one(poch(&a, n))
        }
        other => {
            return Err(EvalError::Usage(format!(
                "unknown function {other:?}; known: {}",
                FUNCTIONS.join(", ")
            )))
        }
    };
    Ok(Evaluation {
        params: Params(params),
        value,
        n_terms,
        condition_number: cond,
        precision,
    })
}
