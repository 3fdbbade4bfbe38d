//! Identity sweeps: the verifier table, grid expansion and the row type
//! written to tables, JSON and CSV.

use std::f64::consts::PI;

use hostler_core::exact::parse_rational;
use hostler_core::green::{
    hostler_green, laguerre_moment_integral, partial_wave_green, radial_distribution_integral, CoulombParams,
    SphericalPoint,
};
use hostler_core::identities::{self as id, geometry_from, ExactReport, IdentityReport, SymmetricVariant, VerifyOptions};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{CNum, Num, Params};
use crate::values::{parse_list, Kind, Value};

pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    /// Default value list, in the syntax of `--param name=...`.
    pub default: &'static str,
}

const fn p(name: &'static str, kind: Kind, default: &'static str) -> ParamSpec {
    ParamSpec { name, kind, default }
}

pub struct IdentitySpec {
    pub id: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub threshold: f64,
}

use Kind::{Complex as Cx, Int, Rational, Real};

/// Every verifier reachable from the command line. Defaults reproduce the
/// acceptance grids where one exists.
pub const IDENTITIES: &[IdentitySpec] = &[
    IdentitySpec {
        id: "whittaker_addition",
        summary: "partial-wave sum of M W products against the closed-form bracket",
        params: &[
            p("kappa", Cx, "-0.7,0.3+0.4i,2.5"),
            p("r0", Real, "0.5,1"),
            p("r", Real, "2,5"),
            p("gamma", Real, "0,pi/3,pi/2,2pi/3,pi"),
        ],
        threshold: 1e-9,
    },
    IdentitySpec {
        id: "kappa_integer_limit",
        summary: "the kappa -> 1 limit of the addition theorem",
        params: &[p("n", Int, "1"), p("r", Real, "3"), p("r0", Real, "1"), p("gamma", Real, "pi/2")],
        threshold: 1e-6,
    },
    IdentitySpec {
        id: "gamma_zero",
        summary: "collinear points, gamma = 0",
        params: &[p("kappa", Cx, "-0.7"), p("r0", Real, "2"), p("r", Real, "5")],
        threshold: 1e-9,
    },
    IdentitySpec {
        id: "gamma_pi",
        summary: "antipodal points, gamma = pi",
        params: &[p("kappa", Cx, "0.3"), p("r0", Real, "1"), p("r", Real, "4")],
        threshold: 1e-9,
    },
    IdentitySpec {
        id: "m_exp_sum",
        summary: "alternating sum of M_{kappa,l+1/2} equal to exp(-z/2)",
        params: &[p("kappa", Cx, "1.7"), p("z", Cx, "2+1i")],
        threshold: 1e-9,
    },
    IdentitySpec {
        id: "graf_2d",
        summary: "Graf's addition theorem for K_0",
        params: &[p("k", Real, "1"), p("r0", Real, "1"), p("r", Real, "3"), p("phi", Real, "2")],
        threshold: 1e-9,
    },
    IdentitySpec {
        id: "gegenbauer_addition",
        summary: "Gegenbauer's addition theorem for K_nu(R)/R^nu, 2 nu integer",
        params: &[p("nu", Real, "1"), p("r0", Real, "1"), p("r", Real, "4"), p("gamma", Real, "1.2")],
        threshold: 1e-8,
    },
    IdentitySpec {
        id: "spherical_addition",
        summary: "spherical harmonic addition theorem",
        params: &[
            p("l", Int, "7"),
            p("theta", Real, "0.4"),
            p("phi", Real, "1.3"),
            p("theta0", Real, "2.1"),
            p("phi0", Real, "-0.6"),
        ],
        threshold: 1e-12,
    },
    IdentitySpec {
        id: "laguerre_addition",
        summary: "finite Laguerre addition formula in floating point",
        params: &[p("n", Int, "1..12"), p("r", Real, "3.2"), p("r0", Real, "1.1"), p("gamma", Real, "0.9")],
        threshold: 1e-11,
    },
    IdentitySpec {
        id: "laguerre_addition_exact",
        summary: "finite Laguerre addition formula in exact arithmetic",
        params: &[
            p("n", Int, "1..12"),
            p("r", Rational, "16/5"),
            p("r0", Rational, "11/10"),
            p("cos_gamma", Rational, "1/8,19/32,-2/7"),
        ],
        threshold: 0.0,
    },
    IdentitySpec {
        id: "laguerre_symmetric_interior",
        summary: "collinear Laguerre divided difference at complex u, v",
        params: &[p("n", Int, "0..12"), p("u", Cx, "1+2i,0.3-1.1i"), p("v", Cx, "-0.5,2.2+0.7i")],
        threshold: 1e-11,
    },
    IdentitySpec {
        id: "laguerre_symmetric_pi",
        summary: "antipodal Laguerre sum equal to L_n^1(u+v) at complex u, v",
        params: &[p("n", Int, "0..12"), p("u", Cx, "1+2i,0.3-1.1i"), p("v", Cx, "-0.5,2.2+0.7i")],
        threshold: 1e-11,
    },
    IdentitySpec {
        id: "laguerre_symmetric_interior_exact",
        summary: "collinear Laguerre divided difference in exact arithmetic",
        params: &[p("n", Int, "0..12"), p("u", Rational, "1,-3/2"), p("v", Rational, "2,5/7")],
        threshold: 0.0,
    },
    IdentitySpec {
        id: "laguerre_symmetric_pi_exact",
        summary: "antipodal Laguerre sum in exact arithmetic",
        params: &[p("n", Int, "0..12"), p("u", Rational, "1,-3/2"), p("v", Rational, "2,5/7")],
        threshold: 0.0,
    },
    IdentitySpec {
        id: "w_downward_sum",
        summary: "binomial sum of W_{kappa,mu+l} equal to a shifted W",
        params: &[
            p("n", Int, "0..10"),
            p("mu", Cx, "0.3,1,2.5"),
            p("kappa", Cx, "-1.2,0.7+0.3i"),
            p("r", Real, "0.8,3,12"),
        ],
        threshold: 1e-10,
    },
    IdentitySpec {
        id: "pi_addition_general",
        summary: "antipodal addition theorem for general mu",
        params: &[p("kappa", Cx, "0.9"), p("mu", Cx, "2.2"), p("r0", Real, "1"), p("r", Real, "3")],
        threshold: 1e-8,
    },
    IdentitySpec {
        id: "m_gegenbauer_sum",
        summary: "Gegenbauer-weighted sum of M_{kappa,l+mu}",
        params: &[
            p("kappa", Cx, "0,1.1"),
            p("mu", Real, "0.8,2"),
            p("z", Cx, "1.5,1.5+0.5i"),
            p("gamma", Real, "0,pi/3,pi"),
        ],
        threshold: 1e-9,
    },
    IdentitySpec {
        id: "lemma_binomial",
        summary: "binomial lemma, exact",
        params: &[p("n", Int, "0..50"), p("nu", Rational, "1/3,1,7/3,11/2")],
        threshold: 0.0,
    },
    IdentitySpec {
        id: "delta_identity",
        summary: "alternating binomial sum equal to delta_{n,0}, exact",
        params: &[p("n", Int, "0..20"), p("mu", Rational, "3/10,1,5/2")],
        threshold: 0.0,
    },
    IdentitySpec {
        id: "green_cross_method",
        summary: "Hostler closed form against the partial-wave series",
        params: &[
            p("g", Real, "0.5,1.3,2.9"),
            p("k", Real, "0.4,0.9,1.7"),
            p("r", Real, "2"),
            p("theta", Real, "0.7"),
            p("phi", Real, "0.3"),
            p("r0", Real, "0.8"),
            p("theta0", Real, "1.9"),
            p("phi0", Real, "2.4"),
        ],
        threshold: 1e-7,
    },
    IdentitySpec {
        id: "radial_distribution_integral",
        summary: "integral of the radial distribution D_n equal to n^2",
        params: &[p("n", Int, "1..6"), p("g", Real, "1")],
        threshold: 1e-8,
    },
    IdentitySpec {
        id: "laguerre_moment_integral",
        summary: "Laguerre moment integral equal to 2 n^3",
        params: &[p("n", Int, "1..6")],
        threshold: 1e-8,
    },
];

pub fn find(id: &str) -> Result<&'static IdentitySpec, String> {
    IDENTITIES
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| format!("unknown identity {id:?}; `verify --list` shows the known ones"))
}

/// One fully resolved grid: an identity and a value list per parameter.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub identity: &'static str,
    pub axes: Vec<(&'static str, Vec<Value>)>,
    pub threshold: f64,
}

impl Sweep {
    /// Build from `name=v1,v2` overrides on top of the defaults.
    pub fn new(identity: &str, overrides: &[String], threshold: Option<f64>) -> Result<Sweep, String> {
        let spec = find(identity)?;
        let mut axes = Vec::new();
        for ps in spec.params {
            axes.push((ps.name, parse_list(ps.kind, ps.default)?));
        }
        for o in overrides {
            let (name, list) = o
                .split_once('=')
                .ok_or_else(|| format!("parameter {o:?} is not of the form name=v1,v2,..."))?;
            let name = name.trim();
            let ps = spec
                .params
                .iter()
                .find(|ps| ps.name == name)
                .ok_or_else(|| format!("{identity} has no parameter {name:?}"))?;
            let slot = axes.iter_mut().find(|(n, _)| *n == ps.name).expect("axis per parameter");
            slot.1 = parse_list(ps.kind, list).map_err(|e| format!("{name}: {e}"))?;
        }
        let threshold = threshold.unwrap_or(spec.threshold);
        if !(threshold >= 0.0) {
            return Err(format!("threshold must be non-negative, got {threshold}"));
        }
        Ok(Sweep {
            identity: spec.id,
            axes,
            threshold,
        })
    }

    /// Grid points in row-major order, last parameter fastest.
    pub fn points(&self) -> Vec<Vec<Value>> {
        let mut pts: Vec<Vec<Value>> = vec![Vec::new()];
        for (_, vals) in &self.axes {
            pts = pts
                .into_iter()
                .flat_map(|pre| {
                    vals.iter().map(move |v| {
                        let mut p = pre.clone();
                        p.push(v.clone());
                        p
                    })
                })
                .collect();
        }
        pts
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub index: usize,
    pub identity: String,
    pub params: Params,
    pub lhs: CNum,
    pub rhs: CNum,
    pub abs_err: Num,
    pub rel_err: Num,
    pub n_terms: usize,
    pub condition_number: Num,
    pub precision: String,
    /// Set for identities checked in exact arithmetic.
    pub exact: Option<bool>,
    pub threshold: Num,
    pub pass: bool,
    pub error: Option<String>,
}

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 16] = [
    "index",
    "identity",
    "params",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_err",
    "rel_err",
    "n_terms",
    "condition_number",
    "precision",
    "exact",
    "threshold",
    "pass",
    "error",
];

struct Outcome {
    lhs: Complex<f64>,
    rhs: Complex<f64>,
    abs_err: f64,
    rel_err: f64,
    n_terms: usize,
    condition: f64,
    precision: String,
    exact: Option<bool>,
}

impl From<IdentityReport> for Outcome {
    fn from(r: IdentityReport) -> Self {
        let cond = r.rhs_diag.as_ref().map_or(1.0, |d| d.condition_number).max(r.lhs_diag.condition_number);
        Outcome {
            lhs: r.lhs,
            rhs: r.rhs,
            abs_err: r.abs_err,
            rel_err: r.rel_err,
            n_terms: r.lhs_diag.n_terms,
            condition: cond,
            precision: r.precision.label(),
            exact: None,
        }
    }
}

impl From<ExactReport> for Outcome {
    fn from(r: ExactReport) -> Self {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        let (lhs, rhs) = (f(&r.lhs), f(&r.rhs));
        Outcome {
            lhs: Complex::new(lhs, 0.0),
            rhs: Complex::new(rhs, 0.0),
            abs_err: f(&r.residual).abs(),
            rel_err: if r.exact { 0.0 } else { f64::INFINITY },
            n_terms: 1,
            condition: 1.0,
            precision: "exact".into(),
            exact: Some(r.exact),
        }
    }
}

fn scalar(lhs: f64, rhs: f64) -> Outcome {
    let abs = (lhs - rhs).abs();
    let scale = lhs.abs().max(rhs.abs());
    Outcome {
        lhs: Complex::new(lhs, 0.0),
        rhs: Complex::new(rhs, 0.0),
        abs_err: abs,
        rel_err: if scale > 0.0 { abs / scale } else { 0.0 },
        n_terms: 1,
        condition: 1.0,
        precision: "hardware".into(),
        exact: None,
    }
}

fn q(v: &Value) -> Result<BigRational, String> {
    match v {
        Value::Rational(s) => parse_rational(s).ok_or_else(|| format!("not a rational: {s}")),
        other => Err(format!("expected a rational, got {}", other.text())),
    }
}

fn usize_of(v: &Value, name: &str) -> Result<usize, String> {
    let n = v.int();
    usize::try_from(n).map_err(|_| format!("{name} must be non-negative, got {n}"))
}

fn point(r: f64, theta: f64, phi: f64) -> Result<SphericalPoint, String> {
    SphericalPoint::new(r, theta, phi.rem_euclid(2.0 * PI)).map_err(|e| e.to_string())
}

fn run_point(identity: &str, v: &[Value], opts: &VerifyOptions) -> Result<Outcome, String> {
    let e = |x: hostler_core::error::Error| x.to_string();
    let out: Outcome = match identity {
        "whittaker_addition" => id::verify_whittaker_addition(
            v[0].complex(),
            &geometry_from(v[2].real(), v[1].real(), v[3].real()),
            opts,
        )
        .map_err(e)?
        .into(),
        "kappa_integer_limit" => id::verify_kappa_integer_limit(
            usize_of(&v[0], "n")?,
            &geometry_from(v[1].real(), v[2].real(), v[3].real()),
            opts,
        )
        .map_err(e)?
        .into(),
        "gamma_zero" => id::verify_gamma_zero(v[0].complex(), v[1].real(), v[2].real(), opts).map_err(e)?.into(),
        "gamma_pi" => id::verify_gamma_pi(v[0].complex(), v[1].real(), v[2].real(), opts).map_err(e)?.into(),
        "m_exp_sum" => id::verify_m_exp_sum(v[0].complex(), v[1].complex(), opts).map_err(e)?.into(),
        "graf_2d" => id::verify_graf_2d(v[0].real(), v[1].real(), v[2].real(), v[3].real(), opts).map_err(e)?.into(),
        "gegenbauer_addition" => {
            id::verify_gegenbauer_addition(v[0].real(), v[1].real(), v[2].real(), v[3].real(), opts).map_err(e)?.into()
        }
        "spherical_addition" => id::verify_spherical_addition(
            usize_of(&v[0], "l")?,
            v[1].real(),
            v[2].real(),
            v[3].real(),
            v[4].real(),
            opts,
        )
        .map_err(e)?
        .into(),
        "laguerre_addition" => id::verify_laguerre_addition(
            usize_of(&v[0], "n")?,
            &geometry_from(v[1].real(), v[2].real(), v[3].real()),
            opts,
        )
        .map_err(e)?
        .into(),
        "laguerre_addition_exact" => {
            id::verify_laguerre_addition_exact(usize_of(&v[0], "n")?, &q(&v[1])?, &q(&v[2])?, &q(&v[3])?)
                .map_err(e)?
                .into()
        }
        "laguerre_symmetric_interior" | "laguerre_symmetric_pi" => {
            let variant = if identity.ends_with("_pi") {
                SymmetricVariant::Pi
            } else {
                SymmetricVariant::Interior
            };
            id::verify_laguerre_symmetric(usize_of(&v[0], "n")?, v[1].complex(), v[2].complex(), variant, opts)
                .map_err(e)?
                .into()
        }
        "laguerre_symmetric_interior_exact" | "laguerre_symmetric_pi_exact" => {
            let variant = if identity.contains("_pi_") {
                SymmetricVariant::Pi
            } else {
                SymmetricVariant::Interior
            };
            let (u, w) = (q(&v[1])?, q(&v[2])?);
            let confluent = u == w && opts.confluent_limit;
            id::verify_laguerre_symmetric_exact(usize_of(&v[0], "n")?, &u, &w, variant, confluent)
                .map_err(e)?
                .into()
        }
        "w_downward_sum" => {
            id::verify_w_downward_sum(usize_of(&v[0], "n")?, v[2].complex(), v[1].complex(), v[3].real(), opts)
                .map_err(e)?
                .into()
        }
        "pi_addition_general" => {
            id::verify_pi_addition_general(v[0].complex(), v[1].complex(), v[2].real(), v[3].real(), opts)
                .map_err(e)?
                .into()
        }
        "m_gegenbauer_sum" => {
            id::verify_m_gegenbauer_sum(v[0].complex(), v[1].real(), v[2].complex(), v[3].real(), opts)
                .map_err(e)?
                .into()
        }
        "lemma_binomial" => id::verify_lemma_binomial(usize_of(&v[0], "n")?, &q(&v[1])?).map_err(e)?.into(),
        "delta_identity" => id::verify_delta_identity(usize_of(&v[0], "n")?, &q(&v[1])?).map_err(e)?.into(),
        "green_cross_method" => {
            let params = CoulombParams::new(v[0].real(), v[1].real()).map_err(e)?;
            let a = point(v[2].real(), v[3].real(), v[4].real())?;
            let b = point(v[5].real(), v[6].real(), v[7].real())?;
            let h = hostler_green(params, a, b).map_err(e)?;
            let w = partial_wave_green(params, a, b, opts).map_err(e)?;
            let mut o = scalar(h, w.value);
            o.n_terms = w.diag.n_terms;
            o.condition = w.diag.condition_number;
            o
        }
        "radial_distribution_integral" => {
            let n = usize_of(&v[0], "n")?;
            scalar(radial_distribution_integral(n, v[1].real()).map_err(e)?, (n * n) as f64)
        }
        "laguerre_moment_integral" => {
            let n = usize_of(&v[0], "n")?;
            scalar(laguerre_moment_integral(n).map_err(e)?, 2.0 * (n as f64).powi(3))
        }
        other => return Err(format!("no runner for {other}")),
    };
    Ok(out)
}

/// Evaluate every grid point in parallel; rows come back in grid order.
pub fn run(sweep: &Sweep, opts: &VerifyOptions, first_index: usize) -> Vec<Row> {
    let points = sweep.points();
    points
        .par_iter()
        .enumerate()
        .map(|(i, vals)| {
            let params = Params(
                sweep
                    .axes
                    .iter()
                    .zip(vals)
                    .map(|((name, _), v)| (name.to_string(), v.text()))
                    .collect(),
            );
            let base = Row {
                index: first_index + i,
                identity: sweep.identity.to_string(),
                params,
                lhs: Complex::new(f64::NAN, f64::NAN).into(),
                rhs: Complex::new(f64::NAN, f64::NAN).into(),
                abs_err: Num(f64::NAN),
                rel_err: Num(f64::NAN),
                n_terms: 0,
                condition_number: Num(f64::NAN),
                precision: String::new(),
                exact: None,
                threshold: Num(sweep.threshold),
                pass: false,
                error: None,
            };
            match run_point(sweep.identity, vals, opts) {
                Ok(o) => Row {
                    lhs: o.lhs.into(),
                    rhs: o.rhs.into(),
                    abs_err: Num(o.abs_err),
                    rel_err: Num(o.rel_err),
                    n_terms: o.n_terms,
                    condition_number: Num(o.condition),
                    precision: o.precision,
                    pass: match o.exact {
                        Some(x) => x,
                        None => o.rel_err <= sweep.threshold,
                    },
                    exact: o.exact,
                    ..base
                },
                Err(msg) => Row {
                    error: Some(msg),
                    ..base
                },
            }
        })
        .collect()
}

/// The grids behind `verify --preset acceptance`.
pub fn acceptance_sweeps() -> Vec<Sweep> {
    let mk = |id: &str, o: &[&str]| {
        let o: Vec<String> = o.iter().map(|s| s.to_string()).collect();
        Sweep::new(id, &o, None).expect("preset grids are valid")
    };
    vec![
        mk("whittaker_addition", &[]),
        mk("w_downward_sum", &[]),
        mk("delta_identity", &["mu=3/10,1,5/2,1/2"]),
        mk("laguerre_addition_exact", &["r=4", "r0=1", "cos_gamma=1/8,19/32"]),
        mk("laguerre_addition_exact", &["r=7/3", "r0=1/2", "cos_gamma=-2/7"]),
        mk("laguerre_addition_exact", &["r=5", "r0=0", "cos_gamma=1/3"]),
        mk("laguerre_symmetric_interior_exact", &["u=1,-3/2,11/4", "v=2,5/7,1/9"]),
        mk("laguerre_symmetric_pi_exact", &["u=1,-3/2,11/4", "v=2,5/7,1/9"]),
        mk("laguerre_symmetric_interior", &["u=1+2i,0.3-1.1i,4+0.5i", "v=-0.5,2.2+0.7i,1.5-2i"]),
        mk("laguerre_symmetric_pi", &["u=1+2i,0.3-1.1i,4+0.5i", "v=-0.5,2.2+0.7i,1.5-2i"]),
        mk("lemma_binomial", &[]),
        mk("green_cross_method", &[]),
        mk(
            "green_cross_method",
            &["r=3.5", "theta=1.2", "phi=5", "r0=1.1", "theta0=0.4", "phi0=1"],
        ),
        mk(
            "green_cross_method",
            &["r=1", "theta=2.5", "phi=0.1", "r0=1.6", "theta0=2", "phi0=3.3"],
        ),
        mk("radial_distribution_integral", &["g=0.7,1,2"]),
        mk("laguerre_moment_integral", &[]),
        mk("m_gegenbauer_sum", &[]),
        mk("m_gegenbauer_sum", &["mu=0.5", "kappa=0,1.1,1.7", "z=1.5,1.5+0.5i,2+1i", "gamma=pi"]),
        mk("m_exp_sum", &["kappa=0,1.1,1.7", "z=1.5,1.5+0.5i,2+1i"]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_identity_has_a_runner_and_valid_defaults() {
        for spec in IDENTITIES {
            let s = Sweep::new(spec.id, &[], None).unwrap();
            let first = &s.points()[0];
            let r = run_point(spec.id, first, &VerifyOptions::default());
            assert!(!matches!(&r, Err(m) if m.starts_with("no runner")), "{}", spec.id);
        }
    }

    #[test]
    fn grid_order_is_row_major() {
        let s = Sweep::new("gamma_pi", &["kappa=0.1,0.2".into(), "r=3,4".into()], None).unwrap();
        let pts: Vec<(f64, f64)> = s.points().iter().map(|p| (p[0].real(), p[2].real())).collect();
        assert_eq!(pts, vec![(0.1, 3.0), (0.1, 4.0), (0.2, 3.0), (0.2, 4.0)]);
    }

    #[test]
    fn malformed_overrides_are_rejected() {
        assert!(Sweep::new("gamma_pi", &["kappa".into()], None).is_err());
        assert!(Sweep::new("gamma_pi", &["nope=1".into()], None).is_err());
        assert!(Sweep::new("nope", &[], None).is_err());
        assert!(Sweep::new("gamma_pi", &[], Some(-1.0)).is_err());
    }
}
