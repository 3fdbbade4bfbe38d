//! Hydrogen bound states and the Coulomb Green function of
//! `-Laplacian - g/r + k^2`, in Hostler's closed form and as a partial-wave
//! series, together with the spectral projection kernels obtained from its
//! residues.

use std::f64::consts::PI;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::{hostler_bracket, VerifyOptions};
use crate::special::gamma::{gamma, ln_gamma};
use crate::special::poly::{laguerre, spherical_harmonic};
use crate::special::whittaker::{whittaker_m_reduced, whittaker_w_gen};
use crate::summation::{sum_fixed, sum_series, SeriesOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!("need r > 0, got {r}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::invalid(format!("need theta in [0, pi], got {theta}")));
        }
        if !(0.0..=2.0 * PI).contains(&phi) {
            return Err(Error::invalid(format!("need phi in [0, 2 pi], got {phi}")));
        }
        Ok(SphericalPoint { r, theta, phi })
    }

    pub fn unit(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn cartesian(&self) -> [f64; 3] {
        self.unit().map(|c| c * self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombParams {
    pub g: f64,
    pub k: f64,
}

impl CoulombParams {
    pub fn new(g: f64, k: f64) -> Result<Self> {
        if !(g > 0.0 && k > 0.0) {
            return Err(Error::invalid(format!("need g > 0 and k > 0, got g = {g}, k = {k}")));
        }
        Ok(CoulombParams { g, k })
    }

    /// `g / 2k`.
    pub fn kappa(&self) -> f64 {
        self.g / (2.0 * self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n: usize,
    pub l: usize,
    pub m: i64,
}

impl QuantumNumbers {
    pub fn new(n: usize, l: usize, m: i64) -> Result<Self> {
        if n == 0 || l >= n || m.unsigned_abs() as usize > l {
            return Err(Error::IndexOutOfRange(format!(
                "need |m| <= l <= n - 1 and n >= 1, got n = {n}, l = {l}, m = {m}"
            )));
        }
        Ok(QuantumNumbers { n, l, m })
    }
}

/// `E_n = -g^2 / 4n^2`.
pub fn bound_energy(n: usize, g: f64) -> f64 {
    -g * g / (4.0 * (n * n) as f64)
}

/// Multiplicity `n^2` of `E_n`.
pub fn degeneracy(n: usize) -> usize {
    n * n
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(&Complex::new(n as f64 + 1.0, 0.0)).map(|z| z.re).unwrap_or(f64::NAN)
}

/// Radial part of `psi_{n,l,m}` (everything except `Y_l^m`).
fn radial(n: usize, l: usize, g: f64, r: f64) -> f64 {
    let nf = n as f64;
    let rho = g * r / nf;
    let ln_norm = 1.5 * g.ln() - (l as f64 + 2.0) * nf.ln()
        + 0.5 * (ln_factorial(n - l - 1) - 2f64.ln() - ln_factorial(n + l));
    let lag = laguerre(n - l - 1, 2.0 * l as f64 + 1.0, rho).unwrap_or(f64::NAN);
    (ln_norm + l as f64 * (g * r).ln() - rho / 2.0).exp() * lag
}

/// Normalized hydrogen eigenfunction `psi_{n,l,m}(r, theta, phi)`.
pub fn hydrogen_eigenfunction(qn: QuantumNumbers, g: f64, p: SphericalPoint) -> Result<Complex<f64>> {
    let qn = QuantumNumbers::new(qn.n, qn.l, qn.m)?;
    let y = spherical_harmonic(qn.l, qn.m, p.theta, p.phi)?;
    Ok(y * radial(qn.n, qn.l, g, p.r))
}

/// `R = |p - p0|`, `x = r + r0 + R`, `y = r + r0 - R` and `cos gamma`, with
/// `y` taken from `x y = r r0 |u + u0|^2` so it stays accurate near `gamma = pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    pub big_r: f64,
    pub x: f64,
    pub y: f64,
    pub cos_gamma: f64,
}

pub fn pair_geometry(p: &SphericalPoint, p0: &SphericalPoint) -> PairGeometry {
    let (u, u0) = (p.unit(), p0.unit());
    let mut diff2 = 0.0;
    let mut sum2 = 0.0;
    let mut dot = 0.0;
    for i in 0..3 {
        diff2 += (u[i] - u0[i]).powi(2);
        sum2 += (u[i] + u0[i]).powi(2);
        dot += u[i] * u0[i];
    }
    let rr0 = p.r * p0.r;
    let big_r = ((p.r - p0.r).powi(2) + rr0 * diff2).sqrt();
    let x = p.r + p0.r + big_r;
    PairGeometry {
        big_r,
        x,
        y: rr0 * sum2 / x,
        cos_gamma: dot.clamp(-1.0, 1.0),
    }
}

fn check_guard(kappa: f64, guard: f64) -> Result<()> {
    let n = kappa.round();
    if n >= 1.0 && (kappa - n).abs() < guard {
        return Err(Error::NearPole {
            kappa: format!("{kappa}"),
            guard,
        });
    }
    Ok(())
}

fn hostler_unguarded(params: CoulombParams, p: &SphericalPoint, p0: &SphericalPoint) -> Result<f64> {
    let geo = pair_geometry(p, p0);
    if geo.big_r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let kappa = Complex::new(params.kappa(), 0.0);
    let bracket = hostler_bracket(&kappa, &(params.k * geo.y), &(params.k * geo.x))?;
    let g = gamma(&(Complex::new(1.0, 0.0) - kappa))?;
    Ok((g * bracket).re / (4.0 * PI * geo.big_r))
}

/// Hostler's closed form
/// `G = Gamma(1-kappa)/(4 pi R) [M'(ky) W(kx) - M(ky) W'(kx)]`, `kappa = g/2k`,
/// with the Whittaker functions of order `1/2`.
pub fn hostler_green(params: CoulombParams, p: SphericalPoint, p0: SphericalPoint) -> Result<f64> {
    check_guard(params.kappa(), VerifyOptions::default().kappa_guard)?;
    hostler_unguarded(params, &p, &p0)
}

/// Value of the partial-wave series and its summation diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialWave {
    pub value: f64,
    pub diag: SeriesOutcome,
}

/// `G = 1/(8 pi k r r0) sum_l Gamma(l+1-kappa)/(2l)! M_{kappa,l+1/2}(2k r<) W_{kappa,l+1/2}(2k r>) P_l(cos gamma)`.
pub fn partial_wave_green(
    params: CoulombParams,
    p: SphericalPoint,
    p0: SphericalPoint,
    opts: &VerifyOptions,
) -> Result<PartialWave> {
    let kappa = params.kappa();
    check_guard(kappa, opts.kappa_guard)?;
    if p.r == p0.r {
        return Err(Error::CoincidentRadii(p.r));
    }
    let (lo, hi) = if p.r < p0.r { (p.r, p0.r) } else { (p0.r, p.r) };
    let (a, b) = (2.0 * params.k * lo, 2.0 * params.k * hi);
    let c = pair_geometry(&p, &p0).cos_gamma;
    let k = Complex::new(kappa, 0.0);
    let g0 = gamma(&Complex::new(1.0 - kappa, 0.0))?;
    // Gamma(l+1-kappa) a^{l+1} / (2l)! advanced by (l-kappa) a / ((2l-1) 2l)
    let mut coef = g0 * a;
    let (mut p_prev, mut p_cur) = (0.0, 1.0);
    let gen = |l: usize| -> Result<Complex<f64>> {
        if l > 0 {
            coef = coef * (l as f64 - kappa) * a / ((2 * l - 1) as f64 * (2 * l) as f64);
            let next = ((2 * l - 1) as f64 * c * p_cur - (l - 1) as f64 * p_prev) / l as f64;
            p_prev = p_cur;
            p_cur = next;
        }
        if p_cur == 0.0 {
            return Ok(Complex::new(0.0, 0.0));
        }
        let mu = Complex::new(l as f64 + 0.5, 0.0);
        let m = whittaker_m_reduced(&k, &mu, &Complex::new(a, 0.0))?;
        let w = whittaker_w_gen(&k, &mu, &b)?;
        Ok(coef * m * w * p_cur)
    };
    let (sum, diag) = match opts.lmax {
        Some(l) => sum_fixed(gen, l + 1, &opts.series)?,
        None => sum_series(gen, &opts.series)?,
    };
    Ok(PartialWave {
        value: sum.re / (8.0 * PI * params.k * p.r * p0.r),
        diag,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    /// `sum_{l,m} psi_{n,l,m}(p) conj(psi_{n,l,m}(p0))`.
    EigenSum,
    /// Closed Laguerre form from the residue of the Green function.
    Residue,
}

/// Kernel of the projection onto the eigenspace of `E_n`.
pub fn projection_kernel(n: usize, g: f64, p: SphericalPoint, p0: SphericalPoint, method: KernelMethod) -> Result<f64> {
    if n == 0 {
        return Err(Error::IndexOutOfRange("projection kernels need n >= 1".into()));
    }
    match method {
        KernelMethod::EigenSum => {
            let mut acc = Complex::new(0.0, 0.0);
            for l in 0..n {
                for m in -(l as i64)..=(l as i64) {
                    let qn = QuantumNumbers { n, l, m };
                    acc += hydrogen_eigenfunction(qn, g, p)? * hydrogen_eigenfunction(qn, g, p0)?.conj();
                }
            }
            Ok(acc.re)
        }
        KernelMethod::Residue => {
            let geo = pair_geometry(&p, &p0);
            if geo.big_r == 0.0 {
                return Err(Error::CoincidentPoints);
            }
            let nf = n as f64;
            let s = g / (2.0 * nf);
            let (lx, ly) = (s * geo.x, s * geo.y);
            let l1 = |z: f64| laguerre(n - 1, 1.0, z);
            let l0 = |z: f64| laguerre(n, 0.0, z);
            let bracket = geo.x * l1(lx)? * l0(ly)? - geo.y * l1(ly)? * l0(lx)?;
            let pre = g.powi(3) / (16.0 * PI * geo.big_r * nf.powi(4));
            Ok(pre * (-s * (p.r + p0.r)).exp() * bracket)
        }
    }
}

/// `L_n(t) L^1_{n-1}(t) - t L_n(t) L^2_{n-2}(t) + t L^1_{n-1}(t)^2`, with `L_{-1} = 0`.
fn diagonal_polynomial(n: usize, t: f64) -> Result<f64> {
    let ln = laguerre(n, 0.0, t)?;
    let l1 = laguerre(n - 1, 1.0, t)?;
    let l2 = if n >= 2 { laguerre(n - 2, 2.0, t)? } else { 0.0 };
    Ok(ln * l1 - t * ln * l2 + t * l1 * l1)
}

/// Diagonal `P_n(p, p)` of the projection kernel; independent of the angles.
pub fn diagonal_density(n: usize, g: f64, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::IndexOutOfRange("the diagonal density needs n >= 1".into()));
    }
    let nf = n as f64;
    let t = g * r / nf;
    Ok(g.powi(3) / (8.0 * PI * nf.powi(4)) * (-t).exp() * diagonal_polynomial(n, t)?)
}

/// `D_n(r) = 4 pi r^2 P_n(p, p)`.
pub fn radial_distribution(n: usize, g: f64, r: f64) -> Result<f64> {
    Ok(4.0 * PI * r * r * diagonal_density(n, g, r)?)
}

/// Gauss-Laguerre nodes and weights for `int_0^inf x^alpha e^{-x} f(x) dx`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let ln_ratio = ln_gamma(&Complex::new(alpha + nf, 0.0)).map(|z| z.re).unwrap_or(f64::NAN)
        - ln_gamma(&Complex::new(nf, 0.0)).map(|z| z.re).unwrap_or(f64::NAN);
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * nf + 1.8 * alpha),
            1 => z + (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai)) * (z - x[i - 2])
                    / (1.0 + 0.3 * alpha)
            }
        };
        let mut pp = 1.0;
        let mut p2 = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0 + alpha - z) * p2 - (jf - 1.0 + alpha) * p3) / jf;
            }
            pp = (nf * p1 - (nf + alpha) * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        x[i] = z;
        w[i] = -ln_ratio.exp() / (pp * nf * p2);
    }
    (x, w)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

const QUAD_START: usize = 16;
const QUAD_MAX: usize = 256;
const QUAD_STABLE: f64 = 1e-10;

/// `int_0^inf e^{-t} f(t) dt` with the node count doubled until two
/// successive rules agree to `1e-10`.
pub fn laguerre_integral(f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let rule = |n: usize| -> Result<f64> {
        let (x, w) = gauss_laguerre(n, 0.0);
        x.iter().zip(&w).map(|(&t, &wt)| Ok(wt * f(t)?)).sum()
    };
    let mut n = QUAD_START;
    let mut prev = rule(n)?;
    while n < QUAD_MAX {
        n *= 2;
        let cur = rule(n)?;
        if (cur - prev).abs() <= QUAD_STABLE * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::invalid(format!("quadrature did not stabilize within {QUAD_MAX} nodes")))
}

/// `int_0^inf D_n(r) dr`, which equals the degeneracy `n^2`.
pub fn radial_distribution_integral(n: usize, g: f64) -> Result<f64> {
    // r = n t / g puts the e^{-g r / n} decay on the Laguerre weight
    let scale = n as f64 / g;
    laguerre_integral(|t| Ok(radial_distribution(n, g, scale * t)? * t.exp() * scale))
}

/// `int_0^inf e^{-r} (L_n L^1_{n-1} - r L_n L^2_{n-2} + r (L^1_{n-1})^2) r^2 dr`,
/// which equals `2 n^3`.
pub fn laguerre_moment_integral(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::IndexOutOfRange("the Laguerre moment needs n >= 1".into()));
    }
    laguerre_integral(|t| Ok(diagonal_polynomial(n, t)? * t * t))
}

/// `int |psi_{n,l,m}|^2 dV`: Gauss-Laguerre in `r`, Gauss-Legendre in
/// `cos theta` and the trapezoid rule in `phi`.
pub fn norm_integral(qn: QuantumNumbers, g: f64) -> Result<f64> {
    let qn = QuantumNumbers::new(qn.n, qn.l, qn.m)?;
    let (ct, wt) = gauss_legendre(2 * qn.l + 4);
    let n_phi = 2 * qn.l + 4;
    let scale = qn.n as f64 / g;
    laguerre_integral(|t| {
        let r = scale * t;
        let mut ang = 0.0;
        for (&c, &w) in ct.iter().zip(&wt) {
            for j in 0..n_phi {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                let p = SphericalPoint { r, theta: c.acos(), phi };
                ang += w * hydrogen_eigenfunction(qn, g, p)?.norm_sqr();
            }
        }
        ang *= 2.0 * PI / n_phi as f64;
        Ok(ang * r * r * t.exp() * scale)
    })
}

/// `(z - E_n) G(z)` at `z = E_n + delta` (with `k = sqrt(-z)`) next to the
/// projection kernel `P_n`; the two approach `-P_n` and `P_n` linearly in `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueProbe {
    pub delta: f64,
    pub scaled_green: f64,
    pub projection: f64,
    /// `|(z - E_n) G + P_n|`.
    pub defect: f64,
}

pub fn residue_probe(n: usize, g: f64, p: SphericalPoint, p0: SphericalPoint, delta: f64) -> Result<ResidueProbe> {
    let z = bound_energy(n, g) + delta;
    if !(z < 0.0) {
        return Err(Error::invalid(format!("z = {z} must stay below the continuum")));
    }
    let params = CoulombParams::new(g, (-z).sqrt())?;
    let scaled_green = delta * hostler_unguarded(params, &p, &p0)?;
    let projection = projection_kernel(n, g, p, p0, KernelMethod::Residue)?;
    Ok(ResidueProbe {
        delta,
        scaled_green,
        projection,
        defect: (scaled_green + projection).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(r: f64, t: f64, p: f64) -> SphericalPoint {
        SphericalPoint::new(r, t, p).unwrap()
    }

    #[test]
    fn energies() {
        assert_eq!(bound_energy(1, 2.0), -1.0);
        assert_eq!(bound_energy(2, 2.0), -0.25);
        assert_eq!(degeneracy(3), 9);
    }

    #[test]
    fn ground_state_closed_form() {
        let p = pt(0.7, 1.0, 2.0);
        let psi = hydrogen_eigenfunction(QuantumNumbers::new(1, 0, 0).unwrap(), 2.0, p).unwrap();
        let want = 2.0 * (-0.7f64).exp() / (4.0 * PI).sqrt();
        assert!((psi.re - want).abs() < 1e-15 && psi.im == 0.0);
        assert!(QuantumNumbers::new(2, 2, 0).is_err());
    }

    #[test]
    fn conjugation_flips_m() {
        let p = pt(1.3, 0.8, 4.0);
        let a = hydrogen_eigenfunction(QuantumNumbers { n: 3, l: 2, m: 1 }, 1.5, p).unwrap();
        let b = hydrogen_eigenfunction(QuantumNumbers { n: 3, l: 2, m: -1 }, 1.5, p).unwrap();
        assert!((b + a.conj()).norm() < 1e-15);
    }

    #[test]
    fn quadrature_rules() {
        let (x, w) = gauss_laguerre(12, 0.0);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(5)).sum();
        assert!((m - 120.0).abs() < 1e-10);
        let (x, w) = gauss_legendre(7);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m - 0.4).abs() < 1e-14);
    }

    #[test]
    fn free_limit() {
        let (p, p0) = (pt(1.5, 0.4, 0.3), pt(0.6, 1.9, 2.2));
        let k = 0.8;
        let gval = hostler_green(CoulombParams::new(1e-6, k).unwrap(), p, p0).unwrap();
        let r = pair_geometry(&p, &p0).big_r;
        let free = (-k * r).exp() / (4.0 * PI * r);
        assert!((gval - free).abs() < 1e-5 * free);
    }

    #[test]
    fn closed_form_matches_partial_waves() {
        let params = CoulombParams::new(1.0, 0.7).unwrap();
        let (p, p0) = (pt(2.0, 0.9, 1.0), pt(0.8, 2.0, 3.5));
        let h = hostler_green(params, p, p0).unwrap();
        let pw = partial_wave_green(params, p, p0, &VerifyOptions::default()).unwrap();
        assert!((h - pw.value).abs() < 1e-7 * h.abs(), "{h} vs {pw:?}");
        let swapped = hostler_green(params, p0, p).unwrap();
        assert!((h - swapped).abs() < 1e-12 * h.abs());
        assert!(matches!(
            partial_wave_green(params, p, pt(2.0, 0.1, 0.1), &VerifyOptions::default()),
            Err(Error::CoincidentRadii(_))
        ));
    }

    #[test]
    fn projection_kernels_agree() {
        let (p, p0) = (pt(1.7, 0.5, 0.2), pt(3.1, 2.3, 5.0));
        for n in 1..=3 {
            let a = projection_kernel(n, 1.2, p, p0, KernelMethod::EigenSum).unwrap();
            let b = projection_kernel(n, 1.2, p, p0, KernelMethod::Residue).unwrap();
            assert!((a - b).abs() < 1e-9 * a.abs(), "n = {n}: {a} vs {b}");
        }
        let one = projection_kernel(1, 1.2, p, p0, KernelMethod::Residue).unwrap();
        let want = 1.2f64.powi(3) / (8.0 * PI) * (-0.6 * (1.7 + 3.1f64)).exp();
        assert!((one - want).abs() < 1e-13 * want);
    }

    #[test]
    fn ground_state_distribution_peaks_at_one() {
        let d = |r: f64| radial_distribution(1, 2.0, r).unwrap();
        assert!((d(0.8) - 4.0 * 0.64 * (-1.6f64).exp()).abs() < 1e-14);
        assert!(d(1.0) > d(0.99) && d(1.0) > d(1.01));
    }
}
