use std::f64::consts::PI;

use hostler_core::green::{
    hostler_green, norm_integral, partial_wave_green, residue_probe, CoulombParams, QuantumNumbers, SphericalPoint,
};
use hostler_core::identities::VerifyOptions;
use proptest::prelude::*;

fn pt(r: f64, t: f64, p: f64) -> SphericalPoint {
    SphericalPoint::new(r, t, p).unwrap()
}

fn from_cartesian(v: [f64; 3]) -> SphericalPoint {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
    let phi = v[1].atan2(v[0]).rem_euclid(2.0 * PI);
    pt(r, theta, phi)
}

/// Rotation by `angle` about the unit axis `n` (Rodrigues).
fn rotate(v: [f64; 3], n: [f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    let dot = n[0] * v[0] + n[1] * v[1] + n[2] * v[2];
    let cross = [n[1] * v[2] - n[2] * v[1], n[2] * v[0] - n[0] * v[2], n[0] * v[1] - n[1] * v[0]];
    [0, 1, 2].map(|i| v[i] * c + cross[i] * s + n[i] * dot * (1.0 - c))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn point() -> impl Strategy<Value = SphericalPoint> {
    (0.3f64..4.0, 0.05f64..3.09, 0.0f64..6.28).prop_map(|(r, t, p)| pt(r, t, p))
}

/// Keeps `kappa = g/2k` at least 0.05 away from the poles at positive integers.
fn coulomb() -> impl Strategy<Value = CoulombParams> {
    (0.1f64..3.0, 0.3f64..2.0)
        .prop_filter("kappa near a pole", |(g, k)| {
            let kappa = g / (2.0 * k);
            (kappa - kappa.round()).abs() > 0.05 || kappa.round() < 1.0
        })
        .prop_map(|(g, k)| CoulombParams::new(g, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn green_is_symmetric_in_its_points(c in coulomb(), a in point(), b in point()) {
        // closer radii need so many waves that W_{kappa,l+1/2} overflows f64
        prop_assume!(a.r.min(b.r) <= 0.8 * a.r.max(b.r));
        let ab = hostler_green(c, a, b).unwrap();
        let ba = hostler_green(c, b, a).unwrap();
        prop_assert!(rel(ab, ba) <= 1e-14, "{ab} vs {ba}");
        let opts = VerifyOptions::default();
        let wa = partial_wave_green(c, a, b, &opts).unwrap().value;
        let wb = partial_wave_green(c, b, a, &opts).unwrap().value;
        prop_assert!(rel(wa, wb) <= 1e-14, "{wa} vs {wb}");
    }

    #[test]
    fn green_is_rotation_invariant(
        c in coulomb(),
        a in point(),
        b in point(),
        axis in (-1.0f64..1.0, 0.0f64..6.28),
        angle in 0.0f64..6.28,
    ) {
        let (z, az) = axis;
        let s = (1.0 - z * z).sqrt();
        let n = [s * az.cos(), s * az.sin(), z];
        let ra = from_cartesian(rotate(a.cartesian(), n, angle));
        let rb = from_cartesian(rotate(b.cartesian(), n, angle));
        let g0 = hostler_green(c, a, b).unwrap();
        let g1 = hostler_green(c, ra, rb).unwrap();
        prop_assert!(rel(g0, g1) <= 1e-10, "{g0} vs {g1}");
    }
}

#[test]
fn residue_defect_shrinks_linearly() {
    let (p, p0) = (pt(1.3, 0.6, 0.2), pt(0.7, 2.0, 4.0));
    for n in [1, 2] {
        let defects: Vec<f64> = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&d| residue_probe(n, 1.0, p, p0, d).unwrap().defect)
            .collect();
        for w in defects.windows(2) {
            let ratio = w[0] / w[1];
            assert!((7.0..14.0).contains(&ratio), "n = {n}: defects {defects:?}");
        }
    }
}

#[test]
fn psi_210_is_normalized() {
    for g in [1.0, 2.0] {
        let norm = norm_integral(QuantumNumbers::new(2, 1, 0).unwrap(), g).unwrap();
        assert!((norm - 1.0).abs() < 1e-10, "g = {g}: {norm}");
    }
}

#[test]
fn partial_wave_truncation_error_decreases() {
    let c = CoulombParams::new(1.3, 0.9).unwrap();
    let (p, p0) = (pt(2.0, 0.7, 0.3), pt(0.8, 1.9, 2.4));
    let exact = hostler_green(c, p, p0).unwrap();
    let mut last = f64::INFINITY;
    for lmax in [0, 2, 4, 8, 12, 16, 20, 24] {
        let opts = VerifyOptions {
            lmax: Some(lmax),
            ..Default::default()
        };
        let w = partial_wave_green(c, p, p0, &opts).unwrap();
        assert_eq!(w.diag.n_terms, lmax + 1);
        let err = (w.value - exact).abs();
        assert!(err < last, "lmax = {lmax}: {err:e} after {last:e}");
        last = err;
    }
    assert!(last < 1e-8 * exact.abs());
}

#[test]
fn coincident_radii_are_refused() {
    let c = CoulombParams::new(1.0, 1.0).unwrap();
    let r = partial_wave_green(c, pt(1.0, 0.3, 0.0), pt(1.0, 1.0, 1.0), &VerifyOptions::default());
    assert!(r.is_err());
}
