//! Kummer/Tricomi identities on random parameters, and the harmonic Gram matrix.

use coulomb_exterior::specfun::{
    gamma, kummer_phi, kummer_phi_dz, pochhammer, sph_harm, tricomi_psi, tricomi_psi_dz, HypergeomParams,
    SphericalPoint,
};
use coulomb_exterior::SphereGrid64;
use num_complex::Complex;
use proptest::prelude::*;

fn hp(a: f64, b: f64, z: f64) -> HypergeomParams<f64> {
    HypergeomParams::new(a, b, z).unwrap()
}

fn residual(z: f64, a: f64, b: f64, y: f64, dy: f64, d2y: f64) -> f64 {
    let terms = [z * d2y, (b - z) * dy, -a * y];
    terms.iter().sum::<f64>().abs() / terms.iter().map(|t| t.abs()).sum::<f64>()
}

/// Plain power series, summed in order, far past convergence.
fn series_phi(a: f64, b: f64, z: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for n in 0..400 {
        let n = n as f64;
        term *= (a + n) / (b + n) * z / (n + 1.0);
        sum += term;
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn kummer_ode(a in -5.0..5.0f64, b in 0.5..6.0f64, z in 0.05..25.0f64) {
        let y = kummer_phi(hp(a, b, z)).unwrap();
        let dy = kummer_phi_dz(hp(a, b, z)).unwrap();
        let d2y = a / b * kummer_phi_dz(hp(a + 1.0, b + 1.0, z)).unwrap();
        prop_assert!(residual(z, a, b, y, dy, d2y) < 1e-8);
    }

    #[test]
    fn tricomi_ode(a in -5.0..5.0f64, b in -3.0..6.0f64, z in 0.1..40.0f64) {
        let y = tricomi_psi(hp(a, b, z)).unwrap();
        let dy = tricomi_psi_dz(hp(a, b, z)).unwrap();
        let d2y = -a * tricomi_psi_dz(hp(a + 1.0, b + 1.0, z)).unwrap();
        prop_assert!(residual(z, a, b, y, dy, d2y) < 1e-8, "residual {}", residual(z, a, b, y, dy, d2y));
    }

    #[test]
    fn wronskian(a in 0.2..3.0f64, b in 0.5..3.0f64, z in 0.5..10.0f64) {
        let p = hp(a, b, z);
        let w = kummer_phi(p).unwrap() * tricomi_psi_dz(p).unwrap()
            - kummer_phi_dz(p).unwrap() * tricomi_psi(p).unwrap();
        let expected = -gamma(b) / gamma(a) * z.powf(-b) * z.exp();
        prop_assert!(((w - expected) / expected).abs() < 1e-6);
    }

    #[test]
    fn derivatives_match_central_differences(a in -4.0..4.0f64, b in 0.5..5.0f64, z in 0.5..20.0f64) {
        let h = 1e-5 * z.max(1.0);
        let fd_phi = (kummer_phi(hp(a, b, z + h)).unwrap() - kummer_phi(hp(a, b, z - h)).unwrap()) / (2.0 * h);
        let fd_psi = (tricomi_psi(hp(a, b, z + h)).unwrap() - tricomi_psi(hp(a, b, z - h)).unwrap()) / (2.0 * h);
        let dphi = kummer_phi_dz(hp(a, b, z)).unwrap();
        let dpsi = tricomi_psi_dz(hp(a, b, z)).unwrap();
        prop_assert!((fd_phi - dphi).abs() <= 1e-6 * dphi.abs().max(fd_phi.abs()));
        prop_assert!((fd_psi - dpsi).abs() <= 1e-6 * dpsi.abs().max(fd_psi.abs()));
    }

    #[test]
    fn phi_matches_plain_series(a in -3.0..3.0f64, b in 0.5..4.0f64, z in 0.0..8.0f64) {
        let got = kummer_phi(hp(a, b, z)).unwrap();
        let want = series_phi(a, b, z);
        prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn psi_is_proportional_to_terminating_phi(n in 0u64..6, l in 0u32..4, z in 0.1..30.0f64) {
        let a = -(n as f64);
        let b = 2.0 * l as f64 + 2.0;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let psi = tricomi_psi(hp(a, b, z)).unwrap();
        let phi = kummer_phi(hp(a, b, z)).unwrap();
        let scale = sign * pochhammer(b, n);
        prop_assert!((psi - scale * phi).abs() <= 1e-12 * psi.abs().max(scale.abs()));
    }
}

#[test]
fn kummer_example_values() {
    assert_eq!(kummer_phi(hp(0.0, 3.0, 7.0)).unwrap(), 1.0);
    assert!((kummer_phi(hp(1.0, 1.0, 2.0)).unwrap() - 2.0f64.exp()).abs() < 1e-13);
    // Φ(-2, 4, 2) = 1 - 1 + 0.2
    assert!((kummer_phi(hp(-2.0, 4.0, 2.0)).unwrap() - 0.2).abs() < 1e-15);
    assert!((kummer_phi(hp(-2.0, 4.0, 2.0)).unwrap() - series_phi(-2.0, 4.0, 2.0)).abs() < 1e-15);
}

#[test]
fn gram_matrix_is_identity() {
    let lmax = 8;
    let grid = SphereGrid64::for_lmax(lmax);
    let mut ys = Vec::new();
    for l in 0..=lmax {
        for m in -(l as i64)..=l as i64 {
            ys.push(grid.sample(|t, p| sph_harm(l, m, SphericalPoint { theta: t, phi: p }).unwrap()));
        }
    }
    let mut worst = 0.0f64;
    for (i, a) in ys.iter().enumerate() {
        for (j, b) in ys.iter().enumerate() {
            let prod: Vec<Complex<f64>> = a.iter().zip(b).map(|(x, y)| x * y.conj()).collect();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((grid.integrate(&prod) - target).norm());
        }
    }
    assert!(worst < 1e-10, "{worst}");
}
