use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use proptest::prelude::*;
use squid_transfer::density::{hermitian_eigenvalues, QubitPairDensity, Subsystem};
use squid_transfer::dynamics::AbcdCoefficients;
use squid_transfer::measures::{
    binary_entropy, concurrence, eof, lambda_from_abcd, linearized_entropy, linearized_entropy_from_spectrum,
    npt_negativity, npt_negativity_over, EntanglementReport,
};
use squid_transfer::Error;

fn symmetric_x_state(a: f64, b: f64, c: f64, frac: f64) -> (AbcdCoefficients, QubitPairDensity) {
    let total = a + 2.0 * b + c;
    let (a, b, c) = (a / total, b / total, c / total);
    let d = frac * (a * c).sqrt();
    let coeffs = AbcdCoefficients { a, b, c, d, r: f64::NAN, tau: f64::NAN };
    let mut m = Matrix4::zeros();
    m[(0, 0)] = a.into();
    m[(1, 1)] = b.into();
    m[(2, 2)] = b.into();
    m[(3, 3)] = c.into();
    m[(0, 3)] = (-d).into();
    m[(3, 0)] = (-d).into();
    (coeffs, QubitPairDensity::new(m).unwrap())
}

fn random_state(entries: &[f64]) -> QubitPairDensity {
    let g = Matrix4::from_fn(|i, j| Complex64::new(entries[4 * i + j], entries[16 + 4 * i + j]));
    let m = g * g.adjoint();
    let tr: f64 = (0..4).map(|i| m[(i, i)].re).sum();
    let mut m = m / Complex64::new(tr, 0.0);
    // Exact hermiticity after rounding.
    m = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    QubitPairDensity::new(m).unwrap()
}

proptest! {
    #[test]
    fn concurrence_equals_clamped_negativity_on_x_states(
        a in 0.0f64..1.0, b in 0.0f64..0.5, c in 0.0f64..1.0, frac in -1.0f64..1.0,
    ) {
        prop_assume!(a + 2.0 * b + c > 1e-3);
        let (coeffs, rho) = symmetric_x_state(a, b, c, frac);
        let (e, lambda) = npt_negativity(&rho).unwrap();
        prop_assert!((concurrence(&rho).unwrap() - e.max(0.0)).abs() <= 1e-10);
        let spectrum_min = coeffs.a.min(coeffs.c).min(coeffs.b - coeffs.d.abs());
        prop_assert!((lambda - spectrum_min).abs() <= 1e-12);
        if coeffs.d >= 0.0 && coeffs.b - coeffs.d <= coeffs.a.min(coeffs.c) {
            prop_assert!((lambda - lambda_from_abcd(&coeffs)).abs() <= 1e-12);
        }
    }

    #[test]
    fn ppt_iff_zero_concurrence(entries in prop::collection::vec(-1.0f64..1.0, 32)) {
        let rho = random_state(&entries);
        let (e, _) = npt_negativity(&rho).unwrap();
        let c = concurrence(&rho).unwrap();
        prop_assume!(e.abs() > 1e-8);
        prop_assert_eq!(e > 0.0, c > 1e-9);
    }

    #[test]
    fn partial_transpose_spectrum_is_subsystem_independent(entries in prop::collection::vec(-1.0f64..1.0, 32)) {
        let rho = random_state(&entries);
        let first = hermitian_eigenvalues(&rho.partial_transpose(Subsystem::First));
        let second = hermitian_eigenvalues(&rho.partial_transpose(Subsystem::Second));
        for (x, y) in first.iter().zip(second) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        let (e1, _) = npt_negativity_over(&rho, Subsystem::First).unwrap();
        let (e2, _) = npt_negativity_over(&rho, Subsystem::Second).unwrap();
        prop_assert!((e1 - e2).abs() <= 1e-12);
    }

    #[test]
    fn linearized_entropy_routes_agree(entries in prop::collection::vec(-1.0f64..1.0, 32)) {
        let rho = random_state(&entries);
        let direct = linearized_entropy(&rho).unwrap();
        let spectral = linearized_entropy_from_spectrum(&rho).unwrap();
        prop_assert!((direct - spectral).abs() <= 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&direct));
    }

    #[test]
    fn eof_is_monotone(c1 in 0.0f64..=1.0, c2 in 0.0f64..=1.0) {
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        prop_assert!(eof(lo).unwrap() <= eof(hi).unwrap() + 1e-15);
    }

    #[test]
    fn report_invariants_hold(entries in prop::collection::vec(-1.0f64..1.0, 32)) {
        let report = EntanglementReport::of(&random_state(&entries)).unwrap();
        prop_assert!(report.check_invariants().is_ok());
    }
}

#[test]
fn bell_state() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = Vector4::new(h.into(), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), (-h).into());
    let report = EntanglementReport::of(&QubitPairDensity::pure(&psi).unwrap()).unwrap();
    assert!((report.e_npt - 1.0).abs() < 1e-12);
    assert!((report.concurrence - 1.0).abs() < 1e-12);
    assert!((report.eof - 1.0).abs() < 1e-12);
    assert!(report.s_linear.abs() < 1e-12);
    assert!(report.teleport_useful);
}

#[test]
fn maximally_mixed_state() {
    let report = EntanglementReport::of(&QubitPairDensity::maximally_mixed()).unwrap();
    assert!((report.e_npt + 0.5).abs() < 1e-12);
    assert_eq!(report.concurrence, 0.0);
    assert_eq!(report.eof, 0.0);
    assert!((report.s_linear - 1.0).abs() < 1e-12);
    assert!(!report.teleport_useful);
}

#[test]
fn eof_reference_values() {
    assert_eq!(eof(0.0).unwrap(), 0.0);
    assert!((eof(1.0).unwrap() - 1.0).abs() < 1e-15);
    assert!((eof(0.87).unwrap() - 0.816738213019474).abs() < 1e-12);
    assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
    for bad in [-0.01, 1.01, f64::NAN] {
        assert!(matches!(eof(bad), Err(Error::Domain(_))));
    }
}
