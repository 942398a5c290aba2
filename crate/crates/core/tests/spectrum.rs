use proptest::prelude::*;
use squid_transfer::spectrum::{SqueezedSpectrum, MAX_N_MAX};
use squid_transfer::Error;

proptest! {
    #[test]
    fn truncation_is_minimal_and_bounded(r in 0.0f64..3.0, exp in 3.0f64..14.0) {
        let eps = 10f64.powf(-exp);
        let s = SqueezedSpectrum::build(r, eps).unwrap();
        let t2 = r.tanh().powi(2);
        prop_assert!(t2.powi(s.n_max() as i32 + 1) < eps * (1.0 + 1e-12));
        if s.n_max() > 0 {
            prop_assert!(t2.powi(s.n_max() as i32) >= eps * (1.0 - 1e-12));
        }
        let norm = s.norm_sqr();
        prop_assert!(norm <= 1.0 + 1e-12);
        prop_assert!(1.0 - norm <= eps + 1e-12);
        prop_assert!((1.0 - norm - s.truncation_error()).abs() <= 1e-12);
    }

    #[test]
    fn amplitudes_follow_the_geometric_law(r in 0.0f64..2.5) {
        let s = SqueezedSpectrum::build(r, 1e-12).unwrap();
        for (n, &eta) in s.eta().iter().enumerate() {
            let expected = r.tanh().powi(n as i32) / r.cosh();
            prop_assert!((eta - expected).abs() <= 1e-15 * expected.max(1e-300) + 1e-300);
        }
        prop_assert!(s.eta().windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(s.amplitude(s.n_max() + 1), 0.0);
    }

    #[test]
    fn chi_is_a_product(r in 0.1f64..2.0, n in 0usize..10, m in 0usize..10) {
        let s = SqueezedSpectrum::build(r, 1e-12).unwrap();
        prop_assume!(n.max(m) <= s.n_max());
        prop_assert_eq!(s.chi(n, m).unwrap(), s.eta()[n] * s.eta()[m]);
    }
}

#[test]
fn rejects_invalid_parameters() {
    for (r, eps) in [(-0.1, 1e-12), (f64::NAN, 1e-12), (0.5, 0.0), (0.5, 1.0), (0.5, -1e-3)] {
        assert!(SqueezedSpectrum::build(r, eps).is_err(), "r={r} eps={eps}");
    }
}

#[test]
fn out_of_range_index() {
    let s = SqueezedSpectrum::build(0.5, 1e-12).unwrap();
    assert!(matches!(s.chi(s.n_max() + 1, 0), Err(Error::OutOfRange { .. })));
}

#[test]
fn extreme_squeezing_hits_the_level_cap() {
    assert!(SqueezedSpectrum::build(10.0, 1e-12).is_err());
    let s = SqueezedSpectrum::build(3.0, 1e-12).unwrap();
    assert!(s.n_max() < MAX_N_MAX);
}

#[test]
fn custom_amplitudes_must_be_normalised() {
    let s = SqueezedSpectrum::from_amplitudes(vec![0.6, 0.8]).unwrap();
    assert_eq!(s.n_max(), 1);
    assert!(SqueezedSpectrum::from_amplitudes(vec![0.6, 0.6]).is_err());
}
