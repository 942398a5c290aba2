use std::f64::consts::PI;

use proptest::prelude::*;
use squid_transfer::density::{max_abs_diff, QubitPairDensity};
use squid_transfer::experiments::{ground_point, Axis};
use squid_transfer::oracle::{HilbertOracle, Mode, ProductPreparation};
use squid_transfer::SqueezedSpectrum;

fn prep_strategy() -> impl Strategy<Value = ProductPreparation> {
    (0.0..2.0 * PI, 0.0..2.0 * PI, 0.0..PI, 0.0..PI)
        .prop_map(|(a, b, p, q)| ProductPreparation::new(a, b, p, q).unwrap())
}

#[test]
fn closed_form_matches_oracle() {
    let taus = Axis::new(0.0, 3.0 * PI, 9).values();
    for r in Axis::new(0.0, 1.5, 7).values() {
        let s = SqueezedSpectrum::build(r, 1e-12).unwrap();
        let oracle = HilbertOracle::new(&s).unwrap();
        for &tau in &taus {
            let (_, closed) = ground_point(&s, tau).unwrap();
            let brute = oracle.evolve(&ProductPreparation::ground(), tau).unwrap();
            let diff = max_abs_diff(&closed, &brute);
            assert!(diff <= 1e-8, "r={r} tau={tau}: {diff:e}");
        }
    }
}

#[test]
fn raising_the_cutoff_changes_nothing() {
    let s = SqueezedSpectrum::build(0.6, 1e-12).unwrap();
    let prep = ProductPreparation::new(1.1, 0.4, 0.3, 2.0).unwrap();
    let base = HilbertOracle::new(&s).unwrap().evolve(&prep, 3.3).unwrap();
    let wide = HilbertOracle::with_cutoff(&s, s.n_max() + 15).unwrap().evolve(&prep, 3.3).unwrap();
    assert!(max_abs_diff(&base, &wide) <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn global_invariants(prep in prep_strategy(), r in 0.0f64..0.6, tau in 0.0f64..10.0) {
        let s = SqueezedSpectrum::build(r, 1e-12).unwrap();
        let oracle = HilbertOracle::new(&s).unwrap();
        let start = squid_transfer::oracle::FullStateVector::initial(&prep, &s, oracle.n_cut()).unwrap();
        let end = oracle.evolve_state(&prep, tau).unwrap();
        prop_assert!((end.norm() - start.norm()).abs() <= 1e-12);
        prop_assert!((end.excitation_number() - start.excitation_number()).abs() <= 1e-10);
        let reduced = end.reduced_qubits();
        let tr: f64 = (0..4).map(|i| reduced[(i, i)].re).sum();
        prop_assert!((tr - end.field_trace()).abs() <= 1e-12);
        let fast = oracle.evolve(&prep, tau).unwrap();
        let explicit = QubitPairDensity::new(reduced).unwrap();
        prop_assert!(max_abs_diff(&fast, &explicit) <= 1e-10);
    }

    #[test]
    fn pair_evolutions_commute(prep in prep_strategy(), tau in 0.0f64..6.0) {
        let s = SqueezedSpectrum::build(0.4, 1e-12).unwrap();
        let oracle = HilbertOracle::new(&s).unwrap();
        let u = oracle.unitary(tau).unwrap();
        let initial = squid_transfer::oracle::FullStateVector::initial(&prep, &s, oracle.n_cut()).unwrap();
        let mut ab = initial.clone();
        ab.apply_pair(Mode::A, &u);
        ab.apply_pair(Mode::B, &u);
        let mut ba = initial;
        ba.apply_pair(Mode::B, &u);
        ba.apply_pair(Mode::A, &u);
        for q1 in [false, true] {
            for q2 in [false, true] {
                for n in 0..=oracle.n_cut() {
                    for m in 0..=oracle.n_cut() {
                        prop_assert!((ab.amplitude(q1, n, q2, m) - ba.amplitude(q1, n, q2, m)).norm() <= 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn time_zero_returns_the_preparation() {
    let s = SqueezedSpectrum::build(0.9, 1e-12).unwrap();
    let prep = ProductPreparation::new(0.8, 2.2, 1.0, 0.5).unwrap();
    let rho = HilbertOracle::new(&s).unwrap().evolve(&prep, 0.0).unwrap();
    let expected = prep.density();
    let scale = s.norm_sqr();
    for i in 0..4 {
        for j in 0..4 {
            assert!((rho.get(i, j) - expected.get(i, j) * scale).norm() <= 1e-12);
        }
    }
}

#[test]
fn excited_pair_in_vacuum_decays_into_the_modes() {
    // |+,+⟩ ⊗ |0,0⟩ flops with unit frequency: populations cos²τ per qubit.
    let s = SqueezedSpectrum::build(0.0, 1e-12).unwrap();
    let oracle = HilbertOracle::new(&s).unwrap();
    for tau in [0.3, 1.0, 2.0] {
        let rho = oracle.evolve(&ProductPreparation::excited(), tau).unwrap();
        let c2 = tau.cos().powi(2);
        assert!((rho.get(3, 3).re - c2 * c2).abs() <= 1e-12);
        assert!((rho.get(0, 0).re - (1.0 - c2).powi(2)).abs() <= 1e-12);
    }
}
