use std::io::Write;

use squid_transfer::circuit::{
    derive, josephson_energy, oscillator_frequency, rabi_frequency, regime_check, resonant_flux, tau_to_seconds,
    CircuitParams, ELEMENTARY_CHARGE, HBAR,
};
use squid_transfer::Error;

#[test]
fn oscillator_and_rabi_scaling() {
    let w = oscillator_frequency(1e-8, 1e-12);
    assert!((oscillator_frequency(4e-8, 1e-12) / w - 0.5).abs() < 1e-15);
    assert!((oscillator_frequency(1e-8, 4e-12) / w - 0.5).abs() < 1e-15);
    let rabi = rabi_frequency(w, 1e-11, 1e-12);
    assert!((rabi_frequency(w, 2e-11, 1e-12) / rabi - 0.5).abs() < 1e-15);
    assert!((rabi_frequency(4.0 * w, 1e-11, 1e-12) / rabi - 2.0).abs() < 1e-14);
}

#[test]
fn josephson_energy_is_flux_periodic() {
    let period = std::f64::consts::PI * HBAR / ELEMENTARY_CHARGE;
    for phi in [0.0, 1.3e-16, 4.4e-16] {
        let e = josephson_energy(1e-23, phi);
        assert!((josephson_energy(1e-23, phi + period) - e).abs() <= 1e-12 * 2e-23);
    }
    assert!(josephson_energy(1e-23, period / 4.0).abs() < 1e-36);
}

#[test]
fn resonant_flux_hits_resonance() {
    let omega = 1e10;
    let e_j0 = 1e-23;
    let phi = resonant_flux(e_j0, omega).unwrap();
    assert!((josephson_energy(e_j0, phi) / (HBAR * omega) - 1.0).abs() < 1e-12);
    assert!(resonant_flux(1e-30, omega).is_none());
}

#[test]
fn time_conversion() {
    let d = derive(&CircuitParams::typical()).unwrap();
    assert!((tau_to_seconds(2.0, &d) - 2.0 / d.rabi_omega).abs() < 1e-24);
}

#[test]
fn circuit_file_round_trip() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# device A\nc_c = 2e-17   # coupling\n\nl_o=2e-8").unwrap();
    let p = CircuitParams::load(file.path()).unwrap();
    let typical = CircuitParams::typical();
    assert_eq!(p.c_c, 2e-17);
    assert_eq!(p.l_o, 2e-8);
    assert_eq!(p.c_j0, typical.c_j0);
    assert_eq!(p.c_0, typical.c_0);
}

#[test]
fn circuit_file_errors() {
    assert!(matches!(CircuitParams::parse("bogus = 1"), Err(Error::Validation(_))));
    assert!(matches!(CircuitParams::parse("c_c = abc"), Err(Error::Validation(_))));
    assert!(matches!(CircuitParams::parse("c_c 1e-17"), Err(Error::Validation(_))));
    assert!(matches!(CircuitParams::parse("c_c = -1e-17"), Err(Error::Domain(_))));
    assert!(matches!(CircuitParams::load(std::path::Path::new("/nonexistent/circuit.txt")), Err(Error::Io(_))));
}

#[test]
fn regime_checks_report_all_conditions() {
    let d = derive(&CircuitParams::typical()).unwrap();
    let checks = regime_check(&d, 0.02);
    let names: Vec<&str> = checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["rwa", "charge_regime", "temperature", "resonance"]);
    let resonance = checks.iter().find(|c| c.name == "resonance").unwrap();
    assert!(resonance.passed);
    let hot = regime_check(&d, 300.0);
    assert!(!hot.iter().find(|c| c.name == "temperature").unwrap().passed);
}
