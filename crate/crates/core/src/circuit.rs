//! Circuit element values → effective model parameters, and `τ` → seconds.
//!
//! The dynamics modules work in the dimensionless time `τ = Ωt`; this is
//! the only place SI units appear.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elementary charge (C), CODATA 2018 exact.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant (J·s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K), CODATA 2018 exact.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Raw circuit element values in SI units. The oscillator capacitance
/// appears as both `C_o` and `C_0` in the literature; here it is `c_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub c_j0: f64,
    pub c_g: f64,
    pub c_c: f64,
    pub c_0: f64,
    pub l_o: f64,
    pub e_j0: f64,
    pub phi_ext: f64,
    pub v_g: f64,
}

impl CircuitParams {
    /// Junction and gate capacitances of order 1 fF and 10 aF, a 10 aF
    /// coupling capacitor, an oscillator capacitance chosen so that
    /// `C₂ = 1 pF`, `L_o = 10 nH`, `E_J⁰ = k_B·100 mK`, the gate at the
    /// charge-degeneracy point and the flux tuned onto resonance.
    pub fn typical() -> Self {
        let (c_j0, c_g, c_c, l_o) = (1e-15, 1e-17, 1e-17, 1e-8);
        let target_c2 = 1e-12;
        // D = C₂·C_c = (C₀ + C_c)(C_g + 2C_J0) + C_c·C₀, solved for C₀.
        let island = c_g + 2.0 * c_j0;
        let c_0 = (target_c2 * c_c - c_c * island) / (island + c_c);
        let e_j0 = BOLTZMANN * 0.1;
        let omega = oscillator_frequency(l_o, target_c2);
        let phi_ext = resonant_flux(e_j0, omega).unwrap_or(0.0);
        Self { c_j0, c_g, c_c, c_0, l_o, e_j0, phi_ext, v_g: ELEMENTARY_CHARGE / c_g }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in
            [("c_j0", self.c_j0), ("c_g", self.c_g), ("c_c", self.c_c), ("c_0", self.c_0), ("l_o", self.l_o)]
        {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.e_j0.is_finite() && self.e_j0 >= 0.0) {
            return Err(Error::Domain(format!("e_j0 must be >= 0, got {}", self.e_j0)));
        }
        if !self.phi_ext.is_finite() || !self.v_g.is_finite() {
            return Err(Error::Domain("phi_ext and v_g must be finite".into()));
        }
        Ok(())
    }

    /// Parses `key = value` lines (SI units, `#` comments). Missing keys
    /// fall back to [`CircuitParams::typical`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Validation(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Validation(format!("line {}: `{}` is not a number", lineno + 1, value.trim())))?;
            if !value.is_finite() {
                return Err(Error::Validation(format!("line {}: {key} is not finite", lineno + 1)));
            }
            values.insert(key.to_string(), value);
        }
        let mut p = Self::typical();
        for (key, value) in values {
            let slot = match key.as_str() {
                "c_j0" => &mut p.c_j0,
                "c_g" => &mut p.c_g,
                "c_c" => &mut p.c_c,
                "c_0" => &mut p.c_0,
                "l_o" => &mut p.l_o,
                "e_j0" => &mut p.e_j0,
                "phi_ext" => &mut p.phi_ext,
                "v_g" => &mut p.v_g,
                other => return Err(Error::Validation(format!("unknown circuit key `{other}`"))),
            };
            *slot = value;
        }
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Relative offset of `C_g V_g` from the degeneracy point `C_g V_g = e`.
    pub fn degeneracy_offset(&self) -> f64 {
        self.c_g * self.v_g / ELEMENTARY_CHARGE - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub cap_c: f64,
    pub cap_c1: f64,
    pub cap_c2: f64,
    /// `𝒟` (F²); unknown when built from effective capacitances.
    pub det_d: Option<f64>,
    pub omega: f64,
    pub rabi_omega: f64,
    pub e_j: f64,
    pub t_per_tau: f64,
    pub charging_energy: f64,
}

/// `ω = 1/√(L_o C₂)`.
pub fn oscillator_frequency(l_o: f64, cap_c2: f64) -> f64 {
    1.0 / (l_o * cap_c2).sqrt()
}

/// `Ω = e √(2ωC₂/ħ) / C₁`.
pub fn rabi_frequency(omega: f64, cap_c1: f64, cap_c2: f64) -> f64 {
    ELEMENTARY_CHARGE * (2.0 * omega * cap_c2 / HBAR).sqrt() / cap_c1
}

/// `E_J(φ_ext) = 2 E_J⁰ cos(2e φ_ext / ħ)`.
pub fn josephson_energy(e_j0: f64, phi_ext: f64) -> f64 {
    2.0 * e_j0 * (2.0 * ELEMENTARY_CHARGE * phi_ext / HBAR).cos()
}

/// Smallest non-negative flux putting `E_J(φ_ext) = ħω`, if reachable.
pub fn resonant_flux(e_j0: f64, omega: f64) -> Option<f64> {
    let ratio = HBAR * omega / (2.0 * e_j0);
    (ratio.abs() <= 1.0).then(|| ratio.acos() * HBAR / (2.0 * ELEMENTARY_CHARGE))
}

pub fn derive(p: &CircuitParams) -> Result<DerivedParams> {
    p.validate()?;
    let island = p.c_g + 2.0 * p.c_j0;
    let det_d = (p.c_0 + p.c_c) * island + p.c_c * p.c_0;
    let cap_c = det_d / (p.c_0 + p.c_c);
    let cap_c1 = det_d / (island + p.c_c);
    let cap_c2 = det_d / p.c_c;
    let mut d = DerivedParams::from_effective(cap_c, cap_c1, cap_c2, p.l_o, p.e_j0, p.phi_ext)?;
    d.det_d = Some(det_d);
    Ok(d)
}

impl DerivedParams {
    /// Builds from effective capacitances directly.
    pub fn from_effective(cap_c: f64, cap_c1: f64, cap_c2: f64, l_o: f64, e_j0: f64, phi_ext: f64) -> Result<Self> {
        for (name, v) in [("C", cap_c), ("C1", cap_c1), ("C2", cap_c2), ("L_o", l_o)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        let omega = oscillator_frequency(l_o, cap_c2);
        let rabi_omega = rabi_frequency(omega, cap_c1, cap_c2);
        Ok(Self {
            cap_c,
            cap_c1,
            cap_c2,
            det_d: None,
            omega,
            rabi_omega,
            e_j: josephson_energy(e_j0, phi_ext),
            t_per_tau: 1.0 / rabi_omega,
            charging_energy: ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * cap_c),
        })
    }
}

/// `t = τ/Ω`.
pub fn tau_to_seconds(tau: f64, d: &DerivedParams) -> f64 {
    tau * d.t_per_tau
}

/// Thresholds for [`regime_check`]; `≪` and `≫` made concrete.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    /// Upper bound on `Ω/ω`.
    pub rwa_ratio: f64,
    /// Lower bound on `(e²/2C) / E_J`.
    pub charge_ratio: f64,
    /// Upper bound on `k_B T / (e²/2C)`.
    pub thermal_ratio: f64,
    /// Upper bound on `|E_J/ħ − ω| / ω`.
    pub detuning_ratio: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self { rwa_ratio: 0.05, charge_ratio: 5.0, thermal_ratio: 0.1, detuning_ratio: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeCheck {
    pub name: String,
    pub ratio: f64,
    pub threshold: f64,
    pub passed: bool,
}

pub fn regime_check(d: &DerivedParams, temperature: f64) -> Vec<RegimeCheck> {
    regime_check_with(d, temperature, &RegimeThresholds::default())
}

pub fn regime_check_with(d: &DerivedParams, temperature: f64, t: &RegimeThresholds) -> Vec<RegimeCheck> {
    let below = |name: &str, ratio: f64, threshold: f64| RegimeCheck {
        name: name.into(),
        ratio,
        threshold,
        passed: ratio < threshold,
    };
    let charge = d.charging_energy / d.e_j.abs();
    vec![
        below("rwa", d.rabi_omega / d.omega, t.rwa_ratio),
        RegimeCheck {
            name: "charge_regime".into(),
            ratio: charge,
            threshold: t.charge_ratio,
            passed: charge > t.charge_ratio,
        },
        below("temperature", BOLTZMANN * temperature / d.charging_energy, t.thermal_ratio),
        below("resonance", (d.e_j / HBAR - d.omega).abs() / d.omega, t.detuning_ratio),
    ]
}
