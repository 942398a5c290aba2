//! Closed-form evolution of the qubit pair prepared in `|−,−⟩`.
//!
//! Each qubit exchanges excitations with its own mode inside the doublets
//! `{|−,n⟩, |+,n−1⟩}` at angular rate `√n` (time measured as `τ = Ωt`).
//! Tracing the two modes out of `U (|−−⟩ ⊗ Σ η_n |n,n⟩)` leaves an X-shaped
//! state fixed by four real series:
//!
//! ```text
//! A = Σ η_n² cos⁴(τ√n)
//! B = Σ η_n² sin²(τ√n) cos²(τ√n)
//! D = Σ η_n η_{n+1} sin²(τ√(n+1)) cos²(τ√n)
//! C = 1 − 2B − A
//! ```

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{QubitPairDensity, MM, MP, PM, PP};
use crate::error::{Error, Result};
use crate::spectrum::SqueezedSpectrum;

const COEFF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbcdCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub r: f64,
    pub tau: f64,
}

impl AbcdCoefficients {
    /// Checks unit trace, ranges, and `D ≤ √(AC)`.
    pub fn validate(&self) -> Result<()> {
        let Self { a, b, c, d, .. } = *self;
        let trace = a + 2.0 * b + c;
        if (trace - 1.0).abs() > COEFF_TOL {
            return Err(Error::Integrity(format!("A + 2B + C = {trace}")));
        }
        for (name, v) in [("A", a), ("B", b), ("C", c), ("D", d)] {
            if !(-COEFF_TOL..=1.0 + COEFF_TOL).contains(&v) {
                return Err(Error::Integrity(format!("{name} = {v} outside [0, 1]")));
            }
        }
        let bound = (a.max(0.0) * c.max(0.0)).sqrt();
        if d > bound + COEFF_TOL {
            return Err(Error::Integrity(format!("D = {d} exceeds sqrt(AC) = {bound}")));
        }
        Ok(())
    }

    /// `B − D`, the only partial-transpose eigenvalue that can go negative.
    pub fn lambda_minus(&self) -> f64 {
        self.b - self.d
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::Domain(format!("interaction time must be >= 0, got {tau}")));
    }
    Ok(())
}

/// Sums the series in ascending photon number.
pub fn coefficients(s: &SqueezedSpectrum, tau: f64) -> Result<AbcdCoefficients> {
    check_tau(tau)?;
    let eta = s.eta();
    let mut a = 0.0;
    let mut b = 0.0;
    let mut d = 0.0;
    for (n, &eta_n) in eta.iter().enumerate() {
        let (sin_n, cos_n) = (tau * (n as f64).sqrt()).sin_cos();
        let (cos2, sin2) = (cos_n * cos_n, sin_n * sin_n);
        a += eta_n * eta_n * cos2 * cos2;
        b += eta_n * eta_n * sin2 * cos2;
        let eta_next = s.amplitude(n + 1);
        if eta_next != 0.0 {
            let sin_next = (tau * ((n + 1) as f64).sqrt()).sin();
            d += eta_n * eta_next * sin_next * sin_next * cos2;
        }
    }
    Ok(AbcdCoefficients { a, b, c: 1.0 - 2.0 * b - a, d, r: s.r(), tau })
}

/// Builds `diag(A, B, B, C)` with `−D` on the anti-diagonal corners.
pub fn assemble_density(c: &AbcdCoefficients) -> Result<QubitPairDensity> {
    c.validate()?;
    let mut m = Matrix4::zeros();
    m[(MM, MM)] = c.a.into();
    m[(MP, MP)] = c.b.into();
    m[(PM, PM)] = c.b.into();
    m[(PP, PP)] = c.c.into();
    m[(MM, PP)] = (-c.d).into();
    m[(PP, MM)] = (-c.d).into();
    QubitPairDensity::new(m)
}

/// The three operators indexed by the final photon number `m` of both modes.
/// Only their `|−−⟩` input column is non-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausFamily {
    pub m: usize,
    pub ops: [Matrix4<Complex64>; 3],
}

impl KrausFamily {
    /// `Σ_μ ⟨−−|K_μ† K_μ|−−⟩` for this photon index.
    pub fn ground_weight(&self) -> f64 {
        self.ops.iter().map(|k| (k.adjoint() * k)[(MM, MM)].re).sum()
    }

    /// `Σ_μ K_μ ρ K_μ†`.
    pub fn apply(&self, rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
        self.ops.iter().fold(Matrix4::zeros(), |acc, k| acc + k * rho * k.adjoint())
    }
}

/// Operators for photon index `m`; global `−i` phases are dropped.
pub fn kraus_family(s: &SqueezedSpectrum, tau: f64, m: usize) -> Result<KrausFamily> {
    check_tau(tau)?;
    if m > s.n_max() {
        return Err(Error::OutOfRange { index: m, max: s.n_max() });
    }
    let (sin_m, cos_m) = (tau * (m as f64).sqrt()).sin_cos();
    let sin_next = (tau * ((m + 1) as f64).sqrt()).sin();
    let eta_m = s.amplitude(m);
    let eta_next = s.amplitude(m + 1);

    let mut k1 = Matrix4::zeros();
    k1[(MM, MM)] = (eta_m * cos_m * cos_m).into();
    k1[(PP, MM)] = (-eta_next * sin_next * sin_next).into();
    let mut k2 = Matrix4::zeros();
    k2[(MP, MM)] = (eta_m * cos_m * sin_m).into();
    let mut k3 = Matrix4::zeros();
    k3[(PM, MM)] = (eta_m * cos_m * sin_m).into();
    Ok(KrausFamily { m, ops: [k1, k2, k3] })
}

/// `Σ_m Σ_μ K_μᵐ |−−⟩⟨−−| K_μᵐ†`, the operator-sum route to the same state
/// [`assemble_density`] builds from the series.
pub fn evolve_from_ground(s: &SqueezedSpectrum, tau: f64) -> Result<QubitPairDensity> {
    check_tau(tau)?;
    let ground = QubitPairDensity::basis_state(MM).into_matrix();
    let mut rho = Matrix4::zeros();
    for m in 0..=s.n_max() {
        rho += kraus_family(s, tau, m)?.apply(&ground);
    }
    QubitPairDensity::new(rho)
}
