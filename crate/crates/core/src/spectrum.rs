//! Truncated photon-number ladder of the two-mode squeezed vacuum
//! `Σ η_n |n,n⟩`, with `η_n = tanh(r)^n / cosh(r)`.

use crate::error::{Error, Result};

/// Default bound on the discarded photon-number probability.
pub const DEFAULT_EPSILON_TAIL: f64 = 1e-12;

/// Largest truncation index we are willing to allocate.
pub const MAX_N_MAX: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezedSpectrum {
    r: f64,
    n_max: usize,
    eta: Vec<f64>,
    epsilon_tail: f64,
}

impl SqueezedSpectrum {
    /// Builds the ladder up to the smallest `n_max` whose exact geometric
    /// tail `tanh(r)^(2(n_max+1))` is below `epsilon_tail`.
    pub fn build(r: f64, epsilon_tail: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::Domain(format!("squeezing parameter must be >= 0, got {r}")));
        }
        if !(epsilon_tail > 0.0 && epsilon_tail < 1.0) {
            return Err(Error::Domain(format!("epsilon_tail must lie in (0, 1), got {epsilon_tail}")));
        }
        let t = r.tanh();
        let t2 = t * t;
        let mut n_max = 0usize;
        let mut tail = t2;
        while tail >= epsilon_tail {
            n_max += 1;
            if n_max > MAX_N_MAX {
                return Err(Error::Domain(format!(
                    "r={r} needs more than {MAX_N_MAX} photon levels for epsilon_tail={epsilon_tail}"
                )));
            }
            tail *= t2;
        }
        let norm = 1.0 / r.cosh();
        let eta = (0..=n_max).map(|n| t.powi(n as i32) * norm).collect();
        Ok(Self { r, n_max, eta, epsilon_tail })
    }

    /// Spectrum with explicit amplitudes, used for diagnostic Fock inputs
    /// (e.g. a field forced into `|1,1⟩`). `r` is recorded as NaN.
    pub fn from_amplitudes(eta: Vec<f64>) -> Result<Self> {
        if eta.is_empty() {
            return Err(Error::Domain("amplitude list is empty".into()));
        }
        let norm: f64 = eta.iter().map(|e| e * e).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("amplitudes must be normalised, Σ η² = {norm}")));
        }
        Ok(Self { r: f64::NAN, n_max: eta.len() - 1, eta, epsilon_tail: 1e-12 })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn epsilon_tail(&self) -> f64 {
        self.epsilon_tail
    }

    /// `η_n`, with the truncated levels above `n_max` reading as zero.
    pub fn amplitude(&self, n: usize) -> f64 {
        self.eta.get(n).copied().unwrap_or(0.0)
    }

    /// `χ_nm = η_n η_m`.
    pub fn chi(&self, n: usize, m: usize) -> Result<f64> {
        let max = self.n_max;
        if n > max {
            return Err(Error::OutOfRange { index: n, max });
        }
        if m > max {
            return Err(Error::OutOfRange { index: m, max });
        }
        Ok(self.eta[n] * self.eta[m])
    }

    /// Exact probability weight above the cutoff.
    pub fn truncation_error(&self) -> f64 {
        if self.r.is_nan() {
            return 0.0;
        }
        let t2 = self.r.tanh().powi(2);
        t2.powi(self.n_max as i32 + 1)
    }

    /// `Σ η_n²` over the stored levels.
    pub fn norm_sqr(&self) -> f64 {
        self.eta.iter().map(|e| e * e).sum()
    }
}
