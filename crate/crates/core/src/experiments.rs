//! Parameter sweeps and aggregations over `(r, τ)` and over preparations.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::density::QubitPairDensity;
use crate::dynamics::{assemble_density, coefficients, AbcdCoefficients};
use crate::error::{Error, Result};
use crate::measures::{npt_negativity, EntanglementReport};
use crate::oracle::{HilbertOracle, ProductPreparation};
use crate::spectrum::{SqueezedSpectrum, DEFAULT_EPSILON_TAIL};

/// Smallest preparation-average grid accepted.
pub const MIN_AVERAGE_GRID: usize = 16;

/// One sweep axis: either a single point (`min == max`, one step) or an
/// inclusive uniform range with at least two steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn point(v: f64) -> Self {
        Self { min: v, max: v, steps: 1 }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Validation(format!("{name} range must be finite")));
        }
        if self.min < 0.0 {
            return Err(Error::Validation(format!("{name} range must start at >= 0")));
        }
        let single = self.steps == 1 && self.min == self.max;
        let range = self.steps >= 2 && self.min < self.max;
        if !(single || range) {
            return Err(Error::Validation(format!(
                "{name} axis {}:{}:{} is degenerate (need min < max with >= 2 steps, or a single point)",
                self.min, self.max, self.steps
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.max } else { self.min + (self.max - self.min) * (i as f64) / last })
            .collect()
    }
}

/// Quantities a sweep can be ranked by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    ENpt,
    Concurrence,
    Eof,
    SLinear,
    Purity,
}

impl Measure {
    pub const ALL: [Measure; 5] =
        [Measure::ENpt, Measure::Concurrence, Measure::Eof, Measure::SLinear, Measure::Purity];

    pub fn name(self) -> &'static str {
        match self {
            Measure::ENpt => "e_npt",
            Measure::Concurrence => "concurrence",
            Measure::Eof => "eof",
            Measure::SLinear => "s_linear",
            Measure::Purity => "purity",
        }
    }

    pub fn of(self, report: &EntanglementReport) -> f64 {
        match self {
            Measure::ENpt => report.e_npt,
            Measure::Concurrence => report.concurrence,
            Measure::Eof => report.eof,
            Measure::SLinear => report.s_linear,
            Measure::Purity => report.purity,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown measure `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub r: Axis,
    pub tau: Axis,
    pub preparation: ProductPreparation,
    pub epsilon_tail: f64,
    pub measures: Vec<Measure>,
}

impl SweepSpec {
    /// Ground preparation with every measure.
    pub fn ground(r: Axis, tau: Axis) -> Self {
        Self {
            r,
            tau,
            preparation: ProductPreparation::ground(),
            epsilon_tail: DEFAULT_EPSILON_TAIL,
            measures: Measure::ALL.to_vec(),
        }
    }

    /// 200×200 over `r ∈ [0, 2]`, `τ ∈ [0, 3π]`.
    pub fn reproduction() -> Self {
        Self::ground(Axis::new(0.0, 2.0, 200), Axis::new(0.0, 3.0 * PI, 200))
    }

    pub fn validate(&self) -> Result<()> {
        self.r.validate("r")?;
        self.tau.validate("tau")?;
        self.preparation.validate()?;
        if !(self.epsilon_tail > 0.0 && self.epsilon_tail < 1.0) {
            return Err(Error::Validation(format!("epsilon_tail {} outside (0, 1)", self.epsilon_tail)));
        }
        if self.measures.is_empty() {
            return Err(Error::Validation("no measures requested".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("sweep spec serialises");
        Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub r: f64,
    pub tau: f64,
    pub report: EntanglementReport,
    /// Present for ground-preparation sweeps.
    pub coefficients: Option<AbcdCoefficients>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub spec_hash: String,
    pub code_version: String,
    pub method: String,
    pub epsilon_tail: f64,
    /// Largest truncation index used anywhere in the sweep.
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub r_axis: Vec<f64>,
    pub tau_axis: Vec<f64>,
    /// Row-major, `r` outer.
    pub points: Vec<SweepPoint>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn at(&self, r_index: usize, tau_index: usize) -> &SweepPoint {
        &self.points[r_index * self.tau_axis.len() + tau_index]
    }

    /// Values of `measure` along τ for one `r` row.
    pub fn row(&self, r_index: usize, measure: Measure) -> Vec<f64> {
        let width = self.tau_axis.len();
        self.points[r_index * width..(r_index + 1) * width].iter().map(|p| measure.of(&p.report)).collect()
    }
}

/// Closed-form state for the ground preparation.
pub fn ground_point(s: &SqueezedSpectrum, tau: f64) -> Result<(AbcdCoefficients, QubitPairDensity)> {
    let c = coefficients(s, tau)?;
    let rho = assemble_density(&c)?;
    Ok((c, rho))
}

/// Ground-preparation sweep through the closed form.
pub fn sweep_ground(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    if !spec.preparation.is_ground() {
        return Err(Error::Validation("sweep_ground needs the |−,−⟩ preparation".into()));
    }
    let taus = spec.tau.values();
    let rows: Vec<(usize, Vec<SweepPoint>)> = spec
        .r
        .values()
        .into_par_iter()
        .map(|r| {
            let s = SqueezedSpectrum::build(r, spec.epsilon_tail)?;
            let row = taus
                .iter()
                .map(|&tau| {
                    let (c, rho) = ground_point(&s, tau)?;
                    Ok(SweepPoint { r, tau, report: EntanglementReport::of(&rho)?, coefficients: Some(c) })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((s.n_max(), row))
        })
        .collect::<Result<_>>()?;
    Ok(finish(spec, taus, rows, "closed_form"))
}

/// Sweep for any preparation; non-ground preparations go through the oracle.
pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.preparation.is_ground() {
        return sweep_ground(spec);
    }
    spec.validate()?;
    let taus = spec.tau.values();
    let rows: Vec<(usize, Vec<SweepPoint>)> = spec
        .r
        .values()
        .into_par_iter()
        .map(|r| {
            let s = SqueezedSpectrum::build(r, spec.epsilon_tail)?;
            let oracle = HilbertOracle::new(&s)?;
            let row = taus
                .iter()
                .map(|&tau| {
                    let rho = oracle.evolve(&spec.preparation, tau)?;
                    Ok(SweepPoint { r, tau, report: EntanglementReport::of(&rho)?, coefficients: None })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((s.n_max(), row))
        })
        .collect::<Result<_>>()?;
    Ok(finish(spec, taus, rows, "oracle"))
}

fn finish(spec: &SweepSpec, taus: Vec<f64>, rows: Vec<(usize, Vec<SweepPoint>)>, method: &str) -> SweepResult {
    let n_max = rows.iter().map(|(n, _)| *n).max().unwrap_or(0);
    SweepResult {
        r_axis: spec.r.values(),
        tau_axis: taus,
        points: rows.into_iter().flat_map(|(_, row)| row).collect(),
        provenance: Provenance {
            spec_hash: spec.hash(),
            code_version: crate::CODE_VERSION.to_string(),
            method: method.to_string(),
            epsilon_tail: spec.epsilon_tail,
            n_max,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub r: f64,
    pub tau: f64,
    pub value: f64,
}

/// Grid argmax; ties go to the smallest `r`, then the smallest `τ`.
pub fn find_peak(result: &SweepResult, measure: &str) -> Result<Peak> {
    let measure: Measure = measure.parse()?;
    let mut best: Option<Peak> = None;
    for p in &result.points {
        let value = measure.of(&p.report);
        if best.is_none_or(|b| value > b.value) {
            best = Some(Peak { r: p.r, tau: p.tau, value });
        }
    }
    best.ok_or_else(|| Error::Validation("sweep result is empty".into()))
}

fn midpoints(grid_n: usize) -> Vec<f64> {
    let h = 2.0 * PI / grid_n as f64;
    (0..grid_n).map(|i| (i as f64 + 0.5) * h).collect()
}

/// Midpoint-rule average over `α, β ∈ [0, 2π]` (φ = ψ = 0) of the
/// oracle-evolved state.
pub fn averaged_density(r: f64, tau: f64, grid_n: usize) -> Result<QubitPairDensity> {
    let s = SqueezedSpectrum::build(r, DEFAULT_EPSILON_TAIL)?;
    averaged_density_for(&HilbertOracle::new(&s)?, tau, grid_n)
}

pub fn averaged_density_for(oracle: &HilbertOracle, tau: f64, grid_n: usize) -> Result<QubitPairDensity> {
    if grid_n < MIN_AVERAGE_GRID {
        return Err(Error::Validation(format!("grid_n must be at least {MIN_AVERAGE_GRID}, got {grid_n}")));
    }
    let table = oracle.slice(tau)?.gram_table();
    let nodes = midpoints(grid_n);
    let rows: Vec<Matrix4<Complex64>> = nodes
        .par_iter()
        .map(|&alpha| {
            let mut acc = Matrix4::zeros();
            for &beta in &nodes {
                let prep = ProductPreparation::new(alpha, beta, 0.0, 0.0)?;
                acc += table.reduce(&prep)?.matrix();
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let weight = Complex64::new(1.0 / (grid_n * grid_n) as f64, 0.0);
    let total = rows.into_iter().fold(Matrix4::zeros(), |acc, m| acc + m) * weight;
    QubitPairDensity::new(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AveragedState {
    pub rho: QubitPairDensity,
    pub e_npt: f64,
    /// `|E_NPT(grid_n) − E_NPT(2·grid_n)|`.
    pub convergence: f64,
}

pub fn averaged_with_convergence(r: f64, tau: f64, grid_n: usize) -> Result<AveragedState> {
    let s = SqueezedSpectrum::build(r, DEFAULT_EPSILON_TAIL)?;
    let oracle = HilbertOracle::new(&s)?;
    let rho = averaged_density_for(&oracle, tau, grid_n)?;
    let fine = averaged_density_for(&oracle, tau, 2 * grid_n)?;
    let (e_npt, _) = npt_negativity(&rho)?;
    let (e_fine, _) = npt_negativity(&fine)?;
    Ok(AveragedState { rho, e_npt, convergence: (e_npt - e_fine).abs() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepScanRow {
    pub alpha: f64,
    pub beta: f64,
    pub e_npt: f64,
}

/// `E_NPT` over an inclusive `α × β` grid on `[0, 2π]²`, φ = ψ = 0,
/// row-major with `α` outer.
pub fn preparation_scan(r: f64, tau: f64, alpha_steps: usize, beta_steps: usize) -> Result<Vec<PrepScanRow>> {
    let s = SqueezedSpectrum::build(r, DEFAULT_EPSILON_TAIL)?;
    preparation_scan_for(&HilbertOracle::new(&s)?, tau, alpha_steps, beta_steps)
}

pub fn preparation_scan_for(
    oracle: &HilbertOracle,
    tau: f64,
    alpha_steps: usize,
    beta_steps: usize,
) -> Result<Vec<PrepScanRow>> {
    let alphas = Axis::new(0.0, 2.0 * PI, alpha_steps);
    let betas = Axis::new(0.0, 2.0 * PI, beta_steps);
    alphas.validate("alpha")?;
    betas.validate("beta")?;
    let table = oracle.slice(tau)?.gram_table();
    let betas = betas.values();
    let rows: Vec<Vec<PrepScanRow>> = alphas
        .values()
        .into_par_iter()
        .map(|alpha| {
            betas
                .iter()
                .map(|&beta| {
                    let prep = ProductPreparation::new(alpha, beta, 0.0, 0.0)?;
                    let (e_npt, _) = npt_negativity(&table.reduce(&prep)?)?;
                    Ok(PrepScanRow { alpha, beta, e_npt })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Indices of strict interior local maxima.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1)).filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1]).collect()
}
