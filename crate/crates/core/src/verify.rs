//! End-to-end checks behind the `verify` command and the acceptance suite.
//!
//! Reference values and tolerances are fixed here and never tuned to
//! make a check pass.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{oscillator_frequency, rabi_frequency, tau_to_seconds, DerivedParams, BOLTZMANN};
use crate::density::{max_abs_diff, QubitPairDensity, HERMITIAN_TOL, PSD_TOL, TRACE_TOL};
use crate::dynamics::{coefficients, evolve_from_ground};
use crate::error::{Error, Result};
use crate::experiments::{
    averaged_with_convergence, find_peak, ground_point, local_maxima, preparation_scan, sweep, sweep_ground, Axis,
    Measure, SweepResult, SweepSpec,
};
use crate::measures::{eof, linearized_entropy, npt_negativity, purified_state, teleport_useful, EntanglementReport};
use crate::oracle::{HilbertOracle, ProductPreparation};
use crate::report::sweep_csv;
use crate::spectrum::{SqueezedSpectrum, DEFAULT_EPSILON_TAIL};

pub const PEAK_VALUE: f64 = 0.87;
pub const PEAK_VALUE_TOL: f64 = 0.02;
pub const PEAK_R: f64 = 0.86;
pub const PEAK_TAU: f64 = 1.5 * PI;
pub const PEAK_LOCATION_TOL: f64 = 0.05;
pub const ORACLE_TOL: f64 = 1e-8;
pub const STRUCTURE_TOL: f64 = 1e-10;
pub const PURIFIED_SL_MAX: f64 = 0.02;
pub const AVERAGED_PEAK: f64 = 0.4;
pub const AVERAGED_PEAK_TOL: f64 = 0.05;
pub const AVERAGE_GRID: usize = 64;
pub const QUADRATURE_TOL: f64 = 1e-3;
pub const EXCITED_BUMP_R: f64 = 0.6;
pub const EXCITED_BUMP_TAU: f64 = 1.7;
pub const EARLY_TAU: f64 = 0.1;
pub const OMEGA_NOMINAL: f64 = 1e10;
pub const RABI_BAND: (f64, f64) = (1e8, 3e8);
pub const PEAK_TIME_BAND_NS: (f64, f64) = (15.0, 50.0);
pub const EOF_AT_PEAK: f64 = 0.82;
pub const EOF_AT_PEAK_TOL: f64 = 0.02;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_result(id: &str, name: &str, r: Result<(bool, String)>) -> Self {
        let (passed, detail) = match r {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        Self { id: id.into(), name: name.into(), passed, detail }
    }

    pub fn line(&self) -> String {
        format!("[{}] {:<4} {:<28} {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub epsilon_tail: f64,
    /// Resolution of the `|+,+⟩` region scan.
    pub excited_grid: usize,
    /// Oracle-equivalence grid size per axis.
    pub oracle_grid: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { epsilon_tail: DEFAULT_EPSILON_TAIL, excited_grid: 20, oracle_grid: 20 }
    }
}

/// Runs the checks, sharing the expensive reproduction sweep.
pub struct Verifier {
    cfg: VerifyConfig,
    reproduction: OnceLock<std::result::Result<SweepResult, String>>,
}

fn close(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn validity_defects(rho: &QubitPairDensity) -> (f64, f64, f64) {
    (rho.hermiticity_defect(), (rho.trace() - 1.0).abs(), -rho.eigenvalues()[0])
}

impl Verifier {
    pub fn new(cfg: VerifyConfig) -> Self {
        Self { cfg, reproduction: OnceLock::new() }
    }

    fn spectrum(&self, r: f64) -> Result<SqueezedSpectrum> {
        SqueezedSpectrum::build(r, self.cfg.epsilon_tail)
    }

    fn reproduction(&self) -> Result<&SweepResult> {
        self.reproduction
            .get_or_init(|| {
                let mut spec = SweepSpec::reproduction();
                spec.epsilon_tail = self.cfg.epsilon_tail;
                sweep_ground(&spec).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| Error::Validation(e.clone()))
    }

    pub fn run_all(&self) -> Vec<CheckOutcome> {
        vec![
            self.peak_entanglement(),
            self.oracle_equivalence(),
            self.kraus_series_agreement(),
            self.state_validity(),
            self.structural_identity(),
            self.near_purity(),
            self.averaged_peak(),
            self.preparation_scan(),
            self.early_time_and_revivals(),
            self.circuit_mapping(),
            self.determinism(),
            self.eof_at_peak(),
        ]
    }

    /// Criterion 1.
    pub fn peak_entanglement(&self) -> CheckOutcome {
        let r = (|| {
            let peak = find_peak(self.reproduction()?, "e_npt")?;
            let ok = close(peak.value, PEAK_VALUE, PEAK_VALUE_TOL)
                && close(peak.r, PEAK_R, PEAK_LOCATION_TOL)
                && close(peak.tau, PEAK_TAU, PEAK_LOCATION_TOL);
            Ok((
                ok,
                format!(
                    "E_NPT={:.4} at r={:.4}, tau={:.4} (want {PEAK_VALUE}±{PEAK_VALUE_TOL} at r={PEAK_R}±{PEAK_LOCATION_TOL}, tau={:.4}±{PEAK_LOCATION_TOL})",
                    peak.value, peak.r, peak.tau, PEAK_TAU
                ),
            ))
        })();
        CheckOutcome::from_result("1", "peak entanglement", r)
    }

    /// Criterion 2.
    pub fn oracle_equivalence(&self) -> CheckOutcome {
        let n = self.cfg.oracle_grid;
        let r = (|| {
            let rs = Axis::new(0.0, 2.0, n).values();
            let taus = Axis::new(0.0, 3.0 * PI, n).values();
            let worst = rs
                .par_iter()
                .map(|&r| -> Result<f64> {
                    let s = self.spectrum(r)?;
                    let oracle = HilbertOracle::new(&s)?;
                    let mut worst: f64 = 0.0;
                    for &tau in &taus {
                        let (_, closed) = ground_point(&s, tau)?;
                        let brute = oracle.evolve(&ProductPreparation::ground(), tau)?;
                        worst = worst.max(max_abs_diff(&closed, &brute));
                    }
                    Ok(worst)
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok((worst <= ORACLE_TOL, format!("max |Δρ| = {worst:.3e} on {n}x{n} grid (tol {ORACLE_TOL:e})")))
        })();
        CheckOutcome::from_result("2", "oracle equivalence", r)
    }

    /// Operator-sum route vs series route for the ground preparation.
    pub fn kraus_series_agreement(&self) -> CheckOutcome {
        let r = (|| {
            let rs = Axis::new(0.0, 2.0, 20).values();
            let taus = Axis::new(0.0, 3.0 * PI, 20).values();
            let mut worst: f64 = 0.0;
            for &r in &rs {
                let s = self.spectrum(r)?;
                for &tau in &taus {
                    let (_, series) = ground_point(&s, tau)?;
                    worst = worst.max(max_abs_diff(&series, &evolve_from_ground(&s, tau)?));
                }
            }
            Ok((worst <= 1e-12, format!("max |Δρ| = {worst:.3e} (tol 1e-12)")))
        })();
        CheckOutcome::from_result("2b", "kraus vs series", r)
    }

    /// Criterion 3: validity over the reproduction sweep, an oracle sweep,
    /// a preparation scan and an averaged state.
    pub fn state_validity(&self) -> CheckOutcome {
        let r = (|| {
            let mut worst = (0.0f64, 0.0f64, f64::NEG_INFINITY);
            let mut count = 0usize;
            let mut absorb = |rho: &QubitPairDensity| {
                let (h, t, p) = validity_defects(rho);
                worst = (worst.0.max(h), worst.1.max(t), worst.2.max(p));
                count += 1;
            };
            for p in &self.reproduction()?.points {
                let c = p.coefficients.expect("ground sweep carries coefficients");
                absorb(&crate::dynamics::assemble_density(&c)?);
            }
            for (r, prep) in [(0.6, ProductPreparation::excited()), (1.2, ProductPreparation::new(0.3, 2.0, 0.5, 1.0)?)]
            {
                let oracle = HilbertOracle::new(&self.spectrum(r)?)?;
                for tau in Axis::new(0.0, 3.0 * PI, 40).values() {
                    absorb(&oracle.evolve(&prep, tau)?);
                }
            }
            absorb(&averaged_with_convergence(PEAK_R, PEAK_TAU, 16)?.rho);
            let ok = worst.0 <= HERMITIAN_TOL && worst.1 <= TRACE_TOL && worst.2 <= PSD_TOL;
            Ok((
                ok,
                format!(
                    "{count} states: max herm defect {:.1e}, max |tr-1| {:.1e}, most negative eigenvalue {:.1e}",
                    worst.0, worst.1, -worst.2
                ),
            ))
        })();
        CheckOutcome::from_result("3", "state validity", r)
    }

    /// Criterion 4.
    pub fn structural_identity(&self) -> CheckOutcome {
        let r = (|| {
            let worst = self
                .reproduction()?
                .points
                .iter()
                .map(|p| (p.report.concurrence - p.report.e_npt.max(0.0)).abs())
                .fold(0.0, f64::max);
            Ok((worst <= STRUCTURE_TOL, format!("max |C − max(0, E_NPT)| = {worst:.3e} (tol {STRUCTURE_TOL:e})")))
        })();
        CheckOutcome::from_result("4", "concurrence = max(0,E_NPT)", r)
    }

    /// Criterion 5.
    pub fn near_purity(&self) -> CheckOutcome {
        let r = (|| {
            let s = self.spectrum(PEAK_R)?;
            let c = coefficients(&s, PEAK_TAU)?;
            let s_pure = linearized_entropy(&purified_state(&c)?)?;
            let (_, full) = ground_point(&s, PEAK_TAU)?;
            let s_full = linearized_entropy(&full)?;
            let useful = teleport_useful(s_pure, 2);
            Ok((
                s_pure <= PURIFIED_SL_MAX && useful,
                format!(
                    "S_l(B dropped)={s_pure:.4} (max {PURIFIED_SL_MAX}), teleport_useful={useful}; full-state S_l={s_full:.4} (reported only)"
                ),
            ))
        })();
        CheckOutcome::from_result("5", "near purity at peak", r)
    }

    /// Criterion 6.
    pub fn averaged_peak(&self) -> CheckOutcome {
        let r = (|| {
            let avg = averaged_with_convergence(PEAK_R, PEAK_TAU, AVERAGE_GRID)?;
            let ok = close(avg.e_npt, AVERAGED_PEAK, AVERAGED_PEAK_TOL) && avg.convergence < QUADRATURE_TOL;
            Ok((
                ok,
                format!(
                    "averaged E_NPT={:.4} (want {AVERAGED_PEAK}±{AVERAGED_PEAK_TOL}), |Δ| under grid doubling {:.1e} (tol {QUADRATURE_TOL:e})",
                    avg.e_npt, avg.convergence
                ),
            ))
        })();
        CheckOutcome::from_result("6", "averaged-preparation peak", r)
    }

    /// Criterion 7.
    pub fn preparation_scan(&self) -> CheckOutcome {
        let r = (|| {
            let rows = preparation_scan(PEAK_R, PEAK_TAU, 33, 33)?;
            let max = rows.iter().map(|row| row.e_npt).fold(f64::NEG_INFINITY, f64::max);
            // Sign-equivalent preparations tie; the first in scan order wins.
            let arg = rows.iter().find(|row| row.e_npt >= max - 1e-12).expect("scan is non-empty");
            let at_origin = arg.alpha == 0.0 && arg.beta == 0.0;
            let value_ok = close(max, PEAK_VALUE, PEAK_VALUE_TOL);

            let s = SqueezedSpectrum::build(EXCITED_BUMP_R, self.cfg.epsilon_tail)?;
            let (bump, _) =
                npt_negativity(&HilbertOracle::new(&s)?.evolve(&ProductPreparation::excited(), EXCITED_BUMP_TAU)?)?;

            let n = self.cfg.excited_grid;
            let spec = SweepSpec {
                preparation: ProductPreparation::excited(),
                epsilon_tail: self.cfg.epsilon_tail,
                ..SweepSpec::ground(Axis::new(0.0, 2.0, n), Axis::new(0.0, 3.0 * PI, n))
            };
            let region = sweep(&spec)?;
            let separable = region.points.iter().filter(|p| p.report.e_npt <= 0.0).count();
            let fraction = separable as f64 / region.points.len() as f64;

            let ok = at_origin && value_ok && bump > 0.0 && fraction > 0.5;
            Ok((
                ok,
                format!(
                    "max {max:.4} at (α,β)=({:.3},{:.3}) (want 0,0 and {PEAK_VALUE}±{PEAK_VALUE_TOL}); |++⟩ E_NPT(0.6,1.7)={bump:.4} (want >0); |++⟩ separable fraction {fraction:.3} over r∈[0,2],τ∈[0,3π] (want >0.5)",
                    arg.alpha, arg.beta
                ),
            ))
        })();
        CheckOutcome::from_result("7", "preparation scan", r)
    }

    /// Criterion 8.
    pub fn early_time_and_revivals(&self) -> CheckOutcome {
        let r = (|| {
            let s = self.spectrum(PEAK_R)?;
            let e_of = |tau: f64| -> Result<f64> {
                let (_, rho) = ground_point(&s, tau)?;
                Ok(npt_negativity(&rho)?.0)
            };
            let early = Axis::new(0.0, EARLY_TAU, 51).values().into_iter().map(e_of).collect::<Result<Vec<_>>>()?;
            let early_max = early.iter().copied().fold(f64::NEG_INFINITY, f64::max);

            let slice = Axis::new(0.5, 3.0 * PI, 600).values().into_iter().map(e_of).collect::<Result<Vec<_>>>()?;
            let maxima = local_maxima(&slice);
            let revives = maxima.windows(2).any(|w| {
                let dip = slice[w[0]..=w[1]].iter().copied().fold(f64::INFINITY, f64::min);
                dip < slice[w[0]] && dip < slice[w[1]]
            });
            Ok((
                early_max <= 0.0 && revives,
                format!(
                    "max E_NPT for τ≤{EARLY_TAU}: {early_max:.3e} (want ≤0); {} local maxima on τ∈[0.5,3π]",
                    maxima.len()
                ),
            ))
        })();
        CheckOutcome::from_result("8", "early separability, revivals", r)
    }

    /// Criterion 9.
    pub fn circuit_mapping(&self) -> CheckOutcome {
        let r = (|| {
            let omega = oscillator_frequency(1e-8, 1e-12);
            let omega_ok = close(omega / OMEGA_NOMINAL, 1.0, 1e-12);
            let nominal = DerivedParams::from_effective(2e-15, 1e-11, 1e-12, 1e-8, BOLTZMANN * 0.1, 0.0)?;
            let rabi = rabi_frequency(nominal.omega, nominal.cap_c1, nominal.cap_c2);
            let rabi_ok = (RABI_BAND.0..=RABI_BAND.1).contains(&rabi);
            let ns = |w: f64| {
                let mut d = nominal;
                d.rabi_omega = w;
                d.t_per_tau = 1.0 / w;
                tau_to_seconds(PEAK_TAU, &d) * 1e9
            };
            let times = [ns(RABI_BAND.0), ns(rabi), ns(RABI_BAND.1)];
            let times_ok = times.iter().all(|t| (PEAK_TIME_BAND_NS.0..=PEAK_TIME_BAND_NS.1).contains(t));
            Ok((
                omega_ok && rabi_ok && times_ok,
                format!(
                    "ω={omega:.6e} rad/s, Ω={rabi:.4e} rad/s, t(3π/2) = {:.1}/{:.1}/{:.1} ns at Ω=1e8/nominal/3e8",
                    times[0], times[1], times[2]
                ),
            ))
        })();
        CheckOutcome::from_result("9", "circuit mapping", r)
    }

    /// Criterion 10: the same sweep on one and on four worker threads.
    pub fn determinism(&self) -> CheckOutcome {
        let r = (|| {
            let mut spec = SweepSpec::ground(Axis::new(0.0, 2.0, 24), Axis::new(0.0, 3.0 * PI, 24));
            spec.epsilon_tail = self.cfg.epsilon_tail;
            let run = |threads: usize| -> Result<String> {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| Error::Validation(e.to_string()))?;
                pool.install(|| sweep_ground(&spec)).map(|r| sweep_csv(&r))
            };
            let a = run(1)?;
            let b = run(4)?;
            let c = run(1)?;
            Ok((a == b && a == c, format!("{} bytes, identical across 3 runs: {}", a.len(), a == b && a == c)))
        })();
        CheckOutcome::from_result("10", "determinism", r)
    }

    /// EoF regression at the located peak.
    pub fn eof_at_peak(&self) -> CheckOutcome {
        let r = (|| {
            let res = self.reproduction()?;
            let peak = find_peak(res, Measure::ENpt.name())?;
            let point =
                res.points.iter().find(|p| p.r == peak.r && p.tau == peak.tau).expect("peak comes from the sweep");
            let value = point.report.eof;
            debug_assert_eq!(value, eof(point.report.concurrence)?);
            Ok((
                close(value, EOF_AT_PEAK, EOF_AT_PEAK_TOL),
                format!("EoF={value:.4} ebits (want {EOF_AT_PEAK}±{EOF_AT_PEAK_TOL})"),
            ))
        })();
        CheckOutcome::from_result("eof", "EoF at peak", r)
    }
}

/// Convenience for callers that only want the report at one point.
pub fn ground_report(r: f64, tau: f64, epsilon_tail: f64) -> Result<EntanglementReport> {
    let s = SqueezedSpectrum::build(r, epsilon_tail)?;
    let (_, rho) = ground_point(&s, tau)?;
    EntanglementReport::of(&rho)
}
