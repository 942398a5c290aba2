//! Python bindings. The extension module is importable as `squid_transfer`.

use std::path::PathBuf;

use nalgebra::Matrix4;
use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use squid_transfer as core;
use squid_transfer::experiments::{self, Axis, Measure, SweepSpec};
use squid_transfer::oracle::HilbertOracle;
use squid_transfer::verify::{Verifier, VerifyConfig};
use squid_transfer::DEFAULT_EPSILON_TAIL;

fn to_py(e: core::Error) -> PyErr {
    match e {
        core::Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait IntoPyResult<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPyResult<T> for core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(name = "SqueezedSpectrum", module = "squid_transfer", frozen)]
pub struct PySpectrum(core::SqueezedSpectrum);

#[pymethods]
impl PySpectrum {
    #[new]
    #[pyo3(signature = (r, epsilon_tail = DEFAULT_EPSILON_TAIL))]
    fn new(r: f64, epsilon_tail: f64) -> PyResult<Self> {
        core::SqueezedSpectrum::build(r, epsilon_tail).py().map(Self)
    }

    #[getter]
    fn r(&self) -> f64 {
        self.0.r()
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.0.n_max()
    }

    #[getter]
    fn eta(&self) -> Vec<f64> {
        self.0.eta().to_vec()
    }

    #[getter]
    fn epsilon_tail(&self) -> f64 {
        self.0.epsilon_tail()
    }

    fn chi(&self, n: usize, m: usize) -> PyResult<f64> {
        self.0.chi(n, m).py()
    }

    fn truncation_error(&self) -> f64 {
        self.0.truncation_error()
    }

    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    fn __repr__(&self) -> String {
        format!("SqueezedSpectrum(r={}, n_max={})", self.0.r(), self.0.n_max())
    }
}

#[pyclass(name = "Coefficients", module = "squid_transfer", frozen, get_all)]
pub struct PyCoefficients {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    r: f64,
    tau: f64,
}

#[pymethods]
impl PyCoefficients {
    fn __repr__(&self) -> String {
        format!("Coefficients(a={}, b={}, c={}, d={})", self.a, self.b, self.c, self.d)
    }
}

impl From<core::AbcdCoefficients> for PyCoefficients {
    fn from(c: core::AbcdCoefficients) -> Self {
        Self { a: c.a, b: c.b, c: c.c, d: c.d, r: c.r, tau: c.tau }
    }
}

#[pyclass(name = "Report", module = "squid_transfer", frozen, get_all)]
pub struct PyReport {
    e_npt: f64,
    lambda_min: f64,
    concurrence: f64,
    eof: f64,
    s_linear: f64,
    purity: f64,
    teleport_useful: bool,
}

#[pymethods]
impl PyReport {
    fn as_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("e_npt", self.e_npt)?;
        d.set_item("lambda_min", self.lambda_min)?;
        d.set_item("concurrence", self.concurrence)?;
        d.set_item("eof", self.eof)?;
        d.set_item("s_linear", self.s_linear)?;
        d.set_item("purity", self.purity)?;
        d.set_item("teleport_useful", self.teleport_useful)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(e_npt={}, concurrence={}, eof={}, s_linear={})",
            self.e_npt, self.concurrence, self.eof, self.s_linear
        )
    }
}

impl From<core::EntanglementReport> for PyReport {
    fn from(r: core::EntanglementReport) -> Self {
        Self {
            e_npt: r.e_npt,
            lambda_min: r.lambda_min,
            concurrence: r.concurrence,
            eof: r.eof,
            s_linear: r.s_linear,
            purity: r.purity,
            teleport_useful: r.teleport_useful,
        }
    }
}

/// Two-qubit density matrix in the basis `|−−⟩, |−+⟩, |+−⟩, |++⟩`.
#[pyclass(name = "Density", module = "squid_transfer", frozen)]
pub struct PyDensity(core::QubitPairDensity);

#[pymethods]
impl PyDensity {
    /// Validates a 4×4 list of complex numbers.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(PyValueError::new_err("density matrix must be 4x4"));
        }
        let m = nalgebra_matrix(&rows);
        core::QubitPairDensity::new(m).py().map(Self)
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        (0..4).map(|i| (0..4).map(|j| self.0.get(i, j)).collect()).collect()
    }

    fn trace(&self) -> f64 {
        self.0.trace()
    }

    fn purity(&self) -> f64 {
        self.0.purity()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues().to_vec()
    }

    fn report(&self) -> PyResult<PyReport> {
        core::EntanglementReport::of(&self.0).py().map(Into::into)
    }
}

fn nalgebra_matrix(rows: &[Vec<Complex64>]) -> Matrix4<Complex64> {
    Matrix4::from_fn(|i, j| rows[i][j])
}

#[pyfunction]
#[pyo3(signature = (r, tau, epsilon_tail = DEFAULT_EPSILON_TAIL))]
fn coefficients(r: f64, tau: f64, epsilon_tail: f64) -> PyResult<PyCoefficients> {
    let s = core::SqueezedSpectrum::build(r, epsilon_tail).py()?;
    core::coefficients(&s, tau).py().map(Into::into)
}

/// Closed-form state for the `|−,−⟩` preparation.
#[pyfunction]
#[pyo3(signature = (r, tau, epsilon_tail = DEFAULT_EPSILON_TAIL))]
fn ground_state(r: f64, tau: f64, epsilon_tail: f64) -> PyResult<PyDensity> {
    let s = core::SqueezedSpectrum::build(r, epsilon_tail).py()?;
    experiments::ground_point(&s, tau).py().map(|(_, rho)| PyDensity(rho))
}

/// State from an arbitrary product preparation via the truncated-space oracle.
#[pyfunction]
#[pyo3(signature = (r, tau, alpha = 0.0, beta = 0.0, phi = 0.0, psi = 0.0, epsilon_tail = DEFAULT_EPSILON_TAIL))]
fn evolve(r: f64, tau: f64, alpha: f64, beta: f64, phi: f64, psi: f64, epsilon_tail: f64) -> PyResult<PyDensity> {
    let prep = core::ProductPreparation::new(alpha, beta, phi, psi).py()?;
    let s = core::SqueezedSpectrum::build(r, epsilon_tail).py()?;
    HilbertOracle::new(&s).and_then(|o| o.evolve(&prep, tau)).py().map(PyDensity)
}

#[pyfunction]
fn eof(concurrence: f64) -> PyResult<f64> {
    core::measures::eof(concurrence).py()
}

#[pyclass(name = "SweepResult", module = "squid_transfer", frozen)]
pub struct PySweep(core::SweepResult);

#[pymethods]
impl PySweep {
    #[getter]
    fn r_axis(&self) -> Vec<f64> {
        self.0.r_axis.clone()
    }

    #[getter]
    fn tau_axis(&self) -> Vec<f64> {
        self.0.tau_axis.clone()
    }

    #[getter]
    fn spec_hash(&self) -> String {
        self.0.provenance.spec_hash.clone()
    }

    /// `values[i][j]` at `r_axis[i]`, `tau_axis[j]`.
    fn values(&self, measure: &str) -> PyResult<Vec<Vec<f64>>> {
        let m: Measure = measure.parse().py()?;
        Ok((0..self.0.r_axis.len()).map(|i| self.0.row(i, m)).collect())
    }

    /// `(r, tau, value)` of the grid maximum.
    #[pyo3(signature = (measure = "e_npt"))]
    fn peak(&self, measure: &str) -> PyResult<(f64, f64, f64)> {
        let p = experiments::find_peak(&self.0, measure).py()?;
        Ok((p.r, p.tau, p.value))
    }

    fn to_csv(&self) -> String {
        core::report::sweep_csv(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.points.len()
    }
}

/// Grid sweep; ranges are `(min, max, steps)` and inclusive.
#[pyfunction]
#[pyo3(signature = (r_range, tau_range, alpha = 0.0, beta = 0.0, epsilon_tail = DEFAULT_EPSILON_TAIL))]
fn sweep(
    py: Python<'_>,
    r_range: (f64, f64, usize),
    tau_range: (f64, f64, usize),
    alpha: f64,
    beta: f64,
    epsilon_tail: f64,
) -> PyResult<PySweep> {
    let spec = SweepSpec {
        preparation: core::ProductPreparation::new(alpha, beta, 0.0, 0.0).py()?,
        epsilon_tail,
        ..SweepSpec::ground(
            Axis::new(r_range.0, r_range.1, r_range.2),
            Axis::new(tau_range.0, tau_range.1, tau_range.2),
        )
    };
    py.detach(|| experiments::sweep(&spec)).py().map(PySweep)
}

/// `(state, e_npt, convergence)` averaged over all product preparations.
#[pyfunction]
#[pyo3(signature = (r, tau, grid_n = 64))]
fn average(py: Python<'_>, r: f64, tau: f64, grid_n: usize) -> PyResult<(PyDensity, f64, f64)> {
    if grid_n < experiments::MIN_AVERAGE_GRID {
        return Err(PyValueError::new_err(format!("grid_n must be at least {}", experiments::MIN_AVERAGE_GRID)));
    }
    let avg = py.detach(|| experiments::averaged_with_convergence(r, tau, grid_n)).py()?;
    Ok((PyDensity(avg.rho), avg.e_npt, avg.convergence))
}

/// `[(alpha, beta, e_npt), ...]` over an inclusive grid on `[0, 2π]²`.
#[pyfunction]
#[pyo3(signature = (r, tau, grid_n = 33))]
fn preparation_scan(py: Python<'_>, r: f64, tau: f64, grid_n: usize) -> PyResult<Vec<(f64, f64, f64)>> {
    let rows = py.detach(|| experiments::preparation_scan(r, tau, grid_n, grid_n)).py()?;
    Ok(rows.into_iter().map(|row| (row.alpha, row.beta, row.e_npt)).collect())
}

#[pyclass(name = "CircuitParams", module = "squid_transfer", get_all, set_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCircuit {
    c_j0: f64,
    c_g: f64,
    c_c: f64,
    c_0: f64,
    l_o: f64,
    e_j0: f64,
    phi_ext: f64,
    v_g: f64,
}

impl From<core::CircuitParams> for PyCircuit {
    fn from(p: core::CircuitParams) -> Self {
        Self {
            c_j0: p.c_j0,
            c_g: p.c_g,
            c_c: p.c_c,
            c_0: p.c_0,
            l_o: p.l_o,
            e_j0: p.e_j0,
            phi_ext: p.phi_ext,
            v_g: p.v_g,
        }
    }
}

impl PyCircuit {
    fn inner(&self) -> core::CircuitParams {
        core::CircuitParams {
            c_j0: self.c_j0,
            c_g: self.c_g,
            c_c: self.c_c,
            c_0: self.c_0,
            l_o: self.l_o,
            e_j0: self.e_j0,
            phi_ext: self.phi_ext,
            v_g: self.v_g,
        }
    }
}

#[pymethods]
impl PyCircuit {
    /// Typical device values.
    #[new]
    fn new() -> Self {
        core::CircuitParams::typical().into()
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        core::CircuitParams::parse(text).py().map(Into::into)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        core::CircuitParams::load(&path).py().map(Into::into)
    }

    /// Effective capacitances, frequencies and energies, in SI units.
    fn derive<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = core::derive(&self.inner()).py()?;
        let out = PyDict::new(py);
        out.set_item("cap_c", d.cap_c)?;
        out.set_item("cap_c1", d.cap_c1)?;
        out.set_item("cap_c2", d.cap_c2)?;
        out.set_item("det_d", d.det_d)?;
        out.set_item("omega", d.omega)?;
        out.set_item("rabi_omega", d.rabi_omega)?;
        out.set_item("e_j", d.e_j)?;
        out.set_item("t_per_tau", d.t_per_tau)?;
        out.set_item("charging_energy", d.charging_energy)?;
        Ok(out)
    }

    /// `[(name, ratio, threshold, passed), ...]`.
    fn regime_check(&self, temperature: f64) -> PyResult<Vec<(String, f64, f64, bool)>> {
        let d = core::derive(&self.inner()).py()?;
        Ok(core::regime_check(&d, temperature).into_iter().map(|c| (c.name, c.ratio, c.threshold, c.passed)).collect())
    }

    fn tau_to_seconds(&self, tau: f64) -> PyResult<f64> {
        let d = core::derive(&self.inner()).py()?;
        Ok(core::circuit::tau_to_seconds(tau, &d))
    }
}

/// Every end-to-end check: `[(id, name, passed, detail), ...]`.
#[pyfunction]
#[pyo3(signature = (epsilon_tail = DEFAULT_EPSILON_TAIL))]
fn verify(py: Python<'_>, epsilon_tail: f64) -> Vec<(String, String, bool, String)> {
    let cfg = VerifyConfig { epsilon_tail, ..VerifyConfig::default() };
    py.detach(|| Verifier::new(cfg).run_all()).into_iter().map(|o| (o.id, o.name, o.passed, o.detail)).collect()
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyCoefficients>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyDensity>()?;
    m.add_class::<PySweep>()?;
    m.add_class::<PyCircuit>()?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(eof, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(average, m)?)?;
    m.add_function(wrap_pyfunction!(preparation_scan, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("__version__", core::CODE_VERSION)?;
    Ok(())
}

#[pymodule(name = "squid_transfer")]
fn squid_transfer_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
