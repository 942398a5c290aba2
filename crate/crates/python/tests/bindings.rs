use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

fn with_module(script: &str) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "squid_transfer").unwrap();
        squid_transfer_py::register(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("st", m).unwrap();
        let code = CString::new(script).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn closed_form_through_python() {
    with_module(
        r#"
import math
c = st.coefficients(0.86, 1.5 * math.pi)
assert abs(c.a - 0.639008791642226) < 1e-12
rho = st.ground_state(0.86, 1.5 * math.pi)
rep = rho.report()
assert abs(rep.e_npt - 0.840705307393789) < 1e-12
assert abs(rep.concurrence - rep.e_npt) < 1e-10
assert len(rho.matrix()) == 4 and isinstance(rho.matrix()[0][3], complex)
assert st.SqueezedSpectrum(0.86).n_max == 38
"#,
    );
}

#[test]
fn errors_become_python_exceptions() {
    with_module(
        r#"
for call in (lambda: st.SqueezedSpectrum(-1.0), lambda: st.eof(1.5), lambda: st.average(0.5, 1.0, 8)):
    try:
        call()
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")
try:
    st.CircuitParams.load("/nonexistent/circuit.txt")
except OSError:
    pass
else:
    raise AssertionError("expected OSError")
"#,
    );
}

#[test]
fn sweep_and_circuit() {
    with_module(
        r#"
s = st.sweep((0.0, 2.0, 11), (0.0, 9.42477796076938, 13))
assert len(s) == 143
assert s.to_csv().splitlines()[0] == "r,tau,e_npt,concurrence,eof,s_linear,purity"
r, tau, v = s.peak("e_npt")
assert v == max(max(row) for row in s.values("e_npt"))
p = st.CircuitParams()
d = p.derive()
assert abs(d["omega"] / 1e10 - 1) < 1e-9
assert [c[0] for c in p.regime_check(0.02)] == ["rwa", "charge_regime", "temperature", "resonance"]
"#,
    );
}
