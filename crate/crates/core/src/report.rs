//! Bit-stable tabular output.

use serde_json::{json, Map, Value};

use crate::density::QubitPairDensity;
use crate::dynamics::AbcdCoefficients;
use crate::experiments::{PrepScanRow, SweepResult};
use crate::measures::EntanglementReport;

pub const SWEEP_HEADER: &str = "r,tau,e_npt,concurrence,eof,s_linear,purity";
pub const PREP_SCAN_HEADER: &str = "alpha,beta,e_npt";

/// Twelve significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(result.points.len() * 120);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for p in &result.points {
        let r = &p.report;
        let cells = [p.r, p.tau, r.e_npt, r.concurrence, r.eof, r.s_linear, r.purity];
        out.push_str(&cells.map(fmt_num).join(","));
        out.push('\n');
    }
    out
}

pub fn prep_scan_csv(rows: &[PrepScanRow]) -> String {
    let mut out = String::from(PREP_SCAN_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&[row.alpha, row.beta, row.e_npt].map(fmt_num).join(","));
        out.push('\n');
    }
    out
}

/// Flat JSON fields of an entanglement report.
pub fn report_fields(report: &EntanglementReport, obj: &mut Map<String, Value>) {
    obj.insert("e_npt".into(), json!(report.e_npt));
    obj.insert("e_npt_clamped".into(), json!(report.e_npt_clamped()));
    obj.insert("lambda_min".into(), json!(report.lambda_min));
    obj.insert("concurrence".into(), json!(report.concurrence));
    obj.insert("eof".into(), json!(report.eof));
    obj.insert("s_linear".into(), json!(report.s_linear));
    obj.insert("purity".into(), json!(report.purity));
    obj.insert("teleport_useful".into(), json!(report.teleport_useful));
}

pub fn coefficient_fields(c: Option<&AbcdCoefficients>, obj: &mut Map<String, Value>) {
    for (key, v) in [("a", c.map(|c| c.a)), ("b", c.map(|c| c.b)), ("c", c.map(|c| c.c)), ("d", c.map(|c| c.d))] {
        obj.insert(key.into(), json!(v));
    }
}

/// Row-major real and imaginary parts under `rho_re` / `rho_im`.
pub fn density_fields(rho: &QubitPairDensity, obj: &mut Map<String, Value>) {
    let mut re = Vec::with_capacity(16);
    let mut im = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            re.push(rho.get(i, j).re);
            im.push(rho.get(i, j).im);
        }
    }
    obj.insert("rho_re".into(), json!(re));
    obj.insert("rho_im".into(), json!(im));
}

pub fn sweep_json(result: &SweepResult) -> Value {
    let rows: Vec<Value> = result
        .points
        .iter()
        .map(|p| {
            let mut obj = Map::new();
            obj.insert("r".into(), json!(p.r));
            obj.insert("tau".into(), json!(p.tau));
            report_fields(&p.report, &mut obj);
            Value::Object(obj)
        })
        .collect();
    let prov = &result.provenance;
    json!({
        "spec_hash": prov.spec_hash,
        "code_version": prov.code_version,
        "method": prov.method,
        "epsilon_tail": prov.epsilon_tail,
        "n_max": prov.n_max,
        "points": rows,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialise");
    s.push('\n');
    s
}
