//! CSV tables and versioned JSON reports.
//!
//! CSV numbers carry 9 significant digits and switch to scientific notation
//! below `1e−4` (and from `1e9` up). JSON keeps full precision.

use serde_json::{json, Map, Value};

use crate::bounds::{BoundReport, PhiCurveRow, PhiValue};
use crate::decoherence::{DephasingTrajectory, QUASI_STATIC_LABEL};
use crate::moments::{SecondMoments, TruncationWarning};
use crate::oracle::{FalsificationReport, PhiCertificate};
use crate::state::ValidationReport;
use crate::thermal::ThermalRecord;
use crate::tunneling::SweepRecord;

pub const SCHEMA_VERSION: u32 = 1;

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if !(1e-4..1e9).contains(&a) {
        return format!("{x:.8e}");
    }
    let decimals = (8 - a.log10().floor() as i32).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    /// `1`/`0` in CSV, a boolean in JSON.
    Flag(bool),
    /// Column not computed for this row.
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => if *b { "1" } else { "0" }.into(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Flag(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

fn opt(x: Option<f64>) -> Cell {
    x.map_or(Cell::Empty, Cell::Num)
}

/// A table with a fixed header, rendered as CSV or as JSON rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    /// Extra top-level JSON fields.
    pub meta: Map<String, Value>,
}

impl Table {
    fn new(columns: &'static [&'static str]) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            meta: Map::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.extend(self.meta.clone());
        doc.insert("columns".into(), json!(self.columns));
        doc.insert("rows".into(), Value::Array(rows));
        Value::Object(doc)
    }
}

pub const PHI_CURVE_COLUMNS: &[&str] = &["mu", "phi_exact", "phi_app", "phi_asymptote", "fallback_flag"];
pub const ORACLE_COLUMNS: &[&str] = &[
    "mu",
    "phi_oracle",
    "phi_exact",
    "phi_app",
    "rel_err_exact",
    "rel_err_app",
    "method",
    "iterations",
];
pub const THERMAL_COLUMNS: &[&str] = &["T", "Z", "mu", "mu_asymptote", "phi", "phi_mode", "hbar_eff"];
pub const SWEEP_COLUMNS: &[&str] = &[
    "param_name",
    "param_value",
    "mu",
    "phi",
    "hbar_eff",
    "action",
    "ln_D",
    "D",
    "invariant_product",
];
pub const TRAJECTORY_COLUMNS: &[&str] = &["t", "mu", "r", "phi", "hbar_eff", "ln_D", "D", "inv_mu_ln_D"];

pub fn phi_curve_table(rows: &[PhiCurveRow]) -> Table {
    let mut t = Table::new(PHI_CURVE_COLUMNS);
    for r in rows {
        t.rows.push(vec![
            Cell::Num(r.mu),
            opt(r.exact.map(|p| p.value)),
            opt(r.interpolation),
            opt(r.asymptote),
            Cell::Flag(r.fallback()),
        ]);
    }
    t
}

pub fn oracle_table(certs: &[PhiCertificate]) -> Table {
    let mut t = Table::new(ORACLE_COLUMNS);
    for c in certs {
        t.rows.push(vec![
            Cell::Num(c.mu),
            Cell::Num(c.phi_oracle),
            Cell::Num(c.phi_exact.value),
            Cell::Num(c.phi_app),
            Cell::Num(c.rel_err_exact),
            Cell::Num(c.rel_err_app),
            Cell::Text(c.method.name().into()),
            Cell::Int(c.iterations as u64),
        ]);
    }
    t
}

pub fn thermal_table(records: &[ThermalRecord]) -> Table {
    let mut t = Table::new(THERMAL_COLUMNS);
    for r in records {
        t.rows.push(vec![
            Cell::Num(r.temperature),
            Cell::Num(r.z),
            Cell::Num(r.mu),
            Cell::Num(r.mu_asymptote),
            Cell::Num(r.phi.value),
            Cell::Text(r.phi.branch.name().into()),
            Cell::Num(r.hbar_eff),
        ]);
    }
    t
}

pub fn sweep_table(records: &[SweepRecord]) -> Table {
    let mut t = Table::new(SWEEP_COLUMNS);
    for r in records {
        t.rows.push(vec![
            Cell::Text(r.param.name().into()),
            Cell::Num(r.param_value),
            Cell::Num(r.mu),
            Cell::Num(r.phi.value),
            Cell::Num(r.hbar_eff),
            Cell::Num(r.action),
            Cell::Num(r.ln_d),
            Cell::Num(r.d),
            Cell::Num(r.invariant_product),
        ]);
    }
    t
}

fn truncation_json(w: &TruncationWarning) -> Value {
    json!({
        "dim": w.dim,
        "top_population": w.top_population,
        "next_population": w.next_population,
    })
}

pub fn trajectory_table(traj: &DephasingTrajectory) -> Table {
    let mut t = Table::new(TRAJECTORY_COLUMNS);
    for r in &traj.records {
        t.rows.push(vec![
            Cell::Num(r.param_value),
            Cell::Num(r.mu),
            Cell::Num(r.r),
            Cell::Num(r.phi.value),
            Cell::Num(r.hbar_eff),
            Cell::Num(r.ln_d),
            Cell::Num(r.d),
            Cell::Num(r.invariant_product),
        ]);
    }
    t.meta.insert("label".into(), json!(QUASI_STATIC_LABEL));
    let warnings: Vec<Value> = traj
        .truncation
        .iter()
        .map(|(step, w)| {
            let mut v = truncation_json(w);
            v["step"] = json!(step);
            v
        })
        .collect();
    t.meta.insert("truncation_warnings".into(), Value::Array(warnings));
    t
}

fn phi_json(p: &PhiValue) -> Value {
    json!({ "value": p.value, "branch": p.branch.name(), "fallback": p.fallback })
}

pub fn phi_report(mu: f64, p: &PhiValue) -> Value {
    json!({ "schema_version": SCHEMA_VERSION, "mu": mu, "phi": phi_json(p) })
}

/// Report for a state that failed validation; bounds are not evaluated.
pub fn invalid_state_report(validation: &ValidationReport) -> Value {
    let violations: Vec<Value> = validation
        .violations
        .iter()
        .map(|v| json!({ "invariant": v.invariant.name(), "magnitude": v.magnitude, "detail": v.detail }))
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "valid": false,
        "violations": violations,
        "all_pass": false,
    })
}

pub fn bound_report(m: &SecondMoments, b: &BoundReport) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "valid": true,
        "moments": {
            "mean_q": m.mean_q,
            "mean_p": m.mean_p,
            "sigma_qq": m.sigma_qq,
            "sigma_pp": m.sigma_pp,
            "sigma_qp": m.sigma_qp,
            "r": m.r,
            "mu": m.mu,
            "linear_entropy": m.linear_entropy,
        },
        "truncation_warning": m.truncation.as_ref().map(truncation_json),
        "hbar": b.hbar,
        "r": b.r,
        "mu": b.mu,
        "product": b.product,
        "determinant": b.sr_lhs,
        "bounds": {
            "heisenberg": b.heisenberg_bound,
            "schrodinger_robertson": b.sr_bound,
            "purity": b.purity_bound,
        },
        "slacks": {
            "heisenberg": b.heisenberg_slack,
            "schrodinger_robertson": b.sr_slack,
            "purity": b.purity_slack,
        },
        "phi": { "value": b.phi_value, "branch": b.phi_mode.name(), "fallback": b.phi_fallback },
        "hbar_eff": b.hbar_eff,
        "flags": {
            "heisenberg": b.flags.heisenberg,
            "schrodinger_robertson": b.flags.schrodinger_robertson,
            "schrodinger_robertson_product": b.flags.schrodinger_robertson_product,
            "purity": b.flags.purity,
            "purity_advisory": b.flags.purity_advisory,
        },
        "all_pass": b.flags.all_pass(),
    })
}

pub fn falsification_report(r: &FalsificationReport) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "mu": r.mu,
        "dim": r.dim,
        "seed": r.seed,
        "samples": r.samples,
        "accepted": r.accepted,
        "rejected": r.rejected,
        "min_slack": r.min_slack,
        "worst_sample": r.worst_sample,
        "phi": phi_json(&r.phi),
        "hard_region": r.hard_region,
        "passed": r.passed(),
    })
}

pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
