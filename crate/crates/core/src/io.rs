//! State and barrier files.
//!
//! ```text
//! {"type":"gaussian","hbar":1.0,"mean":[q,p],"cov":{"qq":..,"pp":..,"qp":..}}
//! {"type":"fock","hbar":1.0,"mass":1.0,"omega":1.0,"dim":N,"re":[[..]],"im":[[..]]}
//! {"shape":"rectangular","v0":..,"width":..,"mass":..}
//! {"shape":"parabolic","v0":..,"curvature":..,"mass":..}
//! {"shape":"sampled","x":[..],"v":[..],"mass":..}
//! ```
//!
//! Unknown fields are rejected. `hbar`, `mass`, `omega` default to 1 and
//! `mean` to the origin.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::state::{FockDensityMatrix, GaussianState, QuantumState};
use crate::tunneling::{BarrierShape, BarrierSpec};

fn one() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Covariance {
    qq: f64,
    pp: f64,
    qp: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianFile {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default)]
    mean: [f64; 2],
    cov: Covariance,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FockFile {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default = "one")]
    mass: f64,
    #[serde(default = "one")]
    omega: f64,
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
enum BarrierFile {
    Rectangular {
        v0: f64,
        width: f64,
        #[serde(default = "one")]
        mass: f64,
    },
    Parabolic {
        v0: f64,
        curvature: f64,
        #[serde(default = "one")]
        mass: f64,
    },
    Sampled {
        x: Vec<f64>,
        v: Vec<f64>,
        #[serde(default = "one")]
        mass: f64,
    },
}

fn syntax(err: serde_json::Error) -> Error {
    Error::Malformed(err.to_string())
}

fn tag<'a>(value: &'a Value, key: &str) -> Result<&'a str> {
    value
        .as_object()
        .ok_or_else(|| Error::Malformed("top level must be a JSON object".into()))?
        .get(key)
        .ok_or_else(|| Error::Malformed(format!("missing field `{key}`")))?
        .as_str()
        .ok_or_else(|| Error::Malformed(format!("field `{key}` must be a string")))
}

fn matrix_rows(name: &str, rows: &[Vec<f64>], dim: usize) -> Result<()> {
    if rows.len() != dim {
        return Err(Error::Malformed(format!("`{name}` has {} rows, dim is {dim}", rows.len())));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != dim) {
        return Err(Error::Malformed(format!(
            "`{name}` row {i} has {} entries, dim is {dim}",
            rows[i].len()
        )));
    }
    Ok(())
}

/// Parses a state file. Syntax and schema errors carry line/column or the
/// offending field; physical validity is checked later by the consumer.
pub fn parse_state(text: &str) -> Result<QuantumState> {
    let value: Value = serde_json::from_str(text).map_err(syntax)?;
    match tag(&value, "type")? {
        "gaussian" => {
            let f: GaussianFile = serde_json::from_str(text).map_err(syntax)?;
            Ok(QuantumState::Gaussian(GaussianState {
                mean_q: f.mean[0],
                mean_p: f.mean[1],
                sigma_qq: f.cov.qq,
                sigma_pp: f.cov.pp,
                sigma_qp: f.cov.qp,
                hbar: f.hbar,
            }))
        }
        "fock" => {
            let f: FockFile = serde_json::from_str(text).map_err(syntax)?;
            matrix_rows("re", &f.re, f.dim)?;
            matrix_rows("im", &f.im, f.dim)?;
            let entries = DMatrix::from_fn(f.dim, f.dim, |i, j| Complex64::new(f.re[i][j], f.im[i][j]));
            let rho = FockDensityMatrix::new(entries)?.with_units(f.hbar, f.mass, f.omega)?;
            Ok(QuantumState::Fock(rho))
        }
        other => Err(Error::Malformed(format!(
            "unknown state type `{other}` (expected gaussian or fock)"
        ))),
    }
}

pub fn parse_barrier(text: &str) -> Result<BarrierSpec> {
    let value: Value = serde_json::from_str(text).map_err(syntax)?;
    tag(&value, "shape")?;
    match serde_json::from_str(text).map_err(syntax)? {
        BarrierFile::Rectangular { v0, width, mass } => BarrierSpec::rectangular(v0, width, mass),
        BarrierFile::Parabolic { v0, curvature, mass } => BarrierSpec::parabolic(v0, curvature, mass),
        BarrierFile::Sampled { x, v, mass } => BarrierSpec::sampled(&x, &v, mass),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, result: Result<T>) -> Result<T> {
    result.map_err(|e| match e {
        Error::Malformed(msg) => Error::Malformed(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn read_state(path: &Path) -> Result<QuantumState> {
    with_path(path, parse_state(&read(path)?))
}

pub fn read_barrier(path: &Path) -> Result<BarrierSpec> {
    with_path(path, parse_barrier(&read(path)?))
}

/// Inverse of [`parse_state`].
pub fn state_to_json(state: &QuantumState) -> String {
    let out = match state {
        QuantumState::Gaussian(g) => serde_json::to_string_pretty(&GaussianFile {
            kind: "gaussian".into(),
            hbar: g.hbar,
            mean: [g.mean_q, g.mean_p],
            cov: Covariance {
                qq: g.sigma_qq,
                pp: g.sigma_pp,
                qp: g.sigma_qp,
            },
        }),
        QuantumState::Fock(rho) => {
            let e = rho.entries();
            let dim = rho.dim();
            let part = |f: fn(&Complex64) -> f64| (0..dim).map(|i| (0..dim).map(|j| f(&e[(i, j)])).collect()).collect();
            serde_json::to_string_pretty(&FockFile {
                kind: "fock".into(),
                hbar: rho.hbar(),
                mass: rho.mass(),
                omega: rho.omega(),
                dim,
                re: part(|c| c.re),
                im: part(|c| c.im),
            })
        }
    };
    out.expect("plain numeric structs always serialize")
}

/// Inverse of [`parse_barrier`].
pub fn barrier_to_json(barrier: &BarrierSpec) -> String {
    let mass = barrier.mass;
    let file = match &barrier.shape {
        BarrierShape::Rectangular { v0, width } => BarrierFile::Rectangular {
            v0: *v0,
            width: *width,
            mass,
        },
        BarrierShape::Parabolic { v0, curvature } => BarrierFile::Parabolic {
            v0: *v0,
            curvature: *curvature,
            mass,
        },
        BarrierShape::Sampled(f) => BarrierFile::Sampled {
            x: f.nodes().to_vec(),
            v: f.values().to_vec(),
            mass,
        },
    };
    serde_json::to_string_pretty(&file).expect("plain numeric structs always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{validate_state, Invariant};

    #[test]
    fn gaussian_round_trip() {
        let text = r#"{"type":"gaussian","hbar":1.0,"mean":[0.5,-1],"cov":{"qq":1.0,"pp":0.5,"qp":0.2}}"#;
        let state = parse_state(text).unwrap();
        let QuantumState::Gaussian(g) = &state else { panic!() };
        assert_eq!((g.mean_q, g.mean_p, g.sigma_qp), (0.5, -1.0, 0.2));
        let again = parse_state(&state_to_json(&state)).unwrap();
        assert_eq!(again, state);
    }

    #[test]
    fn defaults_apply() {
        let state = parse_state(r#"{"type":"gaussian","cov":{"qq":0.5,"pp":0.5,"qp":0}}"#).unwrap();
        assert_eq!(state.hbar(), 1.0);
    }

    #[test]
    fn fock_round_trip() {
        let text = r#"{"type":"fock","hbar":1,"mass":1,"omega":1,"dim":2,
                       "re":[[0.5,0],[0,0.5]],"im":[[0,0],[0,0]]}"#;
        let state = parse_state(text).unwrap();
        assert!(validate_state(&state).is_valid());
        assert_eq!(parse_state(&state_to_json(&state)).unwrap(), state);
    }

    #[test]
    fn unknown_field_is_named() {
        let err = parse_state(r#"{"type":"gaussian","cov":{"qq":1,"pp":1,"qp":0},"spin":1}"#).unwrap_err();
        assert!(err.to_string().contains("spin"), "{err}");
    }

    #[test]
    fn syntax_error_has_line() {
        let err = parse_state("{\n\"type\": \"fock\",\n\"dim\": }").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn shape_mismatch() {
        let text = r#"{"type":"fock","dim":2,"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#;
        assert!(parse_state(text).unwrap_err().to_string().contains("row 1"));
        assert!(parse_state(r#"{"type":"wigner"}"#).is_err());
        assert!(parse_state("[1,2]").is_err());
    }

    #[test]
    fn sub_heisenberg_parses_but_fails_validation() {
        let state = parse_state(r#"{"type":"gaussian","cov":{"qq":0.1,"pp":0.1,"qp":0}}"#).unwrap();
        assert!(validate_state(&state).violates(Invariant::Physicality));
    }

    #[test]
    fn barriers() {
        let rect = parse_barrier(r#"{"shape":"rectangular","v0":1,"width":1,"mass":1}"#).unwrap();
        assert_eq!(rect, BarrierSpec::rectangular(1.0, 1.0, 1.0).unwrap());
        let para = parse_barrier(r#"{"shape":"parabolic","v0":1,"curvature":2}"#).unwrap();
        assert_eq!(parse_barrier(&barrier_to_json(&para)).unwrap(), para);
        let x: Vec<f64> = (0..8).map(f64::from).collect();
        let sampled = BarrierSpec::sampled(&x, &[0.0, 1.0, 2.0, 3.0, 3.0, 2.0, 1.0, 0.0], 2.0).unwrap();
        assert_eq!(parse_barrier(&barrier_to_json(&sampled)).unwrap(), sampled);
        assert!(parse_barrier(r#"{"shape":"rectangular","v0":1,"width":1,"depth":3}"#).is_err());
        assert!(parse_barrier(r#"{"shape":"rectangular","v0":-1,"width":1}"#).is_err());
        assert!(parse_barrier(r#"{"shape":"triangle"}"#).is_err());
    }
}
