//! Regression against high-precision reference values stored as JSON.
//!
//! Values and inputs are decimal strings so that no binary rounding happens
//! before the comparison.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kernel::{
    phi_contour, phi_derivative_x, phi_direct, psi_derivative_x, psi_direct, psi_fourier, TAU_MIN,
};
use crate::quadrature::{ContourSpec, Decay};
use crate::specfun::{
    bessel_j_imag_order, beta, log_gamma, macdonald_complex_arg, macdonald_imag_order,
};
use crate::transforms::{
    adjoint_g, canonical_f, canonical_g, forward_f, meijer_k0, norm_l0, SampledFunction,
};
use crate::wedge_pde::{wedge_u, PolarPoint, WedgeParams};

pub const SCHEMA_VERSION: u32 = 1;
/// Absolute tolerance for special-function entries.
pub const SPECFUN_TOL: f64 = 1e-12;
/// Absolute tolerance for kernel and transform entries.
pub const TRANSFORM_TOL: f64 = 1e-10;
/// Wedge opening used by the `wedge_u_canonical` entries.
pub const GOLDEN_WEDGE_BETA: f64 = 1.4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenFile {
    pub schema_version: u32,
    pub precision_digits: u32,
    pub entries: Vec<GoldenEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub op: String,
    pub inputs: BTreeMap<String, String>,
    pub value: String,
}

/// Result of reproducing one entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenOutcome {
    pub op: String,
    /// Inputs as `name=value` pairs in key order.
    pub inputs: String,
    pub expected: f64,
    pub computed: Option<f64>,
    pub abs_err: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    /// Set when the library call itself failed.
    pub error: Option<String>,
}

pub fn parse_golden(text: &str) -> Result<GoldenFile> {
    let file: GoldenFile = serde_json::from_str(text).map_err(|e| Error::Golden(e.to_string()))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::Golden(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    Ok(file)
}

pub fn load_golden(path: &Path) -> Result<GoldenFile> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_golden(&text)
}

/// The reference file shipped with the crate.
pub fn bundled_golden() -> GoldenFile {
    parse_golden(include_str!("../data/golden_v1.json")).expect("bundled golden file parses")
}

fn decimal(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Golden(format!("'{s}' is not a decimal number")))
}

fn input(entry: &GoldenEntry, name: &str) -> Result<f64> {
    let s = entry
        .inputs
        .get(name)
        .ok_or_else(|| Error::Golden(format!("op {} lacks input '{name}'", entry.op)))?;
    decimal(s)
}

pub fn tolerance_for(op: &str) -> f64 {
    let specfun = ["log_gamma", "beta", "macdonald", "bessel"];
    if specfun.iter().any(|p| op.starts_with(p)) {
        SPECFUN_TOL
    } else {
        TRANSFORM_TOL
    }
}

fn exp_neg() -> SampledFunction {
    SampledFunction::new(|x: f64| (-x).exp(), 0.0, Decay::Exponential { rate: 1.0 })
}

/// Evaluates the library operation named by the entry.
pub fn evaluate(entry: &GoldenEntry) -> Result<f64> {
    let arg = |n: &str| input(entry, n);
    let value = match entry.op.as_str() {
        "log_gamma_re" => log_gamma(Complex64::new(arg("re")?, arg("im")?))?.re,
        "log_gamma_im" => log_gamma(Complex64::new(arg("re")?, arg("im")?))?.im,
        "beta" => beta(arg("a")?, arg("b")?)?,
        "macdonald_imag_order" => macdonald_imag_order(arg("tau")?, arg("z")?)?.value,
        "bessel_j_imag_order_re" => bessel_j_imag_order(arg("tau")?, arg("z")?)?.value.re,
        "bessel_j_imag_order_im" => bessel_j_imag_order(arg("tau")?, arg("z")?)?.value.im,
        "macdonald_complex_arg_re" => {
            macdonald_complex_arg(arg("nu")?, Complex64::new(arg("re")?, arg("im")?))?
                .value
                .re
        }
        "macdonald_complex_arg_im" => {
            macdonald_complex_arg(arg("nu")?, Complex64::new(arg("re")?, arg("im")?))?
                .value
                .im
        }
        "psi" => {
            let (tau, x) = (arg("tau")?, arg("x")?);
            if tau.abs() < TAU_MIN {
                psi_fourier(tau, x)?.value
            } else {
                psi_direct(tau, x)?.value
            }
        }
        "phi" => phi_direct(arg("tau")?, arg("x")?)?.value,
        "phi_derivative_x" => phi_derivative_x(arg("tau")?, arg("x")?, &phi_contour())?.value,
        "psi_derivative_x_1" => {
            psi_derivative_x(arg("tau")?, arg("x")?, 1, &ContourSpec::default())?.value
        }
        "forward_F_canonical" => forward_f(&canonical_f(), arg("tau")?)?.value,
        "meijer_k0_canonical" => meijer_k0(&canonical_f(), arg("x")?)?.value,
        "norm_L0_exp" => norm_l0(&exp_neg())?.value,
        "norm_L0_canonical" => norm_l0(&canonical_f())?.value,
        "adjoint_G_canonical" => adjoint_g(&canonical_g(), arg("x")?)?.value,
        "wedge_u_canonical" => {
            let params = WedgeParams::new(GOLDEN_WEDGE_BETA, canonical_g())?;
            wedge_u(&params, PolarPoint::new(arg("r")?, arg("theta")?, &params)?)?.value
        }
        other => return Err(Error::Golden(format!("unknown op '{other}'"))),
    };
    Ok(value)
}

pub fn check_entry(entry: &GoldenEntry) -> Result<GoldenOutcome> {
    let expected = decimal(&entry.value)?;
    let tolerance = tolerance_for(&entry.op);
    let inputs = entry
        .inputs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    let mut out = GoldenOutcome {
        op: entry.op.clone(),
        inputs,
        expected,
        computed: None,
        abs_err: None,
        tolerance,
        passed: false,
        error: None,
    };
    match evaluate(entry) {
        Ok(v) => {
            let err = (v - expected).abs();
            out.computed = Some(v);
            out.abs_err = Some(err);
            out.passed = err <= tolerance;
        }
        // malformed entries are file errors; numerical failures are misses
        Err(e @ Error::Golden(_)) => return Err(e),
        Err(e) => out.error = Some(e.to_string()),
    }
    Ok(out)
}

/// Checks every entry in file order.
pub fn check_all(file: &GoldenFile) -> Result<Vec<GoldenOutcome>> {
    file.entries.iter().map(check_entry).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_classes() {
        assert_eq!(tolerance_for("macdonald_imag_order"), SPECFUN_TOL);
        assert_eq!(tolerance_for("log_gamma_im"), SPECFUN_TOL);
        assert_eq!(tolerance_for("psi"), TRANSFORM_TOL);
        assert_eq!(tolerance_for("adjoint_G_canonical"), TRANSFORM_TOL);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_golden("{"), Err(Error::Golden(_))));
        let wrong = r#"{"schema_version": 2, "precision_digits": 30, "entries": []}"#;
        assert!(matches!(parse_golden(wrong), Err(Error::Golden(_))));
        let entry = GoldenEntry {
            op: "no_such_op".into(),
            inputs: BTreeMap::new(),
            value: "1.0".into(),
        };
        assert!(check_entry(&entry).is_err());
        let entry = GoldenEntry {
            op: "beta".into(),
            inputs: [("a".to_string(), "0.5".to_string())].into(),
            value: "1.0".into(),
        };
        assert!(check_entry(&entry).is_err());
    }

    #[test]
    fn specfun_entries() {
        let file = bundled_golden();
        for e in file
            .entries
            .iter()
            .filter(|e| tolerance_for(&e.op) == SPECFUN_TOL)
        {
            let o = check_entry(e).unwrap();
            assert!(o.passed, "{o:?}");
        }
    }

    #[test]
    fn missing_file_is_io() {
        assert!(matches!(
            load_golden(Path::new("/nonexistent/golden.json")),
            Err(Error::Io(_))
        ));
    }
}
