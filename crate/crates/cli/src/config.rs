//! Run configuration: built-in defaults, then an optional INI-style file,
//! then command-line flags.

use ini::Ini;
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Domain(format!(
                "unknown format '{s}' (csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub gamma: f64,
    pub height: Option<f64>,
    pub nodes_per_unit: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub golden: Option<PathBuf>,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            gamma: 0.25,
            height: None,
            nodes_per_unit: 8.0,
            format: Format::Csv,
            out: None,
            golden: None,
            jobs: 1,
        }
    }
}

/// Values given on the command line; `None` leaves the lower layer alone.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub rel_tol: Option<f64>,
    pub gamma: Option<f64>,
    pub height: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub golden: Option<PathBuf>,
    pub jobs: Option<usize>,
}

fn number(key: &str, v: &str) -> Result<f64, CliError> {
    v.trim()
        .parse()
        .map_err(|_| CliError::Domain(format!("config key '{key}': '{v}' is not a number")))
}

impl RunConfig {
    /// Keys may sit at top level or under any section; later ones win.
    pub fn apply_ini(&mut self, text: &str) -> Result<(), CliError> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::Domain(format!("config: {e}")))?;
        for (_, props) in ini.iter() {
            for (key, v) in props.iter() {
                match key {
                    "rel_tol" => self.rel_tol = number(key, v)?,
                    "abs_tol" => self.abs_tol = number(key, v)?,
                    "gamma" => self.gamma = number(key, v)?,
                    "height" => self.height = Some(number(key, v)?),
                    "nodes_per_unit" => self.nodes_per_unit = number(key, v)?,
                    "format" => self.format = v.trim().parse()?,
                    "out" => self.out = Some(PathBuf::from(v.trim())),
                    "golden" => self.golden = Some(PathBuf::from(v.trim())),
                    "jobs" => {
                        self.jobs = v.trim().parse().map_err(|_| {
                            CliError::Domain(format!("config key 'jobs': '{v}' is not a count"))
                        })?
                    }
                    _ => return Err(CliError::Domain(format!("unknown config key '{key}'"))),
                }
            }
        }
        Ok(())
    }

    pub fn load(path: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            cfg.apply_ini(&text)?;
        }
        if let Some(v) = flags.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = flags.gamma {
            cfg.gamma = v;
        }
        if flags.height.is_some() {
            cfg.height = flags.height;
        }
        if let Some(v) = flags.format {
            cfg.format = v;
        }
        if flags.out.is_some() {
            cfg.out = flags.out.clone();
        }
        if flags.golden.is_some() {
            cfg.golden = flags.golden.clone();
        }
        if let Some(v) = flags.jobs {
            cfg.jobs = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("gamma", self.gamma),
            ("nodes_per_unit", self.nodes_per_unit),
        ];
        for (k, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Domain(format!("{k} must be positive (got {v})")));
            }
        }
        if let Some(h) = self.height {
            if !(h > 0.0 && h.is_finite()) {
                return Err(CliError::Domain(format!(
                    "height must be positive (got {h})"
                )));
            }
        }
        if self.jobs == 0 {
            return Err(CliError::Domain("jobs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn contour(&self) -> besselidx::quadrature::ContourSpec {
        besselidx::quadrature::ContourSpec {
            gamma: self.gamma,
            height: self.height,
            nodes_per_unit: self.nodes_per_unit,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut cfg = RunConfig::default();
        cfg.apply_ini("rel_tol = 1e-6\n[contour]\ngamma = 0.3\nformat = json\n")
            .unwrap();
        assert_eq!(cfg.rel_tol, 1e-6);
        assert_eq!(cfg.gamma, 0.3);
        assert_eq!(cfg.format, Format::Json);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.ini");
        std::fs::write(&path, "gamma = 0.3\njobs = 2\n").unwrap();
        let flags = Overrides {
            gamma: Some(0.2),
            ..Default::default()
        };
        let cfg = RunConfig::load(Some(&path), &flags).unwrap();
        assert_eq!(cfg.gamma, 0.2);
        assert_eq!(cfg.jobs, 2);
    }

    #[test]
    fn rejects_bad_values() {
        let mut cfg = RunConfig::default();
        assert!(cfg.apply_ini("colour = blue\n").is_err());
        assert!(cfg.apply_ini("gamma = abc\n").is_err());
        cfg.rel_tol = -1.0;
        assert!(cfg.validate().is_err());
        let flags = Overrides {
            jobs: Some(0),
            ..Default::default()
        };
        assert!(matches!(
            RunConfig::load(None, &flags),
            Err(CliError::Domain(_))
        ));
        assert!(matches!(
            RunConfig::load(Some(Path::new("/nonexistent/run.ini")), &flags),
            Err(CliError::Io(_))
        ));
    }
}
