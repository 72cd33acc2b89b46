//! Run configuration: precision, zero cache, output format and worker count.
//!
//! Files use `key = value` lines with `#` comments. Recognised keys are the
//! [`RunConfig`] field names and the [`PrecisionConfig`] field names.

use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable naming the configuration file.
pub const CONFIG_ENV: &str = "BSY_CONFIG";
/// Upper bound on `parallelism`.
pub const MAX_PARALLELISM: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidInput(format!("unknown output format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub precision: PrecisionConfig,
    pub zero_cache_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub parallelism: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: PrecisionConfig::default(),
            zero_cache_path: None,
            output_format: OutputFormat::Csv,
            parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("`{key}` expects a number, got `{v}`")))
        };
        let int = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("`{key}` expects an integer, got `{v}`")))
        };
        let p = &mut self.precision;
        match key {
            "target_abs_error" => p.target_abs_error = num(value)?,
            "euler_maclaurin_terms" => p.euler_maclaurin_terms = int(value)?,
            "rs_correction_terms" => p.rs_correction_terms = int(value)?,
            "quad_tol" => p.quad_tol = num(value)?,
            "max_subdivisions" => p.max_subdivisions = int(value)?,
            "zero_cache_path" => self.zero_cache_path = Some(PathBuf::from(value)),
            "output_format" => self.output_format = OutputFormat::parse(value)?,
            "parallelism" => self.parallelism = int(value)?,
            _ => return Err(Error::InvalidInput(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.precision.validate()?;
        if self.parallelism == 0 || self.parallelism > MAX_PARALLELISM {
            return Err(Error::InvalidInput(format!(
                "parallelism {} outside 1..={MAX_PARALLELISM}",
                self.parallelism
            )));
        }
        Ok(())
    }

    /// Overlays the settings in `text` on `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected `key = value`".into(),
            })?;
            self.set(k.trim(), v.trim()).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut c = RunConfig::default();
        c.apply_text(&std::fs::read_to_string(path)?)?;
        c.validate()?;
        Ok(c)
    }

    /// Defaults overlaid with the file named by `BSY_CONFIG`, if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) => Self::from_file(Path::new(&p)),
            None => Ok(RunConfig::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_comments() {
        let mut c = RunConfig::default();
        c.apply_text("# precision\nquad_tol = 1e-9  # looser\n\noutput_format=json\nparallelism = 2\n")
            .unwrap();
        assert_eq!(c.precision.quad_tol, 1e-9);
        assert_eq!(c.output_format, OutputFormat::Json);
        assert_eq!(c.parallelism, 2);
        c.validate().unwrap();
    }

    #[test]
    fn reports_offending_line() {
        let mut c = RunConfig::default();
        let e = c.apply_text("quad_tol = 1e-9\nfrobnicate = 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = c.apply_text("quad_tol 1e-9\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn rejects_zero_parallelism() {
        let mut c = RunConfig::default();
        c.set("parallelism", "0").unwrap();
        assert!(c.validate().is_err());
    }
}
