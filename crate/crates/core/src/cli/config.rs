//! Run configuration: command-line flags over a TOML file over defaults.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cache::CACHE_ENV;
use crate::error::{Error, Result};
use crate::spectral::{format_complex, EigenOptions, Precision};

pub const DEFAULT_OUT: &str = "qes-out";
pub const DEFAULT_CACHE_DIR: &str = ".qes-cache";
pub const DEFAULT_GRID: usize = 200;
pub const DEFAULT_TOL: f64 = 1e-10;

/// Parses `re+imi`, `re-imi`, `re`, `imi`, `i` and `-i`, with optional
/// exponents in either part.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("cannot parse `{s}` as a complex number"));
    if t.is_empty() {
        return Err(bad());
    }
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => num(x)?,
    };
    Ok(Complex64::new(re, im))
}

mod complex_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match z {
            Some(z) => s.serialize_some(&format_complex(*z)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Complex64>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_complex(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

/// Settings read from a `--config` file; every key is optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: Option<usize>,
    #[serde(default, with = "complex_str")]
    pub a: Option<Complex64>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub precision: Option<u32>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved settings; embedded in every manifest and JSON report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Size parameter; `None` selects the default of each command.
    pub n: Option<usize>,
    /// Matrix parameter; `None` selects the default of each command.
    #[serde(with = "complex_str")]
    pub a: Option<Complex64>,
    /// Number of `τ` samples for support clouds and curves.
    pub grid: usize,
    /// Residual bound for double-precision eigenvalues.
    pub tol: f64,
    pub out: PathBuf,
    pub cache_dir: PathBuf,
    /// Worker threads; `0` uses every available core.
    pub jobs: usize,
    /// Fixed working precision in bits; `None` escalates automatically.
    pub precision: Option<u32>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: None,
            a: None,
            grid: DEFAULT_GRID,
            tol: DEFAULT_TOL,
            out: PathBuf::from(DEFAULT_OUT),
            cache_dir: PathBuf::from(DEFAULT_CACHE_DIR),
            jobs: 0,
            precision: None,
        }
    }
}

impl RunConfig {
    /// Layers `flags` over `file` over the defaults. The cache directory
    /// falls back to the environment before the default.
    pub fn resolve(flags: &ConfigFile, file: &ConfigFile, env_cache: Option<PathBuf>) -> Self {
        let d = RunConfig::default();
        RunConfig {
            n: flags.n.or(file.n),
            a: flags.a.or(file.a),
            grid: flags.grid.or(file.grid).unwrap_or(d.grid),
            tol: flags.tol.or(file.tol).unwrap_or(d.tol),
            out: flags.out.clone().or_else(|| file.out.clone()).unwrap_or(d.out),
            cache_dir: flags.cache_dir.clone().or_else(|| file.cache_dir.clone()).or(env_cache).unwrap_or(d.cache_dir),
            jobs: flags.jobs.or(file.jobs).unwrap_or(d.jobs),
            precision: flags.precision.or(file.precision),
        }
    }

    pub fn env_cache_dir() -> Option<PathBuf> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
    }

    pub fn n_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }

    pub fn eigen_options(&self) -> EigenOptions {
        EigenOptions {
            precision: self.precision.map_or(Precision::Auto, Precision::Bits),
            tol: self.tol,
            ..EigenOptions::default()
        }
    }
}
