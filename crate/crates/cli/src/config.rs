//! Run configuration: command-line flags layered over an optional TOML file
//! layered over built-in defaults.

use num_complex::Complex64;
use serde::Deserialize;
use std::path::Path;

/// Values accepted from a `--config` file. Every key is optional and is
/// overridden by the matching flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub a: Option<f64>,
    pub c_plus: Option<ComplexValue>,
    pub c_minus: Option<ComplexValue>,
    pub grid: Option<usize>,
    pub extent: Option<f64>,
    pub times: Option<Vec<f64>>,
    pub time: Option<f64>,
    pub tolerance: Option<f64>,
    pub n_points: Option<usize>,
    pub kappa_max: Option<f64>,
    pub states: Option<usize>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// A complex number written as `re`, `"re,im"` or `[re, im]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
    Text(String),
}

impl ComplexValue {
    pub fn resolve(&self) -> Result<Complex64, String> {
        match self {
            Self::Real(re) => Ok(Complex64::new(*re, 0.0)),
            Self::Pair([re, im]) => Ok(Complex64::new(*re, *im)),
            Self::Text(s) => parse_complex(s),
        }
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("`{s}` is not a number or `re,im` pair"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("`{s}` is not a number or `re,im` pair")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Grid sizes are powers of two from 16 to 256.
pub fn check_grid(n: usize) -> Result<usize, String> {
    if n.is_power_of_two() && (16..=256).contains(&n) {
        Ok(n)
    } else {
        Err(format!("grid size {n} must be a power of two between 16 and 256"))
    }
}

/// First present value.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
