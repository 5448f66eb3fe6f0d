//! Flag and config-file parsing.
//!
//! Flags mirror a flat `key = value` config file; explicit flags override
//! file entries. Rational parameters (alpha) are written as "a/b" strings so
//! admissibility checks stay exact.

use selfshrink_core::tori::FamilyParams;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: Option<String>,
    pub params: FamilyParams,
    pub grid: (usize, usize),
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub sweep: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: None,
            params: FamilyParams::default(),
            grid: (128, 128),
            tol: None,
            format: Format::Json,
            out: None,
            sweep: None,
        }
    }
}

pub fn parse_u32(key: &str, value: &str) -> Result<u32, String> {
    value.parse::<u32>().map_err(|_| format!("{key} expects a positive integer, got {value:?}"))
}

/// "a/b" or "a"; both components positive integers.
pub fn parse_alpha(value: &str) -> Result<(u32, u32), String> {
    let (a, b) = match value.split_once('/') {
        Some((a, b)) => (a, b),
        None => (value, "1"),
    };
    let a = parse_u32("alpha numerator", a.trim())?;
    let b = parse_u32("alpha denominator", b.trim())?;
    Ok((a, b))
}

/// "NxM", both even and at least 8.
pub fn parse_grid(value: &str) -> Result<(usize, usize), String> {
    let (nu, nv) = value
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("--grid expects NxM, got {value:?}"))?;
    let nu: usize = nu.trim().parse().map_err(|_| format!("bad grid size {value:?}"))?;
    let nv: usize = nv.trim().parse().map_err(|_| format!("bad grid size {value:?}"))?;
    for n in [nu, nv] {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(format!("grid resolution must be even and >= 8, got {value}"));
        }
    }
    Ok((nu, nv))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "family" => self.family = Some(value.to_string()),
            "m" => self.params.m = Some(parse_u32("--m", value)?),
            "n" => self.params.n = Some(parse_u32("--n", value)?),
            "p" => self.params.p = Some(parse_u32("--p", value)?),
            "q" => self.params.q = Some(parse_u32("--q", value)?),
            "alpha" => self.params.alpha = Some(parse_alpha(value)?),
            "grid" => self.grid = parse_grid(value)?,
            "tol" => {
                let t: f64 =
                    value.parse().map_err(|_| format!("--tol expects a number, got {value:?}"))?;
                if t.is_nan() || t <= 0.0 {
                    return Err("--tol must be positive".into());
                }
                self.tol = Some(t);
            }
            "format" => {
                self.format = match value {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    other => return Err(format!("--format expects json|csv, got {other:?}")),
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "sweep" => self.sweep = Some(value.to_string()),
            other => return Err(format!("unknown option {other:?}")),
        }
        Ok(())
    }

    /// Apply `key = value` lines from a config file; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {} is not key = value", lineno + 1))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

/// Flag pairs plus an optional `--config PATH`.
pub type FlagSet = (Vec<(String, String)>, Option<PathBuf>);

/// Split the argument list into `--key value` pairs and an optional
/// `--config PATH`.
pub fn collect_flags(args: &[String]) -> Result<FlagSet, String> {
    let mut config_path = None;
    let mut pairs = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| format!("expected an option starting with --, got {arg:?}"))?;
        let value = it.next().ok_or_else(|| format!("option --{key} needs a value"))?;
        if key == "config" {
            config_path = Some(PathBuf::from(value));
        } else {
            pairs.push((key.to_string(), value.to_string()));
        }
    }
    Ok((pairs, config_path))
}

/// Layer a config file (if any) under the explicit flags.
pub fn build_config(file_text: Option<&str>, pairs: &[(String, String)]) -> Result<RunConfig, String> {
    let mut config = RunConfig::default();
    if let Some(text) = file_text {
        config.apply_file(text)?;
    }
    for (key, value) in pairs {
        config.set(key, value)?;
    }
    Ok(config)
}

/// Sweep specification: parameter points separated by `;`, each a
/// comma-separated list of `key=value` assignments layered over the base
/// parameters, e.g. `m=1,n=1;m=1,n=2` or `alpha=1/1;alpha=3/2;alpha=2/1`.
pub fn parse_sweep(spec: &str) -> Result<Vec<Vec<(String, String)>>, String> {
    let mut points = Vec::new();
    for chunk in spec.split(';') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let mut assignments = Vec::new();
        for pair in chunk.split(',') {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| format!("sweep entry {pair:?} is not key=value"))?;
            assignments.push((key.trim().to_string(), value.trim().to_string()));
        }
        points.push(assignments);
    }
    Ok(points)
}
