//! Map and element input: JSON documents (file path or literal) and the
//! inline `--zeros` / `--u` shorthand.

use anyhow::{Context, Result};
use blaschke_core::semicrossed::{DiskFunction, SemicrossedElement};
use blaschke_core::{Complex, FiniteBlaschkeProduct};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Malformed user input; reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

fn bad(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    #[serde(default = "unit")]
    pub u: Complex,
    pub zeros: Vec<Complex>,
}

fn unit() -> Complex {
    Complex::new(1.0, 0.0)
}

impl MapSpec {
    pub fn build(&self) -> Result<FiniteBlaschkeProduct> {
        Ok(FiniteBlaschkeProduct::new(self.u, self.zeros.clone())?)
    }
}

/// Reads `arg` as a JSON literal when it starts with `{`, else as a path.
pub fn read_json<T: for<'de> Deserialize<'de>>(arg: &str, what: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| bad(format!("cannot read {what} file {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| bad(format!("malformed {what}: {e}")))
}

/// `re,im` or a literal such as `0.3-0.2i`, `-0.5`, `i`.
pub fn parse_complex(s: &str) -> Result<Complex> {
    let s = s.trim();
    let z = match s.split_once(',') {
        Some((re, im)) => {
            let re: f64 = re.trim().parse().map_err(|_| bad(format!("bad real part in {s:?}")))?;
            let im: f64 = im.trim().parse().map_err(|_| bad(format!("bad imaginary part in {s:?}")))?;
            Complex::new(re, im)
        }
        None => s
            .parse::<Complex>()
            .map_err(|_| bad(format!("cannot parse {s:?} as a complex number")))?,
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad(format!("non-finite value {s:?}")));
    }
    Ok(z)
}

/// Items separated by `;` or whitespace.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex>> {
    s.split(|c: char| c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_complex)
        .collect()
}

/// Map from `--map` or from `--zeros` (repeatable) and `--u`.
pub fn map_spec(map: Option<&str>, zeros: &[String], u: Option<&str>) -> Result<MapSpec> {
    match map {
        Some(arg) => {
            if !zeros.is_empty() || u.is_some() {
                return Err(bad("--map cannot be combined with --zeros or --u"));
            }
            read_json(arg, "map")
        }
        None => {
            if zeros.is_empty() {
                return Err(bad("a map is required: pass --map or --zeros"));
            }
            let mut all = Vec::new();
            for z in zeros {
                all.extend(parse_complex_list(z).with_context(|| format!("in --zeros {z:?}"))?);
            }
            Ok(MapSpec {
                u: u.map(parse_complex).transpose()?.unwrap_or_else(unit),
                zeros: all,
            })
        }
    }
}

pub fn element(arg: &str) -> Result<SemicrossedElement> {
    read_json(arg, "element")
}

/// Coefficients lowest degree first, e.g. `-1;1` for `z - 1`.
pub fn disk_function(s: &str) -> Result<DiskFunction> {
    let coeffs = parse_complex_list(s)?;
    if coeffs.is_empty() {
        return Err(bad("empty coefficient list"));
    }
    Ok(DiskFunction::from_coeffs(coeffs))
}
