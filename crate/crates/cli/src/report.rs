//! Machine-readable run report and the one-line classification summary.

use crate::input::MapSpec;
use blaschke_core::dynamics::ClosureMode;
use blaschke_core::semicrossed::{RadicalVerdict, SpectralRadiusEstimate, WitnessReport};
use blaschke_core::{Classification, Complex, Location};
use serde::Serialize;
use std::collections::BTreeMap;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct JuliaStats {
    pub n_points: usize,
    pub burn_in: usize,
    pub epsilon: f64,
    pub covered_fraction: f64,
    pub largest_gap: f64,
    pub branch_rule: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralTable {
    pub n: usize,
    pub estimate: SpectralRadiusEstimate,
    pub ergodic_lower_bound: Option<f64>,
    pub periodic_bound: f64,
    pub periodic_witness: Option<(Complex, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: &'static str,
    pub map: MapSpec,
    pub classification: Classification,
    pub step_criterion: Option<f64>,
    pub closure_mode: ClosureMode,
    pub semisimple: bool,
    pub seed: u64,
    pub tolerances: BTreeMap<&'static str, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub julia: Option<JuliaStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radical: Option<RadicalVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
}

/// Fixed decimals with trailing zeros removed; `-0` prints as `0`.
pub fn fmt_real(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

pub fn fmt_complex(z: Complex) -> String {
    let re = fmt_real(z.re, 6);
    let im = fmt_real(z.im, 6);
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

/// `kind; DW=..; [φ'(DW)=..;] semisimple=..`
pub fn summary(cl: &Classification, semisimple: bool) -> String {
    let dw = &cl.denjoy_wolff;
    let mut parts = vec![cl.kind.to_string(), format!("DW={}", fmt_complex(dw.point))];
    if dw.location == Location::Boundary {
        parts.push(format!("φ'(DW)={:.6}", dw.multiplier.re));
    }
    parts.push(format!("semisimple={semisimple}"));
    parts.join("; ")
}

/// `step=..; S=..; fixed points on the circle: ..`
pub fn details(cl: &Classification) -> String {
    let s = cl
        .criterion_value
        .map_or_else(|| "n/a".to_string(), |s| format!("{s:.6e}"));
    let fps: Vec<String> = cl
        .boundary_fixed_points
        .iter()
        .map(|r| fmt_complex(r.point))
        .collect();
    format!(
        "step={}; S={}; boundary fixed points: [{}]",
        cl.step,
        s,
        fps.join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_real(1.0, 6), "1");
        assert_eq!(fmt_real(-1e-12, 6), "0");
        assert_eq!(fmt_real(0.6666666666, 6), "0.666667");
        assert_eq!(fmt_complex(Complex::new(1.0, 1e-15)), "1");
        assert_eq!(fmt_complex(Complex::new(0.0, -0.5)), "-0.5i");
        assert_eq!(fmt_complex(Complex::new(0.25, -0.5)), "0.25-0.5i");
        assert_eq!(fmt_complex(Complex::new(0.25, 0.5)), "0.25+0.5i");
    }
}
