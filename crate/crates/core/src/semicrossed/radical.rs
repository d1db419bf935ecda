//! Membership in the Jacobson radical: `pi_0(F) = 0` and every `pi_k(F)`
//! vanishes on the closure of the recurrent points.

use super::{norm_bounds, periodic_lower_bound, SemicrossedElement, SAMPLE_GRID};
use crate::blaschke::FiniteBlaschkeProduct;
use crate::classify::Classification;
use crate::dynamics::{recurrent_closure, ClosureMode, SampleOptions};
use crate::error::Result;
use crate::Complex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct RadicalOptions {
    /// Threshold relative to the upper norm bound of `F`.
    pub tol: f64,
    /// Grid used when the recurrent points are dense.
    pub grid: usize,
    /// Periods searched for a periodic certificate.
    pub periodic_depth: usize,
    /// Julia sampling when the recurrent closure is not the whole circle.
    pub sample: SampleOptions,
}

impl Default for RadicalOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            grid: SAMPLE_GRID,
            periodic_depth: 4,
            sample: SampleOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadicalWitness {
    /// Index of the offending coefficient `f_k`.
    pub k: usize,
    pub point: Complex,
    /// `|f_k(point)|`.
    pub value: f64,
    /// A periodic point `x0` of period `p` with `|f_k(x0)| > tol`, when one
    /// was found: `(x0, p, |f_k(x0)|)`.
    pub periodic: Option<(Complex, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RadicalVerdict {
    NotInRadical(RadicalWitness),
    /// Every coefficient is below the threshold on the sampled closure; the
    /// largest value seen.
    InRadicalApprox(f64),
    Zero,
}

pub fn radical_membership(
    f: &SemicrossedElement,
    phi: &FiniteBlaschkeProduct,
    classification: &Classification,
    opts: &RadicalOptions,
) -> Result<RadicalVerdict> {
    if f.is_zero() {
        return Ok(RadicalVerdict::Zero);
    }
    let threshold = opts.tol * norm_bounds(f).1;
    let certificate = |k: usize| -> Result<Option<(Complex, usize, f64)>> {
        let b = periodic_lower_bound(phi, &super::fourier_coefficient(f, k), opts.periodic_depth)?;
        Ok(b.witness
            .filter(|_| b.bound > threshold)
            .map(|(x, p)| (x, p, b.bound)))
    };

    let f0 = super::fourier_coefficient(f, 0);
    let (s0, x0) = f0.sup_norm_at();
    if s0 > threshold {
        return Ok(RadicalVerdict::NotInRadical(RadicalWitness {
            k: 0,
            point: x0,
            value: s0,
            periodic: None,
        }));
    }

    let model = recurrent_closure(phi, classification, &opts.sample)?;
    let points = model.sample_points(opts.grid);
    let mut residual: f64 = 0.0;
    let mut best: Option<RadicalWitness> = None;
    for (k, g) in f.terms().filter(|(k, _)| *k > 0) {
        let (point, value) = points
            .iter()
            .map(|&z| (z, g.eval(z).norm()))
            .fold((points[0], f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        residual = residual.max(value);
        if value > threshold && best.map_or(true, |w| value > w.value) {
            best = Some(RadicalWitness {
                k,
                point,
                value,
                periodic: None,
            });
        }
    }
    match best {
        Some(mut w) => {
            if model.mode == ClosureMode::JuliaPlusDW {
                w.periodic = certificate(w.k)?;
            }
            Ok(RadicalVerdict::NotInRadical(w))
        }
        None => Ok(RadicalVerdict::InRadicalApprox(residual)),
    }
}
