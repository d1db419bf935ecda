//! Peak-polynomial witnesses for quasinilpotent elements outside the radical.
//!
//! For a map whose recurrent closure `X` is not the whole circle, pick
//! `x0` in `X` moved far by `phi` and a peak function `f` at `x0`. Then
//! `U f` is not in the radical (`|f(x0)| = 1` on `X`), while the
//! coefficient `f (f o phi)` of `(U f)^2` is uniformly small.

use super::{monomial_spectral_radius, DiskFunction, SpectralRadiusEstimate, SAMPLE_GRID};
use crate::blaschke::FiniteBlaschkeProduct;
use crate::circle;
use crate::classify::Classification;
use crate::dynamics::{recurrent_closure, SampleOptions};
use crate::error::{Error, Result};
use crate::Complex;
use serde::{Deserialize, Serialize};

/// `|phi(x0) - x0|` at or below this flags the witness as unseparated.
pub const SEPARATION_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub x0: Complex,
    pub peak_power: usize,
    /// `|phi(x0) - x0|`.
    pub separation: f64,
    /// No sample point was moved more than [`SEPARATION_THRESHOLD`].
    pub separation_failed: bool,
    /// `sup_T |f (f o phi)|`, the modulus of the `U^2` coefficient of `(U f)^2`.
    pub s2: f64,
    /// Spectral-radius entries for `U f`.
    pub decay: SpectralRadiusEstimate,
    /// `|f(x0)|` at the recurrent-closure sample point `x0`.
    pub certificate: f64,
}

/// `((1 + conj(x0) z) / 2)^power`: modulus 1 at `x0`, `|cos(t/2)|^power`
/// at angular distance `t` from it.
pub fn peak_polynomial(x0: Complex, power: usize) -> DiskFunction {
    let w = x0.conj() / x0.norm();
    let log_half = -std::f64::consts::LN_2 * power as f64;
    let mut log_binom = 0.0;
    let mut wk = Complex::new(1.0, 0.0);
    let mut coeffs = Vec::with_capacity(power + 1);
    for k in 0..=power {
        if k > 0 {
            log_binom += ((power - k + 1) as f64 / k as f64).ln();
            wk *= w;
        }
        coeffs.push(wk * (log_binom + log_half).exp());
    }
    DiskFunction::from_coeffs(coeffs)
}

/// Witness built from the recurrent-closure sample; fails for maps whose
/// recurrent points are dense (elliptic and zero-step parabolic), where no
/// nonzero quasinilpotent element exists.
pub fn quasinilpotent_witness(
    phi: &FiniteBlaschkeProduct,
    classification: &Classification,
    peak_power: usize,
    depth: usize,
    sample: &SampleOptions,
) -> Result<(DiskFunction, WitnessReport)> {
    if super::is_semisimple(classification) {
        return Err(Error::WrongClassification {
            kind: classification.kind,
            step: classification.step,
        });
    }
    let model = recurrent_closure(phi, classification, sample)?;
    witness_diagnostics(phi, &model.sample_points(SAMPLE_GRID), peak_power, depth)
}

/// The witness construction without the classification check, over an
/// arbitrary candidate set; the spectral-radius table is the diagnostic of
/// interest for maps where the construction is not known to succeed.
pub fn witness_diagnostics(
    phi: &FiniteBlaschkeProduct,
    candidates: &[Complex],
    peak_power: usize,
    depth: usize,
) -> Result<(DiskFunction, WitnessReport)> {
    if candidates.is_empty() || peak_power == 0 {
        return Err(Error::InvalidArgument(
            "need at least one candidate point and peak_power >= 1".into(),
        ));
    }
    let (x0, separation) = candidates
        .iter()
        .map(|&x| (x, (phi.eval(x) - x).norm()))
        .fold((candidates[0], f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let x0 = circle::normalize(x0);
    let f = peak_polynomial(x0, peak_power);
    let w = x0.conj();
    let half = |z: Complex| 0.5 * (Complex::new(1.0, 0.0) + w * z).norm();
    let (base, _) = circle::sup_on_circle(
        |t| {
            let z = circle::on_circle(t);
            half(z) * half(phi.eval(z))
        },
        SAMPLE_GRID,
        3,
    );
    let s2 = base.powi(peak_power as i32);
    let decay = monomial_spectral_radius(phi, &f, 1, depth, SAMPLE_GRID)?;
    let report = WitnessReport {
        x0,
        peak_power,
        separation,
        separation_failed: separation <= SEPARATION_THRESHOLD,
        s2,
        decay,
        certificate: f.eval(x0).norm(),
    };
    Ok((f, report))
}
