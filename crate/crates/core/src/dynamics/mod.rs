//! Dynamics of the boundary map: Julia-set samples, periodic points, the
//! closure of the recurrent points, and ergodic statistics.

mod julia;
mod periodic;

pub use julia::{
    backward_orbit_sample, backward_orbit_sample_with, BranchRule, JuliaSample, SampleMethod,
    SampleOptions,
};
pub use periodic::{
    orbit_speed, periodic_points, periodic_points_with, PeriodicPoint, PeriodicRoute,
    DEDUPE_RADIUS, DEFAULT_DEGREE_CAP, PERIODIC_TOLERANCE,
};

use crate::blaschke::FiniteBlaschkeProduct;
use crate::circle;
use crate::classify::{Classification, Kind, Step};
use crate::error::{Error, Result};
use crate::semicrossed::DiskFunction;
use crate::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Floor applied to `log |f|`.
pub const LOG_FLOOR: f64 = -690.775_527_898_213_7; // ln(1e-300)

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosureMode {
    /// Recurrent points are dense: their closure is the whole circle.
    FullCircle,
    /// The closure is the Julia set together with the Denjoy-Wolff point.
    JuliaPlusDW,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrentClosureModel {
    pub mode: ClosureMode,
    pub julia: Option<JuliaSample>,
    pub dw_point: Complex,
}

impl RecurrentClosureModel {
    /// Points representing the closure: an equispaced grid of `grid` points
    /// for the full circle, otherwise the Julia sample and the Denjoy-Wolff
    /// point.
    pub fn sample_points(&self, grid: usize) -> Vec<Complex> {
        match (&self.mode, &self.julia) {
            (ClosureMode::JuliaPlusDW, Some(j)) => {
                let mut pts = j.points.clone();
                pts.push(self.dw_point);
                pts
            }
            _ => circle::grid(grid, circle::GRID_OFFSET)
                .map(circle::on_circle)
                .collect(),
        }
    }
}

/// Whether the recurrent points of `phi` are dense in the circle.
pub fn recurrent_points_dense(classification: &Classification) -> bool {
    matches!(
        (classification.kind, classification.step),
        (Kind::Elliptic, _) | (Kind::Parabolic, Step::Zero)
    )
}

pub fn recurrent_closure(
    phi: &FiniteBlaschkeProduct,
    classification: &Classification,
    sample: &SampleOptions,
) -> Result<RecurrentClosureModel> {
    let dw_point = classification.denjoy_wolff.point;
    if recurrent_points_dense(classification) {
        return Ok(RecurrentClosureModel {
            mode: ClosureMode::FullCircle,
            julia: None,
            dw_point,
        });
    }
    Ok(RecurrentClosureModel {
        mode: ClosureMode::JuliaPlusDW,
        julia: Some(backward_orbit_sample_with(phi, sample)?),
        dw_point,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitDensity {
    /// Every arc of length `epsilon` meets the orbit.
    pub dense: bool,
    /// Length of the largest arc missed by the orbit.
    pub worst_gap: f64,
}

/// Falsifiable density diagnostic for the forward orbit of `z0`
/// (`n_steps` iterates plus the starting point).
pub fn orbit_density_check(
    phi: &FiniteBlaschkeProduct,
    z0: Complex,
    n_steps: usize,
    epsilon: f64,
) -> Result<OrbitDensity> {
    if (z0.norm() - 1.0).abs() > crate::blaschke::DOMAIN_SLACK {
        return Err(Error::InvalidArgument(format!(
            "orbit start must lie on the circle, |z0| = {}",
            z0.norm()
        )));
    }
    let mut w = circle::normalize(z0);
    let mut angles = Vec::with_capacity(n_steps + 1);
    angles.push(circle::angle(w));
    for _ in 0..n_steps {
        w = circle::normalize(phi.eval(w));
        angles.push(circle::angle(w));
    }
    let worst_gap = circle::largest_gap(&angles);
    Ok(OrbitDensity {
        dense: worst_gap <= epsilon,
        worst_gap,
    })
}

/// Kolmogorov-Smirnov distance between the angles of `phi(x)`, for
/// `n_samples` uniform `x` on the circle, and the uniform distribution.
pub fn measure_preservation_statistic(
    phi: &FiniteBlaschkeProduct,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    if n_samples < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 samples, got {n_samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u: Vec<f64> = (0..n_samples)
        .map(|_| {
            let z = circle::on_circle(TAU * rng.gen::<f64>());
            circle::angle(phi.eval(z)) / TAU
        })
        .collect();
    u.sort_by(f64::total_cmp);
    let n = n_samples as f64;
    Ok(u.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).max((i + 1) as f64 / n - x))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffAverage {
    pub value: f64,
    /// Some term had `|f| < 1e-300` and contributed [`LOG_FLOOR`].
    pub clipped: bool,
}

/// `(1/n) sum_{k<n} log |f(phi^k(z))|` along the circle orbit of `z`.
pub fn birkhoff_log_average(
    phi: &FiniteBlaschkeProduct,
    f: &DiskFunction,
    z: Complex,
    n: usize,
) -> Result<BirkhoffAverage> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if f.is_zero() {
        return Err(Error::InvalidArgument("f must not vanish identically".into()));
    }
    let mut w = circle::normalize(z);
    let mut sum = 0.0;
    let mut clipped = false;
    for _ in 0..n {
        let m = f.eval(w).norm();
        if m < 1e-300 {
            clipped = true;
            sum += LOG_FLOOR;
        } else {
            sum += m.ln();
        }
        w = circle::normalize(phi.eval(w));
    }
    Ok(BirkhoffAverage {
        value: sum / n as f64,
        clipped,
    })
}
