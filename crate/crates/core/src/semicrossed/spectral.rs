//! Lower bounds for the spectral radius of monomials `U^n f`.

use super::DiskFunction;
use crate::blaschke::FiniteBlaschkeProduct;
use crate::circle;
use crate::dynamics::{periodic_points, DEFAULT_DEGREE_CAP, LOG_FLOOR};
use crate::error::{Error, Result};
use crate::Complex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralRadiusEstimate {
    /// Entry `m - 1` is `(max_x prod_{j<m} |f(phi^{jn}(x))|)^(1/m)` over the grid.
    pub lower_bounds: Vec<f64>,
    /// The last entry.
    pub extrapolated: f64,
    /// Grid point attaining the last entry.
    pub witness_point: Option<Complex>,
}

fn log_abs(f: &DiskFunction, z: Complex) -> f64 {
    let m = f.eval(z).norm();
    if m < 1e-300 {
        LOG_FLOOR
    } else {
        m.ln()
    }
}

/// Since `F^m = U^(nm) prod_{j<m} f o phi^(jn)` and `||U^k g|| = ||g||`,
/// the entries evaluate `||F^m||^(1/m)` for `F = U^n f` up to grid
/// resolution. The grid is shifted off the dyadic angles.
pub fn monomial_spectral_radius(
    phi: &FiniteBlaschkeProduct,
    f: &DiskFunction,
    n: usize,
    depth: usize,
    grid: usize,
) -> Result<SpectralRadiusEstimate> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("f must not vanish identically".into()));
    }
    if n == 0 || depth == 0 || grid < 256 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1, depth >= 1, grid >= 256 (got {n}, {depth}, {grid})"
        )));
    }
    let mut points: Vec<Complex> = circle::grid(grid, circle::GRID_OFFSET)
        .map(circle::on_circle)
        .collect();
    let starts = points.clone();
    let mut sums = vec![0.0; grid];
    let mut lower_bounds = Vec::with_capacity(depth);
    let mut best_index = 0;
    for m in 1..=depth {
        let mut best = f64::NEG_INFINITY;
        for (i, z) in points.iter_mut().enumerate() {
            sums[i] += log_abs(f, *z);
            if sums[i] > best {
                best = sums[i];
                best_index = i;
            }
            for _ in 0..n {
                *z = circle::normalize(phi.eval(*z));
            }
        }
        lower_bounds.push((best / m as f64).exp());
    }
    Ok(SpectralRadiusEstimate {
        extrapolated: *lower_bounds.last().unwrap(),
        lower_bounds,
        witness_point: Some(starts[best_index]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicBound {
    /// `max |f(x0)|` over periodic points of period at most `n_max`.
    pub bound: f64,
    /// The maximising point and its minimal period `p`; the spectral radius
    /// of `U^p f` is at least `bound`.
    pub witness: Option<(Complex, usize)>,
}

pub fn periodic_lower_bound(
    phi: &FiniteBlaschkeProduct,
    f: &DiskFunction,
    n_max: usize,
) -> Result<PeriodicBound> {
    let mut out = PeriodicBound {
        bound: 0.0,
        witness: None,
    };
    if f.is_zero() {
        return Ok(out);
    }
    for n in 1..=n_max {
        for p in periodic_points(phi, n, DEFAULT_DEGREE_CAP)? {
            let v = f.eval(p.point).norm();
            if v > out.bound {
                out = PeriodicBound {
                    bound: v,
                    witness: Some((p.point, p.period)),
                };
            }
        }
    }
    Ok(out)
}

/// `exp` of the midpoint-rule average of `log |f|` over `grid` circle points:
/// `exp(int log |f| dm)`, a lower bound for the spectral radius of `U f`
/// when `phi` is elliptic and fixes 0.
pub fn ergodic_lower_bound(f: &DiskFunction, grid: usize) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("f must not vanish identically".into()));
    }
    log_mean_exp(|z| f.eval(z), grid)
}

fn log_mean_exp(f: impl Fn(Complex) -> Complex, grid: usize) -> Result<f64> {
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let mut clipped = 0usize;
    let mut sum = 0.0;
    for t in circle::grid(grid, 0.5) {
        let m = f(circle::on_circle(t)).norm();
        if m < 1e-300 {
            clipped += 1;
            sum += LOG_FLOOR;
        } else {
            sum += m.ln();
        }
    }
    let fraction = clipped as f64 / grid as f64;
    if fraction > 0.1 {
        return Err(Error::QuadratureDiverged { fraction });
    }
    Ok((sum / grid as f64).exp())
}
