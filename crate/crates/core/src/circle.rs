//! Angle bookkeeping on the unit circle.
//!
//! Points of the circle are stored as complex numbers but compared by angle
//! with the wrap-around metric `min(|d|, 2pi - |d|)`.

use crate::Complex;
use std::f64::consts::TAU;

/// Fractional offset used for sampling grids. An irrational shift keeps grid
/// points off the dyadic rationals, which the doubling map sends to 1 in
/// finitely many steps.
pub const GRID_OFFSET: f64 = 0.618_033_988_749_894_8;

/// Angle of `z` in `[0, 2pi)`.
pub fn angle(z: Complex) -> f64 {
    wrap(z.im.atan2(z.re))
}

/// Reduce an angle to `[0, 2pi)`.
pub fn wrap(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU || t == 0.0 {
        0.0
    } else {
        t
    }
}

pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(TAU - d)
}

pub fn on_circle(theta: f64) -> Complex {
    Complex::from_polar(1.0, theta)
}

/// Project onto the circle.
pub fn normalize(z: Complex) -> Complex {
    z / z.norm()
}

/// `n` equispaced angles shifted by `offset` cells.
pub fn grid(n: usize, offset: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| TAU * (k as f64 + offset) / n as f64)
}

fn sorted(angles: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = angles.iter().map(|&a| wrap(a)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Gaps between cyclically consecutive angles (they sum to `2pi`).
pub fn gaps(angles: &[f64]) -> Vec<f64> {
    let v = sorted(angles);
    match v.len() {
        0 => Vec::new(),
        1 => vec![TAU],
        n => (0..n)
            .map(|i| {
                if i + 1 < n {
                    v[i + 1] - v[i]
                } else {
                    v[0] + TAU - v[n - 1]
                }
            })
            .collect(),
    }
}

/// Length of the largest arc containing none of the angles.
pub fn largest_gap(angles: &[f64]) -> f64 {
    if angles.is_empty() {
        return TAU;
    }
    gaps(angles).into_iter().fold(0.0, f64::max)
}

/// Fraction of the circle within arc distance `eps` of some angle.
pub fn covered_fraction(angles: &[f64], eps: f64) -> f64 {
    if angles.is_empty() {
        return 0.0;
    }
    let uncovered: f64 = gaps(angles).iter().map(|g| (g - 2.0 * eps).max(0.0)).sum();
    (1.0 - uncovered / TAU).clamp(0.0, 1.0)
}

/// Supremum of a smooth periodic function: grid scan, then golden-section
/// refinement around the `top` best grid cells.
pub fn sup_on_circle(f: impl Fn(f64) -> f64, grid_size: usize, top: usize) -> (f64, f64) {
    let h = TAU / grid_size as f64;
    let mut samples: Vec<(f64, f64)> = grid(grid_size, 0.0).map(|t| (f(t), t)).collect();
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = samples[0];
    for &(_, t) in samples.iter().take(top) {
        let cand = golden_max(&f, t - h, t + h, 1e-12);
        if cand.0 > best.0 {
            best = cand;
        }
    }
    (best.0, wrap(best.1))
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (f1, x1)
    } else {
        (f2, x2)
    }
}
