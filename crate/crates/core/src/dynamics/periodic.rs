//! Periodic points on the circle.

use crate::blaschke::FiniteBlaschkeProduct;
use crate::circle;
use crate::error::{Error, Result};
use crate::poly::ComplexPolynomial;
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// `|phi^n(z) - z|` accepted for a periodic point.
pub const PERIODIC_TOLERANCE: f64 = 1e-7;
/// Angular radius within which two solutions are the same point.
pub const DEDUPE_RADIUS: f64 = 1e-6;
pub const DEFAULT_DEGREE_CAP: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub point: Complex,
    /// Minimal period; divides the requested `n`.
    pub period: usize,
    /// `|(phi^n)'(point)|`; the point is repelling when this exceeds 1.
    pub multiplier_modulus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PeriodicRoute {
    /// Symbolic when the composed degree is within the cap and every root
    /// verifies, the circle route otherwise.
    #[default]
    Auto,
    /// Roots of the composed fixed-point polynomial.
    Symbolic,
    /// Level crossings and Newton iteration on the lift of `phi^n`.
    Circle,
}

/// Boundary solutions of `phi^n(z) = z`, sorted by angle.
pub fn periodic_points(
    phi: &FiniteBlaschkeProduct,
    n: usize,
    degree_cap: usize,
) -> Result<Vec<PeriodicPoint>> {
    periodic_points_with(phi, n, degree_cap, PeriodicRoute::Auto)
}

pub fn periodic_points_with(
    phi: &FiniteBlaschkeProduct,
    n: usize,
    degree_cap: usize,
    route: PeriodicRoute,
) -> Result<Vec<PeriodicPoint>> {
    if n == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    let degree = composed_degree(phi.degree(), n).map(|d| d.saturating_add(1));
    let within_cap = matches!(degree, Some(d) if d <= degree_cap);
    let points = match route {
        PeriodicRoute::Symbolic => {
            if !within_cap {
                return Err(Error::DegreeCapExceeded {
                    degree: degree.unwrap_or(usize::MAX),
                    cap: degree_cap,
                });
            }
            symbolic(phi, n)?
        }
        PeriodicRoute::Circle => on_circle(phi, n),
        PeriodicRoute::Auto => match within_cap.then(|| symbolic(phi, n)) {
            Some(Ok(p)) => p,
            _ => on_circle(phi, n),
        },
    };
    Ok(points
        .into_iter()
        .map(|z| PeriodicPoint {
            point: z,
            period: minimal_period(phi, z, n),
            multiplier_modulus: orbit_speed(phi, z, n),
        })
        .collect())
}

fn composed_degree(n_deg: usize, n: usize) -> Option<usize> {
    u32::try_from(n).ok().and_then(|e| n_deg.checked_pow(e))
}

fn residual(phi: &FiniteBlaschkeProduct, z: Complex, n: usize) -> f64 {
    let mut w = z;
    for _ in 0..n {
        w = circle::normalize(phi.eval(w));
    }
    (w - z).norm()
}

fn minimal_period(phi: &FiniteBlaschkeProduct, z: Complex, n: usize) -> usize {
    (1..=n)
        .filter(|p| n % p == 0)
        .find(|&p| residual(phi, z, p) <= PERIODIC_TOLERANCE)
        .unwrap_or(n)
}

/// `prod_{j<n} |phi'(phi^j(z))|` along a circle orbit.
pub fn orbit_speed(phi: &FiniteBlaschkeProduct, z: Complex, n: usize) -> f64 {
    let mut w = z;
    let mut m = 1.0;
    for _ in 0..n {
        m *= phi.boundary_speed(w);
        w = circle::normalize(phi.eval(w));
    }
    m
}

/// Numerator and denominator of `phi^n`.
fn compose_rational(phi: &FiniteBlaschkeProduct, n: usize) -> (ComplexPolynomial, ComplexPolynomial) {
    let mut p = ComplexPolynomial::identity();
    let mut q = ComplexPolynomial::constant(Complex::new(1.0, 0.0));
    for _ in 0..n {
        let mut num = ComplexPolynomial::constant(phi.u());
        let mut den = ComplexPolynomial::constant(Complex::new(1.0, 0.0));
        for &a in phi.zeros() {
            num = &num * &(&p - &q.scale(a));
            den = &den * &(&q - &p.scale(a.conj()));
        }
        p = num;
        q = den;
    }
    (p, q)
}

fn symbolic(phi: &FiniteBlaschkeProduct, n: usize) -> Result<Vec<Complex>> {
    let (p, q) = compose_rational(phi, n);
    let fixed = &p - &(&ComplexPolynomial::identity() * &q);
    let roots = fixed.roots()?;
    let full = composed_degree(phi.degree(), n).unwrap_or(usize::MAX).saturating_add(1);
    let mut interior = 0;
    let mut boundary = 0;
    let mut out = Vec::new();
    let mut residuals = Vec::new();
    for r in roots {
        let m = r.value.norm();
        if m < 1.0 - DEDUPE_RADIUS {
            interior += r.multiplicity;
        } else if m <= 1.0 + DEDUPE_RADIUS {
            let z = circle::normalize(r.value);
            let res = residual(phi, z, n);
            residuals.push(res);
            boundary += r.multiplicity;
            out.push(z);
        }
    }
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    if interior > 1 || boundary + 2 * interior != full || worst > PERIODIC_TOLERANCE {
        return Err(Error::RootSolveFailure {
            sweeps: 0,
            worst,
            residuals,
        });
    }
    out.sort_by(|a, b| circle::angle(*a).total_cmp(&circle::angle(*b)));
    Ok(out)
}

/// Lift of `phi^n` and its derivative.
fn lift_n(phi: &FiniteBlaschkeProduct, theta: f64, n: usize) -> (f64, f64) {
    let mut t = theta;
    let mut d = 1.0;
    for _ in 0..n {
        d *= phi.boundary_speed(circle::on_circle(t));
        t = phi.lift(t);
    }
    (t, d)
}

/// `Theta_n(theta) - theta` reduced to `(-pi, pi]`, with derivative.
fn reduced(phi: &FiniteBlaschkeProduct, theta: f64, n: usize) -> (f64, f64) {
    let (t, d) = lift_n(phi, theta, n);
    let g = t - theta;
    (g - TAU * (g / TAU).round(), d - 1.0)
}

fn on_circle(phi: &FiniteBlaschkeProduct, n: usize) -> Vec<Complex> {
    let nd = phi.degree();
    let total = composed_degree(nd, n).unwrap_or(1 << 20).min(1 << 20);
    let cells = (64 * nd * n).max(8 * total);
    let g = |t: f64| lift_n(phi, t, n).0 - t;
    let mut candidates = Vec::new();

    let mut stack: Vec<(f64, f64, f64, f64, u32)> = Vec::new();
    let h = TAU / cells as f64;
    let mut prev = (0.0, g(0.0));
    for i in 1..=cells {
        let t = h * i as f64;
        let cur = (t, g(t));
        stack.push((prev.0, prev.1, cur.0, cur.1, 0));
        while let Some((a, ga, b, gb, depth)) = stack.pop() {
            if (gb - ga).abs() > PI && depth < 30 {
                let m = 0.5 * (a + b);
                let gm = g(m);
                stack.push((m, gm, b, gb, depth + 1));
                stack.push((a, ga, m, gm, depth + 1));
                continue;
            }
            let (lo, hi) = (ga.min(gb), ga.max(gb));
            let mut k = (lo / TAU).ceil();
            while TAU * k <= hi {
                let level = TAU * k;
                candidates.push(bisect(&g, a, b, ga - level, level));
                k += 1.0;
            }
        }
        prev = cur;
    }

    let seeds = 64 * nd * n;
    for i in 0..seeds {
        let mut t = TAU * (i as f64 + 0.5) / seeds as f64;
        let mut ok = false;
        for _ in 0..60 {
            let (v, dv) = reduced(phi, t, n);
            if v.abs() <= 1e-13 {
                ok = true;
                break;
            }
            if dv == 0.0 || !dv.is_finite() {
                break;
            }
            let step = (v / dv).clamp(-0.5 * h.max(1e-3), 0.5 * h.max(1e-3));
            t -= step;
        }
        if ok {
            candidates.push(t);
        }
    }

    let mut angles: Vec<f64> = candidates
        .into_iter()
        .map(polish(phi, n))
        .map(circle::wrap)
        .filter(|&t| residual(phi, circle::on_circle(t), n) <= PERIODIC_TOLERANCE)
        .collect();
    angles.sort_by(f64::total_cmp);
    merge_angles(phi, n, angles)
        .into_iter()
        .map(circle::on_circle)
        .collect()
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, fa: f64, level: f64) -> f64 {
    if fa == 0.0 {
        return a;
    }
    let sa = fa.signum();
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = g(m) - level;
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn polish(phi: &FiniteBlaschkeProduct, n: usize) -> impl Fn(f64) -> f64 + '_ {
    move |mut t| {
        let mut best = reduced(phi, t, n).0.abs();
        for _ in 0..4 {
            let (v, dv) = reduced(phi, t, n);
            if dv == 0.0 || !dv.is_finite() {
                break;
            }
            let cand = t - v / dv;
            let r = reduced(phi, cand, n).0.abs();
            if !(r < best) || (cand - t).abs() > DEDUPE_RADIUS {
                break;
            }
            best = r;
            t = cand;
        }
        t
    }
}

/// Collapse sorted angles closer than [`DEDUPE_RADIUS`], and neighbouring
/// groups between which the reduced lift never leaves rounding level (the
/// flat stretch around a multiple root).
fn merge_angles(phi: &FiniteBlaschkeProduct, n: usize, angles: Vec<f64>) -> Vec<f64> {
    let flat = |a: f64, b: f64| {
        (1..4).all(|k| {
            let t = a + (b - a) * k as f64 / 4.0;
            reduced(phi, t, n).0.abs() <= 1e-12
        })
    };
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for t in angles {
        if let Some(last) = groups.last_mut() {
            let prev = *last.last().unwrap();
            if t - prev <= DEDUPE_RADIUS || flat(prev, t) {
                last.push(t);
                continue;
            }
        }
        groups.push(vec![t]);
    }
    if groups.len() > 1 {
        let first = groups[0][0] + TAU;
        let last = *groups.last().unwrap().last().unwrap();
        if first - last <= DEDUPE_RADIUS || flat(last, first) {
            let head = groups.remove(0);
            groups
                .last_mut()
                .unwrap()
                .extend(head.into_iter().map(|t| t + TAU));
        }
    }
    groups
        .into_iter()
        .map(|g| circle::wrap(0.5 * (g[0] + g[g.len() - 1])))
        .collect()
}
