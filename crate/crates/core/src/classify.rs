//! Fixed points, the Denjoy-Wolff point, the elliptic/hyperbolic/parabolic
//! trichotomy and the hyperbolic step.

use crate::blaschke::{FiniteBlaschkeProduct, FIXED_POINT_TOLERANCE};
use crate::circle;
use crate::error::{Error, Result};
use crate::mobius::MobiusTransform;
use crate::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Width of the band around the circle in which a fixed point counts as a
/// boundary fixed point.
pub const BOUNDARY_BAND: f64 = 1e-8;
/// `|multiplier - 1|` below this declares a parabolic Denjoy-Wolff point.
pub const PARABOLIC_TOLERANCE: f64 = 1e-9;
/// `|S|` below this declares zero hyperbolic step for parabolic maps.
pub const STEP_TOLERANCE: f64 = 1e-9;
/// Roots this close to the circle are tested as boundary fixed points.
pub const NEAR_CIRCLE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    Interior,
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub point: Complex,
    pub location: Location,
    /// `phi'(point)`; the positive angular derivative for boundary points.
    pub multiplier: Complex,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    Zero,
    Positive,
    /// The step was not determined.
    NotApplicable,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::Elliptic => "elliptic",
            Kind::Hyperbolic => "hyperbolic",
            Kind::Parabolic => "parabolic",
        })
    }
}

impl std::fmt::Display for Step {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Step::Zero => "zero",
            Step::Positive => "positive",
            Step::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: Kind,
    pub denjoy_wolff: FixedPointRecord,
    pub step: Step,
    /// `S = sum (1 - |b_i|^2) / |1 - b_i|^2 * Im b_i` for the map rotated so
    /// that its Denjoy-Wolff point is 1; only computed for parabolic maps.
    pub criterion_value: Option<f64>,
    pub boundary_fixed_points: Vec<FixedPointRecord>,
}

impl Classification {
    /// Elliptic maps and parabolic maps of zero step: the cases in which the
    /// recurrent points are dense in the circle.
    pub fn is_zero_step(&self) -> bool {
        self.step == Step::Zero
    }
}

/// Fixed points in the closed disk with multipliers and multiplicities.
///
/// Roots within [`NEAR_CIRCLE`] of the circle are moved onto it and polished
/// there; they count as boundary fixed points when the residual is within
/// the rounding floor `eps |phi'|` of [`FIXED_POINT_TOLERANCE`].
pub fn fixed_points(phi: &FiniteBlaschkeProduct) -> Result<Vec<FixedPointRecord>> {
    let roots = phi.fixed_point_polynomial().roots()?;
    let mut out: Vec<FixedPointRecord> = Vec::new();
    for r in roots {
        let m = r.value.norm();
        if (m - 1.0).abs() <= NEAR_CIRCLE {
            let mut z = circle::normalize(r.value);
            if r.multiplicity == 1 {
                z = polish_boundary(phi, z);
            }
            let residual = (phi.eval(z) - z).norm();
            let floor = 64.0 * f64::EPSILON * phi.boundary_speed(z);
            if residual <= FIXED_POINT_TOLERANCE + floor {
                match out
                    .iter_mut()
                    .find(|q| q.location == Location::Boundary && (q.point - z).norm() < 1e-9)
                {
                    Some(q) => q.multiplicity += r.multiplicity,
                    None => out.push(FixedPointRecord {
                        point: z,
                        location: Location::Boundary,
                        multiplier: Complex::new(phi.boundary_derivative(z)?, 0.0),
                        multiplicity: r.multiplicity,
                    }),
                }
                continue;
            }
            if (m - 1.0).abs() <= BOUNDARY_BAND {
                return Err(Error::RootSolveFailure {
                    sweeps: 0,
                    worst: residual,
                    residuals: vec![residual],
                });
            }
        }
        if m >= 1.0 {
            continue;
        }
        let z = if r.multiplicity == 1 {
            polish_interior(phi, r.value)
        } else {
            r.value
        };
        out.push(FixedPointRecord {
            point: z,
            location: Location::Interior,
            multiplier: phi.derivative(z)?,
            multiplicity: r.multiplicity,
        });
    }
    out.sort_by(|a, b| circle::angle(a.point).total_cmp(&circle::angle(b.point)));
    Ok(out)
}

/// Newton on `phi(z) - z`, kept while the residual drops.
fn polish_interior(phi: &FiniteBlaschkeProduct, mut z: Complex) -> Complex {
    let mut residual = (phi.eval(z) - z).norm();
    for _ in 0..4 {
        let Ok(d) = phi.derivative(z) else { break };
        let next = z - (phi.eval(z) - z) / (d - 1.0);
        let r = (phi.eval(next) - next).norm();
        if !(r < residual) || next.norm() >= 1.0 {
            break;
        }
        (z, residual) = (next, r);
    }
    z
}

/// Newton on the angle, where the lift minus the identity has slope
/// `|phi'| - 1`.
fn polish_boundary(phi: &FiniteBlaschkeProduct, mut z: Complex) -> Complex {
    let mut residual = (phi.eval(z) - z).norm();
    for _ in 0..4 {
        let slope = phi.boundary_speed(z) - 1.0;
        if slope == 0.0 {
            break;
        }
        let miss = (phi.eval(z) / z).arg();
        let next = circle::on_circle(circle::angle(z) - miss / slope);
        let r = (phi.eval(next) - next).norm();
        if !(r < residual) {
            break;
        }
        (z, residual) = (next, r);
    }
    z
}

fn pick_denjoy_wolff(records: &[FixedPointRecord]) -> Result<FixedPointRecord> {
    let interior: Vec<_> = records
        .iter()
        .filter(|r| r.location == Location::Interior)
        .collect();
    match interior.len() {
        1 => return Ok(interior[0].clone()),
        0 => {}
        _ => {
            return Err(Error::AmbiguousDenjoyWolff {
                candidates: interior.into_iter().cloned().collect(),
            })
        }
    }
    let candidates: Vec<_> = records
        .iter()
        .filter(|r| r.multiplier.re <= 1.0 + PARABOLIC_TOLERANCE)
        .cloned()
        .collect();
    if candidates.len() == 1 {
        Ok(candidates[0].clone())
    } else {
        Err(Error::AmbiguousDenjoyWolff { candidates })
    }
}

pub fn denjoy_wolff(phi: &FiniteBlaschkeProduct) -> Result<FixedPointRecord> {
    pick_denjoy_wolff(&fixed_points(phi)?)
}

/// The step criterion sum, evaluated for the zeros `b_i = a_i conj(z0)` of
/// the map rotated so that the boundary point `z0` moves to 1.
pub fn step_criterion(phi: &FiniteBlaschkeProduct, z0: Complex) -> f64 {
    let rot = z0.conj();
    phi.zeros()
        .iter()
        .map(|&a| {
            let b = a * rot;
            (1.0 - b.norm_sqr()) / (Complex::new(1.0, 0.0) - b).norm_sqr() * b.im
        })
        .sum()
}

pub fn classify(phi: &FiniteBlaschkeProduct) -> Result<Classification> {
    let records = fixed_points(phi)?;
    let dw = pick_denjoy_wolff(&records)?;
    let boundary_fixed_points: Vec<_> = records
        .into_iter()
        .filter(|r| r.location == Location::Boundary)
        .collect();
    let (kind, step, criterion_value) = if dw.location == Location::Interior {
        (Kind::Elliptic, Step::Zero, None)
    } else if dw.multiplier.re < 1.0 - PARABOLIC_TOLERANCE {
        (Kind::Hyperbolic, Step::Positive, None)
    } else {
        let s = step_criterion(phi, dw.point);
        let step = if s.abs() <= STEP_TOLERANCE {
            Step::Zero
        } else {
            Step::Positive
        };
        (Kind::Parabolic, step, Some(s))
    };
    Ok(Classification {
        kind,
        denjoy_wolff: dw,
        step,
        criterion_value,
        boundary_fixed_points,
    })
}

/// Poincare distance `log((1 + rho) / (1 - rho))`, `rho = |z - w| / |1 - conj(z) w|`.
pub fn hyperbolic_distance(z: Complex, w: Complex) -> Result<f64> {
    for p in [z, w] {
        if !(p.norm() < 1.0) {
            return Err(Error::OutsideOpenDisk { modulus: p.norm() });
        }
    }
    let den = (Complex::new(1.0, 0.0) - z.conj() * w).norm();
    let rho = (z - w).norm() / den;
    // 1 - rho^2 without cancellation
    let one_minus = (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr()) / (den * den);
    Ok(2.0 * rho.ln_1p() - one_minus.ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSequence {
    /// `d(phi^n(z), phi^{n+1}(z))` for `n = 0, 1, ...`.
    pub distances: Vec<f64>,
    /// Set when an iterate came within [`PRECISION_MARGIN`] of the circle and
    /// the sequence was cut short.
    pub precision_loss: bool,
}

/// Iterates closer than this to the circle end a step sequence. The
/// distance between two such points carries an error of roughly
/// `eps / (1 - |z|)`, so this keeps the terms accurate to about `1e-10`.
pub const PRECISION_MARGIN: f64 = 1e-6;

impl StepSequence {
    /// Diagnostic only: `Some(true)` when the last 50 distances all exceed
    /// `1e-3`, `None` when fewer than 50 terms are available.
    pub fn suggests_positive_step(&self) -> Option<bool> {
        if self.distances.len() < 50 {
            return None;
        }
        Some(self.distances.iter().rev().take(50).all(|&d| d > 1e-3))
    }
}

pub fn empirical_step_sequence(
    phi: &FiniteBlaschkeProduct,
    z: Complex,
    n_max: usize,
) -> Result<StepSequence> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideOpenDisk { modulus: z.norm() });
    }
    let mut distances = Vec::with_capacity(n_max + 1);
    let mut cur = z;
    for _ in 0..=n_max {
        let next = phi.eval(cur);
        if next.norm() > 1.0 - PRECISION_MARGIN {
            return Ok(StepSequence {
                distances,
                precision_loss: true,
            });
        }
        distances.push(hyperbolic_distance(cur, next)?);
        cur = next;
    }
    Ok(StepSequence {
        distances,
        precision_loss: false,
    })
}

/// `psi = tau^{-1} o phi o tau`.
///
/// The zeros of `psi` are `tau^{-1}` of the solutions of `phi(w) = tau(0)`;
/// the front factor is fixed by matching `psi` at a test point.
pub fn conjugate_map(
    phi: &FiniteBlaschkeProduct,
    tau: &MobiusTransform,
) -> Result<FiniteBlaschkeProduct> {
    let inv = tau.inverse();
    let zeros: Vec<Complex> = if tau.c() == Complex::new(0.0, 0.0) {
        phi.zeros().iter().map(|&a| inv.apply(a)).collect()
    } else {
        phi.preimages(tau.apply(Complex::new(0.0, 0.0)))?
            .into_iter()
            .map(|w| inv.apply(w))
            .collect()
    };
    let zero_part = |z: Complex| {
        zeros.iter().fold(Complex::new(1.0, 0.0), |acc, &b| {
            acc * (z - b) / (Complex::new(1.0, 0.0) - b.conj() * z)
        })
    };
    let test = [0.0, 0.5, -0.5]
        .into_iter()
        .map(|x| Complex::new(x, 0.0))
        .chain(std::iter::once(Complex::new(0.0, 0.5)))
        .find(|&z| zero_part(z).norm() > 1e-8)
        .unwrap_or(Complex::new(0.0, 0.5));
    let target = inv.apply(phi.eval(tau.apply(test)));
    let u = target / zero_part(test);
    FiniteBlaschkeProduct::new(circle::normalize(u), zeros)
}

/// Elliptic maps: `tau(0)` is the Denjoy-Wolff point, so the conjugate fixes 0.
/// Otherwise the rotation taking 1 to the Denjoy-Wolff point.
pub fn normalizing_mobius(classification: &Classification) -> MobiusTransform {
    let p = classification.denjoy_wolff.point;
    match classification.denjoy_wolff.location {
        Location::Interior => {
            MobiusTransform::sending_zero_to(p).expect("interior point lies in the open disk")
        }
        Location::Boundary => MobiusTransform::rotation(p),
    }
}

/// A random product of the given degree with zeros uniform in the disk of
/// radius 0.8 and front factor uniform on the circle.
pub fn random_product<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> Result<FiniteBlaschkeProduct> {
    let zeros = (0..degree)
        .map(|_| {
            let r = 0.8 * rng.gen::<f64>().sqrt();
            Complex::from_polar(r, TAU * rng.gen::<f64>())
        })
        .collect();
    FiniteBlaschkeProduct::new(circle::on_circle(TAU * rng.gen::<f64>()), zeros)
}

/// The parabolic map with zeros `i/sqrt(3)` and `-1/3` whose front factor
/// puts its Denjoy-Wolff point at 1; it has positive hyperbolic step.
pub fn parabolic_positive_example() -> FiniteBlaschkeProduct {
    let a1 = Complex::new(0.0, 1.0 / 3f64.sqrt());
    let a2 = Complex::new(-1.0 / 3.0, 0.0);
    let p = (Complex::new(1.0, 0.0) - a1) * (Complex::new(1.0, 0.0) - a2);
    FiniteBlaschkeProduct::new(circle::normalize(p.conj() / p), vec![a1, a2])
        .expect("valid example")
}
