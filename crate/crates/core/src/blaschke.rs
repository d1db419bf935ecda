//! Finite Blaschke products `phi(z) = u prod_i (z - a_i) / (1 - conj(a_i) z)`.

use crate::circle;
use crate::error::{Error, Result};
use crate::poly::ComplexPolynomial;
use crate::Complex;
use serde::{Deserialize, Serialize};

/// Allowed defect `| |u| - 1 |` of the front factor.
pub const UNIMODULAR_TOLERANCE: f64 = 1e-12;
/// Zeros must satisfy `|a_i| < 1 - ZERO_MARGIN`.
pub const ZERO_MARGIN: f64 = 1e-12;
/// Points with `|z| <= 1 + DOMAIN_SLACK` are accepted as lying in the closed disk.
pub const DOMAIN_SLACK: f64 = 1e-9;
/// Tolerance for "this point is fixed" on the boundary.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-8;

/// A validated non-trivial finite Blaschke product.
///
/// Zeros are kept in the order given; repeated entries encode multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBlaschke", into = "RawBlaschke")]
pub struct FiniteBlaschkeProduct {
    u: Complex,
    zeros: Vec<Complex>,
}

#[derive(Serialize, Deserialize)]
struct RawBlaschke {
    u: Complex,
    zeros: Vec<Complex>,
}

impl TryFrom<RawBlaschke> for FiniteBlaschkeProduct {
    type Error = Error;

    fn try_from(raw: RawBlaschke) -> Result<Self> {
        Self::new(raw.u, raw.zeros)
    }
}

impl From<FiniteBlaschkeProduct> for RawBlaschke {
    fn from(b: FiniteBlaschkeProduct) -> Self {
        RawBlaschke {
            u: b.u,
            zeros: b.zeros,
        }
    }
}

fn finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl FiniteBlaschkeProduct {
    pub fn new(u: Complex, zeros: Vec<Complex>) -> Result<Self> {
        if !finite(u) || (u.norm() - 1.0).abs() > UNIMODULAR_TOLERANCE {
            return Err(Error::NonUnimodularFactor { modulus: u.norm() });
        }
        for (index, &a) in zeros.iter().enumerate() {
            if !finite(a) || a.norm() >= 1.0 - ZERO_MARGIN {
                return Err(Error::ZeroOutsideDisk {
                    index,
                    modulus: a.norm(),
                });
            }
        }
        if zeros.len() < 2 {
            return Err(Error::TrivialDegree {
                degree: zeros.len(),
            });
        }
        Ok(Self { u, zeros })
    }

    /// The monomial `u z^n`.
    pub fn monomial(u: Complex, n: usize) -> Result<Self> {
        Self::new(u, vec![Complex::new(0.0, 0.0); n])
    }

    pub fn u(&self) -> Complex {
        self.u
    }

    pub fn zeros(&self) -> &[Complex] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    fn check_domain(z: Complex) -> Result<()> {
        if !finite(z) || z.norm() > 1.0 + DOMAIN_SLACK {
            return Err(Error::OutsideDomain { modulus: z.norm() });
        }
        Ok(())
    }

    pub fn evaluate(&self, z: Complex) -> Result<Complex> {
        Self::check_domain(z)?;
        let mut num = self.u;
        let mut den = Complex::new(1.0, 0.0);
        for &a in &self.zeros {
            num *= z - a;
            den *= Complex::new(1.0, 0.0) - a.conj() * z;
        }
        if den.norm() == 0.0 {
            return Err(Error::Pole);
        }
        Ok(num / den)
    }

    /// Evaluation without the domain check, for hot loops on points already
    /// known to lie in the closed disk.
    pub(crate) fn eval(&self, z: Complex) -> Complex {
        self.zeros.iter().fold(self.u, |acc, &a| {
            acc * (z - a) / (Complex::new(1.0, 0.0) - a.conj() * z)
        })
    }

    /// `phi'(z)`, through the logarithmic derivative away from the zeros and
    /// the product rule next to them.
    pub fn derivative(&self, z: Complex) -> Result<Complex> {
        Self::check_domain(z)?;
        let one = Complex::new(1.0, 0.0);
        let near_zero = self.zeros.iter().any(|&a| (z - a).norm() < 1e-6);
        if !near_zero {
            let phi = self.eval(z);
            let log_deriv: Complex = self
                .zeros
                .iter()
                .map(|&a| (1.0 - a.norm_sqr()) / ((z - a) * (one - a.conj() * z)))
                .sum();
            return Ok(phi * log_deriv);
        }
        let factors: Vec<Complex> = self
            .zeros
            .iter()
            .map(|&a| (z - a) / (one - a.conj() * z))
            .collect();
        let mut total = Complex::new(0.0, 0.0);
        for (i, &a) in self.zeros.iter().enumerate() {
            let den = one - a.conj() * z;
            let mut term = (1.0 - a.norm_sqr()) / (den * den);
            for (j, f) in factors.iter().enumerate() {
                if j != i {
                    term *= f;
                }
            }
            total += term;
        }
        Ok(self.u * total)
    }

    /// `sum (1 - |a_i|^2) / |z - a_i|^2`, which is `|phi'(z)|` for `|z| = 1`
    /// and the speed of the boundary map in angle.
    pub fn boundary_speed(&self, z: Complex) -> f64 {
        self.zeros
            .iter()
            .map(|&a| (1.0 - a.norm_sqr()) / (z - a).norm_sqr())
            .sum()
    }

    /// Angular derivative at a boundary fixed point: a positive real.
    ///
    /// The residual `|phi(z0) - z0|` may exceed [`FIXED_POINT_TOLERANCE`] by
    /// the rounding floor `64 eps |phi'(z0)|`.
    pub fn boundary_derivative(&self, z0: Complex) -> Result<f64> {
        let modulus_defect = (z0.norm() - 1.0).abs();
        let (residual, speed) = if finite(z0) && z0.norm() <= 1.0 + DOMAIN_SLACK {
            ((self.eval(z0) - z0).norm(), self.boundary_speed(z0))
        } else {
            (f64::INFINITY, 0.0)
        };
        let tolerance = FIXED_POINT_TOLERANCE + 64.0 * f64::EPSILON * speed;
        if modulus_defect > DOMAIN_SLACK || !(residual <= tolerance) {
            return Err(Error::NotBoundaryFixedPoint {
                modulus_defect,
                residual,
            });
        }
        Ok(speed)
    }

    /// `phi^n(z)`. Orbits that start on the circle are projected back onto
    /// it after every step.
    pub fn iterate(&self, z: Complex, n: usize) -> Result<Complex> {
        Self::check_domain(z)?;
        let on_circle = (z.norm() - 1.0).abs() <= DOMAIN_SLACK;
        let mut w = if on_circle { circle::normalize(z) } else { z };
        for _ in 0..n {
            w = self.eval(w);
            if on_circle {
                w = circle::normalize(w);
            }
        }
        Ok(w)
    }

    /// `u prod (z - a_i)`.
    pub fn numerator(&self) -> ComplexPolynomial {
        ComplexPolynomial::from_roots(self.u, &self.zeros)
    }

    /// `prod (1 - conj(a_i) z)`.
    pub fn denominator(&self) -> ComplexPolynomial {
        self.zeros.iter().fold(
            ComplexPolynomial::constant(Complex::new(1.0, 0.0)),
            |acc, &a| &acc * &ComplexPolynomial::new(vec![Complex::new(1.0, 0.0), -a.conj()]),
        )
    }

    /// `P(z) = u prod (z - a_i) - z prod (1 - conj(a_i) z)`; its roots away
    /// from the poles are exactly the fixed points.
    pub fn fixed_point_polynomial(&self) -> ComplexPolynomial {
        &self.numerator() - &(&ComplexPolynomial::identity() * &self.denominator())
    }

    /// All `N` solutions of `phi(z) = w`, repeated by multiplicity. For `w` on
    /// the circle the solutions are returned on the circle.
    pub fn preimages(&self, w: Complex) -> Result<Vec<Complex>> {
        Self::check_domain(w)?;
        let boundary = (w.norm() - 1.0).abs() <= DOMAIN_SLACK;
        let mut out = if self.degree() == 2 {
            self.preimages_quadratic(w)
        } else {
            let p = &self.numerator() - &self.denominator().scale(w);
            let mut v = Vec::with_capacity(self.degree());
            for r in p.roots()? {
                v.extend(std::iter::repeat(r.value).take(r.multiplicity));
            }
            v
        };
        if boundary {
            for z in out.iter_mut() {
                if (z.norm() - 1.0).abs() > 1e-6 {
                    return Err(Error::RootSolveFailure {
                        sweeps: 0,
                        worst: (z.norm() - 1.0).abs(),
                        residuals: vec![(z.norm() - 1.0).abs()],
                    });
                }
                *z = circle::normalize(*z);
            }
        }
        Ok(out)
    }

    /// Closed form for degree two, with the cancellation-free pairing of the roots.
    fn preimages_quadratic(&self, w: Complex) -> Vec<Complex> {
        let (a, b) = (self.zeros[0], self.zeros[1]);
        let qa = self.u - w * a.conj() * b.conj();
        let qb = -self.u * (a + b) + w * (a.conj() + b.conj());
        let qc = self.u * a * b - w;
        let disc = (qb * qb - 4.0 * qa * qc).sqrt();
        let s = if (qb.conj() * disc).re >= 0.0 { disc } else { -disc };
        let q = -0.5 * (qb + s);
        if q.norm() == 0.0 {
            return vec![Complex::new(0.0, 0.0); 2];
        }
        vec![q / qa, qc / q]
    }

    /// Continuous lift of the boundary map:
    /// `Theta(t) = arg u + N t + 2 sum arg(1 - a_i e^{-it})`, so that
    /// `phi(e^{it}) = e^{i Theta(t)}` and `Theta(t + 2pi) = Theta(t) + 2pi N`.
    pub fn lift(&self, theta: f64) -> f64 {
        let e = Complex::from_polar(1.0, -theta);
        let corr: f64 = self
            .zeros
            .iter()
            .map(|&a| (Complex::new(1.0, 0.0) - a * e).arg())
            .sum();
        self.u.arg() + self.degree() as f64 * theta + 2.0 * corr
    }
}
