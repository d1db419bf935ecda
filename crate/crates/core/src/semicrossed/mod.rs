//! Polynomial elements `F = sum_k U^k f_k` of the semicrossed product, with
//! the covariance relation `f U = U (f o phi)`.
//!
//! Coefficient functions are analytic polynomials. Compositions `f o phi^k`
//! are refitted from samples on a 4096-point circle grid; a refit that needs
//! more than [`REFIT_CAP`] coefficients fails with
//! [`Error::DegreeOverflow`], and the pointwise routines in [`spectral`] and
//! [`witness`] are used instead.

mod radical;
mod spectral;
mod witness;

pub use radical::{radical_membership, RadicalOptions, RadicalVerdict, RadicalWitness};
pub use spectral::{
    ergodic_lower_bound, monomial_spectral_radius, periodic_lower_bound, PeriodicBound,
    SpectralRadiusEstimate,
};
pub use witness::{peak_polynomial, quasinilpotent_witness, witness_diagnostics, WitnessReport};

use crate::blaschke::FiniteBlaschkeProduct;
use crate::circle;
use crate::classify::Classification;
use crate::dynamics::recurrent_points_dense;
use crate::error::{Error, Result};
use crate::mobius::MobiusTransform;
use crate::poly::ComplexPolynomial;
use crate::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Grid size for refits and sup norms.
pub const SAMPLE_GRID: usize = 4096;
/// Largest degree a refitted composition may have.
pub const REFIT_CAP: usize = 512;
/// Relative size below which trailing refit coefficients are dropped.
pub const REFIT_TAIL: f64 = 1e-12;

/// An analytic polynomial, standing in for an element of the disk algebra.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiskFunction {
    poly: ComplexPolynomial,
}

impl DiskFunction {
    pub fn new(poly: ComplexPolynomial) -> Self {
        Self { poly }
    }

    pub fn from_coeffs(coeffs: Vec<Complex>) -> Self {
        Self::new(ComplexPolynomial::new(coeffs))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex) -> Self {
        Self::new(ComplexPolynomial::constant(c))
    }

    pub fn poly(&self) -> &ComplexPolynomial {
        &self.poly
    }

    pub fn coeffs(&self) -> &[Complex] {
        self.poly.coeffs()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.poly.eval(z)
    }

    /// `sup_T |f|`, which by the maximum principle is the sup over the disk.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm_at().0
    }

    /// Sup norm together with a point of the circle where it is attained.
    pub fn sup_norm_at(&self) -> (f64, Complex) {
        match self.poly.degree() {
            _ if self.is_zero() => (0.0, Complex::new(1.0, 0.0)),
            0 => (self.poly.coeffs()[0].norm(), Complex::new(1.0, 0.0)),
            _ => {
                let (v, t) = circle::sup_on_circle(
                    |t| self.eval(circle::on_circle(t)).norm(),
                    SAMPLE_GRID,
                    3,
                );
                (v, circle::on_circle(t))
            }
        }
    }

    /// `f o phi^k`.
    pub fn compose_iterate(&self, phi: &FiniteBlaschkeProduct, k: usize) -> Result<Self> {
        if k == 0 || self.poly.degree() == 0 {
            return Ok(self.clone());
        }
        if phi.zeros().iter().all(|a| *a == Complex::new(0.0, 0.0)) {
            // phi^k(z) = v z^(N^k) with v = u^(1 + N + ... + N^(k-1))
            let n = phi.degree();
            let power = n.checked_pow(k as u32).filter(|p| p * self.degree() <= REFIT_CAP);
            let Some(power) = power else {
                return Err(Error::DegreeOverflow {
                    needed: self.degree().saturating_mul(n.saturating_pow(k as u32)),
                    cap: REFIT_CAP,
                });
            };
            let mut v = Complex::new(1.0, 0.0);
            for _ in 0..k {
                v = phi.u() * v.powu(n as u32);
            }
            return Ok(Self::from_coeffs(self.spread(power, v)));
        }
        refit(|z| self.eval(phi.iterate(z, k).unwrap_or(z)))
    }

    /// `f(v z^power)` as coefficients.
    fn spread(&self, power: usize, v: Complex) -> Vec<Complex> {
        let mut out = vec![Complex::new(0.0, 0.0); self.degree() * power + 1];
        let mut vk = Complex::new(1.0, 0.0);
        for (k, &c) in self.coeffs().iter().enumerate() {
            out[k * power] = c * vk;
            vk *= v;
        }
        out
    }

    /// `f o tau`.
    pub fn compose_mobius(&self, tau: &MobiusTransform) -> Result<Self> {
        if self.poly.degree() == 0 {
            return Ok(self.clone());
        }
        if tau.c() == Complex::new(0.0, 0.0) {
            return Ok(Self::from_coeffs(self.spread(1, tau.lambda())));
        }
        refit(|z| self.eval(tau.apply(z)))
    }
}

/// Taylor coefficients of an analytic function from its values on the
/// circle, truncated where they fall below `REFIT_TAIL` times the largest.
pub fn refit(h: impl Fn(Complex) -> Complex) -> Result<DiskFunction> {
    let m = SAMPLE_GRID;
    let mut buf: Vec<Complex> = circle::grid(m, 0.0).map(|t| h(circle::on_circle(t))).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    for c in buf.iter_mut() {
        *c *= scale;
    }
    let biggest = buf.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if biggest == 0.0 {
        return Ok(DiskFunction::zero());
    }
    let cut = REFIT_TAIL * biggest;
    let last = buf.iter().rposition(|c| c.norm() > cut).unwrap_or(0);
    if last > REFIT_CAP {
        return Err(Error::DegreeOverflow {
            needed: last,
            cap: REFIT_CAP,
        });
    }
    let mut coeffs = buf[..=last].to_vec();
    for c in coeffs.iter_mut() {
        if c.norm() <= cut {
            *c = Complex::new(0.0, 0.0);
        }
    }
    Ok(DiskFunction::from_coeffs(coeffs))
}

/// `F = sum_k U^k f_k` with finitely many non-zero `f_k`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct SemicrossedElement {
    terms: BTreeMap<usize, DiskFunction>,
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    terms: Vec<RawTerm>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    k: usize,
    coeffs: Vec<Complex>,
}

impl TryFrom<RawElement> for SemicrossedElement {
    type Error = Error;

    fn try_from(raw: RawElement) -> Result<Self> {
        let mut out = Self::zero();
        for t in raw.terms {
            if t.coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "non-finite coefficient in term k = {}",
                    t.k
                )));
            }
            out.add_term(t.k, DiskFunction::from_coeffs(t.coeffs));
        }
        Ok(out)
    }
}

impl From<SemicrossedElement> for RawElement {
    fn from(e: SemicrossedElement) -> Self {
        RawElement {
            terms: e
                .terms
                .into_iter()
                .map(|(k, f)| RawTerm {
                    k,
                    coeffs: f.coeffs().to_vec(),
                })
                .collect(),
        }
    }
}

impl SemicrossedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `U^k f`.
    pub fn monomial(k: usize, f: DiskFunction) -> Self {
        let mut e = Self::zero();
        e.add_term(k, f);
        e
    }

    /// Adds `U^k f`, dropping the term if the sum vanishes.
    pub fn add_term(&mut self, k: usize, f: DiskFunction) {
        let sum = match self.terms.remove(&k) {
            Some(g) => DiskFunction::new(g.poly() + f.poly()),
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &DiskFunction)> {
        self.terms.iter().map(|(&k, f)| (k, f))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Product in the semicrossed product:
/// `(U^j f)(U^k g) = U^(j+k) ((f o phi^k) g)`, extended bilinearly.
pub fn multiply(
    f: &SemicrossedElement,
    g: &SemicrossedElement,
    phi: &FiniteBlaschkeProduct,
) -> Result<SemicrossedElement> {
    let mut out = SemicrossedElement::zero();
    for (j, fj) in f.terms() {
        for (k, gk) in g.terms() {
            let moved = fj.compose_iterate(phi, k)?;
            out.add_term(j + k, DiskFunction::new(moved.poly() * gk.poly()));
        }
    }
    Ok(out)
}

/// `F^m` for `m >= 1`.
pub fn power(
    f: &SemicrossedElement,
    m: usize,
    phi: &FiniteBlaschkeProduct,
) -> Result<SemicrossedElement> {
    if m == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let mut acc = f.clone();
    for _ in 1..m {
        acc = multiply(&acc, f, phi)?;
    }
    Ok(acc)
}

/// `pi_k(F)`: the coefficient of `U^k`, zero when absent.
pub fn fourier_coefficient(f: &SemicrossedElement, k: usize) -> DiskFunction {
    f.terms.get(&k).cloned().unwrap_or_default()
}

/// `(max_k ||f_k||, sum_k ||f_k||)`, which bracket `||F||`.
pub fn norm_bounds(f: &SemicrossedElement) -> (f64, f64) {
    f.terms()
        .map(|(_, g)| g.sup_norm())
        .fold((0.0, 0.0), |(lo, hi), s| (lo.max(s), hi + s))
}

/// Whether the Jacobson radical is zero.
pub fn is_semisimple(classification: &Classification) -> bool {
    recurrent_points_dense(classification)
}

/// Image under the isomorphism induced by conjugating with `tau`:
/// each `f_k` becomes `f_k o tau`.
pub fn conjugation_transport(
    f: &SemicrossedElement,
    tau: &MobiusTransform,
) -> Result<SemicrossedElement> {
    let mut out = SemicrossedElement::zero();
    for (k, g) in f.terms() {
        out.add_term(k, g.compose_mobius(tau)?);
    }
    Ok(out)
}
