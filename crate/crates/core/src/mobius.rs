use crate::blaschke::UNIMODULAR_TOLERANCE;
use crate::error::{Error, Result};
use crate::Complex;
use serde::{Deserialize, Serialize};

/// Disk automorphism `tau(z) = lambda (z - c) / (1 - conj(c) z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusTransform {
    lambda: Complex,
    c: Complex,
}

impl MobiusTransform {
    pub fn new(lambda: Complex, c: Complex) -> Result<Self> {
        if (lambda.norm() - 1.0).abs() > UNIMODULAR_TOLERANCE {
            return Err(Error::NonUnimodularFactor {
                modulus: lambda.norm(),
            });
        }
        if c.norm() >= 1.0 {
            return Err(Error::OutsideOpenDisk { modulus: c.norm() });
        }
        Ok(Self { lambda, c })
    }

    pub fn identity() -> Self {
        Self {
            lambda: Complex::new(1.0, 0.0),
            c: Complex::new(0.0, 0.0),
        }
    }

    /// `z -> lambda z`; `lambda` is projected onto the circle.
    pub fn rotation(lambda: Complex) -> Self {
        Self {
            lambda: lambda / lambda.norm(),
            c: Complex::new(0.0, 0.0),
        }
    }

    /// The automorphism with `tau(0) = p`, namely `(z + p) / (1 + conj(p) z)`.
    pub fn sending_zero_to(p: Complex) -> Result<Self> {
        Self::new(Complex::new(1.0, 0.0), -p)
    }

    pub fn lambda(&self) -> Complex {
        self.lambda
    }

    pub fn c(&self) -> Complex {
        self.c
    }

    pub fn apply(&self, z: Complex) -> Complex {
        self.lambda * (z - self.c) / (Complex::new(1.0, 0.0) - self.c.conj() * z)
    }

    /// Derivative of `tau` at `z`.
    pub fn derivative(&self, z: Complex) -> Complex {
        let den = Complex::new(1.0, 0.0) - self.c.conj() * z;
        self.lambda * (1.0 - self.c.norm_sqr()) / (den * den)
    }

    /// The inverse is again of the same form: `conj(lambda) (w + lambda c) / (1 + conj(lambda c) w)`.
    pub fn inverse(&self) -> Self {
        Self {
            lambda: self.lambda.conj(),
            c: -self.lambda * self.c,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        let tau = MobiusTransform::new(Complex::from_polar(1.0, 0.7), Complex::new(0.3, -0.5)).unwrap();
        let inv = tau.inverse();
        for k in 0..20 {
            let z = Complex::from_polar(0.05 * k as f64, 1.3 * k as f64);
            assert!((inv.apply(tau.apply(z)) - z).norm() < 1e-10);
            assert!((tau.apply(inv.apply(z)) - z).norm() < 1e-10);
        }
    }

    #[test]
    fn preserves_the_circle() {
        let tau = MobiusTransform::new(Complex::new(0.0, 1.0), Complex::new(0.6, 0.2)).unwrap();
        for k in 0..50 {
            let z = Complex::from_polar(1.0, 0.13 * k as f64);
            assert!((tau.apply(z).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sending_zero_to_hits_target() {
        let p = Complex::new(0.0, 0.4);
        let tau = MobiusTransform::sending_zero_to(p).unwrap();
        assert!((tau.apply(Complex::new(0.0, 0.0)) - p).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MobiusTransform::new(Complex::new(1.1, 0.0), Complex::new(0.0, 0.0)).is_err());
        assert!(MobiusTransform::new(Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)).is_err());
    }
}
