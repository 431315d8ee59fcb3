//! The quotient ring `R = F_p[x]/(f)`, polynomials over it, and the algebra
//! `S = R[y]/(f')` where `f(y) = (y - X) f'(y)`.
//!
//! `f` splits into distinct linear factors, so `R` is a product of copies of
//! F_p indexed by the roots of `f`. Every nonzero element that fails to be
//! invertible has a proper gcd with `f`; operations that run into such an
//! element hand back that gcd as a [`SplitCert`] instead of failing.

mod ring;
mod rpoly;
mod salg;
mod sigma;

pub use ring::RingR;
pub use rpoly::RPoly;
pub use salg::{SAlg, SElem};
pub use sigma::{masked_sqrt, Componentwise};

use serde::Serialize;
use thiserror::Error;

use crate::poly::{DensePoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the zero element has no inverse")]
    ZeroElement,
    #[error("characteristic {p} is too small for degree {n}")]
    PTooSmall { n: usize, p: u64 },
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("divisor must be monic")]
    NonMonicDivisor,
    #[error("modulus must be monic of degree at least 2")]
    BadModulus,
    #[error("modulus is not squarefree")]
    NotSquarefree,
    #[error("modulus does not split into linear factors")]
    NotCompletelySplitting,
    #[error("claimed factor does not properly divide the modulus")]
    NotAProperFactor,
}

/// A proper monic factor of a modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitCert {
    #[serde(serialize_with = "ser_poly")]
    factor: DensePoly,
    #[serde(serialize_with = "ser_poly")]
    modulus: DensePoly,
}

fn ser_poly<S: serde::Serializer>(p: &DensePoly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(p.coeff_values())
}

impl SplitCert {
    /// Checks `0 < deg factor < deg modulus` and exact divisibility.
    pub fn new(factor: DensePoly, modulus: DensePoly) -> Result<Self, AlgebraError> {
        let factor = factor.monic();
        let (df, dm) = (factor.degree().unwrap_or(0), modulus.degree().unwrap_or(0));
        if factor.is_zero() || df == 0 || df >= dm || !factor.divides(&modulus)? {
            return Err(AlgebraError::NotAProperFactor);
        }
        Ok(SplitCert { factor, modulus })
    }

    pub fn factor(&self) -> &DensePoly {
        &self.factor
    }

    pub fn modulus(&self) -> &DensePoly {
        &self.modulus
    }

    /// `modulus / factor`.
    pub fn cofactor(&self) -> DensePoly {
        self.modulus.divrem(&self.factor).expect("factor is nonzero").0
    }
}

/// Either a computed value or a proper factor of the ambient modulus that
/// turned up along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Value(T),
    Split(SplitCert),
}

impl<T> Outcome<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Value(v) => Outcome::Value(f(v)),
            Outcome::Split(c) => Outcome::Split(c),
        }
    }

    pub fn value(self) -> Option<T> {
        match self {
            Outcome::Value(v) => Some(v),
            Outcome::Split(_) => None,
        }
    }

    pub fn split(self) -> Option<SplitCert> {
        match self {
            Outcome::Value(_) => None,
            Outcome::Split(c) => Some(c),
        }
    }
}

/// Unwraps the value arm or returns the split from the enclosing function.
#[macro_export]
macro_rules! try_value {
    ($e:expr) => {
        match $e {
            $crate::algebra::Outcome::Value(v) => v,
            $crate::algebra::Outcome::Split(c) => return Ok($crate::algebra::Outcome::Split(c)),
        }
    };
}
