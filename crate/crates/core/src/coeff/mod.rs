//! Coefficient field arithmetic.
//!
//! Everything is expressed in the single variable `s`, with `q = s^2` and the
//! Kauffman variable `A = s`. [`Scalar`] is an element of `Q(s)` in canonical
//! reduced form; [`Fp`] is the image of such an element under a specialization
//! `s -> s0` followed by reduction modulo a fixed 61-bit prime.

mod fp;
mod laurent;
mod parse;
mod scalar;

use std::fmt::Debug;

use num_rational::BigRational;
use thiserror::Error;

pub use fp::{Fp, FP_MODULUS};
pub use laurent::LaurentPoly;
pub use scalar::{random_fp, SamplePoint, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at s = {0}")]
    Pole(String),
    #[error("invalid sample point {0}: must be nonzero and not a root of unity")]
    InvalidSample(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0} is not a perfect square in Q(s)")]
    NotASquare(String),
}

/// The arithmetic interface shared by exact and specialized coefficients.
///
/// Implementations are immutable values; all operations return new values.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// A rough size measure used for pivot tie-breaking.
    fn complexity(&self) -> usize {
        1
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self = Field::add(&*self, rhs);
    }

    /// `self += a * b`
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let t = a.mul(b);
        self.add_assign(&t);
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Coefficients that come from `Q(s)` and can be produced from exact scalars.
///
/// `Scalar` maps to itself; `Fp` maps through a fixed sample point, which is
/// why the conversion is fallible (poles) and takes the point as context.
pub trait FromScalar: Field {
    type Context: Clone + Send + Sync;
    fn from_scalar(x: &Scalar, ctx: &Self::Context) -> Result<Self, CoeffError>;
}

impl FromScalar for Scalar {
    type Context = ();
    fn from_scalar(x: &Scalar, _: &()) -> Result<Self, CoeffError> {
        Ok(x.clone())
    }
}

impl FromScalar for Fp {
    type Context = Fp;
    fn from_scalar(x: &Scalar, s0: &Fp) -> Result<Self, CoeffError> {
        x.specialize_mod(*s0)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn complexity(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
}

/// Specialization at an arbitrary rational `s0`, including the degenerate
/// points `0` and `+-1` that [`SamplePoint`] refuses.
impl FromScalar for BigRational {
    type Context = BigRational;
    fn from_scalar(x: &Scalar, s0: &BigRational) -> Result<Self, CoeffError> {
        x.specialize(s0)
    }
}
