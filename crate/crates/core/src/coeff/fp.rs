use std::fmt;

use super::Field;

/// The Mersenne prime `2^61 - 1`.
pub const FP_MODULUS: u64 = (1 << 61) - 1;

/// Element of the prime field `F_p`, `p = 2^61 - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp(u64);

impl Fp {
    pub const fn new(v: u64) -> Self {
        Fp(v % FP_MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn from_i128(v: i128) -> Self {
        let m = FP_MODULUS as i128;
        Fp(v.rem_euclid(m) as u64)
    }

    #[inline]
    fn reduce(x: u128) -> u64 {
        let lo = (x as u64) & FP_MODULUS;
        let hi = (x >> 61) as u64;
        let mut r = lo + (hi & FP_MODULUS) + (hi >> 61);
        while r >= FP_MODULUS {
            r -= FP_MODULUS;
        }
        r
    }

    #[inline]
    pub fn mul_raw(self, rhs: Fp) -> Fp {
        Fp(Self::reduce(self.0 as u128 * rhs.0 as u128))
    }

    pub fn pow_u64(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_raw(base);
            }
            base = base.mul_raw(base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_i64(v: i64) -> Self {
        Fp::from_i128(v as i128)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn is_one(&self) -> bool {
        self.0 == 1
    }
    #[inline]
    fn add(&self, rhs: &Self) -> Self {
        let mut r = self.0 + rhs.0;
        if r >= FP_MODULUS {
            r -= FP_MODULUS;
        }
        Fp(r)
    }
    #[inline]
    fn sub(&self, rhs: &Self) -> Self {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + FP_MODULUS - rhs.0)
        }
    }
    #[inline]
    fn mul(&self, rhs: &Self) -> Self {
        self.mul_raw(*rhs)
    }
    fn neg(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            Fp(FP_MODULUS - self.0)
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow_u64(FP_MODULUS - 2))
        }
    }
    #[inline]
    fn add_assign(&mut self, rhs: &Self) {
        *self = Field::add(&*self, rhs);
    }
    #[inline]
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = Field::add(&*self, &a.mul_raw(*b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        for v in [1u64, 2, 3, 12345678901, FP_MODULUS - 1] {
            let x = Fp::new(v);
            assert_eq!(x.mul(&x.inv().unwrap()), Fp::one());
        }
        assert!(Fp::zero().inv().is_none());
    }

    #[test]
    fn negative_embedding() {
        assert_eq!(Fp::from_i64(-1).add(&Fp::one()), Fp::zero());
        assert_eq!(Fp::from_i64(-5).neg(), Fp::from_i64(5));
    }
}
