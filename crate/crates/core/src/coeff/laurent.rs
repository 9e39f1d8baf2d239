use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Fp, FP_MODULUS};

/// A Laurent polynomial in `s` with rational coefficients.
///
/// Stored densely from the lowest to the highest nonzero exponent, so the
/// first and last stored coefficients are always nonzero; the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn monomial(c: BigRational, exp: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: exp, coeffs: vec![c] }
    }

    /// The variable `s`.
    pub fn s() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    /// `q^e = s^(2e)`.
    pub fn q_pow(e: i32) -> Self {
        Self::monomial(BigRational::one(), 2 * e)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i32, BigRational)>>(terms: I) -> Self {
        let terms: Vec<(i32, BigRational)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_dense(lo, coeffs)
    }

    pub(crate) fn from_dense(low: i32, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead_zeros);
        LaurentPoly { low: low + lead_zeros as i32, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for `c * s^k`.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Lowest exponent present (0 for the zero polynomial).
    pub fn low(&self) -> i32 {
        self.low
    }

    /// Highest exponent present (`low - 1` for the zero polynomial).
    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn span(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, exp: i32) -> BigRational {
        let i = exp - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            BigRational::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub(crate) fn dense(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.low + i as i32, c))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { rhs.neg() } else { rhs.clone() };
        }
        let lo = self.low.min(rhs.low);
        let hi = self.high().max(rhs.high());
        let mut out = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(self.low - lo) as usize + i] = c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let slot = &mut out[(rhs.low - lo) as usize + i];
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        Self::from_dense(lo, out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if rhs.is_monomial() {
            let c = &rhs.coeffs[0];
            return LaurentPoly { low: self.low + rhs.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() };
        }
        if self.is_monomial() {
            return rhs.mul(self);
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::from_dense(self.low + rhs.low, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate at a nonzero rational point.
    pub fn eval(&self, s0: &BigRational) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        // Horner on the polynomial part, then the monomial shift.
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * s0 + c;
        }
        acc * rational_pow(s0, self.low)
    }

    /// Evaluate modulo `p` at `s0`; `None` when some coefficient denominator
    /// is divisible by `p`.
    pub fn eval_mod(&self, s0: Fp) -> Option<Fp> {
        use super::Field;
        if self.is_zero() {
            return Some(Fp::zero());
        }
        let mut acc = Fp::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&s0).add(&rational_mod(c)?);
        }
        let shift = if self.low >= 0 { s0.pow_u64(self.low as u64) } else { s0.inv()?.pow_u64((-self.low) as u64) };
        Some(acc.mul(&shift))
    }

    /// Splits off the content: `self = content * s^low * prim` where `prim`
    /// has integer coefficients with gcd 1, positive leading coefficient and
    /// nonzero constant term.
    pub(crate) fn primitive_part(&self) -> (BigRational, Vec<BigInt>) {
        primitive(&self.coeffs)
    }

    /// Greatest common divisor up to units of `Q[s, s^-1]`: a primitive
    /// integer polynomial with nonzero constant term and positive leading
    /// coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() && other.is_zero() {
            return Self::zero();
        }
        let (_, a) = self.primitive_part();
        let (_, b) = other.primitive_part();
        let a = if self.is_zero() { Vec::new() } else { a };
        let b = if other.is_zero() { Vec::new() } else { b };
        let g = int_poly_gcd(&a, &b);
        Self::from_dense(0, g.into_iter().map(BigRational::from_integer).collect())
    }

    /// `self / d` when `d` divides `self` in `Q[s, s^-1]`.
    pub fn div_exact(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_dense(self.low - d.low, rat_exact_div(&self.coeffs, &d.coeffs))
    }
}

fn rational_pow(x: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub(crate) fn rational_mod(c: &BigRational) -> Option<Fp> {
    use super::Field;
    let m = BigInt::from(FP_MODULUS);
    let n = c.numer().mod_floor(&m);
    let d = c.denom().mod_floor(&m);
    let d = Fp::new(u64::try_from(d).ok()?);
    let n = Fp::new(u64::try_from(n).ok()?);
    Some(n.mul(&d.inv()?))
}

/// Content and primitive integer part of a dense coefficient vector.
pub(crate) fn primitive(coeffs: &[BigRational]) -> (BigRational, Vec<BigInt>) {
    if coeffs.is_empty() {
        return (BigRational::zero(), Vec::new());
    }
    let mut lcm_den = BigInt::one();
    for c in coeffs {
        lcm_den = lcm_den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &lcm_den).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if ints.last().unwrap().is_negative() {
        g = -g;
    }
    let prim = ints.into_iter().map(|x| x / &g).collect();
    (BigRational::new(g, lcm_den), prim)
}

fn int_content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn int_trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Pseudo-remainder of `a` by `b` over `Z[x]` (dense, index = degree).
fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * c;
        }
        int_trim(&mut r);
    }
    r
}

/// Greatest common divisor in `Z[x]`, normalized primitive with positive
/// leading coefficient.
pub(crate) fn int_poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    int_trim(&mut a);
    int_trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    if b.is_empty() {
        return normalize_int(a);
    }
    let ca = int_content(&a);
    let cb = int_content(&b);
    a.iter_mut().for_each(|x| *x /= &ca);
    b.iter_mut().for_each(|x| *x /= &cb);
    while !b.is_empty() {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let mut r = int_prem(&a, &b);
        if !r.is_empty() {
            let c = int_content(&r);
            r.iter_mut().for_each(|x| *x /= &c);
        }
        a = b;
        b = r;
    }
    normalize_int(a)
}

fn normalize_int(mut a: Vec<BigInt>) -> Vec<BigInt> {
    if a.is_empty() {
        return a;
    }
    let c = int_content(&a);
    a.iter_mut().for_each(|x| *x /= &c);
    if a.last().unwrap().is_negative() {
        a.iter_mut().for_each(|x| *x = -&*x);
    }
    a
}

/// Exact quotient `a / b` in `Q[x]`; the caller guarantees divisibility.
pub(crate) fn rat_exact_div(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() {
        return Vec::new();
    }
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.to_vec();
    let mut q = vec![BigRational::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lb;
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                r[i + j] -= &c * bc;
            }
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()), "inexact polynomial division");
    q
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if e == 0 {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "s^{}", e)?;
            } else {
                write!(f, "{}*s^{}", abs, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn trimming_keeps_invariant() {
        let p = LaurentPoly::from_terms([(3, r(0)), (-2, r(1)), (5, r(0))]);
        assert_eq!(p.low(), -2);
        assert_eq!(p.high(), -2);
        let z = LaurentPoly::from_terms([(1, r(2)), (1, r(-2))]);
        assert!(z.is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let s = LaurentPoly::s();
        let sinv = LaurentPoly::monomial(r(1), -1);
        let lhs = s.sub(&sinv).mul(&s.add(&sinv));
        let rhs = LaurentPoly::monomial(r(1), 2).sub(&LaurentPoly::monomial(r(1), -2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn int_gcd_of_cyclotomic_products() {
        // (x - 1)(x + 2) and (x - 1)(x^2 + 1)
        let a = vec![BigInt::from(-2), BigInt::from(1), BigInt::from(1)];
        let b = vec![BigInt::from(-1), BigInt::from(1), BigInt::from(-1), BigInt::from(1)];
        assert_eq!(int_poly_gcd(&a, &b), vec![BigInt::from(-1), BigInt::from(1)]);
    }

    #[test]
    fn display_orders_by_descending_exponent() {
        let p = LaurentPoly::from_terms([(-1, r(-1)), (2, BigRational::new(3.into(), 2.into())), (0, r(4))]);
        assert_eq!(p.to_string(), "3/2*s^2 + 4 - s^-1");
    }
}
