use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::laurent::{int_poly_gcd, rat_exact_div};
use super::{CoeffError, Field, Fp, LaurentPoly};

/// An element of `Q(s)` in canonical form.
///
/// Numerator and denominator are coprime, and the denominator is a monic
/// ordinary polynomial with nonzero constant term (so its lowest exponent is
/// zero). Two scalars are equal iff their fields are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        Scalar { num: p, den: LaurentPoly::one() }
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    /// `c * s^k`
    pub fn monomial(c: i64, k: i32) -> Self {
        Self::from_laurent(LaurentPoly::monomial(BigRational::from_integer(c.into()), k))
    }

    pub fn s() -> Self {
        Self::s_pow(1)
    }

    pub fn s_pow(k: i32) -> Self {
        Self::monomial(1, k)
    }

    pub fn q() -> Self {
        Self::s_pow(2)
    }

    pub fn q_pow(k: i32) -> Self {
        Self::s_pow(2 * k)
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    /// True when the denominator is 1.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    fn canonical(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Scalar { num, den: LaurentPoly::one() };
        }
        let shift = -den.low();
        let (mut num, mut den) = (num.shift(shift), den.shift(shift));
        if den.is_monomial() {
            let c = den.leading_coeff().recip();
            return Scalar { num: num.scale(&c), den: LaurentPoly::one() };
        }
        let (_, np) = num.primitive_part();
        let (_, dp) = den.primitive_part();
        let g = int_poly_gcd(&np, &dp);
        if g.len() > 1 {
            let g: Vec<BigRational> = g.into_iter().map(BigRational::from_integer).collect();
            num = LaurentPoly::from_dense(num.low(), rat_exact_div(num.dense(), &g));
            den = LaurentPoly::from_dense(0, rat_exact_div(den.dense(), &g));
        }
        let lc = den.leading_coeff();
        if !One::is_one(&lc) {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Scalar { num, den }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, CoeffError> {
        Field::div(self, rhs).ok_or(CoeffError::DivisionByZero)
    }

    pub fn try_inv(&self) -> Result<Self, CoeffError> {
        Field::inv(self).ok_or(CoeffError::DivisionByZero)
    }

    /// Image under the ring homomorphism `s -> s0` (any nonzero rational).
    pub fn specialize(&self, s0: &BigRational) -> Result<BigRational, CoeffError> {
        if Zero::is_zero(s0) && (self.num.low() < 0 || self.den.low() < 0) {
            return Err(CoeffError::Pole(s0.to_string()));
        }
        let d = self.den.eval(s0);
        if Zero::is_zero(&d) {
            return Err(CoeffError::Pole(s0.to_string()));
        }
        Ok(self.num.eval(s0) / d)
    }

    pub fn specialize_at(&self, p: &SamplePoint) -> Result<BigRational, CoeffError> {
        self.specialize(p.value())
    }

    /// Image in `F_p` under `s -> s0`.
    pub fn specialize_mod(&self, s0: Fp) -> Result<Fp, CoeffError> {
        let pole = || CoeffError::Pole(format!("{} (mod p)", s0));
        let n = self.num.eval_mod(s0).ok_or_else(pole)?;
        let d = self.den.eval_mod(s0).ok_or_else(pole)?;
        let di = d.inv().ok_or_else(pole)?;
        Ok(n.mul(&di))
    }

    /// The `q -> 1` limit, i.e. specialization at `s = 1`.
    pub fn classical_limit(&self) -> Result<BigRational, CoeffError> {
        self.specialize(&<BigRational as One>::one())
    }

    /// Square root in `Q(s)` if one exists; the root with positive leading
    /// coefficient in the numerator is returned.
    pub fn sqrt(&self) -> Result<Self, CoeffError> {
        let err = || CoeffError::NotASquare(self.to_string());
        if self.is_zero() {
            return Ok(self.clone());
        }
        let n = laurent_sqrt(&self.num).ok_or_else(err)?;
        let d = laurent_sqrt(&self.den).ok_or_else(err)?;
        Ok(Self::canonical(n, d))
    }

    /// Substitute `s -> s^-1`.
    pub fn bar(&self) -> Self {
        let flip = |p: &LaurentPoly| LaurentPoly::from_terms(p.terms().map(|(e, c)| (-e, c.clone())));
        Self::canonical(flip(&self.num), flip(&self.den))
    }

    /// Rational constant, when the scalar has no `s` dependence.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() && (self.num.is_zero() || (self.num.is_monomial() && self.num.low() == 0)) {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// `Some(k)` when the scalar is the integer `k`.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.as_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }
}

fn laurent_sqrt(p: &LaurentPoly) -> Option<LaurentPoly> {
    if p.low() % 2 != 0 || (p.high() - p.low()) % 2 != 0 {
        return None;
    }
    let coeffs = p.dense();
    let n = coeffs.len();
    let lead = coeffs[n - 1].clone();
    if lead.is_negative() {
        return None;
    }
    let lead_root = rational_sqrt(&lead)?;
    // Coefficients of the root from the top down.
    let m = (n - 1) / 2;
    let mut root = vec![<BigRational as Zero>::zero(); m + 1];
    root[m] = lead_root.clone();
    let two_lead = &lead_root * BigRational::from_integer(2.into());
    for k in 1..=m {
        // Coefficient of x^(2m - k) in root^2 must equal coeffs[2m - k].
        let mut acc = coeffs[2 * m - k].clone();
        for i in 1..k {
            acc -= &root[m - i] * &root[m - (k - i)];
        }
        root[m - k] = acc / &two_lead;
    }
    let r = LaurentPoly::from_dense(p.low() / 2, root);
    if r.mul(&r) == *p {
        Some(r)
    } else {
        None
    }
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    fn one() -> Self {
        Scalar { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    fn from_i64(v: i64) -> Self {
        Scalar::from_laurent(LaurentPoly::from_int(v))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn add(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return Scalar::from_laurent(self.num.add(&rhs.num));
            }
            return Self::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        Self::canonical(self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)), self.den.mul(&rhs.den))
    }

    fn sub(&self, rhs: &Self) -> Self {
        Field::add(self, &Field::neg(rhs))
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_laurent(self.num.mul(&rhs.num));
        }
        Self::canonical(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    fn neg(&self) -> Self {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::canonical(self.den.clone(), self.num.clone()))
        }
    }

    fn complexity(&self) -> usize {
        self.num.term_count() + self.den.term_count()
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Field::add(self, rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Field::sub(self, rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Field::mul(self, rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Field::neg(self)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Field::add(&self, &rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Field::sub(&self, &rhs)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Field::mul(&self, &rhs)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Field::neg(&self)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Scalar {
    type Err = CoeffError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_scalar(s)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// A specialization point `s = s0` for probabilistic rank computations.
///
/// `s0` is a nonzero rational distinct from `+1` and `-1`, the only rational
/// roots of unity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SamplePoint {
    value: BigRational,
}

impl SamplePoint {
    pub fn new(value: BigRational) -> Result<Self, CoeffError> {
        if Zero::is_zero(&value) || One::is_one(&value.abs()) {
            return Err(CoeffError::InvalidSample(value.to_string()));
        }
        Ok(SamplePoint { value })
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// A random point with numerator and denominator of moderate size.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        loop {
            let n: i64 = rng.gen_range(2..2000);
            let d: i64 = rng.gen_range(1..2000);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let v = BigRational::new(BigInt::from(sign * n), BigInt::from(d));
            if let Ok(p) = SamplePoint::new(v) {
                return p;
            }
        }
    }

    /// The image of this point in `F_p`.
    pub fn to_fp(&self) -> Option<Fp> {
        super::laurent::rational_mod(&self.value).filter(|v| !v.is_zero())
    }
}

/// A uniformly random nonzero element of `F_p`, for modular specialization.
pub fn random_fp<R: Rng>(rng: &mut R) -> Fp {
    loop {
        let v = Fp::new(rng.gen::<u64>());
        if !v.is_zero() && !v.is_one() && v != Fp::from_i64(-1) {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn q() -> Scalar {
        Scalar::q()
    }

    fn one() -> Scalar {
        Scalar::one()
    }

    #[test]
    fn gcd_cancellation() {
        // (1 - q)/(1 - q^2) = 1/(1 + q)
        let x = (&one() - &q()).checked_div(&(&one() - &(&q() * &q()))).unwrap();
        let expected = one().checked_div(&(&one() + &q())).unwrap();
        assert_eq!(x, expected);
        assert_eq!(x.to_string(), "(1)/(s^2 + 1)");
    }

    #[test]
    fn difference_of_squares() {
        let s = Scalar::s();
        let sinv = Scalar::s_pow(-1);
        assert_eq!(&(&s - &sinv) * &(&s + &sinv), &Scalar::s_pow(2) - &Scalar::s_pow(-2));
    }

    #[test]
    fn inverse_of_zero_is_error() {
        assert_eq!(Scalar::zero().try_inv(), Err(CoeffError::DivisionByZero));
        assert!(Scalar::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    }

    #[test]
    fn specialization_examples() {
        let two = BigRational::from_integer(2.into());
        let f = (&Scalar::s_pow(2) - &one()).checked_div(&Scalar::s()).unwrap();
        assert_eq!(f.specialize(&two).unwrap(), BigRational::new(3.into(), 2.into()));
        let g = &q() - &one();
        assert_eq!(g.specialize(&rat(1)).unwrap(), rat(0));
        let h = one().checked_div(&(&Scalar::s() - &Scalar::from(2))).unwrap();
        assert!(matches!(h.specialize(&two), Err(CoeffError::Pole(_))));
    }

    #[test]
    fn classical_limit_examples() {
        assert_eq!(q().pow(2).classical_limit().unwrap(), rat(1));
        let x = (&q() - &Scalar::q_pow(-1)).checked_div(&(&q() - &one())).unwrap();
        assert_eq!(x.classical_limit().unwrap(), BigRational::from_integer(2.into()));
        let y = one().checked_div(&(&q() - &one())).unwrap();
        assert!(y.classical_limit().is_err());
    }

    #[test]
    fn canonical_denominator_is_monic_with_zero_low() {
        let den = LaurentPoly::from_terms([(3, rat(-4)), (5, rat(2))]);
        let x = Scalar::new(LaurentPoly::s(), den).unwrap();
        assert_eq!(x.denom().low(), 0);
        assert_eq!(x.denom().leading_coeff(), rat(1));
    }

    #[test]
    fn sqrt_of_square() {
        let x = (&Scalar::q_pow(3) + &one()).checked_div(&(&Scalar::s() - &Scalar::from(3))).unwrap();
        let y = &x * &x;
        let r = y.sqrt().unwrap();
        assert!(r == x || r == -x.clone());
        assert!(Scalar::s().sqrt().is_err());
    }

    #[test]
    fn sample_points_reject_roots_of_unity() {
        assert!(SamplePoint::new(rat(1)).is_err());
        assert!(SamplePoint::new(-rat(1)).is_err());
        assert!(SamplePoint::new(rat(0)).is_err());
        assert!(SamplePoint::new(BigRational::new(2.into(), 3.into())).is_ok());
    }
}
