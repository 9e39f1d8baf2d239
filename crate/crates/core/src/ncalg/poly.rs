use std::collections::BTreeMap;
use std::fmt;

use super::{GenId, Word};
use crate::coeff::{CoeffError, Field, FromScalar, Scalar};

/// Noncommutative polynomial: terms sorted by the monomial order, no zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NCPoly<F = Scalar> {
    terms: BTreeMap<Word, F>,
}

impl<F: Field> Default for NCPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> NCPoly<F> {
    pub fn zero() -> Self {
        NCPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::term(c, Word::unit())
    }

    pub fn term(c: F, w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(w: Word) -> Self {
        Self::term(F::one(), w)
    }

    pub fn gen(g: GenId) -> Self {
        Self::word(Word::gen(g))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, F)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &F)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, F> {
        self.terms
    }

    pub fn coeff(&self, w: &Word) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    /// Leading term in the monomial order.
    pub fn leading(&self) -> Option<(&Word, &F)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<usize> {
        self.leading().map(|(w, _)| w.degree())
    }

    /// Part of exact degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        NCPoly { terms: self.terms.iter().filter(|(w, _)| w.degree() == d).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    pub fn add_term(&mut self, w: Word, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.mul(k))).collect() }
    }

    /// Product in the free algebra (no reduction).
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), a.mul(b));
            }
        }
        out
    }

    /// `left . self . right` for words.
    pub fn sandwich(&self, left: &[u8], right: &[u8]) -> Self {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (Word::sandwich(left, w.bytes(), right), c.clone())).collect() }
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<NCPoly<G>, E> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Apply an algebra map given on generators, without reduction.
    pub fn substitute(&self, image: &dyn Fn(GenId) -> NCPoly<F>) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut t = NCPoly::constant(c.clone());
            for g in w.gens() {
                t = t.mul(&image(g));
            }
            out = out.add(&t);
        }
        out
    }
}

impl NCPoly<Scalar> {
    pub fn specialize<G: FromScalar>(&self, ctx: &G::Context) -> Result<NCPoly<G>, CoeffError> {
        self.try_map(|c| G::from_scalar(c, ctx))
    }

    /// Image at `q = 1`, with integer-valued display.
    pub fn classical(&self) -> Result<NCPoly<num_rational::BigRational>, CoeffError> {
        self.specialize(&num_traits::One::one())
    }
}

/// Terms as `[coeff] word`, joined by ` + `; the zero polynomial is `0`.
impl<F: Field + fmt::Display> fmt::Display for NCPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}] {w}")?;
        }
        Ok(())
    }
}

impl<F: fmt::Debug> fmt::Debug for NCPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c:?}] {w}")?;
        }
        Ok(())
    }
}
