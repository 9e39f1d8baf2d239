//! Free associative algebra on the matrix-coefficient generators, with a
//! degree-first monomial order, rewriting and truncated completion.

mod automaton;
mod complete;
mod poly;
mod rewrite;
mod text;

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use automaton::NormalWords;
pub use complete::{complete, complete_in, complete_relations, spoly_overlaps, CompletionOptions, Overlap, Partial};
pub use poly::NCPoly;
pub use rewrite::{ReduceStrategy, RewriteSystem, Rule};
pub use text::{load_cached, store_cached};

#[derive(Debug, Error)]
pub enum NcError {
    #[error("completion budget exceeded ({reason}) with {} rules", partial.rules().len())]
    Budget { reason: String, partial: Box<RewriteSystem> },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    A,
    B,
}

/// One matrix-coefficient generator `a^row_col` or `b^row_col` of a handle.
///
/// Generators are packed into a single byte whose numeric order is the
/// generator order: factor, then kind (`a < b`), then row-major position.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(u8);

impl GenId {
    /// `factor` is 1-based; `row` and `col` are 1 or 2.
    pub fn new(factor: usize, kind: Kind, row: usize, col: usize) -> Self {
        assert!((1..=31).contains(&factor), "factor {factor} out of range");
        assert!((1..=2).contains(&row) && (1..=2).contains(&col), "matrix index out of range");
        let k = match kind {
            Kind::A => 0,
            Kind::B => 1,
        };
        GenId(((factor - 1) * 8 + k * 4 + (row - 1) * 2 + (col - 1)) as u8)
    }

    pub fn a(factor: usize, row: usize, col: usize) -> Self {
        Self::new(factor, Kind::A, row, col)
    }

    pub fn b(factor: usize, row: usize, col: usize) -> Self {
        Self::new(factor, Kind::B, row, col)
    }

    pub fn from_index(i: u8) -> Self {
        GenId(i)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn factor(self) -> usize {
        self.0 as usize / 8 + 1
    }

    pub fn kind(self) -> Kind {
        if self.0 & 4 == 0 {
            Kind::A
        } else {
            Kind::B
        }
    }

    pub fn row(self) -> usize {
        ((self.0 >> 1) & 1) as usize + 1
    }

    pub fn col(self) -> usize {
        (self.0 & 1) as usize + 1
    }

    /// All `8g` generators of genus `g`, in generator order.
    pub fn all(genus: usize) -> Vec<GenId> {
        (0..(8 * genus) as u8).map(GenId).collect()
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind() {
            Kind::A => 'a',
            Kind::B => 'b',
        };
        write!(f, "{}{}_{}{}", k, self.factor(), self.row(), self.col())
    }
}

impl fmt::Debug for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GenId {
    type Err = NcError;
    fn from_str(s: &str) -> Result<Self, NcError> {
        let bad = || NcError::Parse(format!("bad generator {s:?}"));
        let b = s.as_bytes();
        let kind = match b.first() {
            Some(b'a') => Kind::A,
            Some(b'b') => Kind::B,
            _ => return Err(bad()),
        };
        let (factor, rc) = s[1..].split_once('_').ok_or_else(bad)?;
        let factor: usize = factor.parse().map_err(|_| bad())?;
        let rc = rc.as_bytes();
        if rc.len() != 2 || !(1..=31).contains(&factor) {
            return Err(bad());
        }
        let row = (rc[0] as char).to_digit(10).filter(|d| (1..=2).contains(d)).ok_or_else(bad)?;
        let col = (rc[1] as char).to_digit(10).filter(|d| (1..=2).contains(d)).ok_or_else(bad)?;
        Ok(GenId::new(factor, kind, row as usize, col as usize))
    }
}

/// A monomial. Ordered by degree first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn from_gens(gens: &[GenId]) -> Self {
        Word(gens.iter().map(|g| g.0).collect())
    }

    pub fn from_bytes(b: Vec<u8>) -> Self {
        Word(b)
    }

    pub fn gen(g: GenId) -> Self {
        Word(vec![g.0])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn gens(&self) -> impl Iterator<Item = GenId> + '_ {
        self.0.iter().map(|&i| GenId(i))
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + rhs.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&rhs.0);
        Word(v)
    }

    /// `left . self . right`
    pub fn sandwich(left: &[u8], mid: &[u8], right: &[u8]) -> Word {
        let mut v = Vec::with_capacity(left.len() + mid.len() + right.len());
        v.extend_from_slice(left);
        v.extend_from_slice(mid);
        v.extend_from_slice(right);
        Word(v)
    }
}

impl Borrow<[u8]> for Word {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

/// Degree first, then lexicographic by generator order.
pub fn monomial_compare(u: &Word, v: &Word) -> Ordering {
    u.0.len().cmp(&v.0.len()).then_with(|| u.0.cmp(&v.0))
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        monomial_compare(self, other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.gens().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Word {
    type Err = NcError;
    fn from_str(s: &str) -> Result<Self, NcError> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::unit());
        }
        let gens = s.split_whitespace().map(GenId::from_str).collect::<Result<Vec<_>, _>>()?;
        if gens.is_empty() {
            return Err(NcError::Parse("empty word".into()));
        }
        Ok(Word::from_gens(&gens))
    }
}
