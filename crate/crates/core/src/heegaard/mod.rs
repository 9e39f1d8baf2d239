//! Gluing data for closed 3-manifolds and the skein dimensions they produce.
//!
//! A genus `g` splitting `H u_phi H` gives the quotient
//! `A / (A (b - 1) + (phi(b) - 1) A)` of the skein algebra `A` of the
//! punctured surface, where `b - 1` stands for the handlebody ideal generated
//! by `b^i_j - delta_ij` on every handle. Its dimension is read off a degree
//! filtration: `dims[d]` is the dimension of the image of `A_{<=d}`.

mod engine;
mod module;
mod twist;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

use crate::coeff::{CoeffError, Field, FromScalar, Scalar};
use crate::linsolve::lead_pivots;
use crate::ncalg::{GenId, Kind, NCPoly, NcError, NormalWords, RewriteSystem, Word};
use crate::presentations::Presentation;

pub use engine::{identity_gluing, splice_dimension, word_raise, DimensionOptions, GenusOneEngine};
pub use module::GenusOneModule;
pub use twist::{derive_twist, Twist, TwistSet};

#[derive(Debug, Error)]
pub enum HeegaardError {
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("twist ansatz failed: {0}")]
    Ansatz(String),
    #[error("degree {degree} exceeds the certified degree {safe}")]
    Degree { degree: usize, safe: usize },
    #[error("map does not preserve {0}")]
    NotAutomorphism(String),
    #[error("invalid gluing: {0}")]
    Gluing(String),
    #[error("connected sum needs stabilized summands of positive dimension")]
    Summand,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// `A / A I` for `Side::Left`, `A / I A` for `Side::Right`, where `I` is
/// spanned by `generators`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicModuleSpec<F = Scalar> {
    pub side: Side,
    pub generators: Vec<NCPoly<F>>,
}

/// The handlebody ideal `b^i_j - delta_ij` on every handle.
pub fn handlebody_ideal(genus: usize, side: Side) -> CyclicModuleSpec {
    let mut generators = Vec::new();
    for f in 1..=genus {
        for i in 1..=2 {
            for j in 1..=2 {
                let mut p = NCPoly::gen(GenId::b(f, i, j));
                if i == j {
                    p = p.sub(&NCPoly::one());
                }
                generators.push(p);
            }
        }
    }
    CyclicModuleSpec { side, generators }
}

/// The module whose ideal is spanned by the images of `m`'s generators.
pub fn apply_automorphism(m: &CyclicModuleSpec, phi: &Automorphism) -> CyclicModuleSpec {
    CyclicModuleSpec { side: m.side, generators: m.generators.iter().map(|g| phi.apply(g)).collect() }
}

/// An algebra map given on generators; unlisted generators are fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    images: BTreeMap<GenId, NCPoly>,
    /// Every relation is preserved by normal forms through this degree.
    pub verified_to_degree: usize,
}

impl Automorphism {
    pub fn identity() -> Self {
        Automorphism { images: BTreeMap::new(), verified_to_degree: usize::MAX }
    }

    pub fn from_images(images: BTreeMap<GenId, NCPoly>) -> Self {
        let images = images.into_iter().filter(|(g, p)| *p != NCPoly::gen(*g)).collect();
        Automorphism { images, verified_to_degree: 0 }
    }

    pub fn image(&self, g: GenId) -> NCPoly {
        self.images.get(&g).cloned().unwrap_or_else(|| NCPoly::gen(g))
    }

    /// Generators with a nontrivial image.
    pub fn moved(&self) -> impl Iterator<Item = GenId> + '_ {
        self.images.keys().copied()
    }

    /// Substitute images, without reduction.
    pub fn apply(&self, p: &NCPoly) -> NCPoly {
        p.substitute(&|g| self.image(g))
    }

    /// `self o inner`: `g -> self(inner(g))`, reduced in `sys`.
    pub fn after(&self, inner: &Automorphism, sys: &RewriteSystem) -> Result<Automorphism, HeegaardError> {
        let mut gens: Vec<GenId> = self.moved().chain(inner.moved()).collect();
        gens.sort_unstable();
        gens.dedup();
        let mut images = BTreeMap::new();
        for g in gens {
            let p = self.apply(&inner.image(g));
            let degree = p.degree().unwrap_or(0);
            if degree > sys.safe_degree() {
                return Err(HeegaardError::Degree { degree, safe: sys.safe_degree() });
            }
            images.insert(g, sys.reduce(&p));
        }
        Ok(Automorphism::from_images(images))
    }

    pub fn specialize<F: FromScalar>(&self, ctx: &F::Context) -> Result<BTreeMap<GenId, NCPoly<F>>, CoeffError> {
        self.images.iter().map(|(g, p)| Ok((*g, p.specialize(ctx)?))).collect()
    }
}

/// One `generator = polynomial` line per moved generator; `#` starts a
/// comment.
impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, p) in &self.images {
            writeln!(f, "{g} = {p}")?;
        }
        Ok(())
    }
}

impl FromStr for Automorphism {
    type Err = HeegaardError;

    fn from_str(s: &str) -> Result<Self, HeegaardError> {
        let mut images = BTreeMap::new();
        for (n, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (g, p) = line.split_once('=').ok_or_else(|| HeegaardError::Gluing(format!("line {}: expected 'generator = polynomial'", n + 1)))?;
            let g: GenId = g.trim().parse()?;
            if images.insert(g, p.parse::<NCPoly>()?).is_some() {
                return Err(HeegaardError::Gluing(format!("line {}: {g} given twice", n + 1)));
            }
        }
        Ok(Automorphism::from_images(images))
    }
}

/// Relations whose image under `phi` does not reduce to zero. Images of
/// degree above `min(d, safe degree)` cannot be decided and count as failures.
pub fn automorphism_defects(sys: &RewriteSystem, p: &Presentation, phi: &Automorphism, d: usize) -> Vec<String> {
    let bound = d.min(sys.safe_degree());
    let mut bad = Vec::new();
    for r in p.relations() {
        let img = phi.apply(&r.poly);
        if img.degree().unwrap_or(0) > bound || !sys.reduce(&img).is_zero() {
            bad.push(r.tag.to_string());
        }
    }
    bad
}

pub fn verify_automorphism(sys: &RewriteSystem, p: &Presentation, phi: &Automorphism, d: usize) -> bool {
    automorphism_defects(sys, p, phi, d).is_empty()
}

/// Check `phi` through degree `d` and record it.
pub fn certify(mut phi: Automorphism, sys: &RewriteSystem, p: &Presentation, d: usize) -> Result<Automorphism, HeegaardError> {
    let bad = automorphism_defects(sys, p, &phi, d);
    if let Some(first) = bad.first() {
        return Err(HeegaardError::NotAutomorphism(first.clone()));
    }
    phi.verified_to_degree = d.min(sys.safe_degree());
    Ok(phi)
}

/// Letters of a gluing word. `Tb` twists along the other curve and is only
/// used to build lens spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapGen {
    S,
    T,
    TInv,
    Tb,
}

impl fmt::Display for MapGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapGen::S => "S",
            MapGen::T => "T",
            MapGen::TInv => "T'",
            MapGen::Tb => "Tb",
        })
    }
}

/// A composite `x1 o x2 o ... o xk`; the empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MapWord(pub Vec<MapGen>);

impl fmt::Display for MapWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("id");
        }
        for g in &self.0 {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for MapWord {
    type Err = HeegaardError;

    fn from_str(s: &str) -> Result<Self, HeegaardError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "id" {
            return Ok(MapWord::default());
        }
        let b = s.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < b.len() {
            let g = match (b[i], b.get(i + 1)) {
                (b'S', _) => MapGen::S,
                (b'T', Some(b'\'')) => MapGen::TInv,
                (b'T', Some(b'b')) => MapGen::Tb,
                (b'T', _) => MapGen::T,
                _ => return Err(HeegaardError::Gluing(format!("bad letter at {i} in {s:?}"))),
            };
            i += if matches!(g, MapGen::TInv | MapGen::Tb) { 2 } else { 1 };
            out.push(g);
        }
        if out.is_empty() {
            return Err(HeegaardError::Gluing("empty word".into()));
        }
        Ok(MapWord(out))
    }
}

impl MapWord {
    /// Action on `H_1` of the torus, columns the images of `a` and `b`.
    pub fn homology(&self) -> [[i64; 2]; 2] {
        let mut m = [[1, 0], [0, 1]];
        for g in &self.0 {
            let x = match g {
                MapGen::S => [[0, -1], [1, 0]],
                MapGen::T => [[1, 1], [0, 1]],
                MapGen::TInv => [[1, -1], [0, 1]],
                MapGen::Tb => [[1, 0], [1, 1]],
            };
            let mut y = [[0; 2]; 2];
            for (i, row) in y.iter_mut().enumerate() {
                for (j, e) in row.iter_mut().enumerate() {
                    *e = m[i][0] * x[0][j] + m[i][1] * x[1][j];
                }
            }
            m = y;
        }
        m
    }

    /// `(p, q)` with `phi(b) = p a + q b` in homology: the lens space `L(p, q)`.
    pub fn lens_parameters(&self) -> (i64, i64) {
        let m = self.homology();
        (m[0][1], m[1][1])
    }
}

/// A word in `T` and `Tb` whose gluing gives `L(p, q)`; `q` is taken mod `p`,
/// `L(0, q)` is `S^2 x S^1` and `L(1, q)` is `S^3`.
pub fn lens_word(p: u64, q: i64) -> Result<MapWord, HeegaardError> {
    if p == 0 {
        if q.abs() != 1 {
            return Err(HeegaardError::Gluing(format!("L(0,{q}) needs q = +-1")));
        }
        return Ok(MapWord::default());
    }
    let p = p as i64;
    let q = q.rem_euclid(p);
    if num_integer::gcd(p, q) != 1 && p != 1 {
        return Err(HeegaardError::Gluing(format!("L({p},{q}) needs coprime parameters")));
    }
    let (mut x, mut y) = (p, if p == 1 { 1 } else { q });
    let mut out = Vec::new();
    while (x, y) != (0, 1) {
        if x >= y {
            x -= y;
            out.push(MapGen::T);
        } else {
            y -= x;
            out.push(MapGen::Tb);
        }
    }
    Ok(MapWord(out))
}

/// `dims[d]` is constant on its last `window` entries.
pub fn stabilization(dims: &[u64], window: usize) -> (bool, usize) {
    let Some(&last) = dims.last() else { return (false, 0) };
    let start = dims.iter().rposition(|&v| v != last).map_or(0, |i| i + 1);
    (window > 0 && dims.len() - start >= window, start)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    /// `dims[safe_degree]`.
    pub dimension: u64,
    pub stabilized: bool,
    /// First degree of the final constant run of `dims`.
    pub stabilization_degree: usize,
    /// Degree through which `dims` is trusted.
    pub safe_degree: usize,
    pub dims: Vec<u64>,
    /// Surviving normal words of degree at most the stabilization degree.
    pub basis: Vec<Word>,
    pub strategy: String,
    pub timings: Vec<(String, Duration)>,
}

/// Dimensions of `span(words) / span(rows)` filtered by degree through
/// `safe`, and the surviving words. `words` must be sorted in the monomial
/// order; rows index into it.
pub fn filtered_quotient<F: Field>(words: &[Word], rows: Vec<Vec<(usize, F)>>, safe: usize, window: usize) -> (Vec<u64>, Vec<Word>, bool, usize) {
    let n = words.len();
    let flipped = rows.into_iter().map(|r| {
        let mut r: Vec<(usize, F)> = r.into_iter().map(|(i, c)| (n - 1 - i, c)).collect();
        r.sort_by_key(|e| e.0);
        r
    });
    let pivots: std::collections::HashSet<usize> = lead_pivots(flipped.filter(|r| !r.is_empty())).into_iter().map(|c| n - 1 - c).collect();
    let mut dims = vec![0u64; safe + 1];
    for (i, w) in words.iter().enumerate() {
        let d = w.degree();
        if d <= safe && !pivots.contains(&i) {
            for v in &mut dims[d..] {
                *v += 1;
            }
        }
    }
    let (stabilized, start) = stabilization(&dims, window);
    let basis = words.iter().enumerate().filter(|(i, w)| w.degree() <= start && !pivots.contains(i)).map(|(_, w)| w.clone()).collect();
    (dims, basis, stabilized, start)
}

/// The quotient `A / (A L + R A)` computed directly on normal words of the
/// full system through degree `d`, over `F`. Trusted through `d` minus the
/// largest generator degree.
pub fn two_sided_quotient<F: FromScalar>(
    sys: &RewriteSystem,
    left: &CyclicModuleSpec,
    right: &CyclicModuleSpec,
    d: usize,
    window: usize,
    ctx: &F::Context,
) -> Result<Report, HeegaardError> {
    let start = std::time::Instant::now();
    if d > sys.safe_degree() {
        return Err(HeegaardError::Degree { degree: d, safe: sys.safe_degree() });
    }
    let fsys = sys.specialize::<F>(ctx)?;
    let words = NormalWords::new(sys).enumerate(d);
    let index: std::collections::HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut gens = Vec::new();
    for (spec, on_left) in [(left, true), (right, false)] {
        let expect = if on_left { Side::Left } else { Side::Right };
        if spec.side != expect {
            return Err(HeegaardError::Gluing("module sides are swapped".into()));
        }
        for g in &spec.generators {
            gens.push((g.specialize::<F>(ctx)?, on_left, g.degree().unwrap_or(0)));
        }
    }
    let top = gens.iter().map(|g| g.2).max().unwrap_or(0);
    let mut rows = Vec::new();
    for w in &words {
        let wp = NCPoly::<F>::word(w.clone());
        for (g, on_left, e) in &gens {
            if w.degree() + e > d {
                continue;
            }
            let prod = if *on_left { wp.mul(g) } else { g.mul(&wp) };
            let row: Vec<(usize, F)> = fsys.reduce(&prod).terms().map(|(u, c)| (index[u], c.clone())).collect();
            rows.push(row);
        }
    }
    let safe = d.saturating_sub(top);
    let (dims, basis, stabilized, sdeg) = filtered_quotient(&words, rows, safe, window);
    Ok(Report {
        dimension: dims[safe],
        stabilized,
        stabilization_degree: sdeg,
        safe_degree: safe,
        dims,
        basis,
        strategy: "two-sided".into(),
        timings: vec![("quotient".into(), start.elapsed())],
    })
}

/// Dimension of a connected sum from its summands.
pub fn connected_sum_dim(parts: &[Report]) -> Result<u64, HeegaardError> {
    if parts.iter().any(|r| !r.stabilized || r.dimension == 0) {
        return Err(HeegaardError::Summand);
    }
    Ok(parts.iter().map(|r| r.dimension).product())
}

/// Generators of the given kind on handle 1.
pub(crate) fn handle_gens(kind: Kind) -> [GenId; 4] {
    [(1, 1), (1, 2), (2, 1), (2, 2)].map(|(i, j)| GenId::new(1, kind, i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_syntax_round_trips() {
        let w: MapWord = "TTST'T'".parse().unwrap();
        assert_eq!(w.0, vec![MapGen::T, MapGen::T, MapGen::S, MapGen::TInv, MapGen::TInv]);
        assert_eq!(w.to_string(), "TTST'T'");
        assert_eq!("id".parse::<MapWord>().unwrap(), MapWord::default());
        assert!("TX".parse::<MapWord>().is_err());
    }

    #[test]
    fn lens_words_have_the_right_homology() {
        for p in 1..=9u64 {
            for q in 0..p as i64 {
                let Ok(w) = lens_word(p, q) else { continue };
                let (pp, qq) = w.lens_parameters();
                assert_eq!(pp, p as i64);
                if p > 1 {
                    assert_eq!(qq, q);
                }
            }
        }
        assert_eq!(lens_word(0, 1).unwrap(), MapWord::default());
        assert!(lens_word(4, 2).is_err());
        assert_eq!("S".parse::<MapWord>().unwrap().lens_parameters(), (-1, 0));
    }

    #[test]
    fn stabilization_window() {
        assert_eq!(stabilization(&[1, 2, 3, 3, 3], 3), (true, 2));
        assert_eq!(stabilization(&[1, 2, 3, 3], 3), (false, 2));
        assert_eq!(stabilization(&[4], 1), (true, 0));
    }

    #[test]
    fn connected_sum_refuses_bad_summands() {
        let r = |d, s| Report {
            dimension: d,
            stabilized: s,
            stabilization_degree: 0,
            safe_degree: 0,
            dims: vec![d],
            basis: vec![],
            strategy: String::new(),
            timings: vec![],
        };
        assert_eq!(connected_sum_dim(&[r(2, true), r(2, true)]).unwrap(), 4);
        assert!(connected_sum_dim(&[r(2, true), r(2, false)]).is_err());
        assert!(connected_sum_dim(&[r(0, true)]).is_err());
    }
}
