//! Defining relations of the elliptic double `D_q(SL2)`, its braided tensor
//! powers, and their classical limits.
//!
//! Matrices act on `V (x) V` with basis `e_i (x) e_j` at index `2(i-1) + (j-1)`.
//! For a generator matrix `X` with entries `x^i_j`, `X_1 = X (x) Id` and
//! `X_2 = Id (x) X`. Component `(r, c)` of a matrix equation `L = R` becomes
//! the relation `L[r][c] - R[r][c]`, taken row-major.

mod rmatrix;

use std::fmt;

use sha2::{Digest, Sha256};

pub use rmatrix::{flip, rmatrix, DenseMatrix, RMatrix};

use crate::coeff::{CoeffError, LaurentPoly, Scalar};
use crate::ncalg::{complete, GenId, Kind, NCPoly, NcError, NormalWords, RewriteSystem, Word};

/// Which exchange form ties a generator matrix of one handle to one of a
/// later handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossVariant {
    /// `R21 X1 R12 Y2 = Y2 R21 X1 R12`
    Exchange,
    /// `R21 X1 R12 Y2 = Y2 R21 X1 R21^-1`
    Inverse,
}

impl fmt::Display for CrossVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossVariant::Exchange => "exchange",
            CrossVariant::Inverse => "inverse",
        })
    }
}

/// Variants for the pairs `(A,A), (A,B), (B,A), (B,B)`, in that order, as
/// selected by the flatness certificate.
pub const CERTIFIED_CROSS: [CrossVariant; 4] = [CrossVariant::Exchange; 4];

/// Where a relation came from. `row` and `col` index the 4x4 component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RelTag {
    AA { factor: usize, row: usize, col: usize },
    BB { factor: usize, row: usize, col: usize },
    BA { factor: usize, row: usize, col: usize },
    Det { factor: usize, kind: Kind },
    Cross { k: usize, l: usize, x: Kind, y: Kind, row: usize, col: usize },
    Other(String),
}

fn kind_char(k: Kind) -> char {
    match k {
        Kind::A => 'A',
        Kind::B => 'B',
    }
}

impl fmt::Display for RelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelTag::AA { factor, row, col } => write!(f, "AA[{factor}]({row},{col})"),
            RelTag::BB { factor, row, col } => write!(f, "BB[{factor}]({row},{col})"),
            RelTag::BA { factor, row, col } => write!(f, "BA[{factor}]({row},{col})"),
            RelTag::Det { factor, kind } => write!(f, "det{}[{factor}]", kind_char(*kind)),
            RelTag::Cross { k, l, x, y, row, col } => {
                write!(f, "cross[{k},{l}]({}{})({row},{col})", kind_char(*x), kind_char(*y))
            }
            RelTag::Other(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub tag: RelTag,
    pub poly: NCPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    genus: usize,
    generators: Vec<GenId>,
    relations: Vec<Relation>,
    cross: [CrossVariant; 4],
}

impl Presentation {
    pub fn new(genus: usize, generators: Vec<GenId>, relations: Vec<Relation>, cross: [CrossVariant; 4]) -> Self {
        Presentation { genus, generators, relations, cross }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn generators(&self) -> Vec<GenId> {
        self.generators.clone()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relations_mut(&mut self) -> &mut Vec<Relation> {
        &mut self.relations
    }

    pub fn polys(&self) -> Vec<NCPoly> {
        self.relations.iter().map(|r| r.poly.clone()).collect()
    }

    pub fn cross_variants(&self) -> [CrossVariant; 4] {
        self.cross
    }

    pub fn to_text(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        let cross: Vec<String> = ["AA", "AB", "BA", "BB"].iter().zip(self.cross).map(|(p, v)| format!("{p}={v}")).collect();
        let mut s = format!("presentation genus {}\ngenerators {}\ncross {}\n", self.genus, gens.join(" "), cross.join(" "));
        for r in &self.relations {
            s.push_str(&format!("{} : {}\n", r.tag, r.poly));
        }
        s
    }

    /// Hex SHA-256 of the text form; the cache key for completed systems.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

type PolyMat = Vec<NCPoly>;

fn mat_mul(a: &PolyMat, b: &PolyMat) -> PolyMat {
    let mut out = vec![NCPoly::zero(); 16];
    for i in 0..4 {
        for k in 0..4 {
            if a[i * 4 + k].is_zero() {
                continue;
            }
            for j in 0..4 {
                if !b[k * 4 + j].is_zero() {
                    out[i * 4 + j] = out[i * 4 + j].add(&a[i * 4 + k].mul(&b[k * 4 + j]));
                }
            }
        }
    }
    out
}

fn constant_mat(m: &DenseMatrix<Scalar>) -> PolyMat {
    m.entries().iter().map(|c| NCPoly::constant(c.clone())).collect()
}

/// `X_1` (`first = true`) or `X_2` for the generator matrix of `kind` on
/// handle `factor`.
fn leg(factor: usize, kind: Kind, first: bool) -> PolyMat {
    let mut out = vec![NCPoly::zero(); 16];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let entry =
                        if first { (j == l).then(|| GenId::new(factor, kind, i + 1, k + 1)) } else { (i == k).then(|| GenId::new(factor, kind, j + 1, l + 1)) };
                    if let Some(g) = entry {
                        out[(2 * i + j) * 4 + 2 * k + l] = NCPoly::gen(g);
                    }
                }
            }
        }
    }
    out
}

fn prod(ms: &[&PolyMat]) -> PolyMat {
    ms[1..].iter().fold(ms[0].clone(), |acc, m| mat_mul(&acc, m))
}

/// Canonical form of a relation: Laurent polynomial coefficients with no
/// common factor, and leading coefficient with positive leading rational
/// coefficient and lowest exponent zero.
pub fn canonical_relation(p: &NCPoly) -> NCPoly {
    let mut den = LaurentPoly::one();
    for (_, c) in p.terms() {
        let g = den.gcd(c.denom());
        den = den.mul(&c.denom().div_exact(&g));
    }
    let nums: Vec<(Word, LaurentPoly)> = p.terms().map(|(w, c)| (w.clone(), c.numer().mul(&den).div_exact(c.denom()))).collect();
    let g = nums.iter().fold(LaurentPoly::zero(), |g, (_, n)| g.gcd(n));
    let Some((_, lead)) = nums.last() else { return NCPoly::zero() };
    let lead = lead.div_exact(&g);
    let unit = LaurentPoly::monomial(lead.leading_coeff(), lead.low()).mul(&g);
    NCPoly::from_terms(nums.iter().map(|(w, n)| (w.clone(), Scalar::from_laurent(n.div_exact(&unit)))))
}

fn monic(p: NCPoly) -> NCPoly {
    canonical_relation(&p)
}

fn components(lhs: &PolyMat, rhs: &PolyMat, tag: impl Fn(usize, usize) -> RelTag) -> Vec<Relation> {
    (0..16)
        .filter_map(|i| {
            let p = lhs[i].sub(&rhs[i]);
            (!p.is_zero()).then(|| Relation { tag: tag(i / 4 + 1, i % 4 + 1), poly: monic(p) })
        })
        .collect()
}

struct Mats {
    r12: PolyMat,
    r21: PolyMat,
    r21_inv: PolyMat,
}

fn mats() -> Mats {
    let r = rmatrix();
    let r21 = r.r21();
    Mats { r12: constant_mat(r.matrix()), r21_inv: constant_mat(&r21.inverse().expect("R is invertible")), r21: constant_mat(&r21) }
}

fn det_relation(factor: usize, kind: Kind) -> Relation {
    let g = |i, j| NCPoly::gen(GenId::new(factor, kind, i, j));
    let p = g(1, 1).mul(&g(2, 2)).sub(&g(1, 2).mul(&g(2, 1)).scale(&Scalar::q_pow(2))).sub(&NCPoly::one());
    Relation { tag: RelTag::Det { factor, kind }, poly: monic(p) }
}

/// Relations internal to one handle: AA, BB, BA and both determinants.
pub fn handle_relations(factor: usize) -> Vec<Relation> {
    let m = mats();
    let (a1, a2) = (leg(factor, Kind::A, true), leg(factor, Kind::A, false));
    let (b1, b2) = (leg(factor, Kind::B, true), leg(factor, Kind::B, false));
    let mut rels = Vec::new();
    rels.extend(components(&prod(&[&m.r21, &a1, &m.r12, &a2]), &prod(&[&a2, &m.r21, &a1, &m.r12]), |row, col| RelTag::AA { factor, row, col }));
    rels.extend(components(&prod(&[&m.r21, &b1, &m.r12, &b2]), &prod(&[&b2, &m.r21, &b1, &m.r12]), |row, col| RelTag::BB { factor, row, col }));
    rels.extend(components(&prod(&[&m.r21, &b1, &m.r12, &a2]), &prod(&[&a2, &m.r21, &b1, &m.r21_inv]), |row, col| RelTag::BA { factor, row, col }));
    rels.push(det_relation(factor, Kind::A));
    rels.push(det_relation(factor, Kind::B));
    rels
}

/// Exchange relations between handles `k < l`, four matrix equations.
pub fn braided_cross_relations(k: usize, l: usize) -> Vec<Relation> {
    braided_cross_relations_with(k, l, CERTIFIED_CROSS)
}

pub fn braided_cross_relations_with(k: usize, l: usize, variants: [CrossVariant; 4]) -> Vec<Relation> {
    assert!(k < l, "cross relations need k < l");
    let m = mats();
    let pairs = [(Kind::A, Kind::A), (Kind::A, Kind::B), (Kind::B, Kind::A), (Kind::B, Kind::B)];
    let mut rels = Vec::new();
    for ((x, y), v) in pairs.into_iter().zip(variants) {
        let x1 = leg(k, x, true);
        let y2 = leg(l, y, false);
        let tail = match v {
            CrossVariant::Exchange => &m.r12,
            CrossVariant::Inverse => &m.r21_inv,
        };
        rels.extend(components(&prod(&[&m.r21, &x1, &m.r12, &y2]), &prod(&[&y2, &m.r21, &x1, tail]), |row, col| RelTag::Cross { k, l, x, y, row, col }));
    }
    rels
}

/// The internal skein algebra of a genus `g` surface minus a disk.
pub fn dq_presentation(g: usize) -> Presentation {
    dq_presentation_with(g, CERTIFIED_CROSS)
}

pub fn dq_presentation_with(g: usize, cross: [CrossVariant; 4]) -> Presentation {
    assert!(g >= 1, "genus must be positive");
    let mut rels = Vec::new();
    for f in 1..=g {
        rels.extend(handle_relations(f));
    }
    for k in 1..=g {
        for l in k + 1..=g {
            rels.extend(braided_cross_relations_with(k, l, cross));
        }
    }
    Presentation::new(g, GenId::all(g), rels, cross)
}

/// Coefficient-wise `q -> 1` limit.
pub fn classical_presentation(p: &Presentation) -> Result<Presentation, CoeffError> {
    let mut rels = Vec::new();
    for r in p.relations() {
        let c = r.poly.classical()?;
        let poly = NCPoly::from_terms(c.terms().map(|(w, v)| (w.clone(), Scalar::from_rational(v.clone()))));
        if !poly.is_zero() {
            rels.push(Relation { tag: r.tag.clone(), poly: monic(poly) });
        }
    }
    Ok(Presentation::new(p.genus(), p.generators(), rels, p.cross_variants()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessReport {
    pub flat: bool,
    /// Normal-word counts per degree `0..=D`.
    pub quantum: Vec<u64>,
    pub classical: Vec<u64>,
    /// Degree through which quantum normal forms are certified.
    pub safe_degree: usize,
}

/// Compare normal-word counts of the quantum and classical completions.
///
/// A truncated count bounds the true dimension from above, and the generic
/// dimension bounds the classical one from above. So when the classical
/// system is a complete basis (`D >= 2 max_lhs - 1`) and the counts agree
/// through `D`, the quantum normal words are a basis through `D`.
pub fn hilbert_flatness(p: &Presentation, d: usize) -> Result<FlatnessReport, NcError> {
    let (report, _) = certified_completion(p, d)?;
    Ok(report)
}

/// Completion together with its flatness report; when flat, the returned
/// system has safe degree `d`.
pub fn certified_completion(p: &Presentation, d: usize) -> Result<(FlatnessReport, RewriteSystem), NcError> {
    let cp = classical_presentation(p).map_err(|e| NcError::Parse(e.to_string()))?;
    let qs = complete(p, d)?;
    let cs = complete(&cp, d)?;
    let quantum = NormalWords::new(&qs).counts(d);
    let classical = NormalWords::new(&cs).counts(d);
    let classical_exact = d + 1 >= 2 * cs.max_lhs_degree();
    let flat = classical_exact && quantum == classical;
    let safe_degree = if flat { d } else { qs.safe_degree() };
    let qs = qs.certify_through(safe_degree);
    Ok((FlatnessReport { flat, quantum, classical, safe_degree }, qs))
}
#[cfg(test)]
mod tests {
    use super::*;

    fn rel_poly(s: &str) -> NCPoly {
        // Terms written as `coeff*word` separated by `;`.
        let mut p = NCPoly::zero();
        for t in s.split(';') {
            let (c, w) = t.split_once('*').unwrap();
            p.add_term(w.parse::<Word>().unwrap(), c.trim().parse::<Scalar>().unwrap());
        }
        monic(p)
    }

    fn contains(p: &Presentation, target: &NCPoly) -> bool {
        p.relations().iter().any(|r| &r.poly == target)
    }

    #[test]
    fn generator_count() {
        assert_eq!(dq_presentation(1).generators().len(), 8);
        assert_eq!(dq_presentation(2).generators().len(), 16);
    }

    #[test]
    fn contains_displayed_relations() {
        let p = dq_presentation(1);
        assert!(contains(&p, &rel_poly("1*a1_11 a1_22; -q^2*a1_12 a1_21; -1*1")));
        assert!(contains(&p, &rel_poly("1*a1_22 a1_21; -q^-2*a1_21 a1_22")));
        assert!(contains(&p, &rel_poly("1*a1_22 a1_12; -q^2*a1_12 a1_22")));
        assert!(contains(&p, &rel_poly("1*a1_22 a1_11; -1*a1_11 a1_22")));
    }

    #[test]
    fn cross_relation_count() {
        let rels = braided_cross_relations(1, 2);
        let matrices: std::collections::HashSet<(Kind, Kind)> = rels
            .iter()
            .map(|r| match r.tag {
                RelTag::Cross { x, y, .. } => (x, y),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(matrices.len(), 4);
        assert_eq!(rels.len(), 64);
    }

    #[test]
    fn classical_limits_are_commutators() {
        for r in braided_cross_relations(1, 2) {
            let c = r.poly.classical().unwrap();
            assert_eq!(c.len(), 2, "{}", r.tag);
            let terms: Vec<_> = c.terms().collect();
            assert_eq!(terms[0].1, &-terms[1].1.clone());
            let (u, v) = (terms[0].0.bytes(), terms[1].0.bytes());
            assert_eq!(u.len(), 2);
            assert_eq!((u[0], u[1]), (v[1], v[0]));
        }
        let cp = classical_presentation(&dq_presentation(1)).unwrap();
        assert!(contains(&cp, &rel_poly("1*a1_11 a1_22; -1*a1_12 a1_21; -1*1")));
        assert!(contains(&cp, &rel_poly("1*a1_22 a1_12; -1*a1_12 a1_22")));
    }

    #[test]
    fn text_form_is_stable() {
        let p = dq_presentation(1);
        assert_eq!(p.hash(), dq_presentation(1).hash());
        let text = p.to_text();
        assert!(text.starts_with("presentation genus 1\ngenerators a1_11 a1_12 a1_21 a1_22 b1_11"));
        assert!(text.contains("detA[1] : "));
    }

    #[test]
    fn genus_one_is_flat_through_four() {
        let (report, sys) = certified_completion(&dq_presentation(1), 4).unwrap();
        assert!(report.flat);
        assert_eq!(report.classical, [1, 8, 34, 104, 259]);
        assert_eq!(sys.safe_degree(), 4);
    }

    #[test]
    fn mutated_exchange_is_not_flat() {
        let mut p = dq_presentation(1);
        let target = rel_poly("1*a1_22 a1_12; -q^2*a1_12 a1_22");
        let r = p.relations_mut().iter_mut().find(|r| r.poly == target).unwrap();
        r.poly = rel_poly("1*a1_22 a1_12; -q^3*a1_12 a1_22");
        let report = hilbert_flatness(&p, 3).unwrap();
        assert!(!report.flat);
        assert!(report.quantum.iter().zip(&report.classical).any(|(q, c)| q < c));
    }
}
