//! Genus-one twist maps from an ansatz. The moving generators are sent to
//! combinations of normal words of degree at most two; relations with one
//! moving letter per term make this linear, the rest are quadratic and pin a
//! point of the kernel once its classical limit is fixed.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{certify, handle_gens, Automorphism, HeegaardError};
use crate::coeff::{Field, LaurentPoly, Scalar};
use crate::linsolve::{kernel_basis, SparseMatrix};
use crate::ncalg::{GenId, Kind, NCPoly, NormalWords, RewriteSystem, Word};
use crate::presentations::Presentation;

/// Commutative polynomial keyed by sorted generator bytes.
type Comm = BTreeMap<Vec<u8>, BigRational>;
type CMat = [[Comm; 2]; 2];

fn comm_add(x: &Comm, y: &Comm) -> Comm {
    let mut out = x.clone();
    for (k, v) in y {
        let e = out.entry(k.clone()).or_insert_with(<BigRational as Zero>::zero);
        *e += v;
        if Zero::is_zero(&*e) {
            out.remove(k);
        }
    }
    out
}

fn comm_mul(x: &Comm, y: &Comm) -> Comm {
    let mut out = Comm::new();
    for (u, a) in x {
        for (v, b) in y {
            let mut k = [u.as_slice(), v.as_slice()].concat();
            k.sort_unstable();
            out = comm_add(&out, &Comm::from([(k, a * b)]));
        }
    }
    out
}

fn comm_neg(x: &Comm) -> Comm {
    x.iter().map(|(k, v)| (k.clone(), -v)).collect()
}

fn comm_of(p: &NCPoly<BigRational>) -> Comm {
    p.terms().fold(Comm::new(), |acc, (w, c)| {
        let mut k = w.bytes().to_vec();
        k.sort_unstable();
        comm_add(&acc, &Comm::from([(k, c.clone())]))
    })
}

fn gen_mat(kind: Kind) -> CMat {
    let e = |i, j| Comm::from([(vec![GenId::new(1, kind, i, j).index()], <BigRational as One>::one())]);
    [[e(1, 1), e(1, 2)], [e(2, 1), e(2, 2)]]
}

fn adj(m: &CMat) -> CMat {
    [[m[1][1].clone(), comm_neg(&m[0][1])], [comm_neg(&m[1][0]), m[0][0].clone()]]
}

fn mat_mul(x: &CMat, y: &CMat) -> CMat {
    let e = |i: usize, j: usize| comm_add(&comm_mul(&x[i][0], &y[0][j]), &comm_mul(&x[i][1], &y[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// The basic twists, named by their classical limits on the generator
/// matrices `X = (a)`, `Y = (b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Twist {
    /// `Y -> Y X`
    T,
    /// `Y -> Y X^-1`
    TInv,
    /// `X -> X Y`
    Tb,
}

impl Twist {
    pub fn moving(self) -> Kind {
        match self {
            Twist::T | Twist::TInv => Kind::B,
            Twist::Tb => Kind::A,
        }
    }

    fn target(self) -> CMat {
        let (x, y) = (gen_mat(Kind::A), gen_mat(Kind::B));
        match self {
            Twist::T => mat_mul(&y, &x),
            Twist::TInv => mat_mul(&y, &adj(&x)),
            Twist::Tb => mat_mul(&y, &x),
        }
    }
}

/// Scale a vector to Laurent entries with no common factor.
fn primitive(v: &[Scalar]) -> Vec<Scalar> {
    let mut den = LaurentPoly::one();
    for c in v.iter().filter(|c| !c.is_zero()) {
        let g = den.gcd(c.denom());
        den = den.mul(&c.denom().div_exact(&g));
    }
    let nums: Vec<LaurentPoly> = v.iter().map(|c| c.numer().mul(&den).div_exact(c.denom())).collect();
    let g = nums.iter().fold(LaurentPoly::zero(), |g, n| g.gcd(n));
    if g.is_zero() {
        return v.to_vec();
    }
    nums.iter().map(|n| Scalar::from_laurent(n.div_exact(&g))).collect()
}

fn classical(c: &Scalar) -> Result<BigRational, HeegaardError> {
    Ok(c.classical_limit()?)
}

/// A rational solution of `sum_k t_k cols[k] = target`, if any.
fn solve_rational(cols: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = cols.len();
    let mut m = SparseMatrix::<BigRational>::new(0, n + 1);
    for (r, t) in target.iter().enumerate() {
        m.push_row(cols.iter().enumerate().map(|(k, c)| (k, c[r].clone())).chain([(n, -t.clone())]));
    }
    kernel_basis(&m).into_iter().find(|v| !Zero::is_zero(&v[n])).map(|v| {
        let s = v[n].clone();
        v[..n].iter().map(|x| x / &s).collect()
    })
}

/// Coordinates of a quadratic relation in the unknowns `t_k t_l`.
struct Quadratic {
    /// `pairs[(k, l)]`: the reduced part with image `k` on the first moving
    /// letter and `l` on the second.
    pairs: HashMap<(usize, usize), NCPoly>,
    constant: NCPoly,
}

struct Ansatz<'a> {
    sys: &'a RewriteSystem,
    moving: [GenId; 4],
    basis: Vec<Word>,
}

impl Ansatz<'_> {
    fn slot(&self, g: GenId) -> Option<usize> {
        self.moving.iter().position(|&m| m == g)
    }

    fn unknowns(&self) -> usize {
        4 * self.basis.len()
    }

    fn image(&self, v: &[Scalar], m: usize) -> NCPoly {
        let nb = self.basis.len();
        NCPoly::from_terms((0..nb).map(|k| (self.basis[k].clone(), v[m * nb + k].clone())))
    }

    fn moving_count(&self, w: &Word) -> usize {
        w.gens().filter(|g| self.slot(*g).is_some()).count()
    }

    /// Rows of the linear constraints, keyed by relation and result word.
    fn linear_rows(&self, p: &Presentation) -> SparseMatrix {
        let nb = self.basis.len();
        let mut rows: BTreeMap<(usize, Word), Vec<(usize, Scalar)>> = BTreeMap::new();
        for (ri, r) in p.relations().iter().enumerate() {
            if !r.poly.terms().all(|(w, _)| self.moving_count(w) == 1) {
                continue;
            }
            for (w, c) in r.poly.terms() {
                let gs: Vec<GenId> = w.gens().collect();
                let pos = gs.iter().position(|g| self.slot(*g).is_some()).expect("one moving letter");
                let m = self.slot(gs[pos]).expect("moving");
                let (pre, suf) = (Word::from_gens(&gs[..pos]), Word::from_gens(&gs[pos + 1..]));
                for (k, u) in self.basis.iter().enumerate() {
                    let img = self.sys.reduce(&NCPoly::term(c.clone(), pre.concat(u).concat(&suf)));
                    for (v, d) in img.terms() {
                        rows.entry((ri, v.clone())).or_default().push((m * nb + k, d.clone()));
                    }
                }
            }
        }
        let mut m = SparseMatrix::new(0, self.unknowns());
        for (_, r) in rows {
            m.push_row(r);
        }
        m
    }

    fn quadratics(&self, p: &Presentation, vecs: &[Vec<Scalar>], support: &[usize]) -> Vec<Quadratic> {
        let mut out = Vec::new();
        for r in p.relations() {
            let counts: Vec<usize> = r.poly.terms().map(|(w, _)| self.moving_count(w)).collect();
            if !counts.contains(&2) || counts.iter().any(|&c| c != 0 && c != 2) {
                continue;
            }
            let mut q = Quadratic { pairs: HashMap::new(), constant: NCPoly::zero() };
            for (w, c) in r.poly.terms() {
                if self.moving_count(w) == 0 {
                    q.constant = q.constant.add(&NCPoly::term(c.clone(), w.clone()));
                    continue;
                }
                for &k in support {
                    for &l in support {
                        let mut seen = 0;
                        let t = NCPoly::constant(c.clone());
                        let t = w.gens().fold(t, |acc, g| match self.slot(g) {
                            Some(m) => {
                                seen += 1;
                                acc.mul(&self.image(&vecs[if seen == 1 { k } else { l }], m))
                            }
                            None => acc.mul(&NCPoly::gen(g)),
                        });
                        let e = q.pairs.entry((k, l)).or_default();
                        *e = e.add(&self.sys.reduce(&t));
                    }
                }
            }
            q.constant = self.sys.reduce(&q.constant);
            out.push(q);
        }
        out
    }
}

fn coeffs(p: &NCPoly) -> BTreeMap<Word, Scalar> {
    p.terms().map(|(w, c)| (w.clone(), c.clone())).collect()
}

/// Roots `c` of `a0 + c a1 + c^2 a2 = 0` common to every triple.
fn common_roots(triples: &[(Scalar, Scalar, Scalar)]) -> Result<Vec<Scalar>, HeegaardError> {
    let holds = |c: &Scalar| triples.iter().all(|(a0, a1, a2)| (a0 + &(c * &(a1 + &(c * a2)))).is_zero());
    let mut cands = Vec::new();
    if let Some((a0, a1, _)) = triples.iter().find(|(_, a1, a2)| a2.is_zero() && !a1.is_zero()) {
        cands.push((-a0).checked_div(a1)?);
    } else if let Some((a0, a1, a2)) = triples.iter().find(|t| !t.2.is_zero()) {
        let disc = &(a1 * a1) - &(&Scalar::from(4) * &(a0 * a2));
        let r = disc.sqrt()?;
        let two_a2 = &Scalar::from(2) * a2;
        for root in [r.clone(), -r] {
            cands.push((&(-a1) + &root).checked_div(&two_a2)?);
        }
    } else {
        return Err(HeegaardError::Ansatz("quadratic constraints do not fix the ratio".into()));
    }
    Ok(cands.into_iter().filter(holds).collect())
}

/// Solve the ansatz for one twist and verify it with `sys`.
pub fn derive_twist(sys: &RewriteSystem, p: &Presentation, twist: Twist) -> Result<Automorphism, HeegaardError> {
    let moving = handle_gens(twist.moving());
    let basis: Vec<Word> = NormalWords::new(sys).enumerate(2);
    let a = Ansatz { sys, moving, basis };
    let mut vecs: Vec<Vec<Scalar>> = kernel_basis(&a.linear_rows(p)).iter().map(|v| primitive(v)).collect();
    let target = twist.target();
    let target: Vec<Comm> = (0..4).map(|m| target[m / 2][m % 2].clone()).collect();
    // Classical limits, made independent by dividing combinations that
    // vanish at q = 1 by s - 1.
    let s_minus_1 = LaurentPoly::from_terms([(1, <BigRational as One>::one()), (0, -<BigRational as One>::one())]);
    let t0 = loop {
        let lims: Vec<Vec<Comm>> =
            vecs.iter().map(|v| (0..4).map(|m| Ok(comm_of(&a.image(v, m).classical()?))).collect::<Result<_, HeegaardError>>()).collect::<Result<_, _>>()?;
        let mut keys: Vec<(usize, Vec<u8>)> = Vec::new();
        for m in 0..4 {
            for l in lims.iter().map(|l| &l[m]).chain([&target[m]]) {
                keys.extend(l.keys().map(|k| (m, k.clone())));
            }
        }
        keys.sort();
        keys.dedup();
        let col = |l: &Vec<Comm>| keys.iter().map(|(m, k)| l[*m].get(k).cloned().unwrap_or_else(<BigRational as Zero>::zero)).collect::<Vec<_>>();
        let cols: Vec<Vec<BigRational>> = lims.iter().map(col).collect();
        let mut dep = SparseMatrix::<BigRational>::new(0, cols.len());
        for r in 0..keys.len() {
            dep.push_row(cols.iter().enumerate().map(|(k, c)| (k, c[r].clone())));
        }
        let Some(rel) = kernel_basis(&dep).into_iter().next() else {
            let tv: Vec<BigRational> = keys.iter().map(|(m, k)| target[*m].get(k).cloned().unwrap_or_else(<BigRational as Zero>::zero)).collect();
            break solve_rational(&cols, &tv).ok_or_else(|| HeegaardError::Ansatz("classical target is not in the kernel".into()))?;
        };
        let k0 = rel.iter().position(|r| !Zero::is_zero(r)).expect("nonzero relation");
        let n = vecs[0].len();
        let mut comb = vec![Scalar::zero(); n];
        for (k, r) in rel.iter().enumerate() {
            let r = Scalar::from_rational(r.clone());
            for (i, e) in comb.iter_mut().enumerate() {
                *e = &*e + &(&r * &vecs[k][i]);
            }
        }
        let den = Scalar::from_laurent(s_minus_1.clone());
        vecs[k0] = primitive(&comb.iter().map(|c| c.checked_div(&den)).collect::<Result<Vec<_>, _>>()?);
    };
    let support: Vec<usize> = (0..t0.len()).filter(|&k| !Zero::is_zero(&t0[k])).collect();
    let (p0, ratio) = match support.as_slice() {
        [p0] => (*p0, None),
        [p0, r0] => (*p0, Some(*r0)),
        _ => return Err(HeegaardError::Ansatz(format!("classical limit uses {} kernel vectors", support.len()))),
    };
    let quads = a.quadratics(p, &vecs, &support);
    let pair = |q: &Quadratic, k: usize, l: usize| q.pairs.get(&(k, l)).cloned().unwrap_or_default();
    let c = match ratio {
        None => Scalar::zero(),
        Some(r0) => {
            let mut triples = Vec::new();
            for q in quads.iter().filter(|q| q.constant.is_zero()) {
                let (a0, a1, a2) = (pair(q, p0, p0), pair(q, p0, r0).add(&pair(q, r0, p0)), pair(q, r0, r0));
                let (a0, a1, a2) = (coeffs(&a0), coeffs(&a1), coeffs(&a2));
                let mut words: Vec<&Word> = a0.keys().chain(a1.keys()).chain(a2.keys()).collect();
                words.sort();
                words.dedup();
                let get = |m: &BTreeMap<Word, Scalar>, w: &Word| m.get(w).cloned().unwrap_or_else(Scalar::zero);
                triples.extend(words.into_iter().map(|w| (get(&a0, w), get(&a1, w), get(&a2, w))));
            }
            let want = &t0[r0] / &t0[p0];
            let roots = common_roots(&triples)?;
            roots
                .into_iter()
                .find(|c| c.classical_limit().is_ok_and(|v| v == want))
                .ok_or_else(|| HeegaardError::Ansatz("no root with the classical ratio".into()))?
        }
    };
    // Scale from the inhomogeneous relations: lambda^2 D + C = 0.
    let combined = |q: &Quadratic| match ratio {
        None => pair(q, p0, p0),
        Some(r0) => {
            let c2 = &c * &c;
            pair(q, p0, p0).add(&pair(q, p0, r0).add(&pair(q, r0, p0)).scale(&c)).add(&pair(q, r0, r0).scale(&c2))
        }
    };
    let det = quads.iter().find(|q| !q.constant.is_zero()).ok_or_else(|| HeegaardError::Ansatz("no determinant relation".into()))?;
    let d = combined(det);
    let unit = Word::unit();
    let lambda2 = (-det.constant.coeff(&unit)).checked_div(&d.coeff(&unit))?;
    let lambda = lambda2.sqrt().map_err(|e| HeegaardError::Ansatz(e.to_string()))?;
    let want = Scalar::from_rational(t0[p0].clone());
    let lambda = if classical(&lambda)? == classical(&want)? { lambda } else { -lambda };
    let mut images = BTreeMap::new();
    for (m, g) in moving.iter().enumerate() {
        let mut img = a.image(&vecs[p0], m);
        if let Some(r0) = ratio {
            img = img.add(&a.image(&vecs[r0], m).scale(&c));
        }
        images.insert(*g, img.scale(&lambda));
    }
    certify(Automorphism::from_images(images), sys, p, sys.safe_degree())
}

/// The genus-one twists, checked through the degree of `sys`.
#[derive(Clone, Debug)]
pub struct TwistSet {
    pub t: Automorphism,
    pub t_inv: Automorphism,
    pub tb: Automorphism,
    /// `T^-1 o Tb o T^-1`, classically `X -> X Y X^-1`, `Y -> X^-1`.
    pub s: Automorphism,
}

impl TwistSet {
    pub fn derive(sys: &RewriteSystem, p: &Presentation) -> Result<Self, HeegaardError> {
        let t = derive_twist(sys, p, Twist::T)?;
        let t_inv = derive_twist(sys, p, Twist::TInv)?;
        let tb = derive_twist(sys, p, Twist::Tb)?;
        let s = t_inv.after(&tb.after(&t_inv, sys)?, sys)?;
        let s = certify(s, sys, p, sys.safe_degree())?;
        Ok(TwistSet { t, t_inv, tb, s })
    }

    pub fn letter(&self, g: super::MapGen) -> &Automorphism {
        match g {
            super::MapGen::S => &self.s,
            super::MapGen::T => &self.t,
            super::MapGen::TInv => &self.t_inv,
            super::MapGen::Tb => &self.tb,
        }
    }
}
