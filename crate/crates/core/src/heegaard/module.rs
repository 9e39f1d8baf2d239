//! The genus-one quotient through the left module `M = A / A (b - 1)`.
//!
//! Normal words have every `a` before every `b`, so `M` is spanned by the
//! normal words of the subalgebra generated by `a`. Generators act on `M` by
//! operators: `a` by multiplication and reduction, `b` through the exchange
//! rules `b x -> sum c a b` and `b 1 = delta`. A gluing word `x1 ... xk`
//! replaces each operator by its image under `x1`, then `x2`, and so on, and
//! the quotient is `M` modulo the images of `phi(b) - 1`.

use std::collections::{BTreeMap, HashMap};

use super::{filtered_quotient, handle_gens, HeegaardError, Report};
use crate::coeff::{Field, FromScalar};
use crate::ncalg::{complete_in, CompletionOptions, GenId, Kind, NCPoly, NormalWords, RewriteSystem, Word};
use crate::presentations::{handle_relations, RelTag};

type Col<F> = Vec<(u32, F)>;

/// Dense accumulator for sparse combinations of columns.
struct Scratch<F> {
    acc: Vec<F>,
    live: Vec<bool>,
    touched: Vec<u32>,
}

impl<F: Field> Scratch<F> {
    fn new(n: usize) -> Self {
        Scratch { acc: vec![F::zero(); n], live: vec![false; n], touched: Vec::new() }
    }

    fn axpy(&mut self, c: &F, col: &[(u32, F)]) {
        for (j, v) in col {
            let j = *j as usize;
            if !self.live[j] {
                self.live[j] = true;
                self.touched.push(j as u32);
            }
            self.acc[j].add_mul_assign(c, v);
        }
    }

    fn take(&mut self) -> Col<F> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &j in &self.touched {
            let v = std::mem::replace(&mut self.acc[j as usize], F::zero());
            self.live[j as usize] = false;
            if !v.is_zero() {
                out.push((j, v));
            }
        }
        self.touched.clear();
        out
    }

    fn apply(&mut self, op: &[Col<F>], v: &[(u32, F)]) -> Col<F> {
        for (j, c) in v {
            self.axpy(c, &op[*j as usize]);
        }
        self.take()
    }
}

/// `(h, x) -> [(x', h', c)]`: `h x` rewritten as `sum c x' h'`.
type Exchanges<F> = HashMap<(GenId, GenId), Vec<(GenId, GenId, F)>>;

/// `M` truncated at degree `n`, with the operators of the eight generators.
pub struct GenusOneModule<F> {
    n: usize,
    words: Vec<Word>,
    base: Vec<Vec<Col<F>>>,
}

fn slot(g: GenId) -> usize {
    g.index() as usize
}

impl<F: FromScalar> GenusOneModule<F> {
    /// `sys` is the certified genus-one system, used for the exchange rules.
    pub fn new(sys: &RewriteSystem, n: usize, ctx: &F::Context) -> Result<Self, HeegaardError> {
        let agens = handle_gens(Kind::A);
        let rels: Vec<NCPoly<F>> = handle_relations(1)
            .into_iter()
            .filter(|r| matches!(r.tag, RelTag::AA { .. } | RelTag::Det { kind: Kind::A, .. }))
            .map(|r| r.poly.specialize(ctx))
            .collect::<Result<_, _>>()?;
        let asys = complete_in(agens.to_vec(), &rels, &CompletionOptions::new(n))
            .map_err(|p| HeegaardError::Gluing(format!("subalgebra completion: {}", p.reason)))?;
        // The classical coordinate ring has (d+1)^2 words of degree d; equal
        // counts certify the truncated normal forms.
        let counts = NormalWords::new(&asys).counts(n);
        if let Some(d) = (0..=n).find(|&d| counts[d] != ((d + 1) * (d + 1)) as u64) {
            return Err(HeegaardError::Degree { degree: d, safe: d.saturating_sub(1) });
        }
        let mut words = NormalWords::new(&asys).enumerate(n);
        words.sort();
        let index: HashMap<&Word, u32> = words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
        let mut base: Vec<Vec<Col<F>>> = vec![Vec::new(); 8];
        for &g in &agens {
            base[slot(g)] = words
                .iter()
                .map(|w| {
                    if w.degree() >= n {
                        return Vec::new();
                    }
                    let r = asys.reduce(&NCPoly::word(Word::gen(g).concat(w)));
                    let mut col: Col<F> = r.terms().map(|(u, c)| (index[u], c.clone())).collect();
                    col.sort_by_key(|e| e.0);
                    col
                })
                .collect();
        }
        let bgens = handle_gens(Kind::B);
        let mut cross: Exchanges<F> = HashMap::new();
        for &h in &bgens {
            for &x in &agens {
                let r = sys.reduce(&NCPoly::word(Word::from_gens(&[h, x])));
                let mut terms = Vec::new();
                for (w, c) in r.terms() {
                    let gs: Vec<GenId> = w.gens().collect();
                    match gs.as_slice() {
                        [y, z] if y.kind() == Kind::A && z.kind() == Kind::B => terms.push((*y, *z, F::from_scalar(c, ctx)?)),
                        _ => return Err(HeegaardError::Gluing(format!("exchange rule for {h} {x} has term {w}"))),
                    }
                }
                cross.insert((h, x), terms);
            }
        }
        let (mut work, mut sum) = (Scratch::new(words.len()), Scratch::new(words.len()));
        let unit = index[&Word::unit()];
        let mut lb: Vec<Vec<Col<F>>> = (0..4).map(|_| Vec::with_capacity(words.len())).collect();
        for w in &words {
            for (k, &h) in bgens.iter().enumerate() {
                let col = if w.is_unit() {
                    if h.row() == h.col() {
                        vec![(unit, F::one())]
                    } else {
                        Vec::new()
                    }
                } else {
                    let x = w.gens().next().expect("nonempty");
                    let rest = index[&Word::from_bytes(w.bytes()[1..].to_vec())] as usize;
                    for (y, z, c) in &cross[&(h, x)] {
                        let zk = bgens.iter().position(|b| b == z).expect("b generator");
                        let inner = &lb[zk][rest];
                        let img = work.apply(&base[slot(*y)], inner);
                        sum.axpy(c, &img);
                    }
                    sum.take()
                };
                lb[k].push(col);
            }
        }
        for (k, &h) in bgens.iter().enumerate() {
            base[slot(h)] = std::mem::take(&mut lb[k]);
        }
        Ok(GenusOneModule { n, words, base })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Rows spanning the images of `phi(b) - 1`, where `phi` is the
    /// composite of `levels` in order, and the largest degree raise.
    pub fn twisted_rows(&self, levels: &[BTreeMap<GenId, NCPoly<F>>]) -> (Vec<Vec<(usize, F)>>, usize) {
        let nw = self.words.len();
        let (mut work, mut sum) = (Scratch::new(nw), Scratch::new(nw));
        let mut raise = [1usize, 1, 1, 1, 0, 0, 0, 0];
        let mut ops: Vec<Option<Vec<Col<F>>>> = vec![None; 8];
        for level in levels {
            let mut next: Vec<Option<Vec<Col<F>>>> = vec![None; 8];
            let mut next_raise = raise;
            for (g, img) in level {
                let terms: Vec<(Vec<usize>, F)> = img.terms().map(|(w, c)| (w.gens().map(slot).collect(), c.clone())).collect();
                let r = terms.iter().map(|(t, _)| t.iter().map(|&x| raise[x]).sum::<usize>()).max().unwrap_or(0);
                let mut groups: BTreeMap<usize, Vec<(&[usize], &F)>> = BTreeMap::new();
                let mut constant = F::zero();
                for (t, c) in &terms {
                    match t.split_first() {
                        Some((x, rest)) => groups.entry(*x).or_default().push((rest, c)),
                        None => constant = c.clone(),
                    }
                }
                let mut cols = Vec::with_capacity(nw);
                for (i, w) in self.words.iter().enumerate() {
                    if w.degree() + r > self.n {
                        cols.push(Vec::new());
                        continue;
                    }
                    let e: Col<F> = vec![(i as u32, F::one())];
                    let mut memo: HashMap<&[usize], Col<F>> = HashMap::new();
                    let mut parts = Vec::new();
                    for (x, ts) in &groups {
                        for (rest, c) in ts {
                            suffix(rest, &e, &self.base, &ops, &mut memo, &mut work);
                            sum.axpy(*c, &memo[rest]);
                        }
                        let inner = sum.take();
                        parts.push(work.apply(current(&self.base, &ops, *x), &inner));
                    }
                    for p in &parts {
                        sum.axpy(&F::one(), p);
                    }
                    sum.axpy(&constant, &e);
                    cols.push(sum.take());
                }
                next[slot(*g)] = Some(cols);
                next_raise[slot(*g)] = r;
            }
            for g in 0..8 {
                if next[g].is_none() {
                    next[g] = ops[g].take();
                }
            }
            ops = next;
            raise = next_raise;
        }
        let mut rows = Vec::new();
        for h in handle_gens(Kind::B) {
            let g = slot(h);
            let o = current(&self.base, &ops, g);
            for (i, w) in self.words.iter().enumerate() {
                if w.degree() + raise[g] > self.n {
                    continue;
                }
                let mut row: Vec<(usize, F)> = o[i].iter().map(|(j, c)| (*j as usize, c.clone())).collect();
                if h.row() == h.col() {
                    match row.iter_mut().find(|e| e.0 == i) {
                        Some(e) => e.1 = e.1.sub(&F::one()),
                        None => row.push((i, F::one().neg())),
                    }
                    row.retain(|e| !e.1.is_zero());
                }
                rows.push(row);
            }
        }
        let top = handle_gens(Kind::B).iter().map(|&h| raise[slot(h)]).max().unwrap_or(0);
        (rows, top)
    }

    /// The filtered quotient for the composite of `levels`.
    pub fn quotient(&self, levels: &[BTreeMap<GenId, NCPoly<F>>], window: usize) -> Result<Report, HeegaardError> {
        let start = std::time::Instant::now();
        let (rows, raise) = self.twisted_rows(levels);
        if raise > self.n {
            return Err(HeegaardError::Degree { degree: raise, safe: self.n });
        }
        let operators = start.elapsed();
        let safe = self.n - raise;
        let (dims, basis, stabilized, sdeg) = filtered_quotient(&self.words, rows, safe, window);
        Ok(Report {
            dimension: dims[safe],
            stabilized,
            stabilization_degree: sdeg,
            safe_degree: safe,
            dims,
            basis,
            strategy: "genus-one module".into(),
            timings: vec![("operators".into(), operators), ("elimination".into(), start.elapsed() - operators)],
        })
    }
}

fn current<'a, F>(base: &'a [Vec<Col<F>>], ops: &'a [Option<Vec<Col<F>>>], g: usize) -> &'a [Col<F>] {
    ops[g].as_deref().unwrap_or(&base[g])
}

/// `O(rest[0]) ... O(rest[last]) e`, memoized on suffixes.
fn suffix<'a, F: Field>(
    rest: &'a [usize],
    e: &Col<F>,
    base: &[Vec<Col<F>>],
    ops: &[Option<Vec<Col<F>>>],
    memo: &mut HashMap<&'a [usize], Col<F>>,
    scratch: &mut Scratch<F>,
) {
    if memo.contains_key(rest) {
        return;
    }
    let v = match rest.split_first() {
        None => e.clone(),
        Some((x, tail)) => {
            suffix(tail, e, base, ops, memo, scratch);
            scratch.apply(current(base, ops, *x), &memo[tail])
        }
    };
    memo.insert(rest, v);
}
