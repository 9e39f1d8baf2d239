use std::collections::{BTreeMap, HashMap};

use super::{GenId, NCPoly, Word};
use crate::coeff::{CoeffError, Field, FromScalar, Scalar};

/// `lhs -> rhs`, with `rhs` strictly below `lhs` in the monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule<F = Scalar> {
    pub lhs: Word,
    pub rhs: NCPoly<F>,
}

impl<F: Field> Rule<F> {
    /// Orient a nonzero polynomial as a rule on its leading word.
    pub fn from_poly(p: &NCPoly<F>) -> Option<Self> {
        let (lw, lc) = p.leading()?;
        let inv = lc.inv().expect("stored zero");
        let lhs = lw.clone();
        let mut rhs = NCPoly::zero();
        for (w, c) in p.terms() {
            if *w != lhs {
                rhs.add_term(w.clone(), c.mul(&inv).neg());
            }
        }
        Some(Rule { lhs, rhs })
    }

    /// `lhs - rhs`, the ideal element the rule encodes.
    pub fn as_poly(&self) -> NCPoly<F> {
        NCPoly::word(self.lhs.clone()).sub(&self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceStrategy {
    Leftmost,
    Rightmost,
}

/// A rewriting system with no leading word containing another.
#[derive(Clone, Debug)]
pub struct RewriteSystem<F = Scalar> {
    generators: Vec<GenId>,
    rules: Vec<Rule<F>>,
    index: HashMap<Word, usize>,
    lhs_lens: Vec<usize>,
    confluent_degree: usize,
    safe_degree: usize,
}

impl<F: Field> RewriteSystem<F> {
    pub fn new(generators: Vec<GenId>, rules: Vec<Rule<F>>, confluent_degree: usize, safe_degree: usize) -> Self {
        let mut s = RewriteSystem { generators, rules, index: HashMap::new(), lhs_lens: Vec::new(), confluent_degree, safe_degree };
        s.reindex();
        s
    }

    pub(crate) fn reindex(&mut self) {
        self.index = self.rules.iter().enumerate().map(|(i, r)| (r.lhs.clone(), i)).collect();
        let mut lens: Vec<usize> = self.rules.iter().map(|r| r.lhs.degree()).collect();
        lens.sort_unstable();
        lens.dedup();
        self.lhs_lens = lens;
    }

    pub(crate) fn push_rule(&mut self, rule: Rule<F>) {
        let l = rule.lhs.degree();
        self.index.insert(rule.lhs.clone(), self.rules.len());
        self.rules.push(rule);
        if let Err(i) = self.lhs_lens.binary_search(&l) {
            self.lhs_lens.insert(i, l);
        }
    }

    pub(crate) fn rules_mut(&mut self) -> &mut Vec<Rule<F>> {
        &mut self.rules
    }

    pub(crate) fn set_degrees(&mut self, confluent: usize, safe: usize) {
        self.confluent_degree = confluent;
        self.safe_degree = safe;
    }

    pub fn generators(&self) -> &[GenId] {
        &self.generators
    }

    pub fn rules(&self) -> &[Rule<F>] {
        &self.rules
    }

    pub fn rule_for(&self, lhs: &[u8]) -> Option<&Rule<F>> {
        self.index.get(lhs).map(|&i| &self.rules[i])
    }

    /// Overlaps of combined degree up to this bound have been resolved.
    pub fn confluent_degree(&self) -> usize {
        self.confluent_degree
    }

    /// Normal forms up to this degree are certified canonical.
    pub fn safe_degree(&self) -> usize {
        self.safe_degree
    }

    /// Raise the safe degree on the strength of an external certificate,
    /// such as a flatness comparison; capped at the confluent degree.
    pub fn certify_through(mut self, d: usize) -> Self {
        self.safe_degree = self.safe_degree.max(d.min(self.confluent_degree));
        self
    }

    pub fn max_lhs_degree(&self) -> usize {
        self.lhs_lens.last().copied().unwrap_or(0)
    }

    /// First rule occurrence in `w` under the given strategy, as
    /// `(position, rule index)`.
    pub fn find_match(&self, w: &[u8], strategy: ReduceStrategy) -> Option<(usize, usize)> {
        let n = w.len();
        let probe = |pos: usize| self.lhs_lens.iter().take_while(|&&l| pos + l <= n).find_map(|&l| self.index.get(&w[pos..pos + l]).map(|&i| (pos, i)));
        match strategy {
            ReduceStrategy::Leftmost => (0..n).find_map(probe),
            ReduceStrategy::Rightmost => (0..n).rev().find_map(probe),
        }
    }

    pub fn is_normal(&self, w: &[u8]) -> bool {
        self.find_match(w, ReduceStrategy::Leftmost).is_none()
    }

    pub fn reduce(&self, p: &NCPoly<F>) -> NCPoly<F> {
        self.reduce_with(p, ReduceStrategy::Leftmost)
    }

    /// Rewrite until no monomial contains a leading word.
    ///
    /// The largest remaining term is rewritten first; rewriting only produces
    /// smaller words, so each popped normal word is final.
    pub fn reduce_with(&self, p: &NCPoly<F>, strategy: ReduceStrategy) -> NCPoly<F> {
        let mut todo: BTreeMap<Word, F> = p.clone().into_terms();
        let mut out = NCPoly::zero();
        while let Some((w, c)) = todo.pop_last() {
            match self.find_match(w.bytes(), strategy) {
                None => out.add_term(w, c),
                Some((pos, ri)) => {
                    let rule = &self.rules[ri];
                    let (left, right) = (&w.bytes()[..pos], &w.bytes()[pos + rule.lhs.degree()..]);
                    for (m, d) in rule.rhs.terms() {
                        let nw = Word::sandwich(left, m.bytes(), right);
                        let v = c.mul(d);
                        match todo.entry(nw) {
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert(v);
                            }
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                e.get_mut().add_assign(&v);
                                if e.get().is_zero() {
                                    e.remove();
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<RewriteSystem<G>, E> {
        let rules = self.rules.iter().map(|r| Ok(Rule { lhs: r.lhs.clone(), rhs: r.rhs.try_map(&f)? })).collect::<Result<Vec<_>, E>>()?;
        Ok(RewriteSystem::new(self.generators.clone(), rules, self.confluent_degree, self.safe_degree))
    }
}

impl RewriteSystem<Scalar> {
    /// Image under a coefficient specialization; valid wherever no rule
    /// coefficient has a pole.
    pub fn specialize<G: FromScalar>(&self, ctx: &G::Context) -> Result<RewriteSystem<G>, CoeffError> {
        self.try_map(|c| G::from_scalar(c, ctx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> NCPoly {
        NCPoly::word(s.parse().unwrap())
    }

    #[test]
    fn rules_rewrite_to_normal_forms() {
        // x = a1_11, y = a1_12: y x -> x y and y y -> 1
        let sys = RewriteSystem::new(
            GenId::all(1),
            vec![Rule::from_poly(&p("a1_12 a1_11").sub(&p("a1_11 a1_12"))).unwrap(), Rule::from_poly(&p("a1_12 a1_12").sub(&NCPoly::one())).unwrap()],
            4,
            2,
        );
        let r = sys.reduce(&p("a1_12 a1_11 a1_12 a1_11"));
        assert_eq!(r, p("a1_11 a1_11"));
        assert_eq!(sys.reduce(&NCPoly::one()), NCPoly::one());
        assert!(sys.is_normal("a1_11 a1_12".parse::<Word>().unwrap().bytes()));
    }
}
