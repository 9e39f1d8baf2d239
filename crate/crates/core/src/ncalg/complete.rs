use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use super::{GenId, NCPoly, NcError, RewriteSystem, Rule, Word};
use crate::coeff::{Field, Scalar};
use crate::presentations::Presentation;

/// An ambiguity of two rules on `word` and the difference of its two
/// one-step rewrites.
#[derive(Clone, Debug)]
pub struct Overlap<F = Scalar> {
    pub word: Word,
    pub spoly: NCPoly<F>,
}

/// S-polynomials of every proper overlap of the two leading words: suffix of
/// one equal to a prefix of the other (both ways), and containment. Passing
/// the same rule twice gives its self-overlaps.
pub fn spoly_overlaps<F: Field>(r1: &Rule<F>, r2: &Rule<F>) -> Vec<Overlap<F>> {
    let mut out = Vec::new();
    let same = r1 == r2;
    suffix_prefix(r1, r2, &mut out);
    if same {
        return out;
    }
    suffix_prefix(r2, r1, &mut out);
    if r1.lhs == r2.lhs {
        out.push(Overlap { word: r1.lhs.clone(), spoly: r1.rhs.sub(&r2.rhs) });
    } else {
        containment(r1, r2, &mut out);
        containment(r2, r1, &mut out);
    }
    out
}

/// `u = x w`, `v = w y` with `x`, `w`, `y` nonempty: the word `x w y`.
fn suffix_prefix<F: Field>(r1: &Rule<F>, r2: &Rule<F>, out: &mut Vec<Overlap<F>>) {
    let (u, v) = (r1.lhs.bytes(), r2.lhs.bytes());
    for k in 1..u.len().min(v.len()) {
        if u[u.len() - k..] == v[..k] {
            let x = &u[..u.len() - k];
            let y = &v[k..];
            let word = Word::sandwich(x, &v[..k], y);
            let spoly = r1.rhs.sandwich(&[], y).sub(&r2.rhs.sandwich(x, &[]));
            out.push(Overlap { word, spoly });
        }
    }
}

/// `u = x v y` with `v` strictly shorter.
fn containment<F: Field>(r1: &Rule<F>, r2: &Rule<F>, out: &mut Vec<Overlap<F>>) {
    let (u, v) = (r1.lhs.bytes(), r2.lhs.bytes());
    if v.len() >= u.len() {
        return;
    }
    for pos in 0..=u.len() - v.len() {
        if &u[pos..pos + v.len()] == v {
            let spoly = r1.rhs.sub(&r2.rhs.sandwich(&u[..pos], &u[pos + v.len()..]));
            out.push(Overlap { word: r1.lhs.clone(), spoly });
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompletionOptions {
    /// Overlaps of combined degree above this are not resolved.
    pub degree: usize,
    pub max_rules: usize,
    pub time_limit: Option<Duration>,
}

impl CompletionOptions {
    pub fn new(degree: usize) -> Self {
        CompletionOptions { degree, max_rules: 200_000, time_limit: None }
    }
}

/// Truncated completion of a presentation: every overlap ambiguity of
/// combined degree at most `d` is resolved.
pub fn complete(p: &Presentation, d: usize) -> Result<RewriteSystem, NcError> {
    complete_relations(p.generators(), &p.polys(), &CompletionOptions::new(d))
}

/// Bergman-style completion. Pending polynomials are processed in increasing
/// degree, first in first out within a degree.
pub fn complete_relations(generators: Vec<GenId>, relations: &[NCPoly], opts: &CompletionOptions) -> Result<RewriteSystem, NcError> {
    complete_in(generators, relations, opts).map_err(|p| NcError::Budget { reason: p.reason, partial: Box::new(p.system) })
}

/// A completion stopped by its budget.
#[derive(Clone, Debug)]
pub struct Partial<F> {
    pub reason: String,
    pub system: RewriteSystem<F>,
}

/// [`complete_relations`] over any coefficient field.
#[allow(clippy::result_large_err)]
pub fn complete_in<F: Field>(generators: Vec<GenId>, relations: &[NCPoly<F>], opts: &CompletionOptions) -> Result<RewriteSystem<F>, Partial<F>> {
    let start = Instant::now();
    let d = opts.degree;
    let mut sys: RewriteSystem<F> = RewriteSystem::new(generators, Vec::new(), d, 0);
    let mut queue: BTreeMap<(usize, u64), NCPoly<F>> = BTreeMap::new();
    let mut seq = 0u64;
    let mut enqueue = |queue: &mut BTreeMap<(usize, u64), NCPoly<F>>, deg: usize, p: NCPoly<F>| {
        queue.insert((deg, seq), p);
        seq += 1;
    };
    for r in relations {
        if let Some(deg) = r.degree() {
            enqueue(&mut queue, deg, r.clone());
        }
    }
    while let Some((_, p)) = queue.pop_first() {
        let r = sys.reduce(&p);
        let Some(rule) = Rule::from_poly(&r) else { continue };
        // Rules whose leading word contains the new one are demoted to
        // pending polynomials.
        let lw = rule.lhs.bytes().to_vec();
        let (keep, demote): (Vec<_>, Vec<_>) = std::mem::take(sys.rules_mut()).into_iter().partition(|old| !contains(old.lhs.bytes(), &lw));
        *sys.rules_mut() = keep;
        sys.reindex();
        for old in demote {
            let deg = old.lhs.degree();
            enqueue(&mut queue, deg, old.as_poly());
        }
        for old in sys.rules() {
            for ov in spoly_overlaps(&rule, old) {
                if ov.word.degree() <= d && !ov.spoly.is_zero() {
                    enqueue(&mut queue, ov.word.degree(), ov.spoly);
                }
            }
        }
        for ov in spoly_overlaps(&rule, &rule) {
            if ov.word.degree() <= d && !ov.spoly.is_zero() {
                enqueue(&mut queue, ov.word.degree(), ov.spoly);
            }
        }
        sys.push_rule(rule);
        let over_time = opts.time_limit.is_some_and(|t| start.elapsed() > t);
        if sys.rules().len() > opts.max_rules || over_time {
            let reason = if over_time { "time limit" } else { "rule count" };
            sys.set_degrees(0, 0);
            return Err(Partial { reason: reason.into(), system: sys });
        }
    }
    interreduce(&mut sys);
    let safe = d.saturating_sub(sys.max_lhs_degree());
    sys.set_degrees(d, safe);
    Ok(sys)
}

fn contains(hay: &[u8], needle: &[u8]) -> bool {
    needle.is_empty() || (needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle))
}

/// Bring every right-hand side to normal form and sort rules by leading word.
fn interreduce<F: Field>(sys: &mut RewriteSystem<F>) {
    let reduced: Vec<NCPoly<F>> = sys.rules().iter().map(|r| sys.reduce(&r.rhs)).collect();
    for (r, rhs) in sys.rules_mut().iter_mut().zip(reduced) {
        r.rhs = rhs;
    }
    sys.rules_mut().sort_by(|a, b| a.lhs.cmp(&b.lhs));
    sys.reindex();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::NormalWords;

    fn x() -> NCPoly {
        NCPoly::gen(GenId::a(1, 1, 1))
    }

    fn y() -> NCPoly {
        NCPoly::gen(GenId::a(1, 1, 2))
    }

    fn rule(p: NCPoly) -> Rule {
        Rule::from_poly(&p).unwrap()
    }

    #[test]
    fn overlap_counts() {
        let xy = rule(x().mul(&y()).sub(&x()));
        let yx = rule(y().mul(&x()).sub(&y()));
        let ov = spoly_overlaps(&xy, &yx);
        let words: Vec<String> = ov.iter().map(|o| o.word.to_string()).collect();
        assert_eq!(words, ["a1_11 a1_12 a1_11", "a1_12 a1_11 a1_12"]);
        let z = NCPoly::gen(GenId::a(1, 2, 1));
        let w = NCPoly::gen(GenId::a(1, 2, 2));
        assert!(spoly_overlaps(&rule(x().mul(&y())), &rule(z.mul(&w))).is_empty());
        let xx = rule(x().mul(&x()).sub(&y()));
        assert_eq!(spoly_overlaps(&xx, &xx).len(), 1);
    }

    #[test]
    fn containment_overlap() {
        let long = rule(y().mul(&x()).mul(&y()));
        let short = rule(x().mul(&y()).sub(&NCPoly::one()));
        let ov = spoly_overlaps(&long, &short);
        let words: Vec<String> = ov.iter().map(|o| o.word.to_string()).collect();
        assert_eq!(words, ["a1_11 a1_12 a1_11 a1_12", "a1_12 a1_11 a1_12"]);
    }

    fn counts(rels: &[NCPoly], d: usize) -> Vec<u64> {
        let gens = vec![GenId::a(1, 1, 1), GenId::a(1, 1, 2)];
        let sys = complete_relations(gens, rels, &CompletionOptions::new(d)).unwrap();
        NormalWords::new(&sys).counts(d)
    }

    #[test]
    fn commutative_plane() {
        let c = counts(&[y().mul(&x()).sub(&x().mul(&y()))], 6);
        assert_eq!(c, (1..=7).collect::<Vec<u64>>());
    }

    #[test]
    fn quantum_plane_is_flat() {
        let qxy = x().mul(&y()).scale(&Scalar::q());
        let c = counts(&[y().mul(&x()).sub(&qxy)], 6);
        assert_eq!(c, (1..=7).collect::<Vec<u64>>());
    }

    #[test]
    fn completion_finds_hidden_relations() {
        // yx = xy + 1 together with xx = 0 forces x = 0 from degree 3 overlaps.
        let r1 = y().mul(&x()).sub(&x().mul(&y())).sub(&NCPoly::one());
        let r2 = x().mul(&x());
        let gens = vec![GenId::a(1, 1, 1), GenId::a(1, 1, 2)];
        let sys = complete_relations(gens, &[r1, r2], &CompletionOptions::new(4)).unwrap();
        assert!(sys.reduce(&x()).is_zero());
    }

    #[test]
    fn budget_is_reported_with_partial_system() {
        let r = y().mul(&x()).sub(&x().mul(&y())).sub(&x());
        let gens = vec![GenId::a(1, 1, 1), GenId::a(1, 1, 2)];
        let opts = CompletionOptions { degree: 6, max_rules: 0, time_limit: None };
        match complete_relations(gens, &[r], &opts) {
            Err(NcError::Budget { partial, .. }) => assert_eq!(partial.rules().len(), 1),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    mod dq {
        use std::sync::OnceLock;

        use proptest::prelude::*;

        use super::super::*;
        use crate::coeff::{random_fp, Fp};
        use crate::ncalg::{NormalWords, ReduceStrategy};
        use crate::presentations::dq_presentation;

        fn sys() -> &'static RewriteSystem {
            static SYS: OnceLock<RewriteSystem> = OnceLock::new();
            SYS.get_or_init(|| complete(&dq_presentation(1), 4).unwrap())
        }

        fn w(s: &str) -> NCPoly {
            NCPoly::word(s.parse().unwrap())
        }

        #[test]
        fn exchange_examples() {
            let q2 = Scalar::q_pow(2);
            assert_eq!(sys().reduce(&w("a1_22 a1_11")), w("a1_11 a1_22"));
            // a1_12 a1_22 is itself reducible once completed; both sides meet.
            assert_eq!(sys().reduce(&w("a1_22 a1_12")), sys().reduce(&w("a1_12 a1_22").scale(&q2)));
            let lone = RewriteSystem::new(GenId::all(1), vec![Rule::from_poly(&w("a1_22 a1_12").sub(&w("a1_12 a1_22").scale(&q2))).unwrap()], 2, 2);
            assert_eq!(lone.reduce(&w("a1_22 a1_12")), w("a1_12 a1_22").scale(&q2));
        }

        #[test]
        fn relations_lie_in_the_ideal() {
            for r in dq_presentation(1).relations() {
                assert!(sys().reduce(&r.poly).is_zero(), "{}", r.tag);
            }
        }

        #[test]
        fn modular_completion_matches_specialization() {
            let s0: Fp = random_fp(&mut rand::thread_rng());
            let polys: Vec<NCPoly<Fp>> = dq_presentation(1).polys().iter().map(|p| p.specialize::<Fp>(&s0).unwrap()).collect();
            let m = complete_in(GenId::all(1), &polys, &CompletionOptions::new(4)).unwrap();
            assert_eq!(NormalWords::new(&m).counts(4), NormalWords::new(sys()).counts(4));
        }

        fn word_strategy() -> impl Strategy<Value = Word> {
            prop::collection::vec(0u8..8, 0..=4).prop_map(Word::from_bytes)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn church_rosser(terms in prop::collection::vec((word_strategy(), -3i64..=3), 1..5)) {
                let p = NCPoly::from_terms(terms.into_iter().map(|(w, c)| (w, Scalar::from(c))));
                let l = sys().reduce_with(&p, ReduceStrategy::Leftmost);
                let r = sys().reduce_with(&p, ReduceStrategy::Rightmost);
                prop_assert_eq!(l, r);
            }
        }
    }
}
