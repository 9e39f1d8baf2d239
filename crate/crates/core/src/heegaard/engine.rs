//! Skein dimensions from gluing words.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{apply_automorphism, handlebody_ideal, two_sided_quotient, Automorphism, GenusOneModule, HeegaardError, MapWord, Report, Side, TwistSet};
use crate::coeff::{random_fp, Fp, FromScalar, Scalar};
use crate::ncalg::{NCPoly, RewriteSystem};
use crate::presentations::{certified_completion, dq_presentation, Presentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionOptions {
    /// Largest truncation degree; `None` grows it until the window is met.
    pub max_degree: Option<usize>,
    pub window: usize,
    pub samples: usize,
    pub seed: u64,
    /// Work over `Q(s)` instead of sampling `F_p`.
    pub exact: bool,
}

impl Default for DimensionOptions {
    fn default() -> Self {
        DimensionOptions { max_degree: None, window: 3, samples: 3, seed: 0, exact: false }
    }
}

/// Headroom above the raise of a word when the degree grows unbounded.
const GROWTH: usize = 16;

/// The certified genus-one system and the twists derived from it.
pub struct GenusOneEngine {
    presentation: Presentation,
    system: RewriteSystem,
    twists: TwistSet,
}

impl GenusOneEngine {
    /// Degree of the certified system; twist images are checked through it.
    pub const DEGREE: usize = 6;

    pub fn new() -> Result<Self, HeegaardError> {
        let p = dq_presentation(1);
        let (report, system) = certified_completion(&p, Self::DEGREE)?;
        if !report.flat {
            return Err(HeegaardError::Degree { degree: Self::DEGREE, safe: report.safe_degree });
        }
        Self::from_system(system)
    }

    /// Reuse a completed system, for example from the cache.
    pub fn from_system(system: RewriteSystem) -> Result<Self, HeegaardError> {
        if system.safe_degree() < Self::DEGREE {
            return Err(HeegaardError::Degree { degree: Self::DEGREE, safe: system.safe_degree() });
        }
        let presentation = dq_presentation(1);
        let twists = TwistSet::derive(&system, &presentation)?;
        Ok(GenusOneEngine { presentation, system, twists })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn twists(&self) -> &TwistSet {
        &self.twists
    }

    pub fn levels(&self, w: &MapWord) -> Vec<&Automorphism> {
        w.0.iter().map(|&g| self.twists.letter(g)).collect()
    }

    /// Bound on how far the gluing map raises the degree of `b`.
    pub fn raise(&self, w: &MapWord) -> usize {
        word_raise(&self.levels(w))
    }

    pub fn dimension(&self, w: &MapWord, opts: &DimensionOptions) -> Result<Report, HeegaardError> {
        let raise = self.raise(w);
        let cap = opts.max_degree.unwrap_or(raise + GROWTH);
        if cap <= raise {
            return Err(HeegaardError::Degree { degree: raise + 1, safe: cap });
        }
        let mut n = (raise + opts.window + 2).min(cap);
        loop {
            let r = self.at_degree(w, n, opts)?;
            if r.stabilized || n >= cap {
                return Ok(r);
            }
            n = (n + 2).min(cap);
        }
    }

    /// One truncation degree: exactly, or the smallest dimensions over the
    /// samples, since a sample can only lose rank.
    pub fn at_degree(&self, w: &MapWord, n: usize, opts: &DimensionOptions) -> Result<Report, HeegaardError> {
        let levels = self.levels(w);
        if opts.exact {
            let mut r = self.run::<Scalar>(&levels, n, opts.window, &())?;
            r.strategy = format!("{}, exact", r.strategy);
            return Ok(r);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut best: Option<Report> = None;
        let (mut done, mut tries) = (0, 0);
        while done < opts.samples.max(1) {
            tries += 1;
            if tries > 20 * opts.samples.max(1) {
                return Err(HeegaardError::Gluing("no usable sample point".into()));
            }
            let s0 = random_fp(&mut rng);
            let r = match self.run::<Fp>(&levels, n, opts.window, &s0) {
                Err(HeegaardError::Coeff(_)) => continue,
                r => r?,
            };
            done += 1;
            best = match best {
                Some(b) if b.dims <= r.dims => Some(b),
                _ => Some(r),
            };
        }
        let mut r = best.expect("at least one sample");
        r.strategy = format!("{}, F_p x{}", r.strategy, opts.samples.max(1));
        Ok(r)
    }

    fn run<F: FromScalar>(&self, levels: &[&Automorphism], n: usize, window: usize, ctx: &F::Context) -> Result<Report, HeegaardError> {
        let start = Instant::now();
        let module = GenusOneModule::<F>::new(&self.system, n, ctx)?;
        let built = start.elapsed();
        let imgs = levels.iter().map(|a| a.specialize::<F>(ctx)).collect::<Result<Vec<_>, _>>()?;
        let mut r = module.quotient(&imgs, window)?;
        r.timings.insert(0, ("module".into(), built));
        Ok(r)
    }
}

/// Degree raise of `b` under the composite, with `a` raising by one.
pub fn word_raise(levels: &[&Automorphism]) -> usize {
    let mut raise = [1usize, 1, 1, 1, 0, 0, 0, 0];
    let of = |p: &NCPoly, raise: &[usize; 8]| p.terms().map(|(w, _)| w.gens().map(|g| raise[g.index() as usize]).sum::<usize>()).max().unwrap_or(0);
    for a in levels {
        let mut next = raise;
        for g in a.moved() {
            next[g.index() as usize] = of(&a.image(g), &raise);
        }
        raise = next;
    }
    (4..8).map(|i| raise[i]).max().unwrap_or(0)
}

/// `#^g (S^2 x S^1)` from the identity gluing, on the full genus `g` algebra.
pub fn identity_gluing(genus: usize, degree: usize, opts: &DimensionOptions) -> Result<Report, HeegaardError> {
    let p = dq_presentation(genus);
    let start = Instant::now();
    let (report, sys) = certified_completion(&p, degree)?;
    if !report.flat {
        return Err(HeegaardError::Degree { degree, safe: report.safe_degree });
    }
    let completion = start.elapsed();
    let mut r = splice_dimension(&sys, genus, &Automorphism::identity(), degree, opts)?;
    r.timings.insert(0, ("completion".into(), completion));
    Ok(r)
}

/// `H u_phi H` at genus `g` through degree `degree`, on a completed system
/// of that genus. The right handlebody ideal is moved by `phi`.
pub fn splice_dimension(sys: &RewriteSystem, genus: usize, phi: &Automorphism, degree: usize, opts: &DimensionOptions) -> Result<Report, HeegaardError> {
    let left = handlebody_ideal(genus, Side::Left);
    let right = apply_automorphism(&handlebody_ideal(genus, Side::Right), phi);
    if opts.exact {
        let mut r = two_sided_quotient::<Scalar>(sys, &left, &right, degree, opts.window, &())?;
        r.strategy = format!("{}, exact", r.strategy);
        return Ok(r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<Report> = None;
    let (mut done, mut tries) = (0, 0);
    while done < opts.samples.max(1) {
        tries += 1;
        if tries > 20 * opts.samples.max(1) {
            return Err(HeegaardError::Gluing("no usable sample point".into()));
        }
        let r = match two_sided_quotient::<Fp>(sys, &left, &right, degree, opts.window, &random_fp(&mut rng)) {
            Err(HeegaardError::Coeff(_)) => continue,
            r => r?,
        };
        done += 1;
        best = match best {
            Some(b) if b.dims <= r.dims => Some(b),
            _ => Some(r),
        };
    }
    let mut r = best.expect("at least one sample");
    r.strategy = format!("{}, F_p x{}", r.strategy, opts.samples.max(1));
    Ok(r)
}
