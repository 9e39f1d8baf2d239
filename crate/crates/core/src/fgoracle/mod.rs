//! A second engine from ordinary skein theory: the skein module of a lens
//! space as `C[z] (x)_{Sk(T^2)} C[z]`, with every module constant obtained by
//! resolving crossing diagrams.
//!
//! `C[z]` is the skein module of the solid torus, `z` its core. A slope
//! `(p, q)` on the boundary torus runs `p` times along the core and `q` times
//! around the tube, so `(1, 0)` pushes in to `z` and the meridian `(0, 1)`
//! bounds a disk.

mod diagram;
mod sketch;
mod torus;
mod words;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coeff::{random_fp, CoeffError, Field, Fp, Scalar};
use crate::linsolve::lead_pivots;

pub use diagram::{loop_value, normalize, resolve_brute, resolve_in, Class, Diagram, End, Loops};
pub use sketch::{angle, cores, polar, radius, torus_curve, Crossing, Point, Sketch};
pub use torus::{product_in, stack_diagram, Multicurve};
pub use words::{AnnularWord, Layer};

#[derive(Debug, Error)]
pub enum FgError {
    #[error("invalid diagram: {0}")]
    Diagram(String),
    #[error("{what} budget exceeded: {size} > {limit}")]
    Budget { what: &'static str, size: usize, limit: usize },
    #[error("({0}, {1}) is not a primitive slope")]
    Slope(i64, i64),
    #[error("truncation degree {degree} does not exceed the raise {raise}")]
    Degree { degree: usize, raise: usize },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Default bound on crossings for [`resolve_brute`].
pub const MAX_CROSSINGS: usize = 22;

/// Default bound on partial states kept by [`resolve_in`].
pub const MAX_STATES: usize = 1 << 20;

/// A simple closed curve on the torus, normalized up to orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusCurve {
    pub p: i64,
    pub q: i64,
}

impl TorusCurve {
    pub fn new(p: i64, q: i64) -> Result<Self, FgError> {
        if p.gcd(&q) != 1 {
            return Err(FgError::Slope(p, q));
        }
        let [p, q] = normalize([p, q]);
        Ok(TorusCurve { p, q })
    }

    /// `(x, y)` with `p y - q x = 1`.
    pub fn complement(&self) -> (i64, i64) {
        let g = self.p.extended_gcd(&self.q);
        let s = g.gcd.signum();
        (-g.y * s, g.x * s)
    }

    /// Image under `(r, s) -> (r, s) m`.
    pub fn map(&self, m: &[[i64; 2]; 2]) -> Result<Self, FgError> {
        TorusCurve::new(self.p * m[0][0] + self.q * m[1][0], self.p * m[0][1] + self.q * m[1][1])
    }

    /// Largest power of `z` it can add.
    pub fn raise(&self) -> usize {
        self.p.unsigned_abs() as usize
    }
}

impl fmt::Display for TorusCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Columns `(i, j)` of `z^i (x) z^j` and sparse relation rows over them.
pub type Relations<F = Scalar> = (Vec<(usize, usize)>, Vec<Vec<(usize, F)>>);

/// Element of the solid torus skein module: coefficient of `z^k` at `k`.
pub type AnnularSkein<F = Scalar> = BTreeMap<usize, F>;

/// Resolve an annular diagram into powers of the core.
pub fn skein_in<F: Field>(d: &Diagram, a: &F, max_states: usize) -> Result<AnnularSkein<F>, FgError> {
    let mut out = BTreeMap::new();
    for (loops, c) in resolve_in(d, a, max_states)? {
        if loops.iter().any(|l| *l != [1, 0]) {
            return Err(FgError::Diagram(format!("loop classes {loops:?} in the annulus")));
        }
        out.insert(loops.len(), c);
    }
    Ok(out)
}

/// The exact state sum in `A = s`.
pub fn resolve(d: &Diagram) -> Result<AnnularSkein, FgError> {
    skein_in(d, &Scalar::s(), MAX_STATES)
}

/// Factor picked up by a curl of writhe `+1` or `-1`, read off an unknot.
pub fn kink_in<F: Field>(positive: bool, a: &F) -> Result<F, FgError> {
    for over in [true, false] {
        let d = AnnularWord::new(0, vec![Layer::Cup(0), Layer::Kink(0, over), Layer::Cap(0)]).diagram()?;
        if (d.writhe() > 0) == positive {
            let v = skein_in(&d, a, MAX_STATES)?;
            let v = v.get(&0).cloned().unwrap_or_else(F::zero);
            return v.div(&loop_value(a)).ok_or_else(|| FgError::Diagram("trivial loop has value zero".into()));
        }
    }
    Err(FgError::Diagram("no curl of the requested sign".into()))
}

const PHASE: [f64; 2] = [0.012_3, 0.045_7];

/// The boundary curve `c` pushed into the solid torus around `z^k`, framed
/// by the torus.
pub fn curve_action_in<F: Field>(c: TorusCurve, k: usize, a: &F, max_states: usize) -> Result<AnnularSkein<F>, FgError> {
    let mut sketch = Sketch::new();
    sketch.push(torus_curve(c.p, c.q, PHASE));
    let framing = surface_framing(c)?;
    cores(&mut sketch, k);
    let d = sketch.diagram(radius)?;
    let mut v = skein_in(&d, a, max_states)?;
    if framing != 0 {
        let f = kink_in(framing > 0, a)?.pow(framing.unsigned_abs() as u32);
        for x in v.values_mut() {
            *x = x.mul(&f);
        }
    }
    Ok(v)
}

/// Exact [`curve_action_in`].
pub fn curve_action(c: TorusCurve, k: usize) -> Result<AnnularSkein, FgError> {
    curve_action_in(c, k, &Scalar::s(), MAX_STATES)
}

/// Curls to add to the blackboard framing of a boundary curve to reach the
/// framing by the torus: its linking number with a parallel copy on the
/// torus, minus its writhe.
pub fn surface_framing(c: TorusCurve) -> Result<i64, FgError> {
    let eta = 0.05 / ((c.p * c.p + c.q * c.q) as f64).sqrt();
    let mut s = Sketch::new();
    s.push(torus_curve(c.p, c.q, PHASE));
    s.push(torus_curve(c.p, c.q, [PHASE[0] - eta * c.q as f64, PHASE[1] + eta * c.p as f64]));
    let (mut link, mut writhe) = (0, 0);
    for x in s.crossings()? {
        match x.comps {
            (0, 0) => writhe += x.sign,
            (0, 1) | (1, 0) => link += x.sign,
            _ => {}
        }
    }
    if link % 2 != 0 {
        return Err(FgError::Diagram("odd crossing count between parallel curves".into()));
    }
    Ok(link / 2 - writhe)
}

/// Action of a multicurve, one copy at a time.
pub fn multicurve_action_in<F: Field>(m: &Multicurve, v: &AnnularSkein<F>, a: &F, max_states: usize) -> Result<AnnularSkein<F>, FgError> {
    let mut v = v.clone();
    for _ in 0..m.copies {
        let mut next: AnnularSkein<F> = BTreeMap::new();
        for (&k, c) in &v {
            for (j, x) in curve_action_in(m.curve, k, a, max_states)? {
                let t = c.mul(&x);
                next.entry(j).and_modify(|y: &mut F| y.add_assign(&t)).or_insert(t);
            }
        }
        next.retain(|_, x| !x.is_zero());
        v = next;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgOptions {
    /// Largest truncation degree in `z`. The degree starts at `max(2p + 4,
    /// raise + window + 2)` and grows until the window is met.
    pub max_degree: Option<usize>,
    pub window: usize,
    pub samples: usize,
    pub seed: u64,
    /// Work over `Q(A)` instead of sampling `F_p`.
    pub exact: bool,
    pub max_states: usize,
}

impl Default for FgOptions {
    fn default() -> Self {
        FgOptions { max_degree: None, window: 3, samples: 3, seed: 0, exact: false, max_states: MAX_STATES }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LensReport {
    pub dimension: u64,
    pub stabilized: bool,
    pub stabilization_degree: usize,
    pub safe_degree: usize,
    pub dims: Vec<u64>,
    /// Surviving `z^i (x) z^j` as `(i, j)`.
    pub basis: Vec<(usize, usize)>,
    pub gluing: [[i64; 2]; 2],
    pub strategy: String,
    pub timings: Vec<(String, Duration)>,
}

/// A matrix with second row `(p, q)` and determinant 1: the curve glued to
/// the meridian of the second solid torus is `(p, q)`.
pub fn lens_gluing(p: i64, q: i64) -> Result<[[i64; 2]; 2], FgError> {
    if p < 0 || p.gcd(&q) != 1 {
        return Err(FgError::Slope(p, q));
    }
    let g = q.extended_gcd(&p);
    let s = g.gcd.signum();
    Ok([[g.x * s, -g.y * s], [p, q]])
}

const GENERATORS: [(i64, i64); 3] = [(1, 0), (0, 1), (1, 1)];

/// The second solid torus is glued in with the opposite orientation, so it
/// is acted on through mirror images: `A` becomes `A^-1`.
struct Run<F> {
    a: F,
    cache: HashMap<(TorusCurve, usize, bool), Vec<(usize, F)>>,
}

impl<F: Field> Run<F> {
    fn new(a: F) -> Self {
        Run { a, cache: HashMap::new() }
    }

    fn act(&mut self, c: TorusCurve, k: usize, mirrored: bool, max_states: usize) -> Result<&[(usize, F)], FgError> {
        let key = (c, k, mirrored);
        if !self.cache.contains_key(&key) {
            let a = if mirrored { self.a.inv().expect("nonzero variable") } else { self.a.clone() };
            let v = curve_action_in(c, k, &a, max_states)?;
            self.cache.insert(key, v.into_iter().collect());
        }
        Ok(&self.cache[&key])
    }

    /// Sliding relations on `z^i (x) z^j`, `i + j <= degree`, indexed into
    /// the returned words.
    fn relations(&mut self, pairs: &[(TorusCurve, TorusCurve)], degree: usize, max_states: usize) -> Result<Relations<F>, FgError> {
        let raise = pairs.iter().map(|(w, s)| w.raise().max(s.raise())).max().unwrap_or(0);
        if degree <= raise {
            return Err(FgError::Degree { degree, raise });
        }
        let words: Vec<(usize, usize)> = (0..=degree).flat_map(|d| (0..=d).map(move |i| (i, d - i))).collect();
        let index: HashMap<(usize, usize), usize> = words.iter().enumerate().map(|(k, &w)| (w, k)).collect();
        let mut rows = Vec::new();
        for &(w, s) in pairs {
            let top = w.raise().max(s.raise());
            for d in 0..=degree - top {
                for i in 0..=d {
                    let j = d - i;
                    let mut row: BTreeMap<usize, F> = BTreeMap::new();
                    for (k, c) in self.act(w, i, false, max_states)?.to_vec() {
                        row.entry(index[&(k, j)]).and_modify(|x: &mut F| x.add_assign(&c)).or_insert(c);
                    }
                    for (l, c) in self.act(s, j, true, max_states)?.to_vec() {
                        let c = c.neg();
                        row.entry(index[&(i, l)]).and_modify(|x: &mut F| x.add_assign(&c)).or_insert(c);
                    }
                    let row: Vec<(usize, F)> = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        Ok((words, rows))
    }

    /// `dims[d]` is the dimension of the image of `span{z^i (x) z^j : i + j
    /// <= d}` in the truncated quotient.
    fn quotient(&mut self, pairs: &[(TorusCurve, TorusCurve)], degree: usize, window: usize, max_states: usize) -> Result<LensReport, FgError> {
        let raise = pairs.iter().map(|(w, s)| w.raise().max(s.raise())).max().unwrap_or(0);
        let start = Instant::now();
        let (words, rows) = self.relations(pairs, degree, max_states)?;
        let n = words.len();
        // Eliminate from the top degree down.
        let rows: Vec<Vec<(usize, F)>> = rows.into_iter().map(|r| r.into_iter().rev().map(|(c, x)| (n - 1 - c, x)).collect()).collect();
        let actions = start.elapsed();
        let pivots: std::collections::HashSet<usize> = lead_pivots(rows).into_iter().map(|c| n - 1 - c).collect();
        let safe = degree - raise;
        let mut dims = vec![0u64; safe + 1];
        for (k, &(i, j)) in words.iter().enumerate() {
            if i + j <= safe && !pivots.contains(&k) {
                for v in &mut dims[i + j..] {
                    *v += 1;
                }
            }
        }
        let last = dims[safe];
        let sdeg = dims.iter().rposition(|&v| v != last).map_or(0, |i| i + 1);
        let stabilized = window > 0 && dims.len() - sdeg >= window;
        let basis = words.iter().enumerate().filter(|(k, w)| w.0 + w.1 <= sdeg && !pivots.contains(k)).map(|(_, &w)| w).collect();
        Ok(LensReport {
            dimension: last,
            stabilized,
            stabilization_degree: sdeg,
            safe_degree: safe,
            dims,
            basis,
            gluing: [[0; 2]; 2],
            strategy: String::new(),
            timings: vec![("actions".into(), actions), ("elimination".into(), start.elapsed() - actions)],
        })
    }
}

fn lens_pairs(gluing: &[[i64; 2]; 2]) -> Result<Vec<(TorusCurve, TorusCurve)>, FgError> {
    GENERATORS
        .iter()
        .map(|&(r, s)| {
            let w = TorusCurve::new(r, s)?;
            Ok((w, w.map(gluing)?))
        })
        .collect()
}

/// The relation matrix of `lens_dimension` at one degree, exactly, with
/// columns indexed by the returned `(i, j)` of `z^i (x) z^j`.
pub fn lens_relations(p: i64, q: i64, degree: usize) -> Result<Relations, FgError> {
    let pairs = lens_pairs(&lens_gluing(p, q)?)?;
    Run::new(Scalar::s()).relations(&pairs, degree, MAX_STATES)
}

/// Dimension of the skein module of `L(p, q)`, with `lens(0, 1) = S^2 x S^1`
/// and `lens(1, q) = S^3`.
pub fn lens_dimension(p: i64, q: i64, opts: &FgOptions) -> Result<LensReport, FgError> {
    let gluing = lens_gluing(p, q)?;
    let pairs = lens_pairs(&gluing)?;
    let raise = pairs.iter().map(|(w, s)| w.raise().max(s.raise())).max().unwrap_or(0);
    let first = (2 * p as usize + 4).max(raise + opts.window + 2);
    let cap = opts.max_degree.unwrap_or(first + 16);
    let mut report = if opts.exact {
        let mut run = Run::new(Scalar::s());
        grow(first, cap, |d| run.quotient(&pairs, d, opts.window, opts.max_states))?
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut runs: Vec<Run<Fp>> = (0..opts.samples.max(1)).map(|_| Run::new(random_fp(&mut rng))).collect();
        grow(first, cap, |d| {
            let mut best: Option<LensReport> = None;
            for run in &mut runs {
                let r = run.quotient(&pairs, d, opts.window, opts.max_states)?;
                best = match best {
                    Some(b) if b.dims <= r.dims => Some(b),
                    _ => Some(r),
                };
            }
            Ok(best.expect("at least one sample"))
        })?
    };
    report.gluing = gluing;
    report.strategy = if opts.exact { "annular state sums, exact".into() } else { format!("annular state sums, F_p x{}", opts.samples.max(1)) };
    Ok(report)
}

fn grow(first: usize, cap: usize, mut at: impl FnMut(usize) -> Result<LensReport, FgError>) -> Result<LensReport, FgError> {
    let mut d = first.min(cap);
    loop {
        let r = at(d)?;
        if r.stabilized || d >= cap {
            return Ok(r);
        }
        d = (d + 2).min(cap);
    }
}

#[cfg(test)]
mod tests;
