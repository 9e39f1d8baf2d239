//! Crossing diagrams on the annulus and the torus, and their state sums.
//!
//! Edges are oriented. End `2e` is the tail of edge `e` and `2e + 1` its
//! head. A crossing lists its four ends counterclockwise, starting from the
//! head arriving on the under strand, so the A-smoothing joins slots 0 with
//! 1 and 2 with 3. Every edge carries the homology class it traverses from
//! tail to head; the annulus only uses the first coordinate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use super::FgError;
use crate::coeff::Field;

pub type End = u32;
pub type Class = [i64; 2];

/// Closed loops of a resolved state, as sorted normalized classes.
pub type Loops = Vec<Class>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagram {
    pub crossings: Vec<[End; 4]>,
    pub edges: Vec<Class>,
    /// Components without crossings.
    pub loops: Vec<Class>,
}

pub fn normalize(c: Class) -> Class {
    if c[0] < 0 || (c[0] == 0 && c[1] < 0) {
        [-c[0], -c[1]]
    } else {
        c
    }
}

fn add(a: Class, b: Class) -> Class {
    [a[0] + b[0], a[1] + b[1]]
}

fn neg(a: Class) -> Class {
    [-a[0], -a[1]]
}

/// Class traversed leaving through `end` along its edge.
fn along(edges: &[Class], end: End) -> Class {
    let c = edges[(end / 2) as usize];
    if end.is_multiple_of(2) {
        c
    } else {
        neg(c)
    }
}

impl Diagram {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Every end used once, heads arriving in slot 0 and tails leaving in
    /// slot 2.
    pub fn validate(&self) -> Result<(), FgError> {
        let mut seen = vec![false; 2 * self.edges.len()];
        for (i, x) in self.crossings.iter().enumerate() {
            if x[0] % 2 != 1 || x[2] % 2 != 0 || x[1] % 2 == x[3] % 2 {
                return Err(FgError::Diagram(format!("crossing {i} has inconsistent orientations")));
            }
            for &e in x {
                match seen.get_mut(e as usize) {
                    Some(s) if !*s => *s = true,
                    _ => return Err(FgError::Diagram(format!("end {e} at crossing {i} is repeated or unknown"))),
                }
            }
        }
        if let Some(e) = seen.iter().position(|s| !s) {
            return Err(FgError::Diagram(format!("end {e} is not attached")));
        }
        Ok(())
    }

    /// `+1` when the over strand leaves through slot 1.
    pub fn sign(&self, i: usize) -> i64 {
        if self.crossings[i][1].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self) -> i64 {
        (0..self.crossings.len()).map(|i| self.sign(i)).sum()
    }

    fn slots(&self) -> Vec<(usize, usize)> {
        let mut at = vec![(0, 0); 2 * self.edges.len()];
        for (i, x) in self.crossings.iter().enumerate() {
            for (k, &e) in x.iter().enumerate() {
                at[e as usize] = (i, k);
            }
        }
        at
    }

    /// Component of every edge, numbered in order of first edge.
    pub fn components(&self) -> Vec<usize> {
        let at = self.slots();
        let mut comp = vec![usize::MAX; self.edges.len()];
        let mut n = 0;
        for start in 0..self.edges.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut e = start;
            while comp[e] == usize::MAX {
                comp[e] = n;
                let (i, k) = at[2 * e + 1];
                e = (self.crossings[i][(k + 2) % 4] / 2) as usize;
            }
            n += 1;
        }
        comp
    }

    /// Same diagram with every crossing switched.
    pub fn mirror(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                // The old over strand becomes the under strand; start from
                // its head and keep the counterclockwise order.
                if x[1] % 2 == 1 {
                    [x[1], x[2], x[3], x[0]]
                } else {
                    [x[3], x[0], x[1], x[2]]
                }
            })
            .collect();
        Diagram { crossings, edges: self.edges.clone(), loops: self.loops.clone() }
    }

    /// Crossings in a new order; the state sum sweeps them in index order.
    pub fn reordered(&self, order: &[usize]) -> Diagram {
        Diagram { crossings: order.iter().map(|&i| self.crossings[i]).collect(), edges: self.edges.clone(), loops: self.loops.clone() }
    }
}

/// A partial resolution: arcs between open ends with the class traversed
/// from the first end to the second, plus the closed essential loops.
#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    arcs: Vec<(End, End, Class)>,
    loops: Loops,
}

impl State {
    fn canonical(mut self) -> Self {
        for a in &mut self.arcs {
            if a.0 > a.1 {
                *a = (a.1, a.0, neg(a.2));
            }
        }
        self.arcs.sort_unstable();
        self.loops.sort_unstable();
        self
    }

    /// Join two open ends at a crossing; returns the class of a closed loop.
    fn join(&mut self, x: End, y: End) -> Option<Class> {
        let find = |arcs: &[(End, End, Class)], e: End| -> (usize, End, Class) {
            let i = arcs.iter().position(|a| a.0 == e || a.1 == e).expect("open end");
            let (a, b, w) = arcs[i];
            if a == e {
                (i, b, w)
            } else {
                (i, a, neg(w))
            }
        };
        let (i, px, wx) = find(&self.arcs, x);
        if px == y {
            self.arcs.swap_remove(i);
            return Some(wx);
        }
        let (j, py, wy) = find(&self.arcs, y);
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        self.arcs.swap_remove(hi);
        self.arcs.swap_remove(lo);
        self.arcs.push((px, py, add(neg(wx), wy)));
        None
    }
}

/// `-a^2 - a^-2`, the value of a trivial loop.
pub fn loop_value<F: Field>(a: &F) -> F {
    let a2 = a.mul(a);
    a2.add(&a2.inv().expect("nonzero variable")).neg()
}

/// The Kauffman state sum, sweeping crossings in index order and keeping
/// one entry per connectivity pattern of the open ends.
pub fn resolve_in<F: Field>(d: &Diagram, a: &F, max_states: usize) -> Result<BTreeMap<Loops, F>, FgError> {
    d.validate()?;
    let a_inv = a.inv().ok_or_else(|| FgError::Diagram("A must be invertible".into()))?;
    let delta = loop_value(a);
    let at = d.slots();
    let mut done = vec![false; d.crossings.len()];
    let mut states: HashMap<State, F> = HashMap::new();
    states.insert(State { arcs: Vec::new(), loops: Vec::new() }, F::one());
    for (i, x) in d.crossings.iter().enumerate() {
        let mut fresh = Vec::new();
        for &s in x {
            let other = s ^ 1;
            let (j, _) = at[other as usize];
            if j == i {
                if s < other {
                    fresh.push((s, other, along(&d.edges, s)));
                }
            } else if !done[j] {
                fresh.push((s, other, along(&d.edges, s)));
            }
        }
        let mut next: HashMap<State, F> = HashMap::with_capacity(2 * states.len());
        for (st, c) in states {
            for (pairs, w) in [([(x[0], x[1]), (x[2], x[3])], a), ([(x[0], x[3]), (x[1], x[2])], &a_inv)] {
                let mut s = st.clone();
                s.arcs.extend_from_slice(&fresh);
                let mut coeff = c.mul(w);
                for (u, v) in pairs {
                    match s.join(u, v) {
                        Some([0, 0]) => coeff = coeff.mul(&delta),
                        Some(l) => s.loops.push(normalize(l)),
                        None => {}
                    }
                }
                let s = s.canonical();
                match next.get_mut(&s) {
                    Some(v) => v.add_assign(&coeff),
                    None => {
                        next.insert(s, coeff);
                    }
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        if next.len() > max_states {
            return Err(FgError::Budget { what: "states", size: next.len(), limit: max_states });
        }
        states = next;
        done[i] = true;
    }
    finish(d, &delta, states.into_iter().map(|(s, c)| (s.loops, c)))
}

fn finish<F: Field>(d: &Diagram, delta: &F, states: impl Iterator<Item = (Loops, F)>) -> Result<BTreeMap<Loops, F>, FgError> {
    let mut out: BTreeMap<Loops, F> = BTreeMap::new();
    for (mut loops, mut c) in states {
        for &l in &d.loops {
            if l == [0, 0] {
                c = c.mul(delta);
            } else {
                loops.push(normalize(l));
            }
        }
        loops.sort_unstable();
        out.entry(loops).and_modify(|v| v.add_assign(&c)).or_insert(c);
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// All `2^c` states enumerated one at a time; the reference for
/// [`resolve_in`].
pub fn resolve_brute<F: Field>(d: &Diagram, a: &F, max_crossings: usize) -> Result<BTreeMap<Loops, F>, FgError> {
    d.validate()?;
    let c = d.crossings.len();
    if c > max_crossings {
        return Err(FgError::Budget { what: "crossings", size: c, limit: max_crossings });
    }
    let a_inv = a.inv().ok_or_else(|| FgError::Diagram("A must be invertible".into()))?;
    let delta = loop_value(a);
    let n = 2 * d.edges.len();
    let mut partner = vec![0 as End; n];
    let mut totals: BTreeMap<Loops, F> = BTreeMap::new();
    for mask in 0u64..(1u64 << c) {
        let mut coeff = F::one();
        for (i, x) in d.crossings.iter().enumerate() {
            let pairs = if mask >> i & 1 == 0 {
                coeff = coeff.mul(a);
                [(x[0], x[1]), (x[2], x[3])]
            } else {
                coeff = coeff.mul(&a_inv);
                [(x[0], x[3]), (x[1], x[2])]
            };
            for (u, v) in pairs {
                partner[u as usize] = v;
                partner[v as usize] = u;
            }
        }
        let mut seen = vec![false; n];
        let mut loops = Vec::new();
        for start in 0..n as End {
            if seen[start as usize] {
                continue;
            }
            let mut e = start;
            let mut class = [0, 0];
            loop {
                seen[e as usize] = true;
                seen[(e ^ 1) as usize] = true;
                class = add(class, along(&d.edges, e));
                e = partner[(e ^ 1) as usize];
                if e == start {
                    break;
                }
            }
            if class == [0, 0] {
                coeff = coeff.mul(&delta);
            } else {
                loops.push(normalize(class));
            }
        }
        loops.sort_unstable();
        totals.entry(loops).and_modify(|v| v.add_assign(&coeff)).or_insert(coeff);
    }
    finish(d, &delta, totals.into_iter())
}

/// Planar diagram code: one `X` line per crossing with `+e` for a tail and
/// `-e` for a head of edge `e`, then `E` lines with edge classes and `L`
/// lines for crossingless loops.
impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = |e: End| if e.is_multiple_of(2) { format!("+{}", e / 2) } else { format!("-{}", e / 2) };
        for x in &self.crossings {
            writeln!(f, "X {} {} {} {}", end(x[0]), end(x[1]), end(x[2]), end(x[3]))?;
        }
        for (i, c) in self.edges.iter().enumerate() {
            writeln!(f, "E {i} {} {}", c[0], c[1])?;
        }
        for c in &self.loops {
            writeln!(f, "L {} {}", c[0], c[1])?;
        }
        Ok(())
    }
}

impl FromStr for Diagram {
    type Err = FgError;

    fn from_str(s: &str) -> Result<Self, FgError> {
        let bad = |line: &str| FgError::Diagram(format!("bad line {line:?}"));
        let int = |t: &str, line: &str| t.parse::<i64>().map_err(|_| bad(line));
        let mut d = Diagram::default();
        let mut edges = BTreeMap::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["X", e @ ..] if e.len() == 4 => {
                    let mut x = [0; 4];
                    for (k, t) in e.iter().enumerate() {
                        let (sign, n) = t.split_at(1);
                        let n: End = n.parse().map_err(|_| bad(line))?;
                        x[k] = match sign {
                            "+" => 2 * n,
                            "-" => 2 * n + 1,
                            _ => return Err(bad(line)),
                        };
                    }
                    d.crossings.push(x);
                }
                ["E", i, u, v] => {
                    edges.insert(int(i, line)?, [int(u, line)?, int(v, line)?]);
                }
                ["L", u, v] => d.loops.push([int(u, line)?, int(v, line)?]),
                _ => return Err(bad(line)),
            }
        }
        if edges.keys().copied().ne(0..edges.len() as i64) {
            return Err(FgError::Diagram("edges must be numbered from 0".into()));
        }
        d.edges = edges.into_values().collect();
        d.validate()?;
        Ok(d)
    }
}
