//! Products of multicurves on the torus by stacking and resolving.
//!
//! The torus is `R^2 / Z^2`; the slope `(p, q)` is the straight line in
//! direction `(p, q)`. An edge's class is its signed count of passes through
//! the lines `x = SEAM[0]` and `y = SEAM[1]` mod 1.

use std::collections::BTreeMap;

use super::diagram::{normalize, resolve_in, Diagram, End};
use super::{FgError, TorusCurve};
use crate::coeff::Field;

const SEAM: [f64; 2] = [0.381_966, 0.127_4];

/// `copies` parallel copies of a simple closed curve; zero copies is the
/// empty multicurve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multicurve {
    pub curve: TorusCurve,
    pub copies: usize,
}

impl Multicurve {
    pub fn empty() -> Self {
        Multicurve { curve: TorusCurve { p: 1, q: 0 }, copies: 0 }
    }

    pub fn single(curve: TorusCurve) -> Self {
        Multicurve { curve, copies: 1 }
    }

    fn lines(&self, offset: [f64; 2]) -> Vec<([f64; 2], [f64; 2])> {
        let (p, q) = (self.curve.p, self.curve.q);
        // `v` completes `(p, q)` to a basis, so base points along `v`
        // give distinct parallel lines.
        let (x, y) = self.curve.complement();
        let m = self.copies as f64;
        (0..self.copies)
            .map(|i| {
                let s = (i as f64 + 0.5) / m;
                ([offset[0] + s * x as f64, offset[1] + s * y as f64], [p as f64, q as f64])
            })
            .collect()
    }
}

fn seams(from: [f64; 2], to: [f64; 2]) -> [i64; 2] {
    let f = |k: usize| ((to[k] - SEAM[k]).floor() - (from[k] - SEAM[k]).floor()) as i64;
    [f(0), f(1)]
}

/// Diagram of `top` stacked over `bottom`.
pub fn stack_diagram(top: &Multicurve, bottom: &Multicurve) -> Diagram {
    let a = top.lines([0.071_3, 0.023_9]);
    let b = bottom.lines([0.257_1, 0.613_7]);
    let lines: Vec<_> = a.iter().map(|l| (l, true)).chain(b.iter().map(|l| (l, false))).collect();
    // Hits per line: (parameter, crossing, over).
    let mut on: Vec<Vec<(f64, usize, bool)>> = vec![Vec::new(); lines.len()];
    let mut dirs = Vec::new();
    for (i, (p0, u)) in a.iter().enumerate() {
        for (j, (q0, v)) in b.iter().enumerate() {
            let det = u[0] * (-v[1]) - u[1] * (-v[0]);
            if det == 0.0 {
                continue;
            }
            let reach = (u[0].abs() + u[1].abs() + v[0].abs() + v[1].abs()) as i64 + 2;
            for m0 in -reach..=reach {
                for m1 in -reach..=reach {
                    // p0 + t u - q0 - s v = m
                    let r = [m0 as f64 + q0[0] - p0[0], m1 as f64 + q0[1] - p0[1]];
                    let t = (r[0] * (-v[1]) - r[1] * (-v[0])) / det;
                    let s = (u[0] * r[1] - u[1] * r[0]) / det;
                    if (0.0..1.0).contains(&t) && (0.0..1.0).contains(&s) {
                        let c = dirs.len();
                        dirs.push((*u, *v));
                        on[i].push((t, c, true));
                        on[a.len() + j].push((s, c, false));
                    }
                }
            }
        }
    }
    let mut d = Diagram { crossings: vec![[0; 4]; dirs.len()], ..Diagram::default() };
    let mut ends: Vec<[Option<(End, End)>; 2]> = vec![[None, None]; dirs.len()];
    for (k, list) in on.iter_mut().enumerate() {
        let ((base, dir), _) = lines[k];
        if list.is_empty() {
            d.loops.push([dir[0] as i64, dir[1] as i64]);
            continue;
        }
        list.sort_by(|x, y| x.0.total_cmp(&y.0));
        let first = d.edges.len();
        let n = list.len();
        let pt = |t: f64| [base[0] + t * dir[0], base[1] + t * dir[1]];
        for j in 0..n {
            let (from, mut to) = (list[j].0, list[(j + 1) % n].0);
            if to <= from {
                to += 1.0;
            }
            d.edges.push(seams(pt(from), pt(to)));
        }
        for (j, &(_, c, over)) in list.iter().enumerate() {
            ends[c][over as usize] = Some((2 * (first + (j + n - 1) % n) as End + 1, 2 * (first + j) as End));
        }
    }
    for (c, (o, u)) in dirs.iter().enumerate() {
        let (ui, uo) = ends[c][0].expect("under strand");
        let (oi, oo) = ends[c][1].expect("over strand");
        let back = [-u[0], -u[1]];
        let turn = back[0] * o[1] - back[1] * o[0];
        d.crossings[c] = if turn > 0.0 { [ui, oo, uo, oi] } else { [ui, oi, uo, oo] };
    }
    d
}

/// `top * bottom` in the skein algebra of the torus, as a combination of
/// multicurves.
pub fn product_in<F: Field>(top: &Multicurve, bottom: &Multicurve, a: &F, max_states: usize) -> Result<BTreeMap<Multicurve, F>, FgError> {
    let d = stack_diagram(top, bottom);
    let mut out = BTreeMap::new();
    for (loops, c) in resolve_in(&d, a, max_states)? {
        let m = match loops.first() {
            None => Multicurve::empty(),
            Some(&l) => {
                if loops.iter().any(|&x| x != l) {
                    return Err(FgError::Diagram(format!("disjoint loops of different slopes {loops:?}")));
                }
                let l = normalize(l);
                Multicurve { curve: TorusCurve::new(l[0], l[1])?, copies: loops.len() }
            }
        };
        out.insert(m, c);
    }
    Ok(out)
}
