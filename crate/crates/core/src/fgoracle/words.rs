//! Annular tangles as words of elementary layers.
//!
//! Layer `l` of `n` occupies the sector of angles `[l, l + 1] * 2 pi / n`;
//! strand positions are radii. The closure glues the last layer to the
//! first, so a word of width `w` with only crossings is an annular braid
//! closure.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use super::diagram::Diagram;
use super::sketch::{angle, polar, Point, Sketch};
use super::FgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    /// Strands `i` and `i + 1` swap; `true` when the inner one passes over.
    Cross(usize, bool),
    /// A new pair of strands at `i`, `i + 1`.
    Cup(usize),
    /// Strands `i` and `i + 1` are joined.
    Cap(usize),
    /// A curl on strand `i`; `true` when the later pass is on top.
    Kink(usize, bool),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnularWord {
    pub width: usize,
    pub layers: Vec<Layer>,
}

struct Piece {
    points: Vec<Point>,
    /// `(boundary, position)` of the two ends.
    ends: [(usize, usize); 2],
}

/// Odd, so that no sample lands on the middle of a layer where strands cross.
const SAMPLES: usize = 41;

impl AnnularWord {
    pub fn new(width: usize, layers: Vec<Layer>) -> Self {
        AnnularWord { width, layers }
    }

    /// Width after each layer, checking that every layer fits.
    pub fn widths(&self) -> Result<Vec<usize>, FgError> {
        let mut w = self.width;
        let mut out = vec![w];
        for (l, layer) in self.layers.iter().enumerate() {
            let fits = match *layer {
                Layer::Cross(i, _) | Layer::Cap(i) => i + 1 < w,
                Layer::Cup(i) => i <= w,
                Layer::Kink(i, _) => i < w,
            };
            if !fits {
                return Err(FgError::Diagram(format!("layer {l} does not fit width {w}")));
            }
            match layer {
                Layer::Cup(_) => w += 2,
                Layer::Cap(_) => w -= 2,
                _ => {}
            }
            out.push(w);
        }
        if w != self.width {
            return Err(FgError::Diagram(format!("closure joins width {w} to width {}", self.width)));
        }
        Ok(out)
    }

    pub fn sketch(&self) -> Result<Sketch, FgError> {
        let widths = self.widths()?;
        let mut sketch = Sketch::new();
        let n = self.layers.len();
        let radius = |y: f64| 1.0 + 0.4 * (y + 1.0);
        if n == 0 {
            for j in 0..self.width {
                sketch.push((0..4 * SAMPLES).map(|k| polar(TAU * k as f64 / (4 * SAMPLES) as f64, radius(j as f64), 0.0)).collect());
            }
            return Ok(sketch);
        }
        let at = |x: f64, y: f64, z: f64| polar(TAU * x / n as f64, radius(y), z);
        let curve = |f: &dyn Fn(f64) -> (f64, f64, f64)| -> Vec<Point> {
            (0..=SAMPLES)
                .map(|k| {
                    let (x, y, z) = f(k as f64 / SAMPLES as f64);
                    at(x, y, z)
                })
                .collect()
        };
        let mut pieces = Vec::new();
        for (l, layer) in self.layers.iter().enumerate() {
            let lf = l as f64;
            let w = widths[l];
            // Strands moving from position `from` to `to` within `[u0, u1]`.
            let mut shift = |from: usize, to: usize, u0: f64, u1: f64| {
                let f = move |u: f64| {
                    let s = ((u - u0) / (u1 - u0)).clamp(0.0, 1.0);
                    let s = s * s * (3.0 - 2.0 * s);
                    (lf + u, from as f64 + (to as f64 - from as f64) * s, 0.0)
                };
                pieces.push(Piece { points: curve(&f), ends: [(l, from), (l + 1, to)] });
            };
            match *layer {
                Layer::Cross(i, inner_over) => {
                    for j in (0..w).filter(|&j| j != i && j != i + 1) {
                        shift(j, j, 0.0, 1.0);
                    }
                    let h = if inner_over { 0.5 } else { -0.5 };
                    for (from, to, z) in [(i, i + 1, h), (i + 1, i, -h)] {
                        let f = move |u: f64| (lf + u, from as f64 + (to as f64 - from as f64) * u, z * (PI * u).sin());
                        pieces.push(Piece { points: curve(&f), ends: [(l, from), (l + 1, to)] });
                    }
                }
                Layer::Cup(i) => {
                    for j in 0..w {
                        let to = if j < i { j } else { j + 2 };
                        shift(j, to, 0.0, 0.5);
                    }
                    let f = move |v: f64| (lf + 1.0 - 0.4 * (PI * v).sin(), i as f64 + 0.5 - 0.5 * (PI * v).cos(), 0.0);
                    pieces.push(Piece { points: curve(&f), ends: [(l + 1, i), (l + 1, i + 1)] });
                }
                Layer::Cap(i) => {
                    for j in (0..w).filter(|&j| j != i && j != i + 1) {
                        let to = if j < i { j } else { j - 2 };
                        shift(j, to, 0.5, 1.0);
                    }
                    let f = move |v: f64| (lf + 0.4 * (PI * v).sin(), i as f64 + 0.5 - 0.5 * (PI * v).cos(), 0.0);
                    pieces.push(Piece { points: curve(&f), ends: [(l, i), (l, i + 1)] });
                }
                Layer::Kink(i, later_over) => {
                    for j in (0..w).filter(|&j| j != i) {
                        shift(j, j, 0.0, 1.0);
                    }
                    let h = if later_over { 0.5 } else { -0.5 };
                    let f = move |u: f64| (lf + u + 0.25 * (TAU * u).sin(), i as f64 + 0.15 * (1.0 - (TAU * u).cos()), h * (u - 0.5));
                    pieces.push(Piece { points: curve(&f), ends: [(l, i), (l + 1, i)] });
                }
            }
        }
        // Each boundary point is shared by exactly two pieces; walk them.
        let key = |(b, p): (usize, usize)| (b % n, p);
        let mut at_end: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for (k, piece) in pieces.iter().enumerate() {
            for side in 0..2 {
                at_end.entry(key(piece.ends[side])).or_default().push((k, side));
            }
        }
        let mut used = vec![false; pieces.len()];
        for start in 0..pieces.len() {
            if used[start] {
                continue;
            }
            let mut comp: Vec<Point> = Vec::new();
            let (mut k, mut side) = (start, 0);
            while !used[k] {
                used[k] = true;
                let pts = &pieces[k].points;
                let ordered: Box<dyn Iterator<Item = &Point>> = if side == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
                comp.extend(ordered.skip(usize::from(!comp.is_empty())));
                let exit = key(pieces[k].ends[1 - side]);
                let next = at_end[&exit].iter().find(|&&(j, s)| (j, s) != (k, 1 - side)).copied();
                match next {
                    Some((j, s)) => (k, side) = (j, s),
                    None => break,
                }
            }
            comp.pop();
            sketch.push(comp);
        }
        Ok(sketch)
    }

    /// The diagram with crossings in angular order.
    pub fn diagram(&self) -> Result<Diagram, FgError> {
        self.sketch()?.diagram(angle)
    }
}

/// `w: layers`, layers separated by spaces: `x3` or `X3` for a crossing with
/// the inner strand over or under, `u3` cup, `n3` cap, `k3` or `K3` kinks.
impl fmt::Display for AnnularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.width)?;
        for layer in &self.layers {
            match *layer {
                Layer::Cross(i, o) => write!(f, " {}{i}", if o { 'x' } else { 'X' })?,
                Layer::Cup(i) => write!(f, " u{i}")?,
                Layer::Cap(i) => write!(f, " n{i}")?,
                Layer::Kink(i, o) => write!(f, " {}{i}", if o { 'k' } else { 'K' })?,
            }
        }
        Ok(())
    }
}

impl FromStr for AnnularWord {
    type Err = FgError;

    fn from_str(s: &str) -> Result<Self, FgError> {
        let bad = || FgError::Diagram(format!("bad annular word {s:?}"));
        let (w, rest) = s.split_once(':').ok_or_else(bad)?;
        let width = w.trim().parse().map_err(|_| bad())?;
        let mut layers = Vec::new();
        for tok in rest.split_whitespace() {
            let (c, i) = tok.split_at(1);
            let i: usize = i.parse().map_err(|_| bad())?;
            layers.push(match c {
                "x" => Layer::Cross(i, true),
                "X" => Layer::Cross(i, false),
                "u" => Layer::Cup(i),
                "n" => Layer::Cap(i),
                "k" => Layer::Kink(i, true),
                "K" => Layer::Kink(i, false),
                _ => return Err(bad()),
            });
        }
        let word = AnnularWord { width, layers };
        word.widths()?;
        Ok(word)
    }
}
