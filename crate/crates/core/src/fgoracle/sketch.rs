//! Closed polygonal curves in the thickened annulus and their diagrams.
//!
//! Curves live in `R^3` over an annulus around the origin of the `xy`-plane
//! and are seen from `+z`. Crossings of the projection are found
//! numerically; an edge's class is its signed count of passes through a
//! fixed ray from the origin, so a closed loop's class is its winding number.

use std::collections::{HashMap, HashSet};
use std::f64::consts::TAU;

use super::diagram::{Diagram, End};
use super::FgError;

pub type Point = [f64; 3];

/// Direction of the ray that measures winding, chosen off every symmetry of
/// the curves built here.
const RAY: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Debug, Default)]
pub struct Sketch {
    pub components: Vec<Vec<Point>>,
}

#[derive(Clone, Copy, Debug)]
struct Hit {
    /// Component and position along it, segment index plus fraction.
    comp: usize,
    at: f64,
    over: bool,
    dir: [f64; 2],
}

/// A crossing of the projection.
#[derive(Clone, Copy, Debug)]
pub struct Crossing {
    pub pos: [f64; 2],
    pub comps: (usize, usize),
    /// `+1` for a right-handed crossing.
    pub sign: i64,
}

fn cross2(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

fn sub2(p: &Point, q: &Point) -> [f64; 2] {
    [p[0] - q[0], p[1] - q[1]]
}

impl Sketch {
    pub fn new() -> Self {
        Sketch::default()
    }

    pub fn push(&mut self, c: Vec<Point>) {
        self.components.push(c);
    }

    fn segments(&self) -> Vec<(usize, usize)> {
        self.components.iter().enumerate().flat_map(|(c, pts)| (0..pts.len()).map(move |i| (c, i))).collect()
    }

    fn seg(&self, (c, i): (usize, usize)) -> (&Point, &Point) {
        let pts = &self.components[c];
        (&pts[i], &pts[(i + 1) % pts.len()])
    }

    /// Transverse double points of the projection, each as two hits.
    fn hits(&self) -> Result<Vec<(Hit, Hit)>, FgError> {
        let segs = self.segments();
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut total = 0.0;
        for &s in &segs {
            let (p, q) = self.seg(s);
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
            total += sub2(q, p).iter().map(|v| v * v).sum::<f64>().sqrt();
        }
        let cell = (2.0 * total / segs.len().max(1) as f64).max(1e-9);
        let key = |x: f64, k: usize| ((x - lo[k]) / cell).floor() as i64;
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (n, &s) in segs.iter().enumerate() {
            let (p, q) = self.seg(s);
            for gx in key(p[0].min(q[0]), 0)..=key(p[0].max(q[0]), 0) {
                for gy in key(p[1].min(q[1]), 1)..=key(p[1].max(q[1]), 1) {
                    grid.entry((gx, gy)).or_default().push(n);
                }
            }
        }
        let mut tested = HashSet::new();
        let mut out = Vec::new();
        for bucket in grid.values() {
            for (x, &m) in bucket.iter().enumerate() {
                for &n in &bucket[x + 1..] {
                    let (m, n) = (m.min(n), m.max(n));
                    if !tested.insert((m, n)) {
                        continue;
                    }
                    let (sa, sb) = (segs[m], segs[n]);
                    let len = self.components[sa.0].len();
                    if sa.0 == sb.0 && (sb.1 == sa.1 + 1 || (sa.1 == 0 && sb.1 == len - 1)) {
                        continue;
                    }
                    if let Some(h) = self.intersect(sa, sb)? {
                        out.push(h);
                    }
                }
            }
        }
        Ok(out)
    }

    fn intersect(&self, sa: (usize, usize), sb: (usize, usize)) -> Result<Option<(Hit, Hit)>, FgError> {
        let (p, p2) = self.seg(sa);
        let (q, q2) = self.seg(sb);
        let (r, s) = (sub2(p2, p), sub2(q2, q));
        let den = cross2(r, s);
        if den.abs() < 1e-14 {
            return Ok(None);
        }
        let qp = sub2(q, p);
        let t = cross2(qp, s) / den;
        let u = cross2(qp, r) / den;
        if !(0.0..1.0).contains(&t) || !(0.0..1.0).contains(&u) {
            return Ok(None);
        }
        let za = p[2] + t * (p2[2] - p[2]);
        let zb = q[2] + u * (q2[2] - q[2]);
        if (za - zb).abs() < 1e-9 {
            return Err(FgError::Diagram("curves meet in space".into()));
        }
        let a = Hit { comp: sa.0, at: sa.1 as f64 + t, over: za > zb, dir: r };
        let b = Hit { comp: sb.0, at: sb.1 as f64 + u, over: zb > za, dir: s };
        Ok(Some((a, b)))
    }

    /// Crossings with their positions and signs.
    pub fn crossings(&self) -> Result<Vec<Crossing>, FgError> {
        let mut out = Vec::new();
        for (a, b) in self.hits()? {
            let (o, u) = if a.over { (a, b) } else { (b, a) };
            let sign = if cross2(o.dir, u.dir) > 0.0 { 1 } else { -1 };
            out.push(Crossing { pos: self.point(a.comp, a.at), comps: (a.comp, b.comp), sign });
        }
        Ok(out)
    }

    fn point(&self, comp: usize, at: f64) -> [f64; 2] {
        let pts = &self.components[comp];
        let i = at.floor() as usize;
        let (p, q) = (&pts[i], &pts[(i + 1) % pts.len()]);
        let t = at - i as f64;
        [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
    }

    /// Signed passes through the winding ray, with their positions.
    fn ray_passes(&self, comp: usize) -> Vec<(f64, i64)> {
        let (c, s) = (RAY.cos(), RAY.sin());
        let rot = |p: &Point| [p[0] * c + p[1] * s, -p[0] * s + p[1] * c];
        let pts = &self.components[comp];
        let mut out = Vec::new();
        for i in 0..pts.len() {
            let (p, q) = (rot(&pts[i]), rot(&pts[(i + 1) % pts.len()]));
            if (p[1] < 0.0) != (q[1] < 0.0) {
                let t = p[1] / (p[1] - q[1]);
                if p[0] + t * (q[0] - p[0]) > 0.0 {
                    out.push((i as f64 + t, if q[1] >= 0.0 { 1 } else { -1 }));
                }
            }
        }
        out
    }

    /// The diagram, with crossings sorted by `key` of their position.
    pub fn diagram(&self, key: impl Fn([f64; 2]) -> f64) -> Result<Diagram, FgError> {
        let mut hits = self.hits()?;
        hits.sort_by(|x, y| key(self.point(x.0.comp, x.0.at)).total_cmp(&key(self.point(y.0.comp, y.0.at))));
        let mut on: Vec<Vec<(f64, usize, bool)>> = vec![Vec::new(); self.components.len()];
        for (i, (a, b)) in hits.iter().enumerate() {
            on[a.comp].push((a.at, i, a.over));
            on[b.comp].push((b.at, i, b.over));
        }
        let mut d = Diagram { crossings: vec![[0; 4]; hits.len()], ..Diagram::default() };
        // For each crossing, (incoming, outgoing) ends of the under and over strand.
        let mut ends: Vec<[Option<(End, End)>; 2]> = vec![[None, None]; hits.len()];
        for (comp, list) in on.iter_mut().enumerate() {
            let passes = self.ray_passes(comp);
            if list.is_empty() {
                d.loops.push([passes.iter().map(|p| p.1).sum(), 0]);
                continue;
            }
            list.sort_by(|x, y| x.0.total_cmp(&y.0));
            let first = d.edges.len();
            let n = list.len();
            for (j, item) in list.iter().enumerate() {
                let (from, to) = (item.0, list[(j + 1) % n].0);
                let w: i64 = passes.iter().filter(|(at, _)| if from < to { *at > from && *at < to } else { *at > from || *at < to }).map(|p| p.1).sum();
                d.edges.push([w, 0]);
            }
            for (j, &(_, i, over)) in list.iter().enumerate() {
                let incoming = 2 * (first + (j + n - 1) % n) as End + 1;
                let outgoing = 2 * (first + j) as End;
                ends[i][over as usize] = Some((incoming, outgoing));
            }
        }
        for (i, (a, b)) in hits.iter().enumerate() {
            let (o, u) = if a.over { (a, b) } else { (b, a) };
            let (ui, uo) = ends[i][0].expect("under strand");
            let (oi, oo) = ends[i][1].expect("over strand");
            let back = [-u.dir[0], -u.dir[1]];
            d.crossings[i] = if cross2(back, o.dir) > 0.0 { [ui, oo, uo, oi] } else { [ui, oi, uo, oo] };
        }
        d.validate()?;
        Ok(d)
    }
}

/// Point over the annulus at polar angle `theta`, radius `r`, height `z`.
pub fn polar(theta: f64, r: f64, z: f64) -> Point {
    [r * theta.cos(), r * theta.sin(), z]
}

/// Radius of the core of the solid torus and of the boundary tube.
pub const CORE: f64 = 2.0;
pub const TUBE: f64 = 1.0;

/// `k` parallel copies of the core, spread inside the tube at height 0.
pub fn cores(sketch: &mut Sketch, k: usize) {
    for i in 0..k {
        let r = CORE + TUBE * (-0.4 + 0.8 * (i as f64 + 0.5) / k as f64 + 0.0137 * ((i * 7 + 3) % 5) as f64 / k as f64);
        let n = 256;
        sketch.push((0..n).map(|j| polar(TAU * j as f64 / n as f64 + 0.1 * i as f64, r, 0.0)).collect());
    }
}

/// The curve of slope `(p, q)` on the boundary torus: `p` times along the
/// core, `q` times around the tube. `phase` shifts it along the torus.
pub fn torus_curve(p: i64, q: i64, phase: [f64; 2]) -> Vec<Point> {
    let n = 160 * (2 * p.unsigned_abs() as usize + q.unsigned_abs() as usize + 2);
    (0..n)
        .map(|j| {
            let t = TAU * j as f64 / n as f64;
            let mut theta = p as f64 * t + phase[0];
            if p == 0 {
                theta += 0.3 * t.sin();
            }
            let phi = q as f64 * t + phase[1];
            polar(theta, CORE + TUBE * phi.cos(), TUBE * phi.sin())
        })
        .collect()
}

pub fn radius(pos: [f64; 2]) -> f64 {
    pos[0].hypot(pos[1])
}

pub fn angle(pos: [f64; 2]) -> f64 {
    (pos[1].atan2(pos[0]) - RAY).rem_euclid(TAU)
}
