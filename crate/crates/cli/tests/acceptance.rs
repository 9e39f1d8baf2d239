//! One test per acceptance criterion. Run with `--nocapture` for the
//! PASS/FAIL summary lines.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skein_cli::{Engine, ManifoldExpr, RunConfig, Runner};
use skein_core::coeff::{random_fp, Field, Fp, Scalar};
use skein_core::fgoracle::{kink_in, lens_dimension, lens_relations, resolve, AnnularSkein, AnnularWord, FgOptions, Layer};
use skein_core::heegaard::{lens_word, verify_automorphism, Automorphism, DimensionOptions, GenusOneEngine, GenusOneModule, MapWord};
use skein_core::linsolve::{rank_exact, rank_mod, SparseMatrix};
use skein_core::ncalg::{GenId, NCPoly, Word};
use skein_core::presentations::{classical_presentation, dq_presentation, hilbert_flatness, Presentation};

fn engine() -> &'static GenusOneEngine {
    static ENGINE: OnceLock<GenusOneEngine> = OnceLock::new();
    ENGINE.get_or_init(|| GenusOneEngine::new().expect("genus one engine"))
}

fn verdict(n: u32, what: &str, ok: bool, detail: impl std::fmt::Display) {
    println!("criterion {n} [{}] {what}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {what}: {detail}");
}

fn fg(p: i64, q: i64, exact: bool) -> u64 {
    let r = lens_dimension(p, q, &FgOptions { exact, ..FgOptions::default() }).expect("fg lens");
    assert!(r.stabilized, "fg lens({p},{q}) did not stabilize");
    r.dimension
}

fn internal(w: &MapWord, exact: bool) -> u64 {
    let r = engine().dimension(w, &DimensionOptions { exact, ..DimensionOptions::default() }).expect("internal");
    assert!(r.stabilized, "internal {w} did not stabilize");
    r.dimension
}

#[test]
fn s2xs1_is_one_dimensional_on_both_engines() {
    let start = Instant::now();
    let e = GenusOneEngine::new().unwrap();
    let r = e.dimension(&MapWord::default(), &DimensionOptions { exact: true, ..DimensionOptions::default() }).unwrap();
    let f = fg(0, 1, true);
    let t = start.elapsed();
    let ok = r.stabilized && r.dimension == 1 && f == 1 && t <= Duration::from_secs(30);
    verdict(1, "S2xS1 exact", ok, format!("internal {} fg {f} in {t:.1?}", r.dimension));
}

#[test]
fn s3_is_one_dimensional_by_splicing() {
    let start = Instant::now();
    let s: MapWord = "S".parse().unwrap();
    let i = internal(&s, true);
    let f = fg(1, 0, true);
    let t = start.elapsed();
    verdict(2, "S3 via S and lens(1,0)", i == 1 && f == 1 && t <= Duration::from_secs(60), format!("internal {i} fg {f} in {t:.1?}"));
}

#[test]
fn lens_spaces_agree_with_the_diagrammatic_oracle() {
    let mut cases: Vec<(i64, i64)> = (2..=8).map(|p| (p, 1)).collect();
    cases.push((5, 2));
    let mut lines = Vec::new();
    let mut ok = true;
    for (p, q) in cases {
        let start = Instant::now();
        let truth = fg(p, q, false);
        let i = internal(&lens_word(p as u64, q).unwrap(), false);
        let t = start.elapsed();
        ok &= i == truth && t <= Duration::from_secs(600);
        lines.push(format!("L({p},{q}) fg {truth} internal {i} {t:.1?}"));
    }
    verdict(3, "lens spaces", ok, lines.join(", "));
}

#[test]
fn connected_sum_of_lens_spaces() {
    let config = RunConfig { engine: Engine::Both, ..RunConfig::default() };
    let m: ManifoldExpr = "lens(2,1)#lens(3,1)".parse().unwrap();
    let r = Runner::new(&config).run(&m).unwrap();
    verdict(4, "L(2,1)#L(3,1)", r.stabilized && r.dimension == 4, format!("dimension {}", r.dimension));
}

/// Exponent vectors in graded lex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Mono(Vec<u8>);

impl Mono {
    fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn lcm(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    fn quotient(&self, by: &Mono) -> Mono {
        Mono(self.0.iter().zip(&by.0).map(|(a, b)| a - b).collect())
    }

    fn times(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Poly = BTreeMap<Mono, Fp>;

fn lead(p: &Poly) -> (&Mono, &Fp) {
    p.iter().next_back().expect("nonzero")
}

fn add_scaled(p: &mut Poly, q: &Poly, c: &Fp, m: &Mono) {
    for (n, d) in q {
        let key = n.times(m);
        let v = p.get(&key).copied().unwrap_or_else(Fp::zero).add(&c.mul(d));
        if v.is_zero() {
            p.remove(&key);
        } else {
            p.insert(key, v);
        }
    }
}

fn reduce(mut p: Poly, basis: &[Poly]) -> Poly {
    let mut rest = Poly::new();
    while let Some((m, c)) = p.iter().next_back().map(|(m, c)| (m.clone(), *c)) {
        match basis.iter().find(|g| lead(g).0.divides(&m)) {
            Some(g) => {
                let (lm, lc) = lead(g);
                let k = c.mul(&lc.inv().unwrap()).neg();
                add_scaled(&mut p, g, &k, &m.quotient(lm));
            }
            None => {
                p.remove(&m);
                rest.insert(m, c);
            }
        }
    }
    rest
}

fn spoly(f: &Poly, g: &Poly) -> Poly {
    let ((fm, fc), (gm, gc)) = (lead(f), lead(g));
    let l = fm.lcm(gm);
    let mut s = Poly::new();
    add_scaled(&mut s, f, &fc.inv().unwrap(), &l.quotient(fm));
    add_scaled(&mut s, g, &gc.inv().unwrap().neg(), &l.quotient(gm));
    s
}

fn buchberger(gens: Vec<Poly>) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        let r = reduce(g, &basis);
        if !r.is_empty() {
            basis.push(r);
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        if lead(&basis[i]).0.coprime(lead(&basis[j]).0) {
            continue;
        }
        let r = reduce(spoly(&basis[i], &basis[j]), &basis);
        if !r.is_empty() {
            let k = basis.len();
            basis.push(r);
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    basis
}

fn monomials(n: usize, d: u32) -> Vec<Mono> {
    if n == 0 {
        return if d == 0 { vec![Mono(Vec::new())] } else { Vec::new() };
    }
    (0..=d)
        .flat_map(|e| {
            monomials(n - 1, d - e).into_iter().map(move |mut m| {
                m.0.insert(0, e as u8);
                m
            })
        })
        .collect()
}

/// Hilbert function of the commutative ring on the generators modulo the
/// nonzero commutative images of the classical relations.
fn commutative_table(p: &Presentation, d: u32) -> Vec<u64> {
    let gens = p.generators();
    let cp = classical_presentation(p).unwrap();
    let polys: Vec<Poly> = cp
        .relations()
        .iter()
        .map(|r| {
            let mut out = Poly::new();
            for (w, c) in r.poly.terms() {
                let mut e = vec![0u8; gens.len()];
                for g in w.gens() {
                    e[gens.iter().position(|&h| h == g).unwrap()] += 1;
                }
                add_scaled(&mut out, &Poly::from([(Mono(e), Fp::from_i64(c.as_integer().expect("integral")))]), &Fp::one(), &Mono(vec![0; gens.len()]));
            }
            out
        })
        .filter(|p| !p.is_empty())
        .collect();
    let basis = buchberger(polys);
    (0..=d).map(|k| monomials(gens.len(), k).iter().filter(|m| !basis.iter().any(|g| lead(g).0.divides(m))).count() as u64).collect()
}

fn exchange(power: i32) -> NCPoly {
    let mut p = NCPoly::zero();
    p.add_term("a1_22 a1_12".parse::<Word>().unwrap(), Scalar::one());
    p.add_term("a1_12 a1_22".parse::<Word>().unwrap(), Scalar::q_pow(power).neg());
    monic(p)
}

fn monic(p: NCPoly) -> NCPoly {
    let c = p.leading().unwrap().1.inv().unwrap();
    p.scale(&c)
}

#[test]
fn presentations_are_flat_through_degree_six() {
    let g1 = commutative_table(&dq_presentation(1), 6);
    let g2 = commutative_table(&dq_presentation(2), 6);
    assert_eq!(g1, [1, 8, 34, 104, 259, 560, 1092]);
    assert_eq!(g2, [1, 16, 132, 752, 3338, 12336, 39572]);
    let mut lines = Vec::new();
    let mut ok = true;
    for (g, table) in [(1, &g1), (2, &g2)] {
        let r = hilbert_flatness(&dq_presentation(g), 6).unwrap();
        ok &= r.flat && &r.quantum == table && &r.classical == table;
        lines.push(format!("g={g} quantum {:?} oracle {table:?}", r.quantum));
    }
    let mut mutated = dq_presentation(1);
    let rel = mutated.relations_mut().iter_mut().find(|r| r.poly == exchange(2)).expect("exchange relation");
    rel.poly = exchange(3);
    let broken = hilbert_flatness(&mutated, 3).unwrap();
    ok &= !broken.flat;
    lines.push(format!("q^3 mutation flat={}", broken.flat));
    verdict(5, "flatness", ok, lines.join("; "));
}

fn perturbed(phi: &Automorphism) -> Automorphism {
    let mut images: BTreeMap<GenId, NCPoly> = phi.moved().map(|g| (g, phi.image(g))).collect();
    let (_, p) = images.iter_mut().next().unwrap();
    let (w, c) = p.leading().map(|(w, c)| (w.clone(), c.clone())).unwrap();
    p.add_term(w, c.mul(&Scalar::q().sub(&Scalar::one())));
    Automorphism::from_images(images)
}

#[test]
fn twists_preserve_the_relations() {
    let e = engine();
    let (sys, p) = (e.system(), e.presentation());
    let tw = e.twists();
    let checks = [
        ("S", verify_automorphism(sys, p, &tw.s, 6), true),
        ("T", verify_automorphism(sys, p, &tw.t, 6), true),
        ("id", verify_automorphism(sys, p, &Automorphism::identity(), 6), true),
        ("perturbed S", verify_automorphism(sys, p, &perturbed(&tw.s), 6), false),
        ("perturbed T", verify_automorphism(sys, p, &perturbed(&tw.t), 6), false),
    ];
    let ok = checks.iter().all(|(_, got, want)| got == want);
    let detail: Vec<String> = checks.iter().map(|(n, got, _)| format!("{n} {got}")).collect();
    verdict(6, "automorphisms through degree 6", ok, detail.join(", "));
}

fn layered(rng: &mut ChaCha8Rng, max_crossings: usize) -> AnnularWord {
    let width = rng.gen_range(0..=2);
    let (mut w, mut layers, mut crossings) = (width, Vec::new(), 0);
    while crossings < max_crossings && rng.gen_bool(0.85) {
        match rng.gen_range(0..8) {
            0..=3 if w >= 2 => {
                layers.push(Layer::Cross(rng.gen_range(0..w - 1), rng.gen()));
                crossings += 1;
            }
            4..=5 if w < 5 => {
                layers.push(Layer::Cup(rng.gen_range(0..=w)));
                w += 2;
            }
            _ if w >= width + 2 => {
                layers.push(Layer::Cap(rng.gen_range(0..w - 1)));
                w -= 2;
            }
            _ => {}
        }
    }
    while w > width {
        layers.push(Layer::Cap(rng.gen_range(0..w - 1)));
        w -= 2;
    }
    AnnularWord::new(width, layers)
}

fn inserted(w: &AnnularWord, at: usize, extra: &[Layer]) -> AnnularWord {
    let mut layers = w.layers.clone();
    layers.splice(at..at, extra.iter().copied());
    AnnularWord::new(w.width, layers)
}

fn value(w: &AnnularWord) -> AnnularSkein {
    resolve(&w.diagram().unwrap()).unwrap()
}

fn scaled(v: &AnnularSkein, c: &Scalar) -> AnnularSkein {
    v.iter().map(|(k, x)| (*k, x.mul(c))).collect()
}

#[test]
fn bracket_is_invariant_under_reidemeister_moves() {
    let unknot = value(&"0: u0 n0".parse().unwrap());
    let delta = Scalar::monomial(-1, 2).sub(&Scalar::monomial(1, -2));
    let mut ok = unknot == AnnularSkein::from([(0, delta)]);
    let s = Scalar::s();
    let (plus, minus) = (kink_in(true, &s).unwrap(), kink_in(false, &s).unwrap());
    ok &= plus == Scalar::monomial(-1, 3) && minus == Scalar::monomial(-1, -3);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut second, mut third, mut first) = (0, 0, 0);
    while second < 100 || third < 100 || first < 30 {
        let w = layered(&mut rng, 6);
        let widths = w.widths().unwrap();
        let at = rng.gen_range(0..=w.layers.len());
        let n = widths[at];
        let base = value(&w);
        match rng.gen_range(0..3) {
            0 if n >= 2 => {
                let (i, o) = (rng.gen_range(0..n - 1), rng.gen());
                ok &= value(&inserted(&w, at, &[Layer::Cross(i, o), Layer::Cross(i, !o)])) == base;
                second += 1;
            }
            1 if n >= 3 => {
                let i = rng.gen_range(0..n - 2);
                let (x, y, z): (bool, bool, bool) = (rng.gen(), rng.gen(), rng.gen());
                if x == z && y != x {
                    continue;
                }
                let lhs = [Layer::Cross(i, x), Layer::Cross(i + 1, y), Layer::Cross(i, z)];
                let rhs = [Layer::Cross(i + 1, z), Layer::Cross(i, y), Layer::Cross(i + 1, x)];
                ok &= value(&inserted(&w, at, &lhs)) == value(&inserted(&w, at, &rhs));
                third += 1;
            }
            2 if n >= 1 => {
                let moved = inserted(&w, at, &[Layer::Kink(rng.gen_range(0..n), rng.gen())]);
                let sign = moved.diagram().unwrap().writhe() - w.diagram().unwrap().writhe();
                ok &= value(&moved) == scaled(&base, if sign > 0 { &plus } else { &minus });
                first += 1;
            }
            _ => {}
        }
    }
    verdict(7, "Reidemeister moves", ok, format!("{second} RII and {third} RIII pairs, {first} curls, unknot -A^2-A^-2"));
}

fn matrix(ncols: usize, rows: Vec<Vec<(usize, Scalar)>>) -> SparseMatrix {
    let mut m = SparseMatrix::new(0, ncols);
    for r in rows {
        m.push_row(r);
    }
    m
}

fn suite_matrices() -> Vec<(String, SparseMatrix)> {
    let e = engine();
    let mut out = Vec::new();
    for w in ["id", "S", "TTS", "TTTS", "TTTTS", "TTST'"] {
        let w: MapWord = w.parse().unwrap();
        let n = e.raise(&w) + 2;
        let module = GenusOneModule::<Scalar>::new(e.system(), n, &()).unwrap();
        let levels: Vec<_> = e.levels(&w).iter().map(|a| a.specialize::<Scalar>(&()).unwrap()).collect();
        let (rows, _) = module.twisted_rows(&levels);
        out.push((format!("module {w} n={n}"), matrix(module.words().len(), rows)));
    }
    for (p, q) in [(0, 1), (1, 0), (2, 1), (3, 1), (4, 1), (5, 2)] {
        let (words, rows) = lens_relations(p, q, 2 * p as usize + 4).unwrap();
        out.push((format!("fg lens({p},{q})"), matrix(words.len(), rows)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..10 {
        let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for _ in 0..6 {
            let mut row = Vec::new();
            for c in 0..8 {
                if rng.gen_bool(0.4) {
                    row.push((c, Scalar::monomial(rng.gen_range(1..=3), rng.gen_range(-4..=4))));
                }
            }
            rows.push(row);
        }
        let mix: Vec<(usize, Scalar)> = rows[0].iter().cloned().chain(rows[1].iter().map(|(c, x)| (*c, x.mul(&Scalar::q())))).collect();
        rows.push(mix);
        out.push((format!("random {k}"), matrix(8, rows)));
    }
    out
}

#[test]
fn sampled_ranks_match_exact_ranks() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = Vec::new();
    let all = suite_matrices();
    for (name, m) in &all {
        let exact = rank_exact(m);
        let sampled = (0..5).filter_map(|_| rank_mod(m, random_fp(&mut rng)).ok()).max().unwrap();
        if sampled != exact {
            bad.push(format!("{name}: sampled {sampled} exact {exact}"));
        }
    }
    verdict(8, "sampled ranks", bad.is_empty(), format!("{} matrices, mismatches {bad:?}", all.len()));
}

/// Needs `SKEIN_T3_GLUING` naming a file with the images of the genus
/// three generators under the gluing map of the three-torus.
#[test]
#[ignore = "genus three completion exceeds the test budget"]
fn three_torus_from_a_genus_three_gluing() {
    let path = std::env::var("SKEIN_T3_GLUING").expect("SKEIN_T3_GLUING names the gluing file");
    let m: ManifoldExpr = format!("splice(3,@{path})").parse().unwrap();
    let start = Instant::now();
    let r = Runner::new(&RunConfig::default()).run(&m);
    let t = start.elapsed();
    match r {
        Ok(r) => verdict(9, "T3", r.stabilized && r.dimension == 9, format!("dimension {} stabilized {} in {t:.1?}", r.dimension, r.stabilized)),
        Err(e) => verdict(9, "T3", false, format!("{e} after {t:.1?}")),
    }
}
