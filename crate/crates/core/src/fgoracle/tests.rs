use rand::Rng;

use super::*;

fn word(s: &str) -> AnnularWord {
    s.parse().unwrap()
}

fn skein(pairs: &[(usize, Scalar)]) -> AnnularSkein {
    pairs.iter().cloned().collect()
}

fn delta() -> Scalar {
    Scalar::monomial(-1, 2).sub(&Scalar::monomial(1, -2))
}

fn eval(w: &AnnularWord, a: &Fp) -> AnnularSkein<Fp> {
    skein_in(&w.diagram().unwrap(), a, MAX_STATES).unwrap()
}

/// A random annular tangle closing up to width `w`.
fn random_word(rng: &mut ChaCha8Rng, max_crossings: usize) -> AnnularWord {
    let width = rng.gen_range(0..=3);
    let mut w = width;
    let mut layers = Vec::new();
    let mut crossings = 0;
    while crossings < max_crossings && rng.gen_bool(0.85) {
        let roll = rng.gen_range(0..10);
        if roll < 5 && w >= 2 {
            layers.push(Layer::Cross(rng.gen_range(0..w - 1), rng.gen()));
            crossings += 1;
        } else if roll < 6 && w >= 1 {
            layers.push(Layer::Kink(rng.gen_range(0..w), rng.gen()));
            crossings += 1;
        } else if roll < 8 && w < 5 {
            layers.push(Layer::Cup(rng.gen_range(0..=w)));
            w += 2;
        } else if w >= width + 2 {
            layers.push(Layer::Cap(rng.gen_range(0..w - 1)));
            w -= 2;
        }
    }
    while w > width {
        layers.push(Layer::Cap(rng.gen_range(0..w - 1)));
        w -= 2;
    }
    AnnularWord::new(width, layers)
}

fn with_inserted(w: &AnnularWord, at: usize, inserted: &[Layer]) -> AnnularWord {
    let mut layers = w.layers.clone();
    layers.splice(at..at, inserted.iter().copied());
    AnnularWord::new(w.width, layers)
}

#[test]
fn unknot_and_core() {
    assert_eq!(resolve(&word("0: u0 n0").diagram().unwrap()).unwrap(), skein(&[(0, delta())]));
    assert_eq!(resolve(&word("1:").diagram().unwrap()).unwrap(), skein(&[(1, Scalar::one())]));
    assert_eq!(resolve(&word("2:").diagram().unwrap()).unwrap(), skein(&[(2, Scalar::one())]));
}

#[test]
fn meridian_around_the_core() {
    let d = word("1: u1 X0 X0 n1").diagram().unwrap();
    assert_eq!(d.crossing_count(), 2);
    let v = Scalar::monomial(-1, 4).sub(&Scalar::monomial(1, -4));
    assert_eq!(resolve(&d).unwrap(), skein(&[(1, v)]));
}

#[test]
fn curls_multiply_by_the_ribbon_element() {
    let s = Scalar::s();
    assert_eq!(kink_in(true, &s).unwrap(), Scalar::monomial(-1, 3));
    assert_eq!(kink_in(false, &s).unwrap(), Scalar::monomial(-1, -3));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 20 {
        let w = random_word(&mut rng, 5);
        if w.width == 0 && w.layers.is_empty() {
            continue;
        }
        let base = resolve(&w.diagram().unwrap()).unwrap();
        let widths = w.widths().unwrap();
        let at = rng.gen_range(0..=w.layers.len());
        if widths[at] == 0 {
            continue;
        }
        let strand = rng.gen_range(0..widths[at]);
        for over in [true, false] {
            let curled = with_inserted(&w, at, &[Layer::Kink(strand, over)]).diagram().unwrap();
            let sign = curled.writhe() - w.diagram().unwrap().writhe();
            let factor = Scalar::monomial(-1, 3 * sign as i32);
            let expect: AnnularSkein = base.iter().map(|(&k, c)| (k, c.mul(&factor))).collect();
            assert_eq!(resolve(&curled).unwrap(), expect, "{w} curled at {at}");
        }
        checked += 1;
    }
}

#[test]
fn state_sum_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let w = random_word(&mut rng, 12);
        let d = w.diagram().unwrap();
        let a = random_fp(&mut rng);
        assert_eq!(resolve_in(&d, &a, MAX_STATES).unwrap(), resolve_brute(&d, &a, MAX_CROSSINGS).unwrap(), "{w}");
        let mut order: Vec<usize> = (0..d.crossing_count()).collect();
        order.reverse();
        assert_eq!(resolve_in(&d.reordered(&order), &a, MAX_STATES).unwrap(), resolve_in(&d, &a, MAX_STATES).unwrap(), "{w}");
    }
}

#[test]
fn second_and_third_moves() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pairs = 0;
    while pairs < 120 {
        let w = random_word(&mut rng, 8);
        let widths = w.widths().unwrap();
        let at = rng.gen_range(0..=w.layers.len());
        let n = widths[at];
        let a = random_fp(&mut rng);
        let base = eval(&w, &a);
        if pairs % 2 == 0 {
            if n < 2 {
                continue;
            }
            let (i, o) = (rng.gen_range(0..n - 1), rng.gen());
            let moved = with_inserted(&w, at, &[Layer::Cross(i, o), Layer::Cross(i, !o)]);
            assert_eq!(eval(&moved, &a), base, "{w} / {moved}");
        } else {
            if n < 3 {
                continue;
            }
            let i = rng.gen_range(0..n - 2);
            let (x, y, z): (bool, bool, bool) = (rng.gen(), rng.gen(), rng.gen());
            // The strands must have consistent heights to slide past each other.
            if x == z && y != x {
                continue;
            }
            let lhs = [Layer::Cross(i, x), Layer::Cross(i + 1, y), Layer::Cross(i, z)];
            let rhs = [Layer::Cross(i + 1, z), Layer::Cross(i, y), Layer::Cross(i + 1, x)];
            let left = eval(&with_inserted(&w, at, &lhs), &a);
            let right = eval(&with_inserted(&w, at, &rhs), &a);
            assert_eq!(left, right, "{w} at {at}: {lhs:?} / {rhs:?}");
        }
        pairs += 1;
    }
}

#[test]
fn closure_is_rotation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let w = random_word(&mut rng, 8);
        let widths = w.widths().unwrap();
        let Some(cut) = (1..w.layers.len()).find(|&l| widths[l] == w.width) else { continue };
        let mut layers = w.layers[cut..].to_vec();
        layers.extend_from_slice(&w.layers[..cut]);
        let a = random_fp(&mut rng);
        assert_eq!(eval(&AnnularWord::new(w.width, layers), &a), eval(&w, &a), "{w} cut at {cut}");
    }
}

#[test]
fn mirror_inverts_the_variable() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let d = random_word(&mut rng, 8).diagram().unwrap();
        let a = random_fp(&mut rng);
        let bar = resolve_in(&d, &a.inv().unwrap(), MAX_STATES).unwrap();
        assert_eq!(resolve_in(&d.mirror(), &a, MAX_STATES).unwrap(), bar);
        assert_eq!(d.mirror().writhe(), -d.writhe());
    }
}

#[test]
fn diagram_text_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let w = random_word(&mut rng, 8);
        assert_eq!(w.to_string().parse::<AnnularWord>().unwrap(), w);
        let d = w.diagram().unwrap();
        assert_eq!(d.to_string().parse::<Diagram>().unwrap(), d);
    }
    assert!("X +0 -0 +1 -1\nE 0 0 0".parse::<Diagram>().is_err());
    assert!("3: n0".parse::<AnnularWord>().is_err());
}

#[test]
fn budgets_are_enforced() {
    let layers = (0..24).map(|k| Layer::Cross(k % 2, true)).collect();
    let d = AnnularWord::new(3, layers).diagram().unwrap();
    let a = Fp::from_i64(3);
    assert!(matches!(resolve_brute(&d, &a, MAX_CROSSINGS), Err(FgError::Budget { .. })));
    assert!(matches!(resolve_in(&d, &a, 4), Err(FgError::Budget { .. })));
    assert!(resolve_in(&d, &a, MAX_STATES).is_ok());
}

#[test]
fn boundary_curves_in_the_solid_torus() {
    let c = |p, q| TorusCurve::new(p, q).unwrap();
    assert_eq!(curve_action(c(1, 0), 0).unwrap(), skein(&[(1, Scalar::one())]));
    assert_eq!(curve_action(c(0, 1), 0).unwrap(), skein(&[(0, delta())]));
    let v = Scalar::monomial(-1, 4).sub(&Scalar::monomial(1, -4));
    assert_eq!(curve_action(c(0, 1), 1).unwrap(), skein(&[(1, v)]));
    let v = Scalar::monomial(1, 6).sub(&Scalar::monomial(1, 2)).sub(&Scalar::monomial(1, -2)).add(&Scalar::monomial(1, -6));
    assert_eq!(curve_action(c(0, 1), 2).unwrap(), skein(&[(0, v), (2, Scalar::monomial(-1, 6).sub(&Scalar::monomial(1, -6)))]));
    assert_eq!(curve_action(c(1, 1), 0).unwrap(), skein(&[(1, Scalar::monomial(-1, -3))]));
    assert_eq!(curve_action(c(1, -1), 0).unwrap(), skein(&[(1, Scalar::monomial(-1, 3))]));
    assert_eq!(surface_framing(c(1, 0)).unwrap(), 0);
    assert_eq!(surface_framing(c(1, 1)).unwrap(), -1);
    assert_eq!(surface_framing(c(1, -1)).unwrap(), 1);
    assert_eq!(surface_framing(c(1, 2)).unwrap(), -2);
    assert!(TorusCurve::new(2, 4).is_err());
    assert_eq!(TorusCurve::new(-1, -2).unwrap(), c(1, 2));
}

#[test]
fn action_factors_through_the_torus_product() {
    let s = Scalar::s();
    let c = |p, q| TorusCurve::new(p, q).unwrap();
    let prod = product_in(&Multicurve::single(c(1, 0)), &Multicurve::single(c(0, 1)), &s, MAX_STATES).unwrap();
    let expect: BTreeMap<Multicurve, Scalar> =
        [(Multicurve::single(c(1, 1)), Scalar::s()), (Multicurve::single(c(1, -1)), Scalar::s_pow(-1))].into_iter().collect();
    assert_eq!(prod, expect);
    for (a, b) in [(c(1, 0), c(0, 1)), (c(0, 1), c(1, 0)), (c(1, 1), c(0, 1)), (c(1, -1), c(1, 1)), (c(2, 1), c(0, 1))] {
        let prod = product_in(&Multicurve::single(a), &Multicurve::single(b), &s, MAX_STATES).unwrap();
        for k in 0..3 {
            let z = skein(&[(k, Scalar::one())]);
            let inner = multicurve_action_in(&Multicurve::single(b), &z, &s, MAX_STATES).unwrap();
            let lhs = multicurve_action_in(&Multicurve::single(a), &inner, &s, MAX_STATES).unwrap();
            let mut rhs: AnnularSkein = BTreeMap::new();
            for (m, x) in &prod {
                for (j, y) in multicurve_action_in(m, &z, &s, MAX_STATES).unwrap() {
                    let t = x.mul(&y);
                    rhs.entry(j).and_modify(|v| v.add_assign(&t)).or_insert(t);
                }
            }
            rhs.retain(|_, v| !v.is_zero());
            assert_eq!(lhs, rhs, "{a} after {b} on z^{k}");
        }
    }
}

#[test]
fn small_lens_spaces() {
    for ((p, q), dim) in [((0, 1), 1), ((1, 0), 1), ((2, 1), 2)] {
        let sampled = lens_dimension(p, q, &FgOptions::default()).unwrap();
        let exact = lens_dimension(p, q, &FgOptions { exact: true, ..FgOptions::default() }).unwrap();
        assert!(sampled.stabilized && exact.stabilized);
        assert_eq!((sampled.dimension, exact.dimension), (dim, dim), "lens({p},{q})");
        assert_eq!(sampled.dims, exact.dims);
        assert_eq!(sampled.basis.len() as u64, dim);
        assert_eq!(sampled.basis[0], (0, 0));
    }
    assert!(lens_dimension(4, 2, &FgOptions::default()).is_err());
    let g = lens_gluing(5, 2).unwrap();
    assert_eq!(g[0][0] * g[1][1] - g[0][1] * g[1][0], 1);
    assert_eq!(g[1], [5, 2]);
}
