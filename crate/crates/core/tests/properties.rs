use kneadlab_core::analysis::{canonical_rotation, find_periodic_orbits};
use kneadlab_core::cantor::psi_extended;
use kneadlab_core::equivalence::{
    build_hn, convergence_estimate, preimage_set, trace_curve, BranchWord, Label,
};
use kneadlab_core::{fixtures, grid, Branch, CantorMap, Point, SignedCoordinate};
use proptest::prelude::*;

fn branch() -> impl Strategy<Value = Branch> {
    prop_oneof![Just(Branch::Minus), Just(Branch::Plus)]
}

fn fixture() -> impl Strategy<Value = &'static str> {
    proptest::sample::select(fixtures::NAMES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn branch_inverse_round_trip(name in fixture(), j in branch(), t in 0.0f64..1.0, y in 0.0f64..1.0) {
        let m = fixtures::by_name(name).unwrap();
        let x = -1.0 + t * (1.0 + m.fiber_top(y));
        if let Some(u) = m.try_branch_inverse(j, x, y) {
            prop_assert_eq!(u.branch(), j);
            let back = m.apply_branch(j, y, u.value());
            prop_assert!((back.value() - x).abs() < 1e-9, "{} -> {} -> {}", x, u, back);
        }
    }

    #[test]
    fn partitions_are_ordered_and_nested(name in fixture(), y in 0.0f64..1.0, n in 2usize..7) {
        let m = fixtures::by_name(name).unwrap();
        let deep = preimage_set(&m, y, n).unwrap();
        let xs = deep.x_values();
        prop_assert!(xs.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(deep.points.first().map(|p| p.label.clone()), Some(Label::Boundary(Branch::Minus)));
        prop_assert_eq!(deep.points.last().map(|p| p.label.clone()), Some(Label::Boundary(Branch::Plus)));
        let shallow = preimage_set(&m, y, n - 1).unwrap();
        for p in shallow.preimages() {
            let q = deep.get(&p.label);
            prop_assert!(q.is_some(), "{} missing at depth {}", p.label, n);
            prop_assert!((q.unwrap().x.value() - p.x.value()).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_is_monotone(a in 0.1f64..0.45, gap in 0.05f64..0.4, y0 in 0.0f64..1.0, y1 in 0.0f64..1.0) {
        let b = (a + gap).min(0.95);
        let (f, g) = (CantorMap::middle_thirds(), CantorMap::affine(a, b));
        let (lo, hi) = if y0 <= y1 { (y0, y1) } else { (y1, y0) };
        let p_lo = psi_extended(&f, &g, lo, 40).unwrap().value;
        let p_hi = psi_extended(&f, &g, hi, 40).unwrap().value;
        prop_assert!(p_lo <= p_hi + 1e-12, "psi({}) = {} > psi({}) = {}", lo, p_lo, hi, p_hi);
    }

    #[test]
    fn curve_agrees_with_partition(word in proptest::collection::vec(branch(), 1..5), w in 0.0f64..1.0) {
        let m = fixtures::quad(1.2);
        let word = BranchWord(word);
        let curve = trace_curve(&m, &word, &[w]).unwrap();
        let sample = &curve.samples[0];
        let part = preimage_set(&m, w, word.len() + 1).unwrap();
        match part.get(&Label::Word(word.clone())) {
            Some(p) => {
                prop_assert!(!sample.fallback);
                prop_assert!((p.x.value() - sample.x.value()).abs() <= 10.0 * m.tol.root_tol);
            }
            None => prop_assert!(sample.fallback || sample.x.is_critical()),
        }
    }

    #[test]
    fn identity_conjugacy(name in fixture(), y in 0.0f64..1.0, n in 1usize..6) {
        let m = fixtures::by_name(name).unwrap();
        let t = build_hn(&m, &m, y, n).unwrap();
        for p in &t.pairs {
            prop_assert_eq!(p.x_f, p.x_g);
        }
        let x = SignedCoordinate::from_real(0.37, Branch::Plus);
        prop_assert!((t.interpolate(x) - 0.37).abs() < 1e-12);
    }
}

#[test]
fn periodic_orbits_are_rotation_invariant() {
    for name in ["quad0.8", "quad1.2", "quad1.4", "coupled"] {
        let m = fixtures::by_name(name).unwrap();
        for o in find_periodic_orbits(&m, 4).unwrap() {
            let letters = o.word.letters();
            assert_eq!(canonical_rotation(letters), letters.to_vec(), "{name} {}", o.word);
            for r in 1..letters.len() {
                let mut rotated = letters[r..].to_vec();
                rotated.extend_from_slice(&letters[..r]);
                assert_eq!(canonical_rotation(&rotated), letters.to_vec());
            }
            let orbit = m.eval_orbit(o.point(), o.period());
            let end = orbit.points[o.period()];
            assert!((end.x.value() - o.x_star.value()).abs() < 1e-9, "{name} {}", o.word);
            assert!((end.y - o.y_star).abs() < 1e-12, "{name} {}", o.word);
        }
    }
}

#[test]
fn conjugacies_converge_tent_to_quadratic() {
    let (t, q) = (fixtures::tent2(), fixtures::quad(2.0));
    let xs = grid::midpoints(-1.0, 1.0, 33);
    let pts: Vec<Point> = grid::uniform(0.0, 1.0, 5)
        .into_iter()
        .flat_map(|y| xs.iter().map(move |&x| Point::real(x, y)))
        .collect();
    let coarse = convergence_estimate(&t, &q, 4, 8, &pts).unwrap().sup;
    let fine = convergence_estimate(&t, &q, 8, 12, &pts).unwrap().sup;
    assert!(fine < coarse, "{fine} >= {coarse}");
}

#[test]
fn self_conjugacy_converges_immediately() {
    let m = fixtures::coupled();
    let pts: Vec<Point> = grid::midpoints(-1.0, 1.0, 17).into_iter().map(|x| Point::real(x, 0.4)).collect();
    assert!(convergence_estimate(&m, &m, 3, 6, &pts).unwrap().sup < 1e-12);
}
