use num::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra_core::exact::{int, rat, Rational};
use spectra_core::linalg::{subsets, Matrix, SubspaceModel};
use spectra_core::stabcert::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn matrix(d: usize) -> impl Strategy<Value = Matrix<Rational>> {
    proptest::collection::vec(proptest::collection::vec(rational(), d), d).prop_map(Matrix::from_rows)
}

/// `⋀^ℓ g` entry by entry from minors.
fn wedge_oracle(g: &Matrix<Rational>, l: usize) -> Matrix<Rational> {
    let idx = subsets(g.rows(), l);
    Matrix::from_rows(idx.iter().map(|r| idx.iter().map(|c| g.minor(r, c)).collect()).collect())
}

fn random_subspace(rng: &mut ChaCha8Rng, d: usize, l: usize) -> SubspaceModel<Rational> {
    loop {
        let rows: Vec<Vec<Rational>> = (0..l).map(|_| (0..d).map(|_| rat(rng.random_range(-5..=5), rng.random_range(1..=3))).collect()).collect();
        if let Some(s) = SubspaceModel::from_basis(rows) {
            return s;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn plucker_vectors_of_subspaces_are_pure(seed in 0u64..10_000, d in 2usize..=5, l_off in 0usize..4) {
        let l = 1 + l_off % (d - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_subspace(&mut rng, d, l);
        let sys = plucker_relations(d, l).unwrap();
        prop_assert!(sys.is_pure(&s.plucker));
        prop_assert!(s.plucker[s.pivot].is_one());
        // The coordinates determine the subspace back.
        let back = subspace_from_plucker(d, l, &s.plucker, s.pivot).unwrap();
        prop_assert_eq!(&back.plucker, &s.plucker);
        prop_assert!(s.basis.iter().all(|b| back.contains(b)));
    }

    #[test]
    fn affine_systems_agree_across_pivots(g in matrix(4), seed in 0u64..10_000, sign in prop_oneof![Just(1i32), Just(-1i32)]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_subspace(&mut rng, 4, 2);
        let w = wedge_oracle(&g, 2);
        let sg = if sign > 0 { int(1) } else { int(-1) };
        let direct: Vec<Rational> = w.mul_vec(&s.plucker).into_iter().zip(&s.plucker).map(|(a, b)| a - &sg * b).collect();
        for (pivot, p) in s.plucker.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            // Coordinates rescaled so that the pivot entry is 1.
            let mut x: Vec<Rational> = s.plucker.iter().map(|v| v / p).collect();
            x.remove(pivot);
            prop_assert_eq!(&embed_coordinates(pivot, &x), &s.plucker.iter().map(|v| v / p).collect::<Vec<_>>());
            let got = stabilizer_system(pivot, &g, 2, sign).evaluate(&x);
            let want: Vec<Rational> = direct.iter().map(|v| v / p).collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn exterior_power_matches_minors(g in matrix(4), l in 1usize..=3) {
        prop_assert_eq!(g.exterior_power(l), wedge_oracle(&g, l));
    }
}

#[test]
fn non_pure_tensors_violate_relations() {
    let sys = plucker_relations(4, 2).unwrap();
    assert_eq!(sys.relations.len(), 1);
    let p: Vec<Rational> = [1, 0, 0, 0, 0, 1].iter().map(|&x| int(x)).collect();
    assert!(!sys.is_pure(&p));
    // Lines and hyperplanes: every vector is pure.
    assert!(plucker_relations(4, 1).unwrap().relations.is_empty());
    assert!(plucker_relations(4, 3).unwrap().relations.is_empty());
}

fn sanov() -> Vec<Matrix<Rational>> {
    let a = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(0), int(1)]]);
    let b = Matrix::from_rows(vec![vec![int(1), int(0)], vec![int(2), int(1)]]);
    vec![a.clone(), a.inverse().unwrap(), b.clone(), b.inverse().unwrap()]
}

#[test]
fn free_balls_have_free_sizes() {
    let s = sanov();
    assert!(is_symmetric_set(&s));
    let ball = word_ball(&s, 6, DEFAULT_HEIGHT_BUDGET).unwrap();
    for n in 0..=6 {
        let size: usize = (0..=n).map(|k| ball.sphere_size(k)).sum();
        assert_eq!(size, free_ball_size(2, n));
    }
    for (g, w) in &ball.elements {
        let prod = w.iter().fold(Matrix::identity(2), |acc, &i| &acc * &s[i]);
        assert_eq!(&prod, g);
    }
    assert!(!is_symmetric_set(&s[..1]));
    assert!(matches!(word_ball(&s, 6, 3), Err(StabError::HeightOverflow { .. })));
}

fn block_generators(rng: &mut ChaCha8Rng) -> Vec<Matrix<Rational>> {
    // Upper block triangular with a unimodular top block: g·span(e₁, e₂)
    // = span(e₁, e₂) and ⋀²g fixes e₁∧e₂.
    let mut out = Vec::new();
    while out.len() < 4 {
        let mut m = Matrix::<Rational>::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                if !(i >= 2 && j < 2) {
                    m[(i, j)] = int(rng.random_range(-2..=2));
                }
            }
        }
        if m.minor(&[0, 1], &[0, 1]) != int(1) {
            continue;
        }
        if let Some(inv) = m.inverse() {
            out.push(m);
            out.push(inv);
        }
    }
    out
}

#[test]
fn certificates_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let l0 = SubspaceModel::from_basis(vec![vec![int(1), int(0), int(0), int(0)], vec![int(0), int(1), int(0), int(0)]]).unwrap();
    for _ in 0..5 {
        let s = block_generators(&mut rng);
        let Ok(ball) = word_ball(&s, 2, DEFAULT_HEIGHT_BUDGET) else { continue };
        let cert = certify_common_invariant_subspace(&ball, &l0, 1e-9).unwrap().expect("L₀ itself qualifies");
        assert!(cert.verified);
        // Independent rank check against every element of the near set.
        for (g, _) in &ball.elements {
            if wedge_defect(g, &l0.plucker, 2) <= 1e-9 {
                let mut rows = cert.subspace.basis.clone();
                rows.extend(cert.subspace.basis.iter().map(|b| g.mul_vec(b)));
                assert_eq!(Matrix::from_rows(rows).rank(), 2);
            }
        }
        // Every element preserves span(e₁, e₂), so the near set is the ball.
        assert_eq!(cert.near_set, ball.len());
    }
}

#[test]
fn identity_only_near_set_is_degenerate() {
    let s = sanov();
    let ball = word_ball(&s, 3, DEFAULT_HEIGHT_BUDGET).unwrap();
    let l0 = SubspaceModel::from_basis(vec![vec![int(1), int(1)]]).unwrap();
    let cert = certify_common_invariant_subspace(&ball, &l0, 1e-9).unwrap().unwrap();
    assert!(cert.degenerate && cert.near_set == 1);
    assert!(certify_common_invariant_subspace(&ball, &l0, 0.0).is_err());
}

/// `qⁿ·⋀^ℓ g` integral for every element of shortest length `n`, by
/// breadth-first search over exact matrices.
fn ledger_oracle(s: &[Matrix<Rational>], l: usize, q: u64, n_max: usize) -> (bool, usize) {
    let mut seen = std::collections::HashSet::new();
    let id = Matrix::<Rational>::identity(s[0].rows());
    seen.insert(id.clone());
    let mut layer = vec![id];
    let mut qn = Rational::one();
    let mut ok = true;
    for _ in 1..=n_max {
        qn *= int(q as i64);
        let mut next = Vec::new();
        for g in &layer {
            for h in s {
                let gh = g * h;
                if seen.insert(gh.clone()) {
                    ok &= wedge_oracle(&gh, l).entries().iter().all(|x| (x * &qn).is_integer());
                    next.push(gh);
                }
            }
        }
        layer = next;
    }
    (ok, seen.len())
}

#[test]
fn ledgers_are_sound() {
    let rot = |i: usize, j: usize, c: Rational, s: Rational| {
        let mut m = Matrix::<Rational>::identity(4);
        m[(i, i)] = c.clone();
        m[(j, j)] = c;
        m[(i, j)] = -s.clone();
        m[(j, i)] = s;
        m
    };
    let gens = [rot(0, 1, rat(3, 5), rat(4, 5)), rot(1, 2, rat(5, 13), rat(12, 13))];
    let mut s: Vec<Matrix<Rational>> = gens.to_vec();
    s.extend(gens.iter().map(|g| g.inverse().unwrap()));
    for l in [1, 2] {
        let ledger = height_ledger(&s, l, 4).unwrap();
        assert!(ledger.integral() && ledger.within_bound(), "ℓ = {l}");
        assert_eq!(ledger.rows.len(), 5);
        let (ok, size) = ledger_oracle(&s, l, ledger.q, 4);
        assert!(ok);
        assert_eq!(ledger.rows.iter().map(|r| r.elements).sum::<usize>(), size);
        for r in &ledger.rows {
            assert!(r.log_size <= r.log_bound + 1e-9);
        }
    }
    // Integer generators need no clearing of denominators.
    let z = height_ledger(&sanov(), 1, 4).unwrap();
    assert_eq!(z.integrality_factor, 1);
    assert!(z.integral());
}
