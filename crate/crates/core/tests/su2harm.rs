use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectra_core::su2harm::*;

fn quat() -> impl Strategy<Value = UnitQuaternion> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
        .prop_map(|(a, b, c, d)| UnitQuaternion::new(a, b, c, d))
}

fn measure(group: GroupKind) -> impl Strategy<Value = FloatMeasure> {
    proptest::collection::vec((quat(), 0.01f64..1.0), 1..5).prop_map(move |atoms| {
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        FloatMeasure::new(group, atoms.into_iter().map(|(g, w)| (g, w / total)).collect()).unwrap()
    })
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fourier_coefficients_are_contractions(mu in measure(GroupKind::SU2), tj in 0u32..13) {
        let c = fourier_coefficient(&mu, SpinLevel(tj)).unwrap();
        prop_assert!(operator_norm(&c) <= 1.0 + 1e-12);
    }

    #[test]
    fn convolution_multiplies_coefficients(mu in measure(GroupKind::SU2), nu in measure(GroupKind::SU2), tj in 0u32..9) {
        let j = SpinLevel(tj);
        let lhs = fourier_coefficient(&mu.convolve(&nu), j).unwrap();
        let rhs = fourier_coefficient(&mu, j).unwrap() * fourier_coefficient(&nu, j).unwrap();
        prop_assert!(max_diff(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn gelfand_sequence_is_submultiplicative(mu in measure(GroupKind::SU2), n in 1u64..20) {
        let one = spectral_radius_estimate(&mu, SpinLevel(6), n).unwrap();
        let two = spectral_radius_estimate(&mu, SpinLevel(6), 2 * n).unwrap();
        for (a, b) in one.per_j.iter().zip(&two.per_j) {
            prop_assert!(b.gelfand <= a.gelfand + 1e-6, "2j = {}", a.two_j);
        }
    }

    #[test]
    fn eigenvalue_radius_below_gelfand(mu in measure(GroupKind::SU2), n in 1u64..30) {
        let r = spectral_radius_estimate(&mu, SpinLevel(8), n).unwrap();
        for row in &r.per_j {
            prop_assert!(row.eigen.unwrap() <= row.gelfand + 1e-9);
        }
    }

    #[test]
    fn parseval_small_bandwidth(seed in 0u64..1000, tj in 0u32..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FourierSpectrum::random(&mut rng, SpinLevel(tj));
        prop_assert!(parseval_check(&f).unwrap().relative_error < 1e-10);
    }

    #[test]
    fn wigner_is_a_homomorphism(g in quat(), h in quat(), tj in 0u32..11) {
        prop_assert!(homomorphism_defect(&g, &h, SpinLevel(tj)) < 1e-10);
    }
}

#[test]
fn symmetric_measures_have_hermitian_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let gens: Vec<_> = (0..3).map(|_| UnitQuaternion::random(&mut rng)).collect();
    let mu = FloatMeasure::symmetric(GroupKind::SU2, &gens);
    assert!(mu.is_symmetric(1e-12));
    for tj in 0..8 {
        let c = fourier_coefficient(&mu, SpinLevel(tj)).unwrap();
        assert!(max_diff(&c, &c.adjoint()) < 1e-13);
    }
}

#[test]
fn characters_are_orthonormal() {
    // Independent of the Fourier code: Schur orthogonality on the grid.
    let grid = haar_quadrature(12);
    for a in 0..=6 {
        for b in 0..=6 {
            let s: f64 = grid.iter().map(|(g, w)| character(g, SpinLevel(a)) * character(g, SpinLevel(b)) * w).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((s - want).abs() < 1e-12, "{a} {b}: {s}");
        }
    }
}

#[test]
fn haar_coefficients_vanish() {
    let haar = haar_measure(16);
    for tj in 1..=8 {
        assert!(operator_norm(&fourier_coefficient(&haar, SpinLevel(tj)).unwrap()) < 1e-12);
    }
}

#[test]
fn smoothing_quadrature_matches_closed_form() {
    for delta in [0.05, 0.1, 0.3, 1.0, 2.5] {
        for tj in [1, 2, 7, 20, 51] {
            let j = SpinLevel(tj);
            let b = smoothing_spectrum(delta, j).unwrap();
            let s = b.block[(0, 0)].re;
            assert!((s - smoothing_scalar_closed_form(delta, j)).abs() < 1e-9, "{delta} {tj}");
            assert!((b.distance_to_identity - (1.0 - s).abs()).abs() < 1e-15);
        }
    }
}

#[test]
fn smoothing_threshold_scales_like_inverse_delta() {
    let fit = fit_smoothing_threshold(&[0.2, 0.1, 0.05, 0.025]).unwrap();
    assert!(fit.max_relative_deviation < 0.1, "{fit:?}");
    let a = smoothing_threshold(0.1, true).unwrap();
    assert!(a.is_integer());
    assert!(smoothing_spectrum(0.1, SpinLevel(a.0 + 2)).unwrap().distance_to_identity > 0.5);
}

#[test]
fn half_integers_rejected_on_so3() {
    let mu = FloatMeasure::dirac(GroupKind::SO3);
    assert_eq!(fourier_coefficient(&mu, SpinLevel(3)), Err(HarmError::HalfIntegerOnSO3 { two_j: 3 }));
    assert!(smoothing_spectrum(4.0, SpinLevel(2)).is_err());
    assert_eq!(spectral_radius_estimate(&mu, SpinLevel(4), 0).unwrap_err(), HarmError::ZeroPower);
}

#[test]
fn so3_rotation_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let g = UnitQuaternion::random(&mut rng);
        let back = UnitQuaternion::from_rotation(&g.to_rotation());
        assert!(distance(GroupKind::SO3, &g, &back) < 1e-7);
    }
}
