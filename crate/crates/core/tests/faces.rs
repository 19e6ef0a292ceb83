use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra_core::exact::{int, rat, Rational};
use spectra_core::faces::*;
use spectra_core::rootsys::*;

fn rs(f: Family, r: usize) -> RootSystem {
    build_root_system(RootSystemSpec::new(f, r)).unwrap()
}

#[test]
fn face_depends_only_on_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for spec in RootSystemSpec::all_up_to(6) {
        let r = build_root_system(spec).unwrap();
        let faces = enumerate_faces(&r);
        for _ in 0..1000 {
            let face = &faces[rng.random_range(0..faces.len())];
            let mut fw = vec![Rational::zero(); r.rank()];
            for &i in &face.support {
                fw[i] = rat(rng.random_range(1..50), rng.random_range(1..20));
            }
            let x = r.weight_from_fw(&fw).unwrap();
            assert_eq!(face_of(&r, &x).unwrap(), face_of(&r, &face.canonical_x).unwrap(), "{spec} {:?}", face.support);
        }
    }
}

#[test]
fn face_invariants_rank_six() {
    for spec in RootSystemSpec::all_up_to(6) {
        let r = build_root_system(spec).unwrap();
        for face in enumerate_faces(&r) {
            let d = face_of(&r, &face.canonical_x).unwrap();
            assert!(d.extremal_roots.contains(&r.highest_root_index), "{spec}");
            // Regular X gives m = 1; the converse fails (A3, ω₁ + ω₃).
            if face.support.len() == r.rank() {
                assert_eq!(d.m, 1, "{spec}");
            }
            assert_eq!(d.m, d.extremal_roots.len());
            // ω_X is dominant integral.
            assert!(d.omega_x.fw_coords.iter().all(|c| c.is_integer() && !c.is_negative()), "{spec}");
            // ... and equals the sum of the extremal roots.
            let mut sum = vec![Rational::zero(); r.ambient_dim];
            for &i in &d.extremal_roots {
                for (s, x) in sum.iter_mut().zip(&r.all_roots[i]) {
                    *s += x;
                }
            }
            assert_eq!(sum, d.omega_x.coords);
        }
    }
}

#[test]
fn lemma_holds_under_hypothesis() {
    for spec in RootSystemSpec::all_up_to(6) {
        let r = build_root_system(spec).unwrap();
        for (face, _, v) in verify_all_faces(&r).unwrap() {
            if v.hypothesis_met {
                assert!(v.holds, "{spec} {:?}", face.support);
                assert_eq!(v.intersection, vec![r.highest_root_index]);
            }
        }
    }
}

#[test]
fn excluded_faces_in_type_a() {
    // The hypothesis only excludes X on the rays of ω₁ and ω_ℓ.
    for l in 2..=6 {
        let r = rs(Family::A, l);
        let excluded: Vec<Vec<usize>> =
            verify_all_faces(&r).unwrap().into_iter().filter(|(_, _, v)| !v.hypothesis_met).map(|(f, _, _)| f.support).collect();
        assert_eq!(excluded, vec![vec![0], vec![l - 1]]);
    }
}

#[test]
fn single_face_entry_point_agrees() {
    let r = rs(Family::F, 4);
    let all = verify_all_faces(&r).unwrap();
    for (face, _, v) in all.iter().step_by(3) {
        assert_eq!(&verify_face_lemma(&r, face).unwrap(), v);
    }
}

#[test]
fn non_regular_face_with_single_extremal_root() {
    let r = rs(Family::A, 3);
    let x = r.weight_from_fw_ints(&[1, 0, 1]).unwrap();
    assert_eq!(face_of(&r, &x).unwrap().m, 1);
}

#[test]
fn bad_vectors_rejected() {
    let r = rs(Family::B, 3);
    let zero = r.weight_from_fw_ints(&[0, 0, 0]).unwrap();
    assert_eq!(face_of(&r, &zero), Err(FacesError::ZeroVector));
    let outside = r.weight_from_fw(&[int(1), int(-1), int(0)]).unwrap();
    assert_eq!(face_of(&r, &outside), Err(FacesError::NotInChamber));
}
