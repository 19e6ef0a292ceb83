//! Faces of a root system cut out by chamber vectors, and the exhaustive
//! check that the stabiliser of the highest root pins it down inside
//! every admissible face.

use thiserror::Error;

use num::traits::{Signed, Zero};

use crate::exact::{int, Rational};
use crate::rootsys::{classify_highest_root, HighestRootClass, RootSysError, RootSystem, Weight, DEFAULT_WEYL_CAP};
use crate::Diagnostic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FacesError {
    #[error("X must be nonzero")]
    ZeroVector,
    #[error("X is not in the closed Weyl chamber")]
    NotInChamber,
    #[error(transparent)]
    RootSys(#[from] RootSysError),
}

impl Diagnostic for FacesError {
    fn module(&self) -> &'static str {
        match self {
            FacesError::RootSys(e) => e.module(),
            _ => "faces",
        }
    }
    fn code(&self) -> &'static str {
        match self {
            FacesError::ZeroVector => "ZeroVector",
            FacesError::NotInChamber => "NotInChamber",
            FacesError::RootSys(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberFace {
    /// Sorted simple-root indices.
    pub support: Vec<usize>,
    /// `Σ_{i ∈ support} ω_i`.
    pub canonical_x: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceData {
    /// Root indices maximising `<α, X>`, ascending.
    pub extremal_roots: Vec<usize>,
    pub m: usize,
    pub omega_x: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// `⋂_{w ∈ W_α̃} w·𝓔_X`, as ascending root indices.
    pub intersection: Vec<usize>,
    pub hypothesis_met: bool,
}

/// Extremal roots of `x`, which must be a nonzero chamber vector.
pub fn face_of(rs: &RootSystem, x: &Weight) -> Result<FaceData, FacesError> {
    if x.is_zero() {
        return Err(FacesError::ZeroVector);
    }
    if x.fw_coords.iter().any(|c| c.is_negative()) {
        return Err(FacesError::NotInChamber);
    }
    let pairings: Vec<Rational> = rs.all_roots.iter().map(|a| rs.inner(a, &x.coords)).collect();
    let max = pairings.iter().max().expect("nonempty root system").clone();
    let extremal_roots: Vec<usize> = (0..rs.num_roots()).filter(|&i| pairings[i] == max).collect();
    let mut sum = vec![Rational::zero(); rs.ambient_dim];
    for &i in &extremal_roots {
        for (s, c) in sum.iter_mut().zip(&rs.all_roots[i]) {
            *s += c;
        }
    }
    let omega_x = rs.weight_from_coords(&sum)?;
    Ok(FaceData { m: extremal_roots.len(), extremal_roots, omega_x })
}

/// One canonical representative per nonempty support, ordered by the
/// support bitmask.
pub fn enumerate_faces(rs: &RootSystem) -> Vec<ChamberFace> {
    let r = rs.rank();
    (1u64..(1u64 << r))
        .map(|mask| {
            let support: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
            let fw: Vec<Rational> = (0..r).map(|i| int((mask >> i & 1) as i64)).collect();
            ChamberFace { support, canonical_x: rs.weight_from_fw(&fw).expect("rank-length") }
        })
        .collect()
}

/// Exact collinearity via all 2×2 minors of the coordinate pair.
pub fn collinear(x: &[Rational], y: &[Rational]) -> bool {
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if &x[i] * &y[j] != &x[j] * &y[i] {
                return false;
            }
        }
    }
    true
}

/// Precomputed stabiliser of `α̃` as root permutations, shared across
/// faces of one root system.
pub struct FaceVerifier<'a> {
    rs: &'a RootSystem,
    class: HighestRootClass,
    stabilizer_perms: Vec<Vec<usize>>,
}

impl<'a> FaceVerifier<'a> {
    pub fn new(rs: &'a RootSystem) -> Result<Self, FacesError> {
        Self::with_cap(rs, DEFAULT_WEYL_CAP)
    }

    pub fn with_cap(rs: &'a RootSystem, cap: u128) -> Result<Self, FacesError> {
        let class = classify_highest_root(rs)?;
        let words = rs.stabilizer_words(&rs.highest_root_weight().fw_coords, cap)?;
        let stabilizer_perms = words.iter().map(|w| rs.word_root_permutation(w)).collect();
        Ok(FaceVerifier { rs, class, stabilizer_perms })
    }

    pub fn stabilizer_order(&self) -> usize {
        self.stabilizer_perms.len()
    }

    pub fn class(&self) -> &HighestRootClass {
        &self.class
    }

    pub fn hypothesis_met(&self, x: &Weight) -> bool {
        match self.class {
            HighestRootClass::SumDual { omega, omega_star } if omega != omega_star => {
                let w = &self.rs.fundamental_weight(omega).fw_coords;
                let ws = &self.rs.fundamental_weight(omega_star).fw_coords;
                !(collinear(&x.fw_coords, w) || collinear(&x.fw_coords, ws))
            }
            _ => true,
        }
    }

    pub fn verify(&self, face: &ChamberFace) -> Result<(FaceData, Verdict), FacesError> {
        let data = face_of(self.rs, &face.canonical_x)?;
        let mut member = vec![false; self.rs.num_roots()];
        for &i in &data.extremal_roots {
            member[i] = true;
        }
        // α ∈ ⋂ w𝓔 ⟺ w⁻¹α ∈ 𝓔 for all w; the stabiliser is a group, so
        // ranging over w instead of w⁻¹ gives the same set.
        let intersection: Vec<usize> = (0..self.rs.num_roots())
            .filter(|&a| member[a] && self.stabilizer_perms.iter().all(|p| member[p[a]]))
            .collect();
        let holds = intersection == [self.rs.highest_root_index];
        let hypothesis_met = self.hypothesis_met(&face.canonical_x);
        Ok((data, Verdict { holds, intersection, hypothesis_met }))
    }
}

pub fn verify_face_lemma(rs: &RootSystem, face: &ChamberFace) -> Result<Verdict, FacesError> {
    Ok(FaceVerifier::new(rs)?.verify(face)?.1)
}

/// Verifies every face of `rs`.
pub fn verify_all_faces(rs: &RootSystem) -> Result<Vec<(ChamberFace, FaceData, Verdict)>, FacesError> {
    let v = FaceVerifier::new(rs)?;
    enumerate_faces(rs)
        .into_iter()
        .map(|f| {
            let (d, verdict) = v.verify(&f)?;
            Ok((f, d, verdict))
        })
        .collect()
}
