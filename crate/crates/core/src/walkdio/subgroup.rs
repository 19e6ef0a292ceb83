//! Closed subgroups of SU(2) / SO(3) used as test sets: one-parameter
//! tori, their normalizers and finite subgroups.
//!
//! Distances use the bi-invariant metric of [`crate::su2harm::distance`]
//! (twice the angle on S³). Tori and normalizers are unions of great
//! circles on S³, so both groups share the closed-form formulas.

use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};
use num::traits::Zero;

use super::measure::{ExactElement, MeasureSpec};
use super::WalkError;
use crate::exact::AlgebraicScalar;
use crate::su2harm::{GroupKind, UnitQuaternion};

#[derive(Debug, Clone, PartialEq)]
pub enum SubgroupModel {
    /// `{exp(t·u)}`.
    Torus { axis: [f64; 3], exact_axis: Option<[AlgebraicScalar; 3]> },
    /// Torus together with the rotations by π about axes ⊥ u.
    Normalizer { axis: [f64; 3], exact_axis: Option<[AlgebraicScalar; 3]> },
    /// Finite subgroup. On SU(2) the list is the full (binary) group; on
    /// SO(3) one quaternion per rotation.
    Finite { label: String, kind: GroupKind, elements: Vec<UnitQuaternion>, exact: Option<Vec<ExactElement>> },
}

fn normalize(u: [f64; 3]) -> [f64; 3] {
    let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    [u[0] / n, u[1] / n, u[2] / n]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// `(cos φ₁, sin φ₁)` where φ₁ is the S³ angle from `g` to the circle
/// spanned by `1, u`.
fn torus_cs(g: &UnitQuaternion, u: &[f64; 3]) -> (f64, f64) {
    let v = g.vector();
    let along = dot3(&v, u);
    let cr = cross3(&v, u);
    let across = dot3(&cr, &cr).sqrt();
    ((g.a * g.a + along * along).sqrt(), across)
}

impl SubgroupModel {
    pub fn torus(axis: [f64; 3]) -> Self {
        SubgroupModel::Torus { axis: normalize(axis), exact_axis: None }
    }

    pub fn normalizer(axis: [f64; 3]) -> Self {
        SubgroupModel::Normalizer { axis: normalize(axis), exact_axis: None }
    }

    /// Torus (or normalizer) on an exact axis; the float axis is derived.
    pub fn exact_torus(axis: [AlgebraicScalar; 3], normalizer: bool) -> Self {
        let f = normalize([axis[0].to_f64(), axis[1].to_f64(), axis[2].to_f64()]);
        if normalizer {
            SubgroupModel::Normalizer { axis: f, exact_axis: Some(axis) }
        } else {
            SubgroupModel::Torus { axis: f, exact_axis: Some(axis) }
        }
    }

    pub fn trivial(kind: GroupKind) -> Self {
        let mut elements = vec![UnitQuaternion::IDENTITY];
        if kind == GroupKind::SU2 {
            elements.push(UnitQuaternion::IDENTITY.neg());
        }
        let mut exact = vec![ExactElement::identity(kind)];
        if let ExactElement::SU2([a, b, c, d]) = &exact[0] {
            exact.push(ExactElement::SU2([-a.clone(), b.clone(), c.clone(), d.clone()]));
        }
        SubgroupModel::Finite { label: "trivial".into(), kind, elements, exact: Some(exact) }
    }

    /// Rotations by multiples of `2π/n` about `axis` (binary cyclic group
    /// of order `2n` on SU(2)).
    pub fn cyclic(kind: GroupKind, axis: [f64; 3], n: u32) -> Self {
        let u = normalize(axis);
        let count = match kind {
            GroupKind::SO3 => n,
            GroupKind::SU2 => 2 * n,
        };
        let elements = (0..count)
            .map(|k| {
                let t = PI * k as f64 / n as f64;
                UnitQuaternion::new(t.cos(), t.sin() * u[0], t.sin() * u[1], t.sin() * u[2])
            })
            .collect();
        SubgroupModel::Finite { label: format!("C{n}{}", axis_label(&u)), kind, elements, exact: None }
    }

    /// Rotation group of the tetrahedron (order 12 in SO(3)).
    pub fn tetrahedral(kind: GroupKind) -> Self {
        let gens = [UnitQuaternion::new(0.5, 0.5, 0.5, 0.5), UnitQuaternion::new(0.0, 1.0, 0.0, 0.0)];
        Self::closure("T", kind, &gens)
    }

    /// Rotation group of the cube (order 24 in SO(3)).
    pub fn octahedral(kind: GroupKind) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let gens = [UnitQuaternion::new(0.5, 0.5, 0.5, 0.5), UnitQuaternion::new(h, h, 0.0, 0.0)];
        Self::closure("O", kind, &gens)
    }

    /// Rotation group of the icosahedron (order 60 in SO(3)).
    pub fn icosahedral(kind: GroupKind) -> Self {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let gens = [UnitQuaternion::new(phi / 2.0, 0.5 / phi, 0.5, 0.0), UnitQuaternion::new(0.0, 1.0, 0.0, 0.0)];
        Self::closure("I", kind, &gens)
    }

    fn closure(label: &str, kind: GroupKind, gens: &[UnitQuaternion]) -> Self {
        let mut elems = vec![UnitQuaternion::IDENTITY];
        let mut frontier = vec![UnitQuaternion::IDENTITY];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.mul(g);
                if !elems.iter().any(|e| e.dot(&y) > 1.0 - 1e-9) {
                    elems.push(y);
                    frontier.push(y);
                }
            }
        }
        if kind == GroupKind::SO3 {
            let mut reps: Vec<UnitQuaternion> = Vec::new();
            for e in elems {
                if !reps.iter().any(|r| r.dot(&e).abs() > 1.0 - 1e-9) {
                    reps.push(e.canonical_sign());
                }
            }
            elems = reps;
        }
        SubgroupModel::Finite { label: label.into(), kind, elements: elems, exact: None }
    }

    pub fn label(&self) -> String {
        match self {
            SubgroupModel::Torus { axis, .. } => format!("torus{}", axis_label(axis)),
            SubgroupModel::Normalizer { axis, .. } => format!("normalizer{}", axis_label(axis)),
            SubgroupModel::Finite { label, .. } => label.clone(),
        }
    }

    /// Number of elements of a finite model in its own group.
    pub fn order(&self) -> Option<usize> {
        match self {
            SubgroupModel::Finite { elements, .. } => Some(elements.len()),
            _ => None,
        }
    }

    /// `kHk⁻¹` (float data only).
    pub fn conjugate(&self, k: &UnitQuaternion) -> Self {
        let rot = |u: &[f64; 3]| {
            let q = UnitQuaternion { a: 0.0, b: u[0], c: u[1], d: u[2] };
            normalize(k.mul(&q).mul(&k.inverse()).vector())
        };
        match self {
            SubgroupModel::Torus { axis, .. } => SubgroupModel::Torus { axis: rot(axis), exact_axis: None },
            SubgroupModel::Normalizer { axis, .. } => SubgroupModel::Normalizer { axis: rot(axis), exact_axis: None },
            SubgroupModel::Finite { label, kind, elements, .. } => SubgroupModel::Finite {
                label: format!("{label}^k"),
                kind: *kind,
                elements: elements.iter().map(|e| k.mul(e).mul(&k.inverse())).collect(),
                exact: None,
            },
        }
    }

    /// `d(g, H) ≤ δ` without transcendental calls; agrees with
    /// [`distance_to_subgroup`] up to rounding.
    pub fn within(&self, g: &UnitQuaternion, delta: f64) -> bool {
        let c = (delta / 2.0).cos();
        match self {
            SubgroupModel::Torus { axis, .. } => torus_cs(g, axis).0 >= c,
            SubgroupModel::Normalizer { axis, .. } => {
                let (c1, s1) = torus_cs(g, axis);
                c1.max(s1) >= c
            }
            SubgroupModel::Finite { kind, elements, .. } => match kind {
                GroupKind::SO3 => elements.iter().any(|f| g.dot(f).abs() >= c),
                GroupKind::SU2 => elements.iter().any(|f| g.dot(f) >= c),
            },
        }
    }

    /// Exact membership; requires exact data on both sides.
    pub fn contains_exact(&self, g: &ExactElement) -> Result<bool, WalkError> {
        match self {
            SubgroupModel::Torus { exact_axis, .. } | SubgroupModel::Normalizer { exact_axis, .. } => {
                let u = exact_axis.as_ref().ok_or(WalkError::UndecidableMembership)?;
                let normalizer = matches!(self, SubgroupModel::Normalizer { .. });
                Ok(match g {
                    ExactElement::SO3(m) => {
                        let ru: Vec<AlgebraicScalar> = (0..3)
                            .map(|i| (0..3).fold(AlgebraicScalar::zero(), |acc, j| acc + m[(i, j)].clone() * u[j].clone()))
                            .collect();
                        let fixed = (0..3).all(|i| ru[i] == u[i]);
                        fixed || (normalizer && (0..3).all(|i| ru[i] == -u[i].clone()))
                    }
                    ExactElement::SU2([a, b, c, d]) => {
                        let v = [b.clone(), c.clone(), d.clone()];
                        let cross = [
                            v[1].clone() * u[2].clone() - v[2].clone() * u[1].clone(),
                            v[2].clone() * u[0].clone() - v[0].clone() * u[2].clone(),
                            v[0].clone() * u[1].clone() - v[1].clone() * u[0].clone(),
                        ];
                        let on_torus = cross.iter().all(Zero::is_zero);
                        let dot = (0..3).fold(AlgebraicScalar::zero(), |acc, i| acc + v[i].clone() * u[i].clone());
                        on_torus || (normalizer && a.is_zero() && dot.is_zero())
                    }
                })
            }
            SubgroupModel::Finite { exact, .. } => {
                let els = exact.as_ref().ok_or(WalkError::UndecidableMembership)?;
                Ok(els.contains(g))
            }
        }
    }
}

fn axis_label(u: &[f64; 3]) -> String {
    format!("[{:.3},{:.3},{:.3}]", u[0], u[1], u[2])
}

/// Distance from `g` to `H` in the bi-invariant metric.
pub fn distance_to_subgroup(g: &UnitQuaternion, h: &SubgroupModel) -> f64 {
    match h {
        SubgroupModel::Torus { axis, .. } => {
            let (c, s) = torus_cs(g, axis);
            2.0 * s.atan2(c)
        }
        SubgroupModel::Normalizer { axis, .. } => {
            let (c, s) = torus_cs(g, axis);
            2.0 * s.atan2(c).min(c.atan2(s))
        }
        SubgroupModel::Finite { kind, elements, .. } => {
            let q = [g.a, g.b, g.c, g.d];
            let chord = |f: &UnitQuaternion, sign: f64| {
                let p = [f.a * sign, f.b * sign, f.c * sign, f.d * sign];
                (0..4).map(|i| (q[i] - p[i]).powi(2)).sum::<f64>().sqrt()
            };
            let best = elements
                .iter()
                .map(|f| match kind {
                    GroupKind::SO3 => chord(f, 1.0).min(chord(f, -1.0)),
                    GroupKind::SU2 => chord(f, 1.0),
                })
                .fold(f64::INFINITY, f64::min);
            4.0 * (best / 2.0).min(1.0).asin()
        }
    }
}

/// Axial k-means on rotation axes (points identified up to sign).
/// Deterministic farthest-point initialisation.
pub fn axial_kmeans(axes: &[[f64; 3]], k: usize, iterations: usize) -> Vec<[f64; 3]> {
    if axes.is_empty() || k == 0 {
        return Vec::new();
    }
    let mut centers = vec![axes[0]];
    while centers.len() < k.min(axes.len()) {
        let far = axes
            .iter()
            .map(|x| centers.iter().map(|c| dot3(x, c).abs()).fold(0.0, f64::max))
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
            .unwrap();
        centers.push(axes[far]);
    }
    for _ in 0..iterations {
        let mut scatter = vec![Matrix3::<f64>::zeros(); centers.len()];
        for x in axes {
            let best = (0..centers.len()).max_by(|&a, &b| dot3(x, &centers[a]).abs().total_cmp(&dot3(x, &centers[b]).abs())).unwrap();
            let v = nalgebra::Vector3::from(*x);
            scatter[best] += v * v.transpose();
        }
        let next: Vec<[f64; 3]> = scatter
            .into_iter()
            .zip(&centers)
            .map(|(s, c)| {
                if s.norm() == 0.0 {
                    return *c;
                }
                let eig = SymmetricEigen::new(s);
                let i = eig.eigenvalues.imax();
                let v = eig.eigenvectors.column(i);
                let mut u = [v[0], v[1], v[2]];
                if dot3(&u, c) < 0.0 {
                    u = [-u[0], -u[1], -u[2]];
                }
                normalize(u)
            })
            .collect();
        let moved = next.iter().zip(&centers).map(|(a, b)| 1.0 - dot3(a, b).abs()).fold(0.0, f64::max);
        centers = next;
        if moved < 1e-12 {
            break;
        }
    }
    centers
}

/// Tori and normalizers on the atom axes and on `k` axial clusters of the
/// pilot samples, cyclic groups on atom axes, the trivial group and the
/// polyhedral groups.
pub fn standard_family(
    mu: &MeasureSpec,
    pilot: &[UnitQuaternion],
    k: usize,
    cyclic_orders: &[u32],
    polyhedral: bool,
) -> Vec<SubgroupModel> {
    let kind = mu.group;
    let mut family = vec![SubgroupModel::trivial(kind)];
    let mut atom_axes: Vec<([f64; 3], Option<[AlgebraicScalar; 3]>)> = Vec::new();
    for a in &mu.atoms {
        let Some(ex) = a.element.axis() else { continue };
        let q = a.element.to_quaternion();
        let v = q.vector();
        let f = if dot3(&v, &v) > 1e-24 {
            normalize(v)
        } else {
            normalize([ex[0].to_f64(), ex[1].to_f64(), ex[2].to_f64()])
        };
        if !atom_axes.iter().any(|(u, _)| dot3(u, &f).abs() > 1.0 - 1e-12) {
            atom_axes.push((f, Some(ex)));
        }
    }
    for (u, ex) in &atom_axes {
        family.push(SubgroupModel::Torus { axis: *u, exact_axis: ex.clone() });
        family.push(SubgroupModel::Normalizer { axis: *u, exact_axis: ex.clone() });
    }
    let sample_axes: Vec<[f64; 3]> = pilot
        .iter()
        .filter_map(|q| {
            let v = q.vector();
            (dot3(&v, &v) > 1e-18).then(|| normalize(v))
        })
        .collect();
    for u in axial_kmeans(&sample_axes, k, 50) {
        family.push(SubgroupModel::torus(u));
        family.push(SubgroupModel::normalizer(u));
    }
    for (u, _) in &atom_axes {
        for &n in cyclic_orders {
            family.push(SubgroupModel::cyclic(kind, *u, n));
        }
    }
    if polyhedral {
        family.push(SubgroupModel::tetrahedral(kind));
        family.push(SubgroupModel::octahedral(kind));
        family.push(SubgroupModel::icosahedral(kind));
    }
    family
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polyhedral_orders() {
        assert_eq!(SubgroupModel::tetrahedral(GroupKind::SO3).order(), Some(12));
        assert_eq!(SubgroupModel::octahedral(GroupKind::SO3).order(), Some(24));
        assert_eq!(SubgroupModel::icosahedral(GroupKind::SO3).order(), Some(60));
        assert_eq!(SubgroupModel::icosahedral(GroupKind::SU2).order(), Some(120));
    }

    #[test]
    fn torus_members_have_zero_distance() {
        let h = SubgroupModel::torus([0.0, 0.0, 1.0]);
        let g = UnitQuaternion::from_axis_angle([0.0, 0.0, 1.0], 1.3);
        assert!(distance_to_subgroup(&g, &h) < 1e-12);
        let n = SubgroupModel::normalizer([0.0, 0.0, 1.0]);
        let flip = UnitQuaternion::from_axis_angle([1.0, 0.0, 0.0], PI);
        assert!(distance_to_subgroup(&flip, &n) < 1e-12);
        assert!((distance_to_subgroup(&flip, &h) - PI).abs() < 1e-12);
    }

    #[test]
    fn kmeans_recovers_two_axes() {
        let mut axes = Vec::new();
        for i in 0..20 {
            let e = 0.01 * (i as f64 - 10.0) / 10.0;
            axes.push(normalize([1.0, e, 0.0]));
            axes.push(normalize([-e, 0.0, -1.0]));
        }
        let c = axial_kmeans(&axes, 2, 20);
        assert!(c.iter().any(|u| u[0].abs() > 0.999));
        assert!(c.iter().any(|u| u[2].abs() > 0.999));
    }
}
