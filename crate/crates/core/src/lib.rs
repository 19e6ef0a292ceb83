//! Computational companion for spectral gaps of random walks on compact
//! simple Lie groups.
//!
//! The crate is organised by topic:
//!
//! * [`rootsys`], [`faces`], [`wedge`] — exact root-system and Lie-algebra
//!   combinatorics (highest roots, chamber faces, wedge subrepresentations).
//! * [`su2harm`] — Wigner matrices, Fourier coefficients and spectral
//!   radii on SU(2) / SO(3).
//! * [`walkdio`] — random walks with exact algebraic entries and their
//!   distance to closed subgroups.
//! * [`multiscale`] — covering numbers, dyadic level sets, energy and
//!   L² flattening at scale δ.
//! * [`proxdecay`] — matrix products over ℝ and ℚ_p.
//! * [`stabcert`] — word balls, Plücker relations and exact certification
//!   of common invariant subspaces.

pub mod exact;
pub mod faces;
pub mod linalg;
pub mod multiscale;
pub mod proxdecay;
pub mod rootsys;
pub mod stabcert;
pub mod stats;
pub mod su2harm;
pub mod walkdio;
pub mod wedge;

/// Machine-readable identification of an error: owning module plus a
/// stable code string.
pub trait Diagnostic {
    fn module(&self) -> &'static str;
    fn code(&self) -> &'static str;
}

pub use exact::{AlgebraicScalar, Rational};
pub use linalg::Matrix;
