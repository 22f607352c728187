//! Exact-arithmetic workbench for quadric bundles over the projective plane.
//!
//! A quadric bundle is presented as a graded symmetric matrix of homogeneous
//! polynomials, the map `q: G -> G^v(delta)` for a split bundle
//! `G = ⊕ O(a_i)` on P^2. The crate computes discriminant curves, classifies
//! the cokernel sheaf (trivial twist, half-period, even/odd theta), performs
//! quadric reductions and hyperbolic extensions, extracts Clifford residue
//! representatives along the discriminant, and probabilistically certifies
//! equality of the induced square classes.
//!
//! Everything is exact: coefficients live in Q (arbitrary precision) or in
//! F_p for an odd word-size prime. The core is generic over the scalar
//! field through the [`field::Field`] trait; `Poly<Rationals>` and
//! `Poly<PrimeField>` are the two instantiations that exist in practice.

pub mod brauer;
pub mod classify;
pub mod dominance;
pub mod error;
pub mod field;
pub mod fpscan;
pub mod gallery;
pub mod gcd;
pub mod graded;
pub mod linalg;
pub mod matrix;
pub mod modred;
pub mod parse;
pub mod poly;
pub mod reduction;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use poly::{Poly, VarSet};

/// Polynomial over the rationals.
pub type PolyQ = Poly<Rationals>;
/// Polynomial over a prime field.
pub type PolyFp = Poly<PrimeField>;
/// Graded symmetric matrix over the rationals.
pub type QuadricQ = graded::GradedSymMatrix<Rationals>;
/// Graded symmetric matrix over a prime field.
pub type QuadricFp = graded::GradedSymMatrix<PrimeField>;
