//! Desk-scale numerical toolkit for solid constrained vector optimization.
//!
//! The library revolves around generalized constraint systems `0 ∈ H(x, p)`
//! with a parameter `p`, and provides:
//!
//! * [`cones`] — polyhedral convex cones with dual H-rep/V-rep descriptions,
//!   membership, interior, duality and weak-minimality queries;
//! * [`scalarize`] — the smallest-translation scalarizing functional
//!   `s_e(z) = inf { λ : λe ∈ z + K }` for a solid cone `K`, together with
//!   its subdifferential and Lipschitz constant;
//! * [`setmaps`] — set-valued constraint maps `H : X × P ⇉ Y` in three
//!   representations and the four distances that regularity estimates relate;
//! * [`regularity`] — certificates for linear openness, metric and graphical
//!   regularity, coderivative rates and the epigraphical openness radius;
//! * [`penalty`] — exact (Clarke-style) penalization of constrained scalar
//!   problems and a derivative-free local minimizer;
//! * [`vecopt`] — vector-problem drivers: weak-solution checks, scalarized
//!   penalized solves and multiplier certificates via LP feasibility;
//! * [`fixture`] — the plain-text fixture format shared with the CLI.
//!
//! All core math is generic over the scalar type through [`Scalar`]; the
//! aliases at the crate root pin the common `f64` instantiations.
//!
//! Norm convention: Euclidean within a single space, sum of component norms
//! on products. Every distance in the crate follows this rule.

pub mod cones;
pub mod error;
pub mod expr;
pub mod fixture;
pub mod numerics;
pub mod penalty;
pub mod regularity;
pub mod scalarize;
pub mod setmaps;
pub mod vecopt;

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

pub use error::VarRegError;

/// Scalar type the toolkit is generic over.
///
/// `RealField` supplies the field and elementary functions, the num-traits
/// bounds supply lossless construction from literal `f64` constants
/// (tolerances, fixture data) and extraction for reporting.
pub trait Scalar: RealField + FromPrimitive + ToPrimitive + Copy {
    /// Convert an `f64` constant into the scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("scalar conversion from f64")
    }

    /// Extract the value as `f64` for reports and diagnostics.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar conversion to f64")
    }
}

impl<T> Scalar for T where T: RealField + FromPrimitive + ToPrimitive + Copy {}

/// Column vector of scalars; points of every space are represented this way.
pub type Vector<T> = nalgebra::DVector<T>;
/// Dense matrix of scalars (row-major in all text formats).
pub type Matrix<T> = nalgebra::DMatrix<T>;

/// `f64` point.
pub type VectorF64 = Vector<f64>;
/// `f64` matrix.
pub type MatrixF64 = Matrix<f64>;
/// `f64` polyhedral cone.
pub type PolyhedralConeF64 = cones::PolyhedralCone<f64>;
/// `f64` scalarizing functional.
pub type GerstewitzFunctionalF64 = scalarize::GerstewitzFunctional<f64>;

/// Global tolerances. The defaults are the ones every operation documents.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances<T: Scalar> {
    /// Feasibility slack for membership and LP checks (`tol_feas`).
    pub feas: T,
    /// Strict-inequality margin for interior tests, scaled by operand norms.
    pub strict: T,
    /// Relative tolerance for cross-checks between independent routes.
    pub rel: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            feas: T::of(1e-9),
            strict: T::of(1e-9),
            rel: T::of(1e-6),
        }
    }
}

impl<T: Scalar> Tolerances<T> {
    /// Tolerances with a common feasibility/strictness slack.
    pub fn with_feas(feas: T) -> Self {
        Tolerances {
            feas,
            strict: feas,
            ..Self::default()
        }
    }
}

/// Sum of component Euclidean norms: the norm used on product spaces.
pub fn sum_norm<T: Scalar>(parts: &[&Vector<T>]) -> T {
    parts
        .iter()
        .fold(T::zero(), |acc, part| acc + part.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_roundtrip() {
        assert_eq!(<f64 as Scalar>::of(1.5), 1.5);
        assert_eq!(<f32 as Scalar>::of(0.25), 0.25f32);
        assert_eq!(2.0f64.as_f64(), 2.0);
    }

    #[test]
    fn sum_norm_is_componentwise() {
        let a = VectorF64::from_vec(vec![3.0, 4.0]);
        let b = VectorF64::from_vec(vec![1.0]);
        assert_eq!(sum_norm(&[&a, &b]), 6.0);
    }
}
