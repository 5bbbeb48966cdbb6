//! Closed convex polyhedral cones with dual H-rep/V-rep descriptions.
//!
//! A cone is `{ z : a_i·z ≥ 0 }` (halfspaces, rows `a_i`) and/or
//! `cone{ g_j }` (generators, rows `g_j`). Either representation can be
//! derived from the other by ray enumeration when the relevant cone is
//! pointed. All membership and feasibility questions reduce to exact
//! linear algebra plus LP with the global feasibility tolerance.

use crate::error::{Result, VarRegError};
use crate::numerics::{cone_rays, solve_standard, LpOutcome, StandardLp};
use crate::{Matrix, Scalar, Tolerances, Vector};

/// Euclidean space marker: dimension plus the norm conventions.
///
/// Within one space the norm is Euclidean; products of spaces use the sum
/// of the component norms (see [`crate::sum_norm`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EuclideanSpace {
    pub dim: usize,
}

impl EuclideanSpace {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "spaces have positive dimension");
        EuclideanSpace { dim }
    }

    pub fn norm<T: Scalar>(&self, v: &Vector<T>) -> T {
        debug_assert_eq!(v.len(), self.dim);
        v.norm()
    }
}

/// Closed convex polyhedral cone in a Euclidean space.
#[derive(Debug, Clone)]
pub struct PolyhedralCone<T: Scalar> {
    dim: usize,
    halfspaces: Option<Matrix<T>>,
    generators: Option<Matrix<T>>,
}

fn check_dim<T: Scalar>(cone_dim: usize, z: &Vector<T>) -> Result<()> {
    if z.len() != cone_dim {
        return Err(VarRegError::DimensionMismatch {
            expected: cone_dim,
            got: z.len(),
        });
    }
    Ok(())
}

impl<T: Scalar> PolyhedralCone<T> {
    /// Cone from halfspace rows `a_i` (`{ z : a_i·z ≥ 0 }`).
    pub fn from_halfspaces(halfspaces: Matrix<T>) -> Result<Self> {
        let dim = halfspaces.ncols();
        if dim == 0 {
            return Err(VarRegError::InvalidCone("zero-dimensional cone".into()));
        }
        for i in 0..halfspaces.nrows() {
            if halfspaces.row(i).norm() == T::zero() {
                return Err(VarRegError::InvalidCone(format!(
                    "halfspace row {i} is zero"
                )));
            }
        }
        Ok(PolyhedralCone {
            dim,
            halfspaces: Some(halfspaces),
            generators: None,
        })
    }

    /// Cone generated by ray rows `g_j`.
    pub fn from_generators(generators: Matrix<T>) -> Result<Self> {
        let dim = generators.ncols();
        if dim == 0 {
            return Err(VarRegError::InvalidCone("zero-dimensional cone".into()));
        }
        for i in 0..generators.nrows() {
            if generators.row(i).norm() == T::zero() {
                return Err(VarRegError::InvalidCone(format!(
                    "generator row {i} is zero"
                )));
            }
        }
        Ok(PolyhedralCone {
            dim,
            halfspaces: None,
            generators: Some(generators),
        })
    }

    /// Cone with both representations; consistency is the caller's claim
    /// and can be audited with [`PolyhedralCone::representation_defect`].
    pub fn with_both(halfspaces: Matrix<T>, generators: Matrix<T>) -> Result<Self> {
        let mut cone = Self::from_halfspaces(halfspaces)?;
        if generators.ncols() != cone.dim {
            return Err(VarRegError::DimensionMismatch {
                expected: cone.dim,
                got: generators.ncols(),
            });
        }
        cone.generators = Some(generators);
        Ok(cone)
    }

    /// The nonnegative orthant of the given dimension.
    pub fn orthant(dim: usize) -> Self {
        PolyhedralCone {
            dim,
            halfspaces: Some(Matrix::identity(dim, dim)),
            generators: Some(Matrix::identity(dim, dim)),
        }
    }

    /// The trivial cone `{0}` (halfspaces `±e_i`).
    pub fn zero(dim: usize) -> Self {
        let mut rows = Matrix::zeros(2 * dim, dim);
        for i in 0..dim {
            rows[(2 * i, i)] = T::one();
            rows[(2 * i + 1, i)] = -T::one();
        }
        PolyhedralCone {
            dim,
            halfspaces: Some(rows),
            generators: Some(Matrix::zeros(0, dim)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> Option<&Matrix<T>> {
        self.halfspaces.as_ref()
    }

    pub fn generators(&self) -> Option<&Matrix<T>> {
        self.generators.as_ref()
    }

    /// Halfspace rows, deriving them by ray enumeration of the dual when
    /// only generators are stored (requires a solid cone).
    pub fn require_halfspaces(&self, tol: &Tolerances<T>) -> Result<Matrix<T>> {
        if let Some(h) = &self.halfspaces {
            return Ok(h.clone());
        }
        let gens = self
            .generators
            .as_ref()
            .expect("cone carries at least one representation");
        // Halfspaces of cone{g_j} are the extreme rays of { y : g_j·y ≥ 0 }.
        let rays = cone_rays(gens, tol.feas).map_err(|e| match e {
            VarRegError::NotPointed => VarRegError::InvalidCone(
                "cannot derive halfspaces: cone is not solid".into(),
            ),
            other => other,
        })?;
        let mut rows = Matrix::zeros(rays.len(), self.dim);
        for (i, r) in rays.iter().enumerate() {
            rows.row_mut(i).copy_from(&r.transpose());
        }
        Ok(rows)
    }

    /// Generator rows, deriving them by ray enumeration when only
    /// halfspaces are stored (requires a pointed cone).
    pub fn require_generators(&self, tol: &Tolerances<T>) -> Result<Matrix<T>> {
        if let Some(g) = &self.generators {
            return Ok(g.clone());
        }
        let half = self
            .halfspaces
            .as_ref()
            .expect("cone carries at least one representation");
        let rays = cone_rays(half, tol.feas)?;
        let mut rows = Matrix::zeros(rays.len(), self.dim);
        for (i, r) in rays.iter().enumerate() {
            rows.row_mut(i).copy_from(&r.transpose());
        }
        Ok(rows)
    }

    /// Return an equivalent cone that stores both representations.
    pub fn with_derived_representations(&self, tol: &Tolerances<T>) -> Result<Self> {
        Ok(PolyhedralCone {
            dim: self.dim,
            halfspaces: Some(self.require_halfspaces(tol)?),
            generators: Some(self.require_generators(tol)?),
        })
    }

    /// Membership: `a_i·z ≥ −tol_feas` for every halfspace. When only
    /// generators are stored the equivalent LP (`z` a nonnegative
    /// combination of generators) is solved instead.
    pub fn contains(&self, z: &Vector<T>, tol: &Tolerances<T>) -> Result<bool> {
        check_dim(self.dim, z)?;
        if let Some(h) = &self.halfspaces {
            let vals = h * z;
            for i in 0..vals.len() {
                let scale = T::one() + h.row(i).norm() * z.norm();
                if vals[i] < -tol.feas * scale {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let gens = self.generators.as_ref().expect("representation present");
        self.vrep_member(gens, z, tol)
    }

    /// LP membership in `cone{g_j}`: feasibility of `Σ λ_j g_j = z, λ ≥ 0`.
    fn vrep_member(&self, gens: &Matrix<T>, z: &Vector<T>, tol: &Tolerances<T>) -> Result<bool> {
        let m = gens.nrows();
        if m == 0 {
            return Ok(z.norm() <= tol.feas);
        }
        let lp = StandardLp {
            a: gens.transpose(),
            b: z.clone(),
            c: Vector::zeros(m),
        };
        match solve_standard(&lp, tol.feas * T::of(1e-2))? {
            LpOutcome::Optimal { .. } => Ok(true),
            _ => Ok(false),
        }
    }

    /// Strict interior: `a_i·z > tol_strict · ‖a_i‖‖z‖` for every row.
    /// Boundary points are not interior. Errors when the cone is not solid.
    pub fn contains_interior(&self, z: &Vector<T>, tol: &Tolerances<T>) -> Result<bool> {
        check_dim(self.dim, z)?;
        if !self.is_solid(tol)? {
            return Err(VarRegError::NotSolid);
        }
        let h = self.require_halfspaces(tol)?;
        if h.nrows() == 0 {
            // Whole space: everything is interior.
            return Ok(true);
        }
        let vals = &h * z;
        for i in 0..vals.len() {
            let scale = h.row(i).norm() * z.norm();
            if vals[i] <= tol.strict * scale || vals[i] <= T::zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Pointedness: `K ∩ −K = {0}`, checked by LP. With halfspaces this is
    /// infeasibility of `{ Az = 0, z_j = 1 }` for every coordinate `j`;
    /// with generators only, infeasibility of a vanishing convex
    /// combination of generators.
    pub fn is_pointed(&self, tol: &Tolerances<T>) -> Result<bool> {
        let lp_tol = tol.feas * T::of(1e-2);
        if let Some(h) = &self.halfspaces {
            let m = h.nrows();
            // z free: z = u − v, u,v ≥ 0. Rows: A(u−v) = 0 and (u−v)_j = 1.
            for j in 0..self.dim {
                let mut a = Matrix::<T>::zeros(m + 1, 2 * self.dim);
                let mut b = Vector::<T>::zeros(m + 1);
                for r in 0..m {
                    for cidx in 0..self.dim {
                        a[(r, cidx)] = h[(r, cidx)];
                        a[(r, self.dim + cidx)] = -h[(r, cidx)];
                    }
                }
                a[(m, j)] = T::one();
                a[(m, self.dim + j)] = -T::one();
                b[m] = T::one();
                let lp = StandardLp {
                    a,
                    b,
                    c: Vector::zeros(2 * self.dim),
                };
                if let LpOutcome::Optimal { .. } = solve_standard(&lp, lp_tol)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let gens = self.generators.as_ref().expect("representation present");
        let m = gens.nrows();
        if m == 0 {
            return Ok(true);
        }
        // Σ λ_j g_j = 0, Σ λ_j = 1, λ ≥ 0 feasible ⟺ cone contains a line.
        let mut a = Matrix::<T>::zeros(self.dim + 1, m);
        for j in 0..m {
            for i in 0..self.dim {
                a[(i, j)] = gens[(j, i)];
            }
            a[(self.dim, j)] = T::one();
        }
        let mut b = Vector::<T>::zeros(self.dim + 1);
        b[self.dim] = T::one();
        let lp = StandardLp {
            a,
            b,
            c: Vector::zeros(m),
        };
        Ok(!matches!(
            solve_standard(&lp, lp_tol)?,
            LpOutcome::Optimal { .. }
        ))
    }

    /// Solidity: the interior is nonempty iff an LP finds `z` with
    /// `a_i·z ≥ 1` for all rows.
    pub fn is_solid(&self, tol: &Tolerances<T>) -> Result<bool> {
        let lp_tol = tol.feas * T::of(1e-2);
        if let Some(h) = &self.halfspaces {
            let m = h.nrows();
            if m == 0 {
                return Ok(true);
            }
            // a_i·(u−v) − s_i = 1, u, v, s ≥ 0.
            let mut a = Matrix::<T>::zeros(m, 2 * self.dim + m);
            let mut b = Vector::<T>::zeros(m);
            for r in 0..m {
                for cidx in 0..self.dim {
                    a[(r, cidx)] = h[(r, cidx)];
                    a[(r, self.dim + cidx)] = -h[(r, cidx)];
                }
                a[(r, 2 * self.dim + r)] = -T::one();
                b[r] = T::one();
            }
            let lp = StandardLp {
                a,
                b,
                c: Vector::zeros(2 * self.dim + m),
            };
            return Ok(matches!(
                solve_standard(&lp, lp_tol)?,
                LpOutcome::Optimal { .. }
            ));
        }
        // Generators only: the cone is solid iff the generators span.
        let gens = self.generators.as_ref().expect("representation present");
        let rank = nalgebra::SVD::new(gens.clone(), false, false)
            .singular_values
            .iter()
            .filter(|s| **s > tol.feas)
            .count();
        Ok(rank == self.dim)
    }

    /// Dual cone `K* = { y : y·z ≥ 0 ∀z ∈ K }`: a representation swap.
    /// Generators of the dual are this cone's halfspace normals and vice
    /// versa; whichever representations are present carry over.
    pub fn dual(&self) -> Self {
        PolyhedralCone {
            dim: self.dim,
            halfspaces: self.generators.clone(),
            generators: self.halfspaces.clone(),
        }
    }

    /// Euclidean distance from an interior point to the boundary:
    /// the minimum over facets of the point–hyperplane distance.
    pub fn distance_to_boundary(&self, e: &Vector<T>, tol: &Tolerances<T>) -> Result<T> {
        check_dim(self.dim, e)?;
        if !self.contains_interior(e, tol)? {
            return Err(VarRegError::NotInterior);
        }
        let h = self.require_halfspaces(tol)?;
        if h.nrows() == 0 {
            return Err(VarRegError::InvalidCone(
                "whole space has no boundary".into(),
            ));
        }
        let vals = &h * e;
        let mut best: Option<T> = None;
        for i in 0..vals.len() {
            let d = vals[i] / h.row(i).norm();
            best = Some(match best {
                None => d,
                Some(b) => b.min(d),
            });
        }
        Ok(best.expect("at least one facet"))
    }

    /// Weak minimality of `r` in the finite set `points` for this order:
    /// no `ρ ∈ points` with `r − ρ` interior. Empty sets are vacuously
    /// weakly minimal.
    pub fn is_weak_minimal(
        &self,
        points: &[Vector<T>],
        r: &Vector<T>,
        tol: &Tolerances<T>,
    ) -> Result<bool> {
        check_dim(self.dim, r)?;
        for rho in points {
            check_dim(self.dim, rho)?;
            if self.contains_interior(&(r - rho), tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Worst violation of cross-representation consistency: generators
    /// must satisfy all halfspaces. Returns 0 when a representation is
    /// missing. (The reverse inclusion is sampled in fixture validation.)
    pub fn representation_defect(&self) -> T {
        let (Some(h), Some(g)) = (&self.halfspaces, &self.generators) else {
            return T::zero();
        };
        let mut worst = T::zero();
        for j in 0..g.nrows() {
            let gen = g.row(j).transpose();
            let vals = h * &gen;
            for i in 0..vals.len() {
                worst = worst.max(-vals[i]);
            }
        }
        worst
    }
}
