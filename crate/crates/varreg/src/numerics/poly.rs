//! H-representation polyhedra and exact Euclidean projection.
//!
//! Projection enumerates candidate active sets: the projection of a point
//! onto `{ z : Hz ≥ β, Gz = γ }` lies on some face, and on the affine hull
//! of that face it coincides with the affine projection. Enumerating all
//! inequality subsets therefore yields the exact projection for the small
//! row counts this crate works with. Per-subset pseudo-inverses are
//! precomputed once (they depend only on the normals), so sweeps with
//! varying offsets pay two small mat-vecs per candidate face.

use nalgebra::SVD;

use crate::error::{Result, VarRegError};
use crate::{Matrix, Scalar, Vector};

/// Maximum number of inequality rows the exact projector accepts (2^m faces).
const MAX_PROJ_ROWS: usize = 16;

/// `{ z : ineq_normals·z ≥ ineq_offsets, eq_normals·z = eq_offsets }`.
#[derive(Debug, Clone)]
pub struct Polyhedron<T: Scalar> {
    pub ineq_normals: Matrix<T>,
    pub ineq_offsets: Vector<T>,
    pub eq_normals: Matrix<T>,
    pub eq_offsets: Vector<T>,
}

impl<T: Scalar> Polyhedron<T> {
    /// Inequality-only polyhedron `{ z : normals·z ≥ offsets }`.
    pub fn from_inequalities(normals: Matrix<T>, offsets: Vector<T>) -> Self {
        let dim = normals.ncols();
        Polyhedron {
            ineq_normals: normals,
            ineq_offsets: offsets,
            eq_normals: Matrix::zeros(0, dim),
            eq_offsets: Vector::zeros(0),
        }
    }

    pub fn dim(&self) -> usize {
        self.ineq_normals.ncols().max(self.eq_normals.ncols())
    }

    /// Membership with slack scaled by the row and point magnitudes.
    pub fn contains(&self, z: &Vector<T>, tol: T) -> bool {
        self.contains_at(z, &self.ineq_offsets, &self.eq_offsets, tol)
    }

    /// Membership against substituted offsets.
    pub fn contains_at(
        &self,
        z: &Vector<T>,
        ineq_offsets: &Vector<T>,
        eq_offsets: &Vector<T>,
        tol: T,
    ) -> bool {
        let zn = z.norm();
        if self.ineq_normals.nrows() > 0 {
            let vals = &self.ineq_normals * z;
            for i in 0..vals.len() {
                let scale = T::one() + self.ineq_normals.row(i).norm() * zn;
                if vals[i] < ineq_offsets[i] - tol * scale {
                    return false;
                }
            }
        }
        if self.eq_normals.nrows() > 0 {
            let vals = &self.eq_normals * z;
            for i in 0..vals.len() {
                let scale = T::one() + self.eq_normals.row(i).norm() * zn;
                if (vals[i] - eq_offsets[i]).abs() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Worst constraint violation (0 when inside).
    pub fn violation(&self, z: &Vector<T>) -> T {
        let mut worst = T::zero();
        if self.ineq_normals.nrows() > 0 {
            let vals = &self.ineq_normals * z;
            for i in 0..vals.len() {
                worst = worst.max(self.ineq_offsets[i] - vals[i]);
            }
        }
        if self.eq_normals.nrows() > 0 {
            let vals = &self.eq_normals * z;
            for i in 0..vals.len() {
                worst = worst.max((vals[i] - self.eq_offsets[i]).abs());
            }
        }
        worst
    }
}

struct FaceProjection<T: Scalar> {
    /// Indices of the inequality rows treated as active.
    active: Vec<usize>,
    /// Stacked constraint matrix of the face's affine hull (eqs first).
    m: Matrix<T>,
    /// `Mᵀ (M Mᵀ)⁺`, so the affine projection is `z = v + pinv (q − M v)`.
    pinv: Matrix<T>,
}

/// Exact Euclidean projector onto a polyhedron with fixed normals.
pub struct PolyProjector<T: Scalar> {
    poly: Polyhedron<T>,
    faces: Vec<FaceProjection<T>>,
    feas_tol: T,
}

impl<T: Scalar> PolyProjector<T> {
    /// `feas_tol` bounds accepted constraint violations (relative scaling).
    pub fn new(poly: Polyhedron<T>, feas_tol: T) -> Result<Self> {
        let m = poly.ineq_normals.nrows();
        if m > MAX_PROJ_ROWS {
            return Err(VarRegError::LpFailure(format!(
                "exact projector limited to {MAX_PROJ_ROWS} inequality rows, got {m}"
            )));
        }
        let rank_eps = feas_tol * T::of(1e-2);
        let dim = poly.dim();
        let k = poly.eq_normals.nrows();
        let mut faces = Vec::new();
        for mask in 0u32..(1u32 << m) {
            let active: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let rows = k + active.len();
            let mut mat = Matrix::<T>::zeros(rows, dim);
            for r in 0..k {
                mat.row_mut(r).copy_from(&poly.eq_normals.row(r));
            }
            for (r, &i) in active.iter().enumerate() {
                mat.row_mut(k + r).copy_from(&poly.ineq_normals.row(i));
            }
            let pinv = if rows == 0 {
                Matrix::zeros(dim, 0)
            } else {
                let gram = &mat * mat.transpose();
                let svd = SVD::new(gram, true, true);
                match svd.pseudo_inverse(rank_eps) {
                    Ok(pinv_gram) => mat.transpose() * pinv_gram,
                    Err(_) => continue,
                }
            };
            faces.push(FaceProjection {
                active,
                m: mat,
                pinv,
            });
        }
        Ok(PolyProjector {
            poly,
            faces,
            feas_tol,
        })
    }

    pub fn polyhedron(&self) -> &Polyhedron<T> {
        &self.poly
    }

    /// Exact projection onto the stored polyhedron; `None` when empty.
    pub fn project(&self, v: &Vector<T>) -> Option<(Vector<T>, T)> {
        let ineq = self.poly.ineq_offsets.clone();
        let eq = self.poly.eq_offsets.clone();
        self.project_at(v, &ineq, &eq)
    }

    /// Exact projection with substituted offsets (same normals).
    pub fn project_at(
        &self,
        v: &Vector<T>,
        ineq_offsets: &Vector<T>,
        eq_offsets: &Vector<T>,
    ) -> Option<(Vector<T>, T)> {
        let k = eq_offsets.len();
        let mut best: Option<(Vector<T>, T)> = None;
        for face in &self.faces {
            let z = if face.m.nrows() == 0 {
                v.clone()
            } else {
                let mut q = Vector::<T>::zeros(face.m.nrows());
                for r in 0..k {
                    q[r] = eq_offsets[r];
                }
                for (r, &i) in face.active.iter().enumerate() {
                    q[k + r] = ineq_offsets[i];
                }
                let rhs = &q - &face.m * v;
                let z = v + &face.pinv * rhs;
                // Faces whose constraint system is inconsistent for these
                // offsets project outside their own affine hull: reject.
                let residual = (&face.m * &z - &q).norm();
                if residual > self.feas_tol * T::of(10.0) * (T::one() + q.norm()) {
                    continue;
                }
                z
            };
            if !self
                .poly
                .contains_at(&z, ineq_offsets, eq_offsets, self.feas_tol)
            {
                continue;
            }
            let dist = (v - &z).norm();
            if best.as_ref().map_or(true, |(_, d)| dist < *d) {
                best = Some((z, dist));
            }
        }
        best
    }

    /// Distance only; `None` when empty.
    pub fn distance(&self, v: &Vector<T>) -> Option<T> {
        self.project(v).map(|(_, d)| d)
    }

    /// Distance with substituted offsets; `None` when empty.
    pub fn distance_at(
        &self,
        v: &Vector<T>,
        ineq_offsets: &Vector<T>,
        eq_offsets: &Vector<T>,
    ) -> Option<T> {
        self.project_at(v, ineq_offsets, eq_offsets).map(|(_, d)| d)
    }
}
