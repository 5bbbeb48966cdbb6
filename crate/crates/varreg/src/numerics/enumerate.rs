//! Ray and vertex enumeration for low-dimensional H-representations.
//!
//! Both routines work by inspecting candidate active sets, which is the
//! right trade-off at desk scale: exact answers, deterministic ordering,
//! no incremental double-description bookkeeping.

use nalgebra::SVD;

use crate::error::{Result, VarRegError};
use crate::numerics::Polyhedron;
use crate::{Matrix, Scalar, Vector};

const MAX_ENUM_ROWS: usize = 18;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn lex_less<T: Scalar>(a: &Vector<T>, b: &Vector<T>) -> bool {
    for i in 0..a.len() {
        if a[i] < b[i] - T::of(1e-12) {
            return true;
        }
        if a[i] > b[i] + T::of(1e-12) {
            return false;
        }
    }
    false
}

/// Extreme rays of the pointed cone `{ z : normals·z ≥ 0 }`, unit length,
/// in lexicographic order. Errors if the cone contains a line.
pub fn cone_rays<T: Scalar>(normals: &Matrix<T>, tol: T) -> Result<Vec<Vector<T>>> {
    let n = normals.ncols();
    let m = normals.nrows();
    if m > MAX_ENUM_ROWS {
        return Err(VarRegError::InvalidCone(format!(
            "ray enumeration limited to {MAX_ENUM_ROWS} halfspaces, got {m}"
        )));
    }
    // Pointedness: the lineality space ker(normals) must be trivial.
    let rank = SVD::new(normals.clone(), false, false)
        .singular_values
        .iter()
        .filter(|s| **s > tol)
        .count();
    if rank < n {
        return Err(VarRegError::NotPointed);
    }

    let member = |d: &Vector<T>| -> bool {
        let vals = normals * d;
        (0..m).all(|i| vals[i] >= -tol)
    };

    let mut rays: Vec<Vector<T>> = Vec::new();
    let push = |d: Vector<T>, rays: &mut Vec<Vector<T>>| {
        let close = T::of(1e-7);
        if rays.iter().any(|r| (r - &d).norm() < close) {
            return;
        }
        rays.push(d);
    };

    if n == 1 {
        for sign in [T::one(), -T::one()] {
            let d = Vector::from_element(1, sign);
            if member(&d) {
                push(d, &mut rays);
            }
        }
    } else {
        for subset in combinations(m, n - 1) {
            // Pad to square so the full right-singular basis (and with it
            // the null space) is available.
            let mut sub = Matrix::<T>::zeros(n, n);
            for (r, &i) in subset.iter().enumerate() {
                sub.row_mut(r).copy_from(&normals.row(i));
            }
            let svd = SVD::new(sub, false, true);
            let sv = &svd.singular_values;
            let nullity = sv.iter().filter(|s| **s <= tol).count();
            if nullity != 1 {
                continue;
            }
            let argmin = (0..sv.len())
                .min_by(|&a, &b| sv[a].partial_cmp(&sv[b]).expect("finite"))
                .expect("nonempty");
            let vt = svd.v_t.as_ref().expect("svd computed");
            let d: Vector<T> = vt.row(argmin).transpose();
            for dir in [d.clone(), -d] {
                if member(&dir) {
                    push(dir, &mut rays);
                }
            }
        }
    }
    rays.sort_by(|a, b| {
        if lex_less(a, b) {
            std::cmp::Ordering::Less
        } else if lex_less(b, a) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    Ok(rays)
}

/// Vertices (basic feasible points) of an H-rep polyhedron, lexicographic
/// order. Intended for bounded low-dimensional cross-sections; unbounded
/// directions are simply not reported.
pub fn polytope_vertices<T: Scalar>(poly: &Polyhedron<T>, tol: T) -> Result<Vec<Vector<T>>> {
    let n = poly.dim();
    let m = poly.ineq_normals.nrows();
    let k = poly.eq_normals.nrows();
    if m > MAX_ENUM_ROWS {
        return Err(VarRegError::InvalidCone(format!(
            "vertex enumeration limited to {MAX_ENUM_ROWS} halfspaces, got {m}"
        )));
    }
    let mut vertices: Vec<Vector<T>> = Vec::new();
    // All subset sizes up to n: degenerate equality rows can force larger
    // inequality subsets than the naive n − k count.
    for size in 0..=n.min(m) {
        for subset in combinations(m, size) {
            let rows = k + subset.len();
            if rows < n {
                continue;
            }
            let mut mat = Matrix::<T>::zeros(rows, n);
            let mut rhs = Vector::<T>::zeros(rows);
            for r in 0..k {
                mat.row_mut(r).copy_from(&poly.eq_normals.row(r));
                rhs[r] = poly.eq_offsets[r];
            }
            for (r, &i) in subset.iter().enumerate() {
                mat.row_mut(k + r).copy_from(&poly.ineq_normals.row(i));
                rhs[k + r] = poly.ineq_offsets[i];
            }
            let svd = SVD::new(mat.clone(), true, true);
            let rank = svd
                .singular_values
                .iter()
                .filter(|s| **s > tol)
                .count();
            if rank < n {
                continue;
            }
            let Ok(z) = svd.solve(&rhs, tol) else {
                continue;
            };
            if (&mat * &z - &rhs).norm() > T::of(1e-7) * (T::one() + rhs.norm()) {
                continue;
            }
            if !poly.contains(&z, T::of(1e-9).max(tol)) {
                continue;
            }
            let close = T::of(1e-7);
            if !vertices.iter().any(|v| (v - &z).norm() < close) {
                vertices.push(z);
            }
        }
    }
    vertices.sort_by(|a, b| {
        if lex_less(a, b) {
            std::cmp::Ordering::Less
        } else if lex_less(b, a) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    Ok(vertices)
}
