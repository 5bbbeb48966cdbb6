//! Distance to a polyhedron in the sum norm (sum of blockwise Euclidean
//! norms), the norm used on product spaces.
//!
//! Solved by ADMM on the splitting `min Σ‖w_k‖ + ι_P(u)  s.t.  w + u = v`:
//! the `w` update is blockwise shrinkage, the `u` update is the exact
//! Euclidean projection from [`PolyProjector`]. The returned value is
//! `Σ‖(v − u)_k‖` for the final (exactly feasible) `u`, so the result is
//! always attained by a concrete point of the polyhedron.

use super::poly::PolyProjector;
use crate::{Scalar, Vector};

const MAX_ITER: usize = 20_000;

/// Blockwise shrinkage: `argmin_w ‖w‖ + ρ/2 ‖w − s‖²` per block.
fn shrink_block<T: Scalar>(s: &mut Vector<T>, offset: usize, len: usize, inv_rho: T) {
    let norm = {
        let mut acc = T::zero();
        for i in offset..offset + len {
            acc += s[i] * s[i];
        }
        acc.sqrt()
    };
    let factor = if norm <= inv_rho {
        T::zero()
    } else {
        T::one() - inv_rho / norm
    };
    for i in offset..offset + len {
        s[i] *= factor;
    }
}

/// Minimal `Σ_k ‖(v − z)_k‖` over `z` in the projector's polyhedron, with
/// the attaining point. `blocks` are the component-space dimensions, in
/// order; they must sum to `v.len()`. Returns `None` when the polyhedron
/// is empty.
pub fn sum_norm_distance<T: Scalar>(
    projector: &PolyProjector<T>,
    v: &Vector<T>,
    blocks: &[usize],
    tol: T,
) -> Option<(Vector<T>, T)> {
    let n = v.len();
    debug_assert_eq!(blocks.iter().sum::<usize>(), n);

    // Feasible at v itself: distance zero, no iteration needed.
    if projector.polyhedron().contains(v, tol) {
        return Some((v.clone(), T::zero()));
    }

    let rho = T::one();
    let inv_rho = T::one() / rho;
    let mut u = projector.project(v)?.0;
    let mut dual = Vector::<T>::zeros(n);
    let scale = T::one() + v.norm();

    for _ in 0..MAX_ITER {
        // w-update: blockwise shrinkage of v − u − dual.
        let mut w = v - &u - &dual;
        let mut offset = 0;
        for &len in blocks {
            shrink_block(&mut w, offset, len, inv_rho);
            offset += len;
        }

        // u-update: exact projection.
        let target = v - &w - &dual;
        let (u_next, _) = projector.project(&target)?;
        let dual_residual = rho * (&u_next - &u).norm();
        u = u_next;

        // dual update and primal residual.
        let primal = &w + &u - v;
        dual += &primal;
        if primal.norm() <= tol * scale && dual_residual <= tol * scale {
            break;
        }
    }

    let mut dist = T::zero();
    let diff = v - &u;
    let mut offset = 0;
    for &len in blocks {
        let mut acc = T::zero();
        for i in offset..offset + len {
            acc += diff[i] * diff[i];
        }
        dist += acc.sqrt();
        offset += len;
    }
    Some((u, dist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Polyhedron;
    use crate::Matrix;
    use approx::assert_relative_eq;

    fn halfspace(normal: Vec<f64>, offset: f64) -> PolyProjector<f64> {
        let n = normal.len();
        let poly = Polyhedron::from_inequalities(
            Matrix::from_fn(1, n, |_, j| normal[j]),
            Vector::from_vec(vec![offset]),
        );
        PolyProjector::new(poly, 1e-10).unwrap()
    }

    #[test]
    fn one_dim_blocks_reduce_to_l1_distance() {
        // Distance from origin to {x + y + z >= 1} in the l1 norm is 1
        // (all mass on a single coordinate is optimal).
        let proj = halfspace(vec![1.0, 1.0, 1.0], 1.0);
        let v = Vector::from_vec(vec![0.0, 0.0, 0.0]);
        let (z, d) = sum_norm_distance(&proj, &v, &[1, 1, 1], 1e-12).unwrap();
        assert_relative_eq!(d, 1.0, epsilon = 1e-8);
        assert!(proj.polyhedron().contains(&z, 1e-8));
    }

    #[test]
    fn skewed_halfspace_uses_best_coordinate() {
        // {2x + y >= 2}: moving x by 1 reaches it, moving y needs 2.
        let proj = halfspace(vec![2.0, 1.0], 2.0);
        let v = Vector::from_vec(vec![0.0, 0.0]);
        let (_, d) = sum_norm_distance(&proj, &v, &[1, 1], 1e-12).unwrap();
        assert_relative_eq!(d, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn multidim_block_is_euclidean() {
        // One block of dimension 2: sum norm = Euclidean norm.
        let proj = halfspace(vec![1.0, 1.0], 1.0);
        let v = Vector::from_vec(vec![0.0, 0.0]);
        let (_, d) = sum_norm_distance(&proj, &v, &[2], 1e-12).unwrap();
        assert_relative_eq!(d, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-8);
    }

    #[test]
    fn mixed_blocks_match_grid_oracle() {
        // Blocks (2, 1) against {x1 + x2 + y >= 1.5}; brute-force over a grid.
        let proj = halfspace(vec![1.0, 1.0, 1.0], 1.5);
        let v = Vector::from_vec(vec![0.2, -0.1, 0.3]);
        let (_, d) = sum_norm_distance(&proj, &v, &[2, 1], 1e-12).unwrap();

        let mut best = f64::INFINITY;
        let steps = 60;
        for i in 0..=steps {
            for j in 0..=steps {
                for k in 0..=steps {
                    let z = Vector::from_vec(vec![
                        -1.0 + 3.0 * i as f64 / steps as f64,
                        -1.0 + 3.0 * j as f64 / steps as f64,
                        -1.0 + 3.0 * k as f64 / steps as f64,
                    ]);
                    if proj.polyhedron().contains(&z, 1e-9) {
                        let dx = ((v[0] - z[0]).powi(2) + (v[1] - z[1]).powi(2)).sqrt();
                        let dy = (v[2] - z[2]).abs();
                        best = best.min(dx + dy);
                    }
                }
            }
        }
        assert!(d <= best + 1e-6, "admm {d} vs grid {best}");
        assert!(best - d < 0.1, "admm {d} vs grid {best}");
    }

    #[test]
    fn feasible_point_has_zero_distance() {
        let proj = halfspace(vec![1.0], 0.0);
        let v = Vector::from_vec(vec![2.0]);
        let (z, d) = sum_norm_distance(&proj, &v, &[1], 1e-12).unwrap();
        assert_eq!(d, 0.0);
        assert_eq!(z[0], 2.0);
    }
}
