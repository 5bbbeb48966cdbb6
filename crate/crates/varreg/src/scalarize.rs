//! Smallest-translation scalarization along an interior direction.
//!
//! For a pointed solid polyhedral cone `K` and `e ∈ int K`, the functional
//! `s_e(z) = inf { λ : λe ∈ z + K }` is continuous, sublinear and strictly
//! int-K-monotone. With halfspace rows `a_i` of `K` and `a_i·e > 0`, the
//! defining LP has one variable only and collapses to the closed form
//! `s_e(z) = max_i (a_i·z) / (a_i·e)`, which this module evaluates exactly.

use crate::cones::PolyhedralCone;
use crate::error::{Result, VarRegError};
use crate::numerics::{polytope_vertices, Polyhedron};
use crate::{Matrix, Scalar, Tolerances, Vector};

/// Vertex enumeration of subdifferentials is offered up to this dimension.
const VERTEX_ENUM_MAX_DIM: usize = 4;

/// Scalarizing functional `s_e` for a pointed solid cone and interior
/// direction, with its Lipschitz constant cached.
#[derive(Debug, Clone)]
pub struct GerstewitzFunctional<T: Scalar> {
    cone: PolyhedralCone<T>,
    direction: Vector<T>,
    lipschitz: T,
    halfspaces: Matrix<T>,
    /// `a_i·e` per halfspace row; all strictly positive.
    dir_products: Vector<T>,
    /// Generator rows of `K`, i.e. the halfspaces of `K*`.
    dual_halfspaces: Matrix<T>,
    tol: Tolerances<T>,
}

/// Subdifferential `∂s_e(u)`: a polytope of dual vectors, as halfspaces
/// plus two equality rows, with explicit vertices in low dimensions.
#[derive(Debug, Clone)]
pub struct Subdifferential<T: Scalar> {
    polytope: Polyhedron<T>,
    vertices: Option<Vec<Vector<T>>>,
}

impl<T: Scalar> Subdifferential<T> {
    pub fn polytope(&self) -> &Polyhedron<T> {
        &self.polytope
    }

    /// Vertices in lexicographic order; `None` above the enumeration cap.
    pub fn vertices(&self) -> Option<&[Vector<T>]> {
        self.vertices.as_deref()
    }

    /// Membership of a dual vector, equalities relaxed by the tolerance.
    pub fn contains(&self, v: &Vector<T>, tol: &Tolerances<T>) -> bool {
        self.polytope.contains(v, tol.feas)
    }
}

impl<T: Scalar> GerstewitzFunctional<T> {
    /// Build `s_e` for `e ∈ int K`. Errors when `K` is not solid, not
    /// pointed, or `e` is not interior.
    pub fn new(cone: PolyhedralCone<T>, direction: Vector<T>, tol: Tolerances<T>) -> Result<Self> {
        if !cone.is_pointed(&tol)? {
            return Err(VarRegError::NotPointed);
        }
        if !cone.contains_interior(&direction, &tol)? {
            return Err(VarRegError::NotInterior);
        }
        let halfspaces = cone.require_halfspaces(&tol)?;
        if halfspaces.nrows() == 0 {
            return Err(VarRegError::InvalidCone(
                "scalarization needs at least one halfspace".into(),
            ));
        }
        let dir_products = &halfspaces * &direction;
        for i in 0..dir_products.len() {
            if dir_products[i] <= T::zero() {
                return Err(VarRegError::NotInterior);
            }
        }
        let dual_halfspaces = cone.require_generators(&tol)?;
        let dist = cone.distance_to_boundary(&direction, &tol)?;
        let lipschitz = T::one() / dist;
        debug_assert!(
            lipschitz >= T::one() / direction.norm() - tol.feas,
            "dual-norm bracket L_e >= 1/|e| violated"
        );
        Ok(GerstewitzFunctional {
            cone,
            direction,
            lipschitz,
            halfspaces,
            dir_products,
            dual_halfspaces,
            tol,
        })
    }

    pub fn cone(&self) -> &PolyhedralCone<T> {
        &self.cone
    }

    pub fn direction(&self) -> &Vector<T> {
        &self.direction
    }

    /// Cached Lipschitz constant `L_e = d(e, bd K)^{-1}`.
    pub fn lipschitz_constant(&self) -> T {
        self.lipschitz
    }

    /// Exact value of the one-variable LP
    /// `min λ s.t. a_i·(λe − z) ≥ 0`: `max_i (a_i·z)/(a_i·e)`.
    pub fn evaluate(&self, z: &Vector<T>) -> Result<T> {
        if z.len() != self.cone.dim() {
            return Err(VarRegError::DimensionMismatch {
                expected: self.cone.dim(),
                got: z.len(),
            });
        }
        let vals = &self.halfspaces * z;
        let mut best = vals[0] / self.dir_products[0];
        for i in 1..vals.len() {
            best = best.max(vals[i] / self.dir_products[i]);
        }
        Ok(best)
    }

    /// `∂s_e(u) = { v ∈ K* : v·e = 1, v·u = s_e(u) }` as an H-rep polytope.
    /// Nonempty by theory; an empty vertex enumeration in low dimensions
    /// is reported as an internal inconsistency.
    pub fn subdifferential(&self, u: &Vector<T>) -> Result<Subdifferential<T>> {
        let value = self.evaluate(u)?;
        let dim = self.cone.dim();
        let mut eq_normals = Matrix::<T>::zeros(2, dim);
        eq_normals
            .row_mut(0)
            .copy_from(&self.direction.transpose());
        eq_normals.row_mut(1).copy_from(&u.transpose());
        let eq_offsets = Vector::from_vec(vec![T::one(), value]);
        let polytope = Polyhedron {
            ineq_normals: self.dual_halfspaces.clone(),
            ineq_offsets: Vector::zeros(self.dual_halfspaces.nrows()),
            eq_normals,
            eq_offsets,
        };
        let vertices = if dim <= VERTEX_ENUM_MAX_DIM {
            let verts = polytope_vertices(&polytope, self.tol.feas * T::of(1e-2))?;
            if verts.is_empty() {
                return Err(VarRegError::Inconsistency(
                    "subdifferential polytope came back empty".into(),
                ));
            }
            Some(verts)
        } else {
            None
        };
        Ok(Subdifferential { polytope, vertices })
    }

    /// `min_{a ∈ A} s_e(a) ≥ −tol_feas`: the bridge from weak minimality
    /// of a set disjoint from `−int K` to scalar nonnegativity.
    pub fn nonneg_on_set(&self, points: &[Vector<T>]) -> Result<bool> {
        for a in points {
            if self.evaluate(a)? < -self.tol.feas {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{solve_standard, LpOutcome, StandardLp};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Cone = PolyhedralCone<f64>;
    type Gw = GerstewitzFunctional<f64>;

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn mat(rows: Vec<Vec<f64>>) -> Matrix<f64> {
        let m = rows.len();
        let n = rows[0].len();
        Matrix::from_fn(m, n, |i, j| rows[i][j])
    }

    fn vecn(v: Vec<f64>) -> Vector<f64> {
        Vector::from_vec(v)
    }

    fn wedge() -> Cone {
        Cone::from_halfspaces(mat(vec![vec![-1.0, 1.0], vec![1.0, 1.0]])).unwrap()
    }

    /// Independent oracle: solve `min λ s.t. a_i·(λe − z) ≥ 0` as an LP in
    /// standard form (λ = λ⁺ − λ⁻, one slack per row).
    fn lp_oracle(cone: &Cone, e: &Vector<f64>, z: &Vector<f64>) -> f64 {
        let h = cone.require_halfspaces(&tol()).unwrap();
        let m = h.nrows();
        let he = &h * e;
        let hz = &h * z;
        let mut a = Matrix::<f64>::zeros(m, 2 + m);
        for i in 0..m {
            a[(i, 0)] = he[i];
            a[(i, 1)] = -he[i];
            a[(i, 2 + i)] = -1.0;
        }
        let mut c = Vector::<f64>::zeros(2 + m);
        c[0] = 1.0;
        c[1] = -1.0;
        let lp = StandardLp { a, b: hz, c };
        match solve_standard(&lp, 1e-11).unwrap() {
            LpOutcome::Optimal { value, .. } => value,
            other => panic!("oracle LP failed: {other:?}"),
        }
    }

    #[test]
    fn frozen_values_match_lp_oracle() {
        let k = Cone::orthant(2);
        let s = Gw::new(k.clone(), vecn(vec![1.0, 1.0]), tol()).unwrap();
        let z = vecn(vec![2.0, -1.0]);
        assert_relative_eq!(s.evaluate(&z).unwrap(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(s.evaluate(&z).unwrap(), lp_oracle(&k, s.direction(), &z));

        assert_eq!(s.evaluate(&vecn(vec![0.0, 0.0])).unwrap(), 0.0);

        let s12 = Gw::new(k.clone(), vecn(vec![1.0, 2.0]), tol()).unwrap();
        let z11 = vecn(vec![1.0, 1.0]);
        assert_relative_eq!(s12.evaluate(&z11).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(
            s12.evaluate(&z11).unwrap(),
            lp_oracle(&k, s12.direction(), &z11)
        );
    }

    #[test]
    fn random_points_match_lp_oracle() {
        let cones = [Cone::orthant(2), wedge()];
        let dirs = [vecn(vec![1.0, 1.0]), vecn(vec![0.0, 1.0])];
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for cone in &cones {
            for e in &dirs {
                let Ok(s) = Gw::new(cone.clone(), e.clone(), tol()) else {
                    continue; // direction not interior for this cone
                };
                for _ in 0..100 {
                    let z = vecn(vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]);
                    assert_relative_eq!(
                        s.evaluate(&z).unwrap(),
                        lp_oracle(cone, e, &z),
                        epsilon = 1e-8
                    );
                }
            }
        }
    }

    #[test]
    fn lipschitz_constants() {
        let k = Cone::orthant(2);
        let s = Gw::new(k.clone(), vecn(vec![1.0, 1.0]), tol()).unwrap();
        assert_relative_eq!(s.lipschitz_constant(), 1.0);
        let s2 = Gw::new(k, vecn(vec![2.0, 2.0]), tol()).unwrap();
        assert_relative_eq!(s2.lipschitz_constant(), 0.5);
        let sw = Gw::new(wedge(), vecn(vec![0.0, 1.0]), tol()).unwrap();
        assert_relative_eq!(sw.lipschitz_constant(), 2.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn subdifferential_at_origin_is_dual_slice() {
        // {v in K*: v·e = 1} for K = R²₊, e = (1,1): the unit simplex.
        let s = Gw::new(Cone::orthant(2), vecn(vec![1.0, 1.0]), tol()).unwrap();
        let sub = s.subdifferential(&vecn(vec![0.0, 0.0])).unwrap();
        let verts = sub.vertices().unwrap();
        assert_eq!(verts.len(), 2);
        assert_relative_eq!(verts[0][0], 0.0, epsilon = 1e-9);
        assert_relative_eq!(verts[0][1], 1.0, epsilon = 1e-9);
        assert_relative_eq!(verts[1][0], 1.0, epsilon = 1e-9);
        assert!(sub.contains(&vecn(vec![0.3, 0.7]), &tol()));
        assert!(!sub.contains(&vecn(vec![0.6, 0.7]), &tol()));
        assert!(!sub.contains(&vecn(vec![-0.2, 1.2]), &tol()));
    }

    #[test]
    fn subdifferential_unique_vertex_when_max_is_strict() {
        let s = Gw::new(Cone::orthant(2), vecn(vec![1.0, 1.0]), tol()).unwrap();
        let sub = s.subdifferential(&vecn(vec![2.0, -1.0])).unwrap();
        let verts = sub.vertices().unwrap();
        assert_eq!(verts.len(), 1);
        assert_relative_eq!(verts[0][0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(verts[0][1], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn subdifferential_segment_when_both_active() {
        let s = Gw::new(Cone::orthant(2), vecn(vec![1.0, 1.0]), tol()).unwrap();
        let sub = s.subdifferential(&vecn(vec![1.0, 1.0])).unwrap();
        let verts = sub.vertices().unwrap();
        assert_eq!(verts.len(), 2);
        // Segment {(t, 1-t)}: vertices at t = 0 and t = 1.
        assert_relative_eq!(verts[0][0] + verts[0][1], 1.0, epsilon = 1e-9);
        assert_relative_eq!(verts[1][0] + verts[1][1], 1.0, epsilon = 1e-9);
        assert!(sub.contains(&vecn(vec![0.5, 0.5]), &tol()));
    }

    #[test]
    fn subgradient_inequality_and_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (cone, e) in [
            (Cone::orthant(2), vecn(vec![1.0, 1.0])),
            (wedge(), vecn(vec![0.2, 1.5])),
        ] {
            let s = Gw::new(cone, e.clone(), tol()).unwrap();
            for _ in 0..50 {
                let u = vecn(vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]);
                let su = s.evaluate(&u).unwrap();
                let sub = s.subdifferential(&u).unwrap();
                for v in sub.vertices().unwrap() {
                    // Multiplier normalization and the norm bracket.
                    assert_relative_eq!(v.dot(&e), 1.0, epsilon = 1e-9);
                    assert!(v.norm() >= 1.0 / e.norm() - 1e-9);
                    assert!(v.norm() <= s.lipschitz_constant() + 1e-9);
                    // Subgradient inequality at sampled w.
                    for _ in 0..10 {
                        let w = vecn(vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]);
                        let sw = s.evaluate(&w).unwrap();
                        assert!(sw >= su + v.dot(&(&w - &u)) - 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn nonneg_on_set_examples() {
        let s = Gw::new(Cone::orthant(2), vecn(vec![1.0, 1.0]), tol()).unwrap();
        assert!(s.nonneg_on_set(&[vecn(vec![0.0, 0.0])]).unwrap());
        assert!(!s.nonneg_on_set(&[vecn(vec![-1.0, -1.0])]).unwrap());
        // s_e(-e) = -1.
        assert_relative_eq!(s.evaluate(&vecn(vec![-1.0, -1.0])).unwrap(), -1.0);
    }

    #[test]
    fn weak_minimality_bridge() {
        // If r is weakly minimal in A ∪ {r}, then s_e(a - r) ≥ 0 for all a.
        let k = Cone::orthant(2);
        let s = Gw::new(k.clone(), vecn(vec![1.0, 1.0]), tol()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut checked = 0;
        while checked < 20 {
            let r = vecn(vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            let points: Vec<_> = (0..12)
                .map(|_| vecn(vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]))
                .collect();
            if k.is_weak_minimal(&points, &r, &tol()).unwrap() {
                let diffs: Vec<_> = points.iter().map(|a| a - &r).collect();
                assert!(s.nonneg_on_set(&diffs).unwrap());
                checked += 1;
            }
        }
    }

    #[test]
    fn rejects_bad_directions() {
        assert!(matches!(
            Gw::new(Cone::orthant(2), vecn(vec![1.0, 0.0]), tol()),
            Err(VarRegError::NotInterior)
        ));
        assert!(matches!(
            Gw::new(Cone::zero(2), vecn(vec![0.0, 0.0]), tol()),
            Err(VarRegError::NotPointed) | Err(VarRegError::NotSolid) | Err(VarRegError::NotInterior)
        ));
    }

    #[test]
    fn generic_over_f32() {
        let k = PolyhedralCone::<f32>::orthant(2);
        let s = GerstewitzFunctional::new(
            k,
            Vector::from_vec(vec![1.0f32, 1.0]),
            Tolerances::with_feas(1e-5f32),
        )
        .unwrap();
        let v = s.evaluate(&Vector::from_vec(vec![2.0f32, -1.0])).unwrap();
        assert!((v - 2.0).abs() < 1e-6);
    }
}
