//! Small dense numerical kernels the toolkit is built on: a two-phase
//! simplex solver, exact Euclidean projection onto H-rep polyhedra, the
//! sum-norm distance solver, and ray/vertex enumeration for low dimensions.
//!
//! Everything here is deterministic: fixed pivot rules, fixed iteration
//! caps, lexicographic tie-breaks.

mod enumerate;
mod poly;
mod simplex;
mod sumnorm;

pub use enumerate::{cone_rays, polytope_vertices};
pub use poly::{PolyProjector, Polyhedron};
pub use simplex::{solve_standard, LpOutcome, StandardLp};
pub use sumnorm::sum_norm_distance;
