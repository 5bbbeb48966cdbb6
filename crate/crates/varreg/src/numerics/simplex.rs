//! Dense two-phase simplex for small standard-form programs
//! `min cᵀx  s.t.  Ax = b, x ≥ 0`, with Bland's rule throughout.
//!
//! Problems in this crate have a handful of rows and columns, so a plain
//! tableau is the right tool: no factorization updates, no scaling, and the
//! pivot order is fully deterministic.

use crate::error::{Result, VarRegError};
use crate::{Matrix, Scalar, Vector};

/// `min cᵀx  s.t.  a·x = b, x ≥ 0`.
#[derive(Debug, Clone)]
pub struct StandardLp<T: Scalar> {
    pub a: Matrix<T>,
    pub b: Vector<T>,
    pub c: Vector<T>,
}

/// Outcome of a standard-form solve.
#[derive(Debug, Clone)]
pub enum LpOutcome<T: Scalar> {
    Optimal { x: Vector<T>, value: T },
    Infeasible,
    Unbounded,
}

impl<T: Scalar> LpOutcome<T> {
    pub fn optimal(self) -> Option<(Vector<T>, T)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

enum Step {
    Done,
    Unbounded,
    Pivoted,
}

struct Tableau<T: Scalar> {
    // rows 0..m are constraints, row m is the reduced-cost row;
    // column ncols is the right-hand side.
    t: Matrix<T>,
    basis: Vec<usize>,
    m: usize,
    ncols: usize,
    tol: T,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.t[(row, col)];
        for j in 0..=self.ncols {
            self.t[(row, j)] /= piv;
        }
        for i in 0..=self.m {
            if i == row {
                continue;
            }
            let factor = self.t[(i, col)];
            if factor != T::zero() {
                for j in 0..=self.ncols {
                    let delta = factor * self.t[(row, j)];
                    self.t[(i, j)] -= delta;
                }
            }
        }
        self.basis[row] = col;
    }

    /// One Bland step on the allowed column range.
    fn step(&mut self, allowed_cols: usize) -> Step {
        let mut entering = None;
        for j in 0..allowed_cols {
            if self.t[(self.m, j)] < -self.tol {
                entering = Some(j);
                break;
            }
        }
        let Some(col) = entering else {
            return Step::Done;
        };
        let mut leaving: Option<(usize, T)> = None;
        for i in 0..self.m {
            let coef = self.t[(i, col)];
            if coef > self.tol {
                let ratio = self.t[(i, self.ncols)] / coef;
                let better = match leaving {
                    None => true,
                    Some((best_i, best)) => {
                        ratio < best - self.tol
                            || (ratio < best + self.tol && self.basis[i] < self.basis[best_i])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        match leaving {
            None => Step::Unbounded,
            Some((row, _)) => {
                self.pivot(row, col);
                Step::Pivoted
            }
        }
    }

    fn run(&mut self, allowed_cols: usize, max_iter: usize) -> Result<Step> {
        for _ in 0..max_iter {
            match self.step(allowed_cols) {
                Step::Pivoted => continue,
                other => return Ok(other),
            }
        }
        Err(VarRegError::LpFailure("simplex iteration cap hit".into()))
    }

    /// Rebuild the reduced-cost row for costs `c` given the current basis.
    fn install_costs(&mut self, c: &Vector<T>) {
        for j in 0..self.ncols {
            self.t[(self.m, j)] = if j < c.len() { c[j] } else { T::zero() };
        }
        self.t[(self.m, self.ncols)] = T::zero();
        for i in 0..self.m {
            let cb = if self.basis[i] < c.len() {
                c[self.basis[i]]
            } else {
                T::zero()
            };
            if cb != T::zero() {
                for j in 0..=self.ncols {
                    let delta = cb * self.t[(i, j)];
                    self.t[(self.m, j)] -= delta;
                }
            }
        }
    }
}

/// Solve a standard-form LP. `tol` is the pivot/feasibility tolerance.
pub fn solve_standard<T: Scalar>(lp: &StandardLp<T>, tol: T) -> Result<LpOutcome<T>> {
    let m = lp.a.nrows();
    let n = lp.a.ncols();
    if lp.b.len() != m || lp.c.len() != n {
        return Err(VarRegError::LpFailure(
            "inconsistent LP dimensions".into(),
        ));
    }
    let max_iter = 200 * (m + n + 4);

    // Tableau with artificial columns n..n+m; flip rows so rhs >= 0.
    let ncols = n + m;
    let mut t = Matrix::<T>::zeros(m + 1, ncols + 1);
    for i in 0..m {
        let flip = lp.b[i] < T::zero();
        for j in 0..n {
            t[(i, j)] = if flip { -lp.a[(i, j)] } else { lp.a[(i, j)] };
        }
        t[(i, n + i)] = T::one();
        t[(i, ncols)] = if flip { -lp.b[i] } else { lp.b[i] };
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        m,
        ncols,
        tol,
    };

    // Phase I: minimize the sum of artificials.
    let mut phase1_cost = Vector::<T>::zeros(ncols);
    for j in n..ncols {
        phase1_cost[j] = T::one();
    }
    tab.install_costs(&phase1_cost);
    match tab.run(ncols, max_iter)? {
        Step::Unbounded => {
            return Err(VarRegError::LpFailure("phase I unbounded".into()));
        }
        _ => {}
    }
    let phase1_value = -tab.t[(m, ncols)];
    let feas_slack = tol * T::of(10.0);
    if phase1_value > feas_slack {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive leftover artificials out of the basis; rows that cannot pivot
    // are redundant and harmless (their rhs is ~0), leave them be.
    for i in 0..m {
        if tab.basis[i] >= n {
            let mut pivot_col = None;
            for j in 0..n {
                if tab.t[(i, j)].abs() > tol {
                    pivot_col = Some(j);
                    break;
                }
            }
            if let Some(j) = pivot_col {
                tab.pivot(i, j);
            }
        }
    }

    // Phase II on the original columns only.
    tab.install_costs(&lp.c);
    let status = tab.run(n, max_iter)?;
    if matches!(status, Step::Unbounded) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = Vector::<T>::zeros(n);
    for i in 0..m {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.t[(i, ncols)];
        }
    }
    let value = lp.c.dot(&x);
    Ok(LpOutcome::Optimal { x, value })
}
