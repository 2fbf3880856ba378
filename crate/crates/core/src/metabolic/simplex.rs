//! Bounded-variable primal simplex on a dense tableau.
//!
//! Solves `max cᵀx  s.t.  A x = b,  l ≤ x ≤ u` where bounds may be infinite.
//! Phase 1 drives a set of artificial variables (one per row) to zero, phase 2
//! optimizes the real objective. Entering and leaving variables are chosen by
//! Bland's smallest-index rule, which makes the pivot sequence deterministic
//! and prevents cycling on degenerate vertices.

use thiserror::Error;

use crate::grid::Grid;
use crate::num::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("constraint matrix is {rows}x{cols} but got {b} right-hand sides, {c} costs and {l}/{u} bounds")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        b: usize,
        c: usize,
        l: usize,
        u: usize,
    },
    #[error("variable {index} has lower bound above upper bound")]
    InvalidBounds { index: usize },
    #[error("simplex did not converge within {limit} iterations")]
    NumericalFailure { limit: usize },
}

/// Linear program in equality form with per-variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    /// Constraint matrix, `rows × cols` (grid height × width).
    pub a: Grid<T>,
    pub b: Vec<T>,
    /// Objective coefficients; the solver maximizes.
    pub c: Vec<T>,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, objective: T },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimplexOptions {
    /// Iteration cap; `None` means `100 · (rows + cols)`.
    pub pivot_limit: Option<usize>,
}

pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpOutcome<T>, LpError> {
    solve_with(lp, SimplexOptions::default())
}

pub fn solve_with<T: Scalar>(
    lp: &LinearProgram<T>,
    options: SimplexOptions,
) -> Result<LpOutcome<T>, LpError> {
    let m = lp.a.height();
    let n = lp.a.width();
    if lp.b.len() != m || lp.c.len() != n || lp.lower.len() != n || lp.upper.len() != n {
        return Err(LpError::DimensionMismatch {
            rows: m,
            cols: n,
            b: lp.b.len(),
            c: lp.c.len(),
            l: lp.lower.len(),
            u: lp.upper.len(),
        });
    }
    for j in 0..n {
        if lp.lower[j] > lp.upper[j] || lp.lower[j].is_nan() || lp.upper[j].is_nan() {
            return Err(LpError::InvalidBounds { index: j });
        }
    }
    let limit = options.pivot_limit.unwrap_or(100 * (m + n).max(1));

    let mut tab = Tableau::new(lp);
    let mut iterations = 0usize;

    // phase 1: maximize -Σ artificials
    let mut phase1_cost = vec![T::zero(); n + m];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = -T::one();
    }
    match tab.run(&phase1_cost, &mut iterations, limit)? {
        Pass::Optimal => {}
        // the phase 1 objective is bounded above by zero
        Pass::Unbounded => return Err(LpError::NumericalFailure { limit }),
    }
    tab.refresh_basic_values();
    let infeasibility: T = (n..n + m).map(|k| tab.x[k].abs()).sum();
    if infeasibility > T::feasibility_tol() * (T::one() + tab.rhs_scale) {
        return Ok(LpOutcome::Infeasible);
    }
    for k in n..n + m {
        tab.upper[k] = T::zero();
        if tab.row_of[k].is_none() {
            tab.x[k] = T::zero();
        }
    }

    let mut cost = lp.c.clone();
    cost.resize(n + m, T::zero());
    match tab.run(&cost, &mut iterations, limit)? {
        Pass::Optimal => {}
        Pass::Unbounded => return Ok(LpOutcome::Unbounded),
    }
    tab.refresh_basic_values();

    let mut x: Vec<T> = tab.x[..n].to_vec();
    for (j, v) in x.iter_mut().enumerate() {
        // snap tiny bound violations left by elimination round-off
        *v = v.max(lp.lower[j]).min(lp.upper[j]);
    }
    let objective = x.iter().zip(&lp.c).map(|(&v, &c)| v * c).sum();
    Ok(LpOutcome::Optimal { x, objective })
}

enum Pass {
    Optimal,
    Unbounded,
}

struct Tableau<T> {
    rows: usize,
    cols: usize,
    /// Structural column count; columns `structural..cols` are artificials.
    structural: usize,
    /// `B⁻¹ A'`, row-major `rows × cols`.
    t: Vec<T>,
    /// Sign-adjusted `[A | I]` kept for recomputing basic values.
    a: Vec<T>,
    b: Vec<T>,
    basis: Vec<usize>,
    row_of: Vec<Option<usize>>,
    x: Vec<T>,
    lower: Vec<T>,
    upper: Vec<T>,
    rhs_scale: T,
}

impl<T: Scalar> Tableau<T> {
    fn new(lp: &LinearProgram<T>) -> Self {
        let rows = lp.a.height();
        let structural = lp.a.width();
        let cols = structural + rows;

        let mut x = vec![T::zero(); cols];
        for (j, xj) in x.iter_mut().enumerate().take(structural) {
            *xj = initial_value(lp.lower[j], lp.upper[j]);
        }

        let mut a = vec![T::zero(); rows * cols];
        let mut b = lp.b.clone();
        let mut rhs_scale = T::zero();
        for i in 0..rows {
            let row = lp.a.row(i);
            let residual = row
                .iter()
                .zip(&x[..structural])
                .fold(lp.b[i], |acc, (&aij, &xj)| acc - aij * xj);
            let sign = if residual < T::zero() {
                -T::one()
            } else {
                T::one()
            };
            for j in 0..structural {
                a[i * cols + j] = sign * row[j];
            }
            a[i * cols + structural + i] = T::one();
            b[i] = sign * b[i];
            x[structural + i] = residual.abs();
            rhs_scale = rhs_scale.max(residual.abs());
        }

        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        lower.resize(cols, T::zero());
        upper.resize(cols, T::infinity());

        let basis: Vec<usize> = (structural..cols).collect();
        let mut row_of = vec![None; cols];
        for (i, &k) in basis.iter().enumerate() {
            row_of[k] = Some(i);
        }

        Self {
            rows,
            cols,
            structural,
            t: a.clone(),
            a,
            b,
            basis,
            row_of,
            x,
            lower,
            upper,
            rhs_scale,
        }
    }

    fn run(&mut self, cost: &[T], iterations: &mut usize, limit: usize) -> Result<Pass, LpError> {
        let opt_tol = T::optimality_tol();
        let piv_tol = T::pivot_tol();
        loop {
            let Some((entering, direction)) = self.choose_entering(cost, opt_tol) else {
                return Ok(Pass::Optimal);
            };
            if *iterations >= limit {
                return Err(LpError::NumericalFailure { limit });
            }
            *iterations += 1;

            // bound flip distance of the entering variable itself
            let span = self.upper[entering] - self.lower[entering];
            let mut step = if span.is_finite() {
                span
            } else {
                T::infinity()
            };
            let mut leaving: Option<(usize, bool)> = None;

            for i in 0..self.rows {
                let rate = -direction * self.t[i * self.cols + entering];
                let k = self.basis[i];
                let (limit_i, to_upper) = if rate < -piv_tol && self.lower[k].is_finite() {
                    (((self.x[k] - self.lower[k]) / -rate).max(T::zero()), false)
                } else if rate > piv_tol && self.upper[k].is_finite() {
                    (((self.upper[k] - self.x[k]) / rate).max(T::zero()), true)
                } else {
                    continue;
                };
                let better = match leaving {
                    _ if limit_i < step => true,
                    Some((r, _)) => limit_i == step && k < self.basis[r],
                    None => false,
                };
                if better {
                    step = limit_i;
                    leaving = Some((i, to_upper));
                }
            }

            if step.is_infinite() {
                return Ok(Pass::Unbounded);
            }

            self.x[entering] = self.x[entering] + direction * step;
            for i in 0..self.rows {
                let k = self.basis[i];
                let rate = -direction * self.t[i * self.cols + entering];
                self.x[k] = self.x[k] + rate * step;
            }

            if let Some((r, to_upper)) = leaving {
                let k = self.basis[r];
                self.x[k] = if to_upper {
                    self.upper[k]
                } else {
                    self.lower[k]
                };
                self.pivot(r, entering);
            } else {
                // bound flip: snap exactly onto the opposite bound
                self.x[entering] = if direction > T::zero() {
                    self.upper[entering]
                } else {
                    self.lower[entering]
                };
            }
        }
    }

    fn choose_entering(&self, cost: &[T], tol: T) -> Option<(usize, T)> {
        for j in 0..self.cols {
            if self.row_of[j].is_some() {
                continue;
            }
            let mut d = cost[j];
            for i in 0..self.rows {
                let cb = cost[self.basis[i]];
                if cb != T::zero() {
                    d = d - cb * self.t[i * self.cols + j];
                }
            }
            if d > tol && self.x[j] < self.upper[j] {
                return Some((j, T::one()));
            }
            if d < -tol && self.x[j] > self.lower[j] {
                return Some((j, -T::one()));
            }
        }
        None
    }

    fn pivot(&mut self, r: usize, entering: usize) {
        let cols = self.cols;
        let p = self.t[r * cols + entering];
        for j in 0..cols {
            self.t[r * cols + j] = self.t[r * cols + j] / p;
        }
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * cols + entering];
            if f == T::zero() {
                continue;
            }
            for j in 0..cols {
                let v = self.t[r * cols + j];
                if v != T::zero() {
                    self.t[i * cols + j] = self.t[i * cols + j] - f * v;
                }
            }
            self.t[i * cols + entering] = T::zero();
        }
        self.t[r * cols + entering] = T::one();

        let old = self.basis[r];
        self.row_of[old] = None;
        self.basis[r] = entering;
        self.row_of[entering] = Some(r);
    }

    /// Recomputes `x_B = B⁻¹ (b − N x_N)` from the original data. The
    /// artificial block of the tableau holds `B⁻¹` because `A'` carries the
    /// identity there.
    fn refresh_basic_values(&mut self) {
        let cols = self.cols;
        let mut rhs = self.b.clone();
        for j in 0..cols {
            if self.row_of[j].is_some() || self.x[j] == T::zero() {
                continue;
            }
            for (i, r) in rhs.iter_mut().enumerate() {
                *r = *r - self.a[i * cols + j] * self.x[j];
            }
        }
        for i in 0..self.rows {
            let mut v = T::zero();
            for (k, &r) in rhs.iter().enumerate() {
                v = v + self.t[i * cols + self.structural + k] * r;
            }
            self.x[self.basis[i]] = v;
        }
    }
}

fn initial_value<T: Scalar>(lower: T, upper: T) -> T {
    if lower.is_finite() {
        lower
    } else if upper.is_finite() {
        upper
    } else {
        T::zero()
    }
}
