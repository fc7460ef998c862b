//! A small dense two-phase simplex solver with Bland's rule.
//!
//! Problems are stated as `min c.x` over `x >= 0` subject to rows
//! `a.x {<=,=,>=} b`. Instances in this crate stay below a few thousand
//! columns and a dozen rows, so a full dense tableau is the simplest
//! reliable choice. Bland's rule (smallest eligible index, both for the
//! entering column and for ratio-test ties) makes the pivot sequence
//! deterministic and cycle-free.
//!
//! When phase one ends with a positive objective, the problem is
//! infeasible and the phase-one dual vector is reported: it is the Farkas
//! certificate `y` with `y.b > 0` and `y.A <= 0` componentwise over the
//! columns (signs adjusted for rows that were negated to make `b >= 0`).

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Relation of a constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// A linear program `min c.x` s.t. `A x {<=,=,>=} b`, `x >= 0`.
#[derive(Debug, Clone)]
pub struct LpProblem<T: Scalar> {
    objective: Vec<T>,
    rows: Vec<(Vec<T>, Relation, T)>,
}

/// Solver tolerances and limits.
#[derive(Debug, Clone, Copy)]
pub struct LpOptions<T: Scalar> {
    /// Phase-one objective above this value means infeasible.
    pub feasibility_tol: T,
    /// Entries below this magnitude are not acceptable pivots.
    pub pivot_tol: T,
    /// Reduced costs above `-reduced_cost_tol` count as optimal.
    pub reduced_cost_tol: T,
    pub max_iterations: usize,
}

impl<T: Scalar> Default for LpOptions<T> {
    fn default() -> Self {
        LpOptions {
            feasibility_tol: lit(1e-9),
            pivot_tol: lit(1e-11),
            reduced_cost_tol: lit(1e-11),
            max_iterations: 100_000,
        }
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone)]
pub enum LpSolution<T: Scalar> {
    Optimal {
        x: Vec<T>,
        objective: T,
    },
    /// No feasible point; `farkas` is the phase-one dual (one entry per
    /// original row) and `infeasibility` the residual phase-one objective.
    Infeasible {
        farkas: Vec<T>,
        infeasibility: T,
    },
    Unbounded,
}

impl<T: Scalar> LpProblem<T> {
    pub fn minimize(objective: Vec<T>) -> Self {
        LpProblem { objective, rows: Vec::new() }
    }

    pub fn add_row(&mut self, coeffs: Vec<T>, rel: Relation, rhs: T) {
        assert_eq!(coeffs.len(), self.objective.len(), "row width mismatch");
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self) -> Result<LpSolution<T>> {
        self.solve_with(LpOptions::default())
    }

    pub fn solve_with(&self, opts: LpOptions<T>) -> Result<LpSolution<T>> {
        Tableau::build(self).run(opts)
    }
}

struct Tableau<T: Scalar> {
    rows: Vec<Vec<T>>,
    /// Reduced-cost row; its last entry is minus the current objective.
    obj: Vec<T>,
    basis: Vec<usize>,
    objective: Vec<T>,
    n_struct: usize,
    n_total: usize,
    art_start: usize,
    /// Per original row: the initial identity column (artificial if the
    /// row has one, else its slack), its phase-one cost, and whether the
    /// row was negated to make the right-hand side nonnegative.
    dual_col: Vec<usize>,
    dual_cost: Vec<T>,
    flipped: Vec<bool>,
}

impl<T: Scalar> Tableau<T> {
    fn build(p: &LpProblem<T>) -> Self {
        let m = p.rows.len();
        let n = p.num_vars();

        let mut n_slack = 0;
        let mut n_art = 0;
        for &(_, rel, rhs) in &p.rows {
            match oriented(rel, rhs) {
                Relation::Le => n_slack += 1,
                Relation::Ge => {
                    n_slack += 1;
                    n_art += 1;
                }
                Relation::Eq => n_art += 1,
            }
        }
        let slack_start = n;
        let art_start = n + n_slack;
        let n_total = n + n_slack + n_art;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut dual_col = Vec::with_capacity(m);
        let mut dual_cost = Vec::with_capacity(m);
        let mut flipped = Vec::with_capacity(m);
        let mut next_slack = slack_start;
        let mut next_art = art_start;

        for (coeffs, rel, rhs) in &p.rows {
            let flip = *rhs < T::zero();
            let sgn = if flip { -T::one() } else { T::one() };
            let mut row = vec![T::zero(); n_total + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                row[j] = sgn * c;
            }
            row[n_total] = sgn * *rhs;
            match oriented(*rel, *rhs) {
                Relation::Le => {
                    row[next_slack] = T::one();
                    basis.push(next_slack);
                    dual_col.push(next_slack);
                    dual_cost.push(T::zero());
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -T::one();
                    next_slack += 1;
                    row[next_art] = T::one();
                    basis.push(next_art);
                    dual_col.push(next_art);
                    dual_cost.push(T::one());
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = T::one();
                    basis.push(next_art);
                    dual_col.push(next_art);
                    dual_cost.push(T::one());
                    next_art += 1;
                }
            }
            rows.push(row);
            flipped.push(flip);
        }

        Tableau {
            rows,
            obj: vec![T::zero(); n_total + 1],
            basis,
            objective: p.objective.clone(),
            n_struct: n,
            n_total,
            art_start,
            dual_col,
            dual_cost,
            flipped,
        }
    }

    fn run(mut self, opts: LpOptions<T>) -> Result<LpSolution<T>> {
        let has_artificials = self.art_start < self.n_total;

        if has_artificials {
            // Phase one: minimize the sum of artificials.
            let phase1: Vec<T> = (0..self.n_total)
                .map(|j| if j >= self.art_start { T::one() } else { T::zero() })
                .collect();
            self.load_costs(&phase1);
            // Artificials may leave but never re-enter. The phase-one
            // objective is a sum of nonnegative variables, so once it
            // falls below the feasibility tolerance the basis is feasible
            // and further optimization only chases rounding noise.
            if !self.iterate(self.art_start, Some(opts.feasibility_tol), &opts)? {
                return Err(Error::LpFailure("phase one unbounded".into()));
            }
            let infeasibility = -self.obj[self.n_total];
            if infeasibility > opts.feasibility_tol {
                let farkas = self.extract_dual();
                return Ok(LpSolution::Infeasible { farkas, infeasibility });
            }
            self.evict_basic_artificials(&opts);
        }

        // Phase two over the original objective; artificials may not enter.
        let mut phase2 = vec![T::zero(); self.n_total];
        phase2[..self.n_struct].copy_from_slice(&self.objective);
        self.load_costs(&phase2);
        if !self.iterate(self.art_start, None, &opts)? {
            return Ok(LpSolution::Unbounded);
        }

        let mut x = vec![T::zero(); self.n_struct];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_struct {
                x[b] = self.rows[i][self.n_total].max(T::zero());
            }
        }
        let objective = x.iter().zip(&self.objective).map(|(&v, &c)| v * c).sum();
        Ok(LpSolution::Optimal { x, objective })
    }

    fn load_costs(&mut self, cost: &[T]) {
        for j in 0..self.n_total {
            self.obj[j] = cost[j];
        }
        self.obj[self.n_total] = T::zero();
        for i in 0..self.rows.len() {
            let c = cost[self.basis[i]];
            if c != T::zero() {
                for j in 0..=self.n_total {
                    let sub = c * self.rows[i][j];
                    self.obj[j] = self.obj[j] - sub;
                }
            }
        }
    }

    /// Runs simplex iterations until optimal (`Ok(true)`) or unbounded
    /// (`Ok(false)`). Columns at or beyond `enter_limit` may not enter;
    /// with `stop_below` set, iteration ends once the working objective
    /// falls to that value (used by phase one, whose objective cannot go
    /// below zero).
    ///
    /// Pricing is deterministic and cycle-free: steepest reduced cost
    /// (ties by smallest index) while the objective makes progress, with
    /// a switch to Bland's smallest-index rule whenever a run of
    /// degenerate pivots signals stalling.
    ///
    /// A column with a negative reduced cost and no pivotable entry is an
    /// unbounded ray only when its data are trustworthy: a decisive rate
    /// of improvement and moderate column entries. Anything else at that
    /// point is rounding debris from a near-singular basis and is
    /// skipped.
    fn iterate(
        &mut self,
        enter_limit: usize,
        stop_below: Option<T>,
        opts: &LpOptions<T>,
    ) -> Result<bool> {
        const STALL_LIMIT: usize = 12;
        let decisive: T = lit(1e-7);
        let clean_column: T = lit(1e6);
        let mut stalled = 0usize;
        let mut skip: Vec<bool> = Vec::new();

        for _ in 0..opts.max_iterations {
            if let Some(target) = stop_below {
                if -self.obj[self.n_total] <= target {
                    return Ok(true);
                }
            }

            let bland = stalled >= STALL_LIMIT;
            let mut pivoted = false;
            loop {
                let entering = if bland {
                    (0..enter_limit).find(|&j| {
                        self.obj[j] < -opts.reduced_cost_tol && skip.get(j) != Some(&true)
                    })
                } else {
                    let mut best: Option<(usize, T)> = None;
                    for j in 0..enter_limit {
                        if self.obj[j] < -opts.reduced_cost_tol && skip.get(j) != Some(&true) {
                            if best.map_or(true, |(_, rc)| self.obj[j] < rc) {
                                best = Some((j, self.obj[j]));
                            }
                        }
                    }
                    best.map(|(j, _)| j)
                };
                let Some(col) = entering else {
                    return Ok(true);
                };

                let mut leave: Option<(usize, T)> = None;
                for i in 0..self.rows.len() {
                    let a = self.rows[i][col];
                    if a > opts.pivot_tol {
                        let ratio = self.rows[i][self.n_total].max(T::zero()) / a;
                        let better = match leave {
                            None => true,
                            Some((best_i, best_r)) => {
                                ratio < best_r
                                    || (ratio == best_r && self.basis[i] < self.basis[best_i])
                            }
                        };
                        if better {
                            leave = Some((i, ratio));
                        }
                    }
                }
                match leave {
                    Some((row, ratio)) => {
                        self.pivot(row, col);
                        stalled = if ratio > opts.pivot_tol { 0 } else { stalled + 1 };
                        pivoted = true;
                        break;
                    }
                    None => {
                        let max_entry = (0..self.rows.len())
                            .map(|i| self.rows[i][col].abs())
                            .fold(T::zero(), T::max);
                        if self.obj[col] < -decisive && max_entry < clean_column {
                            return Ok(false);
                        }
                        // rounding debris: ignore this column from now on
                        if skip.len() < enter_limit {
                            skip.resize(enter_limit, false);
                        }
                        skip[col] = true;
                    }
                }
            }
            debug_assert!(pivoted);
        }
        Err(Error::LpFailure("iteration limit exceeded".into()))
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col];
        for j in 0..=self.n_total {
            self.rows[row][j] = self.rows[row][j] / piv;
        }
        for i in 0..self.rows.len() {
            if i != row {
                let f = self.rows[i][col];
                if f != T::zero() {
                    for j in 0..=self.n_total {
                        let sub = f * self.rows[row][j];
                        self.rows[i][j] = self.rows[i][j] - sub;
                    }
                    self.rows[i][col] = T::zero();
                }
            }
        }
        let f = self.obj[col];
        if f != T::zero() {
            for j in 0..=self.n_total {
                let sub = f * self.rows[row][j];
                self.obj[j] = self.obj[j] - sub;
            }
            self.obj[col] = T::zero();
        }
        self.basis[row] = col;
    }

    /// After a feasible phase one, pivot remaining zero-level artificials
    /// out of the basis wherever the row has any usable entry. Rows with
    /// no such entry are redundant and stay inert.
    fn evict_basic_artificials(&mut self, opts: &LpOptions<T>) {
        for i in 0..self.rows.len() {
            if self.basis[i] >= self.art_start {
                let col = (0..self.art_start).find(|&j| self.rows[i][j].abs() > opts.pivot_tol);
                if let Some(col) = col {
                    self.pivot(i, col);
                }
            }
        }
    }

    /// Phase-one dual: read the simplex multipliers off the reduced costs
    /// of each row's initial identity column.
    fn extract_dual(&self) -> Vec<T> {
        (0..self.rows.len())
            .map(|i| {
                let y = self.dual_cost[i] - self.obj[self.dual_col[i]];
                if self.flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }
}

/// Relation after negating a row with a negative right-hand side.
fn oriented<T: Scalar>(rel: Relation, rhs: T) -> Relation {
    if rhs < T::zero() {
        match rel {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    } else {
        rel
    }
}
