//! Minimal cutting-plane driver over the `clarabel` interior-point solver.
//!
//! Rows are only ever added. Each `solve` is a cold solve of the current row
//! set; with an interior-point method that costs about the same as a warm
//! simplex restart and keeps the driver stateless.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};

use crate::error::{HcError, Result};

/// Solver stopping tolerances; well below the 1e-7 feasibility checks downstream.
const SOLVER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cmp {
    Le,
    Ge,
}

/// `min c^T x` subject to rows `a^T x <= b` (stored in that orientation).
pub(crate) struct CuttingPlaneLp {
    cost: Vec<f64>,
    row_idx: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
    rhs: Vec<f64>,
    x: Vec<f64>,
}

impl CuttingPlaneLp {
    /// Minimization model with one variable per `(objective coefficient, bounds)` entry.
    pub fn minimize(columns: impl IntoIterator<Item = (f64, (f64, f64))>) -> Self {
        let mut lp = CuttingPlaneLp {
            cost: Vec::new(),
            row_idx: Vec::new(),
            col_idx: Vec::new(),
            vals: Vec::new(),
            rhs: Vec::new(),
            x: Vec::new(),
        };
        let mut bounds = Vec::new();
        for (j, (c, (lo, hi))) in columns.into_iter().enumerate() {
            lp.cost.push(c);
            bounds.push((j, lo, hi));
        }
        for (j, lo, hi) in bounds {
            if lo.is_finite() {
                lp.add_row(&[(j, 1.0)], Cmp::Ge, lo);
            }
            if hi.is_finite() {
                lp.add_row(&[(j, 1.0)], Cmp::Le, hi);
            }
        }
        lp
    }

    pub fn add_row(&mut self, terms: &[(usize, f64)], op: Cmp, rhs: f64) {
        let sign = match op {
            Cmp::Le => 1.0,
            Cmp::Ge => -1.0,
        };
        let row = self.rhs.len();
        for &(j, a) in terms {
            self.row_idx.push(row);
            self.col_idx.push(j);
            self.vals.push(sign * a);
        }
        self.rhs.push(sign * rhs);
    }

    pub fn solve(&mut self) -> Result<()> {
        let (m, n) = (self.rhs.len(), self.cost.len());
        let a = CscMatrix::new_from_triplets(m, n, self.row_idx.clone(), self.col_idx.clone(), self.vals.clone());
        let p = CscMatrix::zeros((n, n));
        let settings = DefaultSettingsBuilder::default()
            .verbose(false)
            .tol_gap_abs(SOLVER_TOL)
            .tol_gap_rel(SOLVER_TOL)
            .tol_feas(SOLVER_TOL)
            .build()
            .map_err(|e| HcError::Lp(e.to_string()))?;
        let cones = [SupportedConeT::NonnegativeConeT(m)];
        let mut solver = DefaultSolver::new(&p, &self.cost, &a, &self.rhs, &cones, settings)
            .map_err(|e| HcError::Lp(e.to_string()))?;
        solver.solve();
        match solver.solution.status {
            SolverStatus::Solved | SolverStatus::AlmostSolved => {
                self.x = solver.solution.x.clone();
                Ok(())
            }
            other => Err(HcError::Lp(format!("solver stopped with status {other:?}"))),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        assert_eq!(self.x.len(), self.cost.len(), "solve() first");
        self.x.clone()
    }
}
