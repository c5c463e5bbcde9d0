//! Clique-constrained packing LP over the conflict graph.
//!
//! The program is
//!
//! ```text
//! maximize    sum_u w(u) x(u)
//! subject to  sum_{v in C} x(v) <= 1     for every clique C in the family
//!             x(u) >= 0
//! ```
//!
//! where the clique family is generated from the six endpoint-anchored
//! sets around every vertex. All coefficients are 0/1 and the right-hand
//! side is all ones, so `x = 0` is a basic feasible start.

use std::collections::HashSet;
use std::io::{self, Write};

use crate::conflict_graph::ConflictGraph;
use crate::error::Result;
use crate::simplex;

/// Pivoting and feasibility tolerance.
pub const EPS_FEAS: f64 = 1e-9;
/// Tolerance for objective comparisons.
pub const EPS_OBJ: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    /// Objective coefficient per variable (one variable per conflict vertex).
    pub objective: Vec<f64>,
    /// Each set `C` stands for `sum_{v in C} x(v) <= 1`. Members ascending.
    pub constraints: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub values: Vec<f64>,
    pub objective: f64,
}

impl FractionalSolution {
    /// Sum of `x` over the closed neighborhood of `u`.
    pub fn neighborhood_sum(&self, gc: &ConflictGraph, u: usize) -> f64 {
        self.values[u] + gc.neighbors(u).iter().map(|&v| self.values[v]).sum::<f64>()
    }
}

/// Every clique constraint generated for `u` before deduplication.
///
/// The sets anchored at `u`'s own endpoints already contain `u`; the four
/// sets anchored at neighboring positions hold only vertices conflicting
/// with `u`, so `u` is added to them. Each result is still a clique, and
/// every conflicting pair then shares at least one constraint.
pub fn raw_constraints(gc: &ConflictGraph, u: usize) -> Vec<Vec<usize>> {
    gc.clique_family(u)
        .iter()
        .filter(|(_, set)| !set.is_empty())
        .map(|(label, set)| {
            let mut c = set.to_vec();
            if !label.contains_owner() {
                let at = c.partition_point(|&v| v < u);
                c.insert(at, u);
            }
            c
        })
        .collect()
}

impl LpModel {
    pub fn build(gc: &ConflictGraph) -> Self {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut constraints = Vec::new();
        for u in 0..gc.len() {
            for c in raw_constraints(gc, u) {
                if seen.insert(c.clone()) {
                    constraints.push(c);
                }
            }
        }
        LpModel {
            objective: gc.weights(),
            constraints,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(w, v)| w * v).sum()
    }

    /// True iff `x >= -eps` and every constraint holds within `eps`.
    pub fn is_feasible(&self, x: &[f64], eps: f64) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|&v| v >= -eps)
            && self
                .constraints
                .iter()
                .all(|c| c.iter().map(|&v| x[v]).sum::<f64>() <= 1.0 + eps)
    }

    pub fn solve(&self) -> Result<FractionalSolution> {
        self.solve_with(&SimplexOptions::default())
    }

    pub fn solve_with(&self, opts: &SimplexOptions) -> Result<FractionalSolution> {
        if self.num_vars() == 0 {
            return Ok(FractionalSolution {
                values: Vec::new(),
                objective: 0.0,
            });
        }
        let values = simplex::solve(self, opts)?;
        let objective = self.objective_value(&values);
        Ok(FractionalSolution { values, objective })
    }

    /// Writes the model in CPLEX LP text format.
    pub fn write_lp<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "\\ clique-constrained independent set relaxation")?;
        writeln!(out, "Maximize")?;
        write!(out, " obj:")?;
        if self.objective.is_empty() {
            write!(out, " 0 x0")?;
        }
        for (k, w) in self.objective.iter().enumerate() {
            write!(out, " + {w} x{k}")?;
        }
        writeln!(out)?;
        writeln!(out, "Subject To")?;
        for (r, c) in self.constraints.iter().enumerate() {
            let terms: Vec<String> = c.iter().map(|v| format!("x{v}")).collect();
            writeln!(out, " c{r}: {} <= 1", terms.join(" + "))?;
        }
        writeln!(out, "Bounds")?;
        for k in 0..self.num_vars() {
            writeln!(out, " x{k} >= 0")?;
        }
        writeln!(out, "End")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest-index entering and leaving variables. Never cycles.
    Bland,
    /// Largest reduced cost, falling back to Bland permanently after a run
    /// of degenerate pivots.
    Dantzig,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_pivots: u64,
    pub rule: PivotRule,
    /// Consecutive degenerate pivots tolerated before switching to Bland.
    pub degenerate_streak: u32,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_pivots: 1_000_000,
            rule: PivotRule::Dantzig,
            degenerate_streak: 50,
        }
    }
}
