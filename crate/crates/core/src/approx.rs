//! Local-ratio rounding of the LP solution and the end-to-end solver.
//!
//! Each level picks an alive vertex `u` whose closed-neighborhood LP mass
//! is smallest (never above 6), subtracts `w(u)` from every alive vertex in
//! `N[u]`, and recurses on what stays positive. Unwinding adds `u` back
//! unless a vertex already chosen deeper is adjacent to it. The recursion
//! is kept as an explicit stack.

use crate::conflict_graph::ConflictGraph;
use crate::duo_graph::DuoGraph;
use crate::error::Result;
use crate::instance::Instance;
use crate::lp::{FractionalSolution, LpModel, SimplexOptions};
use crate::mapping::{extend_to_bijection, score_mapping, Mapping};

/// Approximation factor of the rounding.
pub const APPROX_FACTOR: f64 = 6.0;
/// Weights at or below this are treated as non-positive.
pub const EPS_ZERO: f64 = 1e-12;
/// Neighborhood sums within this of the minimum count as tied.
const TIE_EPS: f64 = 1e-12;

/// Residual weights during the decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    alive: Vec<bool>,
}

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Self {
        let alive = vec![true; values.len()];
        WeightVector { values, alive }
    }

    pub fn from_graph(gc: &ConflictGraph) -> Self {
        Self::new(gc.weights())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn alive(&self) -> &[bool] {
        &self.alive
    }

    fn prune(&mut self) {
        for (alive, &w) in self.alive.iter_mut().zip(&self.values) {
            if *alive && w <= EPS_ZERO {
                *alive = false;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndependentSet {
    /// Vertex ids, ascending.
    pub vertices: Vec<usize>,
    /// Total weight under the weights the rounding started from.
    pub weight: f64,
}

/// One level of the decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundLevel {
    pub vertex: usize,
    /// `w(u)` at this level, subtracted from every alive vertex of `N[u]`.
    pub amount: f64,
    /// LP mass on the alive part of `N[u]`.
    pub neighborhood_x: f64,
    /// Alive vertices of `N[u]` when the level was entered, ascending.
    pub support: Vec<usize>,
}

fn argmin_first(alive: &[bool], sums: &[f64]) -> Option<usize> {
    let min = alive
        .iter()
        .zip(sums)
        .filter(|(a, _)| **a)
        .map(|(_, &s)| s)
        .min_by(f64::total_cmp)?;
    (0..sums.len()).find(|&u| alive[u] && sums[u] <= min + TIE_EPS)
}

/// The alive vertex with the least LP mass on its alive closed
/// neighborhood, smallest id on ties.
pub fn select_vertex(gc: &ConflictGraph, alive: &[bool], x: &[f64]) -> Option<usize> {
    let sums: Vec<f64> = (0..gc.len())
        .map(|u| {
            if !alive[u] {
                return 0.0;
            }
            x[u] + gc
                .neighbors(u)
                .iter()
                .filter(|&&v| alive[v])
                .map(|&v| x[v])
                .sum::<f64>()
        })
        .collect();
    argmin_first(alive, &sums)
}

pub fn local_ratio_round(gc: &ConflictGraph, x: &[f64], w: WeightVector) -> IndependentSet {
    round(gc, x, w, None)
}

/// Like [`local_ratio_round`], also returning every decomposition level.
pub fn local_ratio_round_traced(
    gc: &ConflictGraph,
    x: &[f64],
    w: WeightVector,
) -> (IndependentSet, Vec<RoundLevel>) {
    let mut levels = Vec::new();
    let set = round(gc, x, w, Some(&mut levels));
    (set, levels)
}

fn round(
    gc: &ConflictGraph,
    x: &[f64],
    mut w: WeightVector,
    mut trace: Option<&mut Vec<RoundLevel>>,
) -> IndependentSet {
    let n = gc.len();
    assert_eq!(x.len(), n);
    assert_eq!(w.values.len(), n);

    let original = w.values.clone();
    w.prune();
    // sums[u] tracks the LP mass on the alive part of N[u].
    let mut sums: Vec<f64> = (0..n)
        .map(|u| {
            let own = if w.alive[u] { x[u] } else { 0.0 };
            own + gc
                .neighbors(u)
                .iter()
                .filter(|&&v| w.alive[v])
                .map(|&v| x[v])
                .sum::<f64>()
        })
        .collect();

    let mut stack = Vec::new();
    let mut dead = Vec::new();
    while let Some(u) = argmin_first(&w.alive, &sums) {
        let amount = w.values[u];
        if let Some(levels) = trace.as_deref_mut() {
            levels.push(RoundLevel {
                vertex: u,
                amount,
                neighborhood_x: sums[u],
                support: gc
                    .closed_neighborhood(u)
                    .into_iter()
                    .filter(|&v| w.alive[v])
                    .collect(),
            });
        }
        stack.push(u);

        dead.clear();
        for v in std::iter::once(u).chain(gc.neighbors(u).iter().copied()) {
            if !w.alive[v] {
                continue;
            }
            w.values[v] = if v == u { 0.0 } else { w.values[v] - amount };
            if w.values[v] <= EPS_ZERO {
                w.alive[v] = false;
                dead.push(v);
            }
        }
        for &v in &dead {
            sums[v] -= x[v];
            for &t in gc.neighbors(v) {
                sums[t] -= x[v];
            }
        }
    }

    let mut chosen = vec![false; n];
    while let Some(u) = stack.pop() {
        if !gc.neighbors(u).iter().any(|&v| chosen[v]) {
            chosen[u] = true;
        }
    }
    let vertices: Vec<usize> = (0..n).filter(|&v| chosen[v]).collect();
    let weight = vertices.iter().map(|&v| original[v]).sum();
    IndependentSet { vertices, weight }
}

/// A selected duo pair with its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectedPair {
    pub s1_duo: usize,
    pub s2_duo: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub selected: Vec<SelectedPair>,
    /// Full bijection; `None` for relaxed instances.
    pub mapping: Option<Mapping>,
    /// s1 positions of duos preserved by `mapping` (or by the selection in
    /// relaxed mode).
    pub preserved: Vec<usize>,
    pub selected_weight: f64,
    pub realized_weight: f64,
    pub lp_objective: f64,
    /// `lp_objective / 6`; the selection never falls below it.
    pub guarantee: f64,
}

/// Everything built along the way, for callers that want to inspect it.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub duo_graph: DuoGraph,
    pub conflict_graph: ConflictGraph,
    pub lp: LpModel,
    pub x: FractionalSolution,
    pub selection: IndependentSet,
    pub report: SolveReport,
}

pub fn solve_mwdsm(instance: &Instance) -> Result<SolveReport> {
    Ok(run_pipeline(instance, &SimplexOptions::default())?.report)
}

pub fn run_pipeline(instance: &Instance, opts: &SimplexOptions) -> Result<Pipeline> {
    let duo_graph = DuoGraph::build(instance);
    let conflict_graph = ConflictGraph::build(&duo_graph);
    let lp = LpModel::build(&conflict_graph);
    let x = lp.solve_with(opts)?;
    let selection = local_ratio_round(
        &conflict_graph,
        &x.values,
        WeightVector::from_graph(&conflict_graph),
    );

    let selected: Vec<SelectedPair> = selection
        .vertices
        .iter()
        .map(|&v| {
            let e = conflict_graph.vertex(v).edge;
            SelectedPair {
                s1_duo: e.left,
                s2_duo: e.right,
                weight: e.weight,
            }
        })
        .collect();
    let pairs: Vec<(usize, usize)> = selected.iter().map(|p| (p.s1_duo, p.s2_duo)).collect();

    let (mapping, preserved, realized_weight) = if instance.is_strict() {
        let mapping = extend_to_bijection(instance, &pairs)?;
        let score = score_mapping(instance, &mapping);
        (Some(mapping), score.preserved, score.realized_weight)
    } else {
        (None, pairs.iter().map(|p| p.0).collect(), selection.weight)
    };

    let report = SolveReport {
        selected,
        mapping,
        preserved,
        selected_weight: selection.weight,
        realized_weight,
        lp_objective: x.objective,
        guarantee: x.objective / APPROX_FACTOR,
    };
    Ok(Pipeline {
        duo_graph,
        conflict_graph,
        lp,
        x,
        selection,
        report,
    })
}
