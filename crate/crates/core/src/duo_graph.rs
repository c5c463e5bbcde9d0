//! Bipartite duo graph: left vertices are the duos of s1, right vertices the
//! duos of s2, and an edge joins every pair of equal duos.

use std::collections::HashMap;

use crate::conflict_graph::conflicts;
use crate::instance::{extract_duos, Duo, Instance};

/// Edge `(a_left, b_right)` of the duo graph, positions 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GEdge {
    pub left: usize,
    pub right: usize,
    pub weight: f64,
}

impl GEdge {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DuoGraph {
    left: Vec<Duo>,
    right: Vec<Duo>,
    edges: Vec<GEdge>,
}

/// Why a set of edges is not a constrained matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingViolation {
    NotInGraph((usize, usize)),
    Duplicate((usize, usize)),
    Conflict((usize, usize), (usize, usize)),
}

impl DuoGraph {
    /// Builds the graph with edges sorted by `(left, right)`.
    pub fn build(instance: &Instance) -> Self {
        let left = extract_duos(instance.s1());
        let right = extract_duos(instance.s2());

        let mut by_chars: HashMap<(char, char), Vec<usize>> = HashMap::new();
        for d in &right {
            by_chars.entry(d.chars).or_default().push(d.position);
        }

        let mut edges = Vec::new();
        for a in &left {
            let Some(positions) = by_chars.get(&a.chars) else {
                continue;
            };
            for &j in positions {
                let weight = instance.duo_weight(a.position, j);
                // Only reachable through underflow of tiny proximity weights.
                if weight > 0.0 {
                    edges.push(GEdge {
                        left: a.position,
                        right: j,
                        weight,
                    });
                }
            }
        }
        DuoGraph { left, right, edges }
    }

    pub fn left(&self) -> &[Duo] {
        &self.left
    }

    pub fn right(&self) -> &[Duo] {
        &self.right
    }

    pub fn edges(&self) -> &[GEdge] {
        &self.edges
    }

    pub fn find_edge(&self, left: usize, right: usize) -> Option<&GEdge> {
        self.edges
            .binary_search_by(|e| (e.left, e.right).cmp(&(left, right)))
            .ok()
            .map(|k| &self.edges[k])
    }

    /// Checks that `matching` is a constrained matching and returns its
    /// total weight. Pairs are examined in input order, so the reported
    /// violation is deterministic.
    pub fn verify_constrained_matching(
        &self,
        matching: &[(usize, usize)],
    ) -> Result<f64, MatchingViolation> {
        let mut total = 0.0;
        for (k, &(i, j)) in matching.iter().enumerate() {
            let edge = self
                .find_edge(i, j)
                .ok_or(MatchingViolation::NotInGraph((i, j)))?;
            for &other in &matching[..k] {
                if other == (i, j) {
                    return Err(MatchingViolation::Duplicate((i, j)));
                }
                if conflicts(other, (i, j)) {
                    return Err(MatchingViolation::Conflict(other, (i, j)));
                }
            }
            total += edge.weight;
        }
        Ok(total)
    }
}
