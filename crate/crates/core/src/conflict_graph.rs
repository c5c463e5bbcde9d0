//! Conflict graph over duo-graph edges.
//!
//! Two edges conflict when they cannot both belong to a constrained
//! matching: they share an endpoint, or their endpoints are consecutive on
//! one side but not on the other. Independent sets of the conflict graph
//! are exactly the constrained matchings of the duo graph.

use crate::duo_graph::{DuoGraph, GEdge};

/// Conflict predicate on two distinct duo-graph edges `(i, j)` and `(k, l)`.
pub fn conflicts((i, j): (usize, usize), (k, l): (usize, usize)) -> bool {
    let shares_left = k == i && l != j;
    let shares_right = l == j && k != i;
    let left_next = k == i + 1 && l != j + 1;
    let left_prev = k + 1 == i && l + 1 != j;
    let right_next = l == j + 1 && k != i + 1;
    let right_prev = l + 1 == j && k + 1 != i;
    shares_left || shares_right || left_next || left_prev || right_next || right_prev
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConflictVertex {
    pub id: usize,
    pub edge: GEdge,
}

impl ConflictVertex {
    pub fn weight(&self) -> f64 {
        self.edge.weight
    }

    pub fn endpoints(&self) -> (usize, usize) {
        self.edge.endpoints()
    }
}

#[derive(Debug, Clone)]
pub struct ConflictGraph {
    vertices: Vec<ConflictVertex>,
    neighbors: Vec<Vec<usize>>,
    /// Row-major adjacency bit matrix.
    bits: Vec<u64>,
    words_per_row: usize,
    at_left: Vec<Vec<usize>>,
    at_right: Vec<Vec<usize>>,
}

/// Which endpoint a clique set is anchored at, relative to `u = (a_i, b_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    LeftPrev,
    Left,
    LeftNext,
    RightPrev,
    Right,
    RightNext,
}

impl Label {
    pub const ALL: [Label; 6] = [
        Label::LeftPrev,
        Label::Left,
        Label::LeftNext,
        Label::RightPrev,
        Label::Right,
        Label::RightNext,
    ];

    /// `Left` and `Right` sets contain their owner vertex.
    pub fn contains_owner(self) -> bool {
        matches!(self, Label::Left | Label::Right)
    }
}

/// The six endpoint-anchored cliques around one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueFamily {
    pub owner: usize,
    /// Indexed in the order of [`Label::ALL`]; member ids ascending.
    pub sets: [Vec<usize>; 6],
}

impl CliqueFamily {
    pub fn get(&self, label: Label) -> &[usize] {
        &self.sets[label as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &[usize])> {
        Label::ALL.iter().map(move |&l| (l, self.get(l)))
    }
}

impl ConflictGraph {
    /// One vertex per duo-graph edge, in edge order.
    pub fn build(g: &DuoGraph) -> Self {
        let vertices: Vec<ConflictVertex> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(id, &edge)| ConflictVertex { id, edge })
            .collect();
        let n_left = g.left().len();
        let n_right = g.right().len();
        let mut at_left = vec![Vec::new(); n_left + 2];
        let mut at_right = vec![Vec::new(); n_right + 2];
        for v in &vertices {
            at_left[v.edge.left].push(v.id);
            at_right[v.edge.right].push(v.id);
        }

        // Any conflicting edge touches a_{i-1..=i+1} or b_{j-1..=j+1}.
        let neighbors: Vec<Vec<usize>> = vertices
            .iter()
            .map(|u| {
                let (i, j) = u.endpoints();
                let mut out: Vec<usize> = (i.saturating_sub(1)..=i + 1)
                    .flat_map(|k| at_left[k].iter())
                    .chain((j.saturating_sub(1)..=j + 1).flat_map(|l| at_right[l].iter()))
                    .copied()
                    .filter(|&v| v != u.id && conflicts(u.endpoints(), vertices[v].endpoints()))
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();

        let words_per_row = vertices.len().div_ceil(64);
        let mut bits = vec![0u64; words_per_row * vertices.len()];
        for (u, ns) in neighbors.iter().enumerate() {
            for &v in ns {
                bits[u * words_per_row + v / 64] |= 1 << (v % 64);
            }
        }

        ConflictGraph {
            vertices,
            neighbors,
            bits,
            words_per_row,
            at_left,
            at_right,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[ConflictVertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &ConflictVertex {
        &self.vertices[id]
    }

    pub fn weights(&self) -> Vec<f64> {
        self.vertices.iter().map(ConflictVertex::weight).collect()
    }

    /// Open neighborhood, ascending.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words_per_row + v / 64] >> (v % 64) & 1 == 1
    }

    /// `{u}` together with its neighbors, ascending.
    pub fn closed_neighborhood(&self, u: usize) -> Vec<usize> {
        let mut out = self.neighbors[u].clone();
        let at = out.partition_point(|&v| v < u);
        out.insert(at, u);
        out
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Adjacent pairs `(u, v)` with `u < v`, lexicographic.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    /// Vertex ids whose duo-graph edge is incident to `a_pos`.
    pub fn incident_left(&self, pos: usize) -> &[usize] {
        self.at_left.get(pos).map_or(&[], Vec::as_slice)
    }

    /// Vertex ids whose duo-graph edge is incident to `b_pos`.
    pub fn incident_right(&self, pos: usize) -> &[usize] {
        self.at_right.get(pos).map_or(&[], Vec::as_slice)
    }

    pub fn clique_family(&self, u: usize) -> CliqueFamily {
        let (i, j) = self.vertices[u].endpoints();
        let conflicting = |ids: &[usize]| -> Vec<usize> {
            ids.iter().copied().filter(|&v| self.adjacent(u, v)).collect()
        };
        let left_prev = if i > 1 { conflicting(self.incident_left(i - 1)) } else { Vec::new() };
        let right_prev = if j > 1 { conflicting(self.incident_right(j - 1)) } else { Vec::new() };
        CliqueFamily {
            owner: u,
            sets: [
                left_prev,
                self.incident_left(i).to_vec(),
                conflicting(self.incident_left(i + 1)),
                right_prev,
                self.incident_right(j).to_vec(),
                conflicting(self.incident_right(j + 1)),
            ],
        }
    }
}
