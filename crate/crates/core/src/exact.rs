//! Exhaustive oracles for small instances: maximum-weight independent set by
//! branch and bound, and the mapping objective by enumerating every
//! character-preserving bijection.

use std::collections::BTreeMap;

use crate::conflict_graph::ConflictGraph;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::mapping::{score_mapping, Mapping};

pub const DEFAULT_MWIS_LIMIT: usize = 26;
pub const DEFAULT_MAPPING_LIMIT: usize = 8;
/// Hard cap from the 128-bit vertex masks.
pub const MAX_MWIS_VERTICES: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult<W> {
    pub weight: f64,
    pub witness: W,
    /// Search nodes (branch and bound) or bijections (enumeration) visited.
    pub explored: u64,
}

fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

struct Mwis<'a> {
    weights: &'a [f64],
    adj: Vec<u128>,
    best_weight: f64,
    best_set: u128,
    explored: u64,
}

impl Mwis<'_> {
    /// Greedy clique cover of `cand` in id order; sum of per-clique maxima
    /// bounds any independent subset.
    fn bound(&self, mut cand: u128) -> f64 {
        let mut total = 0.0;
        while cand != 0 {
            let first = cand.trailing_zeros() as usize;
            let mut clique = 1u128 << first;
            let mut common = self.adj[first] & cand;
            let mut best = self.weights[first];
            while common != 0 {
                let v = common.trailing_zeros() as usize;
                clique |= 1 << v;
                common &= self.adj[v];
                best = best.max(self.weights[v]);
            }
            cand &= !clique;
            total += best;
        }
        total
    }

    /// Include-first branching on the smallest candidate id visits maximal
    /// independent sets in lexicographic order, so the first optimum kept
    /// is the lexicographically smallest.
    fn search(&mut self, cand: u128, set: u128, weight: f64) {
        self.explored += 1;
        if cand == 0 {
            if weight > self.best_weight && !ties(weight, self.best_weight) {
                self.best_weight = weight;
                self.best_set = set;
            }
            return;
        }
        let bound = weight + self.bound(cand);
        if bound < self.best_weight || ties(bound, self.best_weight) {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        let bit = 1u128 << v;
        self.search(cand & !bit & !self.adj[v], set | bit, weight + self.weights[v]);
        self.search(cand & !bit, set, weight);
    }
}

/// Exact maximum-weight independent set of `gc`.
pub fn exact_mwis(gc: &ConflictGraph, limit: usize) -> Result<ExactResult<Vec<usize>>> {
    let limit = limit.min(MAX_MWIS_VERTICES);
    if gc.len() > limit {
        return Err(Error::TooLarge {
            what: "conflict-graph vertex count",
            size: gc.len(),
            limit,
        });
    }
    let weights = gc.weights();
    let adj: Vec<u128> = (0..gc.len())
        .map(|u| gc.neighbors(u).iter().fold(0u128, |m, &v| m | 1 << v))
        .collect();
    // Non-positive vertices never improve a set.
    let cand = (0..gc.len())
        .filter(|&v| weights[v] > 0.0)
        .fold(0u128, |m, v| m | 1 << v);
    let mut search = Mwis {
        weights: &weights,
        adj,
        best_weight: 0.0,
        best_set: 0,
        explored: 0,
    };
    search.search(cand, 0, 0.0);
    let witness: Vec<usize> = (0..gc.len())
        .filter(|&v| search.best_set >> v & 1 == 1)
        .collect();
    let weight = witness.iter().map(|&v| weights[v]).sum();
    Ok(ExactResult {
        weight,
        witness,
        explored: search.explored,
    })
}

/// Best objective over every character-preserving bijection.
pub fn exact_by_mapping_enumeration(
    instance: &Instance,
    limit: usize,
) -> Result<ExactResult<Mapping>> {
    if !instance.is_strict() {
        return Err(Error::RelaxedInstance("mapping enumeration"));
    }
    let n = instance.n();
    if n > limit {
        return Err(Error::TooLarge {
            what: "string length",
            size: n,
            limit,
        });
    }

    // Per character: s1 positions and the s2 positions they may take.
    let mut classes: BTreeMap<char, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (p, &c) in instance.s1().iter().enumerate() {
        classes.entry(c).or_default().0.push(p + 1);
    }
    for (q, &c) in instance.s2().iter().enumerate() {
        classes.entry(c).or_default().1.push(q + 1);
    }
    let classes: Vec<(Vec<usize>, Vec<usize>)> = classes.into_values().collect();

    let mut state = Enumeration {
        instance,
        classes: &classes,
        perm: vec![0; n],
        best: None,
        explored: 0,
    };
    state.class(0);
    let (weight, perm) = state.best.expect("at least one bijection exists");
    Ok(ExactResult {
        weight,
        witness: Mapping::new(instance, perm)?,
        explored: state.explored,
    })
}

struct Enumeration<'a> {
    instance: &'a Instance,
    classes: &'a [(Vec<usize>, Vec<usize>)],
    perm: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
    explored: u64,
}

impl Enumeration<'_> {
    fn class(&mut self, k: usize) {
        if k == self.classes.len() {
            self.score();
            return;
        }
        let mut used = vec![false; self.classes[k].1.len()];
        self.assign(k, 0, &mut used);
    }

    fn assign(&mut self, k: usize, idx: usize, used: &mut [bool]) {
        let (sources, targets) = &self.classes[k];
        if idx == sources.len() {
            self.class(k + 1);
            return;
        }
        for t in 0..targets.len() {
            if !used[t] {
                used[t] = true;
                self.perm[sources[idx] - 1] = targets[t];
                self.assign(k, idx + 1, used);
                used[t] = false;
            }
        }
    }

    fn score(&mut self) {
        self.explored += 1;
        let mapping = Mapping::new(self.instance, self.perm.clone())
            .expect("enumeration only builds character-preserving permutations");
        let weight = score_mapping(self.instance, &mapping).realized_weight;
        let better = match &self.best {
            None => true,
            Some((bw, bp)) => {
                if ties(weight, *bw) {
                    self.perm < *bp
                } else {
                    weight > *bw
                }
            }
        };
        if better {
            self.best = Some((weight, self.perm.clone()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duo_graph::DuoGraph;
    use crate::instance::{DecayForm, WeightSpec};

    fn gc_of(inst: &Instance) -> ConflictGraph {
        ConflictGraph::build(&DuoGraph::build(inst))
    }

    /// Plain subset enumeration over every vertex subset.
    fn subsets_oracle(gc: &ConflictGraph) -> (f64, Vec<usize>) {
        let n = gc.len();
        let mut best = (0.0, Vec::new());
        for mask in 0u64..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let independent = set
                .iter()
                .all(|&a| set.iter().all(|&b| a == b || !gc.adjacent(a, b)));
            if independent {
                let w: f64 = set.iter().map(|&v| gc.vertex(v).weight()).sum();
                if w > best.0 + 1e-12 || (ties(w, best.0) && set < best.1) {
                    best = (w, set);
                }
            }
        }
        best
    }

    #[test]
    fn aaa_optimum() {
        let inst = Instance::new("aaa", "aaa", WeightSpec::Unit).unwrap();
        let gc = gc_of(&inst);
        let res = exact_mwis(&gc, DEFAULT_MWIS_LIMIT).unwrap();
        assert_eq!(res.weight, 2.0);
        let edges: Vec<_> = res.witness.iter().map(|&v| gc.vertex(v).endpoints()).collect();
        assert_eq!(edges, [(1, 1), (2, 2)]);
        assert_eq!(subsets_oracle(&gc), (2.0, res.witness.clone()));
        assert_eq!(
            exact_by_mapping_enumeration(&inst, DEFAULT_MAPPING_LIMIT).unwrap().weight,
            2.0
        );
    }

    #[test]
    fn abacddd_optimum() {
        let inst = Instance::new("abacddd", "acddbad", WeightSpec::Unit).unwrap();
        let gc = gc_of(&inst);
        let res = exact_mwis(&gc, DEFAULT_MWIS_LIMIT).unwrap();
        assert_eq!(res.weight, 3.0);
        let edges: Vec<_> = res.witness.iter().map(|&v| gc.vertex(v).endpoints()).collect();
        // Lexicographically smallest optimum; {(3,1),(4,2),(5,3)} ties with it.
        assert_eq!(edges, [(2, 5), (4, 2), (5, 3)]);
        assert_eq!(subsets_oracle(&gc).1, res.witness);
        let g = DuoGraph::build(&inst);
        assert_eq!(g.verify_constrained_matching(&[(3, 1), (4, 2), (5, 3)]), Ok(3.0));
        let enumerated = exact_by_mapping_enumeration(&inst, DEFAULT_MAPPING_LIMIT).unwrap();
        assert_eq!(enumerated.weight, 3.0);
    }

    #[test]
    fn small_fixtures() {
        let inst = Instance::new("ab", "ab", WeightSpec::Unit).unwrap();
        let gc = gc_of(&inst);
        assert_eq!(exact_mwis(&gc, 26).unwrap().witness, [0]);
        let m = exact_by_mapping_enumeration(&inst, 8).unwrap();
        assert_eq!(m.weight, 1.0);
        assert_eq!(m.witness.perm(), [1, 2]);

        let inst = Instance::new("", "", WeightSpec::Unit).unwrap();
        assert_eq!(exact_by_mapping_enumeration(&inst, 8).unwrap().weight, 0.0);
        assert_eq!(exact_mwis(&gc_of(&inst), 26).unwrap().weight, 0.0);
    }

    #[test]
    fn limits() {
        let inst = Instance::new("aaaaaaaa", "aaaaaaaa", WeightSpec::Unit).unwrap();
        let gc = gc_of(&inst);
        assert!(matches!(
            exact_mwis(&gc, DEFAULT_MWIS_LIMIT),
            Err(Error::TooLarge { size: 49, .. })
        ));
        assert!(exact_mwis(&gc, 64).is_ok());
        let inst = Instance::new("abcabcabc", "cbacbacba", WeightSpec::Unit).unwrap();
        assert!(matches!(
            exact_by_mapping_enumeration(&inst, DEFAULT_MAPPING_LIMIT),
            Err(Error::TooLarge { size: 9, .. })
        ));
    }

    #[test]
    fn branch_and_bound_matches_subsets() {
        let cases = [
            ("abaabbab", "babaabab", WeightSpec::proximity(DecayForm::Linear)),
            ("aabbaab", "baabbaa", WeightSpec::proximity(DecayForm::Inverse)),
            ("aaaaa", "aaaaa", WeightSpec::proximity(DecayForm::Gaussian)),
        ];
        for (s1, s2, w) in cases {
            let inst = Instance::new(s1, s2, w).unwrap();
            let gc = gc_of(&inst);
            assert!(gc.len() <= 20);
            let (w, set) = subsets_oracle(&gc);
            let res = exact_mwis(&gc, 26).unwrap();
            assert!(ties(res.weight, w), "{s1}: {} vs {w}", res.weight);
            assert_eq!(res.witness, set, "{s1}");
            let by_mapping = exact_by_mapping_enumeration(&inst, 8).unwrap();
            assert!((by_mapping.weight - w).abs() < 1e-9, "{s1}");
        }
    }

    #[test]
    fn adding_isolated_vertex_never_hurts() {
        // "ab" + "xy" keeps every "ab" edge and adds an unrelated one.
        let base = Instance::new("abab", "baba", WeightSpec::Unit).unwrap();
        let grown = Instance::new("ababxy", "babaxy", WeightSpec::Unit).unwrap();
        let a = exact_mwis(&gc_of(&base), 26).unwrap().weight;
        let b = exact_mwis(&gc_of(&grown), 26).unwrap().weight;
        assert!(b >= a);
    }
}
