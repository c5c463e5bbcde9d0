//! Character bijections between s1 and s2, and the duo weight they realize.

use std::collections::{HashMap, VecDeque};

use crate::conflict_graph::conflicts;
use crate::error::{Error, Result};
use crate::instance::Instance;

/// `perm[p - 1] = q` sends s1 position `p` to s2 position `q` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mapping {
    perm: Vec<usize>,
}

impl Mapping {
    /// Checks that `perm` is a character-preserving permutation of `1..=n`.
    pub fn new(instance: &Instance, perm: Vec<usize>) -> Result<Self> {
        let n = instance.n();
        if perm.len() != n {
            return Err(Error::InvalidMapping(format!(
                "expected {n} entries, got {}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n + 1];
        for (p, &q) in perm.iter().enumerate() {
            if q == 0 || q > n || std::mem::replace(&mut seen[q], true) {
                return Err(Error::InvalidMapping(format!(
                    "entry {q} at position {} is out of range or repeated",
                    p + 1
                )));
            }
            if instance.s1()[p] != instance.s2()[q - 1] {
                return Err(Error::InvalidMapping(format!(
                    "position {} ({}) is sent to position {q} ({})",
                    p + 1,
                    instance.s1()[p],
                    instance.s2()[q - 1]
                )));
            }
        }
        Ok(Mapping { perm })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn into_perm(self) -> Vec<usize> {
        self.perm
    }

    pub fn image(&self, p: usize) -> usize {
        self.perm[p - 1]
    }
}

/// Realized weight and the s1 positions of every preserved duo.
#[derive(Debug, Clone, PartialEq)]
pub struct Score {
    pub realized_weight: f64,
    pub preserved: Vec<usize>,
}

/// The duo at s1 position `p` is preserved iff `perm[p + 1] = perm[p] + 1`.
pub fn score_mapping(instance: &Instance, mapping: &Mapping) -> Score {
    let perm = mapping.perm();
    let mut realized_weight = 0.0;
    let mut preserved = Vec::new();
    for p in 1..instance.n() {
        let q = perm[p - 1];
        if perm[p] == q + 1 {
            realized_weight += instance.duo_weight(p, q);
            preserved.push(p);
        }
    }
    Score {
        realized_weight,
        preserved,
    }
}

/// Completes a set of non-conflicting duo pairs `(i, j)` into a full
/// bijection that preserves each of them.
///
/// Each pair pins `i -> j` and `i + 1 -> j + 1`. Unpinned positions are
/// matched per character in ascending position order.
pub fn extend_to_bijection(instance: &Instance, selection: &[(usize, usize)]) -> Result<Mapping> {
    if !instance.is_strict() {
        return Err(Error::RelaxedInstance("bijection reconstruction"));
    }
    let n = instance.n();
    let (s1, s2) = (instance.s1(), instance.s2());
    for (k, &(i, j)) in selection.iter().enumerate() {
        if i == 0 || j == 0 || i >= n || j >= n || s1[i - 1..=i] != s2[j - 1..=j] {
            return Err(Error::InconsistentSelection(format!(
                "({i}, {j}) does not join two equal duos"
            )));
        }
        if let Some(&other) = selection[..k]
            .iter()
            .find(|&&e| e == (i, j) || conflicts(e, (i, j)))
        {
            return Err(Error::InconsistentSelection(format!(
                "({}, {}) and ({i}, {j}) cannot both be preserved",
                other.0, other.1
            )));
        }
    }

    let mut image = vec![0usize; n + 1];
    let mut taken = vec![false; n + 1];
    for &(i, j) in selection {
        for (p, q) in [(i, j), (i + 1, j + 1)] {
            if image[p] == q {
                continue;
            }
            if image[p] != 0 || taken[q] {
                return Err(Error::InconsistentSelection(format!(
                    "position {p} or image {q} pinned twice"
                )));
            }
            image[p] = q;
            taken[q] = true;
        }
    }

    let mut free: HashMap<char, VecDeque<usize>> = HashMap::new();
    for q in 1..=n {
        if !taken[q] {
            free.entry(s2[q - 1]).or_default().push_back(q);
        }
    }
    for p in 1..=n {
        if image[p] == 0 {
            image[p] = free
                .get_mut(&s1[p - 1])
                .and_then(VecDeque::pop_front)
                .expect("strict instances have matching character counts");
        }
    }
    Mapping::new(instance, image[1..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::WeightSpec;

    fn inst(s1: &str, s2: &str) -> Instance {
        Instance::new(s1, s2, WeightSpec::Unit).unwrap()
    }

    #[test]
    fn abacddd_extension() {
        let instance = inst("abacddd", "acddbad");
        let m = extend_to_bijection(&instance, &[(3, 1), (4, 2), (5, 3)]).unwrap();
        assert_eq!(m.perm(), [6, 5, 1, 2, 3, 4, 7]);
        let score = score_mapping(&instance, &m);
        assert_eq!(score.realized_weight, 3.0);
        assert_eq!(score.preserved, [3, 4, 5]);
    }

    #[test]
    fn identity_extension() {
        let instance = inst("abcab", "abcab");
        let all: Vec<_> = (1..5).map(|i| (i, i)).collect();
        let m = extend_to_bijection(&instance, &all).unwrap();
        assert_eq!(m.perm(), [1, 2, 3, 4, 5]);
        assert_eq!(score_mapping(&instance, &m).realized_weight, 4.0);
    }

    #[test]
    fn forced_mapping() {
        let instance = inst("ab", "ba");
        let m = extend_to_bijection(&instance, &[]).unwrap();
        assert_eq!(m.perm(), [2, 1]);
        let score = score_mapping(&instance, &m);
        assert_eq!(score.realized_weight, 0.0);
        assert!(score.preserved.is_empty());
    }

    #[test]
    fn rejects_bad_selections() {
        let instance = inst("abacddd", "acddbad");
        assert!(matches!(
            extend_to_bijection(&instance, &[(5, 3), (6, 3)]),
            Err(Error::InconsistentSelection(_))
        ));
        assert!(matches!(
            extend_to_bijection(&instance, &[(1, 1)]),
            Err(Error::InconsistentSelection(_))
        ));
        let relaxed =
            Instance::with_mode("ab", "ab", WeightSpec::Unit, crate::instance::Mode::Relaxed)
                .unwrap();
        assert!(matches!(
            extend_to_bijection(&relaxed, &[]),
            Err(Error::RelaxedInstance(_))
        ));
    }

    #[test]
    fn mapping_validation() {
        let instance = inst("aab", "aba");
        assert!(Mapping::new(&instance, vec![1, 3, 2]).is_ok());
        assert!(Mapping::new(&instance, vec![1, 2, 3]).is_err());
        assert!(Mapping::new(&instance, vec![1, 1, 2]).is_err());
        assert!(Mapping::new(&instance, vec![1, 3]).is_err());
        assert!(Mapping::new(&instance, vec![0, 3, 2]).is_err());
    }

    #[test]
    fn single_and_empty() {
        let instance = inst("a", "a");
        let m = extend_to_bijection(&instance, &[]).unwrap();
        assert_eq!(m.perm(), [1]);
        let instance = inst("", "");
        assert!(extend_to_bijection(&instance, &[]).unwrap().perm().is_empty());
    }
}
