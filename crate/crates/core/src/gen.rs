//! Seeded random instances.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`:
//! s1 draws each character uniformly from the first `alphabet` symbols of
//! `a..z A..Z 0..9`, s2 is a Fisher-Yates shuffle of s1, and matrix
//! weights take values `k / 4` for `k` uniform in `1..=20`, drawn for each
//! equal duo pair in `(i, j)` order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{extract_duos, DecayForm, Instance, WeightSpec};

const SYMBOLS: &str = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

pub fn max_alphabet() -> usize {
    SYMBOLS.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Unit,
    Inverse,
    Linear,
    Gaussian,
    Matrix,
}

impl WeightKind {
    pub const ALL: [WeightKind; 5] = [
        WeightKind::Unit,
        WeightKind::Inverse,
        WeightKind::Linear,
        WeightKind::Gaussian,
        WeightKind::Matrix,
    ];
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightKind::Unit => "unit",
            WeightKind::Inverse => "inverse",
            WeightKind::Linear => "linear",
            WeightKind::Gaussian => "gaussian",
            WeightKind::Matrix => "matrix",
        })
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WeightKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown weight kind {s:?}; expected unit, inverse, linear, gaussian or matrix"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub alphabet: usize,
    pub kind: WeightKind,
    /// Scale for the gaussian decay.
    pub sigma: f64,
    pub seed: u64,
}

pub fn generate(params: &GenParams) -> Result<Instance> {
    if params.alphabet == 0 || params.alphabet > max_alphabet() {
        return Err(Error::Parse(format!(
            "alphabet size must be in 1..={}, got {}",
            max_alphabet(),
            params.alphabet
        )));
    }
    let symbols: Vec<char> = SYMBOLS.chars().take(params.alphabet).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let s1: Vec<char> = (0..params.n)
        .map(|_| symbols[rng.gen_range(0..symbols.len())])
        .collect();
    let mut s2 = s1.clone();
    s2.shuffle(&mut rng);

    let weight = match params.kind {
        WeightKind::Unit => WeightSpec::Unit,
        WeightKind::Inverse => WeightSpec::proximity(DecayForm::Inverse),
        WeightKind::Linear => WeightSpec::proximity(DecayForm::Linear),
        WeightKind::Gaussian => WeightSpec::Proximity {
            form: DecayForm::Gaussian,
            sigma: params.sigma,
        },
        WeightKind::Matrix => {
            let mut entries = BTreeMap::new();
            let right = extract_duos(&s2);
            for a in extract_duos(&s1) {
                for b in right.iter().filter(|b| b.chars == a.chars) {
                    let k: u32 = rng.gen_range(1..=20);
                    entries.insert((a.position, b.position), f64::from(k) / 4.0);
                }
            }
            WeightSpec::Matrix {
                entries,
                default: 1.0,
            }
        }
    };
    let s1: String = s1.into_iter().collect();
    let s2: String = s2.into_iter().collect();
    Instance::new(&s1, &s2, weight)
}
