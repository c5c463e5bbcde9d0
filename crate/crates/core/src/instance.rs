//! Problem instances: two strings, their duos, and a weight function over
//! pairs of equal duos.
//!
//! Positions are 1-based throughout: the duo at position `i` of a string is
//! the pair of characters at positions `i` and `i + 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A pair of consecutive characters in a string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Duo {
    /// 1-based position of the first character.
    pub position: usize,
    pub chars: (char, char),
}

impl fmt::Display for Duo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.chars.0, self.chars.1)
    }
}

/// Returns the `n - 1` duos of `s` in left-to-right order.
pub fn extract_duos(s: &[char]) -> Vec<Duo> {
    s.windows(2)
        .enumerate()
        .map(|(k, w)| Duo {
            position: k + 1,
            chars: (w[0], w[1]),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayForm {
    /// `1 / (1 + |i - j|)`
    Inverse,
    /// `max(1, n - |i - j|)`
    Linear,
    /// `exp(-(i - j)^2 / (2 sigma^2))`
    Gaussian,
}

impl DecayForm {
    pub fn name(self) -> &'static str {
        match self {
            DecayForm::Inverse => "inverse",
            DecayForm::Linear => "linear",
            DecayForm::Gaussian => "gaussian",
        }
    }
}

/// Weight of preserving the duo at `i` in s1 as the duo at `j` in s2.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Unit,
    Proximity { form: DecayForm, sigma: f64 },
    Matrix {
        entries: BTreeMap<(usize, usize), f64>,
        default: f64,
    },
}

impl WeightSpec {
    pub fn proximity(form: DecayForm) -> Self {
        WeightSpec::Proximity { form, sigma: 1.0 }
    }

    /// Short label used in reports, e.g. `unit` or `proximity-inverse`.
    pub fn label(&self) -> String {
        match self {
            WeightSpec::Unit => "unit".to_string(),
            WeightSpec::Proximity { form, .. } => format!("proximity-{}", form.name()),
            WeightSpec::Matrix { .. } => "matrix".to_string(),
        }
    }

    /// Checks that every weight this spec can produce is strictly positive.
    pub fn validate(&self) -> Result<()> {
        match self {
            WeightSpec::Unit => Ok(()),
            WeightSpec::Proximity { sigma, .. } => {
                if sigma.is_finite() && *sigma > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidWeightSpec(format!(
                        "sigma must be a positive finite number, got {sigma}"
                    )))
                }
            }
            WeightSpec::Matrix { entries, default } => {
                if !(default.is_finite() && *default > 0.0) {
                    return Err(Error::NonPositiveWeight {
                        context: "matrix default".to_string(),
                        value: *default,
                    });
                }
                for (&(i, j), &w) in entries {
                    if i == 0 || j == 0 {
                        return Err(Error::InvalidWeightSpec(format!(
                            "matrix entry ({i}, {j}) uses a 0 position; positions are 1-based"
                        )));
                    }
                    if !(w.is_finite() && w > 0.0) {
                        return Err(Error::NonPositiveWeight {
                            context: format!("matrix entry ({i}, {j})"),
                            value: w,
                        });
                    }
                }
                Ok(())
            }
        }
    }

    /// Evaluates the weight for duo positions `i` (in s1) and `j` (in s2) of
    /// strings of length `n`. Callers only ask for pairs of equal duos.
    pub fn eval(&self, n: usize, i: usize, j: usize) -> f64 {
        let dist = i.abs_diff(j) as f64;
        match self {
            WeightSpec::Unit => 1.0,
            WeightSpec::Proximity { form, sigma } => match form {
                DecayForm::Inverse => 1.0 / (1.0 + dist),
                DecayForm::Linear => (n as f64 - dist).max(1.0),
                DecayForm::Gaussian => (-(dist * dist) / (2.0 * sigma * sigma)).exp(),
            },
            WeightSpec::Matrix { entries, default } => {
                entries.get(&(i, j)).copied().unwrap_or(*default)
            }
        }
    }
}

/// Whether s2 must be a character permutation of s1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Strict,
    /// No permutation check; solutions report preserved duos only.
    Relaxed,
}

/// A validated problem instance. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    s1: Vec<char>,
    s2: Vec<char>,
    weight: WeightSpec,
    mode: Mode,
}

impl Instance {
    /// Validates a strict-mode instance.
    pub fn new(s1: &str, s2: &str, weight: WeightSpec) -> Result<Self> {
        Self::with_mode(s1, s2, weight, Mode::Strict)
    }

    pub fn with_mode(s1: &str, s2: &str, weight: WeightSpec, mode: Mode) -> Result<Self> {
        let s1: Vec<char> = s1.chars().collect();
        let s2: Vec<char> = s2.chars().collect();
        if s1.len() != s2.len() {
            return Err(Error::LengthMismatch {
                left: s1.len(),
                right: s2.len(),
            });
        }
        if mode == Mode::Strict && !same_multiset(&s1, &s2) {
            return Err(Error::NotPermutation);
        }
        weight.validate()?;
        Ok(Instance {
            s1,
            s2,
            weight,
            mode,
        })
    }

    pub fn s1(&self) -> &[char] {
        &self.s1
    }

    pub fn s2(&self) -> &[char] {
        &self.s2
    }

    pub fn n(&self) -> usize {
        self.s1.len()
    }

    pub fn weight_spec(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_strict(&self) -> bool {
        self.mode == Mode::Strict
    }

    /// Weight of mapping the s1 duo at `i` onto the s2 duo at `j`.
    pub fn duo_weight(&self, i: usize, j: usize) -> f64 {
        debug_assert_eq!(
            (self.s1[i - 1], self.s1[i]),
            (self.s2[j - 1], self.s2[j]),
            "weights are only defined on equal duos"
        );
        self.weight.eval(self.n(), i, j)
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            s1: self.s1.iter().collect(),
            s2: self.s2.iter().collect(),
            weight: WeightFile::from(&self.weight),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_file()).expect("instance serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str, mode: Mode) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_instance(mode)
    }
}

fn same_multiset(a: &[char], b: &[char]) -> bool {
    let mut counts: HashMap<char, i64> = HashMap::new();
    for &c in a {
        *counts.entry(c).or_default() += 1;
    }
    for &c in b {
        *counts.entry(c).or_default() -= 1;
    }
    counts.values().all(|&v| v == 0)
}

/// On-disk instance layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub s1: String,
    pub s2: String,
    pub weight: WeightFile,
}

impl InstanceFile {
    pub fn into_instance(self, mode: Mode) -> Result<Instance> {
        let weight = self.weight.into_spec()?;
        Instance::with_mode(&self.s1, &self.s2, weight, mode)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightFile {
    Unit,
    Proximity {
        form: DecayForm,
        #[serde(default = "default_sigma")]
        sigma: f64,
    },
    Matrix {
        entries: Vec<(usize, usize, f64)>,
        default: f64,
    },
}

fn default_sigma() -> f64 {
    1.0
}

impl WeightFile {
    fn into_spec(self) -> Result<WeightSpec> {
        Ok(match self {
            WeightFile::Unit => WeightSpec::Unit,
            WeightFile::Proximity { form, sigma } => WeightSpec::Proximity { form, sigma },
            WeightFile::Matrix { entries, default } => {
                let mut map = BTreeMap::new();
                for (i, j, w) in entries {
                    if map.insert((i, j), w).is_some() {
                        return Err(Error::InvalidWeightSpec(format!(
                            "matrix entry ({i}, {j}) listed twice"
                        )));
                    }
                }
                WeightSpec::Matrix {
                    entries: map,
                    default,
                }
            }
        })
    }
}

impl From<&WeightSpec> for WeightFile {
    fn from(spec: &WeightSpec) -> Self {
        match spec {
            WeightSpec::Unit => WeightFile::Unit,
            WeightSpec::Proximity { form, sigma } => WeightFile::Proximity {
                form: *form,
                sigma: *sigma,
            },
            WeightSpec::Matrix { entries, default } => WeightFile::Matrix {
                entries: entries.iter().map(|(&(i, j), &w)| (i, j, w)).collect(),
                default: *default,
            },
        }
    }
}
