//! Randomized benchmark: approximation weight against the LP bound and,
//! when small enough, the exact optimum.

use std::io::{self, Write};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::approx::solve_mwdsm;
use crate::conflict_graph::ConflictGraph;
use crate::duo_graph::DuoGraph;
use crate::error::Result;
use crate::exact::{exact_mwis, DEFAULT_MWIS_LIMIT};
use crate::gen::{generate, GenParams, WeightKind};
use crate::solution::round_sig;

pub const CSV_HEADER: &str = "seed,n,alphabet,weight_kind,alg_weight,lp_objective,exact_weight,ratio,ms";

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub alphabet_min: usize,
    pub alphabet_max: usize,
    pub kinds: Vec<WeightKind>,
    pub sigma: f64,
    pub seed: u64,
    pub mwis_limit: usize,
    /// Record wall time per trial. Off by default so output is reproducible.
    pub timing: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            trials: 10,
            n_min: 2,
            n_max: 8,
            alphabet_min: 1,
            alphabet_max: 3,
            kinds: vec![WeightKind::Unit],
            sigma: 2.0,
            seed: 0,
            mwis_limit: DEFAULT_MWIS_LIMIT,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub seed: u64,
    pub n: usize,
    pub alphabet: usize,
    pub weight_kind: String,
    pub alg_weight: f64,
    pub lp_objective: f64,
    pub exact_weight: Option<f64>,
    /// `alg / exact`, taken as 1 when both are zero.
    pub ratio: Option<f64>,
    pub ms: Option<u128>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSummary {
    pub rows: usize,
    pub with_exact: usize,
    pub min_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
}

/// Trial `t` uses seed `seed + t` for both its shape and its instance, and
/// weight kind `kinds[t % kinds.len()]`.
pub fn run_trial(cfg: &BenchConfig, t: usize) -> Result<BenchRecord> {
    let seed = cfg.seed.wrapping_add(t as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.n_min..=cfg.n_max.max(cfg.n_min));
    let alphabet = rng.gen_range(cfg.alphabet_min..=cfg.alphabet_max.max(cfg.alphabet_min));
    let kind = cfg.kinds[t % cfg.kinds.len()];
    let instance = generate(&GenParams {
        n,
        alphabet,
        kind,
        sigma: cfg.sigma,
        seed,
    })?;

    let start = Instant::now();
    let report = solve_mwdsm(&instance)?;
    let ms = start.elapsed().as_millis();

    let gc = ConflictGraph::build(&DuoGraph::build(&instance));
    let exact_weight = if gc.len() <= cfg.mwis_limit {
        Some(exact_mwis(&gc, cfg.mwis_limit)?.weight)
    } else {
        None
    };
    let ratio = exact_weight.map(|opt| {
        if opt > 0.0 {
            report.selected_weight / opt
        } else {
            1.0
        }
    });
    Ok(BenchRecord {
        seed,
        n,
        alphabet,
        weight_kind: instance.weight_spec().label(),
        alg_weight: report.selected_weight,
        lp_objective: report.lp_objective,
        exact_weight,
        ratio,
        ms: cfg.timing.then_some(ms),
    })
}

/// Runs every trial; rows come back in trial order.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.kinds.is_empty() {
        return Ok(Vec::new());
    }
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect()
}

pub fn summarize(records: &[BenchRecord]) -> BenchSummary {
    let ratios: Vec<f64> = records.iter().filter_map(|r| r.ratio).collect();
    BenchSummary {
        rows: records.len(),
        with_exact: ratios.len(),
        min_ratio: ratios.iter().copied().min_by(f64::total_cmp),
        mean_ratio: (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| round_sig(v).to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(records: &[BenchRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.seed,
            r.n,
            r.alphabet,
            r.weight_kind,
            round_sig(r.alg_weight),
            round_sig(r.lp_objective),
            opt(r.exact_weight),
            opt(r.ratio),
            r.ms.map(|m| m.to_string()).unwrap_or_default()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv(cfg: &BenchConfig) -> String {
        let mut buf = Vec::new();
        write_csv(&run_bench(cfg).unwrap(), &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn ten_unit_trials() {
        let cfg = BenchConfig {
            seed: 11,
            mwis_limit: 64,
            ..BenchConfig::default()
        };
        let records = run_bench(&cfg).unwrap();
        assert_eq!(records.len(), 10);
        for r in &records {
            assert!(r.n <= 8);
            let ratio = r.ratio.expect("n <= 8 stays inside the oracle limit");
            assert!(ratio >= 1.0 / 6.0 - 1e-6);
        }
        let summary = summarize(&records);
        assert_eq!(summary.with_exact, 10);
        assert!(summary.min_ratio.unwrap() <= summary.mean_ratio.unwrap());
    }

    #[test]
    fn zero_trials_is_header_only() {
        let cfg = BenchConfig {
            trials: 0,
            ..BenchConfig::default()
        };
        assert_eq!(csv(&cfg), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn same_seed_same_csv() {
        let cfg = BenchConfig {
            trials: 6,
            kinds: WeightKind::ALL.to_vec(),
            seed: 3,
            ..BenchConfig::default()
        };
        assert_eq!(csv(&cfg), csv(&cfg));
    }
}
