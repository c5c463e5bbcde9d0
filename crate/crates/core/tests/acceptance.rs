//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mwdsm::approx::{run_pipeline, Pipeline};
use mwdsm::bench::{run_bench, write_csv, BenchConfig};
use mwdsm::gen::{generate, GenParams, WeightKind};
use mwdsm::lp::SimplexOptions;
use mwdsm::solution::SolutionFile;
use mwdsm::{
    exact_by_mapping_enumeration, exact_mwis, extend_to_bijection, extract_duos, score_mapping, solve_mwdsm, ConflictGraph, DuoGraph,
    Instance, WeightSpec,
};

/// Large enough for every single-letter instance with n <= 9 (64 vertices).
const MWIS_LIMIT: usize = 128;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

/// `count` seeded instances with `n` in `n_min..=n_max`, alphabet 1..=3 and
/// weight kinds cycling through every kind.
fn instances(base_seed: u64, count: usize, n_min: usize, n_max: usize) -> Vec<(u64, Instance)> {
    (0..count)
        .map(|t| {
            let seed = base_seed + t as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xACCE);
            let params = GenParams {
                n: rng.gen_range(n_min..=n_max),
                alphabet: rng.gen_range(1..=3),
                kind: WeightKind::ALL[t % WeightKind::ALL.len()],
                sigma: 2.0,
                seed,
            };
            (seed, generate(&params).expect("valid generator parameters"))
        })
        .collect()
}

fn pipeline(instance: &Instance) -> Pipeline {
    run_pipeline(instance, &SimplexOptions::default()).expect("pipeline succeeds")
}

fn describe(seed: u64, instance: &Instance) -> String {
    let s1: String = instance.s1().iter().collect();
    let s2: String = instance.s2().iter().collect();
    format!("seed {seed} ({s1} / {s2}, {})", instance.weight_spec().label())
}

fn guarantee_vs_lp(set: &[(u64, Instance)]) -> Outcome {
    let mut worst = f64::INFINITY;
    for (seed, instance) in set {
        let r = solve_mwdsm(instance).expect("solve succeeds");
        let margin = r.selected_weight - r.lp_objective / 6.0;
        worst = worst.min(margin);
        if margin < -1e-6 {
            return Outcome::new(false, format!("{}: selected {} < lp/6 = {}", describe(*seed, instance), r.selected_weight, r.lp_objective / 6.0));
        }
    }
    Outcome::new(true, format!("{} instances, min(selected - lp/6) = {:.3e}", set.len(), worst + 0.0))
}

fn ratio_vs_optimum(set: &[(u64, Instance)]) -> Outcome {
    let mut min_ratio = f64::INFINITY;
    for (seed, instance) in set {
        let p = pipeline(instance);
        let opt = exact_mwis(&p.conflict_graph, MWIS_LIMIT).expect("within limit").weight;
        let alg = p.report.selected_weight;
        if alg < opt / 6.0 - 1e-6 {
            return Outcome::new(false, format!("{}: selected {alg} < opt/6 = {}", describe(*seed, instance), opt / 6.0));
        }
        if opt > 0.0 {
            min_ratio = min_ratio.min(alg / opt);
        }
    }
    Outcome::new(true, format!("{} instances, empirical min ratio {min_ratio:.4}", set.len()))
}

fn reduction_equivalence(set: &[(u64, Instance)]) -> Outcome {
    for (seed, instance) in set {
        let gc = ConflictGraph::build(&DuoGraph::build(instance));
        let by_graph = exact_mwis(&gc, MWIS_LIMIT).expect("within limit").weight;
        let by_mapping = exact_by_mapping_enumeration(instance, instance.n()).expect("enumerable").weight;
        if (by_graph - by_mapping).abs() > 1e-9 {
            return Outcome::new(false, format!("{}: mwis {by_graph} vs mapping {by_mapping}", describe(*seed, instance)));
        }
    }
    Outcome::new(true, format!("{} instances, mapping optimum = graph optimum within 1e-9", set.len()))
}

fn lp_soundness(sets: &[&[(u64, Instance)]]) -> Outcome {
    let mut count = 0;
    let mut worst = f64::INFINITY;
    for (seed, instance) in sets.iter().flat_map(|s| s.iter()) {
        let p = pipeline(instance);
        let opt = exact_mwis(&p.conflict_graph, MWIS_LIMIT).expect("within limit").weight;
        let gap = p.x.objective - opt;
        worst = worst.min(gap);
        if gap < -1e-7 {
            return Outcome::new(false, format!("{}: lp {} < opt {opt}", describe(*seed, instance), p.x.objective));
        }
        count += 1;
    }
    Outcome::new(true, format!("{count} instances, min(lp - opt) = {worst:.3e}"))
}

fn neighborhood_bound(sets: &[&[(u64, Instance)]]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    for (seed, instance) in sets.iter().flat_map(|s| s.iter()) {
        let p = pipeline(instance);
        for u in 0..p.conflict_graph.len() {
            let sum = p.x.neighborhood_sum(&p.conflict_graph, u);
            worst = worst.max(sum);
            checked += 1;
            if sum > 6.0 + 1e-9 {
                return Outcome::new(false, format!("{}: vertex {u} has closed-neighborhood sum {sum}", describe(*seed, instance)));
            }
        }
    }
    Outcome::new(true, format!("{checked} vertices, max closed-neighborhood sum {worst:.6}"))
}

fn fixtures() -> Outcome {
    let duos: Vec<String> = extract_duos(&"acbbda".chars().collect::<Vec<_>>())
        .iter()
        .map(|d| d.to_string())
        .collect();
    if duos != ["ac", "cb", "bb", "bd", "da"] {
        return Outcome::new(false, format!("acbbda duos {duos:?}"));
    }

    let instance = Instance::new("abacddd", "acddbad", WeightSpec::Unit).unwrap();
    let p = pipeline(&instance);
    let edges: Vec<(usize, usize)> = p.duo_graph.edges().iter().map(|e| e.endpoints()).collect();
    if edges != [(2, 5), (3, 1), (4, 2), (5, 3), (6, 3)] {
        return Outcome::new(false, format!("abacddd / acddbad: edges {edges:?}"));
    }
    let pairs = p.conflict_graph.adjacent_pairs();
    if pairs != [(0, 1), (2, 4), (3, 4)] {
        return Outcome::new(false, format!("abacddd / acddbad: conflict pairs {pairs:?}"));
    }
    let r = &p.report;
    if (r.lp_objective - 3.0).abs() > 1e-7 || (r.selected_weight - 3.0).abs() > 1e-9 {
        return Outcome::new(false, format!("abacddd / acddbad: lp {} selected {}", r.lp_objective, r.selected_weight));
    }
    let Some(mapping) = &r.mapping else {
        return Outcome::new(false, "abacddd / acddbad: no mapping");
    };
    if mwdsm::Mapping::new(&instance, mapping.perm().to_vec()).is_err() || r.preserved != [2, 4, 5] {
        return Outcome::new(false, format!("abacddd / acddbad: mapping {:?} preserved {:?}", mapping.perm(), r.preserved));
    }

    // Two selections reach weight 3. Rounding and the exact oracle both break
    // the tie toward (2,5); the bijection fixture is built from the other one.
    let fixture = [(3, 1), (4, 2), (5, 3)];
    let opt = exact_mwis(&p.conflict_graph, MWIS_LIMIT).unwrap();
    if p.duo_graph.verify_constrained_matching(&fixture) != Ok(opt.weight) {
        return Outcome::new(false, format!("abacddd / acddbad: {fixture:?} is not an optimal selection"));
    }
    let extended = extend_to_bijection(&instance, &fixture).unwrap();
    let score = score_mapping(&instance, &extended);
    if extended.perm() != [6, 5, 1, 2, 3, 4, 7] || score.preserved != [3, 4, 5] {
        return Outcome::new(false, format!("abacddd / acddbad: fixture bijection {:?} preserved {:?}", extended.perm(), score.preserved));
    }
    Outcome::new(
        true,
        format!(
            "acbbda duos; abacddd / acddbad graph, lp, selection (preserved {:?}), fixture bijection preserved {:?}",
            r.preserved, score.preserved
        ),
    )
}

fn feasibility(sets: &[&[(u64, Instance)]]) -> Outcome {
    let mut count = 0;
    for (seed, instance) in sets.iter().flat_map(|s| s.iter()) {
        let r = solve_mwdsm(instance).expect("solve succeeds");
        let tag = describe(*seed, instance);
        let pairs: Vec<(usize, usize)> = r.selected.iter().map(|p| (p.s1_duo, p.s2_duo)).collect();
        if let Err(v) = DuoGraph::build(instance).verify_constrained_matching(&pairs) {
            return Outcome::new(false, format!("{tag}: selection infeasible: {v:?}"));
        }
        let Some(mapping) = &r.mapping else {
            return Outcome::new(false, format!("{tag}: strict instance without mapping"));
        };
        let perm = mapping.perm();
        let mut seen = vec![false; instance.n() + 1];
        for (p, &q) in perm.iter().enumerate() {
            if q == 0 || q > instance.n() || seen[q] || instance.s1()[p] != instance.s2()[q - 1] {
                return Outcome::new(false, format!("{tag}: mapping {perm:?} is not character preserving"));
            }
            seen[q] = true;
        }
        let slack = 1e-12 * r.selected_weight.max(1.0);
        if r.realized_weight < r.selected_weight - slack {
            return Outcome::new(false, format!("{tag}: realized {} < selected {}", r.realized_weight, r.selected_weight));
        }
        let file = SolutionFile::from_report(&r);
        let parsed = SolutionFile::from_json(&file.to_json()).expect("solution parses");
        if parsed != file || !parsed.rescore(instance).expect("strict instance") {
            return Outcome::new(false, format!("{tag}: solution file does not round-trip"));
        }
        count += 1;
    }
    Outcome::new(true, format!("{count} outputs feasible and round-trip"))
}

fn mwdsm_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mwdsm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (inst, sol_a, sol_b, csv_a, csv_b) = (path("inst.json"), path("a.json"), path("b.json"), path("a.csv"), path("b.csv"));

    let steps: [Vec<&str>; 5] = [
        vec!["gen", "--n", "11", "--alphabet", "2", "--weight", "gaussian", "--seed", "42", "-o", &inst],
        vec!["solve", &inst, "-o", &sol_a],
        vec!["solve", &inst, "-o", &sol_b],
        vec!["bench", "--trials", "12", "--weights", "unit,inverse,matrix", "--seed", "5", "-o", &csv_a],
        vec!["bench", "--trials", "12", "--weights", "unit,inverse,matrix", "--seed", "5", "-o", &csv_b],
    ];
    for args in &steps {
        let out = mwdsm_cli(args);
        if !out.status.success() {
            return Outcome::new(false, format!("`mwdsm {}` failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)));
        }
    }
    let read = |p: &str| std::fs::read(p).expect("output written");
    if read(&sol_a) != read(&sol_b) {
        return Outcome::new(false, "solution files differ");
    }
    if read(&csv_a) != read(&csv_b) {
        return Outcome::new(false, "bench files differ");
    }

    let cfg = BenchConfig { trials: 12, seed: 5, kinds: WeightKind::ALL.to_vec(), ..BenchConfig::default() };
    let csv = |cfg: &BenchConfig| {
        let mut buf = Vec::new();
        write_csv(&run_bench(cfg).expect("bench runs"), &mut buf).unwrap();
        buf
    };
    if csv(&cfg) != csv(&cfg) {
        return Outcome::new(false, "in-process bench output differs");
    }
    Outcome::new(true, "solution and bench files byte-identical across runs")
}

fn smoke_n60() -> Outcome {
    let s = "a".repeat(60);
    let instance = Instance::new(&s, &s, WeightSpec::Unit).unwrap();
    let start = Instant::now();
    let r = solve_mwdsm(&instance);
    let elapsed = start.elapsed();
    match r {
        Ok(r) if elapsed < Duration::from_secs(300) => Outcome::new(
            true,
            format!("n = 60 single letter in {:.1} s, lp {:.6}, selected {}", elapsed.as_secs_f64(), r.lp_objective, r.selected_weight),
        ),
        Ok(_) => Outcome::new(false, format!("n = 60 took {:.1} s", elapsed.as_secs_f64())),
        Err(e) => Outcome::new(false, format!("n = 60 failed: {e}")),
    }
}

fn main() -> ExitCode {
    let set1 = instances(10_000, 200, 1, 12);
    let set2 = instances(20_000, 100, 1, 9);
    let set3 = instances(30_000, 50, 1, 7);

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("selection >= lp/6", Box::new(|| guarantee_vs_lp(&set1))),
        ("selection >= optimum/6", Box::new(|| ratio_vs_optimum(&set2))),
        ("mapping optimum = graph optimum", Box::new(|| reduction_equivalence(&set3))),
        ("lp >= optimum", Box::new(|| lp_soundness(&[&set2, &set3]))),
        ("closed-neighborhood sums <= 6", Box::new(|| neighborhood_bound(&[&set1, &set2, &set3]))),
        ("fixtures", Box::new(fixtures)),
        ("output feasibility", Box::new(|| feasibility(&[&set1, &set2, &set3]))),
        ("determinism", Box::new(determinism)),
        ("n = 60 completes in < 5 min", Box::new(smoke_n60)),
    ];

    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        if !outcome.pass {
            failed += 1;
        }
        println!("{verdict} {} {name}: {} [{:.1} s]", k + 1, outcome.detail, start.elapsed().as_secs_f64());
    }

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
