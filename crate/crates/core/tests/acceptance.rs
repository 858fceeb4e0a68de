//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qhammer_core::circuit::{Circuit, Gate, GateKind};
use qhammer_core::factory::{build_circuit, ExperimentSpec};
use qhammer_core::labels::{format_label, parse_label, Config, ExperimentLabel, LabelGate};
use qhammer_core::simulator::{calibrate, readout_one_probability, simulate, NoiseModel};
use qhammer_core::stats::{is_successful_attack, AssociationBand, ExperimentResult};
use qhammer_core::topology::{enumerate_centers, get_nodes, load_device_map, CouplingGraph};
use qhammer_core::workflow::{self, CampaignConfig};

const CNOT_72: &str = include_str!("fixtures/brisbane_cnot_72.csv");
const PUBLISHED_LABELS: &str = include_str!("fixtures/published_labels.txt");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn eagle() -> CouplingGraph {
    load_device_map("eagle127").expect("shipped map loads")
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{name} = {got}, expected {want} ± {tol}"))
    }
}

fn faster_than(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn binomial_sigma(p: f64, shots: u64) -> f64 {
    (p * (1.0 - p) / shots as f64).sqrt()
}

fn cramers_v_reproduction() -> Outcome {
    let start = Instant::now();
    let analysis = workflow::analyze(CNOT_72).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let (chi, v) = (&analysis.chi, &analysis.cramers);
    if analysis.table.row_count() != 17 || v.n != 680_000 {
        return Err(format!("{} rows, n = {}", analysis.table.row_count(), v.n));
    }
    for (i, e) in chi.expected.iter().enumerate() {
        within(&format!("expected0[{i}]"), e[0], 27444.41, 0.01)?;
    }
    within("chi2", chi.chi2, 334515.18, 0.5)?;
    if v.min_dim != 1 {
        return Err(format!("min_dim = {}", v.min_dim));
    }
    within("V", v.v, 0.70, 0.005)?;
    if v.band != AssociationBand::Strong {
        return Err(format!("band {:?}", v.band));
    }
    faster_than(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "chi2 {:.2}, V {:.4} ({}), {elapsed:?}",
        chi.chi2,
        v.v,
        v.band.description()
    ))
}

fn cell_contributions() -> Outcome {
    let analysis = workflow::analyze(CNOT_72).map_err(|e| e.to_string())?;
    let row = |name: &str| {
        analysis
            .table
            .rows
            .iter()
            .position(|(label, _)| label == name)
            .ok_or_else(|| format!("row {name} missing"))
    };
    let precision = analysis.chi.contributions[row("Precision(72)")?][0];
    let thirty = analysis.chi.contributions[row("cx(-72-0) 30")?][0];
    within("Precision(72) contribution", precision, 4802.57, 0.01)?;
    within("cx(-72-0) 30 contribution", thirty, 22411.13, 0.01)?;
    Ok(format!("{precision:.4}, {thirty:.4}"))
}

fn factory_counts() -> Outcome {
    let graph = eagle();
    let start = Instant::now();
    let build = |text: &str| {
        let label = parse_label(text).map_err(|e| e.to_string())?;
        build_circuit(&ExperimentSpec::new(label), &graph).map_err(|e| e.to_string())
    };
    let expect = |what: &str, got: usize, want: usize| {
        if got == want {
            Ok(())
        } else {
            Err(format!("{what}: {got}, expected {want}"))
        }
    };
    for extra in 0..3 {
        let cycles = extra + 1;
        let thirty = build(&format!("cx(72-{extra}) 30"))?;
        expect("Thirty CX", thirty.count(GateKind::Cx), 30 * cycles)?;
        let cross = build(&format!("cx(72-{extra}) 4 cross"))?;
        expect("Cross4 CX", cross.count(GateKind::Cx), 4 * cycles)?;
        let six = build(&format!("ry(72-{extra}) 6"))?;
        expect("Six single-qubit", six.count(GateKind::Ry), 6 * cycles)?;
    }
    let p = build("p(93-1000) 6")?;
    expect("p(93-1000) 6 barriers", p.count(GateKind::Barrier), 1001)?;
    expect("p(93-1000) 6 P gates", p.count(GateKind::P), 6 * 1001)?;
    expect("p(93-1000) 6 ops", p.ops.len(), 7008)?;
    let elapsed = start.elapsed();
    faster_than(elapsed, Duration::from_secs(1))?;
    Ok(format!("30/4/6 per cycle, 1001 cycles, {elapsed:?}"))
}

fn neighborhood_fixture() -> Outcome {
    let graph = eagle();
    let hood = get_nodes(&graph, 72).map_err(|e| e.to_string())?;
    if hood.top_row != [61, 62, 63] || hood.bottom_row != [80, 81, 82] {
        return Err(format!("rows {:?}/{:?}", hood.top_row, hood.bottom_row));
    }
    let centres = enumerate_centers(&graph);
    let missing: Vec<_> = [15, 34, 54, 72, 93, 109]
        .into_iter()
        .filter(|c| !centres.contains(c))
        .collect();
    if !missing.is_empty() {
        return Err(format!("centres missing {missing:?}"));
    }
    Ok(format!(
        "rows (61,62,63)/(80,81,82), {} centres",
        centres.len()
    ))
}

fn label_totality() -> Outcome {
    let labels: Vec<&str> = PUBLISHED_LABELS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if labels.len() < 40 {
        return Err(format!("fixture has only {} labels", labels.len()));
    }
    for text in &labels {
        let parsed = parse_label(text).map_err(|e| format!("`{text}`: {e}"))?;
        let canonical = format_label(&parsed);
        let reparsed = parse_label(&canonical).map_err(|e| format!("`{canonical}`: {e}"))?;
        if reparsed != parsed || format_label(&reparsed) != canonical {
            return Err(format!("`{text}` does not round-trip via `{canonical}`"));
        }
    }
    Ok(format!("{} labels", labels.len()))
}

/// `g` spectator kicks next to centre 72, optionally from |1>.
fn kick_circuit(g: usize, prep_one: bool) -> Circuit {
    let mut c = Circuit::new(127, 1);
    if prep_one {
        c.push(Gate::x(72));
    }
    for _ in 0..g {
        c.push(Gate::x(62));
    }
    c.push(Gate::measure(72, 0));
    c
}

fn read_one(p_flip: f64, prep_one: bool, eps0: f64, eps1: f64) -> f64 {
    let p1 = if prep_one { 1.0 - p_flip } else { p_flip };
    p1 * (1.0 - eps1) + (1.0 - p1) * eps0
}

fn oracle_equivalence() -> Outcome {
    const SHOTS: u64 = 40_000;
    let graph = eagle();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for trial in 0..50 {
        let g = rng.random_range(1..=64);
        let prep_one = rng.random_bool(0.5);
        let eps0 = rng.random_range(0.0..0.05);
        let eps1 = rng.random_range(0.0..0.05);
        let circuit = kick_circuit(g, prep_one);
        let seed = rng.random();

        let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let coherent = NoiseModel::coherent(theta).with_readout(eps0, eps1);
        let want = read_one((g as f64 * theta / 2.0).sin().powi(2), prep_one, eps0, eps1);
        let counts =
            simulate(&circuit, &graph, &coherent, seed, SHOTS).map_err(|e| e.to_string())?;
        let z = (counts.fraction_one() - want).abs() / binomial_sigma(want, SHOTS);
        worst = worst.max(z);
        if z > 3.0 {
            return Err(format!(
                "coherent trial {trial}: G {g}, theta {theta}, {z:.2} sigma"
            ));
        }

        let p: f64 = rng.random_range(0.0..0.5);
        let stochastic = NoiseModel::stochastic(p).with_readout(eps0, eps1);
        let want = read_one(
            (1.0 - (1.0 - 2.0 * p).powi(g as i32)) / 2.0,
            prep_one,
            eps0,
            eps1,
        );
        let counts =
            simulate(&circuit, &graph, &stochastic, seed, SHOTS).map_err(|e| e.to_string())?;
        let z = (counts.fraction_one() - want).abs() / binomial_sigma(want, SHOTS);
        worst = worst.max(z);
        if z > 3.0 {
            return Err(format!(
                "stochastic trial {trial}: G {g}, p {p}, {z:.2} sigma"
            ));
        }
    }
    let elapsed = start.elapsed();
    faster_than(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "50 coherent + 50 stochastic, worst {worst:.2} sigma, {elapsed:?}"
    ))
}

fn calibration_round_trip() -> Outcome {
    const TARGET: f64 = 0.8513;
    const SHOTS: u64 = 40_000;
    let graph = eagle();
    let label = parse_label("cx(72-1) 30").map_err(|e| e.to_string())?;
    let spec = ExperimentSpec::new(label).with_shots(SHOTS);
    let model =
        calibrate(TARGET, &spec, &graph, &NoiseModel::coherent(0.0)).map_err(|e| e.to_string())?;
    // 36 spectator events over two cycles, no readout error
    within(
        "theta_ct",
        model.theta_ct,
        2.0 * TARGET.sqrt().asin() / 36.0,
        1e-12,
    )?;
    let circuit = build_circuit(&spec, &graph).map_err(|e| e.to_string())?;
    let counts = simulate(&circuit, &graph, &model, 72, SHOTS).map_err(|e| e.to_string())?;
    let observed = counts.fraction_one();
    within(
        "flip rate",
        observed,
        TARGET,
        3.0 * binomial_sigma(TARGET, SHOTS),
    )?;
    let result = ExperimentResult::new(label, counts).map_err(|e| e.to_string())?;
    if !is_successful_attack(&result) {
        return Err(format!("flip rate {observed} not classified successful"));
    }
    Ok(format!(
        "theta_ct {:.6}, observed {observed:.4}, successful",
        model.theta_ct
    ))
}

fn amplification() -> Outcome {
    const SHOTS: u64 = 40_000;
    let graph = eagle();
    let spec = |extra: u32| ExperimentSpec::new(ExperimentLabel::cx(72, extra, Config::Thirty));
    // Calibrated at the longest run so every shorter run keeps G·theta ≤ π.
    let model = calibrate(
        0.9,
        &spec(3),
        &graph,
        &NoiseModel::coherent(0.0).with_readout(0.02, 0.04),
    )
    .map_err(|e| e.to_string())?;
    let mut exact = Vec::new();
    let mut observed = Vec::new();
    for extra in 0..=3 {
        let circuit = build_circuit(&spec(extra), &graph).map_err(|e| e.to_string())?;
        exact.push(readout_one_probability(&circuit, &graph, &model).map_err(|e| e.to_string())?);
        let counts = simulate(&circuit, &graph, &model, 5, SHOTS).map_err(|e| e.to_string())?;
        observed.push(counts.fraction_one());
    }
    let non_decreasing = |v: &[f64]| v.windows(2).all(|w| w[0] <= w[1]);
    if !non_decreasing(&exact) || !non_decreasing(&observed) {
        return Err(format!("exact {exact:?}, observed {observed:?}"));
    }
    let shown: Vec<String> = observed.iter().map(|r| format!("{r:.4}")).collect();
    Ok(format!("flip rates {}", shown.join(" ≤ ")))
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).expect("readable output dir") {
            let path = entry.expect("dir entry").path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path
                    .strip_prefix(dir)
                    .expect("under root")
                    .display()
                    .to_string();
                files.insert(rel, fs::read(&path).expect("readable output file"));
            }
        }
    }
    files
}

fn campaign_outputs(root: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let labels = PUBLISHED_LABELS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter(|l| {
            // keep the run quick: skip the 1000-set single-qubit sweeps
            parse_label(l).is_ok_and(|p| p.extra_sets < 100 || p.gate == LabelGate::Precision)
        })
        .map(String::from)
        .collect();
    let mut config = CampaignConfig::new(labels, root.join("out"));
    config.noise = NoiseModel::coherent(0.05).with_readout(0.02, 0.03);
    config.seed = 1234;
    config.shots = 4000;
    workflow::gen(&config).map_err(|e| e.to_string())?;
    let report = workflow::run(&config).map_err(|e| e.to_string())?;
    if !report.failures.is_empty() {
        return Err(format!("run failures {:?}", report.failures));
    }
    let csv = fs::read_to_string(&report.csv_path).map_err(|e| e.to_string())?;
    let analysis = workflow::analyze(&csv).map_err(|e| e.to_string())?;
    fs::write(root.join("out/analysis.txt"), analysis.render()).map_err(|e| e.to_string())?;
    workflow::plotdata(&csv, &root.join("out/plots"), true).map_err(|e| e.to_string())?;
    Ok(snapshot(&root.join("out")))
}

fn end_to_end_determinism() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = campaign_outputs(a.path())?;
    let second = campaign_outputs(b.path())?;
    if first.keys().ne(second.keys()) {
        return Err("runs wrote different file sets".to_string());
    }
    let differing: Vec<_> = first
        .iter()
        .filter(|(name, bytes)| second[*name] != **bytes)
        .map(|(name, _)| name.clone())
        .collect();
    if !differing.is_empty() {
        return Err(format!("outputs differ: {differing:?}"));
    }
    let count = |ext: &str| first.keys().filter(|k| k.ends_with(ext)).count();
    if count(".qasm") == 0 || count(".dat") == 0 || !first.contains_key("results.csv") {
        return Err(format!(
            "incomplete outputs: {:?}",
            first.keys().collect::<Vec<_>>()
        ));
    }
    Ok(format!(
        "{} files identical ({} qasm, {} dat, results.csv)",
        first.len(),
        count(".qasm"),
        count(".dat")
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Cramér's V reproduction", cramers_v_reproduction),
        ("cell-contribution spot checks", cell_contributions),
        ("factory structural counts", factory_counts),
        ("neighborhood fixture", neighborhood_fixture),
        ("label grammar totality", label_totality),
        ("simulator oracle equivalence", oracle_equivalence),
        ("calibration round trip", calibration_round_trip),
        ("row-hammer amplification", amplification),
        ("end-to-end determinism", end_to_end_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name}: {reason}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
