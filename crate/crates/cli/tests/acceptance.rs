//! Acceptance suite. Runs every criterion at its fixed threshold, prints one
//! PASS/FAIL line each and exits non-zero if any criterion fails.
//!
//! Run alone with `cargo test -p qmlp-cli --test acceptance`.

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use qmlp_core::data::{bundled_iris_path, DatasetSource, SyntheticFamily, SyntheticSpec};
use qmlp_core::gradients::parameter_shift_gradient;
use qmlp_core::harness::{compare, train_one, ExperimentConfig, LoadedModels, NoiseSweepSettings};
use qmlp_core::rng::seeded;
use qmlp_core::{
    build_hidden_layer, evaluate, Angle, Architecture, DensityMatrix, Evaluation, Gate, GateKind, HiddenLayerSpec,
    HybridModel, NoiseConfig, QuantumState, TrainConfig,
};
use rand::Rng;
use rayon::prelude::*;

const SEEDS: [u64; 3] = [0, 1, 2];
const TOTAL_LAYERS: [usize; 3] = [4, 6, 8];
const DATASET_SEED: u64 = 0;
const SWEEP: [f64; 6] = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// ---------------------------------------------------------------- criterion 1

fn fd_circuit(c: &qmlp_core::CircuitSpec, x: &[f64], p: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    const H: f64 = 1e-5;
    let eval = |x: &[f64], p: &[f64]| c.evaluate(x, p, None, None).unwrap();
    let mut dp = vec![vec![0.0; p.len()]; c.n_qubits];
    for i in 0..p.len() {
        let (mut a, mut b) = (p.to_vec(), p.to_vec());
        a[i] += H;
        b[i] -= H;
        let (ea, eb) = (eval(x, &a), eval(x, &b));
        for q in 0..c.n_qubits {
            dp[q][i] = (ea[q] - eb[q]) / (2.0 * H);
        }
    }
    let mut dx = vec![vec![0.0; x.len()]; c.n_qubits];
    for j in 0..x.len() {
        let (mut a, mut b) = (x.to_vec(), x.to_vec());
        a[j] += H;
        b[j] -= H;
        let (ea, eb) = (eval(&a, p), eval(&b, p));
        for q in 0..c.n_qubits {
            dx[q][j] = (ea[q] - eb[q]) / (2.0 * H);
        }
    }
    (dp, dx)
}

fn max_abs(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn mean_loss(model: &HybridModel, batch: &[(Vec<f64>, usize)]) -> f64 {
    batch
        .iter()
        .map(|(x, y)| -model.forward(x).unwrap()[*y].max(1e-12).ln())
        .sum::<f64>()
        / batch.len() as f64
}

fn random_model(rng: &mut impl Rng) -> (HybridModel, Vec<(Vec<f64>, usize)>) {
    let n = rng.random_range(2..=3);
    let m = rng.random_range(2..=3);
    let arch = if rng.random_bool(0.5) {
        Architecture::Qmlp {
            n_qubits: n,
            layers: rng.random_range(1..=2),
            n_classes: m,
        }
    } else {
        Architecture::DeepQmlp {
            n_qubits: n,
            layers: vec![rng.random_range(1..=2), 1],
            n_classes: m,
        }
    };
    let model = HybridModel::new(arch, rng.random()).unwrap();
    let batch = (0..3)
        .map(|_| ((0..n).map(|_| rng.random_range(-PI..PI)).collect(), rng.random_range(0..m)))
        .collect();
    (model, batch)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(101, 0);
    let mut worst_layer: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.random_range(2..=4);
        let l = rng.random_range(1..=4);
        let c = build_hidden_layer(&HiddenLayerSpec::new(n, l)).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
        let p: Vec<f64> = (0..c.n_params).map(|_| rng.random_range(-PI..PI)).collect();
        let shift = parameter_shift_gradient(&c, &x, &p).unwrap();
        let (dp, dx) = fd_circuit(&c, &x, &p);
        worst_layer = worst_layer
            .max(max_abs(&shift.d_out_d_params, &dp))
            .max(max_abs(&shift.d_out_d_inputs, &dx));
    }

    let mut worst_rel: f64 = 0.0;
    for _ in 0..20 {
        let (model, batch) = random_model(&mut rng);
        let refs: Vec<(&[f64], usize)> = batch.iter().map(|(x, y)| (x.as_slice(), *y)).collect();
        let grad = model.backward(&refs).unwrap();
        let flat = model.params_flat();
        let mut probe = model.clone();
        let mut fd = vec![0.0; flat.len()];
        for i in 0..flat.len() {
            let mut p = flat.clone();
            p[i] += 1e-5;
            probe.set_params_flat(&p).unwrap();
            let up = mean_loss(&probe, &batch);
            p[i] -= 2e-5;
            probe.set_params_flat(&p).unwrap();
            let down = mean_loss(&probe, &batch);
            fd[i] = (up - down) / 2e-5;
        }
        let scale = fd.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let err = grad.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_rel = worst_rel.max(err / scale);
    }
    let elapsed = start.elapsed();
    outcome(
        worst_layer <= 1e-5 && worst_rel <= 1e-5 && elapsed < Duration::from_secs(120),
        format!(
            "layer Jacobian max |shift - fd| = {worst_layer:.2e} (50 circuits), loss gradient max rel err = {worst_rel:.2e} (20 models), {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- criterion 2

const KINDS: [GateKind; 6] = [
    GateKind::H,
    GateKind::X,
    GateKind::Rz,
    GateKind::Ry,
    GateKind::Crz,
    GateKind::Cnot,
];

fn random_circuit(rng: &mut impl Rng) -> (usize, Vec<(Gate, f64)>) {
    let n = rng.random_range(1..=4);
    let len = rng.random_range(1..=24);
    let gates = (0..len)
        .map(|_| {
            let mut kind = KINDS[rng.random_range(0..6)];
            if n == 1 && kind.arity() == 2 {
                kind = GateKind::Rz;
            }
            let theta = rng.random_range(-7.0..7.0);
            let a = rng.random_range(0..n);
            let targets = if kind.arity() == 1 {
                vec![a]
            } else {
                vec![a, (a + rng.random_range(1..n)) % n]
            };
            let angle = kind.is_rotation().then_some(Angle::Fixed(theta));
            (Gate::new(kind, targets, angle).unwrap(), theta)
        })
        .collect();
    (n, gates)
}

fn criterion_2() -> Outcome {
    let mut rng = seeded(202, 0);
    let mut kron_err: f64 = 0.0;
    let mut density_err: f64 = 0.0;
    for _ in 0..100 {
        let (n, gates) = random_circuit(&mut rng);
        let mut fast = QuantumState::zero(n).unwrap();
        let mut rho = DensityMatrix::zero(n).unwrap();
        for (g, _) in &gates {
            fast.apply_gate(g, None).unwrap();
            rho.apply_gate(g, None).unwrap();
        }
        let reference = oracle::run(n, &gates);
        for (a, b) in fast.amplitudes().iter().zip(&reference) {
            kron_err = kron_err.max((a - b).norm());
        }
        let outer = oracle::outer(fast.amplitudes());
        for (i, row) in outer.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                density_err = density_err.max((rho.get(i, j) - v).norm());
            }
        }
    }

    // Channel closed forms on a random 2-qubit state.
    let (_, gates) = loop {
        let c = random_circuit(&mut rng);
        if c.0 == 2 {
            break c;
        }
    };
    let mut rho = DensityMatrix::zero(2).unwrap();
    for (g, _) in &gates {
        rho.apply_gate(g, None).unwrap();
    }
    let mut closed_err: f64 = 0.0;
    let mut identity = rho.clone();
    identity.apply_depolarizing(&[0, 1], 0.0).unwrap();
    for (a, b) in identity.elements().iter().zip(rho.elements()) {
        closed_err = closed_err.max((a - b).norm());
    }
    let mut mixed = rho.clone();
    mixed.apply_depolarizing(&[0, 1], 1.0).unwrap();
    for (a, b) in mixed.elements().iter().zip(DensityMatrix::maximally_mixed(2).unwrap().elements()) {
        closed_err = closed_err.max((a - b).norm());
    }
    for p in [0.0, 0.04, 0.3, 0.77, 1.0] {
        for theta in [0.0, 0.9, 2.2, -1.4] {
            let mut one = DensityMatrix::zero(1).unwrap();
            one.apply_gate(&Gate::ry(0, Angle::Fixed(theta)), None).unwrap();
            let before = one.pauli_z_expectation(0).unwrap();
            one.apply_depolarizing(&[0], p).unwrap();
            closed_err = closed_err.max((one.pauli_z_expectation(0).unwrap() - (1.0 - p) * before).abs());
        }
    }
    outcome(
        kron_err <= 1e-10 && density_err <= 1e-9 && closed_err <= 1e-10,
        format!("kronecker err {kron_err:.2e}, density-vs-pure err {density_err:.2e}, channel closed-form err {closed_err:.2e}"),
    )
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3() -> Outcome {
    let q = HybridModel::new(
        Architecture::Qmlp {
            n_qubits: 4,
            layers: 2,
            n_classes: 3,
        },
        0,
    )
    .unwrap();
    let d = HybridModel::new(
        Architecture::DeepQmlp {
            n_qubits: 4,
            layers: vec![1, 1],
            n_classes: 3,
        },
        0,
    )
    .unwrap();
    let split = |m: &HybridModel| (m.trainable_count(), m.quantum_param_count(), m.classical_weight_count());
    let (sq, sd) = (split(&q), split(&d));
    outcome(
        sq == (28, 16, 12) && sd == (28, 16, 12),
        format!("Iris QMLP(4,2,3) = {} ({} + {}), Iris DeepQMLP(4,[1,1],3) = {} ({} + {})", sq.0, sq.1, sq.2, sd.0, sd.1, sd.2),
    )
}

// ------------------------------------------------------- shared synthetic runs

struct Run {
    family: SyntheticFamily,
    total_layers: usize,
    seed: u64,
    deep: bool,
    model: HybridModel,
    train: Evaluation,
    test: Evaluation,
    /// Exact noisy training loss at each entry of `SWEEP`.
    sweep: Vec<Evaluation>,
}

impl Run {
    fn label(&self) -> String {
        format!(
            "{}/{}/L{}/s{}",
            self.family,
            if self.deep { "DeepQMLP" } else { "QMLP" },
            self.total_layers,
            self.seed
        )
    }
}

fn architecture(family: SyntheticFamily, total: usize, deep: bool) -> Architecture {
    let m = family.n_classes();
    if deep {
        Architecture::DeepQmlp {
            n_qubits: 2,
            layers: vec![total / 2, total / 2],
            n_classes: m,
        }
    } else {
        Architecture::Qmlp {
            n_qubits: 2,
            layers: total,
            n_classes: m,
        }
    }
}

fn synthetic_runs() -> Vec<Run> {
    let mut jobs = Vec::new();
    for family in SyntheticFamily::ALL {
        for deep in [false, true] {
            for total in TOTAL_LAYERS {
                for seed in SEEDS {
                    jobs.push((family, deep, total, seed));
                }
            }
        }
    }
    let cfg = TrainConfig::default();
    jobs.par_iter()
        .map(|&(family, deep, total, seed)| {
            let source = DatasetSource::Synthetic(SyntheticSpec::standard(family, DATASET_SEED));
            let data = source.prepare().unwrap();
            let arch = architecture(family, total, deep);
            let (model, history) = train_one(&source, &data, &arch, &cfg, seed).unwrap();
            let last = history.last().unwrap();
            let test = evaluate(&model, data.test.as_ref().unwrap(), None, 0).unwrap();
            let sweep = SWEEP
                .iter()
                .map(|&s| evaluate(&model, &data.train, Some(&NoiseConfig::nominal(s).unwrap()), 0).unwrap())
                .collect();
            Run {
                family,
                total_layers: total,
                seed,
                deep,
                model,
                train: Evaluation {
                    loss: last.loss,
                    accuracy: last.accuracy,
                },
                test,
                sweep,
            }
        })
        .collect()
}

fn trained_ok(r: &Run) -> bool {
    r.train.loss < 0.25 && r.train.accuracy >= 0.90
}

fn criterion_4(runs: &[Run], elapsed: Duration) -> Outcome {
    let passing = runs.iter().filter(|r| trained_ok(r)).count();
    let failing: Vec<String> = runs
        .iter()
        .filter(|r| !trained_ok(r))
        .map(|r| format!("{} ({:.3}/{:.3})", r.label(), r.train.loss, r.train.accuracy))
        .collect();
    let frac = passing as f64 / runs.len() as f64;
    outcome(
        frac >= 0.90 && elapsed < Duration::from_secs(30 * 60),
        format!(
            "{passing}/{} runs reach loss < 0.25 and accuracy >= 0.90 ({:.1}%, need 90%), {:.0}s; misses: {}",
            runs.len(),
            100.0 * frac,
            elapsed.as_secs_f64(),
            if failing.is_empty() { "none".into() } else { failing.join(", ") }
        ),
    )
}

fn criterion_5(runs: &[Run]) -> Outcome {
    let trained: Vec<&Run> = runs.iter().filter(|r| trained_ok(r)).collect();
    let good = trained
        .iter()
        .filter(|r| r.test.accuracy >= 0.85 && r.test.loss < 0.35)
        .count();
    let frac = if trained.is_empty() { 0.0 } else { good as f64 / trained.len() as f64 };
    outcome(
        !trained.is_empty() && frac >= 0.85,
        format!(
            "{good}/{} trained runs reach test accuracy >= 0.85 and test loss < 0.35 ({:.1}%, need 85%)",
            trained.len(),
            100.0 * frac
        ),
    )
}

fn criterion_7(runs: &[Run]) -> Outcome {
    let find = |family, total, seed, deep| {
        runs.iter()
            .find(|r| r.family == family && r.total_layers == total && r.seed == seed && r.deep == deep)
            .unwrap()
    };
    let mut q_models = Vec::new();
    let mut d_models = Vec::new();
    for family in SyntheticFamily::ALL {
        for total in TOTAL_LAYERS {
            for seed in SEEDS {
                q_models.push(find(family, total, seed, false));
                d_models.push(find(family, total, seed, true));
            }
        }
    }
    let load = |rs: &[&Run]| {
        LoadedModels::from_models(rs.iter().map(|r| r.label()).collect(), rs.iter().map(|r| r.model.clone()).collect())
            .unwrap()
    };
    let config = ExperimentConfig {
        noise_sweep: NoiseSweepSettings {
            scales: vec![0.25, 4.0],
            shots: None,
            ..NoiseSweepSettings::default()
        },
        ..ExperimentConfig::default()
    };
    let report = match compare(&load(&q_models), &load(&d_models), &config) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("comparison failed: {e}")),
    };
    let hi = report.at_scale(4.0).unwrap();
    let lo = report.at_scale(0.25).unwrap();
    let lo_gap = (lo.qmlp_loss - lo.deep_qmlp_loss).abs() / lo.qmlp_loss;
    let pass = hi.relative_loss_reduction >= 0.10 && hi.deep_qmlp_accuracy >= hi.qmlp_accuracy && lo_gap <= 0.10;
    outcome(
        pass,
        format!(
            "{} pairs; scale 4: loss QMLP {:.4} vs DeepQMLP {:.4} ({:.1}% lower, need >= 10%), accuracy {:.4} vs {:.4} (need not lower); scale 0.25: loss gap {:.1}% (need <= 10%)",
            report.pairs.len(),
            hi.qmlp_loss,
            hi.deep_qmlp_loss,
            100.0 * hi.relative_loss_reduction,
            hi.qmlp_accuracy,
            hi.deep_qmlp_accuracy,
            100.0 * lo_gap
        ),
    )
}

fn criterion_8(runs: &[Run]) -> Outcome {
    let mut violations = Vec::new();
    for r in runs {
        for (k, w) in r.sweep.windows(2).enumerate() {
            if w[1].loss < w[0].loss * (1.0 - 0.02) {
                violations.push(format!(
                    "{} scale {} -> {}: {:.4} -> {:.4}",
                    r.label(),
                    SWEEP[k],
                    SWEEP[k + 1],
                    w[0].loss,
                    w[1].loss
                ));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{} models x {} scales, {} step(s) drop by more than 2%{}",
            runs.len(),
            SWEEP.len(),
            violations.len(),
            if violations.is_empty() { String::new() } else { format!(": {}", violations.join("; ")) }
        ),
    )
}

// ---------------------------------------------------------------- criterion 6

fn criterion_6() -> Outcome {
    let source = DatasetSource::Iris {
        path: bundled_iris_path(),
    };
    let data = source.prepare().unwrap();
    let cfg = TrainConfig {
        epochs: 20,
        ..TrainConfig::default()
    };
    let loss_at_20 = |layers: usize| -> f64 {
        let losses: Vec<f64> = SEEDS
            .par_iter()
            .map(|&seed| {
                let arch = Architecture::Qmlp {
                    n_qubits: 4,
                    layers,
                    n_classes: 3,
                };
                let (_, h) = train_one(&source, &data, &arch, &cfg, seed).unwrap();
                h.records[19].loss
            })
            .collect();
        losses.iter().sum::<f64>() / losses.len() as f64
    };
    let (l1, l4) = (loss_at_20(1), loss_at_20(4));
    let reduction = (l1 - l4) / l1;
    outcome(
        reduction >= 0.30,
        format!("Iris epoch-20 loss L=1 {l1:.4}, L=4 {l4:.4}: {:.1}% lower (need >= 30%)", 100.0 * reduction),
    )
}

// ---------------------------------------------------------------- criterion 9

fn qmlp_bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_qmlp"))
}

fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(qmlp_bin()).args(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("qmlp {}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr).trim()))
    }
}

fn write_config(path: &Path, arch: &str) {
    let text = format!(
        r#"{{
  "dataset": {{"synthetic": {{"family": "P2_sq", "samples_per_class": 10, "seed": 4}}}},
  "architecture": {arch},
  "training": {{"epochs": 3, "batch_size": 10, "seeds": [1, 2]}},
  "noise_sweep": {{"scales": [0.5, 4.0], "shots": 500}}
}}"#
    );
    fs::write(path, text).unwrap();
}

/// Runs `steps` into `work`, snapshots the outputs, clears them and reruns.
fn twice(work: &Path, steps: &dyn Fn(&Path) -> Result<(), String>) -> Result<usize, String> {
    let out = work.join("out");
    steps(&out)?;
    let first = snapshot(&out);
    fs::remove_dir_all(&out).unwrap();
    steps(&out)?;
    let second = snapshot(&out);
    if first.is_empty() {
        return Err("no output files".into());
    }
    if first.len() != second.len() {
        return Err("different file sets".into());
    }
    for ((pa, a), (pb, b)) in first.iter().zip(&second) {
        if pa != pb || a != b {
            return Err(format!("{} differs between runs", pa.display()));
        }
    }
    Ok(first.len())
}

fn criterion_9() -> Outcome {
    let work = tempfile::tempdir().unwrap();
    let w = work.path();
    let q_cfg = w.join("qmlp.json");
    let d_cfg = w.join("deep.json");
    write_config(&q_cfg, r#"{"kind": "qmlp", "n_qubits": 2, "layers": 2, "n_classes": 3}"#);
    write_config(&d_cfg, r#"{"kind": "deep_qmlp", "n_qubits": 2, "layers": [1, 1], "n_classes": 3}"#);
    let s = |p: &Path| p.to_str().unwrap().to_string();

    let steps = |out: &Path| -> Result<(), String> {
        let (qd, dd) = (out.join("qmlp"), out.join("deep"));
        cli(&["train", "--config", &s(&q_cfg), "--out", &s(&qd), "--seed", "1,2"])?;
        cli(&["train", "--config", &s(&d_cfg), "--out", &s(&dd), "--seed", "1,2"])?;
        let qm: Vec<String> = [1, 2].iter().map(|k| s(&qd.join(format!("P2_sq_qmlp-L2_s{k}.json")))).collect();
        let dm: Vec<String> = [1, 2].iter().map(|k| s(&dd.join(format!("P2_sq_deepqmlp-L1x1_s{k}.json")))).collect();
        let sweep = out.join("sweep");
        let mut args = vec!["noise-sweep", "--config", q_cfg.to_str().unwrap(), "--out", sweep.to_str().unwrap()];
        args.extend(qm.iter().map(String::as_str));
        cli(&args)?;
        cli(&[
            "compare",
            "--config",
            &s(&q_cfg),
            "--out",
            &s(&out.join("compare")),
            "--qmlp",
            &qm.join(","),
            "--deep",
            &dm.join(","),
        ])?;
        cli(&["gen-data", "--family", "R1_sq", "--samples-per-class", "90", "--seed", "7", "--out", &s(&out.join("r1.csv"))])?;
        cli(&[
            "plot",
            &s(&qd.join("P2_sq_qmlp-L2_s1_history.csv")),
            &s(&qd.join("P2_sq_qmlp-L2_s2_history.csv")),
            "--out",
            &s(&out.join("history.svg")),
        ])?;
        cli(&["plot", &s(&sweep.join("sweep.csv")), "--out", &s(&out.join("sweep.svg"))])?;
        Ok(())
    };
    match twice(w, &steps) {
        Ok(files) => outcome(
            true,
            format!("train, noise-sweep (500 shots), compare, gen-data and plot rerun byte-identical across {files} output files"),
        ),
        Err(e) => outcome(false, e),
    }
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut report = |id: u32, name: &'static str, o: Outcome| {
        println!("criterion {id} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };

    report(1, "gradient oracle", criterion_1());
    report(2, "simulator oracle", criterion_2());
    report(3, "parameter counts", criterion_3());

    let start = Instant::now();
    let runs = synthetic_runs();
    let train_time = start.elapsed();
    report(4, "trainability", criterion_4(&runs, train_time));
    report(5, "generalization", criterion_5(&runs));
    report(6, "layer-depth benefit", criterion_6());
    report(7, "noise resilience", criterion_7(&runs));
    report(8, "noise monotonicity", criterion_8(&runs));
    report(9, "determinism", criterion_9());

    let failed: Vec<String> = results
        .iter()
        .filter(|(_, _, o)| !o.pass)
        .map(|(id, name, _)| format!("{id} ({name})"))
        .collect();
    println!(
        "acceptance: {}/{} criteria pass",
        results.len() - failed.len(),
        results.len()
    );
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
