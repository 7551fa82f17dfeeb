//! Acceptance report: one PASS/FAIL/SKIP line per criterion.
//!
//! Runs the `colanet` binary for the end-to-end criteria and the library for
//! the property checks. The data-dependent criteria read MNIST from
//! `COLANET_MNIST_DIR` (default `/root/data/mnist`) and are skipped when it is
//! absent.
//!
//! The process fails when a criterion fails that is not listed in
//! `KNOWN_FAILURES`; `COLANET_ACCEPTANCE_STRICT=1` makes every failure fatal.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use colanet::baseline::{Mlp, MlpConfig, MlpParams};
use colanet::bench::{run_sequence, DegradationProfile};
use colanet::dataset::{
    apply_permutation, gen_permutation, make_permuted_stream, GrayImage, LabeledDataset, Split, PIXELS,
};
use colanet::encoder::encode;
use colanet::network::{grid_size, heatmap_ppm, ColaNetConfig, Microcolumn, Network};
use colanet::rng::{stream, Purpose};
use colanet::snn::{
    adaptive_threshold, depress, potentiate, NeuronState, PlasticityConfig, ReceptiveField, VirtualSynapses,
};
use ndarray::Array2;
use rand::Rng as _;

/// Metric-table entries that disagree with the published summary by more
/// than the tolerance even though the profile tables are transcribed
/// exactly; see the README.
const KNOWN_FAILURES: &[&str] = &["C1"];

const TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Status {
    Pass,
    Fail,
    Skip,
}

struct Outcome {
    id: &'static str,
    title: &'static str,
    status: Status,
    detail: String,
}

impl Outcome {
    fn new(id: &'static str, title: &'static str, ok: bool, detail: String) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Outcome {
            id,
            title,
            status,
            detail,
        }
    }

    fn skip(id: &'static str, title: &'static str, why: &str) -> Self {
        Outcome {
            id,
            title,
            status: Status::Skip,
            detail: why.to_string(),
        }
    }
}

fn colanet(args: &[&str]) -> Result<String, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_colanet"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            o.status.code(),
            String::from_utf8_lossy(&o.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&o.stdout).into_owned())
}

fn uncommented(text: &str) -> impl Iterator<Item = &str> {
    text.lines().filter(|l| !l.starts_with('#'))
}

// ---------------------------------------------------------------- C1

/// Published summaries: (avg, max, std) for AA, AIA, FM, BWT.
const TABLE3: [(&str, [[f64; 3]; 4]); 4] = [
    (
        "table2",
        [
            [88.80, 96.81, 6.19],
            [29.39, 47.11, 12.05],
            [9.17, 22.10, 6.53],
            [-9.17, -22.10, 6.53],
        ],
    ),
    (
        "table4",
        [
            [57.92, 94.36, 19.89],
            [19.86, 26.35, 5.20],
            [0.00, 0.04, 0.04],
            [0.05, -0.04, 0.05],
        ],
    ),
    (
        "table5",
        [
            [89.50, 91.03, 0.73],
            [29.12, 49.03, 12.73],
            [2.88, 3.47, 1.13],
            [-2.88, -3.47, 1.13],
        ],
    ),
    (
        "table6",
        [
            [92.31, 93.30, 0.39],
            [30.02, 50.67, 13.12],
            [1.19, 1.49, 0.41],
            [-1.18, -1.49, 0.40],
        ],
    ),
];

fn c1_metrics_oracle() -> Outcome {
    let title = "metrics of the table fixtures match the published summaries (+-0.01)";
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let out = tempfile::tempdir().unwrap();
    let mut matched = 0;
    let mut misses = Vec::new();
    for (name, expected) in TABLE3 {
        let dir = out.path().join(name);
        let csv = fixtures.join(format!("{name}.csv"));
        if let Err(e) = colanet(&["metrics", csv.to_str().unwrap(), "--out", dir.to_str().unwrap()]) {
            return Outcome::new("C1", title, false, format!("{name}: {e}"));
        }
        let summary = fs::read_to_string(dir.join("summary.csv")).unwrap();
        for (line, want) in uncommented(&summary).skip(1).zip(expected) {
            let cells: Vec<&str> = line.split(',').collect();
            for (col, stat) in ["avg", "max", "std"].iter().enumerate() {
                let got: f64 = cells[col + 1].parse().unwrap();
                if (got - want[col]).abs() <= TOL + 1e-9 {
                    matched += 1;
                } else {
                    misses.push(format!("{name} {} {stat} {got:.4} vs {}", cells[0], want[col]));
                }
            }
        }
    }
    let total = TABLE3.len() * 12;
    let mut detail = format!("{matched}/{total} entries");
    if !misses.is_empty() {
        detail.push_str(&format!("; off: {}", misses.join(", ")));
    }
    Outcome::new("C1", title, misses.is_empty(), detail)
}

// ---------------------------------------------------------------- C2-C5

struct RunResult {
    profile: DegradationProfile,
    fm_last: Option<f64>,
}

fn run_experiment(data: &Path, sets: &[&str]) -> Result<RunResult, String> {
    let out = tempfile::tempdir().unwrap();
    let mut args = vec![
        "run",
        "--data-dir",
        data.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ];
    args.extend(["--set", "save_states=false"]);
    for s in sets {
        args.extend(["--set", s]);
    }
    colanet(&args)?;
    let profile = DegradationProfile::from_csv(&fs::read_to_string(out.path().join("profile.csv")).unwrap())
        .map_err(|e| e.to_string())?;
    let metrics = fs::read_to_string(out.path().join("metrics.csv")).unwrap();
    let last = uncommented(&metrics).last().unwrap();
    let fm = last.split(',').nth(4).unwrap();
    Ok(RunResult {
        profile,
        fm_last: fm.parse().ok(),
    })
}

fn pct(v: f64) -> f64 {
    100.0 * v
}

fn row_text(p: &DegradationProfile, k: usize) -> String {
    p.row(k)
        .iter()
        .map(|v| format!("{:.2}", pct(*v)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn c2_c3_mlp(data: &Path) -> Vec<Outcome> {
    let t2 = "MLP reaches >= 95% after one epoch on MNIST";
    let t3 = "MLP forgets: task 1 < 60% and FM_10 >= 15 after 10 permuted tasks";
    match run_experiment(data, &["model=mlp", "n_tasks=10"]) {
        Err(e) => vec![
            Outcome::new("C2", t2, false, e.clone()),
            Outcome::new("C3", t3, false, e),
        ],
        Ok(r) => {
            let a11 = pct(r.profile.get(1, 1));
            let a_n1 = pct(r.profile.get(10, 1));
            let fm = r.fm_last.unwrap_or(f64::NAN);
            vec![
                Outcome::new("C2", t2, a11 >= 95.0, format!("task 1 after one epoch: {a11:.2}%")),
                Outcome::new(
                    "C3",
                    t3,
                    a_n1 < 60.0 && fm >= 15.0,
                    format!(
                        "task 1 after task 10: {a_n1:.2}%, FM_10 {fm:.2}; final row [{}]",
                        row_text(&r.profile, 10)
                    ),
                ),
            ]
        }
    }
}

fn c4_stable(data: &Path) -> Outcome {
    let title = "M=15, alpha=0.023817: task 1 drifts < 1 point, fresh accuracy falls >= 8 points by task 2";
    let r = match run_experiment(
        data,
        &["n_tasks=3", "microcolumns=15", "alpha=0.023817", "test_limit=5000"],
    ) {
        Ok(r) => r,
        Err(e) => return Outcome::new("C4", title, false, e),
    };
    let p = &r.profile;
    let first: Vec<f64> = (1..=3).map(|k| pct(p.get(k, 1))).collect();
    let drift = first.iter().map(|v| (v - first[0]).abs()).fold(0.0, f64::max);
    let diag: Vec<f64> = p.diagonal().into_iter().map(pct).collect();
    let non_increasing = diag.windows(2).all(|w| w[1] <= w[0]);
    let drop = diag[0] - diag[1];
    Outcome::new(
        "C4",
        title,
        drift < 1.0 && non_increasing && drop >= 8.0,
        format!(
            "task-1 drift {drift:.2}, diagonal [{}], drop {drop:.2}",
            diag.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>().join(" ")
        ),
    )
}

fn c5_plastic(data: &Path) -> Outcome {
    let title = "M=45, alpha=0.01: every accuracy >= 85% and FM_3 <= 5 over 3 tasks";
    let r = match run_experiment(data, &["n_tasks=3", "microcolumns=45", "alpha=0.01", "test_limit=5000"]) {
        Ok(r) => r,
        Err(e) => return Outcome::new("C5", title, false, e),
    };
    let p = &r.profile;
    let min = p.rows().iter().flatten().fold(f64::INFINITY, |a, &v| a.min(pct(v)));
    let fm = r.fm_last.unwrap_or(f64::NAN);
    Outcome::new(
        "C5",
        title,
        min >= 85.0 && fm <= 5.0,
        format!("min accuracy {min:.2}%, FM_3 {fm:.2}; final row [{}]", row_text(p, 3)),
    )
}

// ---------------------------------------------------------------- C6

fn random_image(rng: &mut colanet::rng::Rng) -> GrayImage {
    let mut im = GrayImage::zeros();
    im.0.iter_mut().for_each(|p| *p = rng.gen());
    im
}

/// Ten blocky classes with speckle, enough for a network to learn something.
fn glyph(class: usize, rng: &mut colanet::rng::Rng) -> GrayImage {
    let mut im = GrayImage::zeros();
    for (p, px) in im.0.iter_mut().enumerate() {
        let (r, c) = (p / 28, p % 28);
        let on = (r / 7 + c / 7 + class).is_multiple_of(4) || (r + 2 * class).is_multiple_of(10);
        if on ^ (rng.gen::<f64>() < 0.05) {
            *px = 200 + rng.gen_range(0..56);
        }
    }
    im
}

fn synthetic_split(train: usize, test: usize, seed: u64) -> Split {
    let mut rng = stream(seed, Purpose::WeightInit, 99);
    let mut make = |n: usize| {
        let labels: Vec<u8> = (0..n).map(|i| (i % 10) as u8).collect();
        let images = labels.iter().map(|&l| glyph(l as usize, &mut rng)).collect();
        Arc::new(LabeledDataset::new(images, labels, 10).unwrap())
    };
    Split {
        train: make(train),
        test: make(test),
    }
}

type Check = (&'static str, Result<(), String>);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn permutation_checks() -> Result<(), String> {
    let mut rng = stream(7, Purpose::Permutation, 0);
    for seed in 1..=50u64 {
        let p = gen_permutation(seed);
        let img = random_image(&mut rng);
        let there = apply_permutation(&img, &p);
        check(apply_permutation(&there, &p.inverse()) == img, || {
            format!("seed {seed}: round trip")
        })?;
        let (mut a, mut b) = (img.0.to_vec(), there.0.to_vec());
        a.sort_unstable();
        b.sort_unstable();
        check(a == b, || format!("seed {seed}: histogram changed"))?;
    }
    Ok(())
}

fn encoder_checks() -> Result<(), String> {
    let mut rng = stream(3, Purpose::TrainEncoding, 0);
    let presentations = 200;
    for v in [1u8, 25, 51, 128, 200, 254] {
        let img = GrayImage([v; PIXELS]);
        let spikes: usize = (0..presentations)
            .map(|_| encode(&img, 10, 10, &mut rng).spike_count())
            .sum();
        let n = (presentations * 10 * PIXELS) as f64;
        let p = f64::from(v) / 255.0;
        let sigma = (n * p * (1.0 - p)).sqrt();
        let dev = (spikes as f64 - n * p).abs();
        check(dev <= 3.0 * sigma, || {
            format!("intensity {v}: {dev:.1} > 3 sigma {sigma:.1}")
        })?;
    }
    Ok(())
}

fn field(weights: &[f64]) -> ReceptiveField {
    let mut w = vec![0.0; PIXELS];
    w[..weights.len()].copy_from_slice(weights);
    ReceptiveField::new(w, -1.0, 1.0)
}

fn threshold_checks() -> Result<(), String> {
    let rf = field(&[0.5, 0.25, 0.25, -0.3]);
    let t = adaptive_threshold(&rf, &NeuronState::new(1.0, 0.025, 0.0, 1.0));
    check((t - 1.025).abs() < 1e-12, || format!("mixed weights: {t}"))?;
    let t = adaptive_threshold(&rf, &NeuronState::new(1.0, 0.0, 0.0, 1.0));
    check(t == 1.0, || format!("alpha 0: {t}"))?;
    let t = adaptive_threshold(&field(&[-0.5, -0.2, -1.0]), &NeuronState::new(1.0, 0.3, 0.0, 1.0));
    check(t == 1.0, || format!("all negative: {t}"))
}

fn plasticity(ns: VirtualSynapses) -> PlasticityConfig {
    PlasticityConfig {
        eta_plus: 0.05,
        eta_minus: 0.2,
        virtual_synapses: ns,
    }
}

fn renormalization_checks() -> Result<(), String> {
    let mut rng = stream(5, Purpose::WeightInit, 1);
    for trial in 0..100 {
        let w: Vec<f64> = (0..PIXELS).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let counts: Vec<u16> = (0..PIXELS).map(|_| rng.gen_range(0..=10)).collect();

        let mut conserved = ReceptiveField::new(w.clone(), -1.0, 1.0);
        conserved.set_eligibility(&counts);
        let before = conserved.weight_sum();
        potentiate(&mut conserved, &plasticity(VirtualSynapses::Finite(0)), 10);
        let after = conserved.weight_sum();
        check((after - before).abs() <= 1e-9 * before.abs().max(1.0), || {
            format!("trial {trial}: ns=0 sum {before} -> {after}")
        })?;

        let mut inf = ReceptiveField::new(w.clone(), -1.0, 1.0);
        inf.set_eligibility(&counts);
        potentiate(&mut inf, &plasticity(VirtualSynapses::Infinite), 10);
        let mut huge = ReceptiveField::new(w.clone(), -1.0, 1.0);
        huge.set_eligibility(&counts);
        potentiate(&mut huge, &plasticity(VirtualSynapses::Finite(1 << 50)), 10);
        for (i, ((&a, &b), &w0)) in inf.weights.iter().zip(&huge.weights).zip(&w).enumerate() {
            let plain = (w0 + 0.05 * f64::from(counts[i]) / 10.0).min(1.0);
            check((a - plain).abs() < 1e-12, || {
                format!("trial {trial}: ns=inf renormalized synapse {i}")
            })?;
            check((a - b).abs() < 1e-9, || {
                format!("trial {trial}: ns=2^50 differs at {i}")
            })?;
        }
    }
    Ok(())
}

fn bounds_checks() -> Result<(), String> {
    let mut rng = stream(9, Purpose::WeightInit, 2);
    for ns in [
        VirtualSynapses::Finite(0),
        VirtualSynapses::Finite(1000),
        VirtualSynapses::Infinite,
    ] {
        let mut rf = ReceptiveField::new((0..PIXELS).map(|_| rng.gen_range(-1.0..=1.0)).collect(), -1.0, 1.0);
        for step in 0..500 {
            let counts: Vec<u16> = (0..PIXELS)
                .map(|_| if rng.gen_bool(0.2) { rng.gen_range(1..=10) } else { 0 })
                .collect();
            rf.set_eligibility(&counts);
            if rng.gen_bool(0.5) {
                potentiate(&mut rf, &plasticity(ns), 10);
            } else {
                depress(&mut rf, &plasticity(ns), 10);
            }
            check(rf.weights.iter().all(|w| (-1.0..=1.0).contains(w)), || {
                format!("ns {ns}: step {step} out of bounds")
            })?;
        }
    }
    Ok(())
}

fn evaluation_count_checks() -> Result<(), String> {
    let split = synthetic_split(50, 20, 1);
    for n in [1usize, 2, 4] {
        let tasks = make_permuted_stream(&split, n, 1).map_err(|e| e.to_string())?;
        let mut net = Network::new(ColaNetConfig::default()).map_err(|e| e.to_string())?;
        let run = run_sequence(&mut net, &tasks, None).map_err(|e| e.to_string())?;
        check(run.evaluations == n * (n + 1) / 2, || {
            format!("{n} tasks: {} evaluations", run.evaluations)
        })?;
    }
    Ok(())
}

fn trained_network(m: usize) -> Network {
    let split = synthetic_split(600, 10, 2);
    let tasks = make_permuted_stream(&split, 1, 1).unwrap();
    let mut net = Network::new(ColaNetConfig {
        microcolumns: m,
        ..ColaNetConfig::default()
    })
    .unwrap();
    net.train_task(&tasks[0]).unwrap();
    net
}

fn serialization_checks(net: &Network) -> Result<(), String> {
    let restored = Network::from_bytes(&net.to_bytes()).map_err(|e| e.to_string())?;
    let mut probes = stream(4, Purpose::EvalEncoding, 0);
    let mut glyphs = stream(4, Purpose::EvalEncoding, 1);
    for i in 0..1000 {
        let img = if i % 2 == 0 {
            random_image(&mut probes)
        } else {
            glyph(i % 10, &mut glyphs)
        };
        let a = net.predict(&img, &mut net.eval_rng(77, i));
        let b = restored.predict(&img, &mut restored.eval_rng(77, i));
        check(a == b, || format!("network probe {i}: {a:?} vs {b:?}"))?;
    }

    let mlp = Mlp::new(MlpConfig {
        hidden: 32,
        ..MlpConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let back = Mlp::from_bytes(&mlp.to_bytes()).map_err(|e| e.to_string())?;
    for i in 0..1000 {
        let img = random_image(&mut probes);
        check(mlp.forward(&img) == back.forward(&img), || {
            format!("MLP probe {i} differs")
        })?;
    }
    Ok(())
}

fn gradient_checks() -> Result<(), String> {
    let mut mlp = Mlp::new(MlpConfig {
        hidden: 8,
        ..MlpConfig::default()
    })
    .map_err(|e| e.to_string())?;
    mlp.params
        .b1
        .iter_mut()
        .enumerate()
        .for_each(|(i, b)| *b = 0.05 * i as f64);
    let mut rng = stream(6, Purpose::MlpInit, 1);
    let x = Array2::from_shape_fn((4, PIXELS), |_| rng.gen::<f64>());
    let y = [3usize, 0, 9, 5];
    let (_, g) = mlp.loss_and_gradients(x.view(), &y);
    let h = 1e-5;
    type Pick = fn(&mut MlpParams) -> &mut f64;
    let picks: [(Pick, f64); 8] = [
        (|p| &mut p.w1[[0, 0]], g.w1[[0, 0]]),
        (|p| &mut p.w1[[400, 5]], g.w1[[400, 5]]),
        (|p| &mut p.w1[[783, 7]], g.w1[[783, 7]]),
        (|p| &mut p.b1[6], g.b1[6]),
        (|p| &mut p.w2[[3, 4]], g.w2[[3, 4]]),
        (|p| &mut p.w2[[7, 9]], g.w2[[7, 9]]),
        (|p| &mut p.b2[0], g.b2[0]),
        (|p| &mut p.b2[9], g.b2[9]),
    ];
    for (i, (pick, analytic)) in picks.into_iter().enumerate() {
        let mut plus = mlp.clone();
        *pick(&mut plus.params) += h;
        let mut minus = mlp.clone();
        *pick(&mut minus.params) -= h;
        let numeric = (plus.loss_and_gradients(x.view(), &y).0 - minus.loss_and_gradients(x.view(), &y).0) / (2.0 * h);
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8);
        check(rel < 1e-4, || format!("parameter {i}: relative error {rel:.2e}"))?;
    }
    Ok(())
}

fn c6_properties(net: &Network) -> Outcome {
    let checks: Vec<Check> = vec![
        ("permutation", permutation_checks()),
        ("encoder", encoder_checks()),
        ("threshold", threshold_checks()),
        ("renormalization", renormalization_checks()),
        ("weight bounds", bounds_checks()),
        ("evaluation count", evaluation_count_checks()),
        ("serialization", serialization_checks(net)),
        ("gradient", gradient_checks()),
    ];
    let failed: Vec<String> = checks
        .iter()
        .filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}")))
        .collect();
    let detail = if failed.is_empty() {
        format!(
            "{} suites: {}",
            checks.len(),
            checks.iter().map(|c| c.0).collect::<Vec<_>>().join(", ")
        )
    } else {
        failed.join("; ")
    };
    Outcome::new("C6", "property suites", failed.is_empty(), detail)
}

// ---------------------------------------------------------------- C7

fn pixel(ppm: &[u8], width: usize, x: usize, y: usize) -> [u8; 3] {
    let body = ppm.iter().enumerate().filter(|(_, &b)| b == b'\n').nth(2).unwrap().0 + 1;
    let at = body + (y * width + x) * 3;
    [ppm[at], ppm[at + 1], ppm[at + 2]]
}

fn heatmap_checks(trained: &Network) -> Result<String, String> {
    let (w, h) = grid_size(10, 15);
    let ppm = heatmap_ppm(trained);
    check(ppm.starts_with(format!("P6\n{w} {h}\n255\n").as_bytes()), || {
        "header".into()
    })?;
    // Separators every 29 pixels are black; 10 x 15 tiles sit between them.
    let vertical: Vec<usize> = (0..w)
        .filter(|&x| (0..h).all(|y| pixel(&ppm, w, x, y) == [0, 0, 0]))
        .collect();
    let horizontal: Vec<usize> = (0..h)
        .filter(|&y| (0..w).all(|x| pixel(&ppm, w, x, y) == [0, 0, 0]))
        .collect();
    check(vertical.len() == 16 && horizontal.len() == 11, || {
        format!("{} x {} separators", horizontal.len(), vertical.len())
    })?;
    let tiles = (horizontal.len() - 1) * (vertical.len() - 1);

    let mut net = Network::new(ColaNetConfig {
        init_max: 0.0,
        ..ColaNetConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let blank = heatmap_ppm(&net);
    for (k, p) in [(0usize, 0usize), (7, 300), (149, 783)] {
        let (x, y) = (1 + (k % 15) * 29 + p % 28, 1 + (k / 15) * 29 + p / 28);
        check(pixel(&blank, w, x, y) == [255, 255, 255], || {
            format!("zero net not white at tile {k}")
        })?;
    }
    let inner_white = (0..h).filter(|y| y % 29 != 0).all(|y| {
        (0..w)
            .filter(|x| x % 29 != 0)
            .all(|x| pixel(&blank, w, x, y) == [255, 255, 255])
    });
    check(inner_white, || "zero-weight network is not uniformly white".into())?;

    let mut rf = vec![0.0; PIXELS];
    rf[0] = 1.0;
    rf[1] = -1.0;
    rf[2] = 0.5;
    net.set_receptive_field(Microcolumn::new(2, 3), &rf);
    let ppm = heatmap_ppm(&net);
    let (x0, y0) = (1 + 3 * 29, 1 + 2 * 29);
    check(pixel(&ppm, w, x0, y0) == [255, 0, 0], || {
        "positive weight is not red".into()
    })?;
    check(pixel(&ppm, w, x0 + 1, y0) == [0, 0, 255], || {
        "negative weight is not blue".into()
    })?;
    check(pixel(&ppm, w, x0 + 2, y0) == [255, 128, 128], || {
        "half weight is not pale red".into()
    })?;
    check(pixel(&ppm, w, x0 + 3, y0) == [255, 255, 255], || {
        "zero weight is not white".into()
    })?;
    Ok(format!(
        "{tiles} tiles in a {w}x{h} image; red positive, blue negative, zero net white"
    ))
}

fn c7_heatmap(trained: &Network) -> Outcome {
    let title = "heatmap of an M=15 network: 10x15 tiles, red/blue mapping, blank net white";
    match heatmap_checks(trained) {
        Ok(d) => Outcome::new("C7", title, true, d),
        Err(e) => Outcome::new("C7", title, false, e),
    }
}

// ----------------------------------------------------------------

fn mnist_dir() -> Option<PathBuf> {
    let dir = std::env::var_os("COLANET_MNIST_DIR").map_or_else(|| PathBuf::from("/root/data/mnist"), PathBuf::from);
    colanet::dataset::load_mnist(&dir).is_ok().then_some(dir)
}

fn main() {
    let data = mnist_dir();
    let mut outcomes = vec![c1_metrics_oracle()];
    match &data {
        Some(dir) => {
            // The three data runs are independent; run them side by side.
            let (mlp, c4, c5) = std::thread::scope(|s| {
                let mlp = s.spawn(|| c2_c3_mlp(dir));
                let c4 = s.spawn(|| c4_stable(dir));
                let c5 = s.spawn(|| c5_plastic(dir));
                (mlp.join().unwrap(), c4.join().unwrap(), c5.join().unwrap())
            });
            outcomes.extend(mlp);
            outcomes.push(c4);
            outcomes.push(c5);
        }
        None => {
            let why = "MNIST not found (set COLANET_MNIST_DIR)";
            outcomes.push(Outcome::skip("C2", "MLP one-epoch accuracy", why));
            outcomes.push(Outcome::skip("C3", "MLP forgetting trend", why));
            outcomes.push(Outcome::skip("C4", "M=15 zero-forgetting regime", why));
            outcomes.push(Outcome::skip("C5", "M=45 plasticity regime", why));
        }
    }
    let trained = trained_network(15);
    outcomes.push(c6_properties(&trained));
    outcomes.push(c7_heatmap(&trained));

    println!();
    for o in &outcomes {
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        println!("{tag} {} {}: {}", o.id, o.title, o.detail);
    }
    let strict = std::env::var("COLANET_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let unexpected: Vec<&str> = outcomes
        .iter()
        .filter(|o| o.status == Status::Fail && (strict || !KNOWN_FAILURES.contains(&o.id)))
        .map(|o| o.id)
        .collect();
    let passed = outcomes.iter().filter(|o| o.status == Status::Pass).count();
    println!("\n{passed}/{} criteria pass", outcomes.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
