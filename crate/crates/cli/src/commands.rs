use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use colanet::baseline::Mlp;
use colanet::bench::{
    baseline_from_csv, baseline_to_csv, run_sequence, DegradationProfile, MetricsReport, ModelAdapter,
};
use colanet::dataset::{
    load_emnist_balanced, load_mnist, make_emnist_letters, make_mnist_truncated, make_permuted_stream, sequence,
    TaskSpec, EMNIST_LETTERS,
};
use colanet::network::{grid_size, write_heatmap_ppm, Network};
use colanet::snn::VirtualSynapses;

use crate::config::{ExperimentConfig, ModelKind, Scenario};
use crate::manifest::{provenance_header, Manifest};

/// Sample counts of the truncated MNIST task in the two-task protocol.
const TWO_TASK_TRAIN: usize = 24_000;
const TWO_TASK_TEST: usize = 4_000;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(colanet::Error),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(e) => write!(f, "error: {e}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

fn innermost(e: &colanet::Error) -> &colanet::Error {
    match e {
        colanet::Error::Task { source, .. } => innermost(source),
        other => other,
    }
}

impl From<colanet::Error> for CliError {
    fn from(e: colanet::Error) -> Self {
        match innermost(&e) {
            colanet::Error::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

fn io_context(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| {
        CliError::Data(colanet::Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        )))
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(io_context(path))
}

fn write_text(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(io_context(path))
}

/// Registers every IDX file in `dir` with the manifest.
fn register_idx_files(manifest: &mut Manifest, role: &str, dir: &Path) {
    let Ok(entries) = fs::read_dir(dir) else { return };
    let mut names: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.file_name().is_some_and(|n| n.to_string_lossy().contains("ubyte")))
        .collect();
    names.sort();
    for p in names {
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        manifest.input(format!("{role}/{name}"), &p);
    }
}

/// Builds the task stream of the configured scenario.
pub fn load_tasks(cfg: &ExperimentConfig, manifest: &mut Manifest) -> CliResult<Vec<TaskSpec>> {
    let tasks = match cfg.scenario {
        Scenario::Permuted => {
            let mnist = load_mnist(&cfg.mnist_dir)?;
            register_idx_files(manifest, "mnist", &cfg.mnist_dir);
            make_permuted_stream(&mnist, cfg.n_tasks, cfg.seed)?
        }
        Scenario::TwoTaskForward | Scenario::TwoTaskReverse => {
            if cfg.n_tasks != 2 {
                log::warn!("two-task scenario ignores n_tasks = {}", cfg.n_tasks);
            }
            let mnist = load_mnist(&cfg.mnist_dir)?;
            let emnist = load_emnist_balanced(&cfg.emnist_dir)?;
            register_idx_files(manifest, "mnist", &cfg.mnist_dir);
            register_idx_files(manifest, "emnist", &cfg.emnist_dir);
            let train = cfg.train_limit.map_or(TWO_TASK_TRAIN, |n| n.min(TWO_TASK_TRAIN));
            let test = cfg.test_limit.map_or(TWO_TASK_TEST, |n| n.min(TWO_TASK_TEST));
            let digits = make_mnist_truncated(&mnist, train, test)?;
            let letters = make_emnist_letters(&emnist, &EMNIST_LETTERS)?;
            if cfg.scenario == Scenario::TwoTaskForward {
                sequence(vec![digits, letters])
            } else {
                sequence(vec![letters, digits])
            }
        }
    };
    Ok(tasks
        .into_iter()
        .map(|t| t.limited(cfg.train_limit, cfg.test_limit))
        .collect())
}

fn load_baseline(cfg: &ExperimentConfig, manifest: &mut Manifest, tasks: usize) -> CliResult<Option<Vec<f64>>> {
    let Some(path) = &cfg.baseline_csv else { return Ok(None) };
    let acc = baseline_from_csv(&read_text(path)?)?;
    if acc.len() < tasks {
        return Err(CliError::Data(colanet::Error::Profile(format!(
            "{}: baseline has {} tasks, the run has {tasks}",
            path.display(),
            acc.len()
        ))));
    }
    manifest.input("baseline", path);
    Ok(Some(acc))
}

/// Fresh model of the configured kind for a stream with `classes` labels.
fn with_model<T>(
    cfg: &ExperimentConfig,
    classes: usize,
    f: impl FnOnce(&mut dyn Adapter) -> colanet::Result<T>,
) -> CliResult<T> {
    match cfg.model {
        ModelKind::ColaNet => Ok(f(&mut Network::new(cfg.colanet_config(classes))?)?),
        ModelKind::Mlp => {
            if classes != colanet::baseline::OUTPUTS {
                return Err(CliError::Usage(format!(
                    "the MLP has 10 outputs, the tasks have {classes} classes"
                )));
            }
            Ok(f(&mut Mlp::new(cfg.mlp_config())?)?)
        }
    }
}

/// Object-safe view of [`ModelAdapter`] so both models share one code path.
pub trait Adapter {
    fn run(&mut self, tasks: &[TaskSpec], states: Option<&Path>) -> colanet::Result<colanet::bench::SequenceRun>;
    fn train_and_score(&mut self, task: &TaskSpec) -> colanet::Result<f64>;
}

impl<M: ModelAdapter> Adapter for M {
    fn run(&mut self, tasks: &[TaskSpec], states: Option<&Path>) -> colanet::Result<colanet::bench::SequenceRun> {
        run_sequence(self, tasks, states)
    }

    fn train_and_score(&mut self, task: &TaskSpec) -> colanet::Result<f64> {
        self.train_task(task)?;
        self.evaluate_task(task)
    }
}

fn check_evaluations(run: &colanet::bench::SequenceRun) -> CliResult {
    let n = run.profile.tasks();
    if run.evaluations != n * (n + 1) / 2 {
        return Err(CliError::Internal(format!(
            "{} evaluations for {n} tasks, expected {}",
            run.evaluations,
            n * (n + 1) / 2
        )));
    }
    Ok(())
}

fn write_metrics(dir: &Path, header: &str, report: &MetricsReport) -> CliResult {
    write_text(&dir.join("metrics.csv"), &format!("{header}{}", report.to_csv()))?;
    write_text(&dir.join("summary.csv"), &format!("{header}{}", report.summary_csv()))?;
    write_text(&dir.join("summary.txt"), &format!("{header}{}", report.summary_text()))
}

fn create_out(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(io_context(dir))
}

pub fn run(cfg: &ExperimentConfig, config_path: Option<&Path>) -> CliResult {
    let mut manifest = Manifest::new("run");
    if let Some(p) = config_path {
        manifest.input("config", p);
    }
    let tasks = load_tasks(cfg, &mut manifest)?;
    let baseline = load_baseline(cfg, &mut manifest, tasks.len())?;
    create_out(&cfg.out)?;
    manifest.write(cfg, &cfg.out)?;
    let states = cfg.out.join("states");
    if cfg.save_states {
        create_out(&states)?;
    }
    let run = with_model(cfg, tasks[0].class_count(), |m| {
        m.run(&tasks, cfg.save_states.then_some(states.as_path()))
    })?;
    check_evaluations(&run)?;

    let header = provenance_header(cfg);
    write_text(
        &cfg.out.join("profile.csv"),
        &format!("{header}{}", run.profile.to_csv()),
    )?;
    let report = MetricsReport::compute(&run.profile, baseline.as_deref());
    write_metrics(&cfg.out, &header, &report)?;
    print!("{}", report.summary_text());
    log::info!("outputs written to {}", cfg.out.display());
    Ok(())
}

pub fn baseline_acc(cfg: &ExperimentConfig, config_path: Option<&Path>) -> CliResult {
    let mut manifest = Manifest::new("baseline-acc");
    if let Some(p) = config_path {
        manifest.input("config", p);
    }
    let tasks = load_tasks(cfg, &mut manifest)?;
    create_out(&cfg.out)?;
    manifest.write(cfg, &cfg.out)?;
    let mut acc = Vec::with_capacity(tasks.len());
    for task in &tasks {
        let a = with_model(cfg, task.class_count(), |m| m.train_and_score(task))?;
        log::info!("fresh model on task {}: {:.2}%", task.id, 100.0 * a);
        acc.push(a);
    }
    let path = cfg.out.join("baseline.csv");
    write_text(&path, &format!("{}{}", provenance_header(cfg), baseline_to_csv(&acc)))?;
    print!("{}", baseline_to_csv(&acc));
    Ok(())
}

/// One point of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub ns: VirtualSynapses,
    pub profile: DegradationProfile,
}

impl SweepRow {
    fn csv_line(&self) -> String {
        let p = &self.profile;
        let n = p.tasks();
        let report = MetricsReport::compute(p, None);
        let pct = |v: f64| format!("{:.4}", 100.0 * v);
        format!(
            "{},{},{},{},{},{},{}\n",
            self.alpha,
            self.ns,
            pct(report.aa[n - 1]),
            report.fm[n - 1].map_or_else(|| "NA".into(), pct),
            pct(p.get(1, 1)),
            pct(p.get(n, 1)),
            pct(p.get(n, n)),
        )
    }
}

pub fn sweep(cfg: &ExperimentConfig, config_path: Option<&Path>) -> CliResult {
    if cfg.model != ModelKind::ColaNet {
        return Err(CliError::Usage(
            "sweep varies alpha and ns, which only apply to model = colanet".into(),
        ));
    }
    if cfg.alpha_grid.is_empty() && cfg.ns_grid.is_empty() {
        return Err(CliError::Usage("sweep needs a non-empty alpha_grid or ns_grid".into()));
    }
    let alphas = if cfg.alpha_grid.is_empty() {
        vec![cfg.colanet.alpha]
    } else {
        cfg.alpha_grid.clone()
    };
    let nss = if cfg.ns_grid.is_empty() {
        vec![cfg.colanet.virtual_synapses]
    } else {
        cfg.ns_grid.clone()
    };
    let points: Vec<(f64, VirtualSynapses)> = alphas.iter().flat_map(|&a| nss.iter().map(move |&n| (a, n))).collect();

    let mut manifest = Manifest::new("sweep");
    if let Some(p) = config_path {
        manifest.input("config", p);
    }
    let tasks = load_tasks(cfg, &mut manifest)?;
    create_out(&cfg.out)?;
    manifest.write(cfg, &cfg.out)?;
    let classes = tasks[0].class_count();

    // Points are independent; run them on a small worker pool.
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(points.len());
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CliResult<DegradationProfile>>>> =
        Mutex::new((0..points.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(alpha, ns)) = points.get(i) else { break };
                let mut c = cfg.clone();
                c.colanet.alpha = alpha;
                c.colanet.virtual_synapses = ns;
                let r = with_model(&c, classes, |m| m.run(&tasks, None)).and_then(|run| {
                    check_evaluations(&run)?;
                    Ok(run.profile)
                });
                log::info!("sweep point alpha = {alpha}, ns = {ns} done");
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });

    let header = provenance_header(cfg);
    let mut table = format!("{header}alpha,ns,aa,fm,first_before,first_after,last_fresh\n");
    for (i, (r, &(alpha, ns))) in results.into_inner().unwrap().into_iter().zip(&points).enumerate() {
        let profile = r.ok_or_else(|| CliError::Internal(format!("sweep point {i} produced no result")))??;
        write_text(
            &cfg.out.join(format!("profile_{}.csv", i + 1)),
            &format!("{header}# sweep point alpha = {alpha}, ns = {ns}\n{}", profile.to_csv()),
        )?;
        table.push_str(&SweepRow { alpha, ns, profile }.csv_line());
    }
    write_text(&cfg.out.join("sweep.csv"), &table)?;
    print!(
        "{}",
        table
            .lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    );
    Ok(())
}

pub fn metrics(profile: &Path, baseline: Option<&Path>, out: Option<&Path>) -> CliResult {
    let p = DegradationProfile::from_csv(&read_text(profile)?)
        .map_err(|e| CliError::Data(colanet::Error::Profile(format!("{}: {e}", profile.display()))))?;
    if p.is_empty() {
        return Err(CliError::Data(colanet::Error::Profile(format!(
            "{}: no rows",
            profile.display()
        ))));
    }
    let b = match baseline {
        Some(path) => {
            let b = baseline_from_csv(&read_text(path)?)?;
            if b.len() < p.tasks() {
                return Err(CliError::Data(colanet::Error::Profile(format!(
                    "{}: baseline has {} tasks, the profile has {}",
                    path.display(),
                    b.len(),
                    p.tasks()
                ))));
            }
            Some(b)
        }
        None => None,
    };
    let report = MetricsReport::compute(&p, b.as_deref());
    print!("{}", report.summary_text());
    if let Some(dir) = out {
        create_out(dir)?;
        let header = format!("# metrics of {}\n", profile.display());
        write_metrics(dir, &header, &report)?;
    }
    Ok(())
}

pub fn heatmap(state: &Path, out: &Path) -> CliResult {
    let net = Network::load_state(state)?;
    write_heatmap_ppm(&net, out)?;
    let c = net.config();
    let (w, h) = grid_size(c.class_count, c.microcolumns);
    println!(
        "{}: {} x {} tiles, {w} x {h} pixels",
        out.display(),
        c.class_count,
        c.microcolumns
    );
    Ok(())
}
