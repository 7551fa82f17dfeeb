//! Experiment configuration: a flat `key = value` file with `#` comments.
//!
//! Lists (`alpha_grid`, `ns_grid`) are comma-separated. An empty value
//! leaves the key at its default. Unknown keys are rejected.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use colanet::baseline::MlpConfig;
use colanet::network::ColaNetConfig;
use colanet::snn::VirtualSynapses;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    ColaNet,
    Mlp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Permuted,
    /// MNIST, then the EMNIST letter subset.
    TwoTaskForward,
    /// EMNIST letters, then MNIST.
    TwoTaskReverse,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::ColaNet => "colanet",
            ModelKind::Mlp => "mlp",
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Permuted => "permuted",
            Scenario::TwoTaskForward => "two-task-forward",
            Scenario::TwoTaskReverse => "two-task-reverse",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub scenario: Scenario,
    pub n_tasks: usize,
    pub seed: u64,
    pub mnist_dir: PathBuf,
    pub emnist_dir: PathBuf,
    pub out: PathBuf,
    pub train_limit: Option<usize>,
    pub test_limit: Option<usize>,
    /// Profile of `baseline-acc` output; enables forward transfer in `run`.
    pub baseline_csv: Option<PathBuf>,
    pub save_states: bool,
    pub alpha_grid: Vec<f64>,
    pub ns_grid: Vec<VirtualSynapses>,
    pub colanet: ColaNetConfig,
    pub mlp: MlpConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: ModelKind::ColaNet,
            scenario: Scenario::Permuted,
            n_tasks: 10,
            seed: 1,
            mnist_dir: PathBuf::from("data/mnist"),
            emnist_dir: PathBuf::from("data/emnist"),
            out: PathBuf::from("out"),
            train_limit: None,
            test_limit: None,
            baseline_csv: None,
            save_states: true,
            alpha_grid: Vec::new(),
            ns_grid: Vec::new(),
            colanet: ColaNetConfig::default(),
            mlp: MlpConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("invalid value {value:?} for {key}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("invalid boolean {value:?} for {key}")),
    }
}

fn parse_list<T, F: Fn(&str) -> Result<T, String>>(value: &str, item: F) -> Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError {
                line: Some(i + 1),
                message: format!("expected `key = value`, found {line:?}"),
            })?;
            cfg.set(key.trim(), value.trim()).map_err(|message| ConfigError {
                line: Some(i + 1),
                message,
            })?;
        }
        Ok(cfg)
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        if value.is_empty() {
            match key {
                "train_limit" => self.train_limit = None,
                "test_limit" => self.test_limit = None,
                "baseline_csv" => self.baseline_csv = None,
                "alpha_grid" => self.alpha_grid.clear(),
                "ns_grid" => self.ns_grid.clear(),
                _ if Self::KEYS.contains(&key) => {}
                _ => return Err(format!("unknown key {key:?}")),
            }
            return Ok(());
        }
        let c = &mut self.colanet;
        match key {
            "model" => {
                self.model = match value {
                    "colanet" => ModelKind::ColaNet,
                    "mlp" => ModelKind::Mlp,
                    _ => return Err(format!("unknown model {value:?} (expected colanet or mlp)")),
                }
            }
            "scenario" => {
                self.scenario = match value {
                    "permuted" => Scenario::Permuted,
                    "two-task-forward" => Scenario::TwoTaskForward,
                    "two-task-reverse" => Scenario::TwoTaskReverse,
                    _ => return Err(format!("unknown scenario {value:?}")),
                }
            }
            "n_tasks" => self.n_tasks = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "mnist_dir" => self.mnist_dir = PathBuf::from(value),
            "emnist_dir" => self.emnist_dir = PathBuf::from(value),
            "out" => self.out = PathBuf::from(value),
            "train_limit" => self.train_limit = Some(parse(key, value)?),
            "test_limit" => self.test_limit = Some(parse(key, value)?),
            "baseline_csv" => self.baseline_csv = Some(PathBuf::from(value)),
            "save_states" => self.save_states = parse_bool(key, value)?,
            "alpha_grid" => self.alpha_grid = parse_list(value, |s| parse(key, s))?,
            "ns_grid" => self.ns_grid = parse_list(value, |s| s.parse::<VirtualSynapses>())?,
            "alpha" => c.alpha = parse(key, value)?,
            "ns" => c.virtual_synapses = value.parse()?,
            "microcolumns" => c.microcolumns = parse(key, value)?,
            "u_const" => c.u_const = parse(key, value)?,
            "eta_plus" => c.eta_plus = parse(key, value)?,
            "eta_minus" => c.eta_minus = parse(key, value)?,
            "steps_active" => c.steps_active = parse(key, value)?,
            "steps_silent" => c.steps_silent = parse(key, value)?,
            "leak" => c.leak = parse(key, value)?,
            "input_gain" => c.input_gain = parse(key, value)?,
            "guidance" => c.guidance = parse(key, value)?,
            "w_min" => c.w_min = parse(key, value)?,
            "w_max" => c.w_max = parse(key, value)?,
            "init_max" => c.init_max = parse(key, value)?,
            "least_committed_fallback" => c.least_committed_fallback = parse_bool(key, value)?,
            "hidden" => self.mlp.hidden = parse(key, value)?,
            "batch_size" => self.mlp.batch_size = parse(key, value)?,
            "lr" => self.mlp.lr = parse(key, value)?,
            "rho" => self.mlp.rho = parse(key, value)?,
            "epsilon" => self.mlp.epsilon = parse(key, value)?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub const KEYS: [&'static str; 35] = [
        "model",
        "scenario",
        "n_tasks",
        "seed",
        "mnist_dir",
        "emnist_dir",
        "out",
        "train_limit",
        "test_limit",
        "baseline_csv",
        "save_states",
        "alpha_grid",
        "ns_grid",
        "alpha",
        "ns",
        "microcolumns",
        "u_const",
        "eta_plus",
        "eta_minus",
        "steps_active",
        "steps_silent",
        "leak",
        "input_gain",
        "guidance",
        "w_min",
        "w_max",
        "init_max",
        "least_committed_fallback",
        "hidden",
        "batch_size",
        "lr",
        "rho",
        "epsilon",
        // accepted for provenance only
        "name",
        "notes",
    ];

    /// Every setting as `key = value` lines, in a fixed order; parsing the
    /// output reproduces the configuration.
    pub fn echo(&self) -> String {
        let c = &self.colanet;
        let opt = |v: Option<usize>| v.map_or_else(String::new, |n| n.to_string());
        let list = |v: Vec<String>| v.join(", ");
        let pairs: Vec<(&str, String)> = vec![
            ("model", self.model.to_string()),
            ("scenario", self.scenario.to_string()),
            ("n_tasks", self.n_tasks.to_string()),
            ("seed", self.seed.to_string()),
            ("mnist_dir", self.mnist_dir.display().to_string()),
            ("emnist_dir", self.emnist_dir.display().to_string()),
            ("out", self.out.display().to_string()),
            ("train_limit", opt(self.train_limit)),
            ("test_limit", opt(self.test_limit)),
            (
                "baseline_csv",
                self.baseline_csv
                    .as_ref()
                    .map_or_else(String::new, |p| p.display().to_string()),
            ),
            ("save_states", self.save_states.to_string()),
            ("alpha_grid", list(self.alpha_grid.iter().map(f64::to_string).collect())),
            ("ns_grid", list(self.ns_grid.iter().map(ToString::to_string).collect())),
            ("alpha", c.alpha.to_string()),
            ("ns", c.virtual_synapses.to_string()),
            ("microcolumns", c.microcolumns.to_string()),
            ("u_const", c.u_const.to_string()),
            ("eta_plus", c.eta_plus.to_string()),
            ("eta_minus", c.eta_minus.to_string()),
            ("steps_active", c.steps_active.to_string()),
            ("steps_silent", c.steps_silent.to_string()),
            ("leak", c.leak.to_string()),
            ("input_gain", c.input_gain.to_string()),
            ("guidance", c.guidance.to_string()),
            ("w_min", c.w_min.to_string()),
            ("w_max", c.w_max.to_string()),
            ("init_max", c.init_max.to_string()),
            ("least_committed_fallback", c.least_committed_fallback.to_string()),
            ("hidden", self.mlp.hidden.to_string()),
            ("batch_size", self.mlp.batch_size.to_string()),
            ("lr", self.mlp.lr.to_string()),
            ("rho", self.mlp.rho.to_string()),
            ("epsilon", self.mlp.epsilon.to_string()),
        ];
        pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// The network configuration for a task stream with `classes` labels.
    pub fn colanet_config(&self, classes: usize) -> ColaNetConfig {
        ColaNetConfig {
            class_count: classes,
            seed: self.seed,
            ..self.colanet.clone()
        }
    }

    pub fn mlp_config(&self) -> MlpConfig {
        MlpConfig {
            seed: self.seed,
            ..self.mlp.clone()
        }
    }
}
