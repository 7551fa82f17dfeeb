//! Run manifests: configuration, derived seeds and content hashes of inputs.
//!
//! Hashes use the git blob convention, `sha1("blob <len>\0" ++ content)`, so
//! `git hash-object <file>` reproduces them.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use colanet::rng::{derive_seed, Purpose};
use sha1::{Digest, Sha1};

use crate::config::ExperimentConfig;

pub fn git_blob_hash(content: &[u8]) -> String {
    let mut h = Sha1::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Config lines prefixed with `# `, for the head of CSV and text outputs.
/// The output directory is left out so that identical experiments written to
/// different places produce identical files.
pub fn provenance_header(cfg: &ExperimentConfig) -> String {
    let mut out = format!("# colanet {}\n", env!("CARGO_PKG_VERSION"));
    for line in cfg.echo().lines().filter(|l| !l.starts_with("out =")) {
        let _ = writeln!(out, "# {line}");
    }
    out
}

#[derive(Debug, Default)]
pub struct Manifest {
    command: String,
    inputs: Vec<(String, PathBuf)>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Manifest {
            command: command.to_string(),
            inputs: Vec::new(),
        }
    }

    /// Registers an input file under a role name (`config`, `mnist/...`).
    pub fn input(&mut self, role: impl Into<String>, path: &Path) {
        self.inputs.push((role.into(), path.to_path_buf()));
    }

    pub fn render(&self, cfg: &ExperimentConfig) -> io::Result<String> {
        let mut out = format!("command = {}\nversion = {}\n", self.command, env!("CARGO_PKG_VERSION"));
        for line in cfg.echo().lines().filter(|l| !l.starts_with("out =")) {
            let _ = writeln!(out, "{line}");
        }
        out.push_str("\n[seeds]\n");
        let s = cfg.seed;
        let _ = writeln!(out, "root = {s}");
        let _ = writeln!(out, "weight_init = {}", derive_seed(s, Purpose::WeightInit, 0));
        let _ = writeln!(out, "mlp_init = {}", derive_seed(s, Purpose::MlpInit, 0));
        let _ = writeln!(out, "train_encoding = stream({s}, train-encoding, samples_seen)");
        let _ = writeln!(out, "eval_encoding = stream({s}, eval-encoding, task << 32 | sample)");
        if cfg.scenario == crate::config::Scenario::Permuted {
            for k in 1..=cfg.n_tasks {
                let _ = writeln!(out, "permutation_{k} = {}", colanet::dataset::permutation_seed(s, k));
            }
        }
        out.push_str("\n[inputs]\n");
        for (role, path) in &self.inputs {
            let bytes =
                std::fs::read(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
            let _ = writeln!(out, "{role} = {} {}", git_blob_hash(&bytes), path.display());
        }
        Ok(out)
    }

    pub fn write(&self, cfg: &ExperimentConfig, dir: &Path) -> io::Result<()> {
        std::fs::write(dir.join("manifest.txt"), self.render(cfg)?)
    }
}
