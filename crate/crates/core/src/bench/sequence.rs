use std::path::{Path, PathBuf};

use super::DegradationProfile;
use crate::baseline::Mlp;
use crate::dataset::TaskSpec;
use crate::error::{Error, Result};
use crate::network::Network;

/// What the sequencer needs from a model.
pub trait ModelAdapter {
    fn train_task(&mut self, task: &TaskSpec) -> Result<()>;
    /// Accuracy in `[0, 1]` on the task's test set.
    fn evaluate_task(&mut self, task: &TaskSpec) -> Result<f64>;
    fn save(&self, path: &Path) -> Result<()>;
    fn load(&mut self, path: &Path) -> Result<()>;
    /// File extension for saved states.
    fn state_extension(&self) -> &'static str {
        "bin"
    }
}

impl ModelAdapter for Network {
    fn train_task(&mut self, task: &TaskSpec) -> Result<()> {
        let stats = Network::train_task(self, task)?;
        log::info!("task {}: {stats:?}", task.id);
        Ok(())
    }

    fn evaluate_task(&mut self, task: &TaskSpec) -> Result<f64> {
        let r = Network::evaluate_task(self, task);
        if r.silent > 0 {
            log::info!(
                "task {}: {} of {} test images elicited no spike",
                task.id,
                r.silent,
                r.total
            );
        }
        Ok(r.accuracy())
    }

    fn save(&self, path: &Path) -> Result<()> {
        self.save_state(path)
    }

    fn load(&mut self, path: &Path) -> Result<()> {
        *self = Network::load_state(path)?;
        Ok(())
    }

    fn state_extension(&self) -> &'static str {
        "clnt"
    }
}

impl ModelAdapter for Mlp {
    fn train_task(&mut self, task: &TaskSpec) -> Result<()> {
        let loss = Mlp::train_task(self, task)?;
        log::info!("task {}: mean training loss {loss:.4}", task.id);
        Ok(())
    }

    fn evaluate_task(&mut self, task: &TaskSpec) -> Result<f64> {
        Ok(Mlp::evaluate_task(self, task))
    }

    fn save(&self, path: &Path) -> Result<()> {
        Mlp::save(self, path)
    }

    fn load(&mut self, path: &Path) -> Result<()> {
        *self = Mlp::load(path)?;
        Ok(())
    }

    fn state_extension(&self) -> &'static str {
        "mlpb"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRun {
    pub profile: DegradationProfile,
    pub evaluations: usize,
    pub state_files: Vec<PathBuf>,
}

fn in_task<T>(task: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Task {
        task,
        source: Box::new(e),
    })
}

/// Trains on `tasks` in order and fills one profile row per task.
///
/// With `state_dir`, the state after task `k` is written to
/// `state_dir/state_<k>.<ext>` and task `k + 1` starts from that file.
/// Without it the model simply carries over in memory.
pub fn run_sequence<M: ModelAdapter>(
    model: &mut M,
    tasks: &[TaskSpec],
    state_dir: Option<&Path>,
) -> Result<SequenceRun> {
    if tasks.is_empty() {
        return Err(Error::Config("a sequence needs at least one task".into()));
    }
    let mut run = SequenceRun {
        profile: DegradationProfile::new(),
        evaluations: 0,
        state_files: Vec::new(),
    };
    for (i, task) in tasks.iter().enumerate() {
        let k = i + 1;
        if let (Some(_), Some(prev)) = (state_dir, run.state_files.last()) {
            in_task(k, model.load(prev))?;
        }
        in_task(k, model.train_task(task))?;
        if let Some(dir) = state_dir {
            let path = dir.join(format!("state_{k}.{}", model.state_extension()));
            in_task(k, model.save(&path))?;
            run.state_files.push(path);
        }
        let mut row = Vec::with_capacity(k);
        for (j, earlier) in tasks[..k].iter().enumerate() {
            let acc = in_task(j + 1, model.evaluate_task(earlier))?;
            run.evaluations += 1;
            row.push(acc);
        }
        log::info!(
            "after task {k}: [{}]",
            row.iter()
                .map(|a| format!("{:.2}", 100.0 * a))
                .collect::<Vec<_>>()
                .join(", ")
        );
        run.profile.push_row(row)?;
    }
    Ok(run)
}
