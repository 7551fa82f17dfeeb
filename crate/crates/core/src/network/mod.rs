//! The columnar network: `C` columns of `M` microcolumns, one plastic neuron
//! each, with global winner-take-all competition and teacher-guided reward.
//!
//! A presentation is a race: every neuron integrates the same spike train and
//! the earliest threshold crossing wins and silences the rest. Crossing times
//! are interpolated inside the step, so two neurons that both cross during
//! step `t` are ordered by how early in the step they got there. Exact ties go
//! to the lowest (column, microcolumn).
//!
//! Training a sample:
//! 1. Unguided race. A winner in the label column is potentiated.
//! 2. A winner in another column is depressed.
//! 3. On any miss the same spike train is replayed with a guidance current
//!    injected into the label column; the first label microcolumn to fire is
//!    potentiated. If none fires, the least-committed one is rewarded when
//!    `least_committed_fallback` is set, and nothing happens otherwise.

mod heatmap;
mod state;

use std::ops::Range;

use rand::Rng as _;

use crate::dataset::{GrayImage, TaskData, TaskSpec, PIXELS};
use crate::encoder::{encode, SpikeTrain};
use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};
use crate::snn::{self, membrane_update, PlasticityConfig, ReceptiveField, VirtualSynapses};

pub use heatmap::{grid_size, heatmap_ppm, write_heatmap_ppm};
pub use state::STATE_VERSION;

#[derive(Debug, Clone, PartialEq)]
pub struct ColaNetConfig {
    pub class_count: usize,
    pub microcolumns: usize,
    pub alpha: f64,
    pub virtual_synapses: VirtualSynapses,
    pub u_const: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
    pub steps_active: usize,
    pub steps_silent: usize,
    pub seed: u64,
    pub leak: f64,
    /// Scale from summed input weight to membrane drive per step.
    pub input_gain: f64,
    /// Current injected into the label column during the guided replay.
    pub guidance: f64,
    pub w_min: f64,
    pub w_max: f64,
    /// Initial weights are drawn from `U[0, init_max)`.
    pub init_max: f64,
    pub least_committed_fallback: bool,
}

impl Default for ColaNetConfig {
    fn default() -> Self {
        ColaNetConfig {
            class_count: 10,
            microcolumns: 15,
            alpha: 0.023817,
            virtual_synapses: VirtualSynapses::Finite(0),
            u_const: 1.0,
            eta_plus: 0.05,
            eta_minus: 0.2,
            steps_active: 10,
            steps_silent: 10,
            seed: 1,
            leak: 0.0,
            input_gain: 0.015,
            guidance: 0.4,
            w_min: -1.0,
            w_max: 1.0,
            init_max: 0.1,
            least_committed_fallback: false,
        }
    }
}

impl ColaNetConfig {
    pub fn neurons(&self) -> usize {
        self.class_count * self.microcolumns
    }

    pub fn plasticity(&self) -> PlasticityConfig {
        PlasticityConfig {
            eta_plus: self.eta_plus,
            eta_minus: self.eta_minus,
            virtual_synapses: self.virtual_synapses,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.class_count == 0 || self.class_count > usize::from(u16::MAX) {
            return bad(format!("class count {} out of range", self.class_count));
        }
        if self.microcolumns == 0 || self.microcolumns > usize::from(u16::MAX) {
            return bad(format!("microcolumn count {} out of range", self.microcolumns));
        }
        if self.steps_active == 0 {
            return bad("steps_active must be at least 1".into());
        }
        if !(self.w_min <= 0.0 && 0.0 <= self.w_max) {
            return bad(format!("weight bounds [{}, {}] must contain 0", self.w_min, self.w_max));
        }
        if !(0.0..=1.0).contains(&self.leak) {
            return bad(format!("leak {} outside [0, 1]", self.leak));
        }
        if !(0.0 <= self.init_max && self.init_max <= self.w_max) {
            return bad(format!("init_max {} outside [0, w_max]", self.init_max));
        }
        let reals = [
            self.alpha,
            self.u_const,
            self.eta_plus,
            self.eta_minus,
            self.input_gain,
            self.guidance,
        ];
        if reals.iter().any(|x| !x.is_finite()) {
            return bad("non-finite parameter".into());
        }
        Ok(())
    }
}

/// Address of one microcolumn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Microcolumn {
    pub column: usize,
    pub index: usize,
}

impl Microcolumn {
    pub fn new(column: usize, index: usize) -> Self {
        Microcolumn { column, index }
    }
}

/// Result of a race.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winner {
    pub unit: Microcolumn,
    /// Crossing time in steps, `t + fraction`.
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainKind {
    /// Unguided winner was in the label column.
    Correct,
    /// A label microcolumn fired under guidance and was rewarded.
    Guided,
    /// Nothing fired under guidance; the least-committed microcolumn was rewarded.
    Fallback,
    /// Nothing was rewarded.
    Unrewarded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainOutcome {
    pub kind: TrainKind,
    pub winner: Option<Winner>,
    pub depressed: Option<Microcolumn>,
    pub rewarded: Option<Microcolumn>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prediction {
    pub class: usize,
    /// No neuron fired. `class` is then 0 by convention and never scores.
    pub silent: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrainStats {
    pub correct: usize,
    pub depressed: usize,
    pub guided: usize,
    pub fallback: usize,
    pub unrewarded: usize,
}

impl TrainStats {
    fn record(&mut self, o: &TrainOutcome) {
        match o.kind {
            TrainKind::Correct => self.correct += 1,
            TrainKind::Guided => self.guided += 1,
            TrainKind::Fallback => self.fallback += 1,
            TrainKind::Unrewarded => self.unrewarded += 1,
        }
        if o.depressed.is_some() {
            self.depressed += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub correct: usize,
    pub total: usize,
    pub silent: usize,
}

impl EvalReport {
    pub fn accuracy(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    config: ColaNetConfig,
    /// Pixel-major: `weights[p * neurons + n]`, so the inputs of one pixel to
    /// every neuron are contiguous.
    weights: Vec<f64>,
    positive_mass: Vec<f64>,
    /// Training presentations so far; indexes the training noise stream.
    samples_seen: u64,
}

impl Network {
    pub fn new(config: ColaNetConfig) -> Result<Self> {
        config.validate()?;
        let n = config.neurons();
        let mut rng = stream(config.seed, Purpose::WeightInit, 0);
        let mut weights = vec![0.0; n * PIXELS];
        // drawn neuron by neuron so the values do not depend on the layout
        for k in 0..n {
            for p in 0..PIXELS {
                weights[p * n + k] = if config.init_max > 0.0 {
                    rng.gen_range(0.0..config.init_max)
                } else {
                    0.0
                };
            }
        }
        Ok(Self::from_parts(config, weights, 0))
    }

    fn from_parts(config: ColaNetConfig, weights: Vec<f64>, samples_seen: u64) -> Self {
        let mut net = Network {
            positive_mass: vec![0.0; config.neurons()],
            config,
            weights,
            samples_seen,
        };
        for k in 0..net.neurons() {
            net.refresh_mass(k);
        }
        net
    }

    pub fn config(&self) -> &ColaNetConfig {
        &self.config
    }

    pub fn neurons(&self) -> usize {
        self.config.neurons()
    }

    pub fn samples_seen(&self) -> u64 {
        self.samples_seen
    }

    fn flat(&self, u: Microcolumn) -> usize {
        u.column * self.config.microcolumns + u.index
    }

    fn unit(&self, k: usize) -> Microcolumn {
        Microcolumn {
            column: k / self.config.microcolumns,
            index: k % self.config.microcolumns,
        }
    }

    /// Weights of one microcolumn in pixel order.
    pub fn receptive_field(&self, u: Microcolumn) -> Vec<f64> {
        let (n, k) = (self.neurons(), self.flat(u));
        (0..PIXELS).map(|p| self.weights[p * n + k]).collect()
    }

    /// Overwrites one receptive field, clamping to the weight bounds.
    pub fn set_receptive_field(&mut self, u: Microcolumn, w: &[f64]) {
        assert_eq!(w.len(), PIXELS);
        let (n, k) = (self.neurons(), self.flat(u));
        for (p, &x) in w.iter().enumerate() {
            self.weights[p * n + k] = x.clamp(self.config.w_min, self.config.w_max);
        }
        self.refresh_mass(k);
    }

    pub fn positive_mass(&self, u: Microcolumn) -> f64 {
        self.positive_mass[self.flat(u)]
    }

    pub fn threshold(&self, u: Microcolumn) -> f64 {
        self.threshold_of(self.flat(u))
    }

    fn threshold_of(&self, k: usize) -> f64 {
        self.config.u_const + self.config.alpha * self.positive_mass[k]
    }

    fn refresh_mass(&mut self, k: usize) {
        let n = self.neurons();
        self.positive_mass[k] = (0..PIXELS).map(|p| self.weights[p * n + k]).filter(|&w| w > 0.0).sum();
    }

    /// Largest absolute weight; 0 for an all-zero network.
    pub fn max_abs_weight(&self) -> f64 {
        self.weights.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    pub(crate) fn weights_pixel_major(&self) -> &[f64] {
        &self.weights
    }

    pub fn encode(&self, img: &GrayImage, rng: &mut crate::rng::Rng) -> SpikeTrain {
        encode(img, self.config.steps_active, self.config.steps_silent, rng)
    }

    /// Runs the neurons in `range` on `train`; `external` is added to every
    /// neuron's drive during the active window. Returns the earliest crossing.
    fn race(&self, train: &SpikeTrain, range: Range<usize>, external: f64) -> Option<(usize, f64)> {
        let n = self.neurons();
        let width = range.len();
        let thresholds: Vec<f64> = range.clone().map(|k| self.threshold_of(k)).collect();
        let mut potential = vec![0.0; width];
        let mut input = vec![0.0; width];
        for t in 0..train.total_steps() {
            input.iter_mut().for_each(|x| *x = 0.0);
            for &p in train.spikes_at(t) {
                let row = &self.weights[usize::from(p) * n + range.start..][..width];
                for (x, w) in input.iter_mut().zip(row) {
                    *x += w;
                }
            }
            let ext = if t < train.steps_active() { external } else { 0.0 };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..width {
                let drive = self.config.input_gain * input[i] + ext;
                let (u, fired) = membrane_update(potential[i], self.config.leak, drive, thresholds[i]);
                potential[i] = u;
                if let Some(frac) = fired {
                    if best.is_none_or(|(_, f)| frac < f) {
                        best = Some((i, frac));
                    }
                }
            }
            // inhibition: the first step with any crossing decides the race
            if let Some((i, frac)) = best {
                return Some((range.start + i, t as f64 + frac));
            }
        }
        None
    }

    /// Inference presentation of an already encoded image.
    pub fn present(&self, train: &SpikeTrain) -> Option<Winner> {
        self.race(train, 0..self.neurons(), 0.0).map(|(k, time)| Winner {
            unit: self.unit(k),
            time,
        })
    }

    /// Replays `train` with the guidance current on `column`; only that
    /// column's microcolumns take part.
    pub fn present_guided(&self, train: &SpikeTrain, column: usize) -> Option<Winner> {
        let m = self.config.microcolumns;
        self.race(train, column * m..(column + 1) * m, self.config.guidance)
            .map(|(k, time)| Winner {
                unit: self.unit(k),
                time,
            })
    }

    fn least_committed(&self, column: usize) -> usize {
        let m = self.config.microcolumns;
        (column * m..(column + 1) * m)
            .min_by(|&a, &b| self.positive_mass[a].total_cmp(&self.positive_mass[b]))
            .expect("microcolumns >= 1")
    }

    fn plastic_update(&mut self, k: usize, counts: &[u16; PIXELS], reward: bool) {
        let n = self.neurons();
        let mut rf = ReceptiveField::new(
            (0..PIXELS).map(|p| self.weights[p * n + k]).collect(),
            self.config.w_min,
            self.config.w_max,
        );
        rf.set_eligibility(counts);
        let cfg = self.config.plasticity();
        if reward {
            snn::potentiate(&mut rf, &cfg, self.config.steps_active);
        } else {
            snn::depress(&mut rf, &cfg, self.config.steps_active);
        }
        for (p, &w) in rf.weights.iter().enumerate() {
            self.weights[p * n + k] = w;
        }
        self.refresh_mass(k);
    }

    /// Trains on one encoded sample.
    pub fn train_spikes(&mut self, train: &SpikeTrain, label: usize) -> Result<TrainOutcome> {
        if label >= self.config.class_count {
            return Err(Error::LabelOutOfRange {
                label,
                classes: self.config.class_count,
            });
        }
        let counts = train.counts();
        let winner = self.present(train);
        if let Some(w) = winner.filter(|w| w.unit.column == label) {
            self.plastic_update(self.flat(w.unit), &counts, true);
            return Ok(TrainOutcome {
                kind: TrainKind::Correct,
                winner,
                depressed: None,
                rewarded: Some(w.unit),
            });
        }
        let depressed = winner.map(|w| {
            self.plastic_update(self.flat(w.unit), &counts, false);
            w.unit
        });
        let (kind, rewarded) = match self.present_guided(train, label) {
            Some(g) => (TrainKind::Guided, Some(self.flat(g.unit))),
            None if self.config.least_committed_fallback => (TrainKind::Fallback, Some(self.least_committed(label))),
            None => (TrainKind::Unrewarded, None),
        };
        if let Some(k) = rewarded {
            self.plastic_update(k, &counts, true);
        }
        Ok(TrainOutcome {
            kind,
            winner,
            depressed,
            rewarded: rewarded.map(|k| self.unit(k)),
        })
    }

    /// Encodes `img` with the next training noise stream and trains on it.
    pub fn train_sample(&mut self, img: &GrayImage, label: usize) -> Result<TrainOutcome> {
        let mut rng = stream(self.config.seed, Purpose::TrainEncoding, self.samples_seen);
        let train = self.encode(img, &mut rng);
        let out = self.train_spikes(&train, label)?;
        self.samples_seen += 1;
        Ok(out)
    }

    /// One online pass over the task's training set, in order.
    pub fn train_task(&mut self, task: &TaskSpec) -> Result<TrainStats> {
        self.train_data(&task.train)
    }

    pub fn train_data(&mut self, data: &TaskData) -> Result<TrainStats> {
        let mut stats = TrainStats::default();
        for (i, (img, label)) in data.iter().enumerate() {
            let o = self.train_sample(&img, label)?;
            stats.record(&o);
            if (i + 1) % 10_000 == 0 {
                log::debug!("trained {} / {} samples: {stats:?}", i + 1, data.len());
            }
        }
        Ok(stats)
    }

    /// Readout of an encoded image. Under global inhibition only the winner
    /// spikes, so the column with the most spikes is the winner's column.
    pub fn predict_spikes(&self, train: &SpikeTrain) -> Prediction {
        match self.present(train) {
            Some(w) => Prediction {
                class: w.unit.column,
                silent: false,
            },
            None => Prediction { class: 0, silent: true },
        }
    }

    pub fn predict(&self, img: &GrayImage, rng: &mut crate::rng::Rng) -> Prediction {
        self.predict_spikes(&self.encode(img, rng))
    }

    /// Evaluation noise for sample `i` of evaluation set `set`. Independent of
    /// the training history, so two checkpoints see identical spike trains.
    pub fn eval_rng(&self, set: u64, i: usize) -> crate::rng::Rng {
        stream(self.config.seed, Purpose::EvalEncoding, (set << 32) | i as u64)
    }

    pub fn evaluate_data(&self, data: &TaskData, set: u64) -> EvalReport {
        let mut report = EvalReport {
            correct: 0,
            total: data.len(),
            silent: 0,
        };
        for (i, (img, label)) in data.iter().enumerate() {
            let p = self.predict(&img, &mut self.eval_rng(set, i));
            report.silent += usize::from(p.silent);
            // no spike is no answer, whatever the label
            report.correct += usize::from(!p.silent && p.class == label);
        }
        report
    }

    pub fn evaluate_task(&self, task: &TaskSpec) -> EvalReport {
        self.evaluate_data(&task.test, task.id as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::LabeledDataset;
    use crate::rng::Rng;
    use rand::SeedableRng;
    use std::sync::Arc;

    fn small(c: usize, m: usize) -> ColaNetConfig {
        ColaNetConfig {
            class_count: c,
            microcolumns: m,
            ..ColaNetConfig::default()
        }
    }

    fn bar(row: usize) -> GrayImage {
        let mut img = GrayImage::zeros();
        for r in row..row + 4 {
            for c in 4..24 {
                img.0[r * 28 + c] = 255;
            }
        }
        img
    }

    /// Blank network with a plain threshold of 1 and unit gain, for
    /// hand-built receptive fields.
    fn plain(c: usize, m: usize) -> ColaNetConfig {
        ColaNetConfig {
            init_max: 0.0,
            alpha: 0.0,
            input_gain: 1.0,
            ..small(c, m)
        }
    }

    fn zero_net(c: usize, m: usize) -> Network {
        Network::new(plain(c, m)).unwrap()
    }

    #[test]
    fn blank_image_has_no_winner() {
        let net = Network::new(small(10, 15)).unwrap();
        let mut rng = Rng::seed_from_u64(0);
        let train = net.encode(&GrayImage::zeros(), &mut rng);
        assert_eq!(net.present(&train), None);
        assert_eq!(net.predict_spikes(&train), Prediction { class: 0, silent: true });
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let mut net = zero_net(3, 2);
        let w = vec![0.5; PIXELS];
        net.set_receptive_field(Microcolumn { column: 2, index: 1 }, &w);
        net.set_receptive_field(Microcolumn { column: 1, index: 1 }, &w);
        net.set_receptive_field(Microcolumn { column: 1, index: 0 }, &w);
        let train = net.encode(&bar(10), &mut Rng::seed_from_u64(1));
        let win = net.present(&train).unwrap();
        assert_eq!(win.unit, Microcolumn { column: 1, index: 0 });
    }

    #[test]
    fn earlier_crossing_in_the_same_step_wins() {
        let mut net = zero_net(2, 1);
        net.set_receptive_field(Microcolumn { column: 0, index: 0 }, &vec![0.5; PIXELS]);
        net.set_receptive_field(Microcolumn { column: 1, index: 0 }, &vec![0.9; PIXELS]);
        let train = net.encode(&bar(10), &mut Rng::seed_from_u64(1));
        assert_eq!(net.present(&train).unwrap().unit.column, 1);
    }

    #[test]
    fn correct_winner_is_only_potentiated() {
        let mut net = zero_net(2, 2);
        net.set_receptive_field(Microcolumn { column: 1, index: 0 }, &vec![0.5; PIXELS]);
        let before = net.clone();
        let train = net.encode(&bar(10), &mut Rng::seed_from_u64(2));
        let o = net.train_spikes(&train, 1).unwrap();
        assert_eq!(o.kind, TrainKind::Correct);
        assert_eq!(o.depressed, None);
        assert_eq!(o.rewarded, Some(Microcolumn { column: 1, index: 0 }));
        let changed: Vec<_> = (0..4).filter(|&k| changed_unit(&before, &net, k)).collect();
        assert_eq!(changed, vec![2]);
    }

    fn changed_unit(a: &Network, b: &Network, k: usize) -> bool {
        let u = a.unit(k);
        a.receptive_field(u) != b.receptive_field(u)
    }

    #[test]
    fn wrong_winner_is_depressed_then_label_rewarded() {
        let mut net = Network::new(ColaNetConfig {
            least_committed_fallback: true,
            ..plain(3, 2)
        })
        .unwrap();
        let wrong = Microcolumn { column: 0, index: 1 };
        net.set_receptive_field(wrong, &vec![0.5; PIXELS]);
        let train = net.encode(&bar(10), &mut Rng::seed_from_u64(3));
        let before = net.clone();
        let o = net.train_spikes(&train, 2).unwrap();
        assert_eq!(o.depressed, Some(wrong));
        assert_eq!(o.rewarded.unwrap().column, 2);
        assert!(net.positive_mass(wrong) < before.positive_mass(wrong));
        // locality: only the label column and the erroneous winner moved
        for k in 0..6 {
            let u = net.unit(k);
            if u != wrong && u.column != 2 {
                assert!(!changed_unit(&before, &net, k), "unit {u:?} changed");
            }
        }
    }

    #[test]
    fn guided_replay_picks_the_first_label_microcolumn() {
        let mut net = zero_net(2, 3);
        net.set_receptive_field(Microcolumn { column: 1, index: 2 }, &vec![0.05; PIXELS]);
        let train = net.encode(&bar(10), &mut Rng::seed_from_u64(4));
        let g = net.present_guided(&train, 1).unwrap();
        assert_eq!(g.unit, Microcolumn { column: 1, index: 2 });
    }

    #[test]
    fn silent_guided_replay_without_fallback_rewards_nothing() {
        let mut net = Network::new(ColaNetConfig {
            guidance: 0.0,
            init_max: 0.0,
            ..small(2, 2)
        })
        .unwrap();
        let before = net.clone();
        let train = net.encode(&bar(10), &mut Rng::seed_from_u64(5));
        let o = net.train_spikes(&train, 1).unwrap();
        assert_eq!(o.kind, TrainKind::Unrewarded);
        assert_eq!(net, before);
    }

    #[test]
    fn fallback_rewards_least_committed() {
        let mut net = Network::new(ColaNetConfig {
            guidance: 0.0,
            init_max: 0.0,
            least_committed_fallback: true,
            ..small(2, 3)
        })
        .unwrap();
        net.set_receptive_field(Microcolumn { column: 1, index: 0 }, &vec![0.001; PIXELS]);
        let train = net.encode(&bar(10), &mut Rng::seed_from_u64(5));
        let o = net.train_spikes(&train, 1).unwrap();
        assert_eq!(o.kind, TrainKind::Fallback);
        assert_eq!(o.rewarded, Some(Microcolumn { column: 1, index: 1 }));
    }

    #[test]
    fn untrained_network_rewards_the_label_column() {
        let mut net = Network::new(ColaNetConfig {
            least_committed_fallback: true,
            ..small(10, 15)
        })
        .unwrap();
        for label in 0..10 {
            let o = net.train_sample(&bar(2 * label), label).unwrap();
            assert_eq!(o.rewarded.unwrap().column, label);
        }
    }

    #[test]
    fn label_out_of_range_is_rejected() {
        let mut net = Network::new(small(10, 2)).unwrap();
        let err = net.train_sample(&bar(3), 10).unwrap_err();
        assert!(matches!(err, Error::LabelOutOfRange { label: 10, classes: 10 }));
    }

    #[test]
    fn repeated_training_converges_on_one_image() {
        let mut net = Network::new(small(10, 15)).unwrap();
        let img = bar(12);
        for _ in 0..20 {
            net.train_sample(&img, 7).unwrap();
        }
        for i in 0..20 {
            let p = net.predict(&img, &mut net.eval_rng(0, i));
            assert_eq!(
                p,
                Prediction {
                    class: 7,
                    silent: false
                }
            );
        }
    }

    #[test]
    fn single_class_training_predicts_that_class() {
        let mut net = Network::new(small(10, 5)).unwrap();
        for i in 0..30 {
            net.train_sample(&bar(i % 20), 4).unwrap();
        }
        for i in 0..20 {
            let p = net.predict(&bar((i * 7) % 24), &mut net.eval_rng(1, i));
            if !p.silent {
                assert_eq!(p.class, 4);
            }
        }
    }

    #[test]
    fn empty_task_leaves_network_unchanged() {
        let mut net = Network::new(small(10, 3)).unwrap();
        let before = net.clone();
        let empty = Arc::new(LabeledDataset::new(vec![], vec![], 10).unwrap());
        let stats = net.train_data(&TaskData::new(empty, None)).unwrap();
        assert_eq!(stats, TrainStats::default());
        assert_eq!(net, before);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let mut net = Network::new(small(10, 3)).unwrap();
        let images: Vec<_> = (0..20).map(bar).collect();
        let labels: Vec<u8> = (0..20).map(|i| (i % 10) as u8).collect();
        let data = TaskData::new(Arc::new(LabeledDataset::new(images, labels, 10).unwrap()), None);
        net.train_data(&data).unwrap();
        assert_eq!(net.evaluate_data(&data, 3), net.evaluate_data(&data, 3));
    }

    #[test]
    fn weights_respect_bounds_after_training() {
        let mut net = Network::new(ColaNetConfig {
            eta_plus: 0.8,
            eta_minus: 0.8,
            ..small(3, 2)
        })
        .unwrap();
        for i in 0..60 {
            net.train_sample(&bar(i % 24), i % 3).unwrap();
        }
        assert!(net.weights.iter().all(|&w| (-1.0..=1.0).contains(&w)));
    }

    #[test]
    fn config_validation() {
        assert!(Network::new(small(0, 3)).is_err());
        assert!(Network::new(small(10, 0)).is_err());
        assert!(Network::new(ColaNetConfig {
            w_min: 0.5,
            ..small(2, 2)
        })
        .is_err());
    }
}
