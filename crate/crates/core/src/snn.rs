//! Neuron dynamics, the adaptive threshold, and the plasticity primitives.
//!
//! Each plastic neuron is a discrete-time leaky integrator:
//!
//! ```text
//! u <- (1 - leak) * u + gain * sum_{i spiking} w_i + external
//! fire when u >= u_const + alpha * sum_{w_i > 0} w_i, then u <- 0
//! ```
//!
//! `external` is a current injected from outside the input pathway (teacher
//! guidance during training). Plasticity is applied once per presentation
//! from presynaptic spike counts (the eligibility trace).

use std::fmt;
use std::str::FromStr;

use crate::dataset::PIXELS;

/// Number of virtual synapses taking part in renormalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VirtualSynapses {
    Finite(u64),
    /// Renormalization disabled.
    Infinite,
}

impl VirtualSynapses {
    pub fn renormalizes(self) -> bool {
        matches!(self, VirtualSynapses::Finite(_))
    }

    /// On-disk encoding; `u64::MAX` stands for infinity.
    pub fn to_raw(self) -> u64 {
        match self {
            VirtualSynapses::Finite(n) => n,
            VirtualSynapses::Infinite => u64::MAX,
        }
    }

    pub fn from_raw(raw: u64) -> Self {
        if raw == u64::MAX {
            VirtualSynapses::Infinite
        } else {
            VirtualSynapses::Finite(raw)
        }
    }
}

impl fmt::Display for VirtualSynapses {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VirtualSynapses::Finite(n) => write!(f, "{n}"),
            VirtualSynapses::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for VirtualSynapses {
    type Err = String;

    /// Accepts `inf`/`none`/`off` or an integer with an optional `k` suffix (`100k`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "inf" | "infinite" | "none" | "off") {
            return Ok(VirtualSynapses::Infinite);
        }
        let (digits, scale) = match t.strip_suffix('k') {
            Some(d) => (d, 1000),
            None => (t.as_str(), 1),
        };
        digits
            .parse::<u64>()
            .ok()
            .and_then(|n| n.checked_mul(scale))
            .map(VirtualSynapses::Finite)
            .ok_or_else(|| format!("invalid virtual synapse count {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasticityConfig {
    pub eta_plus: f64,
    pub eta_minus: f64,
    pub virtual_synapses: VirtualSynapses,
}

impl PlasticityConfig {
    pub fn renormalize(&self) -> bool {
        self.virtual_synapses.renormalizes()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeuronState {
    pub potential: f64,
    pub u_const: f64,
    pub alpha: f64,
    pub leak: f64,
    /// Scale applied to summed synaptic input.
    pub gain: f64,
    pub fired_this_presentation: bool,
}

impl NeuronState {
    pub fn new(u_const: f64, alpha: f64, leak: f64, gain: f64) -> Self {
        NeuronState {
            potential: 0.0,
            u_const,
            alpha,
            leak,
            gain,
            fired_this_presentation: false,
        }
    }

    /// Start-of-presentation reset.
    pub fn reset(&mut self) {
        self.potential = 0.0;
        self.fired_this_presentation = false;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceptiveField {
    pub weights: Vec<f64>,
    pub w_min: f64,
    pub w_max: f64,
    pub eligibility: Vec<f64>,
}

impl ReceptiveField {
    pub fn new(weights: Vec<f64>, w_min: f64, w_max: f64) -> Self {
        assert_eq!(weights.len(), PIXELS, "receptive field must have {PIXELS} weights");
        let weights = weights.into_iter().map(|w| w.clamp(w_min, w_max)).collect();
        ReceptiveField {
            weights,
            w_min,
            w_max,
            eligibility: vec![0.0; PIXELS],
        }
    }

    pub fn positive_mass(&self) -> f64 {
        positive_mass(&self.weights)
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn clear_eligibility(&mut self) {
        self.eligibility.iter_mut().for_each(|e| *e = 0.0);
    }

    pub fn set_eligibility(&mut self, counts: &[u16]) {
        for (e, &c) in self.eligibility.iter_mut().zip(counts) {
            *e = f64::from(c);
        }
    }

    /// Summed weight of the spiking inputs.
    pub fn input_drive(&self, presyn: &[u16]) -> f64 {
        presyn.iter().map(|&i| self.weights[usize::from(i)]).sum()
    }
}

pub fn positive_mass(weights: &[f64]) -> f64 {
    weights.iter().filter(|&&w| w > 0.0).sum()
}

/// `u_const + alpha * sum of positive weights`.
pub fn adaptive_threshold(rf: &ReceptiveField, n: &NeuronState) -> f64 {
    threshold_for_mass(n, rf.positive_mass())
}

pub fn threshold_for_mass(n: &NeuronState, positive_mass: f64) -> f64 {
    n.u_const + n.alpha * positive_mass
}

/// Membrane update shared by every integration path.
///
/// Returns the new potential and, when the neuron fires, the fraction of the
/// step at which the threshold was reached (potential rising linearly from
/// its decayed value). The potential resets to 0 after a spike.
pub fn membrane_update(potential: f64, leak: f64, drive: f64, threshold: f64) -> (f64, Option<f64>) {
    let decayed = (1.0 - leak) * potential;
    let next = decayed + drive;
    if next >= threshold {
        let frac = if drive > 0.0 {
            ((threshold - decayed) / drive).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (0.0, Some(frac))
    } else {
        (next, None)
    }
}

/// One time step with an external current. Returns the in-step firing time
/// fraction if the neuron fired.
pub fn integrate(n: &mut NeuronState, rf: &mut ReceptiveField, presyn: &[u16], external: f64) -> Option<f64> {
    for &i in presyn {
        rf.eligibility[usize::from(i)] += 1.0;
    }
    let drive = n.gain * rf.input_drive(presyn) + external;
    let (u, fired) = membrane_update(n.potential, n.leak, drive, adaptive_threshold(rf, n));
    n.potential = u;
    if fired.is_some() {
        n.fired_this_presentation = true;
    }
    fired
}

/// One time step driven only by the presynaptic spikes `presyn`.
pub fn integrate_step(n: &mut NeuronState, rf: &mut ReceptiveField, presyn: &[u16]) -> bool {
    integrate(n, rf, presyn, 0.0).is_some()
}

/// Outcome of a plasticity call.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WeightDelta {
    /// Net change of the summed weights after clamping.
    pub mass: f64,
    /// Synapses that hit a bound.
    pub clamped: usize,
}

/// Reward-gated potentiation: `w_i += eta_plus * eligibility_i / steps_active`,
/// clamped at `w_max`, followed by renormalization when enabled.
///
/// Returns the mass added by the potentiation step itself.
pub fn potentiate(rf: &mut ReceptiveField, cfg: &PlasticityConfig, steps_active: usize) -> WeightDelta {
    let scale = cfg.eta_plus / steps_active.max(1) as f64;
    let mut delta = WeightDelta::default();
    for (w, &e) in rf.weights.iter_mut().zip(&rf.eligibility) {
        if e == 0.0 {
            continue;
        }
        let target = *w + scale * e;
        let next = target.min(rf.w_max);
        if next < target {
            delta.clamped += 1;
        }
        delta.mass += next - *w;
        *w = next;
    }
    if cfg.renormalize() {
        renormalize(rf, delta.mass, cfg);
    }
    delta
}

/// Anti-Hebbian depression: `w_i -= eta_minus * eligibility_i / steps_active`,
/// clamped at `w_min`.
pub fn depress(rf: &mut ReceptiveField, cfg: &PlasticityConfig, steps_active: usize) -> WeightDelta {
    let scale = cfg.eta_minus / steps_active.max(1) as f64;
    let mut delta = WeightDelta::default();
    for (w, &e) in rf.weights.iter_mut().zip(&rf.eligibility) {
        if e == 0.0 {
            continue;
        }
        let target = *w - scale * e;
        let next = target.max(rf.w_min);
        if next > target {
            delta.clamped += 1;
        }
        delta.mass += next - *w;
        *w = next;
    }
    delta
}

/// Spreads the cost of `added_mass` over the real and virtual synapses:
/// every real synapse loses `added_mass / (784 + ns)` (clamped at `w_min`);
/// the virtual synapses absorb the rest and keep no state.
pub fn renormalize(rf: &mut ReceptiveField, added_mass: f64, cfg: &PlasticityConfig) {
    let VirtualSynapses::Finite(ns) = cfg.virtual_synapses else {
        return;
    };
    let share = added_mass / (PIXELS as f64 + ns as f64);
    if share == 0.0 {
        return;
    }
    for w in rf.weights.iter_mut() {
        *w = (*w - share).clamp(rf.w_min, rf.w_max);
    }
}
