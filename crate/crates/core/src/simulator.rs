//! Spectator cross-talk simulation of the measured centre qubit.
//!
//! Built circuits never entangle the centre with anything, so the centre is
//! simulated on its own: gates acting on it are applied exactly, and every
//! gate acting near it (a spectator event) kicks it through the noise
//! channel. Readout assignment errors are applied last.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_complex::Complex64;
use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::circuit::{unitary_of, Circuit, Gate, GateKind};
use crate::factory::{build_circuit, ExperimentSpec, FactoryError};
use crate::labels::ExperimentLabel;
use crate::topology::{CouplingGraph, Qubit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseMode {
    /// Each event rotates the centre by `RX(theta_ct * weight)`.
    CoherentRx,
    /// Each event flips the centre with probability `p_ct * weight`.
    StochasticX,
}

impl NoiseMode {
    pub fn name(self) -> &'static str {
        match self {
            NoiseMode::CoherentRx => "coherent_rx",
            NoiseMode::StochasticX => "stochastic_x",
        }
    }
}

impl FromStr for NoiseMode {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coherent_rx" => Ok(NoiseMode::CoherentRx),
            "stochastic_x" => Ok(NoiseMode::StochasticX),
            other => Err(SimError::NoiseFile {
                line: 0,
                reason: format!("unknown mode `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub mode: NoiseMode,
    pub theta_ct: f64,
    pub p_ct: f64,
    /// P(read 1 | state 0).
    pub readout_eps0: f64,
    /// P(read 0 | state 1).
    pub readout_eps1: f64,
    /// Event weight for gates whose nearest operand is two hops from the centre.
    pub w2: f64,
    pub seed: Option<u64>,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            mode: NoiseMode::CoherentRx,
            theta_ct: 0.0,
            p_ct: 0.0,
            readout_eps0: 0.0,
            readout_eps1: 0.0,
            w2: 0.0,
            seed: None,
        }
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn coherent(theta_ct: f64) -> Self {
        Self {
            theta_ct,
            ..Self::default()
        }
    }

    pub fn stochastic(p_ct: f64) -> Self {
        Self {
            mode: NoiseMode::StochasticX,
            p_ct,
            ..Self::default()
        }
    }

    pub fn with_readout(mut self, eps0: f64, eps1: f64) -> Self {
        self.readout_eps0 = eps0;
        self.readout_eps1 = eps1;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let probability = |name: &'static str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(SimError::InvalidNoise(format!(
                    "{name} = {v} is not a probability"
                )))
            }
        };
        probability("p_ct", self.p_ct)?;
        probability("readout_eps0", self.readout_eps0)?;
        probability("readout_eps1", self.readout_eps1)?;
        if !self.theta_ct.is_finite() {
            return Err(SimError::InvalidNoise("theta_ct must be finite".into()));
        }
        if !(self.w2.is_finite() && self.w2 >= 0.0) {
            return Err(SimError::InvalidNoise(
                "w2 must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Parses the `key = value` noise file. Missing keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self, SimError> {
        let mut model = Self::default();
        let mut seen = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |reason: String| SimError::NoiseFile { line, reason };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.insert(key.to_string(), line).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
            let number = || {
                value
                    .parse::<f64>()
                    .map_err(|_| err(format!("`{key}` expects a number, got `{value}`")))
            };
            match key {
                "mode" => {
                    model.mode = value
                        .parse()
                        .map_err(|_| err(format!("unknown mode `{value}`")))?
                }
                "theta_ct" => model.theta_ct = number()?,
                "p_ct" => model.p_ct = number()?,
                "readout_eps0" => model.readout_eps0 = number()?,
                "readout_eps1" => model.readout_eps1 = number()?,
                "w2" => model.w2 = number()?,
                "seed" => {
                    model.seed = Some(value.parse().map_err(|_| {
                        err(format!("`seed` expects an unsigned integer, got `{value}`"))
                    })?)
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        model.validate()?;
        Ok(model)
    }
}

impl fmt::Display for NoiseModel {
    /// Writes the noise file format; floats round-trip exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode = {}", self.mode.name())?;
        writeln!(f, "theta_ct = {:?}", self.theta_ct)?;
        writeln!(f, "p_ct = {:?}", self.p_ct)?;
        writeln!(f, "readout_eps0 = {:?}", self.readout_eps0)?;
        writeln!(f, "readout_eps1 = {:?}", self.readout_eps1)?;
        writeln!(f, "w2 = {:?}", self.w2)?;
        if let Some(seed) = self.seed {
            writeln!(f, "seed = {seed}")?;
        }
        Ok(())
    }
}

/// Shot histogram of the single measured bit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Counts {
    pub shots: u64,
    pub n0: u64,
    pub n1: u64,
}

impl Counts {
    pub fn new(n0: u64, n1: u64) -> Self {
        Self {
            shots: n0 + n1,
            n0,
            n1,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.n0.checked_add(self.n1) == Some(self.shots)
    }

    pub fn fraction_one(&self) -> f64 {
        self.n1 as f64 / self.shots as f64
    }
}

impl Add for Counts {
    type Output = Counts;

    fn add(self, rhs: Counts) -> Counts {
        Counts::new(self.n0 + rhs.n0, self.n1 + rhs.n1)
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        *self = *self + rhs;
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("circuit has no measurement")]
    MissingMeasure,
    #[error("circuit measures {0} times, expected exactly once")]
    MultipleMeasures(usize),
    #[error("op {0} follows the measurement")]
    OpAfterMeasure(usize),
    #[error("op {index} ({kind}) acts on the centre in a way the reduced model cannot represent")]
    UnsupportedCentreOp { index: usize, kind: GateKind },
    #[error("shots must be at least 1")]
    ZeroShots,
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),
    #[error("noise file line {line}: {reason}")]
    NoiseFile { line: usize, reason: String },
    #[error("target rate {target} is unreachable (reachable range [{low}, {high}])")]
    Unreachable { target: f64, low: f64, high: f64 },
    #[error("centre does not end in a basis state without cross-talk (P(1) = {0})")]
    NotABasisState(f64),
    #[error("circuit has no spectator events to calibrate against")]
    NoSpectatorEvents,
    #[error(transparent)]
    Factory(#[from] FactoryError),
}

/// Cross-talk weight of one op relative to the centre: 1 if an operand is
/// adjacent, `w2` if the nearest operand is two hops away, 0 otherwise.
/// Barriers, measurements and ops on the centre itself carry no weight.
fn event_weight(gate: &Gate, graph: &CouplingGraph, center: Qubit, w2: f64) -> f64 {
    if matches!(gate.kind, GateKind::Barrier | GateKind::Measure) || gate.qubits.contains(&center) {
        return 0.0;
    }
    let near = graph.neighbors(center);
    if gate.qubits.iter().any(|q| near.contains(q)) {
        return 1.0;
    }
    if w2 > 0.0 {
        let second = gate
            .qubits
            .iter()
            .any(|&q| graph.neighbors(q).iter().any(|n| near.contains(n)));
        if second {
            return w2;
        }
    }
    0.0
}

/// Number of gates with an operand adjacent to, but not acting on, `center`.
pub fn spectator_events(circuit: &Circuit, graph: &CouplingGraph, center: Qubit) -> u64 {
    circuit
        .ops
        .iter()
        .filter(|g| event_weight(g, graph, center, 0.0) > 0.0)
        .count() as u64
}

/// Weighted event total including distance-2 ops at weight `w2`.
pub fn spectator_load(circuit: &Circuit, graph: &CouplingGraph, center: Qubit, w2: f64) -> f64 {
    circuit
        .ops
        .iter()
        .map(|g| event_weight(g, graph, center, w2))
        .sum()
}

/// The measured qubit, after checking there is exactly one final measurement.
pub fn measured_qubit(circuit: &Circuit) -> Result<Qubit, SimError> {
    let measures: Vec<usize> = circuit
        .ops
        .iter()
        .enumerate()
        .filter(|(_, g)| g.kind == GateKind::Measure)
        .map(|(i, _)| i)
        .collect();
    let &[index] = measures.as_slice() else {
        return Err(if measures.is_empty() {
            SimError::MissingMeasure
        } else {
            SimError::MultipleMeasures(measures.len())
        });
    };
    if let Some(after) =
        (index + 1..circuit.ops.len()).find(|&i| circuit.ops[i].kind != GateKind::Barrier)
    {
        return Err(SimError::OpAfterMeasure(after));
    }
    Ok(circuit.ops[index].qubits[0])
}

/// Coherent-mode centre state just before measurement.
fn coherent_state(
    circuit: &Circuit,
    graph: &CouplingGraph,
    noise: &NoiseModel,
    center: Qubit,
) -> Result<[Complex64; 2], SimError> {
    let mut state = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    for (index, gate) in circuit.ops.iter().enumerate() {
        if gate.kind == GateKind::Measure {
            break;
        }
        if gate.qubits.contains(&center) {
            if gate.kind == GateKind::Barrier {
                continue;
            }
            if !gate.kind.is_single_qubit_unitary() {
                return Err(SimError::UnsupportedCentreOp {
                    index,
                    kind: gate.kind,
                });
            }
            let u = unitary_of(gate).expect("single-qubit kinds are unitary");
            state = u.apply(state);
            continue;
        }
        let weight = event_weight(gate, graph, center, noise.w2);
        if weight > 0.0 {
            let kick =
                unitary_of(&Gate::rx(center, noise.theta_ct * weight)).expect("rx is unitary");
            state = kick.apply(state);
        }
    }
    Ok(state)
}

/// Stochastic-mode ingredients: deterministic starting bit and event counts
/// grouped by weight.
fn stochastic_profile(
    circuit: &Circuit,
    graph: &CouplingGraph,
    noise: &NoiseModel,
    center: Qubit,
) -> Result<(bool, Vec<(u64, f64)>), SimError> {
    let mut bit = false;
    let mut classes: Vec<(u64, f64)> = Vec::new();
    for (index, gate) in circuit.ops.iter().enumerate() {
        if gate.kind == GateKind::Measure {
            break;
        }
        if gate.qubits.contains(&center) {
            match gate.kind {
                GateKind::Barrier | GateKind::P | GateKind::Rz => {}
                GateKind::X | GateKind::Y => bit = !bit,
                kind => return Err(SimError::UnsupportedCentreOp { index, kind }),
            }
            continue;
        }
        let weight = event_weight(gate, graph, center, noise.w2);
        if weight > 0.0 {
            match classes.iter_mut().find(|(_, w)| *w == weight) {
                Some((n, _)) => *n += 1,
                None => classes.push((1, weight)),
            }
        }
    }
    Ok((bit, classes))
}

/// Exact probability of reading 1, readout errors included.
pub fn readout_one_probability(
    circuit: &Circuit,
    graph: &CouplingGraph,
    noise: &NoiseModel,
) -> Result<f64, SimError> {
    noise.validate()?;
    let center = measured_qubit(circuit)?;
    let p1 = match noise.mode {
        NoiseMode::CoherentRx => coherent_state(circuit, graph, noise, center)?[1]
            .norm_sqr()
            .clamp(0.0, 1.0),
        NoiseMode::StochasticX => {
            let (bit, classes) = stochastic_profile(circuit, graph, noise, center)?;
            let parity_bias: f64 = classes
                .iter()
                .map(|&(n, w)| (1.0 - 2.0 * (noise.p_ct * w).min(1.0)).powi(n as i32))
                .product();
            let flip = (1.0 - parity_bias) / 2.0;
            if bit {
                1.0 - flip
            } else {
                flip
            }
        }
    };
    Ok(p1 * (1.0 - noise.readout_eps1) + (1.0 - p1) * noise.readout_eps0)
}

/// Samples `shots` measurements of the circuit's single measured qubit.
pub fn simulate(
    circuit: &Circuit,
    graph: &CouplingGraph,
    noise: &NoiseModel,
    seed: u64,
    shots: u64,
) -> Result<Counts, SimError> {
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    noise.validate()?;
    let center = measured_qubit(circuit)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let n1 = match noise.mode {
        NoiseMode::CoherentRx => {
            let p1 = readout_one_probability(circuit, graph, noise)?;
            let draw = Bernoulli::new(p1.clamp(0.0, 1.0)).expect("probability in range");
            (0..shots).filter(|_| draw.sample(&mut rng)).count() as u64
        }
        NoiseMode::StochasticX => {
            let (start, classes) = stochastic_profile(circuit, graph, noise, center)?;
            let flips: Vec<Binomial> = classes
                .iter()
                .map(|&(n, w)| {
                    Binomial::new(n, (noise.p_ct * w).min(1.0)).expect("probability in range")
                })
                .collect();
            let read_flip0 = Bernoulli::new(noise.readout_eps0).expect("validated");
            let read_flip1 = Bernoulli::new(noise.readout_eps1).expect("validated");
            let mut ones = 0;
            for _ in 0..shots {
                let flipped = flips.iter().map(|b| b.sample(&mut rng)).sum::<u64>() % 2 == 1;
                let state = start ^ flipped;
                let read = if state {
                    !read_flip1.sample(&mut rng)
                } else {
                    read_flip0.sample(&mut rng)
                };
                ones += u64::from(read);
            }
            ones
        }
    };
    Ok(Counts::new(shots - n1, n1))
}

/// Per-experiment seed from a master seed and the canonical label, so that
/// results do not depend on execution order.
pub fn derive_seed(master: u64, label: &ExperimentLabel) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(label.to_string().as_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("sha256 digest is 32 bytes"))
}

/// Sets the template's cross-talk strength so the expected flip rate of
/// `spec` equals `target_rate`. Readout errors in the template are kept and
/// corrected for.
pub fn calibrate(
    target_rate: f64,
    spec: &ExperimentSpec,
    graph: &CouplingGraph,
    template: &NoiseModel,
) -> Result<NoiseModel, SimError> {
    let circuit = build_circuit(spec, graph)?;
    calibrate_circuit(target_rate, &circuit, graph, template)
}

/// Circuit-level calibration. The centre must end in a basis state when the
/// cross-talk strength is zero; that state is the reference for "flipped".
pub fn calibrate_circuit(
    target_rate: f64,
    circuit: &Circuit,
    graph: &CouplingGraph,
    template: &NoiseModel,
) -> Result<NoiseModel, SimError> {
    template.validate()?;
    let center = measured_qubit(circuit)?;
    let load = spectator_load(circuit, graph, center, template.w2);
    if load <= 0.0 {
        return Err(SimError::NoSpectatorEvents);
    }
    let quiet = NoiseModel {
        theta_ct: 0.0,
        p_ct: 0.0,
        readout_eps0: 0.0,
        readout_eps1: 0.0,
        ..*template
    };
    let reference = readout_one_probability(circuit, graph, &quiet)?;
    let prepared_one = match reference {
        r if r < 1e-12 => false,
        r if r > 1.0 - 1e-12 => true,
        _ => return Err(SimError::NotABasisState(reference)),
    };

    let (eps0, eps1) = (template.readout_eps0, template.readout_eps1);
    // flip rate = floor + q * (1 - eps0 - eps1), q = state flip probability
    let floor = if prepared_one { eps1 } else { eps0 };
    let contrast = 1.0 - eps0 - eps1;
    let q_max = match template.mode {
        NoiseMode::CoherentRx => 1.0,
        NoiseMode::StochasticX => 0.5,
    };
    let unreachable = SimError::Unreachable {
        target: target_rate,
        low: floor,
        high: floor + q_max * contrast,
    };
    if !(target_rate > 0.0 && target_rate < 1.0) || contrast <= 0.0 {
        return Err(unreachable);
    }
    let q = (target_rate - floor) / contrast;
    if !(0.0..=q_max).contains(&q) {
        return Err(unreachable);
    }

    let mut model = *template;
    match template.mode {
        NoiseMode::CoherentRx => {
            model.theta_ct = 2.0 * q.sqrt().asin() / load;
        }
        NoiseMode::StochasticX => {
            let (_, classes) = stochastic_profile(circuit, graph, template, center)?;
            model.p_ct = if let [(n, w)] = classes[..] {
                (1.0 - (1.0 - 2.0 * q).powf(1.0 / n as f64)) / 2.0 / w
            } else {
                solve_stochastic(q, &classes)
            };
        }
    }
    model.validate()?;
    Ok(model)
}

/// Bisection for p with `(1 - prod (1 - 2 p w)^n) / 2 = q` on the range
/// where every factor stays in [0, 1], over which the left side is monotone.
fn solve_stochastic(q: f64, classes: &[(u64, f64)]) -> f64 {
    let max_w = classes.iter().map(|&(_, w)| w).fold(0.0, f64::max);
    let flip = |p: f64| {
        let bias: f64 = classes
            .iter()
            .map(|&(n, w)| (1.0 - 2.0 * p * w).powi(n as i32))
            .product();
        (1.0 - bias) / 2.0
    };
    let (mut lo, mut hi) = (0.0, 0.5 / max_w);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if flip(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
