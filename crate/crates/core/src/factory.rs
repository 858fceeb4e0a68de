//! Attack-circuit factory.
//!
//! Every circuit has the same three phases: state preparation, `1 + extra_sets`
//! cycles of the configuration's gate set (each closed by a full-register
//! barrier), and a single measurement of the centre into classical bit 0.

use std::f64::consts::PI;

use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::labels::{Config, ExperimentLabel, LabelError, LabelGate};
use crate::topology::{
    get_nodes, get_nodes_combination, CouplingGraph, HammerNeighborhood, TopologyError,
};

pub const DEFAULT_SHOTS: u64 = 40_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub label: ExperimentLabel,
    pub shots: u64,
    /// Angle for parametric single-qubit gates; π when unset.
    pub angle_override: Option<f64>,
    /// Apply the label's leading '-' as X on the six neighborhood qubits.
    /// Off by default: the flag is parsed and kept but does not change the
    /// circuit.
    pub honor_neighbor_prep: bool,
}

impl ExperimentSpec {
    pub fn new(label: ExperimentLabel) -> Self {
        Self {
            label,
            shots: DEFAULT_SHOTS,
            angle_override: None,
            honor_neighbor_prep: false,
        }
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = shots;
        self
    }

    pub fn angle(&self) -> f64 {
        self.angle_override.unwrap_or(PI)
    }

    pub fn cycles(&self) -> u64 {
        if self.label.is_control() {
            0
        } else {
            1 + u64::from(self.label.extra_sets)
        }
    }

    pub fn validate(&self) -> Result<(), FactoryError> {
        if self.shots == 0 {
            return Err(FactoryError::ZeroShots);
        }
        if let Some(angle) = self.angle_override {
            if !angle.is_finite() {
                return Err(FactoryError::BadAngle(angle));
            }
        }
        self.label.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactoryError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("shots must be at least 1")]
    ZeroShots,
    #[error("angle override {0} is not finite")]
    BadAngle(f64),
}

/// One cycle's worth of hammer gates.
fn gate_set(spec: &ExperimentSpec, hood: &HammerNeighborhood) -> Result<Vec<Gate>, FactoryError> {
    let label = &spec.label;
    let thirty = || -> Result<Vec<Gate>, FactoryError> {
        Ok(get_nodes_combination(hood.top_row, hood.bottom_row)?
            .into_iter()
            .map(|(a, b)| Gate::cx(a, b))
            .collect())
    };
    let gates = match (label.config, label.gate) {
        (Config::Control, _) => Vec::new(),
        (Config::Thirty, _) => thirty()?,
        (Config::Thirty1H, _) => {
            let mut gates: Vec<Gate> = hood.middles().into_iter().map(Gate::h).collect();
            gates.extend(thirty()?);
            gates
        }
        (Config::Thirty2H, _) => {
            let mut gates: Vec<Gate> = hood.row_edges().into_iter().map(Gate::h).collect();
            gates.extend(thirty()?);
            gates
        }
        (Config::Cross4, _) => {
            let [tl, _, tr] = hood.top_row;
            let [bl, _, br] = hood.bottom_row;
            vec![
                Gate::cx(tl, br),
                Gate::cx(br, tl),
                Gate::cx(tr, bl),
                Gate::cx(bl, tr),
            ]
        }
        (Config::Six, LabelGate::Gate(kind)) => {
            let angle = spec.angle();
            let params = vec![angle; kind.param_count()];
            hood.qubits()
                .into_iter()
                .map(|q| Gate::single(kind, q, params.clone()))
                .collect()
        }
        (Config::Six, LabelGate::Precision) => unreachable!("rejected by label validation"),
    };
    Ok(gates)
}

/// Builds the attack circuit for `spec` on `graph`.
pub fn build_circuit(
    spec: &ExperimentSpec,
    graph: &CouplingGraph,
) -> Result<Circuit, FactoryError> {
    spec.validate()?;
    let label = &spec.label;
    let hood = get_nodes(graph, label.center)?;
    let cycle = gate_set(spec, &hood)?;
    let cycles = spec.cycles() as usize;

    let mut circuit = Circuit::new(graph.qubit_count(), 1);
    circuit.ops.reserve(8 + cycles * (cycle.len() + 1));

    if label.target_prep_one {
        circuit.push(Gate::x(label.center));
    }
    if label.neighbor_prep_one && spec.honor_neighbor_prep {
        for q in hood.qubits() {
            circuit.push(Gate::x(q));
        }
    }
    let barrier = Gate::barrier(0..graph.qubit_count());
    for _ in 0..cycles {
        circuit.ops.extend(cycle.iter().cloned());
        circuit.push(barrier.clone());
    }
    circuit.push(Gate::measure(label.center, 0));
    Ok(circuit)
}

#[derive(Debug, Error)]
#[error("{} of {total} experiments failed: {}", failures.len(), summary(failures))]
pub struct CampaignError {
    pub total: usize,
    pub failures: Vec<(String, FactoryError)>,
}

fn summary(failures: &[(String, FactoryError)]) -> String {
    failures
        .iter()
        .map(|(label, err)| format!("[{label}] {err}"))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Builds every spec in order. Duplicates are built twice; any failure
/// is reported together with all other failures.
pub fn campaign(
    specs: &[ExperimentSpec],
    graph: &CouplingGraph,
) -> Result<Vec<(ExperimentLabel, Circuit)>, CampaignError> {
    use rayon::prelude::*;

    let built: Vec<_> = specs
        .par_iter()
        .map(|spec| build_circuit(spec, graph).map(|c| (spec.label, c)))
        .collect();

    let mut ok = Vec::with_capacity(built.len());
    let mut failures = Vec::new();
    for (spec, result) in specs.iter().zip(built) {
        match result {
            Ok(pair) => ok.push(pair),
            Err(e) => failures.push((spec.label.to_string(), e)),
        }
    }
    if failures.is_empty() {
        Ok(ok)
    } else {
        Err(CampaignError {
            total: specs.len(),
            failures,
        })
    }
}
