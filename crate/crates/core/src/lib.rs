//! Row-hammer cross-talk workbench for heavy-hex quantum devices.
//!
//! The pipeline is: pick a hammer centre on a [`topology::CouplingGraph`],
//! describe an experiment with an [`labels::ExperimentLabel`], build its
//! attack circuit with [`factory::build_circuit`], sample it under a
//! [`simulator::NoiseModel`], and analyze the outcome table with
//! [`stats`]. [`workflow`] strings these together over files.

pub mod circuit;
pub mod factory;
pub mod labels;
pub mod simulator;
pub mod stats;
pub mod topology;
pub mod workflow;

pub use circuit::{Circuit, Gate, GateKind};
pub use factory::{build_circuit, campaign, ExperimentSpec};
pub use labels::{format_label, parse_label, Basis, Config, ExperimentLabel};
pub use simulator::{calibrate, simulate, Counts, NoiseMode, NoiseModel};
pub use topology::{
    enumerate_centers, get_nodes, get_nodes_combination, load_device_map, CouplingGraph,
    HammerNeighborhood,
};
