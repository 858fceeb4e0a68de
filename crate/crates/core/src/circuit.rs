//! Gate-list circuit IR, gate unitaries and QASM 2 emission.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::{self, Write as _};

use num_complex::Complex64;
use thiserror::Error;

use crate::topology::Qubit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    P,
    Rz,
    Rx,
    Ry,
    Sx,
    Sxdg,
    Y,
    U,
    H,
    X,
    Cx,
    Barrier,
    Measure,
}

impl GateKind {
    pub const SINGLE_QUBIT: [GateKind; 10] = [
        GateKind::P,
        GateKind::Rz,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Sx,
        GateKind::Sxdg,
        GateKind::Y,
        GateKind::U,
        GateKind::H,
        GateKind::X,
    ];

    /// Lower-case QASM mnemonic.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::P => "p",
            GateKind::Rz => "rz",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Sx => "sx",
            GateKind::Sxdg => "sxdg",
            GateKind::Y => "y",
            GateKind::U => "u",
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Cx => "cx",
            GateKind::Barrier => "barrier",
            GateKind::Measure => "measure",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "p" => GateKind::P,
            "rz" => GateKind::Rz,
            "rx" => GateKind::Rx,
            "ry" => GateKind::Ry,
            "sx" => GateKind::Sx,
            "sxdg" => GateKind::Sxdg,
            "y" => GateKind::Y,
            "u" => GateKind::U,
            "h" => GateKind::H,
            "x" => GateKind::X,
            "cx" => GateKind::Cx,
            "barrier" => GateKind::Barrier,
            "measure" => GateKind::Measure,
            _ => return None,
        })
    }

    pub fn param_count(self) -> usize {
        match self {
            GateKind::P | GateKind::Rz | GateKind::Rx | GateKind::Ry => 1,
            GateKind::U => 3,
            _ => 0,
        }
    }

    /// Required qubit count; `None` for barriers, which take any number.
    pub fn qubit_count(self) -> Option<usize> {
        match self {
            GateKind::Cx => Some(2),
            GateKind::Barrier => None,
            _ => Some(1),
        }
    }

    pub fn is_single_qubit_unitary(self) -> bool {
        Self::SINGLE_QUBIT.contains(&self)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<Qubit>,
    pub params: Vec<f64>,
    /// Classical target, only for measurements.
    pub clbit: Option<usize>,
}

impl Gate {
    pub fn single(kind: GateKind, qubit: Qubit, params: Vec<f64>) -> Self {
        Self {
            kind,
            qubits: vec![qubit],
            params,
            clbit: None,
        }
    }

    pub fn x(qubit: Qubit) -> Self {
        Self::single(GateKind::X, qubit, Vec::new())
    }

    pub fn h(qubit: Qubit) -> Self {
        Self::single(GateKind::H, qubit, Vec::new())
    }

    pub fn rx(qubit: Qubit, theta: f64) -> Self {
        Self::single(GateKind::Rx, qubit, vec![theta])
    }

    pub fn cx(control: Qubit, target: Qubit) -> Self {
        Self {
            kind: GateKind::Cx,
            qubits: vec![control, target],
            params: Vec::new(),
            clbit: None,
        }
    }

    pub fn barrier(qubits: impl IntoIterator<Item = Qubit>) -> Self {
        Self {
            kind: GateKind::Barrier,
            qubits: qubits.into_iter().collect(),
            params: Vec::new(),
            clbit: None,
        }
    }

    pub fn measure(qubit: Qubit, clbit: usize) -> Self {
        Self {
            kind: GateKind::Measure,
            qubits: vec![qubit],
            params: Vec::new(),
            clbit: Some(clbit),
        }
    }
}

/// Row-major square matrix, 2x2 or 4x4.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, data }
    }

    fn from_2x2(m: [[Complex64; 2]; 2]) -> Self {
        Self {
            dim: 2,
            data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        Matrix { dim: n, data }
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j).conj();
            }
        }
        Matrix { dim: n, data }
    }

    /// Applies a 2x2 matrix to a single-qubit state.
    pub fn apply(&self, state: [Complex64; 2]) -> [Complex64; 2] {
        assert_eq!(self.dim, 2, "apply expects a single-qubit matrix");
        [
            self.get(0, 0) * state[0] + self.get(0, 1) * state[1],
            self.get(1, 0) * state[0] + self.get(1, 1) * state[1],
        ]
    }

    /// Largest entrywise deviation from `other` after removing a global phase.
    pub fn distance_up_to_phase(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        // align phases on the largest entry of `self`
        let (idx, _) = self
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("non-empty matrix");
        let (a, b) = (self.data[idx], other.data[idx]);
        if b.norm() < 1e-15 {
            return f64::INFINITY;
        }
        let phase = (a / b) / (a / b).norm();
        self.data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x - y * phase).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{0} has no unitary")]
pub struct NonUnitaryGate(pub GateKind);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Generic three-angle rotation `U(theta, phi, lambda)`.
fn u3(theta: f64, phi: f64, lambda: f64) -> Matrix {
    let (s, co) = (theta / 2.0).sin_cos();
    Matrix::from_2x2([
        [c(co, 0.0), -Complex64::from_polar(s, lambda)],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(co, phi + lambda),
        ],
    ])
}

/// Standard unitary of a gate. CX uses qubit 0 of the pair as the control
/// and the basis order |control, target>.
pub fn unitary_of(gate: &Gate) -> Result<Matrix, NonUnitaryGate> {
    let param = |i: usize| gate.params.get(i).copied().unwrap_or(0.0);
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    Ok(match gate.kind {
        GateKind::P => {
            Matrix::from_2x2([[one, zero], [zero, Complex64::from_polar(1.0, param(0))]])
        }
        GateKind::Rz => {
            let half = param(0) / 2.0;
            Matrix::from_2x2([
                [Complex64::from_polar(1.0, -half), zero],
                [zero, Complex64::from_polar(1.0, half)],
            ])
        }
        GateKind::Rx => {
            let (s, co) = (param(0) / 2.0).sin_cos();
            Matrix::from_2x2([[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]])
        }
        GateKind::Ry => {
            let (s, co) = (param(0) / 2.0).sin_cos();
            Matrix::from_2x2([[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]])
        }
        GateKind::Sx => {
            Matrix::from_2x2([[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]])
        }
        GateKind::Sxdg => {
            Matrix::from_2x2([[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]])
        }
        GateKind::Y => Matrix::from_2x2([[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]]),
        GateKind::U => u3(param(0), param(1), param(2)),
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            Matrix::from_2x2([[h, h], [h, -h]])
        }
        GateKind::X => Matrix::from_2x2([[zero, one], [one, zero]]),
        GateKind::Cx => {
            let mut m = Matrix::identity(4);
            m.data[2 * 4 + 2] = zero;
            m.data[3 * 4 + 3] = zero;
            m.data[2 * 4 + 3] = one;
            m.data[3 * 4 + 2] = one;
            m
        }
        kind @ (GateKind::Barrier | GateKind::Measure) => return Err(NonUnitaryGate(kind)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    ParamArity { expected: usize, found: usize },
    QubitArity { expected: usize, found: usize },
    DuplicateOperands,
    QubitOutOfRange(Qubit),
    MissingClbit,
    UnexpectedClbit,
    ClbitOutOfRange(usize),
    NonFiniteParam,
}

/// First invariant violation found in a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("op {op_index} ({kind_name}): {detail}")]
pub struct Violation {
    pub op_index: usize,
    pub kind_name: &'static str,
    pub violation: ViolationKind,
    detail: String,
}

impl Violation {
    fn new(op_index: usize, gate: GateKind, violation: ViolationKind) -> Self {
        let detail = match &violation {
            ViolationKind::ParamArity { expected, found } => {
                format!("arity error: expected {expected} params, found {found}")
            }
            ViolationKind::QubitArity { expected, found } => {
                format!("arity error: expected {expected} qubits, found {found}")
            }
            ViolationKind::DuplicateOperands => format!("duplicate operands at op {op_index}"),
            ViolationKind::QubitOutOfRange(q) => format!("qubit {q} outside register"),
            ViolationKind::MissingClbit => "measure without classical target".to_string(),
            ViolationKind::UnexpectedClbit => "classical target on a non-measure op".to_string(),
            ViolationKind::ClbitOutOfRange(b) => format!("classical bit {b} outside register"),
            ViolationKind::NonFiniteParam => "non-finite angle".to_string(),
        };
        Self {
            op_index,
            kind_name: gate.name(),
            violation,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub num_clbits: usize,
    pub ops: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Self {
            num_qubits,
            num_clbits,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.ops.push(gate);
        self
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.ops.iter().filter(|g| g.kind == kind).count()
    }

    /// Checks every gate and register invariant, reporting the first failure.
    pub fn validate(&self) -> Result<(), Violation> {
        for (i, gate) in self.ops.iter().enumerate() {
            let fail = |v| Err(Violation::new(i, gate.kind, v));
            let expected_params = gate.kind.param_count();
            if gate.params.len() != expected_params {
                return fail(ViolationKind::ParamArity {
                    expected: expected_params,
                    found: gate.params.len(),
                });
            }
            if gate.params.iter().any(|p| !p.is_finite()) {
                return fail(ViolationKind::NonFiniteParam);
            }
            if let Some(expected) = gate.kind.qubit_count() {
                if gate.qubits.len() != expected {
                    return fail(ViolationKind::QubitArity {
                        expected,
                        found: gate.qubits.len(),
                    });
                }
            }
            if let Some(&q) = gate.qubits.iter().find(|&&q| q >= self.num_qubits) {
                return fail(ViolationKind::QubitOutOfRange(q));
            }
            let mut seen = gate.qubits.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != gate.qubits.len() {
                return fail(ViolationKind::DuplicateOperands);
            }
            match (gate.kind, gate.clbit) {
                (GateKind::Measure, None) => return fail(ViolationKind::MissingClbit),
                (GateKind::Measure, Some(b)) if b >= self.num_clbits => {
                    return fail(ViolationKind::ClbitOutOfRange(b))
                }
                (GateKind::Measure, Some(_)) | (_, None) => {}
                (_, Some(_)) => return fail(ViolationKind::UnexpectedClbit),
            }
        }
        Ok(())
    }

    /// QASM 2 text. Angles use Rust's shortest round-trip float formatting.
    pub fn emit_qasm(&self) -> String {
        let mut out = String::with_capacity(64 + self.ops.len() * 24);
        out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.num_qubits);
        let _ = writeln!(out, "creg c[{}];", self.num_clbits);
        for gate in &self.ops {
            write_statement(&mut out, gate);
        }
        out
    }
}

fn write_statement(out: &mut String, gate: &Gate) {
    out.push_str(gate.kind.name());
    if !gate.params.is_empty() {
        out.push('(');
        for (i, p) in gate.params.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{p:?}");
        }
        out.push(')');
    }
    for (i, q) in gate.qubits.iter().enumerate() {
        out.push(if i == 0 { ' ' } else { ',' });
        let _ = write!(out, "q[{q}]");
    }
    if let Some(b) = gate.clbit {
        let _ = write!(out, " -> c[{b}]");
    }
    out.push_str(";\n");
}
