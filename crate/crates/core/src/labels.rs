//! Experiment label grammar.
//!
//! ```text
//! label      := control | experiment
//! control    := "Precision(" ["-"] CENTER ")"
//! experiment := ["-"] GATE "(" ["-"] CENTER "-" EXTRASETS ")" " "* CONFIG
//! CONFIG     := "30" | "301H" | "302H" | "4 cross" | "4cross" | "6"
//! ```
//!
//! The leading `-` marks the six neighborhood qubits as prepared in |1>, the
//! inner `-` marks the centre as prepared in |1>. Gate names are the QASM
//! mnemonics; `√x`, `√x†` and the LaTeX spellings used in published tables
//! are accepted as aliases of `sx` / `sxdg`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::GateKind;
use crate::topology::Qubit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Config {
    Thirty,
    Thirty1H,
    Thirty2H,
    Cross4,
    Six,
    Control,
}

impl Config {
    /// Canonical token; empty for controls, which carry no suffix.
    pub fn token(self) -> &'static str {
        match self {
            Config::Thirty => "30",
            Config::Thirty1H => "301H",
            Config::Thirty2H => "302H",
            Config::Cross4 => "4 cross",
            Config::Six => "6",
            Config::Control => "",
        }
    }

    fn from_token(token: &str) -> Option<Self> {
        Some(match token {
            "30" => Config::Thirty,
            "301H" => Config::Thirty1H,
            "302H" => Config::Thirty2H,
            "4 cross" | "4cross" => Config::Cross4,
            "6" => Config::Six,
            _ => return None,
        })
    }

    pub fn uses_cx(self) -> bool {
        matches!(
            self,
            Config::Thirty | Config::Thirty1H | Config::Thirty2H | Config::Cross4
        )
    }
}

/// Computational basis state of a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Zero,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelGate {
    Precision,
    Gate(GateKind),
}

impl LabelGate {
    pub fn name(self) -> &'static str {
        match self {
            LabelGate::Precision => "Precision",
            LabelGate::Gate(kind) => kind.name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExperimentLabel {
    pub neighbor_prep_one: bool,
    pub gate: LabelGate,
    pub target_prep_one: bool,
    pub center: Qubit,
    pub extra_sets: u32,
    pub config: Config,
}

impl ExperimentLabel {
    pub fn control(center: Qubit) -> Self {
        Self {
            neighbor_prep_one: false,
            gate: LabelGate::Precision,
            target_prep_one: false,
            center,
            extra_sets: 0,
            config: Config::Control,
        }
    }

    pub fn cx(center: Qubit, extra_sets: u32, config: Config) -> Self {
        Self {
            neighbor_prep_one: false,
            gate: LabelGate::Gate(GateKind::Cx),
            target_prep_one: false,
            center,
            extra_sets,
            config,
        }
    }

    pub fn is_control(&self) -> bool {
        self.config == Config::Control
    }

    /// Basis state the centre is prepared in.
    pub fn prepared(&self) -> Basis {
        if self.target_prep_one {
            Basis::One
        } else {
            Basis::Zero
        }
    }

    /// Checks the gate/config pairing rules.
    pub fn validate(&self) -> Result<(), LabelError> {
        let ok = match (self.gate, self.config) {
            (LabelGate::Precision, Config::Control) => {
                !self.neighbor_prep_one && self.extra_sets == 0
            }
            (LabelGate::Precision, _) | (_, Config::Control) => false,
            (LabelGate::Gate(kind), Config::Six) => kind.is_single_qubit_unitary(),
            (LabelGate::Gate(kind), config) => config.uses_cx() && kind == GateKind::Cx,
        };
        if ok {
            Ok(())
        } else {
            Err(LabelError::Mismatch {
                gate: self.gate.name(),
                config: self.config,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax {
        offset: usize,
        expected: &'static str,
    },
    #[error("unknown gate `{name}` at byte {offset}")]
    UnknownGate { offset: usize, name: String },
    #[error("unknown config `{token}` at byte {offset}")]
    UnknownConfig { offset: usize, token: String },
    #[error("gate `{gate}` cannot be used with config {config:?}")]
    Mismatch { gate: &'static str, config: Config },
}

fn gate_from_label_name(name: &str) -> Option<GateKind> {
    match name {
        "√x" | "$\\sqrt{x}$" => Some(GateKind::Sx),
        "√x†" | "$\\sqrt{x}^\\dagger$" => Some(GateKind::Sxdg),
        "cx" => Some(GateKind::Cx),
        other => GateKind::from_name(other).filter(|k| k.is_single_qubit_unitary()),
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, prefix: &str) -> bool {
        if self.rest().starts_with(prefix) {
            self.pos += prefix.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, prefix: &str, expected: &'static str) -> Result<(), LabelError> {
        if self.eat(prefix) {
            Ok(())
        } else {
            Err(self.syntax(expected))
        }
    }

    fn syntax(&self, expected: &'static str) -> LabelError {
        LabelError::Syntax {
            offset: self.pos,
            expected,
        }
    }

    fn number<T: FromStr>(&mut self, expected: &'static str) -> Result<T, LabelError> {
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        let value = self.rest()[..len]
            .parse()
            .map_err(|_| self.syntax(expected))?;
        self.pos += len;
        Ok(value)
    }

    fn skip_spaces(&mut self) {
        let len = self
            .rest()
            .bytes()
            .take_while(|&b| b == b' ' || b == b'\t')
            .count();
        self.pos += len;
    }
}

/// Parses a label as it appears in result tables.
pub fn parse_label(text: &str) -> Result<ExperimentLabel, LabelError> {
    let mut cur = Cursor { text, pos: 0 };
    cur.skip_spaces();

    let label = if cur.eat("Precision(") {
        let target_prep_one = cur.eat("-");
        let center = cur.number("centre qubit id")?;
        cur.expect(")", "`)`")?;
        ExperimentLabel {
            target_prep_one,
            ..ExperimentLabel::control(center)
        }
    } else {
        let neighbor_prep_one = cur.eat("-");
        let gate_start = cur.pos;
        let name_len = cur
            .rest()
            .find('(')
            .ok_or_else(|| cur.syntax("`(` after gate name"))?;
        let name = &cur.rest()[..name_len];
        if name.is_empty() {
            return Err(cur.syntax("gate name"));
        }
        let kind = gate_from_label_name(name).ok_or_else(|| LabelError::UnknownGate {
            offset: gate_start,
            name: name.to_string(),
        })?;
        cur.pos += name_len + 1;

        let target_prep_one = cur.eat("-");
        let center = cur.number("centre qubit id")?;
        cur.expect("-", "`-` before extra-set count")?;
        let extra_sets = cur.number("extra-set count")?;
        cur.expect(")", "`)`")?;
        cur.skip_spaces();

        let config_start = cur.pos;
        let token = cur.rest().trim_end();
        if token.is_empty() {
            return Err(cur.syntax("config token"));
        }
        let config = Config::from_token(token).ok_or_else(|| LabelError::UnknownConfig {
            offset: config_start,
            token: token.to_string(),
        })?;
        cur.pos += token.len();

        ExperimentLabel {
            neighbor_prep_one,
            gate: LabelGate::Gate(kind),
            target_prep_one,
            center,
            extra_sets,
            config,
        }
    };

    cur.skip_spaces();
    if !cur.rest().trim_end().is_empty() {
        return Err(cur.syntax("end of label"));
    }
    label.validate()?;
    Ok(label)
}

/// Canonical text form; `parse_label` inverts it.
pub fn format_label(label: &ExperimentLabel) -> String {
    label.to_string()
}

impl fmt::Display for ExperimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let target = if self.target_prep_one { "-" } else { "" };
        if self.is_control() {
            return write!(f, "Precision({target}{})", self.center);
        }
        let neighbors = if self.neighbor_prep_one { "-" } else { "" };
        write!(
            f,
            "{neighbors}{}({target}{}-{}) {}",
            self.gate.name(),
            self.center,
            self.extra_sets,
            self.config.token()
        )
    }
}

impl FromStr for ExperimentLabel {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_label(s)
    }
}
