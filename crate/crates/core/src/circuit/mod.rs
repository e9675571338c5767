//! Line-oriented circuit language.
//!
//! ```text
//! # Bell pair
//! qubits 2
//! h 0
//! cnot 0 1
//! rz 1 pi/4      # angle literals: decimals or pi tokens
//! measure 0
//! ```
//!
//! The first non-comment line is the `qubits N` header; every following
//! non-blank line is one instruction `<opcode> <q> [<q2>] [<angle>]`.

mod angle;
mod parse;
mod run;

use std::fmt;

pub use angle::{format_angle, parse_angle};
pub use parse::{parse, ParseError, ParseErrorKind};
pub use run::{
    classify, run, EngineChoice, EngineKind, FinalState, MeasurementRecord, RunRecord, Simulability, SimulabilityClass,
};

use crate::error::{Error, Result};
use crate::stabilizer::{quarter_turns, MAX_TABLEAU_QUBITS};
use crate::statevector::{GateKind, GateOp};

/// 1-based line and column of a token in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceLoc {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Opcode {
    Gate(GateKind),
    Measure,
}

impl Opcode {
    pub fn from_name(name: &str) -> Option<Self> {
        if name.eq_ignore_ascii_case("measure") {
            return Some(Opcode::Measure);
        }
        GateKind::from_name(name).map(Opcode::Gate)
    }

    pub fn name(self) -> &'static str {
        match self {
            Opcode::Gate(k) => k.name(),
            Opcode::Measure => "measure",
        }
    }

    pub fn qubit_arity(self) -> usize {
        match self {
            Opcode::Gate(k) => k.arity(),
            Opcode::Measure => 1,
        }
    }

    pub fn takes_angle(self) -> bool {
        matches!(self, Opcode::Gate(k) if k.takes_angle())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub opcode: Opcode,
    pub qubits: Vec<usize>,
    pub angle: Option<f64>,
}

impl Instruction {
    pub fn gate(kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Self {
        Self { opcode: Opcode::Gate(kind), qubits: qubits.to_vec(), angle }
    }

    pub fn measure(q: usize) -> Self {
        Self { opcode: Opcode::Measure, qubits: vec![q], angle: None }
    }

    /// The engine gate for this instruction; `None` for measurements.
    pub fn to_gate(&self) -> Option<GateOp<f64>> {
        match self.opcode {
            Opcode::Gate(kind) => Some(GateOp::new(kind, &self.qubits, self.angle).expect("validated instruction")),
            Opcode::Measure => None,
        }
    }

    /// Clifford gates, measurements, and rotations by multiples of pi/2.
    pub fn is_clifford(&self) -> bool {
        match self.opcode {
            Opcode::Measure => true,
            Opcode::Gate(GateKind::T | GateKind::Tdg) => false,
            Opcode::Gate(k) if k.takes_angle() => self.angle.and_then(quarter_turns).is_some(),
            Opcode::Gate(_) => true,
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.qubits.len() != self.opcode.qubit_arity() || self.angle.is_some() != self.opcode.takes_angle() {
            return Err(Error::Config(format!("malformed {} instruction", self.opcode.name())));
        }
        for &q in &self.qubits {
            if q >= num_qubits {
                return Err(Error::QubitIndex { index: q, num_qubits });
            }
        }
        if self.qubits.len() == 2 && self.qubits[0] == self.qubits[1] {
            return Err(Error::DuplicateQubit(self.qubits[0]));
        }
        Ok(())
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.opcode.name())?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        if let Some(a) = self.angle {
            write!(f, " {}", format_angle(a))?;
        }
        Ok(())
    }
}

/// Parsed program. Equality ignores `source_map`.
#[derive(Debug, Clone)]
pub struct Circuit {
    num_qubits: usize,
    instructions: Vec<Instruction>,
    source_map: Vec<SourceLoc>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.num_qubits == other.num_qubits && self.instructions == other.instructions
    }
}

impl Circuit {
    /// Builds a circuit programmatically; source locations are those of the
    /// canonical text.
    pub fn new(num_qubits: usize, instructions: Vec<Instruction>) -> Result<Self> {
        if !(1..=MAX_TABLEAU_QUBITS).contains(&num_qubits) {
            return Err(Error::Size { size: num_qubits, min: 1, max: MAX_TABLEAU_QUBITS });
        }
        for ins in &instructions {
            ins.validate(num_qubits)?;
        }
        let source_map = (0..instructions.len()).map(|i| SourceLoc { line: i + 2, column: 1 }).collect();
        Ok(Self { num_qubits, instructions, source_map })
    }

    pub(crate) fn from_parts(num_qubits: usize, instructions: Vec<Instruction>, source_map: Vec<SourceLoc>) -> Self {
        Self { num_qubits, instructions, source_map }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn source_map(&self) -> &[SourceLoc] {
        &self.source_map
    }

    /// Canonical text: LF endings, lowercase opcodes, single spaces, no comments.
    pub fn to_canonical_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.num_qubits);
        for ins in &self.instructions {
            out.push_str(&ins.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_text())
    }
}
