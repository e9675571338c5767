use std::fmt::Write as _;

use num_complex::Complex;

use super::{Circuit, Opcode, SourceLoc};
use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::stabilizer::StabilizerTableau;
use crate::statevector::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Simulability {
    StabilizerSimulable,
    RequiresStatevector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulabilityClass {
    pub value: Simulability,
    /// Locations of the non-Clifford instructions; empty iff simulable.
    pub witnesses: Vec<SourceLoc>,
}

pub fn classify(circuit: &Circuit) -> SimulabilityClass {
    let witnesses: Vec<SourceLoc> = circuit
        .instructions()
        .iter()
        .zip(circuit.source_map())
        .filter(|(ins, _)| !ins.is_clifford())
        .map(|(_, &loc)| loc)
        .collect();
    let value =
        if witnesses.is_empty() { Simulability::StabilizerSimulable } else { Simulability::RequiresStatevector };
    SimulabilityClass { value, witnesses }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    Auto,
    Statevector,
    Stabilizer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Statevector,
    Stabilizer,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Statevector => "statevector",
            EngineKind::Stabilizer => "stabilizer",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub outcome: u8,
    /// Probability of reading 1 just before this measurement.
    pub probability_one: f64,
    pub loc: SourceLoc,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FinalState {
    Amplitudes(Vec<Complex<f64>>),
    Stabilizers(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub engine: EngineKind,
    pub seed: u64,
    pub measurements: Vec<MeasurementRecord>,
    pub final_state: FinalState,
}

impl RunRecord {
    pub fn outcomes(&self) -> Vec<u8> {
        self.measurements.iter().map(|m| m.outcome).collect()
    }

    /// `key=value` lines.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "engine={}", self.engine.name());
        let _ = writeln!(out, "seed={}", self.seed);
        let outcomes: String = self.outcomes().iter().map(|o| char::from(b'0' + o)).collect();
        let _ = writeln!(out, "outcomes={outcomes}");
        for (k, m) in self.measurements.iter().enumerate() {
            let _ = writeln!(
                out,
                "measure.{k}=qubit {} line {} outcome {} p1 {:.10}",
                m.qubit, m.loc.line, m.outcome, m.probability_one
            );
        }
        match &self.final_state {
            FinalState::Amplitudes(amps) => {
                let width = amps.len().trailing_zeros() as usize;
                for (i, a) in amps.iter().enumerate() {
                    if a.norm_sqr() > 1e-24 {
                        let _ = writeln!(out, "amp.{i:0width$b}={:.10}{:+.10}i", clean(a.re), clean(a.im));
                    }
                }
            }
            FinalState::Stabilizers(rows) => {
                for (i, r) in rows.iter().enumerate() {
                    let _ = writeln!(out, "stabilizer.{i}={r}");
                }
            }
        }
        out
    }
}

fn clean(v: f64) -> f64 {
    if v.abs() < 5e-11 {
        0.0
    } else {
        v
    }
}

/// Executes `circuit` with measurement randomness drawn from `seed`.
pub fn run(circuit: &Circuit, engine: EngineChoice, seed: u64) -> Result<RunRecord> {
    let class = classify(circuit);
    let engine = match engine {
        EngineChoice::Statevector => EngineKind::Statevector,
        EngineChoice::Stabilizer => {
            if class.value != Simulability::StabilizerSimulable {
                return Err(Error::NonCliffordGate {
                    what: format!("{} non-Clifford instruction(s)", class.witnesses.len()),
                    witnesses: class.witnesses,
                });
            }
            EngineKind::Stabilizer
        }
        EngineChoice::Auto => match class.value {
            Simulability::StabilizerSimulable => EngineKind::Stabilizer,
            Simulability::RequiresStatevector => EngineKind::Statevector,
        },
    };
    let mut rng = seeded(seed);
    let mut measurements = Vec::new();
    let steps = circuit.instructions().iter().zip(circuit.source_map());
    let final_state = match engine {
        EngineKind::Statevector => {
            let mut state = StateVector::<f64>::zero(circuit.num_qubits())?;
            for (ins, &loc) in steps {
                match ins.opcode {
                    Opcode::Measure => {
                        let q = ins.qubits[0];
                        let probability_one = state.probability_one(q)?;
                        let m = state.measure(q, &mut rng)?;
                        measurements.push(MeasurementRecord { qubit: q, outcome: m.outcome, probability_one, loc });
                        state = m.collapsed;
                    }
                    Opcode::Gate(_) => state.apply(&ins.to_gate().expect("gate"))?,
                }
            }
            FinalState::Amplitudes(state.amplitudes().to_vec())
        }
        EngineKind::Stabilizer => {
            let mut tableau = StabilizerTableau::init_zero(circuit.num_qubits())?;
            for (ins, &loc) in steps {
                match ins.opcode {
                    Opcode::Measure => {
                        let q = ins.qubits[0];
                        let probability_one = tableau.outcome_probability(q)?;
                        let m = tableau.measure_z(q, &mut rng)?;
                        measurements.push(MeasurementRecord { qubit: q, outcome: m.outcome, probability_one, loc });
                    }
                    Opcode::Gate(_) => tableau.apply_gate(&ins.to_gate().expect("gate")).map_err(|e| match e {
                        Error::NonCliffordGate { what, .. } => Error::NonCliffordGate { what, witnesses: vec![loc] },
                        other => other,
                    })?,
                }
            }
            FinalState::Stabilizers(tableau.stabilizer_strings())
        }
    };
    Ok(RunRecord { engine, seed, measurements, final_state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse;

    const BELL: &str = "qubits 2\nh 0\ncnot 0 1\nmeasure 0\nmeasure 1\n";

    #[test]
    fn classify_examples() {
        let c = parse("qubits 2\nh 0\ncnot 0 1\ns 1\nmeasure 0").unwrap();
        assert_eq!(classify(&c).value, Simulability::StabilizerSimulable);
        assert!(classify(&c).witnesses.is_empty());

        let c = parse("qubits 1\nh 0\nt 0\n").unwrap();
        let class = classify(&c);
        assert_eq!(class.value, Simulability::RequiresStatevector);
        assert_eq!(class.witnesses, vec![SourceLoc { line: 3, column: 1 }]);

        let c = parse("qubits 1\nrz 0 pi/2").unwrap();
        assert_eq!(classify(&c).value, Simulability::StabilizerSimulable);
    }

    #[test]
    fn run_is_seed_deterministic() {
        let c = parse(BELL).unwrap();
        for engine in [EngineChoice::Auto, EngineChoice::Statevector, EngineChoice::Stabilizer] {
            let a = run(&c, engine, 7).unwrap();
            let b = run(&c, engine, 7).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.measurements[0].outcome, a.measurements[1].outcome);
        }
        assert_eq!(run(&c, EngineChoice::Auto, 0).unwrap().engine, EngineKind::Stabilizer);
    }

    #[test]
    fn cross_engine_first_measurement_probability() {
        let c = parse(BELL).unwrap();
        let sv = run(&c, EngineChoice::Statevector, 1).unwrap();
        let st = run(&c, EngineChoice::Stabilizer, 1).unwrap();
        assert_eq!(st.measurements[0].probability_one, 0.5);
        assert!((sv.measurements[0].probability_one - 0.5).abs() < 1e-12);
    }

    #[test]
    fn stabilizer_rejects_t_with_witness() {
        let c = parse("qubits 1\nh 0\n\nt 0\nmeasure 0").unwrap();
        match run(&c, EngineChoice::Stabilizer, 0).unwrap_err() {
            Error::NonCliffordGate { witnesses, .. } => assert_eq!(witnesses, vec![SourceLoc { line: 4, column: 1 }]),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(run(&c, EngineChoice::Auto, 0).unwrap().engine, EngineKind::Statevector);
    }

    #[test]
    fn render_lists_state() {
        let c = parse("qubits 2\nh 0\ncnot 0 1").unwrap();
        let text = run(&c, EngineChoice::Stabilizer, 0).unwrap().render();
        assert!(text.contains("stabilizer.0=+XX"));
        let text = run(&c, EngineChoice::Statevector, 0).unwrap().render();
        assert!(text.contains("amp.00=0.7071067812+0.0000000000i"));
        assert!(text.contains("amp.11="));
        assert!(!text.contains("amp.01="));
    }

    #[test]
    fn statevector_size_limit() {
        let c = parse("qubits 13\nt 0").unwrap();
        assert!(matches!(run(&c, EngineChoice::Auto, 0), Err(Error::Size { .. })));
        let c = parse("qubits 40\nh 39\ncnot 39 0\nmeasure 0").unwrap();
        assert!(run(&c, EngineChoice::Auto, 0).is_ok());
    }
}
