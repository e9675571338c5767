//! Teleportation, superdense coding and BB84 drivers.
//!
//! Every run produces a [`ProtocolReport`] that records which engine executed
//! it, whether that execution was classically simulable (stabilizer engine),
//! the protocol metrics, and the classical bits exchanged between the parties.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex;
use rand::Rng;

use crate::circuit::EngineKind;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stabilizer::{CliffordGate, Pauli, StabilizerTableau};
use crate::statevector::{DensityMatrix2x2, GateKind, GateOp, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    pub protocol: &'static str,
    pub engine: EngineKind,
    pub classically_simulable: bool,
    pub metrics: BTreeMap<String, f64>,
    /// Classical bits sent between the parties, in protocol order.
    pub classical_bits: Vec<u8>,
    /// Non-numeric results such as the teleported qubit's stabilizer.
    pub details: BTreeMap<String, String>,
}

impl ProtocolReport {
    fn new(protocol: &'static str, engine: EngineKind) -> Self {
        Self {
            protocol,
            engine,
            classically_simulable: engine == EngineKind::Stabilizer,
            metrics: BTreeMap::new(),
            classical_bits: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).copied()
    }

    /// `key=value` lines; metrics with ten decimals.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "protocol={}", self.protocol);
        let _ = writeln!(out, "engine={}", self.engine.name());
        let _ = writeln!(out, "simulable={}", self.classically_simulable);
        for (k, v) in &self.metrics {
            let _ = writeln!(out, "{k}={v:.10}");
        }
        for (k, v) in &self.details {
            let _ = writeln!(out, "{k}={v}");
        }
        let bits: String = self.classical_bits.iter().map(|b| char::from(b'0' + b)).collect();
        let _ = writeln!(out, "classical_bits={bits}");
        out
    }
}

/// How the Bell-measurement outcomes of teleportation are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Sampled from the Born rule with the supplied rng.
    Sampled,
    /// Forced `(m0, m1)`; every branch has probability 1/4.
    Forced(u8, u8),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatevectorTeleport<T: Scalar> {
    pub report: ProtocolReport,
    pub output: DensityMatrix2x2<T>,
}

/// Teleports a one-qubit state through a `phi_plus` pair on qubits 1-2.
pub fn teleport_statevector<T: Scalar, R: Rng + ?Sized>(
    input: &StateVector<T>,
    rng: &mut R,
) -> Result<StatevectorTeleport<T>> {
    teleport_statevector_branch(input, Branch::Sampled, rng)
}

pub fn teleport_statevector_branch<T: Scalar, R: Rng + ?Sized>(
    input: &StateVector<T>,
    branch: Branch,
    rng: &mut R,
) -> Result<StatevectorTeleport<T>> {
    let psi = input.as_qubit().ok_or(Error::Dimension { left: 1, right: input.num_qubits() })?;
    input.check_normalized()?;
    let zero = [Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero())];
    let mut state = StateVector::product(&[psi, zero, zero])?.with_tolerance(input.tolerance());

    state.apply(&GateOp::single(GateKind::H, 1))?;
    state.apply(&GateOp::cnot(1, 2))?;
    state.apply(&GateOp::cnot(0, 1))?;
    state.apply(&GateOp::single(GateKind::H, 0))?;

    let mut bits = [0u8; 2];
    for (slot, q) in bits.iter_mut().zip([0, 1]) {
        let (outcome, collapsed) = match branch {
            Branch::Sampled => {
                let m = state.measure(q, rng)?;
                (m.outcome, m.collapsed)
            }
            Branch::Forced(m0, m1) => {
                let outcome = if q == 0 { m0 } else { m1 };
                (outcome, state.project(q, outcome)?.1)
            }
        };
        *slot = outcome;
        state = collapsed;
    }
    if bits[1] == 1 {
        state.apply(&GateOp::single(GateKind::X, 2))?;
    }
    if bits[0] == 1 {
        state.apply(&GateOp::single(GateKind::Z, 2))?;
    }

    let output = state.reduced_density(2)?;
    let fidelity = output.fidelity_with(input)?;
    let mut report = ProtocolReport::new("teleport", EngineKind::Statevector);
    report.metrics.insert("fidelity".into(), fidelity.to_f64_lossy());
    report.classical_bits = bits.to_vec();
    Ok(StatevectorTeleport { report, output })
}

/// Teleports raw amplitudes `(a0, a1)`, which must be normalized.
pub fn teleport_amplitudes<R: Rng + ?Sized>(amps: [Complex<f64>; 2], rng: &mut R) -> Result<StatevectorTeleport<f64>> {
    let input = StateVector::from_amplitudes(amps.to_vec())?;
    teleport_statevector(&input, rng)
}

/// A single-qubit input written as gates applied to a named stabilizer
/// state, e.g. `plus`, `-i`, or `t|+>` (T applied to |+>).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitPreparation {
    /// Applied to `|0>` in order.
    pub gates: Vec<GateKind>,
}

impl QubitPreparation {
    /// One of the six single-qubit stabilizer states.
    pub fn named(name: &str) -> Option<Self> {
        use GateKind::*;
        let gates = match name.to_ascii_lowercase().as_str() {
            "0" | "zero" => vec![],
            "1" | "one" => vec![X],
            "+" | "plus" => vec![H],
            "-" | "minus" => vec![X, H],
            "+i" | "i" | "plus_i" | "plus-i" => vec![H, S],
            "-i" | "minus_i" | "minus-i" => vec![H, Sdg],
            _ => return None,
        };
        Some(Self { gates })
    }

    pub fn stabilizer_inputs() -> [(&'static str, Self); 6] {
        ["0", "1", "+", "-", "+i", "-i"].map(|n| (n, Self::named(n).expect("known name")))
    }

    /// `[gate '|']* name ['>']`; gates act right to left as in operator notation.
    pub fn parse(spec: &str) -> Result<Self> {
        let trimmed = spec.trim().trim_end_matches(['>', '\u{27e9}']);
        let mut parts: Vec<&str> = trimmed.split('|').map(str::trim).collect();
        let base = parts.pop().unwrap_or_default();
        let mut prep = Self::named(base).ok_or_else(|| Error::Input(format!("unknown input state `{base}`")))?;
        for gate in parts.iter().rev() {
            let kind = GateKind::from_name(gate)
                .filter(|k| k.arity() == 1 && !k.takes_angle())
                .ok_or_else(|| Error::Input(format!("unsupported preparation gate `{gate}`")))?;
            prep.gates.push(kind);
        }
        Ok(prep)
    }

    pub fn to_statevector<T: Scalar>(&self) -> Result<StateVector<T>> {
        let mut s = StateVector::zero(1)?;
        for &g in &self.gates {
            s.apply(&GateOp::single(g, 0))?;
        }
        Ok(s)
    }

    fn lowered(&self, q: usize) -> Result<Vec<CliffordGate>> {
        let mut out = Vec::new();
        for &g in &self.gates {
            out.extend(CliffordGate::lower(&GateOp::<f64>::single(g, q)).map_err(|e| match e {
                Error::NonCliffordGate { what, witnesses } => Error::NonCliffordGate {
                    what: format!("input preparation uses {what}; not a stabilizer state"),
                    witnesses,
                },
                other => other,
            })?);
        }
        Ok(out)
    }

    /// The signed single-qubit Pauli stabilizing this state (on qubit 0).
    pub fn stabilizer(&self) -> Result<Pauli> {
        let mut t = StabilizerTableau::init_zero(1)?;
        for g in self.lowered(0)? {
            t.apply(g)?;
        }
        Ok(t.stabilizer(0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerTeleport {
    pub report: ProtocolReport,
    pub tableau: StabilizerTableau,
}

/// Teleportation on the stabilizer engine. Only the six stabilizer inputs
/// are accepted; any non-Clifford preparation fails with `NonCliffordGate`.
pub fn teleport_stabilizer<R: Rng + ?Sized>(input: &QubitPreparation, rng: &mut R) -> Result<StabilizerTeleport> {
    teleport_stabilizer_branch(input, Branch::Sampled, rng)
}

pub fn teleport_stabilizer_branch<R: Rng + ?Sized>(
    input: &QubitPreparation,
    branch: Branch,
    rng: &mut R,
) -> Result<StabilizerTeleport> {
    let prep = input.lowered(0)?;
    let expected = input.stabilizer()?;
    let mut t = StabilizerTableau::init_zero(3)?;
    for g in prep {
        t.apply(g)?;
    }
    for g in [CliffordGate::H(1), CliffordGate::Cnot(1, 2), CliffordGate::Cnot(0, 1), CliffordGate::H(0)] {
        t.apply(g)?;
    }
    let mut bits = [0u8; 2];
    for (slot, q) in bits.iter_mut().zip([0, 1]) {
        let m = match branch {
            Branch::Sampled => t.measure_z(q, rng)?,
            Branch::Forced(m0, m1) => t.measure_z_with(q, || if q == 0 { m0 } else { m1 })?,
        };
        *slot = m.outcome;
    }
    if bits[1] == 1 {
        t.apply(CliffordGate::X(2))?;
    }
    if bits[0] == 1 {
        t.apply(CliffordGate::Z(2))?;
    }

    // Move the expected single-qubit stabilizer from qubit 0 to qubit 2.
    let on_output = Pauli { x: expected.x << 2, z: expected.z << 2, negative: expected.negative };
    let matched = t.pauli_expectation(&on_output) == 1;
    let output_state = t.to_statevector::<f64>()?.reduced_density(2)?;
    let fidelity = output_state.fidelity_with(&input.to_statevector::<f64>()?)?;

    let mut report = ProtocolReport::new("teleport", EngineKind::Stabilizer);
    report.metrics.insert("fidelity".into(), fidelity);
    report.metrics.insert("stabilizer_match".into(), f64::from(u8::from(matched)));
    report.details.insert("input_stabilizer".into(), expected.render(1));
    report.details.insert("output_stabilizer".into(), output_stabilizer(&t, 2));
    report.classical_bits = bits.to_vec();
    Ok(StabilizerTeleport { report, tableau: t })
}

/// The signed single-qubit Pauli stabilizing qubit `q`, or `mixed` when the
/// qubit is entangled with the rest of the register.
fn output_stabilizer(t: &StabilizerTableau, q: usize) -> String {
    for letter in ['X', 'Y', 'Z'] {
        let p = Pauli::single(q, letter).expect("Pauli letter");
        match t.pauli_expectation(&p) {
            1 => return format!("+{letter}"),
            -1 => return format!("-{letter}"),
            _ => {}
        }
    }
    "mixed".into()
}

/// Superdense coding of two bits through one qubit of a shared `phi_plus`.
/// The sender applies `X^b2 Z^b1`; the receiver decodes with CNOT, H and
/// two Z measurements.
pub fn superdense_code<R: Rng + ?Sized>(bits: (bool, bool), rng: &mut R) -> Result<ProtocolReport> {
    let (b1, b2) = bits;
    let mut t = StabilizerTableau::init_zero(2)?;
    t.apply(CliffordGate::H(0))?;
    t.apply(CliffordGate::Cnot(0, 1))?;
    if b2 {
        t.apply(CliffordGate::X(0))?;
    }
    if b1 {
        t.apply(CliffordGate::Z(0))?;
    }
    t.apply(CliffordGate::Cnot(0, 1))?;
    t.apply(CliffordGate::H(0))?;

    let mut decoded = [0u8; 2];
    let mut min_certainty = 1.0f64;
    for (q, slot) in decoded.iter_mut().enumerate() {
        let p1 = t.outcome_probability(q)?;
        let m = t.measure_z(q, rng)?;
        let p_observed = if m.outcome == 1 { p1 } else { 1.0 - p1 };
        min_certainty = min_certainty.min(if m.deterministic { p_observed } else { 0.5 });
        *slot = m.outcome;
    }
    let mut report = ProtocolReport::new("superdense", EngineKind::Stabilizer);
    report.metrics.insert("decoded_b1".into(), f64::from(decoded[0]));
    report.metrics.insert("decoded_b2".into(), f64::from(decoded[1]));
    report.metrics.insert("decode_probability".into(), min_certainty);
    let success = decoded == [u8::from(b1), u8::from(b2)];
    report.metrics.insert("success".into(), f64::from(u8::from(success)));
    Ok(report)
}

/// Prepares `bit` in the Z (`basis = false`) or X basis on a fresh qubit.
fn bb84_prepare(bit: bool, x_basis: bool) -> Result<StabilizerTableau> {
    let mut t = StabilizerTableau::init_zero(1)?;
    if bit {
        t.apply(CliffordGate::X(0))?;
    }
    if x_basis {
        t.apply(CliffordGate::H(0))?;
    }
    Ok(t)
}

fn bb84_measure<R: Rng + ?Sized>(t: &mut StabilizerTableau, x_basis: bool, rng: &mut R) -> Result<bool> {
    if x_basis {
        t.apply(CliffordGate::H(0))?;
    }
    Ok(t.measure_z(0, rng)?.outcome == 1)
}

/// BB84 over `rounds` single-qubit transmissions, optionally with an
/// intercept-resend eavesdropper measuring in a uniformly random basis.
///
/// The classical transcript holds, per round, the sender's and receiver's
/// publicly announced basis bits (0 = Z, 1 = X).
pub fn bb84_simulate<R: Rng + ?Sized>(rounds: usize, intercept_resend: bool, rng: &mut R) -> Result<ProtocolReport> {
    if rounds < 1 {
        return Err(Error::Config("bb84 needs at least one round".into()));
    }
    let mut kept = 0usize;
    let mut errors = 0usize;
    let mut transcript = Vec::with_capacity(2 * rounds);
    for _ in 0..rounds {
        let bit: bool = rng.gen();
        let basis: bool = rng.gen();
        let mut channel = bb84_prepare(bit, basis)?;
        if intercept_resend {
            let eve_basis: bool = rng.gen();
            let eve_bit = bb84_measure(&mut channel, eve_basis, rng)?;
            channel = bb84_prepare(eve_bit, eve_basis)?;
        }
        let bob_basis: bool = rng.gen();
        let bob_bit = bb84_measure(&mut channel, bob_basis, rng)?;
        transcript.push(u8::from(basis));
        transcript.push(u8::from(bob_basis));
        if basis == bob_basis {
            kept += 1;
            if bob_bit != bit {
                errors += 1;
            }
        }
    }
    let mut report = ProtocolReport::new("bb84", EngineKind::Stabilizer);
    report.metrics.insert("rounds".into(), rounds as f64);
    report.metrics.insert("sifted".into(), kept as f64);
    report.metrics.insert("sift_rate".into(), kept as f64 / rounds as f64);
    report.metrics.insert("errors".into(), errors as f64);
    // No sifted bits means no observed errors.
    let qber = if kept == 0 { 0.0 } else { errors as f64 / kept as f64 };
    report.metrics.insert("qber".into(), qber);
    report.details.insert("eavesdropper".into(), if intercept_resend { "intercept-resend" } else { "none" }.into());
    report.classical_bits = transcript;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn teleport_zero_and_non_stabilizer_state() {
        let mut rng = seeded(0);
        let zero = StateVector::<f64>::zero(1).unwrap();
        let r = teleport_statevector(&zero, &mut rng).unwrap();
        assert!((r.report.metric("fidelity").unwrap() - 1.0).abs() < 1e-10);
        assert!(!r.report.classically_simulable);
        assert_eq!(r.report.classical_bits.len(), 2);

        let th =
            zero.applied(&GateOp::single(GateKind::H, 0)).unwrap().applied(&GateOp::single(GateKind::T, 0)).unwrap();
        for m0 in 0..2 {
            for m1 in 0..2 {
                let r = teleport_statevector_branch(&th, Branch::Forced(m0, m1), &mut rng).unwrap();
                assert!((r.report.metric("fidelity").unwrap() - 1.0).abs() < 1e-10);
                assert_eq!(r.report.classical_bits, vec![m0, m1]);
            }
        }
    }

    #[test]
    fn teleport_amplitude_validation() {
        let mut rng = seeded(0);
        let bad = [Complex::new(0.6, 0.0), Complex::new(0.6, 0.0)];
        assert!(matches!(teleport_amplitudes(bad, &mut rng), Err(Error::Normalization { .. })));
        let ok = [Complex::new(0.6, 0.0), Complex::new(0.8, 0.0)];
        assert!((teleport_amplitudes(ok, &mut rng).unwrap().report.metric("fidelity").unwrap() - 1.0).abs() < 1e-10);
        let two = StateVector::<f64>::zero(2).unwrap();
        assert!(matches!(teleport_statevector(&two, &mut rng), Err(Error::Dimension { .. })));
    }

    #[test]
    fn stabilizer_teleport_examples() {
        let mut rng = seeded(4);
        let r = teleport_stabilizer(&QubitPreparation::named("plus").unwrap(), &mut rng).unwrap();
        assert!(r.report.classically_simulable);
        assert_eq!(r.report.details["output_stabilizer"], "+X");
        let r = teleport_stabilizer(&QubitPreparation::named("0").unwrap(), &mut rng).unwrap();
        assert_eq!(r.report.details["output_stabilizer"], "+Z");
        let t_plus = QubitPreparation::parse("T|+>").unwrap();
        assert!(matches!(teleport_stabilizer(&t_plus, &mut rng), Err(Error::NonCliffordGate { .. })));
    }

    #[test]
    fn preparation_parsing() {
        assert_eq!(QubitPreparation::parse("t|+").unwrap().gates, vec![GateKind::H, GateKind::T]);
        assert_eq!(QubitPreparation::parse("s|h|0>").unwrap().gates, vec![GateKind::H, GateKind::S]);
        assert_eq!(QubitPreparation::parse("-i").unwrap().gates, vec![GateKind::H, GateKind::Sdg]);
        assert!(QubitPreparation::parse("rz|0").is_err());
        assert!(QubitPreparation::parse("bogus").is_err());
        assert_eq!(QubitPreparation::named("-i").unwrap().stabilizer().unwrap().render(1), "-Y");
        assert_eq!(QubitPreparation::named("-").unwrap().stabilizer().unwrap().render(1), "-X");
    }

    #[test]
    fn superdense_examples() {
        let mut rng = seeded(2);
        for (b1, b2) in [(false, false), (true, true), (true, false), (false, true)] {
            let r = superdense_code((b1, b2), &mut rng).unwrap();
            assert_eq!(r.metric("decoded_b1"), Some(f64::from(u8::from(b1))));
            assert_eq!(r.metric("decoded_b2"), Some(f64::from(u8::from(b2))));
            assert_eq!(r.metric("decode_probability"), Some(1.0));
            assert!(r.classical_bits.is_empty());
        }
    }

    #[test]
    fn bb84_single_round_and_errors() {
        let mut rng = seeded(8);
        let r = bb84_simulate(1, false, &mut rng).unwrap();
        let sift = r.metric("sift_rate").unwrap();
        assert!(sift == 0.0 || sift == 1.0);
        assert_eq!(r.classical_bits.len(), 2);
        assert!(matches!(bb84_simulate(0, false, &mut rng), Err(Error::Config(_))));
    }

    #[test]
    fn report_render() {
        let mut rng = seeded(2);
        let r = superdense_code((true, false), &mut rng).unwrap();
        let text = r.render();
        assert!(text.starts_with("protocol=superdense\nengine=stabilizer\nsimulable=true\n"));
        assert!(text.contains("decoded_b1=1.0000000000\n"));
    }
}
