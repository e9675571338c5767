#![allow(dead_code)]

use num_complex::Complex;
use qccsim::rng::SimRng;
use qccsim::stabilizer::{CliffordGate, StabilizerTableau};
use qccsim::statevector::{GateKind, GateOp, StateVector};
use qccsim::StateVector64;
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy)]
pub enum Step {
    Gate(CliffordGate),
    Measure(usize),
}

pub fn random_clifford_gate<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CliffordGate {
    let q = rng.gen_range(0..n);
    let kinds = if n > 1 { 8 } else { 6 };
    match rng.gen_range(0..kinds) {
        0 => CliffordGate::H(q),
        1 => CliffordGate::S(q),
        2 => CliffordGate::Sdg(q),
        3 => CliffordGate::X(q),
        4 => CliffordGate::Y(q),
        5 => CliffordGate::Z(q),
        k => {
            let mut r = rng.gen_range(0..n - 1);
            if r >= q {
                r += 1;
            }
            if k == 6 {
                CliffordGate::Cnot(q, r)
            } else {
                CliffordGate::Cz(q, r)
            }
        }
    }
}

/// Random Clifford circuit with about one measurement in eight steps.
pub fn random_clifford_circuit<R: Rng + ?Sized>(rng: &mut R) -> (usize, Vec<Step>) {
    let n = rng.gen_range(1..=5);
    let depth = rng.gen_range(1..=40);
    let steps = (0..depth)
        .map(|_| {
            if rng.gen_range(0..8) == 0 {
                Step::Measure(rng.gen_range(0..n))
            } else {
                Step::Gate(random_clifford_gate(n, rng))
            }
        })
        .collect();
    (n, steps)
}

pub fn gate_op(g: CliffordGate) -> GateOp<f64> {
    match g {
        CliffordGate::H(q) => GateOp::single(GateKind::H, q),
        CliffordGate::S(q) => GateOp::single(GateKind::S, q),
        CliffordGate::Sdg(q) => GateOp::single(GateKind::Sdg, q),
        CliffordGate::X(q) => GateOp::single(GateKind::X, q),
        CliffordGate::Y(q) => GateOp::single(GateKind::Y, q),
        CliffordGate::Z(q) => GateOp::single(GateKind::Z, q),
        CliffordGate::Cnot(c, t) => GateOp::cnot(c, t),
        CliffordGate::Cz(a, b) => GateOp::cz(a, b),
    }
}

pub struct EquivalenceRun {
    pub fidelity: f64,
    /// Largest gap between statevector and tableau outcome probabilities.
    pub max_probability_gap: f64,
    /// Every tableau probability lies in {0, 1/2, 1}.
    pub probabilities_dyadic: bool,
    pub tableau_valid: bool,
}

/// Runs `steps` on both engines. Measurements are sampled on the tableau and
/// the statevector is projected onto the same outcome.
pub fn run_both(n: usize, steps: &[Step], rng: &mut SimRng) -> EquivalenceRun {
    let mut sv = StateVector64::zero(n).unwrap();
    let mut tab = StabilizerTableau::init_zero(n).unwrap();
    let mut gap = 0.0f64;
    let mut dyadic = true;
    let mut valid = true;
    for step in steps {
        match *step {
            Step::Gate(g) => {
                tab.apply(g).unwrap();
                sv.apply(&gate_op(g)).unwrap();
            }
            Step::Measure(q) => {
                let p_tab = tab.outcome_probability(q).unwrap();
                let p_sv = sv.probability_one(q).unwrap();
                dyadic &= [0.0, 0.5, 1.0].contains(&p_tab);
                gap = gap.max((p_tab - p_sv).abs());
                let m = tab.measure_z(q, rng).unwrap();
                sv = sv.project(q, m.outcome).unwrap().1;
            }
        }
        valid &= tab.validate().is_ok();
    }
    let from_tab: StateVector<f64> = tab.to_statevector().unwrap();
    EquivalenceRun {
        fidelity: from_tab.fidelity(&sv).unwrap(),
        max_probability_gap: gap,
        probabilities_dyadic: dyadic,
        tableau_valid: valid,
    }
}

/// Haar-random single-qubit amplitudes.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> [Complex<f64>; 2] {
    let u: f64 = rng.gen();
    let phi: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let lambda: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let theta_half = u.sqrt().asin();
    [Complex::from_polar(theta_half.cos(), lambda), Complex::from_polar(theta_half.sin(), lambda + phi)]
}

/// Random normalized two-qubit state with Gaussian amplitudes.
pub fn random_two_qubit<R: Rng + ?Sized>(rng: &mut R) -> StateVector64 {
    let mut amps: Vec<Complex<f64>> = (0..4).map(|_| Complex::new(gauss(rng), gauss(rng))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector64::from_amplitudes(amps).unwrap()
}

pub fn random_product<R: Rng + ?Sized>(rng: &mut R) -> StateVector64 {
    StateVector64::product(&[random_qubit(rng), random_qubit(rng)]).unwrap()
}

pub fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI)
}

pub struct CorpusFile {
    pub name: String,
    pub text: String,
}

pub fn corpus(kind: &str) -> Vec<CorpusFile> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(kind);
    let mut files: Vec<CorpusFile> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            CorpusFile {
                name: path.file_name().unwrap().to_string_lossy().into_owned(),
                text: std::fs::read_to_string(&path).unwrap(),
            }
        })
        .filter(|f| f.name.ends_with(".qc"))
        .collect();
    files.sort_by(|a, b| a.name.cmp(&b.name));
    files
}

/// 1-based line numbers carrying a `# non-clifford` marker.
pub fn marked_lines(text: &str) -> Vec<usize> {
    text.lines().enumerate().filter(|(_, l)| l.contains("# non-clifford")).map(|(i, _)| i + 1).collect()
}

/// The kind named by the `# expect: <Kind>` first line of an invalid file.
pub fn expected_kind(text: &str) -> String {
    text.lines()
        .next()
        .and_then(|l| l.strip_prefix("# expect:"))
        .map(|k| k.trim().to_string())
        .expect("invalid corpus file lacks `# expect:` line")
}
