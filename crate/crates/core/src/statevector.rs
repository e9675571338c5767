//! Dense statevector engine.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of the
//! basis index: for two qubits the basis order is `|00>, |01>, |10>, |11>` with
//! the first digit belonging to qubit 0.

use std::fmt;

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix2;
use crate::scalar::{cis, cplx, Scalar};

/// Largest register the dense engine accepts.
pub const MAX_QUBITS: usize = 12;

/// Probabilities below this are treated as impossible outcomes.
const PROJECTION_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rz,
    Rx,
    Ry,
    Cnot,
    Cz,
}

impl GateKind {
    pub const ALL: [GateKind; 13] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rz,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Cnot,
        GateKind::Cz,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz => 2,
            _ => 1,
        }
    }

    pub fn takes_angle(self) -> bool {
        matches!(self, GateKind::Rz | GateKind::Rx | GateKind::Ry)
    }

    /// Lowercase mnemonic, as used by the circuit language.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Rz => "rz",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Cnot => "cnot",
            GateKind::Cz => "cz",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        let lower = name.to_ascii_lowercase();
        Self::ALL.into_iter().find(|k| k.name() == lower)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A gate together with the qubits it acts on. For two-qubit gates the
/// first qubit is the control.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp<T: Scalar> {
    kind: GateKind,
    qubits: Vec<usize>,
    angle: Option<T>,
}

impl<T: Scalar> GateOp<T> {
    pub fn new(kind: GateKind, qubits: &[usize], angle: Option<T>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::Config(format!("{kind} takes {} qubit(s), got {}", kind.arity(), qubits.len())));
        }
        if kind.takes_angle() != angle.is_some() {
            return Err(Error::Config(format!("angle presence does not match gate {kind}")));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::DuplicateQubit(qubits[0]));
        }
        Ok(Self { kind, qubits: qubits.to_vec(), angle })
    }

    /// Panics when `kind` is not a fixed single-qubit gate.
    pub fn single(kind: GateKind, q: usize) -> Self {
        Self::new(kind, &[q], None).expect("fixed single-qubit gate")
    }

    /// Panics when `kind` is not a rotation.
    pub fn rotation(kind: GateKind, q: usize, angle: T) -> Self {
        Self::new(kind, &[q], Some(angle)).expect("rotation gate")
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cnot, &[control, target], None).expect("distinct qubits")
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::new(GateKind::Cz, &[a, b], None).expect("distinct qubits")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn angle(&self) -> Option<T> {
        self.angle
    }

    /// The 2x2 unitary for single-qubit gates, `None` for two-qubit gates.
    pub fn matrix(&self) -> Option<Matrix2<T>> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let zero = [[0.0; 2]; 2];
        let m = match self.kind {
            GateKind::H => Matrix2::from_f64([[h, h], [h, -h]], zero),
            GateKind::X => Matrix2::pauli_x(),
            GateKind::Y => Matrix2::pauli_y(),
            GateKind::Z => Matrix2::pauli_z(),
            GateKind::S => Matrix2::from_f64([[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]),
            GateKind::Sdg => Matrix2::from_f64([[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, -1.0]]),
            GateKind::T | GateKind::Tdg => {
                let sign = if self.kind == GateKind::T { T::one() } else { -T::one() };
                let one = cplx(1.0, 0.0);
                let zero = cplx(0.0, 0.0);
                Matrix2::new([[one, zero], [zero, cis(sign * T::FRAC_PI_4())]])
            }
            GateKind::Rz | GateKind::Rx | GateKind::Ry => {
                let half = self.angle.expect("rotation carries an angle") * T::lit(0.5);
                let (s, c) = half.sin_cos();
                let zero = T::zero();
                let re = |v: T| Complex::new(v, zero);
                let im = |v: T| Complex::new(zero, v);
                match self.kind {
                    GateKind::Rz => Matrix2::new([[cis(-half), re(zero)], [re(zero), cis(half)]]),
                    GateKind::Rx => Matrix2::new([[re(c), im(-s)], [im(-s), re(c)]]),
                    _ => Matrix2::new([[re(c), re(-s)], [re(s), re(c)]]),
                }
            }
            GateKind::Cnot | GateKind::Cz => return None,
        };
        Some(m)
    }

    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            k => k,
        };
        Self { kind, qubits: self.qubits.clone(), angle: self.angle.map(|a| -a) }
    }
}

/// Single-qubit states in the form the product constructor accepts.
pub type QubitSpec<T> = [Complex<T>; 2];

#[derive(Debug, Clone, PartialEq)]
pub enum NamedState<T: Scalar> {
    /// `|0...0>` on `n` qubits.
    ZeroN(usize),
    /// `(|01> + |10>)/sqrt 2`
    PsiPlus,
    /// `(|00> + |11>)/sqrt 2`
    PhiPlus,
    /// Tensor product of normalized single-qubit factors, qubit 0 first.
    Product(Vec<QubitSpec<T>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Scalar> {
    num_qubits: usize,
    amps: Vec<Complex<T>>,
    tol: T,
}

/// Result of a projective Z measurement on one qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement<T: Scalar> {
    pub outcome: u8,
    pub probability: T,
    pub collapsed: StateVector<T>,
}

fn check_size(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::Size { size: n, min: 1, max: MAX_QUBITS })
    }
}

impl<T: Scalar> StateVector<T> {
    pub fn zero(n: usize) -> Result<Self> {
        check_size(n)?;
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(Self { num_qubits: n, amps, tol: T::default_tolerance() })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the vector
    /// normalized within the default tolerance.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Config(format!("amplitude count {len} is not 2^n with n >= 1")));
        }
        let n = len.trailing_zeros() as usize;
        check_size(n)?;
        let state = Self { num_qubits: n, amps, tol: T::default_tolerance() };
        state.check_normalized()?;
        Ok(state)
    }

    pub fn prepare(name: &NamedState<T>) -> Result<Self> {
        let r = T::FRAC_1_SQRT_2();
        let z = T::zero();
        match name {
            NamedState::ZeroN(n) => Self::zero(*n),
            NamedState::PsiPlus => Self::from_amplitudes([z, r, r, z].iter().map(|&a| Complex::new(a, z)).collect()),
            NamedState::PhiPlus => Self::from_amplitudes([r, z, z, r].iter().map(|&a| Complex::new(a, z)).collect()),
            NamedState::Product(factors) => Self::product(factors),
        }
    }

    pub fn psi_plus() -> Self {
        Self::prepare(&NamedState::PsiPlus).expect("static state")
    }

    pub fn phi_plus() -> Self {
        Self::prepare(&NamedState::PhiPlus).expect("static state")
    }

    pub fn product(factors: &[QubitSpec<T>]) -> Result<Self> {
        check_size(factors.len())?;
        let tol = T::default_tolerance();
        for f in factors {
            let norm_sqr = f[0].norm_sqr() + f[1].norm_sqr();
            if (norm_sqr - T::one()).abs() > tol {
                return Err(Error::Normalization { norm_sqr: norm_sqr.to_f64_lossy() });
            }
        }
        let mut amps = vec![Complex::new(T::one(), T::zero())];
        for f in factors {
            amps = amps.iter().flat_map(|&a| [a * f[0], a * f[1]]).collect();
        }
        Ok(Self { num_qubits: factors.len(), amps, tol })
    }

    /// Replaces the tolerance used by this state's checks (and by every state
    /// derived from it).
    pub fn with_tolerance(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerance(&self) -> T {
        self.tol
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - T::one()).abs() > self.tol {
            return Err(Error::Normalization { norm_sqr: norm_sqr.to_f64_lossy() });
        }
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.num_qubits {
            Ok(())
        } else {
            Err(Error::QubitIndex { index: q, num_qubits: self.num_qubits })
        }
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    pub fn apply_single(&mut self, q: usize, u: &Matrix2<T>) -> Result<()> {
        self.check_qubit(q)?;
        let mask = self.mask(q);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let [a0, a1] = u.apply([self.amps[i], self.amps[j]]);
                self.amps[i] = a0;
                self.amps[j] = a1;
            }
        }
        Ok(())
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &GateOp<T>) -> Result<()> {
        for &q in gate.qubits() {
            self.check_qubit(q)?;
        }
        match gate.kind() {
            GateKind::Cnot => {
                let (c, t) = (self.mask(gate.qubits[0]), self.mask(gate.qubits[1]));
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            GateKind::Cz => {
                let both = self.mask(gate.qubits[0]) | self.mask(gate.qubits[1]);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & both == both {
                        *a = -*a;
                    }
                }
            }
            _ => {
                let u = gate.matrix().expect("single-qubit gate");
                self.apply_single(gate.qubits[0], &u)?;
            }
        }
        Ok(())
    }

    /// Consuming variant of [`apply`](Self::apply).
    pub fn applied(mut self, gate: &GateOp<T>) -> Result<Self> {
        self.apply(gate)?;
        Ok(self)
    }

    /// Born probability that qubit `q` reads 1.
    pub fn probability_one(&self, q: usize) -> Result<T> {
        self.check_qubit(q)?;
        let mask = self.mask(q);
        Ok(self.amps.iter().enumerate().filter(|(i, _)| i & mask != 0).map(|(_, a)| a.norm_sqr()).sum())
    }

    /// Projects qubit `q` onto `outcome` and renormalizes. Returns the Born
    /// probability of that outcome together with the collapsed state.
    pub fn project(&self, q: usize, outcome: u8) -> Result<(T, Self)> {
        let p1 = self.probability_one(q)?;
        let p = if outcome == 1 { p1 } else { T::one() - p1 };
        let mask = self.mask(q);
        let want = if outcome == 1 { mask } else { 0 };
        let kept: T = self.amps.iter().enumerate().filter(|(i, _)| i & mask == want).map(|(_, a)| a.norm_sqr()).sum();
        if kept < T::lit(PROJECTION_FLOOR) {
            return Err(Error::Projection { qubit: q, outcome });
        }
        let scale = T::one() / kept.sqrt();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, &a)| if i & mask == want { a * scale } else { Complex::new(T::zero(), T::zero()) })
            .collect();
        Ok((p, Self { num_qubits: self.num_qubits, amps, tol: self.tol }))
    }

    /// Samples a Z measurement of qubit `q`, consuming one uniform draw.
    pub fn measure<R: Rng + ?Sized>(&self, q: usize, rng: &mut R) -> Result<Measurement<T>> {
        let p1 = self.probability_one(q)?.to_f64_lossy();
        let outcome = u8::from(rng.gen::<f64>() < p1);
        let (probability, collapsed) = self.project(q, outcome)?;
        Ok(Measurement { outcome, probability, collapsed })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::Dimension { left: self.amps.len(), right: other.amps.len() });
        }
        Ok(self.amps.iter().zip(&other.amps).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `<psi| O_1 (x) O_2 (x) ... |psi>` for single-qubit observables on distinct qubits.
    pub fn expectation(&self, factors: &[(usize, Matrix2<T>)]) -> Result<T> {
        let mut transformed = self.clone();
        for (k, (q, obs)) in factors.iter().enumerate() {
            if factors[..k].iter().any(|(p, _)| p == q) {
                return Err(Error::DuplicateQubit(*q));
            }
            let defect = obs.hermiticity_defect();
            if defect > self.tol {
                return Err(Error::Observable(format!("not Hermitian (defect {defect})")));
            }
            if !obs.is_involutory(self.tol) {
                return Err(Error::Observable("eigenvalues are not +-1".into()));
            }
            transformed.apply_single(*q, obs)?;
        }
        Ok(self.inner(&transformed)?.re)
    }

    /// Partial trace over every qubit except `q`.
    pub fn reduced_density(&self, q: usize) -> Result<DensityMatrix2x2<T>> {
        self.check_qubit(q)?;
        let mask = self.mask(q);
        let mut rho = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for i in (0..self.amps.len()).filter(|i| i & mask == 0) {
            let pair = [self.amps[i], self.amps[i | mask]];
            for r in 0..2 {
                for c in 0..2 {
                    rho[r][c] = rho[r][c] + pair[r] * pair[c].conj();
                }
            }
        }
        Ok(DensityMatrix2x2 { rho: Matrix2::new(rho) })
    }

    /// `|<self|other>|^2`; 1 iff the states agree up to global phase.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        let overlap = self.inner(other)?.norm_sqr();
        Ok(overlap.min(T::one()).max(T::zero()))
    }

    /// The single-qubit amplitudes if this is a one-qubit state.
    pub fn as_qubit(&self) -> Option<QubitSpec<T>> {
        (self.num_qubits == 1).then(|| [self.amps[0], self.amps[1]])
    }
}

/// One-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2x2<T: Scalar> {
    rho: Matrix2<T>,
}

impl<T: Scalar> DensityMatrix2x2<T> {
    /// Validates hermiticity, unit trace and positivity at the default tolerance.
    pub fn new(rho: Matrix2<T>) -> Result<Self> {
        let tol = T::default_tolerance();
        if !rho.is_hermitian(tol) {
            return Err(Error::Input("density matrix is not Hermitian".into()));
        }
        if (rho.trace() - cplx::<T>(1.0, 0.0)).norm() > tol {
            return Err(Error::Input("density matrix trace is not 1".into()));
        }
        if rho.hermitian_eigenvalues()[0] < -tol {
            return Err(Error::Input("density matrix has a negative eigenvalue".into()));
        }
        Ok(Self { rho })
    }

    pub fn from_pure(amps: QubitSpec<T>) -> Self {
        Self { rho: Matrix2::outer(amps) }
    }

    pub fn matrix(&self) -> &Matrix2<T> {
        &self.rho
    }

    /// Uhlmann fidelity; for 2x2 matrices `tr(rho sigma) + 2 sqrt(det rho det sigma)`.
    pub fn fidelity(&self, other: &Self) -> T {
        let overlap = (self.rho * other.rho).trace().re;
        let dets = (self.rho.det().re * other.rho.det().re).max(T::zero());
        let two = T::lit(2.0);
        (overlap + two * dets.sqrt()).min(T::one()).max(T::zero())
    }

    /// `<psi| rho |psi>` for a one-qubit pure state.
    pub fn fidelity_with(&self, state: &StateVector<T>) -> Result<T> {
        let psi = state.as_qubit().ok_or(Error::Dimension { left: 2, right: state.amplitudes().len() })?;
        let rp = self.rho.apply(psi);
        let v = psi[0].conj() * rp[0] + psi[1].conj() * rp[1];
        Ok(v.re.min(T::one()).max(T::zero()))
    }
}

/// States that admit a fidelity against another state of the same kind.
pub trait Fidelity {
    type Value;
    fn fidelity_to(&self, other: &Self) -> Result<Self::Value>;
}

impl<T: Scalar> Fidelity for StateVector<T> {
    type Value = T;
    fn fidelity_to(&self, other: &Self) -> Result<T> {
        self.fidelity(other)
    }
}

impl<T: Scalar> Fidelity for DensityMatrix2x2<T> {
    type Value = T;
    fn fidelity_to(&self, other: &Self) -> Result<T> {
        Ok(self.fidelity(other))
    }
}

pub fn fidelity<S: Fidelity>(a: &S, b: &S) -> Result<S::Value> {
    a.fidelity_to(b)
}
