//! Stabilizer tableau engine for Clifford circuits.
//!
//! The tableau holds `2n` Pauli rows: destabilizers in rows `0..n`,
//! stabilizers in rows `n..2n`. Each row stores its X and Z support packed
//! into one `u64` (bit `q` is qubit `q`) plus a sign bit; `x = z = 1` encodes
//! the Hermitian `Y`. Gate updates are O(n) and measurement is O(n^2),
//! following the Aaronson–Gottesman construction.

use std::fmt;

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::statevector::{GateKind, GateOp, StateVector, MAX_QUBITS};

pub const MAX_TABLEAU_QUBITS: usize = 64;

/// Rotation angles count as Clifford when they sit this close to a multiple of pi/2.
pub const CLIFFORD_ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl CliffordGate {
    fn qubits(self) -> (usize, Option<usize>) {
        match self {
            CliffordGate::H(q)
            | CliffordGate::S(q)
            | CliffordGate::Sdg(q)
            | CliffordGate::X(q)
            | CliffordGate::Y(q)
            | CliffordGate::Z(q) => (q, None),
            CliffordGate::Cnot(a, b) | CliffordGate::Cz(a, b) => (a, Some(b)),
        }
    }

    /// Lowers a general gate to Clifford generators, equal up to global phase.
    /// T gates and rotations off the pi/2 lattice are rejected.
    pub fn lower<T: Scalar>(gate: &GateOp<T>) -> Result<Vec<CliffordGate>> {
        let q = gate.qubits()[0];
        let out = match gate.kind() {
            GateKind::H => vec![CliffordGate::H(q)],
            GateKind::X => vec![CliffordGate::X(q)],
            GateKind::Y => vec![CliffordGate::Y(q)],
            GateKind::Z => vec![CliffordGate::Z(q)],
            GateKind::S => vec![CliffordGate::S(q)],
            GateKind::Sdg => vec![CliffordGate::Sdg(q)],
            GateKind::Cnot => vec![CliffordGate::Cnot(q, gate.qubits()[1])],
            GateKind::Cz => vec![CliffordGate::Cz(q, gate.qubits()[1])],
            GateKind::T | GateKind::Tdg => {
                return Err(Error::NonCliffordGate {
                    what: format!("{} on qubit {q}", gate.kind()),
                    witnesses: Vec::new(),
                })
            }
            kind @ (GateKind::Rz | GateKind::Rx | GateKind::Ry) => {
                let angle = gate.angle().expect("rotation carries an angle").to_f64_lossy();
                let turns = quarter_turns(angle).ok_or_else(|| Error::NonCliffordGate {
                    what: format!("{kind}({angle}) on qubit {q}"),
                    witnesses: Vec::new(),
                })?;
                let phase = match turns {
                    0 => vec![],
                    1 => vec![CliffordGate::S(q)],
                    2 => vec![CliffordGate::Z(q)],
                    _ => vec![CliffordGate::Sdg(q)],
                };
                let h = CliffordGate::H(q);
                match kind {
                    GateKind::Rz => phase,
                    // Rx = H Rz H
                    GateKind::Rx => [vec![h], phase, vec![h]].concat(),
                    // Ry = S Rx Sdg
                    _ => [vec![CliffordGate::Sdg(q), h], phase, vec![h, CliffordGate::S(q)]].concat(),
                }
            }
        };
        Ok(out)
    }
}

/// Number of quarter turns (mod 4) when `angle` is a multiple of pi/2
/// within [`CLIFFORD_ANGLE_TOL`].
pub fn quarter_turns(angle: f64) -> Option<u8> {
    if !angle.is_finite() {
        return None;
    }
    let k = (angle / std::f64::consts::FRAC_PI_2).round();
    if (angle - k * std::f64::consts::FRAC_PI_2).abs() <= CLIFFORD_ANGLE_TOL {
        Some(k.rem_euclid(4.0) as u8)
    } else {
        None
    }
}

/// A signed Hermitian Pauli string on up to 64 qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pauli {
    pub x: u64,
    pub z: u64,
    pub negative: bool,
}

impl Pauli {
    pub fn identity() -> Self {
        Self { x: 0, z: 0, negative: false }
    }

    pub fn single(q: usize, letter: char) -> Option<Self> {
        let bit = 1u64 << q;
        let (x, z) = match letter.to_ascii_uppercase() {
            'I' => (0, 0),
            'X' => (bit, 0),
            'Y' => (bit, bit),
            'Z' => (0, bit),
            _ => return None,
        };
        Some(Self { x, z, negative: false })
    }

    /// Parses `[+-]P0P1...` with letters from `IXYZ`, qubit 0 first.
    pub fn parse(s: &str) -> Option<(Self, usize)> {
        let (negative, body) = match s.as_bytes().first()? {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let mut p = Self { negative, ..Self::identity() };
        let mut n = 0;
        for (q, ch) in body.chars().enumerate() {
            let single = Self::single(q, ch)?;
            p.x |= single.x;
            p.z |= single.z;
            n += 1;
        }
        (n > 0 && n <= MAX_TABLEAU_QUBITS).then_some((p, n))
    }

    fn anticommutes(&self, other_x: u64, other_z: u64) -> bool {
        ((self.x & other_z).count_ones() + (self.z & other_x).count_ones()) % 2 == 1
    }

    pub fn render(&self, n: usize) -> String {
        let mut s = String::with_capacity(n + 1);
        s.push(if self.negative { '-' } else { '+' });
        for q in 0..n {
            let bit = 1u64 << q;
            s.push(match (self.x & bit != 0, self.z & bit != 0) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            });
        }
        s
    }
}

/// Exponent of `i` picked up when multiplying single-qubit Paulis
/// `(x1, z1) * (x2, z2)`.
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 as i32 - x2 as i32,
        (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
        (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
    }
}

/// Outcome of a Z measurement on the tableau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZMeasurement {
    pub outcome: u8,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    num_qubits: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<bool>,
}

impl StabilizerTableau {
    /// `|0...0>`: destabilizers `X_q`, stabilizers `+Z_q`.
    pub fn init_zero(n: usize) -> Result<Self> {
        if !(1..=MAX_TABLEAU_QUBITS).contains(&n) {
            return Err(Error::Size { size: n, min: 1, max: MAX_TABLEAU_QUBITS });
        }
        let mut xs = vec![0u64; 2 * n];
        let mut zs = vec![0u64; 2 * n];
        for q in 0..n {
            xs[q] = 1 << q;
            zs[n + q] = 1 << q;
        }
        Ok(Self { num_qubits: n, xs, zs, signs: vec![false; 2 * n] })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.num_qubits {
            Ok(())
        } else {
            Err(Error::QubitIndex { index: q, num_qubits: self.num_qubits })
        }
    }

    fn row(&self, i: usize) -> Pauli {
        Pauli { x: self.xs[i], z: self.zs[i], negative: self.signs[i] }
    }

    fn set_row(&mut self, i: usize, p: Pauli) {
        self.xs[i] = p.x;
        self.zs[i] = p.z;
        self.signs[i] = p.negative;
    }

    pub fn stabilizer(&self, i: usize) -> Pauli {
        self.row(self.num_qubits + i)
    }

    pub fn destabilizer(&self, i: usize) -> Pauli {
        self.row(i)
    }

    pub fn stabilizers(&self) -> Vec<Pauli> {
        (0..self.num_qubits).map(|i| self.stabilizer(i)).collect()
    }

    /// Rendered stabilizer generators, e.g. `["+XX", "+ZZ"]`.
    pub fn stabilizer_strings(&self) -> Vec<String> {
        self.stabilizers().iter().map(|p| p.render(self.num_qubits)).collect()
    }

    /// `left * right` for commuting Paulis (the only products formed on
    /// stabilizer rows); the sign comes from the accumulated power of `i`.
    fn multiply(&self, left: Pauli, right: Pauli) -> Pauli {
        let mut exponent = 2 * left.negative as i32 + 2 * right.negative as i32;
        let (mut xl, mut zl, mut xr, mut zr) = (left.x, left.z, right.x, right.z);
        for _ in 0..self.num_qubits {
            exponent += g(xl & 1 == 1, zl & 1 == 1, xr & 1 == 1, zr & 1 == 1);
            xl >>= 1;
            zl >>= 1;
            xr >>= 1;
            zr >>= 1;
        }
        Pauli { x: left.x ^ right.x, z: left.z ^ right.z, negative: exponent.rem_euclid(4) == 2 }
    }

    /// Row `h` becomes `row(i) * row(h)`.
    fn rowsum(&mut self, h: usize, i: usize) {
        let product = self.multiply(self.row(i), self.row(h));
        self.set_row(h, product);
    }

    pub fn apply(&mut self, gate: CliffordGate) -> Result<()> {
        let (a, b) = gate.qubits();
        self.check_qubit(a)?;
        if let Some(b) = b {
            self.check_qubit(b)?;
            if a == b {
                return Err(Error::DuplicateQubit(a));
            }
        }
        let ma = 1u64 << a;
        match gate {
            CliffordGate::H(_) => {
                for i in 0..2 * self.num_qubits {
                    let (x, z) = (self.xs[i] & ma != 0, self.zs[i] & ma != 0);
                    self.signs[i] ^= x && z;
                    if x != z {
                        self.xs[i] ^= ma;
                        self.zs[i] ^= ma;
                    }
                }
            }
            CliffordGate::S(_) => {
                for i in 0..2 * self.num_qubits {
                    let x = self.xs[i] & ma != 0;
                    self.signs[i] ^= x && self.zs[i] & ma != 0;
                    if x {
                        self.zs[i] ^= ma;
                    }
                }
            }
            CliffordGate::Sdg(_) => {
                for i in 0..2 * self.num_qubits {
                    let x = self.xs[i] & ma != 0;
                    self.signs[i] ^= x && self.zs[i] & ma == 0;
                    if x {
                        self.zs[i] ^= ma;
                    }
                }
            }
            CliffordGate::X(_) => {
                for i in 0..2 * self.num_qubits {
                    self.signs[i] ^= self.zs[i] & ma != 0;
                }
            }
            CliffordGate::Z(_) => {
                for i in 0..2 * self.num_qubits {
                    self.signs[i] ^= self.xs[i] & ma != 0;
                }
            }
            CliffordGate::Y(_) => {
                for i in 0..2 * self.num_qubits {
                    self.signs[i] ^= (self.xs[i] & ma != 0) != (self.zs[i] & ma != 0);
                }
            }
            CliffordGate::Cnot(_, t) => {
                let mt = 1u64 << t;
                for i in 0..2 * self.num_qubits {
                    let (xa, za) = (self.xs[i] & ma != 0, self.zs[i] & ma != 0);
                    let (xb, zb) = (self.xs[i] & mt != 0, self.zs[i] & mt != 0);
                    self.signs[i] ^= xa && zb && (xb == za);
                    if xa {
                        self.xs[i] ^= mt;
                    }
                    if zb {
                        self.zs[i] ^= ma;
                    }
                }
            }
            CliffordGate::Cz(_, t) => {
                self.apply(CliffordGate::H(t))?;
                self.apply(CliffordGate::Cnot(a, t))?;
                self.apply(CliffordGate::H(t))?;
            }
        }
        Ok(())
    }

    /// Lowers and applies a general gate; non-Clifford gates are an error and
    /// leave the tableau untouched.
    pub fn apply_gate<T: Scalar>(&mut self, gate: &GateOp<T>) -> Result<()> {
        let lowered = CliffordGate::lower(gate)?;
        for &q in gate.qubits() {
            self.check_qubit(q)?;
        }
        for g in lowered {
            self.apply(g)?;
        }
        Ok(())
    }

    fn first_random_pivot(&self, q: usize) -> Option<usize> {
        let n = self.num_qubits;
        (n..2 * n).find(|&p| self.xs[p] & (1 << q) != 0)
    }

    /// Forced outcome of a deterministic Z measurement, built from the
    /// stabilizers paired with destabilizers that anticommute with `Z_q`.
    fn deterministic_outcome(&self, q: usize) -> u8 {
        let n = self.num_qubits;
        let mut scratch = Pauli::identity();
        for i in 0..n {
            if self.xs[i] & (1 << q) != 0 {
                scratch = self.multiply(self.row(i + n), scratch);
            }
        }
        u8::from(scratch.negative)
    }

    /// Probability that qubit `q` reads 1: exactly 0, 1/2 or 1.
    pub fn outcome_probability(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        if self.first_random_pivot(q).is_some() {
            return Ok(0.5);
        }
        Ok(f64::from(self.deterministic_outcome(q)))
    }

    /// Measures `Z_q`; a random outcome consumes one `bool` from `rng`.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<ZMeasurement> {
        self.measure_z_with(q, || u8::from(rng.gen::<bool>()))
    }

    /// As [`measure_z`](Self::measure_z) but the outcome of a random
    /// measurement is supplied by `choose`; deterministic outcomes ignore it.
    pub fn measure_z_with(&mut self, q: usize, choose: impl FnOnce() -> u8) -> Result<ZMeasurement> {
        self.check_qubit(q)?;
        let n = self.num_qubits;
        let Some(p) = self.first_random_pivot(q) else {
            return Ok(ZMeasurement { outcome: self.deterministic_outcome(q), deterministic: true });
        };
        for i in 0..2 * n {
            if i != p && self.xs[i] & (1 << q) != 0 {
                self.rowsum(i, p);
            }
        }
        let pivot = self.row(p);
        self.set_row(p - n, pivot);
        let outcome = choose() & 1;
        self.set_row(p, Pauli { x: 0, z: 1 << q, negative: outcome == 1 });
        Ok(ZMeasurement { outcome, deterministic: false })
    }

    /// `<P>` for a Hermitian Pauli: `+1`/`-1` if `±P` is in the stabilizer
    /// group, `0` otherwise.
    pub fn pauli_expectation(&self, p: &Pauli) -> i8 {
        let n = self.num_qubits;
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if (p.x | p.z) & !mask != 0 {
            return 0;
        }
        if (n..2 * n).any(|i| p.anticommutes(self.xs[i], self.zs[i])) {
            return 0;
        }
        let mut acc = Pauli::identity();
        for i in 0..n {
            if p.anticommutes(self.xs[i], self.zs[i]) {
                acc = self.multiply(self.row(i + n), acc);
            }
        }
        debug_assert_eq!((acc.x, acc.z), (p.x, p.z));
        if acc.negative == p.negative {
            1
        } else {
            -1
        }
    }

    /// Checks the tableau invariants: stabilizers commute pairwise,
    /// destabilizer `i` anticommutes exactly with stabilizer `i`, and all
    /// `2n` rows are independent over GF(2).
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.num_qubits;
        for i in 0..n {
            for j in 0..n {
                let s_i = self.row(n + i);
                if i < j && s_i.anticommutes(self.xs[n + j], self.zs[n + j]) {
                    return Err(format!("stabilizers {i} and {j} anticommute"));
                }
                let d_i = self.row(i);
                let anti = d_i.anticommutes(self.xs[n + j], self.zs[n + j]);
                if anti != (i == j) {
                    return Err(format!("destabilizer {i} / stabilizer {j} pairing broken"));
                }
            }
        }
        let mut rows: Vec<u128> = (0..2 * n).map(|i| self.xs[i] as u128 | ((self.zs[i] as u128) << 64)).collect();
        let mut rank = 0;
        for bit in 0..128 {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pr = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row >> bit & 1 == 1 {
                    *row ^= pr;
                }
            }
            rank += 1;
        }
        if rank != 2 * n {
            return Err(format!("rows have rank {rank}, expected {}", 2 * n));
        }
        Ok(())
    }

    /// Dense representative of the stabilized state, correct up to global phase.
    pub fn to_statevector<T: Scalar>(&self) -> Result<StateVector<T>> {
        let n = self.num_qubits;
        if n > MAX_QUBITS {
            return Err(Error::Size { size: n, min: 1, max: MAX_QUBITS });
        }
        // Walking the qubits with random outcomes forced to 0 lands on a
        // computational basis state inside the support.
        let mut probe = self.clone();
        let mut start = 0usize;
        for q in 0..n {
            let m = probe.measure_z_with(q, || 0)?;
            if m.outcome == 1 {
                start |= 1 << (n - 1 - q);
            }
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut amps = vec![zero; 1 << n];
        amps[start] = Complex::new(T::one(), T::zero());
        let half = T::lit(0.5);
        for p in self.stabilizers() {
            let image = apply_pauli(&amps, &p, n);
            amps = amps.iter().zip(&image).map(|(a, b)| (a + b) * half).collect();
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        let scale = T::one() / norm;
        StateVector::from_amplitudes(amps.into_iter().map(|a| a * scale).collect())
    }
}

/// `P |v>` on dense amplitudes, qubit 0 being the most significant index bit.
fn apply_pauli<T: Scalar>(amps: &[Complex<T>], p: &Pauli, n: usize) -> Vec<Complex<T>> {
    let to_index_mask =
        |bits: u64| -> usize { (0..n).filter(|q| bits >> q & 1 == 1).map(|q| 1usize << (n - 1 - q)).sum() };
    let (xm, zm) = (to_index_mask(p.x), to_index_mask(p.z));
    let y_count = (p.x & p.z).count_ones() as usize;
    let i_pow = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][(y_count + 2 * p.negative as usize) % 4];
    let base = Complex::new(T::lit(i_pow.0), T::lit(i_pow.1));
    let mut out = vec![Complex::new(T::zero(), T::zero()); amps.len()];
    for (b, &a) in amps.iter().enumerate() {
        let sign = if (b & zm).count_ones() % 2 == 1 { -base } else { base };
        out[b ^ xm] = sign * a;
    }
    out
}

impl fmt::Display for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num_qubits;
        for i in 0..n {
            writeln!(f, "{} | {}", self.stabilizer(i).render(n), self.destabilizer(i).render(n))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn strings(t: &StabilizerTableau) -> Vec<String> {
        t.stabilizer_strings()
    }

    #[test]
    fn init_zero_examples() {
        let t = StabilizerTableau::init_zero(1).unwrap();
        assert_eq!(strings(&t), ["+Z"]);
        assert_eq!(t.destabilizer(0).render(1), "+X");
        assert_eq!(strings(&StabilizerTableau::init_zero(2).unwrap()), ["+ZI", "+IZ"]);
        for n in 1..=10 {
            StabilizerTableau::init_zero(n).unwrap().validate().unwrap();
        }
        assert!(matches!(StabilizerTableau::init_zero(0), Err(Error::Size { .. })));
        assert!(matches!(StabilizerTableau::init_zero(65), Err(Error::Size { .. })));
        StabilizerTableau::init_zero(64).unwrap().validate().unwrap();
    }

    #[test]
    fn hadamard_and_bell_pair() {
        let mut t = StabilizerTableau::init_zero(1).unwrap();
        t.apply(CliffordGate::H(0)).unwrap();
        assert_eq!(strings(&t), ["+X"]);

        let mut t = StabilizerTableau::init_zero(2).unwrap();
        t.apply(CliffordGate::H(0)).unwrap();
        t.apply(CliffordGate::Cnot(0, 1)).unwrap();
        t.validate().unwrap();
        let xx = Pauli::parse("XX").unwrap().0;
        let zz = Pauli::parse("ZZ").unwrap().0;
        assert_eq!(t.pauli_expectation(&xx), 1);
        assert_eq!(t.pauli_expectation(&zz), 1);
        assert_eq!(t.pauli_expectation(&Pauli::parse("YY").unwrap().0), -1);
        assert_eq!(t.pauli_expectation(&Pauli::parse("ZI").unwrap().0), 0);
    }

    #[test]
    fn phase_gates_track_signs() {
        let mut t = StabilizerTableau::init_zero(1).unwrap();
        t.apply(CliffordGate::H(0)).unwrap();
        t.apply(CliffordGate::S(0)).unwrap();
        assert_eq!(strings(&t), ["+Y"]);
        t.apply(CliffordGate::S(0)).unwrap();
        assert_eq!(strings(&t), ["-X"]);
        t.apply(CliffordGate::Sdg(0)).unwrap();
        assert_eq!(strings(&t), ["+Y"]);
        t.apply(CliffordGate::Y(0)).unwrap();
        assert_eq!(strings(&t), ["+Y"]);
        t.apply(CliffordGate::Z(0)).unwrap();
        assert_eq!(strings(&t), ["-Y"]);
    }

    #[test]
    fn index_errors() {
        let mut t = StabilizerTableau::init_zero(2).unwrap();
        assert!(matches!(t.apply(CliffordGate::H(2)), Err(Error::QubitIndex { .. })));
        assert!(matches!(t.apply(CliffordGate::Cnot(1, 1)), Err(Error::DuplicateQubit(1))));
        assert!(matches!(t.outcome_probability(5), Err(Error::QubitIndex { .. })));
    }

    #[test]
    fn outcome_probability_examples() {
        let mut t = StabilizerTableau::init_zero(1).unwrap();
        assert_eq!(t.outcome_probability(0).unwrap(), 0.0);
        t.apply(CliffordGate::H(0)).unwrap();
        assert_eq!(t.outcome_probability(0).unwrap(), 0.5);
        let mut t = StabilizerTableau::init_zero(1).unwrap();
        t.apply(CliffordGate::X(0)).unwrap();
        assert_eq!(t.outcome_probability(0).unwrap(), 1.0);
    }

    #[test]
    fn measurement_examples() {
        let mut rng = seeded(3);
        let mut t = StabilizerTableau::init_zero(1).unwrap();
        let m = t.measure_z(0, &mut rng).unwrap();
        assert_eq!(m, ZMeasurement { outcome: 0, deterministic: true });

        let mut t = StabilizerTableau::init_zero(1).unwrap();
        t.apply(CliffordGate::H(0)).unwrap();
        let m = t.measure_z(0, &mut rng).unwrap();
        assert!(!m.deterministic);
        t.validate().unwrap();
        // Collapsed: a repeat measurement is deterministic and agrees.
        let again = t.measure_z(0, &mut rng).unwrap();
        assert_eq!(again, ZMeasurement { outcome: m.outcome, deterministic: true });
    }

    #[test]
    fn bell_pair_outcomes_agree() {
        for seed in 0..50 {
            let mut rng = seeded(seed);
            let mut t = StabilizerTableau::init_zero(2).unwrap();
            t.apply(CliffordGate::H(0)).unwrap();
            t.apply(CliffordGate::Cnot(0, 1)).unwrap();
            let a = t.measure_z(0, &mut rng).unwrap();
            let b = t.measure_z(1, &mut rng).unwrap();
            assert!(b.deterministic);
            assert_eq!(a.outcome, b.outcome);
            t.validate().unwrap();
        }
    }

    #[test]
    fn to_statevector_examples() {
        let t = StabilizerTableau::init_zero(2).unwrap();
        let s: StateVector<f64> = t.to_statevector().unwrap();
        assert_eq!(s.amplitudes()[0].re, 1.0);

        let mut t = StabilizerTableau::init_zero(2).unwrap();
        t.apply(CliffordGate::H(0)).unwrap();
        t.apply(CliffordGate::Cnot(0, 1)).unwrap();
        let s: StateVector<f64> = t.to_statevector().unwrap();
        assert!((s.fidelity(&StateVector::phi_plus()).unwrap() - 1.0).abs() < 1e-12);

        assert!(matches!(StabilizerTableau::init_zero(13).unwrap().to_statevector::<f64>(), Err(Error::Size { .. })));
    }

    #[test]
    fn lowering_rejects_non_clifford() {
        assert!(matches!(
            CliffordGate::lower(&GateOp::<f64>::single(GateKind::T, 0)),
            Err(Error::NonCliffordGate { .. })
        ));
        assert!(matches!(
            CliffordGate::lower(&GateOp::rotation(GateKind::Rz, 0, 0.3)),
            Err(Error::NonCliffordGate { .. })
        ));
        let lowered = CliffordGate::lower(&GateOp::rotation(GateKind::Rz, 0, -std::f64::consts::FRAC_PI_2)).unwrap();
        assert_eq!(lowered, [CliffordGate::Sdg(0)]);
    }

    #[test]
    fn quarter_turn_detection() {
        use std::f64::consts::PI;
        assert_eq!(quarter_turns(0.0), Some(0));
        assert_eq!(quarter_turns(PI / 2.0), Some(1));
        assert_eq!(quarter_turns(PI), Some(2));
        assert_eq!(quarter_turns(-PI / 2.0), Some(3));
        assert_eq!(quarter_turns(PI / 4.0), None);
        assert_eq!(quarter_turns(PI / 2.0 + 1e-9), None);
        assert_eq!(quarter_turns(f64::NAN), None);
    }

    #[test]
    fn pauli_parse_render() {
        let (p, n) = Pauli::parse("-XYZI").unwrap();
        assert_eq!(n, 4);
        assert_eq!(p.render(n), "-XYZI");
        assert!(Pauli::parse("XQ").is_none());
    }
}
