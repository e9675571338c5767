//! CHSH analysis on two-qubit states.
//!
//! Side A measures `A(alpha) = |a+><a+| - |a-><a-|` with
//! `|a±> = (|0> ± e^{i alpha}|1>)/sqrt 2`; side B measures `B(chi)` built the
//! same way on `(|1> ± e^{i chi}|0>)/sqrt 2`. Both are equatorial ±1
//! observables:
//!
//! ```text
//! A(alpha) = [[0, e^{-i alpha}], [e^{i alpha}, 0]] = cos(alpha) X + sin(alpha) Y
//! B(chi)   = [[0, e^{ i chi  }], [e^{-i chi  }, 0]] = cos(chi)   X - sin(chi)   Y
//! ```
//!
//! and `S = E(a1, c1) - E(a1, c2) + E(a2, c1) + E(a2, c2)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Matrix2;
use crate::scalar::{cis, wrap_angle, Scalar};
use crate::statevector::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableSide {
    A,
    B,
}

/// A ±1-valued single-qubit observable on one side of the experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable2x2<T: Scalar> {
    pub matrix: Matrix2<T>,
    pub side: ObservableSide,
    pub angle: T,
}

fn equatorial<T: Scalar>(lower_left: num_complex::Complex<T>) -> Matrix2<T> {
    let zero = num_complex::Complex::new(T::zero(), T::zero());
    Matrix2::new([[zero, lower_left.conj()], [lower_left, zero]])
}

pub fn observable_a<T: Scalar>(alpha: T) -> Observable2x2<T> {
    let alpha = wrap_angle(alpha);
    Observable2x2 { matrix: equatorial(cis(alpha)), side: ObservableSide::A, angle: alpha }
}

pub fn observable_b<T: Scalar>(chi: T) -> Observable2x2<T> {
    let chi = wrap_angle(chi);
    Observable2x2 { matrix: equatorial(cis(-chi)), side: ObservableSide::B, angle: chi }
}

/// The four CHSH angles, each wrapped into `[-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSettings<T: Scalar> {
    pub alpha1: T,
    pub alpha2: T,
    pub chi1: T,
    pub chi2: T,
}

impl<T: Scalar> MeasurementSettings<T> {
    pub fn new(alpha1: T, alpha2: T, chi1: T, chi2: T) -> Self {
        Self { alpha1: wrap_angle(alpha1), alpha2: wrap_angle(alpha2), chi1: wrap_angle(chi1), chi2: wrap_angle(chi2) }
    }
}

/// Combines four correlations as `E11 - E12 + E21 + E22`.
pub fn chsh_combination<T: Scalar>(e: [[T; 2]; 2]) -> T {
    e[0][0] - e[0][1] + e[1][0] + e[1][1]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SFactorResult<T: Scalar> {
    pub settings: MeasurementSettings<T>,
    /// `correlations[i][j] = E(alpha_{i+1}, chi_{j+1})`.
    pub correlations: [[T; 2]; 2],
    pub s_value: T,
}

impl<T: Scalar> SFactorResult<T> {
    pub fn recombined(&self) -> T {
        chsh_combination(self.correlations)
    }
}

fn require_two_qubits<T: Scalar>(state: &StateVector<T>) -> Result<()> {
    if state.num_qubits() != 2 {
        return Err(Error::Dimension { left: 2, right: state.num_qubits() });
    }
    Ok(())
}

/// `E(alpha, chi) = <phi| A(alpha) (x) B(chi) |phi>`.
pub fn correlation<T: Scalar>(state: &StateVector<T>, alpha: T, chi: T) -> Result<T> {
    require_two_qubits(state)?;
    state.expectation(&[(0, observable_a(alpha).matrix), (1, observable_b(chi).matrix)])
}

/// Closed form `cos(alpha + chi)` of the correlation on `psi_plus`.
pub fn analytic_correlation_psi_plus<T: Scalar>(alpha: T, chi: T) -> T {
    (alpha + chi).cos()
}

pub fn s_factor<T: Scalar>(state: &StateVector<T>, settings: &MeasurementSettings<T>) -> Result<SFactorResult<T>> {
    let s = settings;
    let mut correlations = [[T::zero(); 2]; 2];
    for (i, &alpha) in [s.alpha1, s.alpha2].iter().enumerate() {
        for (j, &chi) in [s.chi1, s.chi2].iter().enumerate() {
            correlations[i][j] = correlation(state, alpha, chi)?;
        }
    }
    Ok(SFactorResult { settings: *settings, correlations, s_value: chsh_combination(correlations) })
}

/// `n` evenly spaced angles over `[-pi, pi]`, both endpoints exact.
pub fn angle_axis<T: Scalar>(n: usize) -> Vec<T> {
    let pi = T::PI();
    let last = n - 1;
    (0..n)
        .map(|i| match i {
            0 => -pi,
            i if i == last => pi,
            i => -pi + (pi + pi) * T::lit(i as f64) / T::lit(last as f64),
        })
        .collect()
}

/// S over a uniform `(alpha2, chi2)` grid with `alpha1`, `chi1` held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationGrid<T: Scalar> {
    pub alpha1: T,
    pub chi1: T,
    pub alpha2_axis: Vec<T>,
    pub chi2_axis: Vec<T>,
    /// `s_values[i][j]` at `(alpha2_axis[i], chi2_axis[j])`.
    pub s_values: Vec<Vec<T>>,
}

impl<T: Scalar> CorrelationGrid<T> {
    /// `(alpha2, chi2, S)` of the largest entry; the first in row-major order on ties.
    pub fn max_cell(&self) -> (T, T, T) {
        self.extreme_cell(|a, b| a > b)
    }

    pub fn min_cell(&self) -> (T, T, T) {
        self.extreme_cell(|a, b| a < b)
    }

    fn extreme_cell(&self, better: impl Fn(T, T) -> bool) -> (T, T, T) {
        let mut best = (self.alpha2_axis[0], self.chi2_axis[0], self.s_values[0][0]);
        for (i, row) in self.s_values.iter().enumerate() {
            for (j, &s) in row.iter().enumerate() {
                if better(s, best.2) {
                    best = (self.alpha2_axis[i], self.chi2_axis[j], s);
                }
            }
        }
        best
    }

    /// CSV with header `alpha2,chi2,S`, nine decimals per value, LF endings,
    /// rows ordered as [`cells`](Self::cells).
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(40 * self.alpha2_axis.len() * self.chi2_axis.len() + 16);
        out.push_str("alpha2,chi2,S\n");
        for (a, c, s) in self.cells() {
            for (k, v) in [a, c, s].into_iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&format_fixed(v.to_f64_lossy(), 9));
            }
            out.push('\n');
        }
        out
    }

    /// Rows of `(alpha2, chi2, S)`, row-major over alpha2 then chi2.
    pub fn cells(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.alpha2_axis
            .iter()
            .enumerate()
            .flat_map(move |(i, &a)| self.chi2_axis.iter().enumerate().map(move |(j, &c)| (a, c, self.s_values[i][j])))
    }
}

/// Fixed-point formatting that never prints a negative zero.
pub fn format_fixed(v: f64, decimals: usize) -> String {
    let text = format!("{v:.decimals$}");
    match text.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => text,
    }
}

pub fn scan_s<T: Scalar>(state: &StateVector<T>, alpha1: T, chi1: T, resolution: usize) -> Result<CorrelationGrid<T>> {
    if resolution < 2 {
        return Err(Error::Config(format!("scan resolution must be >= 2, got {resolution}")));
    }
    require_two_qubits(state)?;
    let axis = angle_axis::<T>(resolution);
    let s_values = axis
        .par_iter()
        .map(|&alpha2| {
            axis.iter()
                .map(|&chi2| {
                    let settings = MeasurementSettings::new(alpha1, alpha2, chi1, chi2);
                    s_factor(state, &settings).map(|r| r.s_value)
                })
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationGrid { alpha1, chi1, alpha2_axis: axis.clone(), chi2_axis: axis, s_values })
}

/// Grid points per free angle in the coarse stage of [`maximize_s`].
pub const DEFAULT_COARSE_POINTS: usize = 101;
/// Refinement stops once no coordinate moves farther than this in a sweep.
pub const REFINE_STEP_TOL: f64 = 1e-7;

const MAX_SWEEPS: usize = 10_000;

/// Correlation surface of a two-qubit state restricted to the equatorial
/// observables: `E(alpha, chi) = a(alpha)^T M b(chi)` with `a = (cos, sin)`,
/// `b = (cos, -sin)` and `M` the XX/XY/YX/YY block, read off the engine.
struct CorrelationTensor<T: Scalar> {
    m: [[T; 2]; 2],
}

impl<T: Scalar> CorrelationTensor<T> {
    fn of(state: &StateVector<T>) -> Result<Self> {
        let paulis = [Matrix2::pauli_x(), Matrix2::pauli_y()];
        let mut m = [[T::zero(); 2]; 2];
        for (k, pk) in paulis.iter().enumerate() {
            for (l, pl) in paulis.iter().enumerate() {
                m[k][l] = state.expectation(&[(0, *pk), (1, *pl)])?;
            }
        }
        Ok(Self { m })
    }

    fn e(&self, alpha: T, chi: T) -> T {
        let (sa, ca) = alpha.sin_cos();
        let (sc, cc) = chi.sin_cos();
        let b = [cc, -sc];
        ca * (self.m[0][0] * b[0] + self.m[0][1] * b[1]) + sa * (self.m[1][0] * b[0] + self.m[1][1] * b[1])
    }

    fn s(&self, x: &[T; 4]) -> T {
        let [a1, a2, c1, c2] = *x;
        self.e(a1, c1) - self.e(a1, c2) + self.e(a2, c1) + self.e(a2, c2)
    }
}

fn golden_section_max<T: Scalar>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> T {
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) * T::lit(0.5)
}

/// Maximizes S over the free angles: a coarse grid of
/// [`DEFAULT_COARSE_POINTS`] per axis, then coordinate-wise golden-section
/// refinement until the sweep step drops below [`REFINE_STEP_TOL`].
///
/// With `fixed = Some((alpha1, chi1))` only `alpha2` and `chi2` are free.
/// Among grid ties the lexicographically smallest `(alpha1, alpha2, chi1, chi2)`
/// seeds the refinement.
pub fn maximize_s<T: Scalar>(state: &StateVector<T>, fixed: Option<(T, T)>) -> Result<(MeasurementSettings<T>, T)> {
    maximize_s_with(state, fixed, DEFAULT_COARSE_POINTS)
}

pub fn maximize_s_with<T: Scalar>(
    state: &StateVector<T>,
    fixed: Option<(T, T)>,
    coarse_points: usize,
) -> Result<(MeasurementSettings<T>, T)> {
    require_two_qubits(state)?;
    if coarse_points < 2 {
        return Err(Error::Config("coarse grid needs at least 2 points".into()));
    }
    let tensor = CorrelationTensor::of(state)?;
    let axis = angle_axis::<T>(coarse_points);
    let n = axis.len();
    let table: Vec<Vec<T>> = axis.iter().map(|&a| axis.iter().map(|&c| tensor.e(a, c)).collect()).collect();
    let tie = T::lit(1e-12);

    // Indices (a1, a2, c1, c2) into `axis`.
    let mut best_idx = [0usize; 4];
    let mut best = T::neg_infinity();
    let free: [bool; 4];
    match fixed {
        Some((alpha1, chi1)) => {
            free = [false, true, false, true];
            let (alpha1, chi1) = (wrap_angle(alpha1), wrap_angle(chi1));
            let e11 = tensor.e(alpha1, chi1);
            for (i, &a2) in axis.iter().enumerate() {
                for (j, &c2) in axis.iter().enumerate() {
                    let s = e11 - tensor.e(alpha1, c2) + tensor.e(a2, chi1) + table[i][j];
                    if s > best + tie {
                        best = s;
                        best_idx = [0, i, 0, j];
                    }
                }
            }
        }
        None => {
            free = [true; 4];
            // For fixed (a1, a2) the chi terms separate:
            // S = [E(a1,c1) + E(a2,c1)] + [E(a2,c2) - E(a1,c2)].
            for a1 in 0..n {
                for a2 in 0..n {
                    let (mut c1_best, mut c1_val) = (0, T::neg_infinity());
                    let (mut c2_best, mut c2_val) = (0, T::neg_infinity());
                    for (c, (&e1, &e2)) in table[a1].iter().zip(&table[a2]).enumerate() {
                        let v1 = e1 + e2;
                        if v1 > c1_val + tie {
                            c1_val = v1;
                            c1_best = c;
                        }
                        let v2 = e2 - e1;
                        if v2 > c2_val + tie {
                            c2_val = v2;
                            c2_best = c;
                        }
                    }
                    let s = c1_val + c2_val;
                    if s > best + tie {
                        best = s;
                        best_idx = [a1, a2, c1_best, c2_best];
                    }
                }
            }
        }
    }

    let mut x = match fixed {
        Some((alpha1, chi1)) => [wrap_angle(alpha1), axis[best_idx[1]], wrap_angle(chi1), axis[best_idx[3]]],
        None => best_idx.map(|i| axis[i]),
    };
    let step = (T::PI() + T::PI()) / T::lit((n - 1) as f64);
    let step_tol = T::lit(REFINE_STEP_TOL);
    let search_tol = T::lit(1e-10).max(T::epsilon().sqrt() * T::lit(0.1));
    for _ in 0..MAX_SWEEPS {
        let mut moved = T::zero();
        for k in (0..4).filter(|&k| free[k]) {
            let old = x[k];
            let f = |v: T| {
                let mut y = x;
                y[k] = v;
                tensor.s(&y)
            };
            let candidate = golden_section_max(f, old - step, old + step, search_tol);
            if f(candidate) > f(old) {
                x[k] = candidate;
                moved = moved.max((candidate - old).abs());
            }
        }
        if moved < step_tol {
            break;
        }
    }
    let settings = MeasurementSettings::new(x[0], x[1], x[2], x[3]);
    let s_star = s_factor(state, &settings)?.s_value;
    Ok((settings, s_star))
}
