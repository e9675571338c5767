//! Local hidden variable models for the two-setting, two-outcome CHSH
//! experiment.
//!
//! A hidden variable picks one of 16 deterministic strategies
//! `(a1, a2, b1, b2)` in `{+1, -1}^4`; a model is a probability distribution
//! over them. Correlation vectors `E_ij` reachable this way form the local
//! polytope, characterized by the eight CHSH inequalities together with
//! `|E_ij| <= 1`.

mod simplex;

use rand::Rng;

use crate::chsh::chsh_combination;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use simplex::feasible_point;

/// Default tolerance for [`fit_lhv`].
pub const DEFAULT_FIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    pub a1: i8,
    pub a2: i8,
    pub b1: i8,
    pub b2: i8,
}

impl DeterministicStrategy {
    /// Decodes index `0..16`; bit 3 is `a1` (slowest) through bit 0 for `b2`,
    /// a set bit meaning `-1`.
    pub fn from_index(k: usize) -> Self {
        let sign = |bit: usize| if k >> bit & 1 == 1 { -1 } else { 1 };
        Self { a1: sign(3), a2: sign(2), b1: sign(1), b2: sign(0) }
    }

    pub fn a(&self, i: usize) -> i8 {
        [self.a1, self.a2][i]
    }

    pub fn b(&self, j: usize) -> i8 {
        [self.b1, self.b2][j]
    }
}

/// All 16 strategies, `a1` varying slowest, starting from `(+1, +1, +1, +1)`.
pub fn enumerate_strategies() -> Vec<DeterministicStrategy> {
    (0..16).map(DeterministicStrategy::from_index).collect()
}

/// `a1 b1 - a1 b2 + a2 b1 + a2 b2`; always ±2.
pub fn strategy_s(s: &DeterministicStrategy) -> i32 {
    let (a1, a2, b1, b2) = (s.a1 as i32, s.a2 as i32, s.b1 as i32, s.b2 as i32);
    a1 * b1 - a1 * b2 + a2 * b1 + a2 * b2
}

pub fn classical_max_s() -> f64 {
    enumerate_strategies().iter().map(strategy_s).max().expect("16 strategies") as f64
}

pub fn classical_min_s() -> f64 {
    enumerate_strategies().iter().map(strategy_s).min().expect("16 strategies") as f64
}

/// The eight CHSH expressions `sum s_ij E_ij` over sign patterns with an odd
/// number of minus signs. Targets are local iff all are `<= 2`.
pub fn chsh_variants<T: Scalar>(e: &[[T; 2]; 2]) -> [T; 8] {
    let flat = [e[0][0], e[0][1], e[1][0], e[1][1]];
    let mut out = [T::zero(); 8];
    for (k, slot) in out.iter_mut().enumerate() {
        let minus_at = k % 4;
        let base: T = flat.iter().enumerate().map(|(idx, &v)| if idx == minus_at { -v } else { v }).sum();
        *slot = if k < 4 { base } else { -base };
    }
    out
}

/// True when the eight CHSH variants and the box constraints all hold
/// within `tol`.
pub fn is_local<T: Scalar>(e: &[[T; 2]; 2], tol: T) -> bool {
    let two = T::lit(2.0);
    e.iter().flatten().all(|v| v.abs() <= T::one() + tol) && chsh_variants(e).iter().all(|&v| v <= two + tol)
}

/// Probability distribution over the 16 deterministic strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LhvModel<T: Scalar> {
    weights: [T; 16],
}

impl<T: Scalar> LhvModel<T> {
    /// Weights must be nonnegative (entries above `-tol/100` are clamped to
    /// zero) and sum to one within the default tolerance.
    pub fn new(mut weights: [T; 16]) -> Result<Self> {
        let tol = T::default_tolerance();
        let clamp = -tol * T::lit(0.01);
        for w in weights.iter_mut() {
            if !w.is_finite() || *w < clamp {
                return Err(Error::Model(format!("invalid weight {w}")));
            }
            *w = w.max(T::zero());
        }
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > tol {
            return Err(Error::Model(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { weights })
    }

    pub fn point_mass(strategy_index: usize) -> Self {
        let mut weights = [T::zero(); 16];
        weights[strategy_index] = T::one();
        Self { weights }
    }

    pub fn uniform() -> Self {
        Self { weights: [T::lit(1.0 / 16.0); 16] }
    }

    /// Random model with exponentially distributed, normalized weights.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let raw: [f64; 16] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
        let total: f64 = raw.iter().sum();
        Self { weights: raw.map(|w| T::lit(w / total)) }
    }

    pub fn weights(&self) -> &[T; 16] {
        &self.weights
    }

    /// `E_ij = sum_k w_k a_i(k) b_j(k)`.
    pub fn correlations(&self) -> [[T; 2]; 2] {
        let mut e = [[T::zero(); 2]; 2];
        for (k, &w) in self.weights.iter().enumerate() {
            let s = DeterministicStrategy::from_index(k);
            for (i, row) in e.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = *cell + w * T::lit(f64::from(s.a(i) * s.b(j)));
                }
            }
        }
        e
    }

    pub fn s_value(&self) -> T {
        chsh_combination(self.correlations())
    }
}

pub fn model_correlations<T: Scalar>(model: &LhvModel<T>) -> [[T; 2]; 2] {
    model.correlations()
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitOutcome<T: Scalar> {
    Feasible(LhvModel<T>),
    Infeasible,
}

impl<T: Scalar> FitOutcome<T> {
    pub fn model(&self) -> Option<&LhvModel<T>> {
        match self {
            FitOutcome::Feasible(m) => Some(m),
            FitOutcome::Infeasible => None,
        }
    }
}

/// Finds an LHV model reproducing `targets` within `tol`, or reports that
/// none exists.
///
/// Feasibility is decided by [`is_local`]. Targets within `tol` of the
/// polytope are pulled onto it (box clamp, then a radial shrink) before the
/// vertex weights are solved for, so the witness is exact for the projected
/// point.
pub fn fit_lhv<T: Scalar>(targets: [[T; 2]; 2], tol: T) -> Result<FitOutcome<T>> {
    for &t in targets.iter().flatten() {
        if !t.is_finite() || t.abs() > T::one() + tol {
            return Err(Error::Input(format!("correlation {t} outside [-1, 1]")));
        }
    }
    if !is_local(&targets, tol) {
        return Ok(FitOutcome::Infeasible);
    }
    let mut point = targets.map(|row| row.map(|v| v.max(-T::one()).min(T::one())));
    let two = T::lit(2.0);
    let worst = chsh_variants(&point).iter().copied().fold(T::neg_infinity(), T::max);
    if worst > two {
        let shrink = two / worst;
        point = point.map(|row| row.map(|v| v * shrink));
    }

    let strategies = enumerate_strategies();
    let mut a: Vec<Vec<T>> = Vec::with_capacity(5);
    let mut b: Vec<T> = Vec::with_capacity(5);
    for (i, row) in point.iter().enumerate() {
        for (j, &target) in row.iter().enumerate() {
            a.push(strategies.iter().map(|s| T::lit(f64::from(s.a(i) * s.b(j)))).collect());
            b.push(target);
        }
    }
    a.push(vec![T::one(); 16]);
    b.push(T::one());

    let eps = T::epsilon();
    let weights = feasible_point(&a, &b, eps * T::lit(64.0), eps.sqrt() * T::lit(0.1))
        .ok_or_else(|| Error::Model("linear feasibility failed on a local point".into()))?;
    let total: T = weights.iter().copied().sum();
    let weights: [T; 16] = std::array::from_fn(|k| weights[k] / total);
    Ok(FitOutcome::Feasible(LhvModel::new(weights)?))
}

/// Draws a hidden strategy by weight and returns its responses to settings
/// `(i, j)` as `(a, b)`. Consumes one uniform draw.
pub fn sample_lhv<T: Scalar, R: Rng + ?Sized>(
    model: &LhvModel<T>,
    setting_pair: (usize, usize),
    rng: &mut R,
) -> Result<(i8, i8)> {
    let (i, j) = setting_pair;
    if i > 1 || j > 1 {
        return Err(Error::Input(format!("setting pair ({i}, {j}) outside {{0, 1}}^2")));
    }
    let u = rng.gen::<f64>();
    let mut acc = 0.0;
    let mut chosen = None;
    for (k, w) in model.weights.iter().enumerate() {
        let w = w.to_f64_lossy();
        if w > 0.0 {
            chosen = Some(k);
            acc += w;
            if u < acc {
                break;
            }
        }
    }
    let s = DeterministicStrategy::from_index(chosen.expect("weights sum to one"));
    Ok((s.a(i), s.b(j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn strategy_enumeration() {
        let all = enumerate_strategies();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0], DeterministicStrategy { a1: 1, a2: 1, b1: 1, b2: 1 });
        assert_eq!(all[1], DeterministicStrategy { a1: 1, a2: 1, b1: 1, b2: -1 });
        assert_eq!(all[8].a1, -1);
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 16);
    }

    #[test]
    fn strategy_s_values() {
        assert_eq!(strategy_s(&DeterministicStrategy { a1: 1, a2: 1, b1: 1, b2: 1 }), 2);
        assert_eq!(strategy_s(&DeterministicStrategy { a1: 1, a2: 1, b1: 1, b2: -1 }), 2);
        assert!(enumerate_strategies().iter().all(|s| strategy_s(s).abs() == 2));
        assert_eq!(classical_max_s(), 2.0);
        assert_eq!(classical_min_s(), -2.0);
    }

    #[test]
    fn model_validation() {
        let mut w = [0.0; 16];
        w[0] = 0.5;
        assert!(matches!(LhvModel::new(w), Err(Error::Model(_))));
        w[1] = 0.5;
        assert!(LhvModel::new(w).is_ok());
        w[2] = -0.1;
        w[1] = 0.6;
        assert!(matches!(LhvModel::new(w), Err(Error::Model(_))));
        let mut w = [0.0; 16];
        w[3] = 1.0 + 1e-13;
        w[4] = -1e-13;
        let m = LhvModel::new(w).unwrap();
        assert_eq!(m.weights()[4], 0.0);
    }

    #[test]
    fn model_correlation_examples() {
        assert_eq!(LhvModel::<f64>::point_mass(0).correlations(), [[1.0, 1.0], [1.0, 1.0]]);
        assert_eq!(LhvModel::<f64>::uniform().correlations(), [[0.0, 0.0], [0.0, 0.0]]);
    }

    #[test]
    fn chsh_variants_cover_odd_patterns() {
        let v = chsh_variants(&[[1.0, 1.0], [1.0, 1.0]]);
        // one minus sign -> 2, three minus signs -> -2
        assert_eq!(v, [2.0, 2.0, 2.0, 2.0, -2.0, -2.0, -2.0, -2.0]);
        // The second entry is exactly the E11 - E12 + E21 + E22 combination.
        let e: [[f64; 2]; 2] = [[0.1, 0.2], [0.3, 0.4]];
        assert!((chsh_variants(&e)[1] - chsh_combination(e)).abs() < 1e-15);
    }

    #[test]
    fn fit_point_mass() {
        let fit = fit_lhv([[1.0, 1.0], [1.0, 1.0]], DEFAULT_FIT_TOL).unwrap();
        let m = fit.model().unwrap();
        assert_eq!(m.weights()[0], 1.0);
        assert!(m.weights()[1..].iter().all(|&w| w == 0.0));
    }

    #[test]
    fn fit_rejects_out_of_range_input() {
        assert!(matches!(fit_lhv([[1.5, 0.0], [0.0, 0.0]], 1e-9), Err(Error::Input(_))));
        assert!(matches!(fit_lhv([[f64::NAN, 0.0], [0.0, 0.0]], 1e-9), Err(Error::Input(_))));
    }

    #[test]
    fn fit_tsirelson_point_is_infeasible() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(fit_lhv([[r, -r], [r, r]], 1e-9).unwrap(), FitOutcome::Infeasible);
    }

    #[test]
    fn zero_s_bell_point_is_still_nonlocal() {
        // psi_plus at (alpha1, alpha2, chi1, chi2) = (pi/2, 0, -pi/4, -3pi/4):
        // E = cos(alpha + chi) = (c, c, c, -c), S = 0 but E11 + E12 + E21 - E22 = 4c.
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let e = [[c, c], [c, -c]];
        let max_variant = chsh_variants(&e).iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!((max_variant - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(!is_local(&e, 1e-9));
        assert_eq!(fit_lhv(e, 1e-9).unwrap(), FitOutcome::Infeasible);
    }

    #[test]
    fn fit_boundary_point_within_tolerance() {
        // S = 2 + 5e-10 sits within tol of the facet.
        let e: [[f64; 2]; 2] = [[0.5 + 1.25e-10, -0.5 - 1.25e-10], [0.5 + 1.25e-10, 0.5 + 1.25e-10]];
        let m = fit_lhv(e, 1e-9).unwrap();
        let got = m.model().unwrap().correlations();
        for i in 0..2 {
            for j in 0..2 {
                assert!((got[i][j] - e[i][j]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn sampling_point_mass_is_deterministic() {
        let mut rng = seeded(5);
        let m = LhvModel::<f64>::point_mass(6); // (+1, -1, -1, +1)
        for _ in 0..100 {
            assert_eq!(sample_lhv(&m, (1, 0), &mut rng).unwrap(), (-1, -1));
        }
        assert!(sample_lhv(&m, (2, 0), &mut rng).is_err());
    }

    #[test]
    fn uniform_sampling_averages_to_zero() {
        let mut rng = seeded(11);
        let m = LhvModel::<f64>::uniform();
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|_| {
                let (a, b) = sample_lhv(&m, (0, 1), &mut rng).unwrap();
                f64::from(a * b)
            })
            .sum::<f64>()
            / n as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn single_precision_fit() {
        let fit = fit_lhv([[0.5f32, 0.1], [-0.2, 0.3]], 1e-5).unwrap();
        let got = fit.model().unwrap().correlations();
        assert!((got[0][0] - 0.5).abs() < 1e-5);
    }
}
