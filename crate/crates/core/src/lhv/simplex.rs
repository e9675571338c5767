//! Phase-I simplex for small dense feasibility problems `A w = b, w >= 0`.
//!
//! Pivoting follows Bland's rule (smallest improving column, ties in the ratio
//! test broken by smallest basic index), so the returned vertex is a
//! deterministic function of the input.

use crate::scalar::Scalar;

/// A nonnegative solution of `a w = b`, or `None` when the system is
/// infeasible beyond `feas_tol`.
pub fn feasible_point<T: Scalar>(a: &[Vec<T>], b: &[T], pivot_eps: T, feas_tol: T) -> Option<Vec<T>> {
    let m = a.len();
    let nv = a.first().map_or(0, Vec::len);
    let cols = nv + m;
    let rhs = cols;

    let mut tab: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, &bi))| {
            let flip = if bi < T::zero() { -T::one() } else { T::one() };
            let mut r: Vec<T> = row.iter().map(|&v| v * flip).collect();
            r.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
            r.push(bi * flip);
            r
        })
        .collect();
    let mut basis: Vec<usize> = (nv..cols).collect();

    // Reduced costs of the phase-I objective (sum of artificials); the last
    // entry holds minus the current objective value.
    let mut cost = vec![T::zero(); cols + 1];
    for row in &tab {
        for j in 0..nv {
            cost[j] = cost[j] - row[j];
        }
        cost[rhs] = cost[rhs] - row[rhs];
    }

    while let Some(enter) = (0..cols).find(|&j| cost[j] < -pivot_eps) {
        let mut leave: Option<(usize, T)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter] > pivot_eps {
                let ratio = row[rhs] / row[enter];
                let better = match leave {
                    None => true,
                    Some((l, best)) => ratio < best || (ratio == best && basis[i] < basis[l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase I is bounded below by zero, so a pivot row always exists.
        let (r, _) = leave?;
        let pivot = tab[r][enter];
        for v in tab[r].iter_mut() {
            *v = *v / pivot;
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != r {
                let factor = row[enter];
                if factor != T::zero() {
                    for (v, &p) in row.iter_mut().zip(&pivot_row) {
                        *v = *v - factor * p;
                    }
                }
            }
        }
        let factor = cost[enter];
        for (v, &p) in cost.iter_mut().zip(&pivot_row) {
            *v = *v - factor * p;
        }
        basis[r] = enter;
    }

    if -cost[rhs] > feas_tol {
        return None;
    }
    let mut w = vec![T::zero(); nv];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nv {
            w[bv] = tab[i][rhs].max(T::zero());
        }
    }
    Some(w)
}
