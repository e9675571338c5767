//! 2x2 complex matrices: single-qubit gates, observables and density matrices.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::scalar::{cplx, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2<T: Scalar> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Scalar> Matrix2<T> {
    pub fn new(m: [[Complex<T>; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn from_f64(re: [[f64; 2]; 2], im: [[f64; 2]; 2]) -> Self {
        Self::new([
            [cplx(re[0][0], im[0][0]), cplx(re[0][1], im[0][1])],
            [cplx(re[1][0], im[1][0]), cplx(re[1][1], im[1][1])],
        ])
    }

    pub fn identity() -> Self {
        Self::from_f64([[1.0, 0.0], [0.0, 1.0]], [[0.0; 2]; 2])
    }

    pub fn pauli_x() -> Self {
        Self::from_f64([[0.0, 1.0], [1.0, 0.0]], [[0.0; 2]; 2])
    }

    pub fn pauli_y() -> Self {
        Self::from_f64([[0.0; 2]; 2], [[0.0, -1.0], [1.0, 0.0]])
    }

    pub fn pauli_z() -> Self {
        Self::from_f64([[1.0, 0.0], [0.0, -1.0]], [[0.0; 2]; 2])
    }

    /// `|v><v|` for a (not necessarily normalized) vector.
    pub fn outer(v: [Complex<T>; 2]) -> Self {
        let mut m = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = v[r] * v[c].conj();
            }
        }
        Self { m }
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        Self::new([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let m = self.m;
        Self::new([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [self.m[0][0] * v[0] + self.m[0][1] * v[1], self.m[1][0] * v[0] + self.m[1][1] * v[1]]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    pub fn hermiticity_defect(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// True when `M^2 = I` within `tol`, i.e. the eigenvalues are ±1 for a
    /// Hermitian `M`.
    pub fn is_involutory(&self, tol: T) -> bool {
        (*self * *self).max_abs_diff(&Self::identity()) <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> [T; 2] {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = self.m[0][1].norm();
        let half = T::lit(0.5);
        let mean = (a + d) * half;
        let radius = (((a - d) * half).powi(2) + b * b).sqrt();
        [mean - radius, mean + radius]
    }
}

impl<T: Scalar> Mul for Matrix2<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = self.m[r][0] * rhs.m[0][c] + self.m[r][1] * rhs.m[1][c];
            }
        }
        Self::new(out)
    }
}

impl<T: Scalar> Add for Matrix2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.m, rhs.m);
        Self::new([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl<T: Scalar> Sub for Matrix2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let (a, b) = (self.m, rhs.m);
        Self::new([[a[0][0] - b[0][0], a[0][1] - b[0][1]], [a[1][0] - b[1][0], a[1][1] - b[1][1]]])
    }
}
