//! Dense 3x3 complex linear algebra.
//!
//! The three-mode problem never needs anything larger, so matrices are plain
//! arrays and every routine is allocation-free.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

pub type Vec3<T> = [Complex<T>; 3];

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Mat3<T: Scalar>(pub [[Complex<T>; 3]; 3]);

impl<T: Scalar> Mat3<T> {
    pub fn zeros() -> Self {
        Mat3([[Complex::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diagonal([Complex::one(); 3])
    }

    pub fn diagonal(d: Vec3<T>) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.0[row][col]
    }

    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn mul_mat(&self, rhs: &Mat3<T>) -> Mat3<T> {
        let mut out = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = (0..3).fold(Complex::zero(), |acc, k| acc + self.0[i][k] * rhs.0[k][j]);
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Mat3<T> {
        let mut out = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out.0[j][i] = self.0[i][j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex<T>) -> Mat3<T> {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|x| *x = *x * s);
        out
    }

    pub fn sub(&self, rhs: &Mat3<T>) -> Mat3<T> {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = out.0[i][j] - rhs.0[i][j];
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn determinant(&self) -> Complex<T> {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest entry magnitude, used as the scale for singularity tests.
    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |acc, x| acc.max(x.norm()))
    }

    /// Solves `self * x = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &Vec3<T>) -> Result<Vec3<T>> {
        let mut a = self.0;
        let mut b = *rhs;
        let scale = self.max_abs();
        let tiny = lit::<T>(1e-300).max(T::min_positive_value()) * scale;

        for col in 0..3 {
            let pivot_row = (col..3)
                .max_by(|&i, &j| {
                    a[i][col]
                        .norm()
                        .partial_cmp(&a[j][col].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            let pivot = a[pivot_row][col];
            if !(pivot.norm() > tiny) {
                return Err(Error::SingularParameters(format!(
                    "drift system is singular (pivot {} in column {col})",
                    pivot.norm()
                )));
            }
            if pivot_row != col {
                a.swap(pivot_row, col);
                b.swap(pivot_row, col);
            }
            for row in col + 1..3 {
                let factor = a[row][col] / a[col][col];
                if factor.is_zero() {
                    continue;
                }
                for k in col..3 {
                    let v = a[col][k];
                    a[row][k] = a[row][k] - factor * v;
                }
                let v = b[col];
                b[row] = b[row] - factor * v;
            }
        }

        let mut x = [Complex::zero(); 3];
        for row in (0..3).rev() {
            let mut acc = b[row];
            for k in row + 1..3 {
                acc = acc - a[row][k] * x[k];
            }
            x[row] = acc / a[row][row];
        }
        Ok(x)
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_mat(&self, rhs: &Mat3<T>) -> Result<Mat3<T>> {
        let mut out = Self::zeros();
        for j in 0..3 {
            let col = [rhs.0[0][j], rhs.0[1][j], rhs.0[2][j]];
            let x = self.solve(&col)?;
            for i in 0..3 {
                out.0[i][j] = x[i];
            }
        }
        Ok(out)
    }

    /// Coefficients `(c2, c1, c0)` of the monic characteristic polynomial
    /// `λ³ + c2 λ² + c1 λ + c0`.
    pub fn characteristic_polynomial(&self) -> [Complex<T>; 3] {
        let m = &self.0;
        let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2]
            - m[0][2] * m[2][0]
            + m[1][1] * m[2][2]
            - m[1][2] * m[2][1];
        [-self.trace(), minors, -self.determinant()]
    }

    /// Eigenvalues as roots of the characteristic polynomial, sorted by real part.
    pub fn eigenvalues(&self) -> [Complex<T>; 3] {
        let mut roots = cubic_roots(self.characteristic_polynomial());
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal));
        roots
    }
}

fn eval_cubic<T: Scalar>(c: &[Complex<T>; 3], z: Complex<T>) -> Complex<T> {
    ((z + c[0]) * z + c[1]) * z + c[2]
}

fn eval_cubic_derivative<T: Scalar>(c: &[Complex<T>; 3], z: Complex<T>) -> Complex<T> {
    (z * lit::<T>(3.0) + c[0] * lit::<T>(2.0)) * z + c[1]
}

/// Roots of `z³ + c2 z² + c1 z + c0` by Durand-Kerner iteration followed by
/// Newton polishing of each root.
fn cubic_roots<T: Scalar>(c: [Complex<T>; 3]) -> [Complex<T>; 3] {
    // Cauchy bound on root magnitudes.
    let radius = T::one() + c.iter().fold(T::zero(), |acc, x| acc.max(x.norm()));
    let seed = Complex::new(lit::<T>(0.4), lit::<T>(0.9));
    let mut z = [
        seed * radius,
        seed * seed * radius,
        seed * seed * seed * radius,
    ];
    let tol = T::epsilon() * radius;

    for _ in 0..500 {
        let mut shift = T::zero();
        for i in 0..3 {
            let mut denom = Complex::one();
            for j in 0..3 {
                if i != j {
                    denom = denom * (z[i] - z[j]);
                }
            }
            if denom.is_zero() {
                denom = Complex::new(T::epsilon(), T::zero());
            }
            let delta = eval_cubic(&c, z[i]) / denom;
            z[i] = z[i] - delta;
            shift = shift.max(delta.norm());
        }
        if shift <= tol {
            break;
        }
    }

    for root in z.iter_mut() {
        for _ in 0..3 {
            let d = eval_cubic_derivative(&c, *root);
            if d.norm() == T::zero() {
                break;
            }
            let step = eval_cubic(&c, *root) / d;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *root = *root - step;
        }
    }
    z
}
