//! Dense complex linear algebra for the 3x3/4x4 mode-space matrices.
//!
//! Solves go through LU with partial pivoting. The matrices here are tiny,
//! so condition numbers are computed exactly from the inverse rather than
//! estimated. Eigenvalues of a complex matrix A = X + iY are obtained from
//! the real embedding [[X, -Y], [Y, X]], whose spectrum is the spectrum of
//! A together with its conjugate.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Condition threshold above which results are flagged (not rejected).
pub const CONDITION_FLAG: f64 = 1e8;

/// Solve A * X = B for X.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let lu = a.clone().lu();
    lu.solve(b).ok_or_else(|| Error::Numerical {
        message: "LU solve failed: matrix is singular to working precision".into(),
        condition: f64::INFINITY,
    })
}

/// Inverse of A via LU.
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    let lu = a.clone().lu();
    lu.try_inverse().ok_or_else(|| Error::Numerical {
        message: "matrix inverse failed: singular to working precision".into(),
        condition: f64::INFINITY,
    })
}

fn norm_1(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 1-norm condition number, computed exactly from the inverse.
pub fn condition_number(a: &CMatrix) -> f64 {
    match inverse(a) {
        Ok(inv) => norm_1(a) * norm_1(&inv),
        Err(_) => f64::INFINITY,
    }
}

/// All eigenvalues of a complex matrix, via the 2n x 2n real embedding.
///
/// The embedding returns each eigenvalue alongside its conjugate; both are
/// kept since the callers only consume real parts or symmetric sets.
pub fn eigenvalues(a: &CMatrix) -> Vec<Complex64> {
    let n = a.nrows();
    let mut real = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = a[(i, j)];
            real[(i, j)] = z.re;
            real[(i, j + n)] = -z.im;
            real[(i + n, j)] = z.im;
            real[(i + n, j + n)] = z.re;
        }
    }
    real.complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect()
}

/// Largest real part over the spectrum of `a`.
pub fn max_re_eigenvalue(a: &CMatrix) -> f64 {
    eigenvalues(a)
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Frobenius norm.
pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
