//! Small dense symmetric solves used by the least-squares fits.
//!
//! The systems here are Gram matrices of at most a few dozen columns, so a
//! plain Cholesky factorization is exact enough and keeps results
//! bit-deterministic (no threaded BLAS in the way).

use crate::error::{Error, Result};

/// Dense row-major square matrix.
#[derive(Debug, Clone)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.n + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.a[r * self.n + c]
    }

    /// Add `lambda` to every diagonal entry.
    pub fn add_diagonal(&mut self, lambda: f64) {
        for i in 0..self.n {
            self.a[i * self.n + i] += lambda;
        }
    }

    /// `A x` for a vector `x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.at(r, c) * x[c]).sum())
            .collect()
    }
}

/// Solve `A x = b` for symmetric positive definite `A` by Cholesky.
///
/// A non-positive pivot means the matrix is singular (or indefinite), which
/// for the Gram systems built here happens exactly when the columns are
/// linearly dependent and no ridge term was added.
pub fn solve_spd(a: &SymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.n;
    assert_eq!(b.len(), n, "rhs length must match matrix size");
    let scale = (0..n).map(|i| a.at(i, i).abs()).fold(0.0f64, f64::max);
    let tiny = scale * 1e-14;

    // Lower-triangular factor, row-major.
    let mut l = vec![0.0f64; n * n];
    for j in 0..n {
        let mut diag = a.at(j, j);
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        if !(diag > tiny) {
            return Err(Error::SingularSystem);
        }
        let dj = diag.sqrt();
        l[j * n + j] = dj;
        for i in (j + 1)..n {
            let mut v = a.at(i, j);
            for k in 0..j {
                v -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = v / dj;
        }
    }

    // Forward then back substitution.
    let mut y = vec![0.0f64; n];
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= l[i * n + k] * y[k];
        }
        y[i] = v / l[i * n + i];
    }
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut v = y[i];
        for k in (i + 1)..n {
            v -= l[k * n + i] * x[k];
        }
        x[i] = v / l[i * n + i];
    }
    Ok(x)
}
