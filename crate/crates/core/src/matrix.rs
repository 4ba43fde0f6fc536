//! Dense complex square matrices: the single operator type underlying states,
//! observables, unitaries and superoperator building blocks.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Which factor of a bipartite tensor product to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Dense square complex matrix, row-major storage.
///
/// Immutable in practice: every operation returns a fresh matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must equal dim^2");
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from rows of (re, im) pairs; convenience for literal matrices.
    pub fn from_real(dim: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), dim * dim);
        Self { dim, entries: rows.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&x| x * c).collect() }
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest |Im| over all entries.
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|x| x.im.abs()).fold(0.0, f64::max)
    }

    /// ||A - A†||_F
    pub fn hermiticity_residual(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = self.get(i, j) - self.get(j, i).conj();
                s += d.norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// (A + A†)/2
    pub fn hermitize(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, (self.get(i, j) + self.get(j, i).conj()) * 0.5);
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let row = k * n;
                let orow = i * n;
                for j in 0..n {
                    out.entries[orow + j] += a * other.entries[row + j];
                }
            }
        }
        out
    }

    /// A·v for a column vector.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.entries[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// Kronecker product A ⊗ B.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let n = da * db;
        let mut out = Self::zeros(n);
        for i in 0..da {
            for j in 0..da {
                let a = self.get(i, j);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        out.set(i * db + k, j * db + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Partial trace over one factor of a dA·dB system.
    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<Self> {
        let (da, db) = dims;
        if da * db != self.dim {
            return Err(Error::DimensionMismatch { expected: da * db, actual: self.dim });
        }
        match keep {
            Subsystem::First => {
                let mut out = Self::zeros(da);
                for i in 0..da {
                    for j in 0..da {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in 0..db {
                            acc += self.get(i * db + k, j * db + k);
                        }
                        out.set(i, j, acc);
                    }
                }
                Ok(out)
            }
            Subsystem::Second => {
                let mut out = Self::zeros(db);
                for k in 0..db {
                    for l in 0..db {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for i in 0..da {
                            acc += self.get(i * db + k, i * db + l);
                        }
                        out.set(k, l, acc);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Validate density-matrix structure: Hermitian, unit trace, eigenvalues >= -tol.
    pub fn validate_density(&self, tol: f64) -> Result<()> {
        let h = self.hermiticity_residual();
        if h > tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "Hermiticity residual {h:.3e}"
            )));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let eig = crate::eigen::eigh(&self.hermitize(), tol.max(1e-10))?;
        if let Some(&min) = eig.values.last() {
            if min < -tol {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && (self - other).frobenius_norm() <= tol
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim);
        OperatorMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim);
        OperatorMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.matmul(rhs)
    }
}

/// Solve A x = b by LU with partial pivoting. A is consumed as a working copy.
pub fn solve_linear(a: &OperatorMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.dim();
    assert_eq!(b.len(), n);
    let mut m = a.entries.clone();
    let mut x: Vec<Complex64> = b.to_vec();
    for col in 0..n {
        // pivot
        let (mut pidx, mut pval) = (col, m[col * n + col].norm());
        for r in col + 1..n {
            let v = m[r * n + col].norm();
            if v > pval {
                pidx = r;
                pval = v;
            }
        }
        if pval < 1e-300 {
            return Err(Error::SingularMatrix);
        }
        if pidx != col {
            for j in 0..n {
                m.swap(col * n + j, pidx * n + j);
            }
            x.swap(col, pidx);
        }
        let inv = Complex64::new(1.0, 0.0) / m[col * n + col];
        for r in col + 1..n {
            let factor = m[r * n + col] * inv;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m[col * n + j];
                m[r * n + j] -= factor * v;
            }
            let xv = x[col];
            x[r] -= factor * xv;
        }
    }
    // back substitution
    for col in (0..n).rev() {
        let mut acc = x[col];
        for j in col + 1..n {
            acc -= m[col * n + j] * x[j];
        }
        x[col] = acc / m[col * n + col];
    }
    Ok(x)
}

/// Matrix inverse via column-by-column solves.
pub fn invert(a: &OperatorMatrix) -> Result<OperatorMatrix> {
    let n = a.dim();
    let mut out = OperatorMatrix::zeros(n);
    for j in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[j] = Complex64::new(1.0, 0.0);
        let col = solve_linear(a, &e)?;
        for i in 0..n {
            out.set(i, j, col[i]);
        }
    }
    Ok(out)
}
