//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Dimensions in this crate stay small (at most a few thousand for the
//! brute-force bath path), where Jacobi is simple, accurate, and has
//! well-understood convergence. A real-symmetric fast path avoids complex
//! arithmetic for the bath operators, which are real.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues sorted descending; `vectors` holds the matching orthonormal
/// eigenvectors as columns, each phase-fixed so its first significant
/// component is real positive.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: OperatorMatrix,
}

impl EigenDecomposition {
    pub fn reconstruct(&self) -> OperatorMatrix {
        let n = self.values.len();
        let mut out = OperatorMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &lam) in self.values.iter().enumerate() {
                    acc += self.vectors.get(i, k) * lam * self.vectors.get(j, k).conj();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Diagonalize a Hermitian matrix. Fails if the input deviates from
/// Hermiticity by more than `herm_tol` (Frobenius).
pub fn eigh(a: &OperatorMatrix, herm_tol: f64) -> Result<EigenDecomposition> {
    let residual = a.hermiticity_residual();
    if residual > herm_tol {
        return Err(Error::NotHermitian { residual, tol: herm_tol });
    }
    let a = a.hermitize();
    let n = a.dim();
    if a.max_imag() == 0.0 {
        let re: Vec<f64> = a.entries().iter().map(|x| x.re).collect();
        let (values, vectors) = jacobi_real(n, re);
        let mut vm = OperatorMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                vm.set(i, j, Complex64::new(vectors[i * n + j], 0.0));
            }
        }
        let mut dec = EigenDecomposition { values, vectors: vm };
        sort_and_fix(&mut dec);
        return Ok(dec);
    }
    let (values, vectors) = jacobi_complex(n, a.entries().to_vec());
    let mut dec = EigenDecomposition { values, vectors: OperatorMatrix::new(n, vectors) };
    sort_and_fix(&mut dec);
    Ok(dec)
}

fn off_norm_real(n: usize, a: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

fn jacobi_real(n: usize, mut a: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = {
        let f: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if f == 0.0 {
            1.0
        } else {
            f
        }
    };
    for _ in 0..MAX_SWEEPS {
        if off_norm_real(n, &a) <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
                // rows
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = c * apj - s * aqj;
                    a[q * n + j] = s * apj + c * aqj;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    (values, v)
}

fn off_norm_complex(n: usize, a: &[Complex64]) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi_complex(n: usize, mut a: Vec<Complex64>) -> (Vec<f64>, Vec<Complex64>) {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n * n];
    for i in 0..n {
        v[i * n + i] = one;
    }
    let scale = {
        let f: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if f == 0.0 {
            1.0
        } else {
            f
        }
    };
    for _ in 0..MAX_SWEEPS {
        if off_norm_complex(n, &a) <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // phase factor making the pivot entry real positive
                let w = apq.conj() / mag;
                let tau = (a[q * n + q].re - a[p * n + p].re) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sw = w * s;
                let cw = w * c;
                // columns: A <- A R, V <- V R with R = [[c, s],[-s w, c w]]
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - sw * aiq;
                    a[i * n + q] = s * aip + cw * aiq;
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - sw * viq;
                    v[i * n + q] = s * vip + cw * viq;
                }
                // rows: A <- R† A
                let swc = sw.conj();
                let cwc = cw.conj();
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = c * apj - swc * aqj;
                    a[q * n + j] = s * apj + cwc * aqj;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i].re).collect();
    (values, v)
}

/// Descending eigenvalue order; phase convention: first component of each
/// eigenvector with significant magnitude made real positive. Makes Kraus
/// extraction deterministic.
fn sort_and_fix(dec: &mut EigenDecomposition) {
    let n = dec.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| dec.values[j].partial_cmp(&dec.values[i]).unwrap());
    let mut values = Vec::with_capacity(n);
    let mut vectors = OperatorMatrix::zeros(n);
    for (newcol, &old) in order.iter().enumerate() {
        values.push(dec.values[old]);
        let colmax = (0..n).map(|i| dec.vectors.get(i, old).norm()).fold(0.0, f64::max);
        let mut phase = Complex64::new(1.0, 0.0);
        for i in 0..n {
            let x = dec.vectors.get(i, old);
            if x.norm() > 1e-10 * colmax {
                phase = x.conj() / x.norm();
                break;
            }
        }
        for i in 0..n {
            vectors.set(i, newcol, dec.vectors.get(i, old) * phase);
        }
    }
    dec.values = values;
    dec.vectors = vectors;
}

/// f(A) = Σ f(λ_i) |v_i><v_i| for Hermitian A, with a complex-valued scalar
/// function (covers exp(-iAt) and friends).
pub fn matrix_function_complex(
    a: &OperatorMatrix,
    f: impl Fn(f64) -> Complex64,
) -> Result<OperatorMatrix> {
    let dec = eigh(a, 1e-10)?;
    let n = a.dim();
    let mut out = OperatorMatrix::zeros(n);
    let fv: Vec<Complex64> = dec.values.iter().map(|&l| f(l)).collect();
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += dec.vectors.get(i, k) * fv[k] * dec.vectors.get(j, k).conj();
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Real-valued matrix function of a Hermitian matrix.
pub fn matrix_function(a: &OperatorMatrix, f: impl Fn(f64) -> f64) -> Result<OperatorMatrix> {
    matrix_function_complex(a, |l| Complex64::new(f(l), 0.0))
}

/// exp(-i A t) for Hermitian A.
pub fn unitary_evolution(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    matrix_function_complex(h, |l| Complex64::from_polar(1.0, -l * t))
}
