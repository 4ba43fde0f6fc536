//! Operator bases and Bloch-vector expansion.

use num_complex::Complex64;

use crate::matrix::OperatorMatrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn sigma_x() -> OperatorMatrix {
    OperatorMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn sigma_y() -> OperatorMatrix {
    OperatorMatrix::new(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn sigma_z() -> OperatorMatrix {
    OperatorMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

pub fn sigma_plus() -> OperatorMatrix {
    OperatorMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
}

pub fn sigma_minus() -> OperatorMatrix {
    OperatorMatrix::new(2, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

/// The four Pauli operators σ_0..σ_3 with σ_0 = I.
pub fn paulis() -> [OperatorMatrix; 4] {
    [OperatorMatrix::identity(2), sigma_x(), sigma_y(), sigma_z()]
}

/// Orthonormal basis of Hermitian operators: tr[W_a W_b] = δ_ab.
#[derive(Debug, Clone)]
pub struct HermitianBasis {
    pub dim: usize,
    pub operators: Vec<OperatorMatrix>,
}

impl HermitianBasis {
    /// Default qubit basis W_a = σ_a/√2.
    pub fn qubit() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            dim: 2,
            operators: paulis().into_iter().map(|p| p.scale_re(s)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Max deviation of the Gram matrix tr[W_a W_b] from the identity.
    pub fn gram_residual(&self) -> f64 {
        gram_residual(&self.operators, false)
    }
}

/// Orthonormal (generally non-Hermitian) operator basis: tr[β_a† β_b] = δ_ab.
#[derive(Debug, Clone)]
pub struct LadderBasis {
    pub dim: usize,
    pub operators: Vec<OperatorMatrix>,
}

impl LadderBasis {
    /// Default qubit basis {I/√2, σ₊, σ₋, σ_z/√2}.
    pub fn qubit() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            dim: 2,
            operators: vec![
                OperatorMatrix::identity(2).scale_re(s),
                sigma_plus(),
                sigma_minus(),
                sigma_z().scale_re(s),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn gram_residual(&self) -> f64 {
        gram_residual(&self.operators, true)
    }
}

fn gram_residual(ops: &[OperatorMatrix], adjoint_left: bool) -> f64 {
    let n = ops.len();
    let mut max = 0.0f64;
    for a in 0..n {
        let left = if adjoint_left { ops[a].dagger() } else { ops[a].clone() };
        for b in 0..n {
            let g = left.matmul(&ops[b]).trace();
            let expect = if a == b { 1.0 } else { 0.0 };
            max = max.max((g - c(expect, 0.0)).norm());
        }
    }
    max
}

/// Real coefficient vector r_l = tr[W_l ρ] of a Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    pub r: Vec<f64>,
}

impl BlochVector {
    pub fn zero(len: usize) -> Self {
        Self { r: vec![0.0; len] }
    }
}

/// r_l = tr[W_l ρ]; imaginary parts (zero for Hermitian ρ) are dropped.
pub fn bloch_expand(rho: &OperatorMatrix, basis: &HermitianBasis) -> BlochVector {
    BlochVector {
        r: basis.operators.iter().map(|w| w.matmul(rho).trace().re).collect(),
    }
}

/// ρ = Σ_l r_l W_l.
pub fn bloch_reconstruct(r: &BlochVector, basis: &HermitianBasis) -> OperatorMatrix {
    let mut out = OperatorMatrix::zeros(basis.dim);
    for (coeff, w) in r.r.iter().zip(&basis.operators) {
        out = &out + &w.scale_re(*coeff);
    }
    out
}

/// Complex coefficients tr[W_l X] for arbitrary (not necessarily Hermitian) X.
pub fn complex_expand(x: &OperatorMatrix, basis: &HermitianBasis) -> Vec<Complex64> {
    basis.operators.iter().map(|w| w.matmul(x).trace()).collect()
}
