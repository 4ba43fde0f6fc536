//! Channel and generator representations: transfer matrix F, Choi matrix S
//! (ladder basis), Kraus sets, and the linear changes of representation
//! between them, with CP/TP verdicts.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::basis::{bloch_expand, bloch_reconstruct, HermitianBasis, LadderBasis};
use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::matrix::{invert, solve_linear, OperatorMatrix};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real d²×d² matrix of a map in the Hermitian operator basis:
/// F_kl = tr[W_k Φ(W_l)].
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    pub dim: usize,
    pub entries: Vec<f64>, // d² x d², row-major
}

impl TransferMatrix {
    pub fn zeros(dim: usize) -> Self {
        let d2 = dim * dim;
        Self { dim, entries: vec![0.0; d2 * d2] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim * dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diagonal(dim: usize, diag: &[f64]) -> Self {
        assert_eq!(diag.len(), dim * dim);
        let mut m = Self::zeros(dim);
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn side(&self) -> usize {
        self.dim * self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.entries[k * self.side() + l]
    }

    #[inline]
    pub fn set(&mut self, k: usize, l: usize, v: f64) {
        let n = self.side();
        self.entries[k * n + l] = v;
    }

    pub fn apply_vec(&self, r: &[f64]) -> Vec<f64> {
        let n = self.side();
        assert_eq!(r.len(), n);
        (0..n)
            .map(|k| (0..n).map(|l| self.get(k, l) * r[l]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Hermitian d²×d² coefficient matrix of a map (or generator) expanded as
/// Σ_ab S_ab β_a ρ β_b† in the ladder basis.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub dim: usize,
    pub matrix: OperatorMatrix, // d² x d²
    /// Anti-Hermitian residue removed by the final symmetrization.
    pub asymmetry_residual: f64,
}

impl ChoiMatrix {
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let dec = eigh(&self.matrix, 1e-8)?;
        Ok(dec.min_value())
    }
}

/// Kraus operators with the Choi eigenvalue weights that produced them.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub operators: Vec<OperatorMatrix>,
    pub weights: Vec<f64>,
    pub truncation_tol: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct CpVerdict {
    pub is_cp: bool,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct TpVerdict {
    pub is_tp: bool,
    pub residual: f64,
}

/// The linear operator relating F_kl to S_ab:
/// T_{(kl),(ab)} = tr[W_k β_a W_l β_b†], flattened to d⁴×d⁴.
#[derive(Debug)]
pub struct CouplingTensor {
    pub dim: usize,
    pub matrix: OperatorMatrix, // d⁴ x d⁴
    pub inverse: OperatorMatrix,
    pub condition_estimate: f64,
}

fn coupling_cache() -> &'static Mutex<HashMap<usize, Arc<CouplingTensor>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CouplingTensor>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Built once per dimension and cached.
pub fn coupling_tensor(dim: usize) -> Result<Arc<CouplingTensor>> {
    if let Some(t) = coupling_cache().lock().unwrap().get(&dim) {
        return Ok(t.clone());
    }
    let (w, beta) = default_bases(dim);
    let d2 = dim * dim;
    let n = d2 * d2;
    let mut m = OperatorMatrix::zeros(n);
    for k in 0..d2 {
        for l in 0..d2 {
            let row = k * d2 + l;
            for a in 0..d2 {
                for b in 0..d2 {
                    let val = w.operators[k]
                        .matmul(&beta.operators[a])
                        .matmul(&w.operators[l])
                        .matmul(&beta.operators[b].dagger())
                        .trace();
                    m.set(row, a * d2 + b, val);
                }
            }
        }
    }
    let inverse = invert(&m)?;
    let condition_estimate = m.frobenius_norm() * inverse.frobenius_norm() / n as f64;
    let tensor = Arc::new(CouplingTensor { dim, matrix: m, inverse, condition_estimate });
    coupling_cache().lock().unwrap().insert(dim, tensor.clone());
    Ok(tensor)
}

fn default_bases(dim: usize) -> (HermitianBasis, LadderBasis) {
    assert_eq!(dim, 2, "only the qubit bases are shipped");
    (HermitianBasis::qubit(), LadderBasis::qubit())
}

/// F_kl = tr[W_k Φ(W_l)] from the images Φ(W_l).
pub fn transfer_from_map(images: &[OperatorMatrix], basis: &HermitianBasis) -> Result<TransferMatrix> {
    let d2 = basis.len();
    assert_eq!(images.len(), d2, "need d² images");
    let mut f = TransferMatrix::zeros(basis.dim);
    let mut max_imag = 0.0f64;
    for (l, img) in images.iter().enumerate() {
        for (k, w) in basis.operators.iter().enumerate() {
            let v = w.matmul(img).trace();
            max_imag = max_imag.max(v.im.abs());
            f.set(k, l, v.re);
        }
    }
    if max_imag > 1e-8 {
        return Err(Error::NotHermiticityPreserving { residual: max_imag });
    }
    Ok(f)
}

/// Φ(ρ) = Σ_k (F r)_k W_k with r_l = tr[W_l ρ].
pub fn apply_transfer(f: &TransferMatrix, rho: &OperatorMatrix, basis: &HermitianBasis) -> OperatorMatrix {
    let r = bloch_expand(rho, basis);
    let fr = f.apply_vec(&r.r);
    bloch_reconstruct(&crate::basis::BlochVector { r: fr }, basis)
}

/// Same map applied to an arbitrary (possibly non-Hermitian) operator,
/// by linearity over complex coefficients.
pub fn apply_transfer_general(
    f: &TransferMatrix,
    x: &OperatorMatrix,
    basis: &HermitianBasis,
) -> OperatorMatrix {
    let coeffs = crate::basis::complex_expand(x, basis);
    let n = f.side();
    let mut out = OperatorMatrix::zeros(basis.dim);
    for k in 0..n {
        let mut acc = c(0.0, 0.0);
        for l in 0..n {
            acc += c(f.get(k, l), 0.0) * coeffs[l];
        }
        out = &out + &basis.operators[k].scale(acc);
    }
    out
}

/// Solve Σ_ab T_{(kl),(ab)} S_ab = F_kl for S; result symmetrized.
pub fn choi_from_transfer(f: &TransferMatrix) -> Result<ChoiMatrix> {
    let t = coupling_tensor(f.dim)?;
    let d2 = f.side();
    let rhs: Vec<Complex64> = f.entries.iter().map(|&x| c(x, 0.0)).collect();
    let s_flat = solve_linear(&t.matrix, &rhs)?;
    let mut s = OperatorMatrix::zeros(d2);
    for a in 0..d2 {
        for b in 0..d2 {
            s.set(a, b, s_flat[a * d2 + b]);
        }
    }
    let asym = s.hermiticity_residual();
    Ok(ChoiMatrix { dim: f.dim, matrix: s.hermitize(), asymmetry_residual: asym })
}

/// Forward direction of the same linear relation: F_kl = Σ T_{(kl),(ab)} S_ab.
pub fn transfer_from_choi(s: &ChoiMatrix) -> Result<TransferMatrix> {
    let t = coupling_tensor(s.dim)?;
    let d2 = s.matrix.dim();
    let s_flat: Vec<Complex64> = (0..d2)
        .flat_map(|a| (0..d2).map(move |b| (a, b)))
        .map(|(a, b)| s.matrix.get(a, b))
        .collect();
    let f_flat = t.matrix.matvec(&s_flat);
    let mut f = TransferMatrix::zeros(s.dim);
    for k in 0..d2 {
        for l in 0..d2 {
            f.set(k, l, f_flat[k * d2 + l].re);
        }
    }
    Ok(f)
}

/// Eigendecompose S and build M_i = √λ_i Σ_a Π(i)_a β_a for λ_i > tol.
///
/// A negative eigenvalue below -tol is an error: taking |λ| there would
/// fabricate a CP decomposition of a non-CP map.
pub fn kraus_from_choi(s: &ChoiMatrix, tol: f64) -> Result<KrausSet> {
    let dec = eigh(&s.matrix, 1e-8)?;
    if let Some(&min) = dec.values.last() {
        if min < -tol {
            return Err(Error::NotCompletelyPositive { eigenvalue: min });
        }
    }
    let beta = default_bases(s.dim).1;
    let d2 = s.matrix.dim();
    let mut operators = Vec::new();
    let mut weights = Vec::new();
    for (i, &lam) in dec.values.iter().enumerate() {
        if lam <= tol {
            continue;
        }
        let scale = lam.sqrt();
        let mut m = OperatorMatrix::zeros(s.dim);
        for a in 0..d2 {
            m = &m + &beta.operators[a].scale(dec.vectors.get(a, i) * scale);
        }
        operators.push(m);
        weights.push(lam);
    }
    Ok(KrausSet { operators, weights, truncation_tol: tol })
}

pub fn is_completely_positive(s: &ChoiMatrix, tol: f64) -> Result<CpVerdict> {
    let min_eigenvalue = s.min_eigenvalue()?;
    Ok(CpVerdict { is_cp: min_eigenvalue >= -tol, min_eigenvalue })
}

pub fn is_trace_preserving(k: &KrausSet, tol: f64) -> TpVerdict {
    let residual = completeness_residual(&k.operators);
    TpVerdict { is_tp: residual <= tol, residual }
}

/// ||Σ M†M - I||_F
pub fn completeness_residual(operators: &[OperatorMatrix]) -> f64 {
    if operators.is_empty() {
        return f64::INFINITY;
    }
    let dim = operators[0].dim();
    let mut acc = OperatorMatrix::zeros(dim);
    for m in operators {
        acc = &acc + &m.dagger().matmul(m);
    }
    (&acc - &OperatorMatrix::identity(dim)).frobenius_norm()
}

/// Σ_i M_i ρ M_i†
pub fn apply_kraus(k: &KrausSet, rho: &OperatorMatrix) -> OperatorMatrix {
    let mut out = OperatorMatrix::zeros(rho.dim());
    for m in &k.operators {
        out = &out + &m.matmul(rho).matmul(&m.dagger());
    }
    out
}

/// Generator action Λ(ρ) = Σ_ab R_ab β_a ρ β_b†.
pub fn apply_generator(r: &ChoiMatrix, rho: &OperatorMatrix) -> OperatorMatrix {
    let beta = default_bases(r.dim).1;
    let d2 = r.matrix.dim();
    let mut out = OperatorMatrix::zeros(r.dim);
    for a in 0..d2 {
        for b in 0..d2 {
            let coeff = r.matrix.get(a, b);
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            out = &out
                + &beta.operators[a]
                    .matmul(rho)
                    .matmul(&beta.operators[b].dagger())
                    .scale(coeff);
        }
    }
    out
}

/// Standard Choi matrix Σ_ij E_ij ⊗ Φ(E_ij), built through the transfer
/// matrix on matrix units. Independent positivity cross-check for the
/// ladder-basis S.
pub fn standard_choi(f: &TransferMatrix, basis: &HermitianBasis) -> OperatorMatrix {
    let d = f.dim;
    let mut out = OperatorMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut eij = OperatorMatrix::zeros(d);
            eij.set(i, j, c(1.0, 0.0));
            let img = apply_transfer_general(f, &eij, basis);
            let mut unit = OperatorMatrix::zeros(d);
            unit.set(i, j, c(1.0, 0.0));
            out = &out + &unit.kron(&img);
        }
    }
    out
}
