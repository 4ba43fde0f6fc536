//! CNOT-type joint evolution from a Bell-diagonal two-qubit state: the
//! induced pin map on the open qubit, the published four-operator Kraus set
//! for it, and the audit of that set's completeness sum.

use num_complex::Complex64;

use crate::basis::{bloch_expand, paulis, sigma_x, sigma_y, sigma_z, HermitianBasis};
use crate::channel::{completeness_residual, KrausSet, TransferMatrix};
use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// H = σx ⊗ (I-σz)/2 + I ⊗ (I+σz)/2 on system ⊗ environment.
pub fn cnot_hamiltonian() -> OperatorMatrix {
    let i2 = OperatorMatrix::identity(2);
    let p0 = &(&i2 + &sigma_z()).scale_re(0.5); // |0><0| on the environment
    let p1 = &(&i2 - &sigma_z()).scale_re(0.5);
    &sigma_x().kron(p1) + &i2.kron(p0)
}

/// Closed form of exp(-iHt): phase e^{-it} on the environment-|0⟩ block,
/// a cos/sin rotation between |01⟩ and |11⟩.
pub fn cnot_unitary(t: f64) -> OperatorMatrix {
    let mut u = OperatorMatrix::zeros(4);
    let phase = c(t.cos(), -t.sin()); // e^{-it}
    u.set(0, 0, phase);
    u.set(2, 2, phase);
    u.set(1, 1, c(t.cos(), 0.0));
    u.set(3, 3, c(t.cos(), 0.0));
    u.set(1, 3, c(0.0, -t.sin()));
    u.set(3, 1, c(0.0, -t.sin()));
    u
}

/// Bell-diagonal two-qubit correlation vector; valid when all four
/// eigenvalues (1 ± c1 ± c2 ± c3)/4 are nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalState {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalState {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let s = Self { c1, c2, c3 };
        let min = s.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -1e-12 {
            return Err(Error::InvalidBellState { eigenvalue: min });
        }
        Ok(s)
    }

    /// The four eigenvalues of ¼(I⊗I + Σ cᵢ σᵢ⊗σᵢ), one per Bell state.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let (c1, c2, c3) = (self.c1, self.c2, self.c3);
        [
            0.25 * (1.0 + c1 - c2 + c3),
            0.25 * (1.0 - c1 + c2 + c3),
            0.25 * (1.0 + c1 + c2 - c3),
            0.25 * (1.0 - c1 - c2 - c3),
        ]
    }

    pub fn joint_state(&self) -> OperatorMatrix {
        let p = paulis();
        let mut rho = p[0].kron(&p[0]);
        for (ci, pi) in [(self.c1, &p[1]), (self.c2, &p[2]), (self.c3, &p[3])] {
            rho = &rho + &pi.kron(pi).scale_re(ci);
        }
        rho.scale_re(0.25)
    }
}

/// Reduced system state at time t; depends only on c3 (c1, c2 drop out
/// under the partial trace).
pub fn reduced_evolved(c3: f64, t: f64) -> OperatorMatrix {
    let cos2t = (2.0 * t).cos();
    let sin2t = (2.0 * t).sin();
    let mut rho = OperatorMatrix::zeros(2);
    rho.set(0, 0, c(0.25 * (2.0 + c3 * (1.0 - cos2t)), 0.0));
    rho.set(1, 1, c(0.25 * (2.0 - c3 * (1.0 - cos2t)), 0.0));
    rho.set(0, 1, c(0.0, -0.25 * c3 * sin2t));
    rho.set(1, 0, c(0.0, 0.25 * c3 * sin2t));
    rho
}

/// Transfer matrix of the pin map ρ ↦ tr(ρ)·ρ_s(t): only the first column
/// is nonzero, equal to √2 times the Bloch expansion of ρ_s(t).
pub fn pin_map_transfer(c3: f64, t: f64) -> TransferMatrix {
    let basis = HermitianBasis::qubit();
    let r = bloch_expand(&reduced_evolved(c3, t), &basis);
    let mut f = TransferMatrix::zeros(2);
    for k in 0..4 {
        f.set(k, 0, std::f64::consts::SQRT_2 * r.r[k]);
    }
    f
}

/// The three readings of the published Γ(t) in the four-operator set:
/// Γ² = 1 - c3·g(t) with g as printed (sin t) and the two nearby
/// transcription candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaVariant {
    /// g(t) = sin t, exactly as printed.
    PrintedSin,
    /// g(t) = sin² t.
    SinSquared,
    /// g(t) = sin 2t.
    SinDouble,
}

impl GammaVariant {
    pub const ALL: [GammaVariant; 3] =
        [GammaVariant::PrintedSin, GammaVariant::SinSquared, GammaVariant::SinDouble];

    pub fn label(&self) -> &'static str {
        match self {
            GammaVariant::PrintedSin => "sin_t",
            GammaVariant::SinSquared => "sin_sq_t",
            GammaVariant::SinDouble => "sin_2t",
        }
    }

    pub fn gamma_squared(&self, c3: f64, t: f64) -> f64 {
        match self {
            GammaVariant::PrintedSin => 1.0 - c3 * t.sin(),
            GammaVariant::SinSquared => 1.0 - c3 * t.sin() * t.sin(),
            GammaVariant::SinDouble => 1.0 - c3 * (2.0 * t).sin(),
        }
    }
}

/// The published four operators, built verbatim from W_a = σ_a/√2:
/// M₁,₃ = ½Γ sin t·W₀ + ½iΓ cos t·W₁ ∓ (√2/4)W₃,
/// M₂,₄ = ∓½Γ cos t·W₀ ± ½iΓ sin t·W₁ + (√2/4)W₂.
pub fn paper_kraus(c3: f64, t: f64, variant: GammaVariant) -> Result<KrausSet> {
    let g2 = variant.gamma_squared(c3, t);
    if g2 < 0.0 {
        return Err(Error::ComplexGamma { c3, t });
    }
    let gamma = g2.sqrt();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let w0 = OperatorMatrix::identity(2).scale_re(s);
    let w1 = sigma_x().scale_re(s);
    let w2 = sigma_y().scale_re(s);
    let w3 = sigma_z().scale_re(s);
    let q = std::f64::consts::SQRT_2 / 4.0;
    let (sin, cos) = (t.sin(), t.cos());
    let term = |a: f64, b: f64, extra: &OperatorMatrix, sign: f64| {
        let mut m = w0.scale_re(0.5 * gamma * a);
        m = &m + &w1.scale(c(0.0, 0.5 * gamma * b));
        &m + &extra.scale_re(sign * q)
    };
    let m1 = term(sin, cos, &w3, -1.0);
    let m3 = term(sin, cos, &w3, 1.0);
    let m2 = term(-cos, sin, &w2, 1.0);
    let m4 = term(cos, -sin, &w2, 1.0);
    Ok(KrausSet {
        operators: vec![m1, m2, m3, m4],
        weights: vec![1.0; 4],
        truncation_tol: 0.0,
    })
}

/// Frobenius norm of Σ Mᵢ†Mᵢ - I for the published set.
pub fn paper_kraus_residual(c3: f64, t: f64, variant: GammaVariant) -> Result<f64> {
    Ok(completeness_residual(&paper_kraus(c3, t, variant)?.operators))
}

/// The same residual from the term-by-term expansion of the completeness
/// sum, which collapses to (Γ²/2 + ¼)·I: residual = √2·|Γ²/2 - ¾|.
pub fn paper_kraus_residual_symbolic(c3: f64, t: f64, variant: GammaVariant) -> f64 {
    let g2 = variant.gamma_squared(c3, t);
    std::f64::consts::SQRT_2 * (0.5 * g2 - 0.75).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::HermitianBasis;
    use crate::channel::{apply_kraus, apply_transfer, choi_from_transfer};
    use crate::eigen::unitary_evolution;
    use crate::matrix::Subsystem;

    #[test]
    fn unitary_matches_exponential() {
        let h = cnot_hamiltonian();
        for t in [0.0, 0.3, 1.0, std::f64::consts::FRAC_PI_2, 2.7] {
            let closed = cnot_unitary(t);
            let exp = unitary_evolution(&h, t).unwrap();
            assert!(closed.approx_eq(&exp, 1e-12), "t={t}");
        }
    }

    #[test]
    fn unitary_is_unitary() {
        for t in [0.4, 1.9] {
            let u = cnot_unitary(t);
            assert!(u.dagger().matmul(&u).approx_eq(&OperatorMatrix::identity(4), 1e-14));
        }
    }

    #[test]
    fn half_pi_acts_as_controlled_not() {
        // at t = π/2 the environment-|1⟩ block is -i·σx on the system and the
        // environment-|0⟩ block is the phase -i: a CNOT up to phases
        let u = cnot_unitary(std::f64::consts::FRAC_PI_2);
        assert!((u.get(1, 3) - c(0.0, -1.0)).norm() < 1e-14);
        assert!((u.get(3, 1) - c(0.0, -1.0)).norm() < 1e-14);
        assert!(u.get(1, 1).norm() < 1e-14);
        assert!((u.get(0, 0) - c(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn bell_state_validation() {
        assert!(BellDiagonalState::new(0.0, 0.0, 0.0).is_ok());
        assert!(BellDiagonalState::new(1.0, -1.0, 1.0).is_ok()); // pure Bell point
        assert!(BellDiagonalState::new(-1.0, -1.0, -1.0).is_ok()); // singlet
        assert!(BellDiagonalState::new(0.4, 0.3, 0.2).is_ok());
        assert!(BellDiagonalState::new(0.9, 0.9, 0.9).is_err());
        assert!(BellDiagonalState::new(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn joint_state_is_valid_density() {
        let s = BellDiagonalState::new(0.4, 0.3, 0.2).unwrap();
        s.joint_state().validate_density(1e-12).unwrap();
        let eigs = s.eigenvalues();
        assert!((eigs.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn joint_marginals_are_maximally_mixed() {
        let s = BellDiagonalState::new(0.5, -0.2, 0.3).unwrap().joint_state();
        let half = OperatorMatrix::identity(2).scale_re(0.5);
        for keep in [Subsystem::First, Subsystem::Second] {
            assert!(s.partial_trace((2, 2), keep).unwrap().approx_eq(&half, 1e-14));
        }
    }

    fn reduced_oracle(state: &BellDiagonalState, t: f64) -> OperatorMatrix {
        let u = cnot_unitary(t);
        let evolved = u.matmul(&state.joint_state()).matmul(&u.dagger());
        evolved.partial_trace((2, 2), Subsystem::First).unwrap()
    }

    #[test]
    fn reduced_state_matches_partial_trace() {
        for (c1, c2, c3) in [(0.0, 0.0, 0.5), (0.4, 0.3, 0.2), (-0.3, 0.2, 0.4), (0.0, 0.0, 1.0)] {
            let s = BellDiagonalState::new(c1, c2, c3).unwrap();
            for t in [0.0, 0.5, 1.3, 2.9] {
                let closed = reduced_evolved(c3, t);
                assert!(closed.approx_eq(&reduced_oracle(&s, t), 1e-12), "c3={c3} t={t}");
            }
        }
    }

    #[test]
    fn reduced_state_independent_of_c1_c2() {
        let t = 1.1;
        let a = reduced_oracle(&BellDiagonalState::new(0.0, 0.0, 0.3).unwrap(), t);
        let b = reduced_oracle(&BellDiagonalState::new(0.5, -0.4, 0.3).unwrap(), t);
        assert!(a.approx_eq(&b, 1e-14));
    }

    #[test]
    fn pin_map_at_zero_time() {
        let f = pin_map_transfer(0.7, 0.0);
        let expect = {
            let mut m = TransferMatrix::zeros(2);
            m.set(0, 0, 1.0);
            m
        };
        assert!(f.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn pin_map_pins_everything() {
        let basis = HermitianBasis::qubit();
        let f = pin_map_transfer(0.6, 0.9);
        let target = reduced_evolved(0.6, 0.9);
        for rho in [
            OperatorMatrix::identity(2).scale_re(0.5),
            OperatorMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]),
            OperatorMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]),
        ] {
            assert!(apply_transfer(&f, &rho, &basis).approx_eq(&target, 1e-13));
        }
    }

    #[test]
    fn pin_map_choi_is_psd() {
        for c3 in [-1.0, -0.3, 0.0, 0.5, 1.0] {
            for t in [0.0, 0.4, 1.6, 3.0] {
                let s = choi_from_transfer(&pin_map_transfer(c3, t)).unwrap();
                assert!(s.min_eigenvalue().unwrap() >= -1e-10, "c3={c3} t={t}");
            }
        }
    }

    #[test]
    fn paper_kraus_residual_matches_symbolic() {
        for variant in GammaVariant::ALL {
            for c3 in [-0.8, 0.0, 0.3, 0.9] {
                for t in [0.1, 0.7, 1.5, 2.8] {
                    if variant.gamma_squared(c3, t) < 0.0 {
                        continue;
                    }
                    let numeric = paper_kraus_residual(c3, t, variant).unwrap();
                    let symbolic = paper_kraus_residual_symbolic(c3, t, variant);
                    assert!((numeric - symbolic).abs() < 1e-12, "{variant:?} c3={c3} t={t}");
                }
            }
        }
    }

    #[test]
    fn paper_kraus_never_resolves_identity() {
        // the completeness sum is (Γ²/2 + ¼)I, which needs Γ² = 3/2;
        // Γ² = 1 - c3·g ≤ 1 + |c3| can reach 3/2 only at |c3| ≥ ½,
        // and at c3 = 0 the residual is the constant √2/4
        let r = paper_kraus_residual(0.0, 1.0, GammaVariant::PrintedSin).unwrap();
        assert!((r - std::f64::consts::SQRT_2 / 4.0).abs() < 1e-13);
    }

    #[test]
    fn paper_kraus_rejects_complex_gamma() {
        // |c3| <= 1 keeps every variant's radicand nonnegative, so the domain
        // error needs an out-of-range correlation
        let err = paper_kraus(1.5, std::f64::consts::FRAC_PI_2, GammaVariant::PrintedSin);
        assert!(matches!(err, Err(Error::ComplexGamma { .. })));
        assert!(paper_kraus(1.0, std::f64::consts::FRAC_PI_2, GammaVariant::PrintedSin).is_ok());
    }

    #[test]
    fn paper_kraus_output_versus_pin_map() {
        // the published set is not trace preserving, so its action deviates
        // from the pin map; the deviation equals the completeness defect on I/2
        let (c3, t) = (0.5, 0.8);
        let k = paper_kraus(c3, t, GammaVariant::PrintedSin).unwrap();
        let half = OperatorMatrix::identity(2).scale_re(0.5);
        let out = apply_kraus(&k, &half);
        let pinned = reduced_evolved(c3, t);
        let dev = (&out - &pinned).frobenius_norm();
        assert!(dev > 1e-3, "published set unexpectedly reproduces the pin map");
    }
}
