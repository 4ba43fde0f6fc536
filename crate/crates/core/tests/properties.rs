//! Property-based invariants on randomly generated inputs.

use num_complex::Complex64;
use proptest::prelude::*;

use qcf_core::cnot::{
    paper_kraus_residual, paper_kraus_residual_symbolic, pin_map_transfer, BellDiagonalState,
    GammaVariant,
};
use qcf_core::discord::discord_closed_form;
use qcf_core::spin_star::{bath_spectrum_combinatorial, reduced_state, FFunctions, LayerConfig};
use qcf_core::{
    choi_from_transfer, is_completely_positive, transfer_from_choi, ChoiMatrix, OperatorMatrix,
};

fn hermitian4(seed: [f64; 16]) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(4);
    for i in 0..4 {
        m.set(i, i, Complex64::new(seed[i], 0.0));
    }
    let mut k = 4;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = Complex64::new(seed[k % 16], seed[(k + 5) % 16]);
            m.set(i, j, v);
            m.set(j, i, v.conj());
            k += 1;
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn choi_transfer_round_trip(seed in prop::array::uniform16(-2.0f64..2.0)) {
        let s = ChoiMatrix { dim: 2, matrix: hermitian4(seed), asymmetry_residual: 0.0 };
        let f = transfer_from_choi(&s).unwrap();
        let back = choi_from_transfer(&f).unwrap();
        prop_assert!((&back.matrix - &s.matrix).max_abs() < 1e-12);
    }

    #[test]
    fn f_functions_even_and_bounded(
        t in 0.0f64..6.0,
        a in 0.05f64..1.5,
        b in 0.05f64..1.5,
        n in 1usize..4,
        m in 1usize..4,
    ) {
        let f = FFunctions::new(&bath_spectrum_combinatorial(&LayerConfig::new(&[(n, a), (m, b)])));
        let plus = f.eval(t);
        let minus = f.eval(-t);
        prop_assert!((plus.f12 - minus.f12).abs() < 1e-12);
        prop_assert!((plus.f3 - minus.f3).abs() < 1e-12);
        prop_assert!(plus.f12.abs() <= 1.0 + 1e-12 && plus.f3.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn reduced_state_stays_a_state(
        t in 0.0f64..4.0,
        x in -0.57f64..0.57,
        y in -0.57f64..0.57,
        z in -0.57f64..0.57,
    ) {
        let f = FFunctions::new(&bath_spectrum_combinatorial(&LayerConfig::new(&[(2, 0.8)])));
        let rho0 = {
            let mut m = OperatorMatrix::zeros(2);
            m.set(0, 0, Complex64::new(0.5 + 0.5 * z, 0.0));
            m.set(1, 1, Complex64::new(0.5 - 0.5 * z, 0.0));
            m.set(0, 1, Complex64::new(0.5 * x, -0.5 * y));
            m.set(1, 0, Complex64::new(0.5 * x, 0.5 * y));
            m
        };
        let rho = reduced_state(&f, t, &rho0).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.hermiticity_residual() < 1e-12);
        // populations shrink toward 1/2, coherences toward 0
        prop_assert!(rho.get(0, 1).norm() <= rho0.get(0, 1).norm() + 1e-12);
    }

    #[test]
    fn bell_diagonal_discord_and_pin_map(
        c1 in -0.4f64..0.4,
        c2 in -0.4f64..0.4,
        c3 in -0.2f64..0.2,
        t in 0.0f64..3.0,
    ) {
        // |c1|+|c2|+|c3| ≤ 1 keeps every eigenvalue nonnegative
        let state = BellDiagonalState::new(c1, c2, c3).unwrap();
        let d = discord_closed_form(&state);
        prop_assert!(d.discord >= -1e-9);
        prop_assert!((d.discord - (d.mutual_information - d.classical_correlation)).abs() < 1e-12);

        let choi = choi_from_transfer(&pin_map_transfer(c3, t)).unwrap();
        let verdict = is_completely_positive(&choi, 1e-10).unwrap();
        prop_assert!(verdict.is_cp, "pin map Choi min eigenvalue {}", verdict.min_eigenvalue);
    }

    #[test]
    fn published_kraus_residual_oracle_agreement(
        c3 in -1.0f64..1.0,
        t in 0.0f64..6.0,
    ) {
        for variant in GammaVariant::ALL {
            let numeric = paper_kraus_residual(c3, t, variant).unwrap();
            let symbolic = paper_kraus_residual_symbolic(c3, t, variant);
            prop_assert!((numeric - symbolic).abs() < 1e-12);
        }
    }
}
