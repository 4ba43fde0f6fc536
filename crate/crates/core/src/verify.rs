//! End-to-end verification checks shared by the `qcf verify` command and the
//! acceptance test target. Each check exercises a full pipeline against an
//! independent oracle and reports a pass/fail verdict with the worst residual
//! observed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{bloch_expand, paulis, HermitianBasis};
use crate::channel::{
    apply_generator, apply_kraus, choi_from_transfer, is_trace_preserving, transfer_from_map,
    TransferMatrix,
};
use crate::cnot::{
    cnot_hamiltonian, cnot_unitary, paper_kraus_residual, paper_kraus_residual_symbolic,
    pin_map_transfer, reduced_evolved, BellDiagonalState, GammaVariant,
};
use crate::discord::{discord_closed_form, discord_numerical};
use crate::eigen::unitary_evolution;
use crate::error::{Error, Result};
use crate::kernels::{
    apply_dissipator, find_poles, laplace_transfer, nz_kernel_laplace, operator_form,
    propagate_tcl, single_sector_gamma, inverse_laplace,
};
use crate::matrix::{OperatorMatrix, Subsystem};
use crate::spin_star::{
    bath_spectrum_brute, bath_spectrum_combinatorial, generator_l, joint_hamiltonian,
    reduced_state, spin_star_choi, spin_star_choi_closed, spin_star_generator_choi,
    spin_star_kraus, transfer_matrix, BathSpectrum, FFunctions, LayerConfig, Sector,
};
use crate::ToleranceConfig;

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: std::time::Duration,
}

impl CheckResult {
    fn from_residual(id: usize, name: &'static str, residual: f64, tol: f64) -> Self {
        CheckResult {
            id,
            name,
            passed: residual <= tol,
            detail: format!("max residual {residual:.3e} (tolerance {tol:.1e})"),
            elapsed: std::time::Duration::ZERO,
        }
    }

    fn error(id: usize, name: &'static str, err: impl std::fmt::Display) -> Self {
        CheckResult {
            id,
            name,
            passed: false,
            detail: format!("error: {err}"),
            elapsed: std::time::Duration::ZERO,
        }
    }
}

fn check_configs() -> Vec<LayerConfig> {
    vec![
        LayerConfig::new(&[(1, 1.0)]),
        LayerConfig::new(&[(2, 1.0)]),
        LayerConfig::new(&[(3, 0.5), (2, 1.0)]),
    ]
}

fn random_density(rng: &mut impl Rng) -> OperatorMatrix {
    let p = paulis();
    loop {
        let r: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if r.iter().map(|x| x * x).sum::<f64>() > 1.0 {
            continue;
        }
        let mut rho = p[0].scale_re(0.5);
        for (c, s) in r.iter().zip(&p[1..]) {
            rho = &rho + &s.scale_re(0.5 * c);
        }
        return rho;
    }
}

/// Channel images of the basis operators obtained purely through the
/// state-level map, by linear extension.
fn map_images(f: &FFunctions, t: f64) -> Result<Vec<OperatorMatrix>> {
    let p = paulis();
    let half = p[0].scale_re(0.5);
    let phi_i = reduced_state(f, t, &half)?.scale_re(2.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut images = vec![phi_i.scale_re(s)];
    for sig in &p[1..] {
        let mixed = (&p[0] + sig).scale_re(0.5);
        let img = &reduced_state(f, t, &mixed)?.scale_re(2.0) - &phi_i;
        images.push(img.scale_re(s));
    }
    Ok(images)
}

/// Criterion 1: the transfer matrix assembled from state-level evolution is
/// diag(1, f12, f12, f3) and the Choi matrix matches the closed diagonal.
pub fn check_channel_structure(tol: &ToleranceConfig) -> CheckResult {
    const NAME: &str = "spin-star channel structure F and S";
    let basis = HermitianBasis::qubit();
    let mut worst = 0.0f64;
    for cfg in check_configs() {
        let f = FFunctions::new(&bath_spectrum_combinatorial(&cfg));
        for i in 0..200 {
            let t = 3.0 * i as f64 / 199.0;
            let images = match map_images(&f, t) {
                Ok(v) => v,
                Err(e) => return CheckResult::error(1, NAME, e),
            };
            let built = match transfer_from_map(&images, &basis) {
                Ok(v) => v,
                Err(e) => return CheckResult::error(1, NAME, e),
            };
            worst = worst.max(built.max_abs_diff(&transfer_matrix(&f, t)));
            let choi = match spin_star_choi(&f, t) {
                Ok(v) => v,
                Err(e) => return CheckResult::error(1, NAME, e),
            };
            let diff = (&choi.matrix - &spin_star_choi_closed(&f, t)).max_abs();
            worst = worst.max(diff);
        }
    }
    CheckResult::from_residual(1, NAME, worst, tol.structural)
}

/// Criterion 2: extracted Kraus sets are trace preserving and reproduce the
/// exact dynamics on random initial states at every grid point.
pub fn check_kraus(tol: &ToleranceConfig, seed: u64) -> CheckResult {
    const NAME: &str = "Kraus extraction TP and dynamics";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<OperatorMatrix> = (0..10).map(|_| random_density(&mut rng)).collect();
    let mut worst = 0.0f64;
    let mut non_cp_points = 0usize;
    let mut first_non_cp: Option<(f64, f64)> = None;
    for cfg in check_configs() {
        let f = FFunctions::new(&bath_spectrum_combinatorial(&cfg));
        for i in 0..200 {
            let t = 3.0 * i as f64 / 199.0;
            let kraus = match spin_star_kraus(&f, t, tol.kraus_truncation) {
                Ok(k) => k,
                Err(Error::NotCompletelyPositive { eigenvalue }) => {
                    // the closed-form Choi diagonal goes negative at larger
                    // times; the first entry is (1 + 2 f12 + f3)/2 and the
                    // closed-form f3 law does not keep it nonnegative, another
                    // face of the doubled-frequency population discrepancy
                    non_cp_points += 1;
                    if first_non_cp.is_none() {
                        first_non_cp = Some((t, eigenvalue));
                    }
                    continue;
                }
                Err(e) => return CheckResult::error(2, NAME, e),
            };
            worst = worst.max(is_trace_preserving(&kraus, tol.structural).residual);
            for rho in &states {
                let via_kraus = apply_kraus(&kraus, rho);
                let exact = match reduced_state(&f, t, rho) {
                    Ok(v) => v,
                    Err(e) => return CheckResult::error(2, NAME, e),
                };
                worst = worst.max((&via_kraus - &exact).max_abs());
            }
        }
    }
    match first_non_cp {
        None => CheckResult::from_residual(2, NAME, worst, tol.structural),
        Some((t, eig)) => CheckResult {
            id: 2,
            name: NAME,
            passed: false,
            detail: format!(
                "on CP grid points the residual is {worst:.3e} ({:.1e}), but {non_cp_points} \
                 of 600 points have a negative Choi eigenvalue (first at t = {t:.4}, \
                 eigenvalue {eig:.3e}); the closed-form f3 law leaves (1 + 2 f12 + f3)/2 \
                 negative there, consistent with the doubled-frequency population finding",
                tol.structural
            ),
            elapsed: std::time::Duration::ZERO,
        },
    }
}

/// Criterion 3: combinatorial spectrum against the brute-force Kronecker
/// construction, and reduced dynamics against joint unitary + partial trace.
pub fn check_oracles(tol: &ToleranceConfig) -> CheckResult {
    const NAME: &str = "bath spectrum and joint-evolution oracles";
    let mut worst = 0.0f64;
    for cfg in [
        LayerConfig::new(&[(1, 1.0)]),
        LayerConfig::new(&[(2, 1.0)]),
        LayerConfig::new(&[(3, 0.5), (2, 1.0)]),
        LayerConfig::new(&[(4, 0.3), (3, 0.6), (2, 1.0)]),
    ] {
        let brute = match bath_spectrum_brute(&cfg) {
            Ok(s) => s,
            Err(e) => return CheckResult::error(3, NAME, e),
        };
        let fast = FFunctions::new(&bath_spectrum_combinatorial(&cfg));
        let slow = FFunctions::new(&brute);
        for i in 0..200 {
            let t = 3.0 * i as f64 / 199.0;
            let (a, b) = (fast.eval(t), slow.eval(t));
            worst = worst
                .max((a.f12 - b.f12).abs())
                .max((a.f3 - b.f3).abs());
        }
    }
    if worst > tol.reconstruction {
        return CheckResult::from_residual(3, NAME, worst, tol.reconstruction);
    }

    // joint-evolution oracle on a single-layer 5-spin bath (joint dim 64);
    // the coherence and population channels are tracked separately because
    // they behave very differently against this oracle
    let cfg = LayerConfig::new(&[(5, 0.8)]);
    let f = FFunctions::new(&bath_spectrum_combinatorial(&cfg));
    let h = match joint_hamiltonian(&cfg) {
        Ok(h) => h,
        Err(e) => return CheckResult::error(3, NAME, e),
    };
    let bath_dim = 1usize << cfg.total_spins();
    let bath_mixed = OperatorMatrix::identity(bath_dim).scale_re(1.0 / bath_dim as f64);
    let mut coh_worst = 0.0f64;
    let mut pop_worst = 0.0f64;
    for rho0 in [
        OperatorMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]),
        OperatorMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]),
        OperatorMatrix::from_real(2, &[0.7, 0.3, 0.3, 0.3]),
    ] {
        let joint0 = rho0.kron(&bath_mixed);
        for i in 1..=10 {
            let t = 2.0 * i as f64 / 10.0;
            let u = match unitary_evolution(&h, t) {
                Ok(u) => u,
                Err(e) => return CheckResult::error(3, NAME, e),
            };
            let evolved = u.matmul(&joint0).matmul(&u.dagger());
            let reduced = match evolved.partial_trace((2, bath_dim), Subsystem::First) {
                Ok(r) => r,
                Err(e) => return CheckResult::error(3, NAME, e),
            };
            let exact = match reduced_state(&f, t, &rho0) {
                Ok(v) => v,
                Err(e) => return CheckResult::error(3, NAME, e),
            };
            coh_worst = coh_worst.max((reduced.get(0, 1) - exact.get(0, 1)).norm());
            pop_worst = pop_worst.max((reduced.get(0, 0) - exact.get(0, 0)).norm());
        }
    }
    let joint_worst = coh_worst.max(pop_worst);
    let detail = format!(
        "spectrum residual {worst:.3e} (tolerance {:.1e}); joint-evolution coherence residual {coh_worst:.3e}, population residual {pop_worst:.3e} (tolerance {:.1e}); the population law disagrees with the f3 formula by a factor 2 in time, see the doubled-frequency tests",
        tol.reconstruction, tol.structural
    );
    CheckResult {
        id: 3,
        name: NAME,
        passed: joint_worst <= tol.structural,
        detail,
        elapsed: std::time::Duration::ZERO,
    }
}

/// Criterion 4: integrating the time-local generator reproduces F(t)r(0) up
/// to 0.1 before the first pole; single-sector closed-form rates match the
/// numeric Ḟ F⁻¹.
pub fn check_tcl(tol: &ToleranceConfig, seed: u64) -> CheckResult {
    const NAME: &str = "time-local generator consistency";
    let basis = HermitianBasis::qubit();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for cfg in check_configs() {
        let f = FFunctions::new(&bath_spectrum_combinatorial(&cfg));
        let poles = find_poles(&f, 0.0, 5.0, tol.pole_epsilon);
        let t_end = poles.first().map(|p| p.t - 0.1).unwrap_or(3.0);
        if t_end < 0.05 {
            continue;
        }
        let grid: Vec<f64> = (0..=40).map(|i| t_end * i as f64 / 40.0).collect();
        for _ in 0..3 {
            let rho0 = random_density(&mut rng);
            let traj = match propagate_tcl(&f, &rho0, &grid, tol.pole_epsilon) {
                Ok(v) => v,
                Err(e) => return CheckResult::error(4, NAME, e),
            };
            let r0 = bloch_expand(&rho0, &basis);
            for (t, state) in traj.times.iter().zip(&traj.states) {
                let expect = transfer_matrix(&f, *t).apply_vec(&r0.r);
                let got = bloch_expand(state, &basis);
                for (a, b) in expect.iter().zip(&got.r) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
    }
    // single-sector closed forms against numeric Ḟ F⁻¹
    let mut sector_worst = 0.0f64;
    for (l1, l2) in [(1.0, 0.25), (0.49, 0.04), (2.0, 1.0)] {
        let spec = BathSpectrum {
            total_spins: 0,
            sectors: vec![Sector { degeneracy: 1, lambda1: l1, lambda2: l2 }],
        };
        let f = FFunctions::new(&spec);
        for t in [0.05, 0.15, 0.25] {
            let l = match generator_l(&f, t, tol.pole_epsilon) {
                Ok(v) => v,
                Err(e) => return CheckResult::error(4, NAME, e),
            };
            let (g1, g2) = single_sector_gamma(l1, l2, t);
            sector_worst = sector_worst
                .max((l.get(1, 1) - g1).abs())
                .max((l.get(3, 3) - g2).abs());
        }
    }
    let passed = worst <= 1e-6 && sector_worst <= 1e-8;
    CheckResult {
        id: 4,
        name: NAME,
        passed,
        detail: format!(
            "propagation residual {worst:.3e} (tolerance 1e-6); closed-form rate residual {sector_worst:.3e} (tolerance 1e-8)"
        ),
        elapsed: std::time::Duration::ZERO,
    }
}

/// Criterion 5: closed-form Laplace transforms against quadrature, the
/// kernel-resolvent identity, and numerical inversion round trips.
pub fn check_nz(tol: &ToleranceConfig) -> CheckResult {
    const NAME: &str = "memory kernel Laplace consistency";
    let mut quad_worst = 0.0f64;
    let mut ident_worst = 0.0f64;
    let mut invert_worst = 0.0f64;
    for cfg in [LayerConfig::new(&[(1, 1.0)]), LayerConfig::new(&[(3, 0.5), (2, 1.0)])] {
        let f = FFunctions::new(&bath_spectrum_combinatorial(&cfg));
        for u in [0.5, 1.0, 2.0, 5.0] {
            let hat = match laplace_transfer(&f, u) {
                Ok(v) => v,
                Err(e) => return CheckResult::error(5, NAME, e),
            };
            // composite Simpson on [0, 40/u]
            let n = 1 << 17;
            let h = 40.0 / u / n as f64;
            let (mut q3, mut q12) = (0.0, 0.0);
            for i in 0..=n {
                let t = i as f64 * h;
                let w = if i == 0 || i == n {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                let v = f.eval(t);
                let e = (-u * t).exp();
                q3 += w * e * v.f3;
                q12 += w * e * v.f12;
            }
            q3 *= h / 3.0;
            q12 *= h / 3.0;
            quad_worst = quad_worst.max((hat.f3_hat - q3).abs()).max((hat.f12_hat - q12).abs());
            let nz = match nz_kernel_laplace(&f, u) {
                Ok(v) => v,
                Err(e) => return CheckResult::error(5, NAME, e),
            };
            ident_worst = ident_worst
                .max(((u - nz.eta_xy) * hat.f12_hat - 1.0).abs())
                .max(((u - nz.eta_z) * hat.f3_hat - 1.0).abs());
        }
        for i in 0..8 {
            let t = 0.1 + 4.9 * i as f64 / 7.0;
            let v = f.eval(t);
            let t3 = match inverse_laplace(|s| f.f3_hat(s), t, 16) {
                Ok(v) => v,
                Err(e) => return CheckResult::error(5, NAME, e),
            };
            let t12 = match inverse_laplace(|s| f.f12_hat(s), t, 16) {
                Ok(v) => v,
                Err(e) => return CheckResult::error(5, NAME, e),
            };
            invert_worst = invert_worst.max((t3 - v.f3).abs()).max((t12 - v.f12).abs());
        }
    }
    let passed = quad_worst <= 1e-8 && ident_worst <= tol.reconstruction && invert_worst <= 1e-6;
    CheckResult {
        id: 5,
        name: NAME,
        passed,
        detail: format!(
            "quadrature {quad_worst:.3e} (1e-8); resolvent identity {ident_worst:.3e} ({:.1e}); inversion {invert_worst:.3e} (1e-6)",
            tol.reconstruction
        ),
        elapsed: std::time::Duration::ZERO,
    }
}

/// Criterion 6: rate extraction round trip on random diagonal generators and
/// dissipator action against the generator Choi form.
pub fn check_operator_form(tol: &ToleranceConfig, seed: u64) -> CheckResult {
    const NAME: &str = "operator-form rate extraction";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut round_worst = 0.0f64;
    for _ in 0..100 {
        let a = rng.gen_range(-3.0..3.0);
        let b = rng.gen_range(-3.0..3.0);
        let p = TransferMatrix::diagonal(2, &[0.0, a, a, b]);
        let rates = match operator_form(&p) {
            Ok(r) => r,
            Err(e) => return CheckResult::error(6, NAME, e),
        };
        let b_back = -2.0 * rates.gamma_plus;
        let a_back = (b_back - 4.0 * rates.gamma_z) / 2.0;
        round_worst = round_worst.max((a_back - a).abs()).max((b_back - b).abs());
    }
    let mut action_worst = 0.0f64;
    let f = FFunctions::new(&bath_spectrum_combinatorial(&LayerConfig::new(&[(2, 1.0)])));
    for t in [0.1, 0.3, 0.5, 0.7] {
        let l = match generator_l(&f, t, tol.pole_epsilon) {
            Ok(v) => v,
            Err(e) => return CheckResult::error(6, NAME, e),
        };
        let r = match spin_star_generator_choi(&f, t, tol.pole_epsilon) {
            Ok(v) => v,
            Err(e) => return CheckResult::error(6, NAME, e),
        };
        let rates = match operator_form(&l) {
            Ok(v) => v,
            Err(e) => return CheckResult::error(6, NAME, e),
        };
        for _ in 0..5 {
            let rho = random_density(&mut rng);
            let via_choi = apply_generator(&r, &rho);
            let via_rates = apply_dissipator(&rates, &rho);
            action_worst = action_worst.max((&via_choi - &via_rates).max_abs());
        }
    }
    let passed = round_worst <= tol.reconstruction && action_worst <= tol.structural;
    CheckResult {
        id: 6,
        name: NAME,
        passed,
        detail: format!(
            "round trip {round_worst:.3e} ({:.1e}); dissipator action {action_worst:.3e} ({:.1e})",
            tol.reconstruction, tol.structural
        ),
        elapsed: std::time::Duration::ZERO,
    }
}

/// Criterion 7: closed-form joint unitary against the exponential, and the
/// closed-form reduced state against the partial-trace oracle with c1, c2
/// independence.
pub fn check_cnot(tol: &ToleranceConfig) -> CheckResult {
    const NAME: &str = "joint-gate case study closed forms";
    let h = cnot_hamiltonian();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let t = 3.0 * i as f64 / 49.0;
        let u_exp = match unitary_evolution(&h, t) {
            Ok(u) => u,
            Err(e) => return CheckResult::error(7, NAME, e),
        };
        worst = worst.max((&cnot_unitary(t) - &u_exp).max_abs());
    }
    for (c1, c2, c3) in [(0.0, 0.0, 0.5), (0.4, 0.3, 0.2), (-0.3, 0.2, 0.4), (0.5, -0.4, 0.1)] {
        let state = match BellDiagonalState::new(c1, c2, c3) {
            Ok(s) => s,
            Err(e) => return CheckResult::error(7, NAME, e),
        };
        for i in 0..20 {
            let t = 3.0 * i as f64 / 19.0;
            let u = cnot_unitary(t);
            let evolved = u.matmul(&state.joint_state()).matmul(&u.dagger());
            let reduced = match evolved.partial_trace((2, 2), Subsystem::First) {
                Ok(r) => r,
                Err(e) => return CheckResult::error(7, NAME, e),
            };
            // closed form ignores c1, c2; matching the oracle proves both
            worst = worst.max((&reduced_evolved(c3, t) - &reduced).max_abs());
        }
    }
    CheckResult::from_residual(7, NAME, worst, tol.reconstruction)
}

/// Criterion 8: states with strictly positive discord (optimizer-validated)
/// still admit a completely positive pin-map description at every time.
pub fn check_cp_discord(tol: &ToleranceConfig, seed: u64) -> CheckResult {
    const NAME: &str = "complete positivity with nonzero discord";
    let candidates = [(0.4, 0.3, 0.2), (0.5, -0.4, 0.3), (0.3, 0.3, 0.3)];
    let mut min_discord = f64::INFINITY;
    let mut cross_worst = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for (c1, c2, c3) in candidates {
        let state = match BellDiagonalState::new(c1, c2, c3) {
            Ok(s) => s,
            Err(e) => return CheckResult::error(8, NAME, e),
        };
        let closed = discord_closed_form(&state);
        let numeric = match discord_numerical(&state.joint_state(), seed) {
            Ok(d) => d,
            Err(e) => return CheckResult::error(8, NAME, e),
        };
        cross_worst = cross_worst.max((closed.discord - numeric.discord).abs());
        min_discord = min_discord.min(closed.discord);
        for i in 0..60 {
            let t = 3.0 * i as f64 / 59.0;
            let choi = match choi_from_transfer(&pin_map_transfer(c3, t)) {
                Ok(s) => s,
                Err(e) => return CheckResult::error(8, NAME, e),
            };
            match choi.min_eigenvalue() {
                Ok(e) => min_eig = min_eig.min(e),
                Err(e) => return CheckResult::error(8, NAME, e),
            }
        }
    }
    let passed = min_discord > 0.05 && cross_worst <= 1e-6 && min_eig >= -tol.structural;
    CheckResult {
        id: 8,
        name: NAME,
        passed,
        detail: format!(
            "min discord {min_discord:.4} bits (> 0.05); optimizer cross-check {cross_worst:.3e} (1e-6); Choi min eigenvalue {min_eig:.3e} (>= -{:.1e})",
            tol.structural
        ),
        elapsed: std::time::Duration::ZERO,
    }
}

/// Criterion 9: the published four-operator completeness residual matches
/// the term-by-term expansion on a (c3, t) grid.
pub fn check_paper_kraus_audit(tol: &ToleranceConfig) -> CheckResult {
    const NAME: &str = "published Kraus completeness audit";
    let mut worst = 0.0f64;
    let mut max_residual = 0.0f64;
    for variant in GammaVariant::ALL {
        for ic in 0..9 {
            let c3 = -1.0 + 0.25 * ic as f64;
            for it in 0..25 {
                let t = 3.0 * it as f64 / 24.0;
                if variant.gamma_squared(c3, t) < 0.0 {
                    continue;
                }
                let numeric = match paper_kraus_residual(c3, t, variant) {
                    Ok(v) => v,
                    Err(e) => return CheckResult::error(9, NAME, e),
                };
                let symbolic = paper_kraus_residual_symbolic(c3, t, variant);
                worst = worst.max((numeric - symbolic).abs());
                max_residual = max_residual.max(numeric);
            }
        }
    }
    CheckResult {
        id: 9,
        name: NAME,
        passed: worst <= tol.reconstruction,
        detail: format!(
            "oracle agreement {worst:.3e} ({:.1e}); largest completeness residual observed {max_residual:.4}",
            tol.reconstruction
        ),
        elapsed: std::time::Duration::ZERO,
    }
}

/// Run all verification checks in order, timing each one. Checks 1 and 3
/// carry runtime budgets (5 s and 60 s) that count toward the verdict.
pub fn run_all(tol: &ToleranceConfig, seed: u64) -> Vec<CheckResult> {
    let checks: Vec<Box<dyn Fn() -> CheckResult>> = vec![
        Box::new(|| check_channel_structure(tol)),
        Box::new(move || check_kraus(tol, seed)),
        Box::new(|| check_oracles(tol)),
        Box::new(move || check_tcl(tol, seed)),
        Box::new(|| check_nz(tol)),
        Box::new(move || check_operator_form(tol, seed)),
        Box::new(|| check_cnot(tol)),
        Box::new(move || check_cp_discord(tol, seed)),
        Box::new(|| check_paper_kraus_audit(tol)),
    ];
    let budgets = [
        Some(std::time::Duration::from_secs(5)),
        None,
        Some(std::time::Duration::from_secs(60)),
        None,
        None,
        None,
        None,
        None,
        None,
    ];
    checks
        .iter()
        .zip(budgets)
        .map(|(check, budget)| {
            let start = std::time::Instant::now();
            let mut result = check();
            result.elapsed = start.elapsed();
            if let Some(limit) = budget {
                if result.elapsed > limit {
                    result.passed = false;
                    result.detail = format!(
                        "{} [runtime {:.1?} exceeded budget {:.0?}]",
                        result.detail, result.elapsed, limit
                    );
                }
            }
            result
        })
        .collect()
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_fast_check_passes() {
        let tol = ToleranceConfig::default();
        let r = check_operator_form(&tol, 42);
        assert!(r.passed, "{}", r.detail);
    }

    #[test]
    fn impossible_tolerance_fails() {
        let tol = ToleranceConfig {
            reconstruction: 1e-30,
            ..ToleranceConfig::default()
        };
        let r = check_cnot(&tol);
        assert!(!r.passed);
    }
}
