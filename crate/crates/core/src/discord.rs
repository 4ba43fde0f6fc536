//! Quantum discord for two-qubit states: Bell-diagonal closed form plus a
//! numerical optimizer over projective measurements on the first qubit.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{sigma_x, sigma_y, sigma_z};
use crate::channel::{choi_from_transfer, is_completely_positive};
use crate::cnot::{
    paper_kraus_residual_symbolic, pin_map_transfer, BellDiagonalState, GammaVariant,
};
use crate::eigen::eigh;
use crate::error::Result;
use crate::matrix::{OperatorMatrix, Subsystem};

/// Discord decomposition in bits. The measurement axis is reported only by
/// the numerical path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub axis: Option<[f64; 3]>,
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Von Neumann entropy in bits; small negative eigenvalues from roundoff
/// are clipped at zero.
pub fn von_neumann_entropy(rho: &OperatorMatrix) -> Result<f64> {
    let dec = eigh(rho, 1e-8)?;
    Ok(-dec.values.iter().map(|&l| xlog2x(l.max(0.0))).sum::<f64>())
}

/// Bell-diagonal closed form: I = 2 + Σ λ log₂ λ over the four eigenvalues,
/// C = Σ_± ((1±c)/2) log₂(1±c) with c = max |cᵢ|.
pub fn discord_closed_form(state: &BellDiagonalState) -> DiscordResult {
    let mutual = 2.0 + state.eigenvalues().iter().map(|&l| xlog2x(l)).sum::<f64>();
    let c = state.c1.abs().max(state.c2.abs()).max(state.c3.abs());
    let classical = xlog2x((1.0 - c) / 2.0) + xlog2x((1.0 + c) / 2.0) + 1.0;
    DiscordResult {
        mutual_information: mutual,
        classical_correlation: classical,
        discord: mutual - classical,
        axis: None,
    }
}

/// Average entropy of the second qubit conditioned on a projective
/// measurement of the first along the unit vector n.
fn conditional_entropy(rho: &OperatorMatrix, n: [f64; 3]) -> Result<f64> {
    let dir = &(&sigma_x().scale_re(n[0]) + &sigma_y().scale_re(n[1])) + &sigma_z().scale_re(n[2]);
    let i2 = OperatorMatrix::identity(2);
    let mut acc = 0.0;
    for sign in [1.0, -1.0] {
        let proj = (&i2 + &dir.scale_re(sign)).scale_re(0.5).kron(&i2);
        let sub = proj.matmul(rho);
        let p = sub.trace().re;
        if p < 1e-14 {
            continue;
        }
        let cond = sub
            .matmul(&proj)
            .partial_trace((2, 2), Subsystem::Second)?
            .scale(Complex64::new(1.0 / p, 0.0))
            .hermitize();
        acc += p * von_neumann_entropy(&cond)?;
    }
    Ok(acc)
}

fn axis(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Coordinate descent on (θ, φ) with step halving down to 1e-8.
fn refine(rho: &OperatorMatrix, mut theta: f64, mut phi: f64) -> Result<(f64, f64, f64)> {
    let mut best = conditional_entropy(rho, axis(theta, phi))?;
    let mut step = 0.1;
    while step > 1e-8 {
        let mut improved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let cand = conditional_entropy(rho, axis(theta + dt, phi + dp))?;
            if cand < best - 1e-15 {
                best = cand;
                theta += dt;
                phi += dp;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((best, theta, phi))
}

const GRID_THETA: usize = 64;
const GRID_PHI: usize = 128;
const RANDOM_STARTS: usize = 8;

/// Discord of a two-qubit state with the measurement on the first qubit:
/// coarse polar grid, then coordinate descent from the best grid point and
/// from seeded random restarts.
pub fn discord_numerical(rho: &OperatorMatrix, seed: u64) -> Result<DiscordResult> {
    assert_eq!(rho.dim(), 4, "two-qubit state required");
    rho.validate_density(1e-8)?;
    let rho_a = rho.partial_trace((2, 2), Subsystem::First)?;
    let rho_b = rho.partial_trace((2, 2), Subsystem::Second)?;
    let mutual =
        von_neumann_entropy(&rho_a)? + von_neumann_entropy(&rho_b)? - von_neumann_entropy(rho)?;
    let s_b = von_neumann_entropy(&rho_b)?;

    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..GRID_THETA {
        let theta = std::f64::consts::PI * (i as f64 + 0.5) / GRID_THETA as f64;
        for j in 0..GRID_PHI {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / GRID_PHI as f64;
            let v = conditional_entropy(rho, axis(theta, phi))?;
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }
    let mut starts = vec![(best.1, best.2)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_STARTS {
        starts.push((
            rng.gen_range(0.0..std::f64::consts::PI),
            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
        ));
    }
    let mut opt = (f64::INFINITY, 0.0, 0.0);
    for (theta, phi) in starts {
        let r = refine(rho, theta, phi)?;
        if r.0 < opt.0 {
            opt = r;
        }
    }
    let classical = s_b - opt.0;
    Ok(DiscordResult {
        mutual_information: mutual,
        classical_correlation: classical,
        discord: mutual - classical,
        axis: Some(axis(opt.1, opt.2)),
    })
}

/// One row of the CP-versus-discord report.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub t: f64,
    pub discord: f64,
    pub choi_min_eig: f64,
    pub cp_verdict: bool,
    pub paper_kraus_residual: f64,
    pub valid_state: bool,
}

/// For each correlation vector and time: closed-form discord, pin-map Choi
/// minimum eigenvalue with the CP verdict, and the published-Kraus
/// completeness residual (as printed).
pub fn cp_discord_sweep(states: &[(f64, f64, f64)], t_grid: &[f64]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(states.len() * t_grid.len());
    for &(c1, c2, c3) in states {
        let state = BellDiagonalState::new(c1, c2, c3);
        let (valid, discord) = match &state {
            Ok(s) => (true, discord_closed_form(s).discord),
            Err(_) => (false, f64::NAN),
        };
        for &t in t_grid {
            let choi = choi_from_transfer(&pin_map_transfer(c3, t))?;
            let verdict = is_completely_positive(&choi, 1e-10)?;
            rows.push(SweepRow {
                c1,
                c2,
                c3,
                t,
                discord,
                choi_min_eig: verdict.min_eigenvalue,
                cp_verdict: verdict.is_cp,
                paper_kraus_residual: paper_kraus_residual_symbolic(c3, t, GammaVariant::PrintedSin),
                valid_state: valid,
            });
        }
    }
    Ok(rows)
}
