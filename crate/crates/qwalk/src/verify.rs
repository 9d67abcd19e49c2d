//! Aggregated numerical verification: runs the invariant suite of every
//! module for a range of even dimensions and reports per-check pass/fail
//! with the measured slack.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::collapsed::{
    build_collapsed_unitary, collapse, collapsed_initial_state, collapsed_step, psi1_state,
};
use crate::config::WalkConfig;
use crate::error::{Error, Result};
use crate::full::{
    apply_bit_swap, evolve, step, uniform_state_capped, FullState,
};
use crate::search::{probability_curve, run_search, t_final, Backend};
use crate::spectral::{
    arc_members, eigendecompose_operator, spectral_summary, unperturbed_eigenvalue,
};

/// Success-window constant: p_exact at t_f must reach 1/2 - KAPPA/n for even
/// n >= 8 (collapsed backend). Validated by the sweep recorded in
/// tests/fixtures/caps.json.
pub const SUCCESS_KAPPA: f64 = 4.0;

/// Upper slack on the success window (p can exceed 1/2 only by rounding).
pub const SUCCESS_EPS: f64 = 1e-6;

/// Rotation-picture cap: max_t |<psi_0|state(t)> - cos(omega'_0 t)| over
/// t <= 2 t_f must stay below ROTATION_CAP * n^{3/4} / sqrt(2^n). Calibrated
/// with 2x headroom by the sweep in tests/fixtures/caps.json.
pub const ROTATION_CAP: f64 = 0.04;

/// The curve maximum sits slightly past t_f and the lag grows with the
/// period; |t_peak - t_f| must stay below max(2, PEAK_OFFSET_CAP * t_f).
/// Measured max ratio 0.057 (n = 12); fixed with 2x headroom.
pub const PEAK_OFFSET_CAP: f64 = 0.12;

/// n * (p_peak - p(t_f)) stays below this; measuring at t_f instead of the
/// true peak costs O(1/n) probability. Measured max 0.048 (n = 12).
pub const CURVE_RESIDUAL_CAP: f64 = 0.1;

/// Largest n the full-space cross checks run at inside `verify`.
const FULL_CHECK_MAX_N: usize = 12;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub n: usize,
    /// Measured quantity (deviation, count, probability...).
    pub value: f64,
    /// The bound it is compared against.
    pub bound: f64,
    pub pass: bool,
    /// Asymptotic bounds are only enforced from n = 8 up; below that they are
    /// reported but do not fail the run.
    pub enforced: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n_values: Vec<usize>,
    pub checks: Vec<CheckResult>,
    pub all_pass: bool,
}

fn check(name: &str, n: usize, value: f64, bound: f64, pass: bool, enforced: bool) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        n,
        value,
        bound,
        pass,
        enforced,
    }
}

/// Runs every check for each even n in [n_min, n_max].
pub fn verify_range(n_min: usize, n_max: usize) -> Result<VerifyReport> {
    if n_min < 4 {
        return Err(Error::InvalidDimension { n: n_min, min: 4 });
    }
    if n_min % 2 != 0 {
        return Err(Error::OddDimension { n: n_min });
    }
    if n_max % 2 != 0 {
        return Err(Error::OddDimension { n: n_max });
    }
    let mut checks = Vec::new();
    for n in (n_min..=n_max).step_by(2) {
        verify_one(n, &mut checks)?;
    }
    let all_pass = checks.iter().filter(|c| c.enforced).all(|c| c.pass);
    Ok(VerifyReport {
        n_values: (n_min..=n_max).step_by(2).collect(),
        checks,
        all_pass,
    })
}

fn verify_one(n: usize, out: &mut Vec<CheckResult>) -> Result<()> {
    let asymptotic = n >= 8;

    // fixed point <psi_0|U'|psi_0> = 1 - 1/2^{n-1}, collapsed backend
    let expect = 1.0 - 1.0 / 2f64.powi(n as i32 - 1);
    let op = build_collapsed_unitary(n, true)?;
    let psi0 = collapsed_initial_state(n)?;
    let overlap = psi0.inner(&collapsed_step(&psi0, &op)?)?;
    let dev = (overlap - Complex64::new(expect, 0.0)).norm();
    out.push(check("fixed_point_collapsed", n, dev, 1e-12, dev <= 1e-12, true));

    // same identity on the full simulator
    if n <= FULL_CHECK_MAX_N {
        let cfg = WalkConfig::new(n)?;
        let s = uniform_state_capped(n, FULL_CHECK_MAX_N)?;
        let overlap = s.inner(&step(&s, &cfg, true)?)?;
        let dev = (overlap - Complex64::new(expect, 0.0)).norm();
        out.push(check("fixed_point_full", n, dev, 1e-12, dev <= 1e-12, true));
    }

    // psi_0 / psi_1 orthonormality and the psi_1 expectation identity
    let (psi1, c) = psi1_state(n)?;
    let ortho = psi0.inner(&psi1)?.norm();
    out.push(check("psi0_psi1_orthogonal", n, ortho, 1e-12, ortho <= 1e-12, true));

    let expect1 = 1.0 - 1.0 / (2.0 * c * c * crate::binom::binomial(n as u64 - 1, n as u64 / 2));
    let val1 = psi1.inner(&collapsed_step(&psi1, &op)?)?;
    let dev1 = (val1 - Complex64::new(expect1, 0.0)).norm();
    out.push(check("psi1_expectation", n, dev1, 1e-12, dev1 <= 1e-12, true));

    // unperturbed spectrum matches the closed form
    let u = build_collapsed_unitary(n, false)?;
    let pairs = eigendecompose_operator(&u, 1e-9)?;
    let mut expected: Vec<Complex64> = Vec::new();
    for k in 0..=n {
        let (plus, minus) = unperturbed_eigenvalue(n, k)?;
        expected.push(plus);
        if k != 0 && k != n {
            expected.push(minus);
        }
    }
    let worst = pairs
        .iter()
        .map(|p| {
            expected
                .iter()
                .map(|e| (p.value - e).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0f64, f64::max);
    out.push(check("unperturbed_spectrum", n, worst, 1e-9, worst <= 1e-9, true));

    // exactly one unperturbed eigenvalue on the arc
    let arc_u = arc_members(&pairs, n);
    out.push(check(
        "arc_count_unperturbed",
        n,
        arc_u.len() as f64,
        1.0,
        arc_u.len() == 1,
        true,
    ));

    // spectral overlap and rotation-angle bounds via the summary
    let summary = spectral_summary(n, 1e-9)?;
    out.push(check(
        "arc_count_perturbed",
        n,
        summary.arc_count as f64,
        2.0,
        summary.arc_count == 2,
        true,
    ));
    out.push(check("overlap_bound_p0", n, summary.p0, summary.p0_bound, summary.p0_ok, asymptotic));
    out.push(check("overlap_bound_p1", n, summary.p1, summary.p1_bound, summary.p1_ok, asymptotic));
    out.push(check(
        "eta_near_i",
        n,
        summary.delta_abs,
        crate::spectral::ETA_DELTA_CAP,
        summary.eta_ok,
        asymptotic,
    ));
    let omega_err = (summary.omega0 - summary.omega0_predicted).abs();
    out.push(check(
        "rotation_angle_bound",
        n,
        omega_err,
        summary.omega_bound,
        summary.omega_ok,
        asymptotic,
    ));

    // commutation with bit swaps, action-wise on random states (n = 4 slice)
    if n == 4 {
        let dev = commutation_deviation(4, 20, 12345)?;
        out.push(check("commutation", n, dev, 1e-12, dev <= 1e-12, true));
    }

    // full <-> collapsed equivalence out to 2 t_f
    if n <= 8 {
        let dev = equivalence_deviation(n, 2 * t_final(n))?;
        out.push(check(
            "full_collapsed_equivalence",
            n,
            dev,
            1e-10,
            dev <= 1e-10,
            true,
        ));
    }

    // end-to-end success window and curve peak
    let cfg = WalkConfig::new(n)?;
    let outcome = run_search(&cfg, Backend::Collapsed, 0)?;
    let lo = 0.5 - SUCCESS_KAPPA / n as f64;
    let in_window = outcome.p_exact >= lo && outcome.p_exact <= 0.5 + SUCCESS_EPS;
    out.push(check("success_window", n, outcome.p_exact, lo, in_window, asymptotic));

    let t_f = t_final(n);
    let curve = probability_curve(&cfg, 3 * t_f, Backend::Collapsed)?;
    let peak_t = curve
        .iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap()
        .0;
    let offset = (peak_t as i64 - t_f as i64).abs() as f64;
    let peak_bound = (PEAK_OFFSET_CAP * t_f as f64).max(2.0);
    out.push(check(
        "curve_peak_near_t_f",
        n,
        offset,
        peak_bound,
        offset <= peak_bound,
        asymptotic,
    ));
    let p_peak = curve
        .iter()
        .map(|&(_, p)| p)
        .fold(f64::NEG_INFINITY, f64::max);
    let residual = (n as f64) * (p_peak - outcome.p_exact);
    out.push(check(
        "curve_residual",
        n,
        residual,
        CURVE_RESIDUAL_CAP,
        residual <= CURVE_RESIDUAL_CAP,
        asymptotic,
    ));

    // rotation picture: psi_0 overlap follows cos(omega'_0 t)
    if (8..=16).contains(&n) {
        let dev = rotation_deviation(n, summary.omega0)?;
        let cap = ROTATION_CAP * (n as f64).powf(0.75) / 2f64.powi(n as i32).sqrt();
        out.push(check("rotation_picture", n, dev, cap, dev <= cap, true));
    }

    Ok(())
}

/// Max per-amplitude deviation of U' P_ij vs P_ij U' on seeded random states.
pub fn commutation_deviation(n: usize, states: usize, seed: u64) -> Result<f64> {
    let cfg = WalkConfig::new(n)?;
    let mut rng: ChaCha8Rng = rand::SeedableRng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..states {
        let amps: Vec<Complex64> = (0..(n << n))
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let mut s = FullState::from_amps(n, amps)?;
        s.normalize();
        for i in 0..n {
            for j in (i + 1)..n {
                let a = step(&apply_bit_swap(&s, i, j)?, &cfg, true)?;
                let b = apply_bit_swap(&step(&s, &cfg, true)?, i, j)?;
                for (x, y) in a.amps().iter().zip(b.amps()) {
                    worst = worst.max((x - y).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Max per-amplitude deviation between the projected full evolution and the
/// collapsed evolution over t = 0..=t_max.
pub fn equivalence_deviation(n: usize, t_max: u64) -> Result<f64> {
    let cfg = WalkConfig::new(n)?;
    let op = build_collapsed_unitary(n, true)?;
    let mut full = uniform_state_capped(n, crate::config::max_n_from_env().max(n))?;
    let mut coll = collapsed_initial_state(n)?;
    let mut worst = 0.0f64;
    for t in 0..=t_max {
        let projected = collapse(&full);
        for (a, b) in projected.amps().iter().zip(coll.amps()) {
            worst = worst.max((a - b).norm());
        }
        if t < t_max {
            full = evolve(&full, &cfg, 1, true)?;
            coll = collapsed_step(&coll, &op)?;
        }
    }
    Ok(worst)
}

/// Max over t <= 2 t_f of |<psi_0|state(t)> - cos(omega'_0 t)|.
pub fn rotation_deviation(n: usize, omega0: f64) -> Result<f64> {
    let op = build_collapsed_unitary(n, true)?;
    let psi0 = collapsed_initial_state(n)?;
    let mut state = psi0.clone();
    let mut worst = 0.0f64;
    for t in 0..=(2 * t_final(n)) {
        let overlap = psi0.inner(&state)?;
        worst = worst.max((overlap.re - (omega0 * t as f64).cos()).abs());
        state = collapsed_step(&state, &op)?;
    }
    Ok(worst)
}
