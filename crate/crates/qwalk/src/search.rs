//! The end-to-end search: evolve the uniform state under the perturbed walk
//! for t_f steps, measure, and compare against the closed-form Grover
//! baseline.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::collapsed::{
    build_collapsed_unitary, collapsed_initial_state, collapsed_step, CollapsedState,
};
use crate::config::{MarkingCoin, WalkConfig};
use crate::error::{Error, Result};
use crate::full::{evolve, node_distribution, sample_measurement, uniform_state_capped};

/// Which simulator carries the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Full,
    Collapsed,
}

impl std::str::FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full" => Ok(Backend::Full),
            "collapsed" => Ok(Backend::Collapsed),
            other => Err(format!("unknown backend '{other}' (expected full|collapsed)")),
        }
    }
}

/// Result of one search run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub n: usize,
    pub target: u64,
    pub t_f: u64,
    pub p_exact: f64,
    pub p_empirical: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub backend: Backend,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<Vec<(u64, f64)>>,
}

/// Measurement time t_f = round((pi/2) sqrt(2^{n-1})), the value the
/// derivation concludes. Ties round half away from zero.
pub fn t_final(n: usize) -> u64 {
    (std::f64::consts::FRAC_PI_2 * 2f64.powf((n as f64 - 1.0) / 2.0)).round() as u64
}

/// The alternative (pi/2) sqrt(2^n) convention, exposed as a CLI override.
pub fn t_final_stated(n: usize) -> u64 {
    (std::f64::consts::FRAC_PI_2 * 2f64.powf(n as f64 / 2.0)).round() as u64
}

/// Runs the search for t_final(n) steps.
pub fn run_search(cfg: &WalkConfig, backend: Backend, trials: usize) -> Result<SearchOutcome> {
    run_search_at(cfg, backend, t_final(cfg.n), trials)
}

/// Runs the search with an explicit step count.
pub fn run_search_at(
    cfg: &WalkConfig,
    backend: Backend,
    t_f: u64,
    trials: usize,
) -> Result<SearchOutcome> {
    let (p_exact, p_empirical) = match backend {
        Backend::Full => {
            cfg.check_capacity()?;
            let mut state = uniform_state_capped(cfg.n, cfg.max_n)?;
            state = evolve(&state, cfg, t_f, true)?;
            let dist = node_distribution(&state)?;
            let p_exact = dist[cfg.target as usize];
            let p_empirical = if trials > 0 {
                let samples = sample_measurement(&state, cfg.seed, trials)?;
                let hits = samples.iter().filter(|(_, x)| *x == cfg.target).count();
                Some(hits as f64 / trials as f64)
            } else {
                None
            };
            (p_exact, p_empirical)
        }
        Backend::Collapsed => {
            // Any target maps to node 0 via the x -> x ^ target relabeling,
            // which commutes with the walk; the marked-node probability is
            // target independent.
            if cfg.marking_coin != MarkingCoin::MinusIdentity {
                return Err(Error::UnsupportedMarkingCoin);
            }
            let op = build_collapsed_unitary(cfg.n, true)?;
            let mut state = collapsed_initial_state(cfg.n)?;
            for _ in 0..t_f {
                state = collapsed_step(&state, &op)?;
            }
            let p_exact = crate::collapsed::marked_probability(&state)?;
            let p_empirical = if trials > 0 {
                Some(sample_marked_frequency(&state, cfg.seed, trials))
            } else {
                None
            };
            (p_exact, p_empirical)
        }
    };
    Ok(SearchOutcome {
        n: cfg.n,
        target: cfg.target,
        t_f,
        p_exact,
        p_empirical,
        trials,
        seed: cfg.seed,
        backend,
        curve: None,
    })
}

/// Seeded samples from the collapsed measurement distribution; returns the
/// frequency of the marked outcome |R,0>.
fn sample_marked_frequency(state: &CollapsedState, seed: u64, trials: usize) -> f64 {
    let mut cumulative = Vec::with_capacity(state.amps().len());
    let mut acc = 0.0f64;
    for z in state.amps() {
        acc += z.norm_sqr();
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng: ChaCha8Rng = rand::SeedableRng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..trials {
        let u: f64 = rng.gen::<f64>() * total;
        let idx = cumulative
            .partition_point(|&c| c <= u)
            .min(state.amps().len() - 1);
        if idx == 0 {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

/// Marked-node probability after each of t = 0..=t_max steps.
pub fn probability_curve(
    cfg: &WalkConfig,
    t_max: u64,
    backend: Backend,
) -> Result<Vec<(u64, f64)>> {
    let mut curve = Vec::with_capacity(t_max as usize + 1);
    match backend {
        Backend::Full => {
            cfg.check_capacity()?;
            let mut state = uniform_state_capped(cfg.n, cfg.max_n)?;
            for t in 0..=t_max {
                let dist = node_distribution(&state)?;
                curve.push((t, dist[cfg.target as usize]));
                if t < t_max {
                    state = evolve(&state, cfg, 1, true)?;
                }
            }
        }
        Backend::Collapsed => {
            if cfg.marking_coin != MarkingCoin::MinusIdentity {
                return Err(Error::UnsupportedMarkingCoin);
            }
            let op = build_collapsed_unitary(cfg.n, true)?;
            let mut state = collapsed_initial_state(cfg.n)?;
            for t in 0..=t_max {
                curve.push((t, crate::collapsed::marked_probability(&state)?));
                if t < t_max {
                    state = collapsed_step(&state, &op)?;
                }
            }
        }
    }
    Ok(curve)
}

/// Success probability after independent repetitions: 1 - (1 - p)^r.
pub fn amplified_success(p_single: f64, repetitions: u32) -> f64 {
    assert!((0.0..=1.0).contains(&p_single), "probability out of range");
    assert!(repetitions >= 1, "repetitions must be >= 1");
    1.0 - (1.0 - p_single).powi(repetitions as i32)
}

/// Closed-form Grover baseline on N = 2^n items: the iteration count
/// floor(pi / (4 asin(1/sqrt(N)))) and the resulting success probability
/// sin^2((2k+1) asin(1/sqrt(N))).
pub fn grover_reference(n: usize) -> Result<(u64, f64)> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    let big_n = 2f64.powi(n as i32);
    let theta = (1.0 / big_n.sqrt()).asin();
    let iterations = (std::f64::consts::PI / (4.0 * theta)).floor() as u64;
    let p = ((2 * iterations + 1) as f64 * theta).sin().powi(2);
    Ok((iterations, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_final_values() {
        assert_eq!(t_final(8), 18);
        assert_eq!(t_final(2), 2);
        assert_eq!(t_final(16), 284);
    }

    #[test]
    fn curve_starts_at_uniform_probability() {
        let cfg = WalkConfig::new(6).unwrap();
        for backend in [Backend::Full, Backend::Collapsed] {
            let curve = probability_curve(&cfg, 0, backend).unwrap();
            assert_eq!(curve.len(), 1);
            assert!((curve[0].1 - 2f64.powi(-6)).abs() < 1e-13);
        }
    }

    #[test]
    fn curve_peaks_near_t_final_n8() {
        let cfg = WalkConfig::new(8).unwrap();
        let t_f = t_final(8);
        let curve = probability_curve(&cfg, 3 * t_f, Backend::Collapsed).unwrap();
        let (t_max, p_max) = curve
            .iter()
            .copied()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert!(
            (t_max as i64 - t_f as i64).abs() <= 2,
            "peak at t={t_max}, expected near {t_f}"
        );
        assert!(p_max > 0.3);
        // periodicity: drops after the peak, then comes back up
        let after = curve[(2 * t_f) as usize].1;
        assert!(after < p_max / 2.0);
        let again = curve[(3 * t_f) as usize].1;
        assert!(again > after);
        // consistency with run_search at t = t_f
        let outcome = run_search(&cfg, Backend::Collapsed, 0).unwrap();
        assert!((curve[t_f as usize].1 - outcome.p_exact).abs() < 1e-15);
    }

    #[test]
    fn backends_agree_on_p_exact() {
        for n in [4usize, 6, 8] {
            let cfg = WalkConfig::new(n).unwrap();
            let full = run_search(&cfg, Backend::Full, 0).unwrap();
            let coll = run_search(&cfg, Backend::Collapsed, 0).unwrap();
            assert!(
                (full.p_exact - coll.p_exact).abs() < 1e-9,
                "n={n}: {} vs {}",
                full.p_exact,
                coll.p_exact
            );
        }
    }

    #[test]
    fn target_relabeling_is_exact() {
        let base = WalkConfig::new(6).unwrap();
        let moved = WalkConfig::new(6).unwrap().with_target(37).unwrap();
        let a = run_search(&base, Backend::Full, 0).unwrap();
        let b = run_search(&moved, Backend::Full, 0).unwrap();
        assert!((a.p_exact - b.p_exact).abs() < 1e-12);
    }

    #[test]
    fn full_backend_respects_capacity() {
        let cfg = WalkConfig::new(12).unwrap().with_max_n(10);
        assert!(matches!(
            run_search(&cfg, Backend::Full, 0),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn collapsed_rejects_custom_coin() {
        use num_complex::Complex64;
        let coin = MarkingCoin::Custom(vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ]);
        let cfg = WalkConfig::new(2).unwrap().with_marking_coin(coin).unwrap();
        assert!(matches!(
            run_search(&cfg, Backend::Collapsed, 0),
            Err(Error::UnsupportedMarkingCoin)
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_close() {
        let cfg = WalkConfig::new(8).unwrap().with_seed(1);
        let a = run_search(&cfg, Backend::Collapsed, 10_000).unwrap();
        let b = run_search(&cfg, Backend::Collapsed, 10_000).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let p_emp = a.p_empirical.unwrap();
        let sigma = (a.p_exact * (1.0 - a.p_exact) / 10_000.0).sqrt();
        assert!((p_emp - a.p_exact).abs() <= 4.0 * sigma);
    }

    #[test]
    fn amplification_closed_form() {
        assert_eq!(amplified_success(0.5, 1), 0.5);
        assert!((amplified_success(0.5, 7) - (1.0 - 2f64.powi(-7))).abs() < 1e-15);
        assert_eq!(amplified_success(0.0, 9), 0.0);
    }

    #[test]
    fn grover_baseline() {
        let (iters, p) = grover_reference(2).unwrap();
        assert_eq!(iters, 1);
        assert!((p - 1.0).abs() < 1e-15);

        let (iters, p) = grover_reference(8).unwrap();
        assert_eq!(iters, 12);
        let expect = ((25.0) * (1.0f64 / 16.0).asin()).sin().powi(2);
        assert!((p - expect).abs() < 1e-15);

        for n in 2..=20 {
            let (_, p) = grover_reference(n).unwrap();
            assert!(p >= 1.0 - 2f64.powi(-(n as i32)), "n={n}: p={p}");
        }
    }
}
