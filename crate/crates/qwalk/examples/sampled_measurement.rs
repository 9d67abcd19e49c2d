//! Deterministic measurement sampling: same seed, same counts, every run.

use qwalk::full::{evolve, node_distribution, sample_measurement, uniform_state};
use qwalk::search::t_final;
use qwalk::WalkConfig;

fn main() -> Result<(), qwalk::Error> {
    let n = 8;
    let trials = 100_000u64;
    let cfg = WalkConfig::new(n)?.with_seed(1234);
    let state = evolve(&uniform_state(n)?, &cfg, t_final(n), true)?;
    let dist = node_distribution(&state)?;
    let samples = sample_measurement(&state, cfg.seed, trials as usize)?;
    let mut counts = vec![0u64; 1 << n];
    for (_, node) in &samples {
        counts[*node as usize] += 1;
    }

    println!("{:>5} {:>12} {:>12} {:>9}", "node", "p_exact", "p_sampled", "count");
    for node in 0..8 {
        println!(
            "{:>5} {:>12.6} {:>12.6} {:>9}",
            node,
            dist[node],
            counts[node] as f64 / trials as f64,
            counts[node]
        );
    }
    let target = cfg.target as usize;
    println!();
    println!(
        "target {target}: exact {:.6}, sampled {:.6}",
        dist[target],
        counts[target] as f64 / trials as f64
    );
    Ok(())
}
