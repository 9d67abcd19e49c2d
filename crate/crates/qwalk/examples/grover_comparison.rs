//! Walk search vs the closed-form Grover baseline on N = 2^n items.
//!
//! Both need O(sqrt(N)) oracle calls; Grover's single-shot success
//! probability approaches 1 while the walk's approaches 1/2, so the walk
//! pays a constant factor in repetitions.

use qwalk::search::{amplified_success, grover_reference, run_search, Backend};
use qwalk::WalkConfig;

fn main() -> Result<(), qwalk::Error> {
    println!(
        "{:>4} {:>7} {:>10} {:>8} {:>10} {:>12}",
        "n", "t_walk", "p_walk", "grover", "p_grover", "p_walk_x2"
    );
    for n in (4..=16).step_by(2) {
        let cfg = WalkConfig::new(n)?;
        let walk = run_search(&cfg, Backend::Collapsed, 0)?;
        let (iters, p_grover) = grover_reference(n)?;
        println!(
            "{:>4} {:>7} {:>10.6} {:>8} {:>10.6} {:>12.6}",
            n,
            walk.t_f,
            walk.p_exact,
            iters,
            p_grover,
            amplified_success(walk.p_exact, 2)
        );
    }
    Ok(())
}
