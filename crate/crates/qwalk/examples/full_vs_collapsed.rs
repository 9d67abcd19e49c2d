//! Cross-check the two backends: evolve the full n 2^n state vector and
//! the 2n-dimensional collapsed state side by side, comparing the marked
//! probability at every step.

use qwalk::collapsed::{
    build_collapsed_unitary, collapse, collapsed_initial_state, collapsed_step,
    marked_probability,
};
use qwalk::full::{node_distribution, step, uniform_state};
use qwalk::WalkConfig;

fn main() -> Result<(), qwalk::Error> {
    let n = 8;
    let cfg = WalkConfig::new(n)?;
    let op = build_collapsed_unitary(n, true)?;
    let mut full = uniform_state(n)?;
    let mut coll = collapsed_initial_state(n)?;

    let mut worst: f64 = 0.0;
    println!("{:>4} {:>22} {:>22} {:>10}", "t", "p_full", "p_collapsed", "diff");
    for t in 0..=40u64 {
        let p_full = node_distribution(&full)?[0];
        let p_coll = marked_probability(&coll)?;
        let diff = (p_full - p_coll).abs();
        worst = worst.max(diff);
        if t % 5 == 0 {
            println!("{t:>4} {p_full:>22.16} {p_coll:>22.16} {diff:>10.2e}");
        }
        full = step(&full, &cfg, true)?;
        coll = collapsed_step(&coll, &op)?;
    }
    println!("max |p_full - p_collapsed| over 40 steps: {worst:.2e}");

    // collapsing the full state reproduces the collapsed amplitudes too
    let projected = collapse(&full);
    let mut amp_diff: f64 = 0.0;
    for x in 0..=n {
        if x < n {
            amp_diff = amp_diff.max((projected.amp_r(x) - coll.amp_r(x)).norm());
        }
        if x > 0 {
            amp_diff = amp_diff.max((projected.amp_l(x) - coll.amp_l(x)).norm());
        }
    }
    println!("max amplitude deviation after projection:  {amp_diff:.2e}");
    Ok(())
}
