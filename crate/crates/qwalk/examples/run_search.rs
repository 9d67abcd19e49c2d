//! Run the quantum walk search for a few sizes and print the hit
//! probability at the measurement time, plus a sampled estimate.

use qwalk::search::{run_search, Backend};
use qwalk::WalkConfig;

fn main() -> Result<(), qwalk::Error> {
    println!("{:>4} {:>6} {:>12} {:>12}", "n", "t_f", "p_exact", "p_sampled");
    for n in [4, 6, 8, 10, 12] {
        let cfg = WalkConfig::new(n)?.with_target(3)?.with_seed(42);
        let out = run_search(&cfg, Backend::Collapsed, 20_000)?;
        println!(
            "{:>4} {:>6} {:>12.6} {:>12.6}",
            n,
            out.t_f,
            out.p_exact,
            out.p_empirical.unwrap()
        );
    }
    Ok(())
}
