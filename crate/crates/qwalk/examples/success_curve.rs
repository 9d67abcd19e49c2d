//! Marked-node probability as a function of step count, written as CSV.
//! Pipe to a file and plot; the peak sits near t_f = round(pi/2 sqrt(2^(n-1))).

use qwalk::search::{probability_curve, t_final, Backend};
use qwalk::WalkConfig;

fn main() -> Result<(), qwalk::Error> {
    let n = 10;
    let cfg = WalkConfig::new(n)?;
    let t_f = t_final(n);
    let curve = probability_curve(&cfg, 3 * t_f, Backend::Collapsed)?;
    println!("#schema=qwalk.curve.v1");
    println!("t,p_target");
    for (t, p) in &curve {
        println!("{t},{p}");
    }
    eprintln!("n = {n}, t_f = {t_f}");
    Ok(())
}
