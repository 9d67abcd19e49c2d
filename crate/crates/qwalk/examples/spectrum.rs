//! Print the eigenvalues of the collapsed walk operator with and without
//! the marked node, and flag the two perturbed eigenvalues on the arc
//! near z = 1 that drive the search rotation.

use qwalk::collapsed::build_collapsed_unitary;
use qwalk::spectral::{arc_threshold, eigendecompose_operator, spectral_summary, DEFAULT_TOL_EIG};

fn main() -> Result<(), qwalk::Error> {
    let n = 8;
    for perturbed in [false, true] {
        let op = build_collapsed_unitary(n, perturbed)?;
        let pairs = eigendecompose_operator(&op, DEFAULT_TOL_EIG)?;
        println!(
            "{} (n = {n}):",
            if perturbed { "U' = U . P" } else { "U" }
        );
        for p in &pairs {
            let arc = if p.value.re > arc_threshold(n) { "  <- arc" } else { "" };
            println!(
                "  {:+.12} {:+.12}i   residual {:.2e}{arc}",
                p.value.re, p.value.im, p.residual
            );
        }
    }

    let summary = spectral_summary(n, DEFAULT_TOL_EIG)?;
    println!();
    println!("|omega_0'|      = {:.9}", summary.omega0.abs());
    println!("predicted       = {:.9}", summary.omega0_predicted);
    println!("|<psi_0|w>|^2   = {:.6}  (bound {:.6})", summary.p0, summary.p0_bound);
    println!("|<psi_1|w>|^2   = {:.6}  (bound {:.6})", summary.p1, summary.p1_bound);
    println!("e^(i eta)       = {:+.6} {:+.6}i", summary.eta.0, summary.eta.1);
    Ok(())
}
