//! Run the whole invariant suite over a range of sizes and print the
//! report, mirroring `qwalk verify --n-range 4..12`.

use qwalk::verify::verify_range;

fn main() -> Result<(), qwalk::Error> {
    let report = verify_range(4, 12)?;
    for c in &report.checks {
        println!(
            "{} n={:<3} {:<28} value={:<13.6e} bound={:.6e}{}",
            if c.pass { "pass" } else { "FAIL" },
            c.n,
            c.name,
            c.value,
            c.bound,
            if c.enforced { "" } else { "  (informational)" }
        );
    }
    println!("all_pass: {}", report.all_pass);
    std::process::exit(if report.all_pass { 0 } else { 1 });
}
