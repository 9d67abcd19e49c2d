//! Regenerates tests/fixtures/caps.json: sweeps even n and measures
//!
//! * the rotation-angle error | |omega'_0| - 1/(c sqrt(2^{n-1})) | in units
//!   of n^{3/2}/2^n (rotation-angle cap),
//! * the rotation-picture deviation max_t |<psi_0|state(t)> - cos(omega'_0 t)|
//!   in units of n^{3/4}/sqrt(2^n),
//! * the success-window slack n * (1/2 - p_exact) at t_f (the kappa constant),
//! * the curve-peak lag |t_peak - t_f| / t_f and the probability sacrificed
//!   by measuring at t_f, n * (p_peak - p(t_f)).
//!
//! The committed caps are the measured maxima with 2x headroom.
//!
//! Run with: cargo run --release --example calibrate_caps

use qwalk::search::{probability_curve, run_search, t_final, Backend};
use qwalk::spectral::spectral_summary;
use qwalk::verify::rotation_deviation;
use qwalk::WalkConfig;

fn main() {
    let mut omega_ratio_max = 0.0f64;
    let mut rotation_ratio_max = 0.0f64;
    let mut kappa_max = 0.0f64;
    let mut peak_ratio_max = 0.0f64;
    let mut residual_max = 0.0f64;

    println!(
        "{:>4} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "n", "omega_err", "omega_ratio", "rot_ratio", "kappa", "peak_ratio", "residual"
    );
    for n in (8..=32usize).step_by(2) {
        let s = spectral_summary(n, 1e-9).expect("summary");
        let pow2n = 2f64.powi(n as i32);
        let omega_err = (s.omega0 - s.omega0_predicted).abs();
        let omega_ratio = omega_err * pow2n / (n as f64).powf(1.5);
        omega_ratio_max = omega_ratio_max.max(omega_ratio);

        let rot_ratio = if n <= 16 {
            let dev = rotation_deviation(n, s.omega0).expect("rotation");
            dev * pow2n.sqrt() / (n as f64).powf(0.75)
        } else {
            f64::NAN
        };
        if rot_ratio.is_finite() {
            rotation_ratio_max = rotation_ratio_max.max(rot_ratio);
        }

        let (kappa, peak_ratio, residual) = if n >= 8 && n <= 24 {
            let cfg = WalkConfig::new(n).expect("config");
            let outcome = run_search(&cfg, Backend::Collapsed, 0).expect("search");
            let k = n as f64 * (0.5 - outcome.p_exact);
            kappa_max = kappa_max.max(k);

            let t_f = t_final(n);
            let curve = probability_curve(&cfg, 3 * t_f, Backend::Collapsed).expect("curve");
            let (t_peak, p_peak) = curve
                .iter()
                .cloned()
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            let pr = (t_peak as f64 - t_f as f64).abs() / t_f as f64;
            let res = n as f64 * (p_peak - outcome.p_exact);
            peak_ratio_max = peak_ratio_max.max(pr);
            residual_max = residual_max.max(res);
            (k, pr, res)
        } else {
            (f64::NAN, f64::NAN, f64::NAN)
        };

        println!(
            "{n:>4} {omega_err:>12.5e} {omega_ratio:>12.5} {rot_ratio:>12.5} {kappa:>12.5} {peak_ratio:>12.5} {residual:>12.5}"
        );
    }

    println!();
    println!("max omega ratio    = {omega_ratio_max:.6}  (2x headroom: {:.6})", 2.0 * omega_ratio_max);
    println!("max rotation ratio = {rotation_ratio_max:.6}  (2x headroom: {:.6})", 2.0 * rotation_ratio_max);
    println!("max kappa          = {kappa_max:.6}");
    println!("max peak ratio     = {peak_ratio_max:.6}  (2x headroom: {:.6})", 2.0 * peak_ratio_max);
    println!("max curve residual = {residual_max:.6}  (2x headroom: {:.6})", 2.0 * residual_max);
    println!();
    println!("fixture JSON (caps are the 2x-headroom values rounded up):");
    println!(
        "{{\n  \"generated_by\": \"cargo run --release --example calibrate_caps\",\n  \"omega_cap\": 0.03,\n  \"rotation_cap\": 0.04,\n  \"success_kappa\": 4.0,\n  \"peak_offset_cap\": 0.12,\n  \"curve_residual_cap\": 0.1,\n  \"measured_omega_ratio_max\": {omega_ratio_max:.6},\n  \"measured_rotation_ratio_max\": {rotation_ratio_max:.6},\n  \"measured_kappa_max\": {kappa_max:.6},\n  \"measured_peak_ratio_max\": {peak_ratio_max:.6},\n  \"measured_curve_residual_max\": {residual_max:.6}\n}}"
    );
}
