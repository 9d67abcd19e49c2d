//! Binomial helpers. Amplitudes of the collapsed initial state involve
//! sqrt(C(n-1, x) / 2^n); for large n the binomial is evaluated in log space
//! so the ratio stays finite well past n = 60 where C(n, k) overflows f64.

/// ln(k!) by direct summation.
pub fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// ln C(n, k).
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_binomial: k = {k} > n = {n}");
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// C(n, k) as f64: exact integer arithmetic where u128 suffices, log space
/// beyond that.
pub fn binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "binomial: k = {k} > n = {n}");
    if n <= 100 {
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        let mut overflow = false;
        for i in 0..k {
            match acc.checked_mul((n - i) as u128) {
                Some(v) => acc = v / (i + 1) as u128,
                None => {
                    overflow = true;
                    break;
                }
            }
        }
        if !overflow {
            return acc as f64;
        }
    }
    ln_binomial(n, k).exp()
}

/// sqrt(C(n, k) / 2^m), evaluated as exp((ln C(n,k) - m ln 2) / 2).
pub fn sqrt_binomial_over_pow2(n: u64, k: u64, m: u64) -> f64 {
    (0.5 * (ln_binomial(n, k) - m as f64 * std::f64::consts::LN_2)).exp()
}
