//! Log-factorials and binomials in floating point.

/// `ln k!` for `k = 0..=n`, accumulated as `Σ ln j`.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `ln C(m, j)` from a log-factorial table covering `m`.
pub fn ln_binomial(table: &[f64], m: usize, j: usize) -> f64 {
    debug_assert!(j <= m && m < table.len());
    table[m] - table[j] - table[m - j]
}
