//! Iteration-count bounds. All values omit the unstated big-O constants
//! ("up to constant").

use crate::error::{Error, Result};

/// Potential-function bound `B (m + k) / eps` on the number of steps.
pub fn potential_bound(b: f64, m: usize, k: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::input("eps must be positive"));
    }
    if !(b > 0.0) {
        return Err(Error::input("B must be positive"));
    }
    Ok(b * (m + k) as f64 / eps)
}

/// `ln C(a, b)` as a sum of logs.
fn ln_binomial(a: usize, b: usize) -> f64 {
    let b = b.min(a - b);
    (1..=b)
        .map(|i| ((a - b + i) as f64).ln() - (i as f64).ln())
        .sum()
}

/// Natural log of `(2n)^{dk} * C(m+k-2, m-1)^{2dk}`.
pub fn worst_case_bound_log(n: usize, m: usize, k: usize, d: usize) -> Result<f64> {
    if n == 0 || m == 0 || k == 0 || d == 0 {
        return Err(Error::input("all parameters must be positive"));
    }
    let dk = (d * k) as f64;
    Ok(dk * ((2 * n) as f64).ln() + 2.0 * dk * ln_binomial(m + k - 2, m - 1))
}

/// Smoothed bound `n^2 m^{8n/d + 6} d^4 k^6 ln(nm)^4 / sigma^2`.
///
/// Requires `d >= 2`, `0 < sigma <= 1` and `n m >= 2`. The derivation assumes
/// `k <= m`; a warning is logged otherwise. May be `+inf` for large inputs;
/// see [`smoothed_bound_log`].
pub fn smoothed_bound(n: usize, m: usize, k: usize, d: usize, sigma: f64) -> Result<f64> {
    smoothed_bound_log(n, m, k, d, sigma).map(f64::exp)
}

/// Natural log of [`smoothed_bound`].
pub fn smoothed_bound_log(n: usize, m: usize, k: usize, d: usize, sigma: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::input("smoothed bound requires d >= 2"));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::input("sigma must lie in (0, 1]"));
    }
    if n * m < 2 || k == 0 {
        return Err(Error::input("smoothed bound requires n*m >= 2 and k >= 1"));
    }
    if k > m {
        log::warn!("smoothed bound derived for k <= m; got k = {k} > m = {m}");
    }
    let (nf, mf, kf, df) = (n as f64, m as f64, k as f64, d as f64);
    Ok(2.0 * nf.ln()
        + (8.0 * nf / df + 6.0) * mf.ln()
        + 4.0 * df.ln()
        + 6.0 * kf.ln()
        + 4.0 * (nf * mf).ln().ln()
        - 2.0 * sigma.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_bound_arithmetic() {
        assert_eq!(potential_bound(1.0, 2, 2, 0.5).unwrap(), 8.0);
        let a = potential_bound(3.0, 10, 4, 0.2).unwrap();
        let b = potential_bound(3.0, 10, 4, 0.4).unwrap();
        assert!((a / b - 2.0).abs() < 1e-12);
        assert!(potential_bound(1.0, 1, 1, 0.0).is_err());
        assert!(potential_bound(1.0, 1, 1, -1.0).is_err());
    }

    #[test]
    fn worst_case_bound_values() {
        assert!((worst_case_bound_log(1, 1, 1, 1).unwrap() - 2f64.ln()).abs() < 1e-15);
        // C(4,2) = 6: ln(4^6 * 6^12)
        let expected = 6.0 * 4f64.ln() + 12.0 * 6f64.ln();
        assert!((worst_case_bound_log(2, 3, 3, 2).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn worst_case_bound_is_monotone() {
        let base = worst_case_bound_log(2, 4, 3, 2).unwrap();
        assert!(worst_case_bound_log(3, 4, 3, 2).unwrap() >= base);
        assert!(worst_case_bound_log(2, 5, 3, 2).unwrap() >= base);
        assert!(worst_case_bound_log(2, 4, 4, 2).unwrap() >= base);
        assert!(worst_case_bound_log(2, 4, 3, 3).unwrap() >= base);
    }

    #[test]
    fn smoothed_bound_scaling() {
        let a = smoothed_bound(2, 10, 5, 2, 0.5).unwrap();
        assert!(a.is_finite() && a > 0.0);
        let b = smoothed_bound(2, 10, 5, 2, 0.25).unwrap();
        assert!((b / a - 4.0).abs() < 1e-9);
        let d2 = smoothed_bound_log(8, 10, 5, 2, 0.5).unwrap();
        let d4 = smoothed_bound_log(8, 10, 5, 4, 0.5).unwrap();
        assert!(d4 <= d2);
    }

    #[test]
    fn smoothed_bound_domain() {
        assert!(smoothed_bound(2, 10, 5, 1, 0.5).is_err());
        assert!(smoothed_bound(2, 10, 5, 2, 0.0).is_err());
        assert!(smoothed_bound(2, 10, 5, 2, 1.5).is_err());
        assert!(smoothed_bound(1, 1, 1, 2, 0.5).is_err());
    }
}
