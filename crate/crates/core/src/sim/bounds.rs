//! Closed-form logical error bounds.

use crate::error::{invalid, Result};

/// `exp(-2n((r+1)/n - p)^2)`, valid for `p <= (r+1)/n`.
pub fn hoeffding_bound(n: usize, r: usize, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p = {p} is not a probability")));
    }
    let nf = n as f64;
    let t = (r + 1) as f64 / nf;
    if p > t {
        return Err(invalid(format!("p = {p} exceeds (r+1)/n = {t}")));
    }
    let d = t - p;
    Ok((-2.0 * nf * d * d).exp())
}

/// Number of edges `m = (L-1)Δ/2 + 1` of the matched region.
pub fn mwpm_path_exponent(length: usize, delta: usize) -> Result<usize> {
    if length.is_multiple_of(2) {
        return Err(invalid(format!("L = {length} must be odd")));
    }
    if delta < 2 {
        return Err(invalid(format!("delta = {delta} must be at least 2")));
    }
    Ok((length - 1) * delta / 2 + 1)
}

/// `b^m / (1 - b)` with `b = 2a·eps^(1/4)`, valid for `eps < 1/(2a)^4`.
///
/// `1 - b` is evaluated as `(1 - b^4) / ((1 + b)(1 + b^2))` with a fused
/// `1 - 16a^4·eps`, which keeps full relative precision near the pole.
pub fn mwpm_path_bound(length: usize, delta: usize, a: usize, eps: f64) -> Result<f64> {
    let m = mwpm_path_exponent(length, delta)?;
    if a == 0 {
        return Err(invalid("a must be positive"));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid(format!("eps = {eps} is not a probability")));
    }
    let c = 16.0 * (a as f64).powi(4);
    if eps * c >= 1.0 {
        return Err(invalid(format!("eps = {eps} is not below 1/(2a)^4")));
    }
    let one_minus_b4 = (-c).mul_add(eps, 1.0);
    if one_minus_b4 <= 0.0 {
        return Err(invalid(format!("eps = {eps} is not below 1/(2a)^4")));
    }
    let b = 2.0 * a as f64 * eps.sqrt().sqrt();
    let denom = one_minus_b4 / ((1.0 + b) * (1.0 + b * b));
    Ok(b.powi(m as i32) / denom)
}
