//! Exact-kernel product-integration weights.

use quadrature::double_exponential;

/// Beyond `λ(b − s) > CUTOFF` the kernel is below `e^{−40}` and ignored.
const CUTOFF: f64 = 40.0;

/// `∫_a^b e^{−λ(b−s)} s^{−β} ds` for `0 ≤ a < b`, `λ ≥ 0`, `0 ≤ β < 1`.
///
/// `β = 0` is closed form. Otherwise `y = s^{1−β}` turns the integrand into
/// the smooth `p e^{−λ(b−y^p)}` with `p = 1/(1−β)`.
pub fn kernel_weight(lambda: f64, a: f64, b: f64, beta: f64) -> f64 {
    debug_assert!(0.0 <= a && a < b && lambda >= 0.0 && (0.0..1.0).contains(&beta));
    let h = b - a;
    if beta == 0.0 {
        return if lambda == 0.0 { h } else { -(-lambda * h).exp_m1() / lambda };
    }
    let q = 1.0 - beta;
    let p = 1.0 / q;
    if lambda == 0.0 {
        return (b.powf(q) - a.powf(q)) * p;
    }
    let lo = a.max(b - CUTOFF / lambda);
    let (ya, yb) = (lo.powf(q), b.powf(q));
    let bound = p * (yb - ya);
    let integrand = |y: f64| (-lambda * (b - y.powf(p)).max(0.0)).exp();
    let out = double_exponential::integrate(integrand, ya, yb, 1e-15 * bound.max(f64::MIN_POSITIVE));
    p * out.integral
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(kernel_weight(0.0, 0.5, 2.0, 0.0), 1.5);
        assert!((kernel_weight(3.0, 0.5, 2.0, 0.0) - (1.0 - (-4.5f64).exp()) / 3.0).abs() < 1e-15);
        assert!((kernel_weight(0.0, 0.0, 16.0, 0.75) - 8.0).abs() < 1e-14);
    }
}
