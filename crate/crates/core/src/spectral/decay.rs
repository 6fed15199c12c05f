//! Measured `L^p → L^q` smoothing ratios of the torus semigroups.

use crate::error::{Error, Result};

use super::field::SpectralFormField;
use super::norms::{gradient_norm, lp_norm};
use super::ops::{delta_spec, heat_semigroup, maxwell_semigroup, stokes_semigroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semigroup {
    Heat,
    Stokes,
    Maxwell,
}

impl Semigroup {
    pub fn name(self) -> &'static str {
        match self {
            Semigroup::Heat => "heat",
            Semigroup::Stokes => "stokes",
            Semigroup::Maxwell => "maxwell",
        }
    }

    pub fn apply(self, t: f64, w: &SpectralFormField) -> Result<SpectralFormField> {
        match self {
            Semigroup::Heat => heat_semigroup(t, w),
            Semigroup::Stokes => stokes_semigroup(t, w),
            Semigroup::Maxwell => maxwell_semigroup(t, w),
        }
    }

    /// Name of the first-order operator measured alongside the semigroup.
    pub fn derivative_name(self) -> &'static str {
        match self {
            Semigroup::Maxwell => "delta",
            _ => "grad",
        }
    }
}

/// Probe ratios over a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    pub semigroup: Semigroup,
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
    pub q: f64,
    pub times: Vec<f64>,
    /// `t^{α/2} ‖S(t)f‖_q / ‖f‖_p`.
    pub ratio: Vec<f64>,
    /// `t^{(1+α)/2} ‖D S(t)f‖_q / ‖f‖_p` with `D = ∇` (heat, Stokes) or `δ` (Maxwell).
    pub derivative_ratio: Vec<f64>,
}

impl DecayReport {
    pub fn sup_ratio(&self) -> f64 {
        self.ratio.iter().fold(0.0, |m, v| m.max(*v))
    }

    pub fn sup_derivative_ratio(&self) -> f64 {
        self.derivative_ratio.iter().fold(0.0, |m, v| m.max(*v))
    }
}

fn reciprocal(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// Checks `1 ≤ p, q ≤ ∞`, `1/q = 1/p − α/n` and `0 ≤ α ≤ min(1, n/p)`.
pub fn check_exponents(p: f64, q: f64, alpha: f64, n: usize) -> Result<()> {
    for e in [p, q] {
        if e.is_nan() || e < 1.0 {
            return Err(Error::InvalidExponent(e));
        }
    }
    let relation = (reciprocal(q) - (reciprocal(p) - alpha / n as f64)).abs() <= 1e-12;
    let range = alpha >= 0.0 && alpha <= 1.0f64.min(n as f64 * reciprocal(p)) + 1e-12;
    if !relation || !range {
        return Err(Error::ExponentRelation { p, q, alpha, n });
    }
    Ok(())
}

/// `count` log-spaced times from `t0` to `t1` inclusive.
pub fn log_time_grid(t0: f64, t1: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![t0],
        _ => {
            let (a, b) = (t0.ln(), t1.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

/// Measures the smoothing ratios of `semigroup` on probe `f`.
pub fn decay_diagnostic(
    semigroup: Semigroup,
    f: &SpectralFormField,
    p: f64,
    q: f64,
    alpha: f64,
    times: &[f64],
) -> Result<DecayReport> {
    let n = f.grid().dim();
    check_exponents(p, q, alpha, n)?;
    if times.is_empty() || times[0] <= 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimeGrid("times must be positive and strictly increasing".into()));
    }
    let fp = lp_norm(&f.inverse(), p)?;
    if !(fp > 0.0) {
        return Err(Error::InvalidConfig("probe has zero norm".into()));
    }
    let mut ratio = Vec::with_capacity(times.len());
    let mut derivative_ratio = Vec::with_capacity(times.len());
    for &t in times {
        let s = semigroup.apply(t, f)?;
        ratio.push(t.powf(0.5 * alpha) * lp_norm(&s.inverse(), q)? / fp);
        let dq = match semigroup {
            Semigroup::Maxwell => lp_norm(&delta_spec(&s).inverse(), q)?,
            _ => gradient_norm(&s, q)?,
        };
        derivative_ratio.push(t.powf(0.5 * (1.0 + alpha)) * dq / fp);
    }
    Ok(DecayReport { semigroup, n, alpha, p, q, times: times.to_vec(), ratio, derivative_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::TorusGrid;
    use crate::spectral::probes::stokes_probe;

    #[test]
    fn exponent_relation() {
        assert!(check_exponents(3.0, 6.0, 0.5, 3).is_ok());
        assert!(check_exponents(2.0, 6.0, 1.0, 3).is_ok());
        assert!(check_exponents(2.0, 3.0, 0.5, 3).is_ok());
        assert!(check_exponents(3.0, 3.0, 0.0, 3).is_ok());
        assert!(matches!(check_exponents(3.0, 5.0, 0.5, 3), Err(Error::ExponentRelation { .. })));
        assert!(matches!(check_exponents(0.5, 5.0, 0.5, 3), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn alpha_zero_is_a_contraction() {
        let g = TorusGrid::new(3, 16, 6.0).unwrap();
        let f = stokes_probe(&g, 0.6);
        let r = decay_diagnostic(Semigroup::Stokes, &f, 3.0, 3.0, 0.0, &log_time_grid(1e-3, 1.0, 7)).unwrap();
        assert!(r.ratio.iter().all(|v| *v <= 1.0 + 1e-10), "{:?}", r.ratio);
    }
}
