//! Fourier-multiplier operators and pointwise products on form fields.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::Blade;

use super::field::{PhysicalFormField, SpectralFormField};
use super::grid::TorusGrid;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn position(blades: &[Blade], b: Blade) -> usize {
    blades.iter().position(|x| *x == b).expect("blade of the target grade")
}

/// `(source blade, axis, target blade, sign)` for `e_axis ∧ e_source`.
fn wedge_table(n: usize, grade: usize) -> Vec<(usize, usize, usize, f64)> {
    let src = Blade::all(n, grade);
    let tgt = Blade::all(n, grade + 1);
    let mut out = Vec::new();
    for (s, b) in src.iter().enumerate() {
        for axis in 0..n {
            if let Some((sign, t)) = Blade::from_bits(1 << axis).wedge(*b) {
                out.push((s, axis, position(&tgt, t), sign as f64));
            }
        }
    }
    out
}

/// `(source blade, axis, target blade, sign)` for `e_axis ⌟ e_source`.
fn contract_table(n: usize, grade: usize) -> Vec<(usize, usize, usize, f64)> {
    if grade == 0 {
        return Vec::new();
    }
    let src = Blade::all(n, grade);
    let tgt = Blade::all(n, grade - 1);
    let mut out = Vec::new();
    for (s, b) in src.iter().enumerate() {
        for axis in 0..n {
            if let Some((sign, t)) = b.contract_by(axis + 1) {
                out.push((s, axis, position(&tgt, t), sign as f64));
            }
        }
    }
    out
}

/// `factor · (k ∧ ŵ)` per frequency.
fn wedge_k(w: &SpectralFormField, factor: Complex64) -> SpectralFormField {
    let grid = w.grid();
    let mut out = SpectralFormField::zeros(grid, w.grade() + 1);
    for (s, axis, t, sign) in wedge_table(grid.dim(), w.grade()) {
        let ks = grid.wavenumbers(axis);
        let f = factor * sign;
        let src = &w.components()[s];
        let dst = &mut out.components_mut()[t];
        for ((d, c), k) in dst.iter_mut().zip(src).zip(ks) {
            *d += f * *k * *c;
        }
    }
    out
}

/// `factor · (k ⌟ ŵ)` per frequency; a 0-form maps to the zero 0-form.
fn contract_k(w: &SpectralFormField, factor: Complex64) -> SpectralFormField {
    let grid = w.grid();
    let mut out = SpectralFormField::zeros(grid, w.grade().saturating_sub(1));
    for (s, axis, t, sign) in contract_table(grid.dim(), w.grade()) {
        let ks = grid.wavenumbers(axis);
        let f = factor * sign;
        let src = &w.components()[s];
        let dst = &mut out.components_mut()[t];
        for ((d, c), k) in dst.iter_mut().zip(src).zip(ks) {
            *d += f * *k * *c;
        }
    }
    out
}

/// Exterior derivative `d = i k ∧`. An n-form maps to the (blade-less)
/// zero field of grade n+1.
pub fn d_spec(w: &SpectralFormField) -> SpectralFormField {
    wedge_k(w, I)
}

/// Coderivative `δ = −i k ⌟`.
pub fn delta_spec(w: &SpectralFormField) -> SpectralFormField {
    contract_k(w, -I)
}

/// Partial derivative `∂_axis` of every blade coefficient.
pub fn partial(w: &SpectralFormField, axis: usize) -> SpectralFormField {
    let ks = w.grid().wavenumbers(axis);
    w.map(|idx, c| I * ks[idx] * c)
}

fn divide_by_ksq(mut w: SpectralFormField) -> SpectralFormField {
    let ksq = w.grid().ksq().to_vec();
    for comp in w.components_mut() {
        for (c, k2) in comp.iter_mut().zip(&ksq) {
            *c = if *k2 > 0.0 { *c / *k2 } else { Complex64::new(0.0, 0.0) };
        }
    }
    w
}

/// Exact component `k∧(k⌟ŵ)/|k|²`; modes with `|k| = 0` map to zero.
pub fn exact_part(w: &SpectralFormField) -> SpectralFormField {
    let one = Complex64::new(1.0, 0.0);
    let mut e = divide_by_ksq(wedge_k(&contract_k(w, one), one));
    if w.grade() == 0 {
        e = SpectralFormField::zeros(w.grid(), 0);
    }
    e
}

/// Coexact component `k⌟(k∧ŵ)/|k|²`; modes with `|k| = 0` map to zero.
pub fn coexact_part(w: &SpectralFormField) -> SpectralFormField {
    let one = Complex64::new(1.0, 0.0);
    if w.grade() == w.grid().dim() {
        return SpectralFormField::zeros(w.grid(), w.grade());
    }
    divide_by_ksq(contract_k(&wedge_k(w, one), one))
}

/// Harmonic component: the modes with `|k| = 0`.
pub fn harmonic_part(w: &SpectralFormField) -> SpectralFormField {
    let ksq = w.grid().ksq();
    w.map(|idx, c| if ksq[idx] > 0.0 { Complex64::new(0.0, 0.0) } else { c })
}

/// Leray projection `û ↦ û − k(k·û)/|k|²` onto divergence-free 1-forms;
/// the constant mode is kept.
pub fn leray_project(u: &SpectralFormField) -> Result<SpectralFormField> {
    u.require_grade(1)?;
    u.try_sub(&exact_part(u))
}

/// Projection of 2-forms onto the range of `d`; constants are discarded.
pub fn exact_project(b: &SpectralFormField) -> Result<SpectralFormField> {
    b.require_grade(2)?;
    Ok(exact_part(b))
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// `e^{tΔ}`: multiplication by `e^{−t|k|²}`.
pub fn heat_semigroup(t: f64, w: &SpectralFormField) -> Result<SpectralFormField> {
    check_time(t)?;
    let ksq = w.grid().ksq();
    Ok(w.map(|idx, c| c * (-t * ksq[idx]).exp()))
}

/// Stokes semigroup on the torus: heat flow of the Leray projection.
pub fn stokes_semigroup(t: f64, u: &SpectralFormField) -> Result<SpectralFormField> {
    check_time(t)?;
    heat_semigroup(t, &leray_project(u)?)
}

/// Maxwell semigroup on the torus: heat flow of the exact projection.
pub fn maxwell_semigroup(t: f64, b: &SpectralFormField) -> Result<SpectralFormField> {
    check_time(t)?;
    heat_semigroup(t, &exact_project(b)?)
}

/// Highest retained integer mode for a dealiasing fraction.
pub fn dealias_cutoff(size: usize, fraction: f64) -> Result<i64> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!("dealiasing fraction {fraction} outside (0, 1]")));
    }
    let half = (size / 2) as i64;
    Ok(((fraction * half as f64).floor() as i64).min(half - 1))
}

/// Zeroes every mode with some `|m_a|` above the cutoff for `fraction`
/// (2/3 gives the usual rule). The Nyquist plane is always removed.
pub fn dealias(w: &SpectralFormField, fraction: f64) -> Result<SpectralFormField> {
    let grid = w.grid();
    let mask = dealias_mask(grid, dealias_cutoff(grid.size(), fraction)?);
    Ok(w.map(|idx, c| if mask[idx] { c } else { Complex64::new(0.0, 0.0) }))
}

pub(crate) fn dealias_mask(grid: &TorusGrid, cutoff: i64) -> Vec<bool> {
    let keep_axis: Vec<bool> = grid.axis_modes().iter().map(|m| m.abs() <= cutoff).collect();
    (0..grid.len())
        .map(|idx| (0..grid.dim()).all(|a| keep_axis[grid.axis_index(idx, a)]))
        .collect()
}

/// Pointwise `a ∧ b` of sampled fields.
pub fn wedge_fields(a: &PhysicalFormField, b: &PhysicalFormField) -> Result<PhysicalFormField> {
    a.grid().check_same(b.grid())?;
    let grid = a.grid();
    let n = grid.dim();
    let grade = a.grade() + b.grade();
    let mut out = PhysicalFormField::zeros(grid, grade);
    if grade > n {
        return Ok(out);
    }
    let tgt = Blade::all(n, grade);
    for (i, ba) in a.blades().iter().enumerate() {
        for (j, bb) in b.blades().iter().enumerate() {
            if let Some((sign, t)) = ba.wedge(*bb) {
                let t = position(&tgt, t);
                let s = sign as f64;
                let (ca, cb) = (&a.components()[i], &b.components()[j]);
                let dst = &mut out.components_mut()[t];
                for ((d, x), y) in dst.iter_mut().zip(ca).zip(cb) {
                    *d += s * x * y;
                }
            }
        }
    }
    Ok(out)
}

/// Pointwise `x ⌟ w` for a sampled 1-form `x`.
pub fn contract_fields(x: &PhysicalFormField, w: &PhysicalFormField) -> Result<PhysicalFormField> {
    if x.grade() != 1 {
        return Err(Error::WrongGrade { expected: 1, found: x.grade().to_string() });
    }
    x.grid().check_same(w.grid())?;
    let grid = w.grid();
    let mut out = PhysicalFormField::zeros(grid, w.grade().saturating_sub(1));
    for (s, axis, t, sign) in contract_table(grid.dim(), w.grade()) {
        let (cx, cw) = (&x.components()[axis], &w.components()[s]);
        let dst = &mut out.components_mut()[t];
        for ((d, a), b) in dst.iter_mut().zip(cx).zip(cw) {
            *d += sign * a * b;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> TorusGrid {
        TorusGrid::new(3, 8, 3.0).unwrap()
    }

    #[test]
    fn d_of_single_sine() {
        let g = grid();
        let kappa = g.kappa();
        let w = PhysicalFormField::from_fn(&g, 1, |x, out| out[1] = (kappa * x[0]).sin());
        let dw = d_spec(&w.forward()).inverse();
        let expected = PhysicalFormField::from_fn(&g, 2, |x, out| out[0] = kappa * (kappa * x[0]).cos());
        assert!(dw.try_sub(&expected).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn delta_of_single_sine() {
        let g = grid();
        let kappa = g.kappa();
        let w = PhysicalFormField::from_fn(&g, 2, |x, out| out[0] = (kappa * x[0]).sin());
        let dw = delta_spec(&w.forward()).inverse();
        let expected = PhysicalFormField::from_fn(&g, 1, |x, out| out[1] = -kappa * (kappa * x[0]).cos());
        assert!(dw.try_sub(&expected).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn constants_are_annihilated() {
        let g = grid();
        let w = PhysicalFormField::from_fn(&g, 1, |_, out| out.copy_from_slice(&[1.0, 2.0, 3.0]));
        let s = w.forward();
        assert!(d_spec(&s).max_abs() < 1e-15);
        assert!(delta_spec(&s).max_abs() < 1e-15);
        assert_eq!(leray_project(&s).unwrap(), s);
        let b = PhysicalFormField::from_fn(&g, 2, |_, out| out[2] = 4.0).forward();
        assert!(exact_project(&b).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn top_and_bottom_grades() {
        let g = grid();
        let top = PhysicalFormField::from_fn(&g, 3, |x, out| out[0] = x[1].sin()).forward();
        assert_eq!(d_spec(&top).components().len(), 0);
        let f = PhysicalFormField::from_fn(&g, 0, |x, out| out[0] = x[1].sin()).forward();
        assert!(delta_spec(&f).max_abs() == 0.0);
    }

    #[test]
    fn heat_single_mode() {
        let g = TorusGrid::new(3, 8, 2.0 * PI).unwrap();
        let w = PhysicalFormField::from_fn(&g, 1, |x, out| out[2] = x[0].cos()).forward();
        let h = heat_semigroup(1.0, &w).unwrap();
        let idx = g.index_of_mode(&[1, 0, 0]).unwrap();
        assert!((h.components()[2][idx] - w.components()[2][idx] * (-1.0f64).exp()).norm() < 1e-15);
        assert_eq!(heat_semigroup(0.0, &w).unwrap(), w);
        assert!(matches!(heat_semigroup(-1.0, &w), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn dealias_cutoffs() {
        assert_eq!(dealias_cutoff(32, 2.0 / 3.0).unwrap(), 10);
        assert_eq!(dealias_cutoff(8, 1.0).unwrap(), 3);
        assert!(dealias_cutoff(8, 0.0).is_err());
    }

    #[test]
    fn pointwise_products() {
        let g = grid();
        let u = PhysicalFormField::from_fn(&g, 1, |_, out| out.copy_from_slice(&[0.0, 1.0, 0.0]));
        let b = PhysicalFormField::from_fn(&g, 2, |_, out| out[0] = 1.0);
        // e2 ⌟ e12 = −e1
        let c = contract_fields(&u, &b).unwrap();
        assert!(c.components()[0].iter().all(|v| *v == -1.0));
        // e2 ∧ e12 = 0, e3 ∧ e12 = e123
        assert_eq!(wedge_fields(&u, &b).unwrap().max_abs(), 0.0);
        let e3 = PhysicalFormField::from_fn(&g, 1, |_, out| out[2] = 1.0);
        assert!(wedge_fields(&e3, &b).unwrap().components()[0].iter().all(|v| *v == 1.0));
    }
}
