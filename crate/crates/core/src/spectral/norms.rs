//! Grid quadrature of `L^p` norms and inner products.

use crate::error::{Error, Result};

use super::field::{PhysicalFormField, SpectralFormField};
use super::grid::TorusGrid;
use super::ops::partial;

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `L^p` norm of the pointwise euclidean norm of a list of component arrays.
///
/// Rectangle rule times the cell volume; `p = ∞` is the grid maximum.
pub fn lp_norm_components(grid: &TorusGrid, components: &[&[f64]], p: f64) -> Result<f64> {
    check_exponent(p)?;
    let len = grid.len();
    let mut sq = vec![0.0; len];
    for comp in components {
        if comp.len() != len {
            return Err(Error::SizeMismatch { expected: len, found: comp.len() });
        }
        for (s, v) in sq.iter_mut().zip(comp.iter()) {
            *s += v * v;
        }
    }
    if p.is_infinite() {
        return Ok(sq.iter().fold(0.0f64, |m, s| m.max(*s)).sqrt());
    }
    let sum: f64 = if p == 2.0 {
        sq.iter().sum()
    } else {
        let half = 0.5 * p;
        sq.iter().map(|s| s.powf(half)).sum()
    };
    Ok((sum * grid.cell_volume()).powf(1.0 / p))
}

/// `‖w‖_p` of a sampled form field.
pub fn lp_norm(w: &PhysicalFormField, p: f64) -> Result<f64> {
    let comps: Vec<&[f64]> = w.components().iter().map(|c| c.as_slice()).collect();
    lp_norm_components(w.grid(), &comps, p)
}

/// `⟨a, b⟩ = ∫ Σ_J a_J b_J` by the rectangle rule.
pub fn inner_product(a: &PhysicalFormField, b: &PhysicalFormField) -> Result<f64> {
    a.grid().check_same(b.grid())?;
    if a.grade() != b.grade() {
        return Err(Error::WrongGrade { expected: a.grade(), found: b.grade().to_string() });
    }
    let sum: f64 = a
        .components()
        .iter()
        .zip(b.components())
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .sum();
    Ok(sum * a.grid().cell_volume())
}

/// `‖w‖_2` from Fourier coefficients (Parseval).
pub fn l2_norm_spectral(w: &SpectralFormField) -> f64 {
    (w.energy() * w.grid().volume()).sqrt()
}

/// Sampled partial derivatives `∂_i w_J` of every blade coefficient, ordered
/// by axis then blade.
pub fn jacobian(w: &SpectralFormField) -> Vec<Vec<f64>> {
    (0..w.grid().dim())
        .flat_map(|axis| partial(w, axis).inverse().into_components())
        .collect()
}

/// `‖∇w‖_p` with the Frobenius norm of the full Jacobian at each point.
pub fn gradient_norm(w: &SpectralFormField, p: f64) -> Result<f64> {
    let jac = jacobian(w);
    let comps: Vec<&[f64]> = jac.iter().map(|c| c.as_slice()).collect();
    lp_norm_components(w.grid(), &comps, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_norms() {
        let g = TorusGrid::new(3, 8, 2.0).unwrap();
        let w = PhysicalFormField::from_fn(&g, 1, |_, out| out.copy_from_slice(&[3.0, 0.0, 4.0]));
        let v = g.volume();
        for p in [1.0, 2.0, 3.5, 6.0] {
            assert!((lp_norm(&w, p).unwrap() - 5.0 * v.powf(1.0 / p)).abs() < 1e-12);
        }
        assert_eq!(lp_norm(&w, f64::INFINITY).unwrap(), 5.0);
        assert!(matches!(lp_norm(&w, 0.5), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn parseval_agrees_with_quadrature() {
        let g = TorusGrid::new(2, 16, 1.5).unwrap();
        let w = PhysicalFormField::from_fn(&g, 1, |x, out| {
            out[0] = (4.0 * x[0]).sin() + 0.3;
            out[1] = (x[0] * x[1]).cos();
        });
        let a = lp_norm(&w, 2.0).unwrap();
        let b = l2_norm_spectral(&w.forward());
        assert!((a - b).abs() < 1e-10 * a);
    }
}
