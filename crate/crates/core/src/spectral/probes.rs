//! Smooth localized test fields.

use crate::exterior::Blade;

use super::field::{PhysicalFormField, SpectralFormField};
use super::grid::TorusGrid;
use super::ops::{d_spec, delta_spec};

/// Gaussian `exp(−|x−c|²/(2σ²))` centred in the box, using the nearest
/// periodic image, with its mean removed.
pub fn gaussian_bump(grid: &TorusGrid, width: f64) -> PhysicalFormField {
    let l = grid.period();
    let c = 0.5 * l;
    let mut f = PhysicalFormField::from_fn(grid, 0, |x, out| {
        let r2: f64 = x
            .iter()
            .map(|xi| {
                let mut d = (xi - c).rem_euclid(l);
                if d > 0.5 * l {
                    d -= l;
                }
                d * d
            })
            .sum();
        out[0] = (-r2 / (2.0 * width * width)).exp();
    });
    let comp = &mut f.components_mut()[0];
    let mean = comp.iter().sum::<f64>() / comp.len() as f64;
    comp.iter_mut().for_each(|v| *v -= mean);
    f
}

fn lift(grid: &TorusGrid, g: &PhysicalFormField, grade: usize, blade: Blade) -> SpectralFormField {
    let blades = Blade::all(grid.dim(), grade);
    let pos = blades.iter().position(|b| *b == blade).expect("blade of requested grade");
    let mut w = PhysicalFormField::zeros(grid, grade);
    w.components_mut()[pos].copy_from_slice(&g.components()[0]);
    w.forward()
}

/// Divergence-free 1-form probe `δ(G e12)`.
pub fn stokes_probe(grid: &TorusGrid, width: f64) -> SpectralFormField {
    let g = gaussian_bump(grid, width);
    let e12 = Blade::from_indices(&[1, 2]).expect("valid blade");
    delta_spec(&lift(grid, &g, 2, e12))
}

/// Exact 2-form probe `d(G e_n)`.
pub fn maxwell_probe(grid: &TorusGrid, width: f64) -> SpectralFormField {
    let g = gaussian_bump(grid, width);
    let en = Blade::basis(grid.dim()).expect("valid blade");
    d_spec(&lift(grid, &g, 1, en))
}

/// Mean-zero scalar probe `G`.
pub fn heat_probe(grid: &TorusGrid, width: f64) -> SpectralFormField {
    gaussian_bump(grid, width).forward()
}
