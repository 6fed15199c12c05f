//! Pseudo-spectral quadratic terms of the MHD system in form language.
//!
//! Products are formed on the grid and truncated back to the dealiased band.

use crate::error::{Error, Result};
use crate::spectral::{
    contract_fields, d_spec, dealias, delta_spec, exact_project, jacobian, wedge_fields, PhysicalFormField,
    SpectralFormField,
};

/// Sampled quantities of one state `(u, b)` needed by every quadratic term.
#[derive(Clone, Debug)]
pub struct NodeFields {
    pub u: PhysicalFormField,
    /// `grad_u[i * n + j] = ∂_i u_j`.
    pub grad_u: Vec<Vec<f64>>,
    pub b: PhysicalFormField,
    pub delta_b: PhysicalFormField,
}

impl NodeFields {
    pub fn new(u: &SpectralFormField, b: &SpectralFormField) -> Result<Self> {
        u.require_grade(1)?;
        b.require_grade(2)?;
        u.grid().check_same(b.grid())?;
        Ok(NodeFields { u: u.inverse(), grad_u: jacobian(u), b: b.inverse(), delta_b: delta_spec(b).inverse() })
    }

    pub fn dim(&self) -> usize {
        self.u.grid().dim()
    }
}

/// `Σ_i u1_i ∂_i u2_j` on the grid.
pub fn convection_physical(u1: &PhysicalFormField, grad_u2: &[Vec<f64>]) -> PhysicalFormField {
    let n = u1.grid().dim();
    let mut out = PhysicalFormField::zeros(u1.grid(), 1);
    for j in 0..n {
        let dst = &mut out.components_mut()[j];
        for i in 0..n {
            let (ui, g) = (&u1.components()[i], &grad_u2[i * n + j]);
            for ((d, a), b) in dst.iter_mut().zip(ui).zip(g) {
                *d += a * b;
            }
        }
    }
    out
}

/// `(u1·∇)u2`, dealiased.
pub fn nonlin_convection_pair(u1: &SpectralFormField, u2: &SpectralFormField, fraction: f64) -> Result<SpectralFormField> {
    u1.require_grade(1)?;
    u2.require_grade(1)?;
    u1.grid().check_same(u2.grid())?;
    dealias(&convection_physical(&u1.inverse(), &jacobian(u2)).forward(), fraction)
}

/// `(u·∇)u`, dealiased.
pub fn nonlin_convection(u: &SpectralFormField, fraction: f64) -> Result<SpectralFormField> {
    nonlin_convection_pair(u, u, fraction)
}

/// `δb1 ⌟ b2`, dealiased.
pub fn nonlin_lorentz_pair(b1: &SpectralFormField, b2: &SpectralFormField, fraction: f64) -> Result<SpectralFormField> {
    b1.require_grade(2)?;
    b2.require_grade(2)?;
    let prod = contract_fields(&delta_spec(b1).inverse(), &b2.inverse())?;
    dealias(&prod.forward(), fraction)
}

/// `δb ⌟ b`, dealiased.
pub fn nonlin_lorentz(b: &SpectralFormField, fraction: f64) -> Result<SpectralFormField> {
    nonlin_lorentz_pair(b, b, fraction)
}

/// Induction term computed two ways.
#[derive(Clone, Debug)]
pub struct InductionTerm {
    /// `d(u⌟b)`.
    pub primary: SpectralFormField,
    /// `ℚ(δu∧b − u∧δb − u⌟db + (∇u+∇uᵀ)·(b−bᵀ))`.
    pub validation: SpectralFormField,
    /// `‖primary − validation‖₂ / max(‖primary‖₂, ‖validation‖₂)`, 0 when both vanish.
    pub defect: f64,
}

/// The symmetric-gradient term `(∇u+∇uᵀ)·(b−bᵀ)` as a canonical 2-form.
///
/// With the doubled matrix convention, `b − bᵀ` has entries `c_jk` above
/// the diagonal and `−c_jk` below, where `c_jk` are the blade coefficients.
fn symmetric_gradient_term(grad_u: &[Vec<f64>], b: &PhysicalFormField) -> PhysicalFormField {
    let grid = b.grid();
    let n = grid.dim();
    let blades = b.blades();
    let mut pair_pos = vec![vec![None; n]; n];
    for (pos, blade) in blades.iter().enumerate() {
        let idx = blade.indices();
        pair_pos[idx[0] - 1][idx[1] - 1] = Some(pos);
    }
    let mut out = PhysicalFormField::zeros(grid, 2);
    let mut sym = vec![0.0; n * n];
    let mut anti = vec![0.0; n * n];
    let mut prod = vec![0.0; n * n];
    for p in 0..grid.len() {
        for i in 0..n {
            for j in 0..n {
                sym[i * n + j] = grad_u[i * n + j][p] + grad_u[j * n + i][p];
                anti[i * n + j] = match (pair_pos[i][j], pair_pos[j][i]) {
                    (Some(pos), _) => b.components()[pos][p],
                    (_, Some(pos)) => -b.components()[pos][p],
                    _ => 0.0,
                };
            }
        }
        for i in 0..n {
            for k in 0..n {
                prod[i * n + k] = (0..n).map(|j| sym[i * n + j] * anti[j * n + k]).sum();
            }
        }
        for i in 0..n {
            for k in i + 1..n {
                let pos = pair_pos[i][k].expect("ordered pair");
                out.components_mut()[pos][p] = prod[i * n + k] - prod[k * n + i];
            }
        }
    }
    out
}

fn relative_defect(a: &SpectralFormField, b: &SpectralFormField) -> Result<f64> {
    let diff = a.try_sub(b)?.energy().sqrt();
    let scale = a.energy().sqrt().max(b.energy().sqrt());
    Ok(if scale > 0.0 { diff / scale } else { 0.0 })
}

/// Both induction paths from precomputed node fields and spectral `b`.
pub fn induction_from_fields(fields: &NodeFields, b: &SpectralFormField, fraction: f64) -> Result<InductionTerm> {
    let n = fields.dim();
    let primary = d_spec(&dealias(&contract_fields(&fields.u, &fields.b)?.forward(), fraction)?);

    let grid = fields.u.grid();
    let mut delta_u = PhysicalFormField::zeros(grid, 0);
    for i in 0..n {
        for (d, g) in delta_u.components_mut()[0].iter_mut().zip(&fields.grad_u[i * n + i]) {
            *d -= g;
        }
    }
    let db = d_spec(b).inverse();
    let mut rhs = wedge_fields(&delta_u, &fields.b)?;
    rhs = rhs.try_sub(&wedge_fields(&fields.u, &fields.delta_b)?)?;
    rhs = rhs.try_sub(&contract_fields(&fields.u, &db)?)?;
    rhs = rhs.try_add(&symmetric_gradient_term(&fields.grad_u, &fields.b))?;
    let validation = exact_project(&dealias(&rhs.forward(), fraction)?)?;

    let defect = relative_defect(&primary, &validation)?;
    Ok(InductionTerm { primary, validation, defect })
}

/// `d(u⌟b)` by both paths; fails when they disagree beyond `tolerance`.
pub fn nonlin_induction(
    u: &SpectralFormField,
    b: &SpectralFormField,
    fraction: f64,
    tolerance: f64,
) -> Result<InductionTerm> {
    let fields = NodeFields::new(u, b)?;
    let term = induction_from_fields(&fields, b, fraction)?;
    if !(term.defect <= tolerance) {
        return Err(Error::NumericalConsistency { defect: term.defect, tolerance });
    }
    Ok(term)
}

/// `d(u⌟b)` for distinct `u`, `b` (primary path only), dealiased.
pub fn nonlin_induction_pair(u: &SpectralFormField, b: &SpectralFormField, fraction: f64) -> Result<SpectralFormField> {
    u.require_grade(1)?;
    b.require_grade(2)?;
    Ok(d_spec(&dealias(&contract_fields(&u.inverse(), &b.inverse())?.forward(), fraction)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{leray_project, TorusGrid};
    use std::f64::consts::PI;

    fn grid() -> TorusGrid {
        TorusGrid::new(3, 16, 2.0 * PI).unwrap()
    }

    #[test]
    fn convection_of_shear_pair() {
        // u = sin x2 e1 + sin x1 e2, (u·∇)u = sin x1 cos x2 e1 + cos x1 sin x2 e2.
        let g = grid();
        let u = PhysicalFormField::from_fn(&g, 1, |x, out| {
            out[0] = x[1].sin();
            out[1] = x[0].sin();
        });
        let c = nonlin_convection(&u.forward(), 2.0 / 3.0).unwrap().inverse();
        let expected = PhysicalFormField::from_fn(&g, 1, |x, out| {
            out[0] = x[0].sin() * x[1].cos();
            out[1] = x[0].cos() * x[1].sin();
        });
        assert!(c.try_sub(&expected).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn constants_give_zero() {
        let g = grid();
        let u = PhysicalFormField::from_fn(&g, 1, |_, out| out.copy_from_slice(&[1.0, -2.0, 0.5])).forward();
        let b = PhysicalFormField::from_fn(&g, 2, |_, out| out.copy_from_slice(&[0.3, 1.0, -1.0])).forward();
        assert!(nonlin_convection(&u, 2.0 / 3.0).unwrap().max_abs() < 1e-15);
        assert!(nonlin_lorentz(&b, 2.0 / 3.0).unwrap().max_abs() < 1e-15);
        let t = nonlin_induction(&u, &b, 2.0 / 3.0, 1e-8).unwrap();
        assert!(t.primary.max_abs() < 1e-15);
        assert_eq!(t.defect, 0.0);
    }

    #[test]
    fn lorentz_single_mode_matches_vector_form() {
        // b ~ B = (0, 0, sin x1) under e23~x, e31~y, e12~z; curl B = (0, −cos x1, 0),
        // and δb⌟b ~ B × curl B = (sin x1 cos x1, 0, 0).
        let g = grid();
        let b = PhysicalFormField::from_fn(&g, 2, |x, out| out[0] = x[0].sin()).forward();
        let l = nonlin_lorentz(&b, 2.0 / 3.0).unwrap().inverse();
        let expected = PhysicalFormField::from_fn(&g, 1, |x, out| out[0] = x[0].sin() * x[0].cos());
        assert!(l.try_sub(&expected).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn induction_paths_agree_on_band_limited_pair() {
        let g = grid();
        let u = PhysicalFormField::from_fn(&g, 1, |x, out| {
            out[0] = (x[1] + 2.0 * x[2]).sin();
            out[1] = (x[0] - x[2]).cos();
            out[2] = (2.0 * x[0] + x[1]).sin();
        });
        let b = PhysicalFormField::from_fn(&g, 2, |x, out| {
            out[0] = (x[2] - x[1]).cos();
            out[1] = (x[0] + x[1] + x[2]).sin();
            out[2] = (3.0 * x[1]).cos();
        });
        let u = leray_project(&u.forward()).unwrap();
        let b = exact_project(&b.forward()).unwrap();
        let t = nonlin_induction(&u, &b, 2.0 / 3.0, 1e-8).unwrap();
        assert!(t.primary.max_abs() > 1e-3);
        assert!(t.defect < 1e-12, "{}", t.defect);
    }
}
