//! Critical norms of the 𝒰_T and ℬ_T spaces, sampled on the time mesh.

use crate::error::Result;
use crate::spectral::{lp_norm_components, SpectralFormField, TorusGrid};

use super::mesh::TimeMesh;
use super::nonlinear::NodeFields;

/// Unweighted norms of one state: `‖u‖_{2n}`, `‖∇u‖_n`, `‖b‖_{2n}`, `‖δb‖_n`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NodeNorms {
    pub u_l2n: f64,
    pub grad_u_ln: f64,
    pub b_l2n: f64,
    pub delta_b_ln: f64,
}

/// `sup_j t_j^{1/4}‖u‖_{2n}`, `sup_j t_j^{1/2}‖∇u‖_n`, `sup_j t_j^{1/4}‖b‖_{2n}`,
/// `sup_j t_j^{1/2}‖δb‖_n` over the nodes `t_j > 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CriticalNorms {
    pub u_l2n: f64,
    pub grad_u_ln: f64,
    pub b_l2n: f64,
    pub delta_b_ln: f64,
}

impl CriticalNorms {
    /// `‖u‖_{𝒰_T}`.
    pub fn u_norm(&self) -> f64 {
        self.u_l2n + self.grad_u_ln
    }

    /// `‖b‖_{ℬ_T}`.
    pub fn b_norm(&self) -> f64 {
        self.b_l2n + self.delta_b_ln
    }

    /// `‖(u, b)‖_{𝒳_T}`.
    pub fn xt_norm(&self) -> f64 {
        self.u_norm() + self.b_norm()
    }

    /// Folds in the norms at time `t > 0`. NaN propagates.
    pub fn include(&mut self, t: f64, node: &NodeNorms) {
        let (q, h) = (t.powf(0.25), t.sqrt());
        let sup = |a: f64, b: f64| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) };
        self.u_l2n = sup(self.u_l2n, q * node.u_l2n);
        self.grad_u_ln = sup(self.grad_u_ln, h * node.grad_u_ln);
        self.b_l2n = sup(self.b_l2n, q * node.b_l2n);
        self.delta_b_ln = sup(self.delta_b_ln, h * node.delta_b_ln);
    }
}

fn slices(v: &[Vec<f64>]) -> Vec<&[f64]> {
    v.iter().map(|c| c.as_slice()).collect()
}

fn norm_of(grid: &TorusGrid, comps: Vec<&[f64]>, p: f64) -> Result<f64> {
    lp_norm_components(grid, &comps, p)
}

pub fn node_norms(f: &NodeFields) -> Result<NodeNorms> {
    let grid = f.u.grid();
    let n = grid.dim() as f64;
    Ok(NodeNorms {
        u_l2n: norm_of(grid, slices(f.u.components()), 2.0 * n)?,
        grad_u_ln: norm_of(grid, slices(&f.grad_u), n)?,
        b_l2n: norm_of(grid, slices(f.b.components()), 2.0 * n)?,
        delta_b_ln: norm_of(grid, slices(f.delta_b.components()), n)?,
    })
}

/// Norms of the difference of two states.
pub fn node_norms_diff(a: &NodeFields, b: &NodeFields) -> Result<NodeNorms> {
    let diff = |x: &[Vec<f64>], y: &[Vec<f64>]| -> Vec<Vec<f64>> {
        x.iter().zip(y).map(|(p, q)| p.iter().zip(q).map(|(s, t)| s - t).collect()).collect()
    };
    let grid = a.u.grid();
    grid.check_same(b.u.grid())?;
    let n = grid.dim() as f64;
    Ok(NodeNorms {
        u_l2n: norm_of(grid, slices(&diff(a.u.components(), b.u.components())), 2.0 * n)?,
        grad_u_ln: norm_of(grid, slices(&diff(&a.grad_u, &b.grad_u)), n)?,
        b_l2n: norm_of(grid, slices(&diff(a.b.components(), b.b.components())), 2.0 * n)?,
        delta_b_ln: norm_of(grid, slices(&diff(a.delta_b.components(), b.delta_b.components())), n)?,
    })
}

/// Critical norms of a trajectory `(u(t_j), b(t_j))`.
pub fn critical_norms(mesh: &TimeMesh, u: &[SpectralFormField], b: &[SpectralFormField]) -> Result<CriticalNorms> {
    let mut out = CriticalNorms::default();
    for (j, t) in mesh.times().iter().enumerate().skip(1) {
        out.include(*t, &node_norms(&NodeFields::new(&u[j], &b[j])?)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_and_sums() {
        let mut c = CriticalNorms::default();
        c.include(16.0, &NodeNorms { u_l2n: 1.0, grad_u_ln: 1.0, b_l2n: 2.0, delta_b_ln: 0.5 });
        c.include(1.0, &NodeNorms { u_l2n: 3.0, grad_u_ln: 1.0, b_l2n: 0.0, delta_b_ln: 0.0 });
        assert_eq!(c, CriticalNorms { u_l2n: 3.0, grad_u_ln: 4.0, b_l2n: 4.0, delta_b_ln: 2.0 });
        assert_eq!(c.xt_norm(), 13.0);
        c.include(1.0, &NodeNorms { u_l2n: f64::NAN, ..Default::default() });
        assert!(c.xt_norm().is_nan());
    }
}
