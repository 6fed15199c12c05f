//! Streaming product integration of `∫₀ᵗ S(t−s) P f(s) ds`.
//!
//! On each interval `[t_{j−1}, t_j]` the source is written `f(s) = s^{−β} g(s)`
//! and `g` is held at its right-endpoint value; the kernel `e^{−λ(t_j−s)} s^{−β}`
//! is integrated exactly per shell `λ = |k|²`. The semigroup property then
//! gives the recursion `D_j = e^{−λh_j} D_{j−1} + w_j(λ) P g_j`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::spectral::{exact_project, leray_project, Semigroup, SpectralFormField, TorusGrid};

use super::mesh::TimeMesh;
use super::quadrature::kernel_weight;

/// Per-shell decay factors and kernel weights for every mesh interval.
#[derive(Clone, Debug)]
pub struct DuhamelWeights {
    mesh: TimeMesh,
    beta: f64,
    shell: Vec<u32>,
    /// `decay[j−1][s] = e^{−λ_s h_j}`.
    decay: Vec<Vec<f64>>,
    /// `weight[j−1][s] = ∫ e^{−λ_s(t_j−s)} s^{−β} ds` over interval `j`.
    weight: Vec<Vec<f64>>,
}

impl DuhamelWeights {
    pub fn new(grid: &TorusGrid, mesh: &TimeMesh, beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::InvalidConfig(format!("weight exponent {beta} outside [0, 1)")));
        }
        let half = (grid.size() / 2) as i64;
        let m2: Vec<u64> = grid
            .axis_modes()
            .iter()
            .map(|&m| if m == half { 0 } else { (m * m) as u64 })
            .collect();
        let mut ids: BTreeMap<u64, u32> = BTreeMap::new();
        let shell_sq: Vec<u64> = (0..grid.len())
            .map(|idx| (0..grid.dim()).map(|a| m2[grid.axis_index(idx, a)]).sum())
            .collect();
        for s in &shell_sq {
            let next = ids.len() as u32;
            ids.entry(*s).or_insert(next);
        }
        let shell: Vec<u32> = shell_sq.iter().map(|s| ids[s]).collect();
        let mut lambdas = vec![0.0; ids.len()];
        let k2 = grid.kappa() * grid.kappa();
        for (s, id) in &ids {
            lambdas[*id as usize] = k2 * *s as f64;
        }
        let t = mesh.times();
        let mut decay = Vec::with_capacity(mesh.intervals());
        let mut weight = Vec::with_capacity(mesh.intervals());
        for j in 1..t.len() {
            let h = t[j] - t[j - 1];
            decay.push(lambdas.iter().map(|l| (-l * h).exp()).collect());
            weight.push(lambdas.iter().map(|l| kernel_weight(*l, t[j - 1], t[j], beta)).collect());
        }
        Ok(DuhamelWeights { mesh: mesh.clone(), beta, shell, decay, weight })
    }

    pub fn mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Running value `D_j` of a Duhamel integral.
#[derive(Clone, Debug)]
pub struct DuhamelAccumulator {
    value: SpectralFormField,
    node: usize,
}

impl DuhamelAccumulator {
    pub fn new(grid: &TorusGrid, grade: usize) -> Self {
        DuhamelAccumulator { value: SpectralFormField::zeros(grid, grade), node: 0 }
    }

    /// Current mesh node `j` of the value.
    pub fn node(&self) -> usize {
        self.node
    }

    pub fn value(&self) -> &SpectralFormField {
        &self.value
    }

    /// Advances to node `j+1` with the already projected source value `f(t_{j+1})`.
    pub fn advance(&mut self, weights: &DuhamelWeights, source: &SpectralFormField) -> Result<()> {
        self.value.check_compatible(source)?;
        let j = self.node + 1;
        if j > weights.mesh.intervals() {
            return Err(Error::TimeNotOnMesh { index: j, nodes: weights.mesh.times().len() });
        }
        let hold = if weights.beta == 0.0 { 1.0 } else { weights.mesh.times()[j].powf(weights.beta) };
        let (decay, weight) = (&weights.decay[j - 1], &weights.weight[j - 1]);
        for (acc, src) in self.value.components_mut().iter_mut().zip(source.components()) {
            for ((a, g), s) in acc.iter_mut().zip(src).zip(&weights.shell) {
                let s = *s as usize;
                *a = *a * decay[s] + *g * (hold * weight[s]);
            }
        }
        self.node = j;
        Ok(())
    }
}

/// Projection paired with each semigroup.
pub fn project_for(semigroup: Semigroup, w: &SpectralFormField) -> Result<SpectralFormField> {
    match semigroup {
        Semigroup::Heat => Ok(w.clone()),
        Semigroup::Stokes => leray_project(w),
        Semigroup::Maxwell => exact_project(w),
    }
}

/// `∫₀^{t_j} S(t_j − s) P f(s) ds` for source samples `f(t_0), …` on `mesh`,
/// with `s^{−β}` integrated exactly.
pub fn duhamel(
    semigroup: Semigroup,
    source: &[SpectralFormField],
    mesh: &TimeMesh,
    beta: f64,
    j: usize,
) -> Result<SpectralFormField> {
    if j > mesh.intervals() {
        return Err(Error::TimeNotOnMesh { index: j, nodes: mesh.times().len() });
    }
    if source.len() < j + 1 {
        return Err(Error::MissingSourceNodes { required: j + 1, available: source.len() });
    }
    let grid = source[0].grid();
    let weights = DuhamelWeights::new(grid, mesh, beta)?;
    let mut acc = DuhamelAccumulator::new(grid, source[0].grade());
    for f in &source[1..=j] {
        acc.advance(&weights, &project_for(semigroup, f)?)?;
    }
    Ok(acc.value)
}

/// Multiplies `w` by `e^{−t|k|²}` in place.
pub(crate) fn heat_in_place(w: &mut SpectralFormField, t: f64) {
    let factors: Vec<f64> = w.grid().ksq().iter().map(|k| (-t * k).exp()).collect();
    for comp in w.components_mut() {
        for (c, f) in comp.iter_mut().zip(&factors) {
            *c *= *f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::PhysicalFormField;

    fn mode_field(grid: &TorusGrid) -> SpectralFormField {
        PhysicalFormField::from_fn(grid, 1, |x, out| out[2] = (2.0 * x[0]).cos()).forward()
    }

    #[test]
    fn zero_source_gives_zero() {
        let g = TorusGrid::new(3, 8, 2.0 * std::f64::consts::PI).unwrap();
        let mesh = TimeMesh::graded(1.0, 8, 2.0).unwrap();
        let src = vec![SpectralFormField::zeros(&g, 1); 9];
        assert_eq!(duhamel(Semigroup::Stokes, &src, &mesh, 0.0, 8).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn constant_source_matches_closed_form() {
        let g = TorusGrid::new(3, 8, 2.0 * std::f64::consts::PI).unwrap();
        let mesh = TimeMesh::graded(1.5, 16, 2.0).unwrap();
        let f = mode_field(&g);
        let src = vec![f.clone(); 17];
        let out = duhamel(Semigroup::Heat, &src, &mesh, 0.0, 16).unwrap();
        let idx = g.index_of_mode(&[2, 0, 0]).unwrap();
        let lambda = 4.0;
        let expected = f.components()[2][idx] * (1.0 - (-lambda * 1.5f64).exp()) / lambda;
        assert!((out.components()[2][idx] - expected).norm() < 1e-14);
    }

    #[test]
    fn errors() {
        let g = TorusGrid::new(3, 4, 1.0).unwrap();
        let mesh = TimeMesh::graded(1.0, 4, 2.0).unwrap();
        let src = vec![SpectralFormField::zeros(&g, 1); 3];
        assert!(matches!(
            duhamel(Semigroup::Heat, &src, &mesh, 0.0, 5),
            Err(Error::TimeNotOnMesh { index: 5, .. })
        ));
        assert!(matches!(
            duhamel(Semigroup::Heat, &src, &mesh, 0.0, 4),
            Err(Error::MissingSourceNodes { required: 5, available: 3 })
        ));
    }
}
