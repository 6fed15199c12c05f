//! Picard iteration for the mild formulation
//! `u = S(t)u₀ − S∗ℙ((u·∇)u) + S∗ℙ(δb⌟b)`, `b = M(t)b₀ + M∗ℚ(d(u⌟b))`.

use crate::error::{Error, Result};
use crate::spectral::{
    contract_fields, d_spec, dealias, exact_project, leray_project, PhysicalFormField, SpectralFormField, TorusGrid,
};

use super::config::SolverConfig;
use super::duhamel::{heat_in_place, DuhamelAccumulator, DuhamelWeights};
use super::mesh::TimeMesh;
use super::nonlinear::{convection_physical, induction_from_fields, NodeFields};
use super::norms::{node_norms, node_norms_diff, CriticalNorms};

/// Iterate `(u, b)` on the time mesh with its critical norms.
#[derive(Clone, Debug)]
pub struct MildTrajectory {
    pub mesh: TimeMesh,
    pub u: Vec<SpectralFormField>,
    pub b: Vec<SpectralFormField>,
    pub norms: CriticalNorms,
    /// `‖d b(t_j)‖_∞` per node.
    pub db_series: Vec<f64>,
}

impl MildTrajectory {
    pub fn grid(&self) -> &TorusGrid {
        self.u[0].grid()
    }

    pub fn db_monitor(&self) -> f64 {
        self.db_series.iter().fold(0.0, |m, v| m.max(*v))
    }
}

/// One line of the iteration log.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// `‖U^{m} − U^{m−1}‖_{𝒳_T}`.
    pub xt_distance: f64,
    /// Ratio of this distance to the previous one (NaN on the first iteration).
    pub contraction_ratio: f64,
    pub db_monitor: f64,
    /// Largest relative disagreement of the two induction paths in this sweep.
    pub dual_path_defect: f64,
    pub xt_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PicardLog {
    pub records: Vec<IterationRecord>,
    pub converged: bool,
    /// Critical norms of the free evolution `U⁰ = (S(t)u₀, M(t)b₀)`.
    pub initial_norms: CriticalNorms,
}

impl PicardLog {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn final_distance(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.xt_distance)
    }
}

/// Projects and dealiases initial data: `ℙu₀` and `ℚb₀`.
pub fn ingest(
    u0: &PhysicalFormField,
    b0: &PhysicalFormField,
    config: &SolverConfig,
) -> Result<(SpectralFormField, SpectralFormField)> {
    let grid = config.grid()?;
    u0.grid().check_same(&grid)?;
    b0.grid().check_same(&grid)?;
    let u = leray_project(&dealias(&u0.forward(), config.dealias_fraction)?)?;
    let b = exact_project(&dealias(&b0.forward(), config.dealias_fraction)?)?;
    Ok((u, b))
}

/// `(S(t)u₀, M(t)b₀)` for already projected data.
pub fn free_evolution(u0: &SpectralFormField, b0: &SpectralFormField, t: f64) -> (SpectralFormField, SpectralFormField) {
    let (mut u, mut b) = (u0.clone(), b0.clone());
    heat_in_place(&mut u, t);
    heat_in_place(&mut b, t);
    (u, b)
}

/// Quadratic sources at one node: `ℙ(δb⌟b − (u·∇)u)` and `d(u⌟b)`, plus the
/// dual-path defect of the latter.
pub(crate) fn node_sources(
    fields: &NodeFields,
    b: &SpectralFormField,
    fraction: f64,
) -> Result<(SpectralFormField, SpectralFormField, SpectralFormField, f64)> {
    let conv = dealias(&convection_physical(&fields.u, &fields.grad_u).forward(), fraction)?;
    let lorentz = dealias(&contract_fields(&fields.delta_b, &fields.b)?.forward(), fraction)?;
    let induction = induction_from_fields(fields, b, fraction)?;
    Ok((conv, lorentz, induction.primary, induction.defect))
}

/// Runs the Picard iteration from sampled initial data.
pub fn picard_solve(
    u0: &PhysicalFormField,
    b0: &PhysicalFormField,
    config: &SolverConfig,
) -> Result<(MildTrajectory, PicardLog)> {
    config.validate()?;
    let (u0, b0) = ingest(u0, b0, config)?;
    picard_solve_projected(&u0, &b0, config)
}

/// Runs the Picard iteration from projected spectral data.
pub fn picard_solve_projected(
    u0: &SpectralFormField,
    b0: &SpectralFormField,
    config: &SolverConfig,
) -> Result<(MildTrajectory, PicardLog)> {
    config.validate()?;
    let grid = u0.grid().clone();
    let mesh = TimeMesh::graded(config.horizon, config.mesh_nodes, config.grading)?;
    let weights = DuhamelWeights::new(&grid, &mesh, config.source_weight)?;
    let times = mesh.times().to_vec();
    let nodes = times.len();

    let (mut u, mut b): (Vec<_>, Vec<_>) = times.iter().map(|&t| free_evolution(u0, b0, t)).unzip();
    let db0 = d_spec(&b[0]).inverse().max_abs();
    let mut db_series = vec![db0; nodes];
    let mut norms = CriticalNorms::default();
    let mut initial_norms = CriticalNorms::default();
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut converged = false;
    let mut growth = 0usize;
    let omega = config.relaxation;

    for iteration in 1..=config.max_iter {
        let mut acc_u = DuhamelAccumulator::new(&grid, 1);
        let mut acc_b = DuhamelAccumulator::new(&grid, 2);
        let mut distance = CriticalNorms::default();
        let mut new_norms = CriticalNorms::default();
        let mut defect_max = 0.0f64;
        for j in 1..nodes {
            let old = NodeFields::new(&u[j], &b[j])?;
            if iteration == 1 {
                initial_norms.include(times[j], &node_norms(&old)?);
            }
            let (conv, lorentz, induction, defect) = node_sources(&old, &b[j], config.dealias_fraction)?;
            if !defect.is_finite() {
                return Err(non_contraction(iteration, &records));
            }
            if defect > config.consistency_tol {
                return Err(Error::NumericalConsistency { defect, tolerance: config.consistency_tol });
            }
            defect_max = defect_max.max(defect);
            acc_u.advance(&weights, &leray_project(&lorentz.try_sub(&conv)?)?)?;
            acc_b.advance(&weights, &exact_project(&induction)?)?;

            let (mut un, mut bn) = free_evolution(u0, b0, times[j]);
            un.add_scaled(acc_u.value(), 1.0)?;
            bn.add_scaled(acc_b.value(), 1.0)?;
            if omega != 1.0 {
                un = un.scaled(omega);
                un.add_scaled(&u[j], 1.0 - omega)?;
                bn = bn.scaled(omega);
                bn.add_scaled(&b[j], 1.0 - omega)?;
            }
            let new = NodeFields::new(&un, &bn)?;
            new_norms.include(times[j], &node_norms(&new)?);
            distance.include(times[j], &node_norms_diff(&new, &old)?);
            db_series[j] = d_spec(&bn).inverse().max_abs();
            u[j] = un;
            b[j] = bn;
        }
        norms = new_norms;
        let d = distance.xt_norm();
        let prev = records.last().map(|r| r.xt_distance);
        let ratio = prev.map_or(f64::NAN, |p| d / p);
        records.push(IterationRecord {
            iteration,
            xt_distance: d,
            contraction_ratio: ratio,
            db_monitor: db_series.iter().fold(0.0, |m, v| m.max(*v)),
            dual_path_defect: defect_max,
            xt_norm: norms.xt_norm(),
        });
        if !d.is_finite() || !norms.xt_norm().is_finite() {
            return Err(non_contraction(iteration, &records));
        }
        if d < config.tol {
            converged = true;
            break;
        }
        growth = match prev {
            Some(p) if d > p => growth + 1,
            _ => 0,
        };
        if growth >= 3 {
            return Err(non_contraction(iteration, &records));
        }
    }

    let trajectory = MildTrajectory { mesh, u, b, norms, db_series };
    Ok((trajectory, PicardLog { records, converged, initial_norms }))
}

fn non_contraction(iteration: usize, records: &[IterationRecord]) -> Error {
    let distances = records.iter().rev().take(4).rev().map(|r| r.xt_distance).collect();
    Error::NonContraction { iteration, distances }
}
