//! Measured constants and invariant monitors around the Picard solver.

use crate::error::{Error, Result};
use crate::spectral::{d_spec, exact_project, leray_project, PhysicalFormField, Semigroup, SpectralFormField};

use super::config::SolverConfig;
use super::duhamel::{project_for, DuhamelAccumulator, DuhamelWeights};
use super::mesh::TimeMesh;
use super::nonlinear::{nonlin_convection_pair, nonlin_induction_pair, nonlin_lorentz_pair, NodeFields};
use super::norms::{node_norms, CriticalNorms};
use super::picard::{free_evolution, ingest, node_sources, picard_solve_projected};

fn check_nodes(mesh: &TimeMesh, trajectories: &[&[SpectralFormField]]) -> Result<()> {
    let required = mesh.times().len();
    for t in trajectories {
        if t.len() < required {
            return Err(Error::MissingSourceNodes { required, available: t.len() });
        }
    }
    Ok(())
}

fn duhamel_trajectory(
    semigroup: Semigroup,
    mesh: &TimeMesh,
    config: &SolverConfig,
    grade: usize,
    sign: f64,
    mut source: impl FnMut(usize) -> Result<SpectralFormField>,
) -> Result<Vec<SpectralFormField>> {
    let first = source(0)?;
    let grid = first.grid().clone();
    let weights = DuhamelWeights::new(&grid, mesh, config.source_weight)?;
    let mut acc = DuhamelAccumulator::new(&grid, grade);
    let mut out = vec![SpectralFormField::zeros(&grid, grade)];
    for j in 1..mesh.times().len() {
        acc.advance(&weights, &project_for(semigroup, &source(j)?)?)?;
        out.push(acc.value().scaled(sign));
    }
    Ok(out)
}

/// `B1(u1, u2) = −∫ S(t−s) ℙ((u1·∇)u2) ds` on every mesh node.
pub fn b1(u1: &[SpectralFormField], u2: &[SpectralFormField], mesh: &TimeMesh, config: &SolverConfig) -> Result<Vec<SpectralFormField>> {
    check_nodes(mesh, &[u1, u2])?;
    duhamel_trajectory(Semigroup::Stokes, mesh, config, 1, -1.0, |j| {
        nonlin_convection_pair(&u1[j], &u2[j], config.dealias_fraction)
    })
}

/// `B2(b1, b2) = ∫ S(t−s) ℙ(δb1⌟b2) ds` on every mesh node.
pub fn b2(b1: &[SpectralFormField], b2: &[SpectralFormField], mesh: &TimeMesh, config: &SolverConfig) -> Result<Vec<SpectralFormField>> {
    check_nodes(mesh, &[b1, b2])?;
    duhamel_trajectory(Semigroup::Stokes, mesh, config, 1, 1.0, |j| {
        nonlin_lorentz_pair(&b1[j], &b2[j], config.dealias_fraction)
    })
}

/// `B3(u, b) = ∫ M(t−s) ℚ(d(u⌟b)) ds` on every mesh node.
pub fn b3(u: &[SpectralFormField], b: &[SpectralFormField], mesh: &TimeMesh, config: &SolverConfig) -> Result<Vec<SpectralFormField>> {
    check_nodes(mesh, &[u, b])?;
    duhamel_trajectory(Semigroup::Maxwell, mesh, config, 2, 1.0, |j| {
        nonlin_induction_pair(&u[j], &b[j], config.dealias_fraction)
    })
}

/// `max_j ‖d b(t_j)‖_∞`.
pub fn db_monitor(b: &[SpectralFormField]) -> f64 {
    b.iter().map(|bj| d_spec(bj).inverse().max_abs()).fold(0.0, f64::max)
}

/// Critical norms of the free evolution on a fresh graded mesh with horizon `horizon`.
pub fn free_evolution_norms(
    u0: &SpectralFormField,
    b0: &SpectralFormField,
    horizon: f64,
    config: &SolverConfig,
) -> Result<CriticalNorms> {
    let mesh = TimeMesh::graded(horizon, config.mesh_nodes, config.grading)?;
    let mut out = CriticalNorms::default();
    for &t in &mesh.times()[1..] {
        let (u, b) = free_evolution(u0, b0, t);
        out.include(t, &node_norms(&NodeFields::new(&u, &b)?)?);
    }
    Ok(out)
}

/// Result of halving the horizon until the free evolution is small.
#[derive(Clone, Debug, PartialEq)]
pub struct HorizonSearch {
    pub horizon: f64,
    /// `(T_k, ‖(S u₀, M b₀)‖_{𝒳_{T_k}})` for every horizon tried.
    pub steps: Vec<(f64, f64)>,
}

/// Halves `T` from `config.horizon` until `‖(S u₀, M b₀)‖_{𝒳_T} ≤ ε`.
///
/// Fails once the first mesh step `T M^{−γ}` drops below machine epsilon
/// relative to the starting horizon.
pub fn local_t_search(u0: &PhysicalFormField, b0: &PhysicalFormField, eps: f64, config: &SolverConfig) -> Result<HorizonSearch> {
    config.validate()?;
    if !(eps > 0.0) {
        return Err(Error::InvalidConfig(format!("target epsilon {eps} must be positive")));
    }
    let (u0, b0) = ingest(u0, b0, config)?;
    let mut horizon = config.horizon;
    let mut steps = Vec::new();
    let resolution = (config.mesh_nodes as f64).powf(config.grading);
    loop {
        let norm = free_evolution_norms(&u0, &b0, horizon, config)?.xt_norm();
        steps.push((horizon, norm));
        if norm <= eps {
            return Ok(HorizonSearch { horizon, steps });
        }
        horizon *= 0.5;
        if horizon / resolution < f64::EPSILON * config.horizon {
            return Err(Error::HorizonUnderflow { horizon, norm });
        }
    }
}

/// Measured boundedness constants of the bilinear terms at the free evolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BilinearConstants {
    pub horizon: f64,
    pub data: CriticalNorms,
    /// `‖Φ(U⁰,U⁰)‖_{𝒳_T} / ‖U⁰‖²_{𝒳_T}`.
    pub c_t: f64,
    /// `‖B1(u⁰,u⁰)‖_{𝒰_T} / ‖u⁰‖²_{𝒰_T}`.
    pub b1_ratio: f64,
    /// `‖B2(b⁰,b⁰)‖_{𝒰_T} / ‖b⁰‖²_{ℬ_T}`.
    pub b2_ratio: f64,
    /// `‖B3(u⁰,b⁰)‖_{ℬ_T} / (‖u⁰‖_{𝒰_T}‖b⁰‖_{ℬ_T})`.
    pub b3_ratio: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Evaluates `Φ(U⁰, U⁰) = (B1 + B2, B3)` at the free evolution of the data.
pub fn measure_bilinear_constants(
    u0: &PhysicalFormField,
    b0: &PhysicalFormField,
    config: &SolverConfig,
) -> Result<BilinearConstants> {
    config.validate()?;
    let (u0, b0) = ingest(u0, b0, config)?;
    let grid = u0.grid().clone();
    let mesh = TimeMesh::graded(config.horizon, config.mesh_nodes, config.grading)?;
    let weights = DuhamelWeights::new(&grid, &mesh, config.source_weight)?;
    let (mut a1, mut a2, mut a3) = (
        DuhamelAccumulator::new(&grid, 1),
        DuhamelAccumulator::new(&grid, 1),
        DuhamelAccumulator::new(&grid, 2),
    );
    let zero_u = SpectralFormField::zeros(&grid, 1);
    let zero_b = SpectralFormField::zeros(&grid, 2);
    let mut data = CriticalNorms::default();
    let mut phi = CriticalNorms::default();
    let (mut n1, mut n2, mut n3) = (CriticalNorms::default(), CriticalNorms::default(), CriticalNorms::default());
    for &t in &mesh.times()[1..] {
        let (u, b) = free_evolution(&u0, &b0, t);
        let fields = NodeFields::new(&u, &b)?;
        data.include(t, &node_norms(&fields)?);
        let (conv, lorentz, induction, _) = node_sources(&fields, &b, config.dealias_fraction)?;
        a1.advance(&weights, &leray_project(&conv.scaled(-1.0))?)?;
        a2.advance(&weights, &leray_project(&lorentz)?)?;
        a3.advance(&weights, &exact_project(&induction)?)?;
        let (v1, v2, v3) = (a1.value(), a2.value(), a3.value());
        n1.include(t, &node_norms(&NodeFields::new(v1, &zero_b)?)?);
        n2.include(t, &node_norms(&NodeFields::new(v2, &zero_b)?)?);
        n3.include(t, &node_norms(&NodeFields::new(&zero_u, v3)?)?);
        phi.include(t, &node_norms(&NodeFields::new(&v1.try_add(v2)?, v3)?)?);
    }
    Ok(BilinearConstants {
        horizon: config.horizon,
        data,
        c_t: ratio(phi.xt_norm(), data.xt_norm().powi(2)),
        b1_ratio: ratio(n1.u_norm(), data.u_norm().powi(2)),
        b2_ratio: ratio(n2.u_norm(), data.b_norm().powi(2)),
        b3_ratio: ratio(n3.b_norm(), data.u_norm() * data.b_norm()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingMode {
    /// Free evolution only.
    Linear,
    /// Full Picard solve.
    Nonlinear,
}

/// Runs the data on `𝕋ⁿ_L` and the rescaled data `λu₀(λ·)`, `λb₀(λ·)` on
/// `𝕋ⁿ_{L/λ}` with horizon `T/λ²`, and returns the largest relative `L²`
/// defect `‖λu(λ²t, λ·) − u_λ(t, ·)‖₂ / ‖λu(λ²t, λ·)‖₂` over the mesh nodes
/// (the same for `b`).
pub fn scaling_check(
    u0: &PhysicalFormField,
    b0: &PhysicalFormField,
    lambda: f64,
    mode: ScalingMode,
    config: &SolverConfig,
) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidConfig(format!("scaling factor {lambda} must be positive")));
    }
    config.validate()?;
    let scaled_cfg = SolverConfig {
        period: config.period / lambda,
        horizon: config.horizon / (lambda * lambda),
        ..config.clone()
    };
    let grid_b = scaled_cfg.grid()?;
    let rescale = |f: &PhysicalFormField| {
        let data = f.components().iter().map(|c| c.iter().map(|v| lambda * v).collect()).collect();
        PhysicalFormField::from_data(&grid_b, f.grade(), data)
    };
    let (ua, ba) = ingest(u0, b0, config)?;
    let (ub, bb) = ingest(&rescale(u0)?, &rescale(b0)?, &scaled_cfg)?;

    let run = |u: &SpectralFormField, b: &SpectralFormField, cfg: &SolverConfig| -> Result<(Vec<SpectralFormField>, Vec<SpectralFormField>)> {
        match mode {
            ScalingMode::Linear => {
                let mesh = TimeMesh::graded(cfg.horizon, cfg.mesh_nodes, cfg.grading)?;
                Ok(mesh.times().iter().map(|&t| free_evolution(u, b, t)).unzip())
            }
            ScalingMode::Nonlinear => {
                let (traj, _) = picard_solve_projected(u, b, cfg)?;
                Ok((traj.u, traj.b))
            }
        }
    };
    let (ua_t, ba_t) = run(&ua, &ba, config)?;
    let (ub_t, bb_t) = run(&ub, &bb, &scaled_cfg)?;

    let rel = |a: &SpectralFormField, b: &SpectralFormField| -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (ca, cb) in a.components().iter().zip(b.components()) {
            for (x, y) in ca.iter().zip(cb) {
                num += (x * lambda - y).norm_sqr();
                den += (x * lambda).norm_sqr();
            }
        }
        if den > 0.0 {
            (num / den).sqrt()
        } else {
            num.sqrt()
        }
    };
    let mut defect = 0.0f64;
    for j in 1..ua_t.len() {
        defect = defect.max(rel(&ua_t[j], &ub_t[j])).max(rel(&ba_t[j], &bb_t[j]));
    }
    Ok(defect)
}
