//! The four subcommands. Each returns its exit status; errors are mapped by
//! the caller.

use std::f64::consts::PI;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use mhd_forms::solver::{
    ingest, local_t_search, picard_solve, random_low_mode_field, scaling_check, CriticalNorms, ScalingMode,
    SolverConfig,
};
use mhd_forms::spectral::io::read_field;
use mhd_forms::spectral::{
    check_exponents, coexact_part, d_spec, decay_diagnostic, delta_spec, exact_part, exact_project, inner_product,
    leray_project, log_time_grid, probes, wedge_fields, PhysicalFormField, Semigroup, SpectralFormField, TorusGrid,
};
use mhd_forms::symbolic::{
    verify_complex, verify_dim3_dictionary, verify_magic_with, ContractionRule, Counterexample, SuiteReport,
};

use crate::config::RunConfig;
use crate::error::{exit, CliError};
use crate::output::{fmt_f64, OutputDir};

/// Deliberate defects for exercising the failure paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    FlipContractSign,
}

pub const SPECTRAL_COMPLEX_TOL: f64 = 1e-12;
pub const IDEMPOTENCE_TOL: f64 = 1e-12;
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
pub const SCALING_LINEAR_TOL: f64 = 1e-10;
pub const SCALING_NONLINEAR_TOL: f64 = 1e-4;

/// Outcome of a command that ran to completion.
pub struct Finished {
    pub code: u8,
    pub status: String,
}

fn finished(code: u8, status: impl Into<String>) -> Finished {
    Finished { code, status: status.into() }
}

struct SuiteRow {
    report: SuiteReport,
    n: usize,
    degree: u32,
    max_defect: f64,
}

/// Spectral suite: `d² = δ² = 0` relative to `k²_max max|ŵ|` on random fields.
fn spectral_complex_suite(n: usize, trials: usize, seed: u64) -> Result<(SuiteReport, f64), CliError> {
    let grid = TorusGrid::new(n, spectral_size(n), 2.0 * PI)?;
    let kmax = grid.ksq().iter().fold(0.0f64, |m, k| m.max(*k));
    let mut report = SuiteReport { name: format!("spectral d^2 = delta^2 = 0 (n={n})"), ..empty_report() };
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let grade = trial % (n + 1);
        let w = random_low_mode_field(&grid, grade, seed + trial as u64);
        let scale = kmax * w.max_abs();
        let defect = if scale > 0.0 {
            d_spec(&d_spec(&w)).max_abs().max(delta_spec(&delta_spec(&w)).max_abs()) / scale
        } else {
            0.0
        };
        report.trials += 1;
        worst = worst.max(defect);
        if !(defect <= SPECTRAL_COMPLEX_TOL) {
            report.failures.push(Counterexample {
                trial,
                description: format!("grade {grade} field (seed {}): relative defect {defect:e}", seed + trial as u64),
            });
        }
    }
    Ok((report, worst))
}

fn spectral_size(n: usize) -> usize {
    if n <= 4 {
        8
    } else {
        4
    }
}

fn empty_report() -> SuiteReport {
    SuiteReport { name: String::new(), trials: 0, max_terms: 0, failures: Vec::new() }
}

fn relative(diff: &SpectralFormField, reference: &SpectralFormField) -> f64 {
    let s = reference.max_abs();
    if s > 0.0 {
        diff.max_abs() / s
    } else {
        diff.max_abs()
    }
}

fn cosine(a: &SpectralFormField, b: &SpectralFormField) -> Result<f64, CliError> {
    let (pa, pb) = (a.inverse(), b.inverse());
    let ab = inner_product(&pa, &pb)?;
    let norm = (inner_product(&pa, &pa)? * inner_product(&pb, &pb)?).sqrt();
    Ok(if norm > 0.0 { ab.abs() / norm } else { 0.0 })
}

/// Projection suite on random `(u, b)` pairs: idempotence of ℙ and ℚ,
/// orthogonality of the Hodge parts and `ℚ(δ(u∧b)) = 0`.
fn projection_suite(n: usize, trials: usize, seed: u64) -> Result<(SuiteReport, f64), CliError> {
    let grid = TorusGrid::new(n, spectral_size(n), 2.0 * PI)?;
    let mut report = SuiteReport { name: format!("Hodge projections (n={n})"), ..empty_report() };
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let s = seed + 2 * trial as u64;
        let u = random_low_mode_field(&grid, 1, s);
        let b = random_low_mode_field(&grid, 2, s + 1);
        let pu = leray_project(&u)?;
        let qb = exact_project(&b)?;
        let idem = relative(&leray_project(&pu)?.try_sub(&pu)?, &pu)
            .max(relative(&exact_project(&qb)?.try_sub(&qb)?, &qb));
        let orth = cosine(&exact_part(&u), &coexact_part(&u))?.max(cosine(&exact_part(&b), &coexact_part(&b))?);
        let coexact = delta_spec(&wedge_fields(&u.inverse(), &b.inverse())?.forward());
        let leak = relative(&exact_project(&coexact)?, &coexact);
        report.trials += 1;
        worst = worst.max(idem).max(orth).max(leak);
        if !(idem <= IDEMPOTENCE_TOL && orth <= ORTHOGONALITY_TOL && leak <= ORTHOGONALITY_TOL) {
            report.failures.push(Counterexample {
                trial,
                description: format!(
                    "seeds {s}, {}: idempotence {idem:e}, orthogonality {orth:e}, Q(delta(u^b)) {leak:e}",
                    s + 1
                ),
            });
        }
    }
    Ok((report, worst))
}

pub fn verify_identities(cfg: &RunConfig, out: &mut OutputDir, fault: Option<Fault>) -> Result<Finished, CliError> {
    let id = &cfg.identities;
    if id.dims.iter().any(|n| !(3..=6).contains(n)) {
        return Err(CliError::Config(format!("dims {:?} must lie in 3..=6", id.dims)));
    }
    if id.degree > 4 {
        return Err(CliError::Config(format!("degree {} exceeds 4", id.degree)));
    }
    let rule = match fault {
        Some(Fault::FlipContractSign) => ContractionRule::FlippedSign,
        None => ContractionRule::Standard,
    };
    let spectral_trials = id.spectral_trials.min(id.trials);
    let seed = cfg.seed;
    let mut rows = Vec::new();
    for &n in &id.dims {
        let nseed = seed.wrapping_add(1000 * n as u64);
        rows.push(SuiteRow { report: verify_complex(n, id.degree, id.trials, nseed)?, n, degree: id.degree, max_defect: 0.0 });
        rows.push(SuiteRow {
            report: verify_magic_with(n, id.degree, id.trials, nseed + 1, rule)?,
            n,
            degree: id.degree,
            max_defect: 0.0,
        });
        if n == 3 {
            rows.push(SuiteRow {
                report: verify_dim3_dictionary(id.degree, id.trials, nseed + 2)?,
                n,
                degree: id.degree,
                max_defect: 0.0,
            });
        }
        let (r, d) = spectral_complex_suite(n, spectral_trials, nseed + 3)?;
        rows.push(SuiteRow { report: r, n, degree: 0, max_defect: d });
        let (r, d) = projection_suite(n, spectral_trials, nseed + 500)?;
        rows.push(SuiteRow { report: r, n, degree: 0, max_defect: d });
    }

    let mut table = out.csv(
        "identities.csv",
        "identity-suites",
        &["suite", "n", "degree", "trials", "failures", "max_terms", "max_defect", "status"],
    )?;
    let mut dump = String::new();
    let mut failed = 0;
    for row in &rows {
        let r = &row.report;
        let status = if r.passed() { "pass" } else { "fail" };
        table.row(&[
            r.name.clone(),
            row.n.to_string(),
            row.degree.to_string(),
            r.trials.to_string(),
            r.failures.len().to_string(),
            r.max_terms.to_string(),
            fmt_f64(row.max_defect),
            status.to_string(),
        ])?;
        println!("{status:4}  {:<55} {:>5} trials  {} failures", r.name, r.trials, r.failures.len());
        if !r.passed() {
            failed += 1;
            for c in &r.failures {
                dump.push_str(&format!("[{}] trial {}: {}\n", r.name, c.trial, c.description));
            }
        }
    }
    table.finish()?;
    out.text("counterexamples.txt", &dump)?;
    if failed > 0 {
        let first = dump.lines().next().unwrap_or_default();
        eprintln!("{failed} suite(s) failed; first counterexample:\n{first}");
        eprintln!("all counterexamples: {}", out.root().join("counterexamples.txt").display());
        Ok(finished(exit::CHECK_FAILED, format!("{failed} suites failed")))
    } else {
        Ok(finished(exit::OK, "all suites passed"))
    }
}

fn load_field(path: &Path, grid: &TorusGrid, grade: usize) -> Result<PhysicalFormField, CliError> {
    let file = File::open(path).map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
    let field = read_field(BufReader::new(file))
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if !field.grid().same_as(grid) || field.grade() != grade {
        return Err(CliError::Config(format!(
            "{}: expected a grade-{grade} field on the configured grid",
            path.display()
        )));
    }
    Ok(field)
}

fn initial_data(cfg: &RunConfig, grid: &TorusGrid) -> Result<(PhysicalFormField, PhysicalFormField), CliError> {
    let (mut u0, mut b0) = cfg.preset()?.build(grid)?;
    if let Some(p) = &cfg.solver.u0_file {
        u0 = load_field(p, grid, 1)?;
    }
    if let Some(p) = &cfg.solver.b0_file {
        b0 = load_field(p, grid, 2)?;
    }
    Ok((u0, b0))
}

fn norm_row(kind: &str, horizon: f64, c: &CriticalNorms) -> Vec<String> {
    let mut row = vec![kind.to_string()];
    row.extend(
        [horizon, c.u_l2n, c.grad_u_ln, c.b_l2n, c.delta_b_ln, c.u_norm(), c.b_norm(), c.xt_norm()]
            .iter()
            .map(|v| fmt_f64(*v)),
    );
    row
}

pub fn simulate(cfg: &RunConfig, out: &mut OutputDir) -> Result<Finished, CliError> {
    let mut solver: SolverConfig = cfg.solver_config()?;
    let grid = solver.grid()?;
    let (u0, b0) = initial_data(cfg, &grid)?;
    out.field("u0", &u0)?;
    out.field("b0", &b0)?;

    if cfg.solver.horizon_search {
        let search = local_t_search(&u0, &b0, cfg.solver.search_eps, &solver)?;
        let mut table = out.csv("horizon_search.csv", "horizon-search", &["step", "horizon", "xt_norm"])?;
        for (i, (t, norm)) in search.steps.iter().enumerate() {
            table.row(&[i.to_string(), fmt_f64(*t), fmt_f64(*norm)])?;
        }
        table.finish()?;
        if search.horizon < solver.horizon {
            println!("horizon reduced to T = {:e} (free evolution norm <= {:e})", search.horizon, cfg.solver.search_eps);
        }
        solver.horizon = search.horizon;
    }

    let (traj, log) = picard_solve(&u0, &b0, &solver)?;

    let mut table = out.csv(
        "iterations.csv",
        "picard-iterations",
        &["iteration", "xt_distance", "contraction_ratio", "db_monitor", "dual_path_defect", "xt_norm"],
    )?;
    for r in &log.records {
        table.row(&[
            r.iteration.to_string(),
            fmt_f64(r.xt_distance),
            fmt_f64(r.contraction_ratio),
            fmt_f64(r.db_monitor),
            fmt_f64(r.dual_path_defect),
            fmt_f64(r.xt_norm),
        ])?;
    }
    table.finish()?;

    let mut table = out.csv(
        "critical_norms.csv",
        "critical-norms",
        &["kind", "horizon", "u_l2n", "grad_u_ln", "b_l2n", "delta_b_ln", "u_norm", "b_norm", "xt_norm"],
    )?;
    table.row(&norm_row("free_evolution", solver.horizon, &log.initial_norms))?;
    table.row(&norm_row("solution", solver.horizon, &traj.norms))?;
    table.finish()?;

    let mut table = out.csv("db_series.csv", "db-monitor", &["node", "t", "db_inf"])?;
    for (j, (t, db)) in traj.mesh.times().iter().zip(&traj.db_series).enumerate() {
        table.row(&[j.to_string(), fmt_f64(*t), fmt_f64(*db)])?;
    }
    table.finish()?;

    let last = traj.u.len() - 1;
    out.field("u_final", &traj.u[last].inverse())?;
    out.field("b_final", &traj.b[last].inverse())?;

    println!(
        "{} iterations, final distance {:e}, ||U||_X = {:e}, max ||db||_inf = {:e}",
        log.iterations(),
        log.final_distance(),
        traj.norms.xt_norm(),
        traj.db_monitor()
    );
    if log.converged {
        Ok(finished(exit::OK, "converged"))
    } else {
        eprintln!("Picard iteration did not reach tol = {:e} within {} iterations", solver.tol, solver.max_iter);
        Ok(finished(exit::NOT_CONTRACTING, "not converged"))
    }
}

pub fn decay(cfg: &RunConfig, out: &mut OutputDir) -> Result<Finished, CliError> {
    let d = &cfg.decay;
    let n = cfg.solver.n;
    for &[p, alpha, q] in &d.triples {
        check_exponents(p, q, alpha, n)?;
    }
    let semigroups = cfg.semigroups()?;
    if !(d.t_min > 0.0 && d.t_max > d.t_min && d.samples >= 2) {
        return Err(CliError::Config(format!(
            "time grid needs 0 < t_min < t_max and samples >= 2 (got {}, {}, {})",
            d.t_min, d.t_max, d.samples
        )));
    }
    if !(d.probe_width > 0.0) {
        return Err(CliError::Config(format!("probe_width {} must be positive", d.probe_width)));
    }
    let grid = TorusGrid::new(n, cfg.solver.grid_size, cfg.solver.period)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let times = log_time_grid(d.t_min, d.t_max, d.samples);
    let mut table = out.csv(
        "decay.csv",
        "decay-ratios",
        &["semigroup", "n", "p", "alpha", "q", "t", "ratio", "derivative_ratio"],
    )?;
    let mut worst = Vec::new();
    for sg in semigroups {
        if d.triples.is_empty() {
            break;
        }
        let probe = match sg {
            Semigroup::Heat => probes::heat_probe(&grid, d.probe_width),
            Semigroup::Stokes => probes::stokes_probe(&grid, d.probe_width),
            Semigroup::Maxwell => probes::maxwell_probe(&grid, d.probe_width),
        };
        for &[p, alpha, q] in &d.triples {
            let r = decay_diagnostic(sg, &probe, p, q, alpha, &times)?;
            for ((t, ratio), dr) in r.times.iter().zip(&r.ratio).zip(&r.derivative_ratio) {
                let mut row = vec![sg.name().to_string(), n.to_string()];
                row.extend([p, alpha, q, *t, *ratio, *dr].iter().map(|v| fmt_f64(*v)));
                table.row(&row)?;
            }
            worst.push(format!("{}({p},{alpha},{q}) sup {:.4}", sg.name(), r.sup_ratio()));
        }
    }
    table.finish()?;
    for w in &worst {
        println!("{w}");
    }
    Ok(finished(exit::OK, format!("{} curves", worst.len())))
}

pub fn scaling(cfg: &RunConfig, out: &mut OutputDir) -> Result<Finished, CliError> {
    let solver = cfg.solver_config()?;
    let lambda = cfg.scaling.lambda;
    let grid = solver.grid()?;
    let (u0, b0) = initial_data(cfg, &grid)?;
    // Reject data the solver would refuse before running both resolutions.
    ingest(&u0, &b0, &solver)?;
    let mut table =
        out.csv("scaling.csv", "scaling-check", &["mode", "lambda", "defect", "tolerance", "status"])?;
    let mut failed = 0;
    for (mode, name, tol) in [
        (ScalingMode::Linear, "linear", SCALING_LINEAR_TOL),
        (ScalingMode::Nonlinear, "nonlinear", SCALING_NONLINEAR_TOL),
    ] {
        let defect = scaling_check(&u0, &b0, lambda, mode, &solver)?;
        let ok = defect <= tol;
        if !ok {
            failed += 1;
        }
        let status = if ok { "pass" } else { "fail" };
        table.row(&[name.into(), fmt_f64(lambda), fmt_f64(defect), fmt_f64(tol), status.into()])?;
        println!("{status:4}  {name:<9} lambda = {lambda}: defect {defect:e} (tolerance {tol:e})");
    }
    table.finish()?;
    if failed > 0 {
        Ok(finished(exit::CHECK_FAILED, "scaling defect above tolerance"))
    } else {
        Ok(finished(exit::OK, "scaling covariance holds"))
    }
}
