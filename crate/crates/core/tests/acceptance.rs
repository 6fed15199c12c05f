//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mhd_forms::solver::{
    duhamel, local_t_search, measure_bilinear_constants, nonlin_induction, picard_solve, random_low_mode_field,
    scaling_check, free_evolution_norms, ingest, Preset, ScalingMode, SolverConfig, TimeMesh,
};
use mhd_forms::spectral::{
    coexact_part, d_spec, decay_diagnostic, delta_spec, exact_part, exact_project, inner_product, leray_project,
    log_time_grid, probes, wedge_fields, PhysicalFormField, Semigroup, SpectralFormField, TorusGrid,
};
use mhd_forms::symbolic::{verify_complex, verify_dim3_dictionary, verify_magic};

const MAGIC_TRIALS: usize = 100;
const MAGIC_BUDGET: Duration = Duration::from_secs(60);
const COMPLEX_FORMS: usize = 200;
const COMPLEX_BUDGET: Duration = Duration::from_secs(30);
const SPECTRAL_COMPLEX_TOL: f64 = 1e-12;
const DICTIONARY_TRIALS: usize = 50;
const PROJECTION_PAIRS: u64 = 50;
const IDEMPOTENCE_TOL: f64 = 1e-12;
const ORTHOGONALITY_TOL: f64 = 1e-10;
const COEXACT_LEAK_TOL: f64 = 1e-10;
const DB_TOL: f64 = 1e-8;
const DB_BUDGET: Duration = Duration::from_secs(300);
const DUAL_PATH_PAIRS: u64 = 20;
const DUAL_PATH_TOL: f64 = 1e-8;
const MIN_ITERATIONS: usize = 4;
const MAX_CONTRACTION: f64 = 0.5;
const RESIDUAL_TOL: f64 = 1e-8;
const C_T_SPREAD: f64 = 0.2;
const SCALING_LINEAR_TOL: f64 = 1e-10;
const SCALING_NONLINEAR_TOL: f64 = 1e-4;
const QUADRATURE_MIN_RATIO: f64 = 1.8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ac01() -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    let mut trials = 0;
    for n in 3..=6 {
        match verify_magic(n, 3, MAGIC_TRIALS, 1000 + n as u64) {
            Ok(r) => {
                failures += r.failures.len();
                trials += r.trials;
            }
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && elapsed < MAGIC_BUDGET,
        format!("magic formula: {trials} trials over n=3..6, {failures} failures, {:.1}s", elapsed.as_secs_f64()),
    )
}

/// Largest spectral coefficient divided by `k_max² · max|ŵ|`.
fn spectral_relative(out: &SpectralFormField, w: &SpectralFormField) -> f64 {
    let kmax = w.grid().ksq().iter().fold(0.0f64, |m, k| m.max(*k));
    let scale = kmax * w.max_abs();
    if scale > 0.0 {
        out.max_abs() / scale
    } else {
        0.0
    }
}

fn ac02() -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    let mut forms = 0;
    for n in 3..=6 {
        match verify_complex(n, 3, COMPLEX_FORMS / 4 + 1, 2000 + n as u64) {
            Ok(r) => {
                failures += r.failures.len();
                forms += r.trials;
            }
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        }
    }
    let mut worst: f64 = 0.0;
    for (n, size) in [(3usize, 16usize), (4, 8)] {
        let grid = TorusGrid::new(n, size, 2.0 * PI).expect("grid");
        for grade in 0..=n {
            let w = random_low_mode_field(&grid, grade, 3000 + grade as u64);
            worst = worst.max(spectral_relative(&d_spec(&d_spec(&w)), &w));
            worst = worst.max(spectral_relative(&delta_spec(&delta_spec(&w)), &w));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && forms >= COMPLEX_FORMS && worst <= SPECTRAL_COMPLEX_TOL && elapsed < COMPLEX_BUDGET,
        format!(
            "d^2 = delta^2 = 0: {forms} polynomial forms, {failures} failures; spectral max relative {worst:.2e}; {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn ac03() -> Outcome {
    match verify_dim3_dictionary(3, DICTIONARY_TRIALS, 4000) {
        Ok(r) => outcome(
            r.passed() && r.trials >= DICTIONARY_TRIALS,
            format!("grad/curl/div dictionary: {} trials, {} failures", r.trials, r.failures.len()),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn relative_inf(diff: &SpectralFormField, reference: &SpectralFormField) -> f64 {
    let scale = reference.max_abs();
    if scale > 0.0 {
        diff.max_abs() / scale
    } else {
        diff.max_abs()
    }
}

fn cosine(a: &SpectralFormField, b: &SpectralFormField) -> f64 {
    let (pa, pb) = (a.inverse(), b.inverse());
    let ab = inner_product(&pa, &pb).expect("matching fields");
    let aa = inner_product(&pa, &pa).expect("matching fields");
    let bb = inner_product(&pb, &pb).expect("matching fields");
    if aa > 0.0 && bb > 0.0 {
        ab.abs() / (aa * bb).sqrt()
    } else {
        0.0
    }
}

fn ac04() -> Outcome {
    let grid = TorusGrid::new(3, 16, 2.0 * PI).expect("grid");
    let (mut idem, mut orth, mut leak): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for pair in 0..PROJECTION_PAIRS {
        let u = random_low_mode_field(&grid, 1, 5000 + 2 * pair);
        let b = random_low_mode_field(&grid, 2, 5001 + 2 * pair);
        let pu = leray_project(&u).expect("1-form");
        let qb = exact_project(&b).expect("2-form");
        idem = idem.max(relative_inf(&leray_project(&pu).expect("1-form").try_sub(&pu).expect("same"), &pu));
        idem = idem.max(relative_inf(&exact_project(&qb).expect("2-form").try_sub(&qb).expect("same"), &qb));
        for w in [&u, &b] {
            orth = orth.max(cosine(&exact_part(w), &coexact_part(w)));
        }
        orth = orth.max(cosine(&pu, &u.try_sub(&pu).expect("same")));
        orth = orth.max(cosine(&qb, &b.try_sub(&qb).expect("same")));
        let wedge = wedge_fields(&u.inverse(), &b.inverse()).expect("wedge");
        let coexact = delta_spec(&wedge.forward());
        leak = leak.max(relative_inf(&exact_project(&coexact).expect("2-form"), &coexact));
    }
    outcome(
        idem <= IDEMPOTENCE_TOL && orth <= ORTHOGONALITY_TOL && leak <= COEXACT_LEAK_TOL,
        format!(
            "{PROJECTION_PAIRS} pairs: idempotence {idem:.2e}, orthogonality {orth:.2e}, Q(delta(u^b)) {leak:.2e}"
        ),
    )
}

fn taylor_green(cfg: &SolverConfig) -> (PhysicalFormField, PhysicalFormField) {
    let grid = cfg.grid().expect("grid");
    Preset::from_name("small-taylor-green", cfg.seed).expect("preset").build(&grid).expect("data")
}

/// Shared coupled run for the db and contraction criteria.
fn coupled_config() -> SolverConfig {
    SolverConfig { grid_size: 32, mesh_nodes: 128, horizon: 2.0, period: 2.0 * PI, ..SolverConfig::default() }
}

fn ac05_ac07() -> (Outcome, Outcome) {
    let cfg = coupled_config();
    let (u0, b0) = taylor_green(&cfg);
    let start = Instant::now();
    let run = picard_solve(&u0, &b0, &cfg);
    let elapsed = start.elapsed();
    let (traj, log) = match run {
        Ok(r) => r,
        Err(e) => {
            let msg = format!("coupled run failed: {e}");
            return (outcome(false, msg.clone()), outcome(false, msg));
        }
    };
    let db = traj.db_monitor();
    let ac05 = outcome(
        db <= DB_TOL && elapsed < DB_BUDGET,
        format!("N=32, M=128, T=2: max ||db||_inf = {db:.2e}, {:.1}s", elapsed.as_secs_f64()),
    );

    let ratios: Vec<f64> = log.records.iter().skip(1).map(|r| r.contraction_ratio).collect();
    let worst_ratio = ratios.iter().fold(0.0f64, |m, r| if r.is_nan() { f64::NAN } else { m.max(*r) });
    let residual = log.final_distance();

    let mut c_t = Vec::new();
    for horizon in [cfg.horizon, cfg.horizon / 2.0, cfg.horizon / 4.0] {
        let sub = SolverConfig { horizon, ..cfg.clone() };
        match measure_bilinear_constants(&u0, &b0, &sub) {
            Ok(m) => c_t.push(m.c_t),
            Err(e) => return (ac05, outcome(false, format!("C_T at T={horizon}: {e}"))),
        }
    }
    let lo = c_t.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = c_t.iter().cloned().fold(0.0, f64::max);
    let spread = (hi - lo) / lo;
    let ac07 = outcome(
        log.converged
            && log.iterations() >= MIN_ITERATIONS
            && worst_ratio < MAX_CONTRACTION
            && residual < RESIDUAL_TOL
            && spread < C_T_SPREAD,
        format!(
            "{} iterations, max ratio {worst_ratio:.3}, residual {residual:.2e}; C_T at T,T/2,T/4 = {:.4}, {:.4}, {:.4} (spread {:.1}%)",
            log.iterations(),
            c_t[0],
            c_t[1],
            c_t[2],
            100.0 * spread
        ),
    );
    (ac05, ac07)
}

fn ac06() -> Outcome {
    let grid = TorusGrid::new(3, 16, 2.0 * PI).expect("grid");
    let mut worst: f64 = 0.0;
    for pair in 0..DUAL_PATH_PAIRS {
        let cfg = SolverConfig { grid_size: 16, ..SolverConfig::default() };
        let (u0, b0) = Preset::RandomLowMode { u_amp: 1.0, b_amp: 1.0, seed: 6000 + pair }.build(&grid).expect("data");
        let (u, b) = ingest(&u0, &b0, &cfg).expect("ingest");
        match nonlin_induction(&u, &b, cfg.dealias_fraction, DUAL_PATH_TOL) {
            Ok(term) => worst = worst.max(term.defect),
            Err(e) => return outcome(false, format!("pair {pair}: {e}")),
        }
    }
    outcome(worst <= DUAL_PATH_TOL, format!("{DUAL_PATH_PAIRS} random low-mode pairs: max relative defect {worst:.2e}"))
}

fn ac08() -> Outcome {
    let cfg = SolverConfig { grid_size: 16, mesh_nodes: 64, horizon: 1.0, period: 8.0 * PI, ..SolverConfig::default() };
    let (u0, b0) = taylor_green(&cfg);
    let (u, b) = ingest(&u0, &b0, &cfg).expect("ingest");
    let norms: Vec<f64> = [1.0, 0.5, 0.25, 0.125]
        .iter()
        .map(|&t| free_evolution_norms(&u, &b, t, &cfg).expect("norms").xt_norm())
        .collect();
    let monotone = norms.windows(2).all(|w| w[1] < w[0]);
    let mut below = true;
    let mut found = Vec::new();
    for factor in [1e-1, 1e-2] {
        let eps = factor * norms[0];
        match local_t_search(&u0, &b0, eps, &cfg) {
            Ok(s) => {
                let last = s.steps.last().map_or(f64::NAN, |x| x.1);
                below &= last <= eps;
                found.push(format!("eps={eps:.2e} at T={:.3e}", s.horizon));
            }
            Err(e) => {
                below = false;
                found.push(format!("eps={eps:.2e}: {e}"));
            }
        }
    }
    outcome(
        monotone && below,
        format!(
            "||U0||_X at T=1,1/2,1/4,1/8: {:.4}, {:.4}, {:.4}, {:.4}; {}",
            norms[0],
            norms[1],
            norms[2],
            norms[3],
            found.join("; ")
        ),
    )
}

/// Bounded, and the value at the smallest time does not exceed the value one decade later.
fn no_blow_up(times: &[f64], values: &[f64]) -> bool {
    let decade = times.iter().position(|t| *t >= 10.0 * times[0] * (1.0 - 1e-12)).unwrap_or(values.len() - 1);
    values.iter().all(|v| v.is_finite()) && values[0] <= values[decade]
}

fn ac09() -> Outcome {
    let grid = TorusGrid::new(3, 32, 2.0 * PI).expect("grid");
    let n = 3.0;
    let triples = [(n, 0.5, 2.0 * n), (2.0 * n / 3.0, 1.0, 2.0 * n), (2.0 * n / 3.0, 0.5, n)];
    let times = log_time_grid(1e-3, 1.0, 13);
    let mut pass = true;
    let mut parts = Vec::new();
    for sg in [Semigroup::Stokes, Semigroup::Maxwell] {
        let probe = match sg {
            Semigroup::Stokes => probes::stokes_probe(&grid, 0.5),
            _ => probes::maxwell_probe(&grid, 0.5),
        };
        for &(p, alpha, q) in &triples {
            match decay_diagnostic(sg, &probe, p, q, alpha, &times) {
                Ok(r) => {
                    let ok = no_blow_up(&r.times, &r.ratio) && no_blow_up(&r.times, &r.derivative_ratio);
                    pass &= ok;
                    parts.push(format!(
                        "{}({p:.0},{alpha},{q:.0}) sup {:.3}/{:.3}",
                        sg.name(),
                        r.sup_ratio(),
                        r.sup_derivative_ratio()
                    ));
                }
                Err(e) => {
                    pass = false;
                    parts.push(format!("{}({p},{alpha},{q}): {e}", sg.name()));
                }
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn ac10() -> Outcome {
    let cfg = SolverConfig { grid_size: 16, mesh_nodes: 32, horizon: 1.0, period: 2.0 * PI, ..SolverConfig::default() };
    let (u0, b0) = taylor_green(&cfg);
    let linear = scaling_check(&u0, &b0, 2.0, ScalingMode::Linear, &cfg);
    let nonlinear = scaling_check(&u0, &b0, 2.0, ScalingMode::Nonlinear, &cfg);
    match (linear, nonlinear) {
        (Ok(l), Ok(nl)) => outcome(
            l <= SCALING_LINEAR_TOL && nl <= SCALING_NONLINEAR_TOL,
            format!("lambda=2: linear defect {l:.2e}, nonlinear defect {nl:.2e}"),
        ),
        (Err(e), _) | (_, Err(e)) => outcome(false, e.to_string()),
    }
}

/// `∫₀ᵗ e^{−λ(t−s)} s^{−β} e^{−μs} ds` as a power series.
fn weighted_duhamel_reference(lambda: f64, mu: f64, beta: f64, t: f64) -> f64 {
    let c = lambda - mu;
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 0..200 {
        if k > 0 {
            term *= c * t / k as f64;
        }
        sum += term * t.powf(1.0 - beta) / (k as f64 + 1.0 - beta);
    }
    (-lambda * t).exp() * sum
}

fn ac11() -> Outcome {
    // Single mode cos x1 on 2π-torus: λ = |k|² = 1, Fourier coefficient 1/2.
    let grid = TorusGrid::new(3, 8, 2.0 * PI).expect("grid");
    let f = PhysicalFormField::from_fn(&grid, 0, |x, o| o[0] = x[0].cos()).forward();
    let idx = grid.index_of_mode(&[1, 0, 0]).expect("mode");
    let (lambda, mu, beta, t) = (1.0, 2.0, 0.75, 1.0);
    let exact = 0.5 * weighted_duhamel_reference(lambda, mu, beta, t);
    let mut errors = Vec::new();
    for m in [64usize, 128, 256] {
        let mesh = TimeMesh::graded(t, m, 2.0).expect("mesh");
        let source: Vec<SpectralFormField> = mesh
            .times()
            .iter()
            .map(|&s| f.scaled(if s > 0.0 { s.powf(-beta) * (-mu * s).exp() } else { 0.0 }))
            .collect();
        match duhamel(Semigroup::Heat, &source, &mesh, beta, m) {
            Ok(d) => errors.push((d.components()[0][idx].re - exact).abs() / exact),
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let r1 = errors[0] / errors[1];
    let r2 = errors[1] / errors[2];
    outcome(
        r1 >= QUADRATURE_MIN_RATIO && r2 >= QUADRATURE_MIN_RATIO,
        format!(
            "relative errors at M=64,128,256: {:.2e}, {:.2e}, {:.2e}; ratios {r1:.3}, {r2:.3}",
            errors[0], errors[1], errors[2]
        ),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    let report = |id: u32, o: Outcome, results: &mut Vec<(u32, Outcome)>| {
        println!("[{}] AC-{id:02} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, o));
    };
    report(1, ac01(), &mut results);
    report(2, ac02(), &mut results);
    report(3, ac03(), &mut results);
    report(4, ac04(), &mut results);
    let (o5, o7) = ac05_ac07();
    report(5, o5, &mut results);
    report(6, ac06(), &mut results);
    report(7, o7, &mut results);
    report(8, ac08(), &mut results);
    report(9, ac09(), &mut results);
    report(10, ac10(), &mut results);
    report(11, ac11(), &mut results);
    let failed = results.iter().filter(|(_, o)| !o.pass).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
