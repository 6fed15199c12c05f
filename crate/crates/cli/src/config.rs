//! Run configuration: a TOML file plus command-line overrides.
//!
//! Every key is optional; missing keys take the defaults below. Flags win
//! over the file.
//!
//! ```toml
//! seed = 0
//! preset = "small-taylor-green"   # zero | small-taylor-green | huge-taylor-green | random
//!
//! [solver]
//! n = 3
//! grid_size = 32
//! period = 6.283185307179586
//! horizon = 1.0
//! mesh_nodes = 128
//! grading = 2.0
//! dealias_fraction = 0.6666666666666666
//! max_iter = 50
//! tol = 1e-10
//! relaxation = 1.0
//! source_weight = 0.0
//! consistency_tol = 1e-8
//! horizon_search = true
//! search_eps = 1.0
//! u0_file = "u0.bin"    # optional field files, override the preset
//! b0_file = "b0.bin"
//!
//! [identities]
//! dims = [3, 4, 5, 6]
//! degree = 3
//! trials = 100
//! spectral_trials = 20
//!
//! [decay]
//! triples = [[3.0, 0.5, 6.0], [2.0, 1.0, 6.0], [2.0, 0.5, 3.0], [3.0, 0.0, 3.0]]
//! semigroups = ["heat", "stokes", "maxwell"]
//! t_min = 1e-3
//! t_max = 1.0
//! samples = 13
//! probe_width = 0.5
//!
//! [scaling]
//! lambda = 2.0
//! ```

use std::path::{Path, PathBuf};

use mhd_forms::solver::{Preset, SolverConfig};
use mhd_forms::spectral::Semigroup;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub preset: String,
    pub solver: SolverSection,
    pub identities: IdentitySection,
    pub decay: DecaySection,
    pub scaling: ScalingSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub n: usize,
    pub grid_size: usize,
    pub period: f64,
    pub horizon: f64,
    pub mesh_nodes: usize,
    pub grading: f64,
    pub dealias_fraction: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub relaxation: f64,
    pub source_weight: f64,
    pub consistency_tol: f64,
    /// Halve the horizon until the free evolution is below `search_eps`.
    pub horizon_search: bool,
    pub search_eps: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u0_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b0_file: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentitySection {
    pub dims: Vec<usize>,
    pub degree: u32,
    pub trials: usize,
    pub spectral_trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecaySection {
    /// `(p, α, q)` triples.
    pub triples: Vec<[f64; 3]>,
    pub semigroups: Vec<String>,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub probe_width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingSection {
    pub lambda: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            preset: "small-taylor-green".into(),
            solver: SolverSection::default(),
            identities: IdentitySection::default(),
            decay: DecaySection::default(),
            scaling: ScalingSection::default(),
        }
    }
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        SolverSection {
            n: d.n,
            grid_size: d.grid_size,
            period: d.period,
            horizon: d.horizon,
            mesh_nodes: d.mesh_nodes,
            grading: d.grading,
            dealias_fraction: d.dealias_fraction,
            max_iter: d.max_iter,
            tol: d.tol,
            relaxation: d.relaxation,
            source_weight: d.source_weight,
            consistency_tol: d.consistency_tol,
            horizon_search: true,
            search_eps: 1.0,
            u0_file: None,
            b0_file: None,
        }
    }
}

impl Default for IdentitySection {
    fn default() -> Self {
        IdentitySection { dims: vec![3, 4, 5, 6], degree: 3, trials: 100, spectral_trials: 20 }
    }
}

impl Default for DecaySection {
    fn default() -> Self {
        DecaySection {
            triples: Vec::new(),
            semigroups: vec!["heat".into(), "stokes".into(), "maxwell".into()],
            t_min: 1e-3,
            t_max: 1.0,
            samples: 13,
            probe_width: 0.5,
        }
    }
}

impl Default for ScalingSection {
    fn default() -> Self {
        ScalingSection { lambda: 2.0 }
    }
}

/// The exponent triples used by the bilinear estimates, plus the `α = 0`
/// contraction row `(n, 0, n)`.
pub fn default_triples(n: usize) -> Vec<[f64; 3]> {
    let n = n as f64;
    vec![[n, 0.5, 2.0 * n], [2.0 * n / 3.0, 1.0, 2.0 * n], [2.0 * n / 3.0, 0.5, n], [n, 0.0, n]]
}

/// Values given on the command line; `None` keeps the file value.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub preset: Option<String>,
    pub n: Option<usize>,
    pub grid: Option<usize>,
    pub period: Option<f64>,
    pub horizon: Option<f64>,
    pub mesh_nodes: Option<usize>,
    pub grading: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

impl RunConfig {
    /// Reads `path` (or the defaults) and applies `overrides`. Decay triples
    /// default to [`default_triples`] for the final `n` when the file does
    /// not list any.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig, CliError> {
        let (mut cfg, explicit_triples) = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                let mut cfg = RunConfig::parse(&text)?;
                // Relative field paths are taken from the config's directory.
                let base = p.parent().unwrap_or(Path::new("."));
                for f in [&mut cfg.solver.u0_file, &mut cfg.solver.b0_file].into_iter().flatten() {
                    if f.is_relative() {
                        *f = base.join(&f);
                    }
                }
                (cfg, text_has_triples(&text))
            }
            None => (RunConfig::default(), false),
        };
        cfg.apply(overrides);
        if !explicit_triples {
            cfg.decay.triples = default_triples(cfg.solver.n);
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<RunConfig, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = &o.preset {
            self.preset = v.clone();
        }
        let s = &mut self.solver;
        macro_rules! set {
            ($($field:ident <- $src:ident),*) => {$(
                if let Some(v) = o.$src {
                    s.$field = v;
                }
            )*};
        }
        set!(n <- n, grid_size <- grid, period <- period, horizon <- horizon, mesh_nodes <- mesh_nodes,
             grading <- grading, tol <- tol, max_iter <- max_iter);
    }

    pub fn solver_config(&self) -> Result<SolverConfig, CliError> {
        let s = &self.solver;
        let cfg = SolverConfig {
            n: s.n,
            grid_size: s.grid_size,
            period: s.period,
            horizon: s.horizon,
            mesh_nodes: s.mesh_nodes,
            grading: s.grading,
            dealias_fraction: s.dealias_fraction,
            max_iter: s.max_iter,
            tol: s.tol,
            relaxation: s.relaxation,
            source_weight: s.source_weight,
            consistency_tol: s.consistency_tol,
            seed: self.seed,
        };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if !(s.search_eps > 0.0 && s.search_eps.is_finite()) {
            return Err(CliError::Config(format!("search_eps = {} must be positive", s.search_eps)));
        }
        Ok(cfg)
    }

    pub fn preset(&self) -> Result<Preset, CliError> {
        Preset::from_name(&self.preset, self.seed).map_err(|e| {
            CliError::Config(format!("{e}; known presets: {}", Preset::names().join(", ")))
        })
    }

    pub fn semigroups(&self) -> Result<Vec<Semigroup>, CliError> {
        self.decay
            .semigroups
            .iter()
            .map(|name| match name.as_str() {
                "heat" => Ok(Semigroup::Heat),
                "stokes" => Ok(Semigroup::Stokes),
                "maxwell" => Ok(Semigroup::Maxwell),
                other => Err(CliError::Config(format!("unknown semigroup '{other}'"))),
            })
            .collect()
    }

    /// Canonical TOML text of the resolved configuration.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}

fn text_has_triples(text: &str) -> bool {
    toml::from_str::<toml::Table>(text)
        .ok()
        .and_then(|t| t.get("decay").and_then(|d| d.get("triples")).cloned())
        .is_some()
}
