use crate::error::{Error, Result};
use crate::spectral::TorusGrid;

/// Parameters of a mild-solution run.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Space dimension `n` (at least 3).
    pub n: usize,
    /// Grid points per axis `N`.
    pub grid_size: usize,
    /// Torus period `L`.
    pub period: f64,
    /// Time horizon `T`.
    pub horizon: f64,
    /// Number of mesh intervals `M`.
    pub mesh_nodes: usize,
    /// Grading exponent `γ` of `t_j = T (j/M)^γ`.
    pub grading: f64,
    /// Fraction of the resolved band kept after each product (2/3 rule).
    pub dealias_fraction: f64,
    pub max_iter: usize,
    /// Stop once the 𝒳_T distance of successive iterates falls below this.
    pub tol: f64,
    /// Relaxation factor ω of `U ← (1−ω)U + ω(U⁰ + Φ(U,U))`; 1 is plain Picard.
    pub relaxation: f64,
    /// Power `β` of the weight `s^{−β}` integrated exactly against the kernel.
    pub source_weight: f64,
    /// Largest accepted relative disagreement of the two induction paths.
    pub consistency_tol: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: 3,
            grid_size: 32,
            period: 2.0 * std::f64::consts::PI,
            horizon: 1.0,
            mesh_nodes: 128,
            grading: 2.0,
            dealias_fraction: 2.0 / 3.0,
            max_iter: 50,
            tol: 1e-10,
            relaxation: 1.0,
            source_weight: 0.0,
            consistency_tol: 1e-8,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n < 3 {
            return bad(format!("n = {} must be at least 3", self.n));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return bad(format!("horizon T = {} must be positive", self.horizon));
        }
        if self.mesh_nodes == 0 {
            return bad("mesh must have at least one interval".into());
        }
        if !(self.grading >= 1.0 && self.grading.is_finite()) {
            return bad(format!("grading exponent {} must be >= 1", self.grading));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return bad(format!("dealiasing fraction {} outside (0, 1]", self.dealias_fraction));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tolerance {} must be positive", self.tol));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return bad(format!("relaxation {} outside (0, 1]", self.relaxation));
        }
        if !(0.0..1.0).contains(&self.source_weight) {
            return bad(format!("source weight exponent {} outside [0, 1)", self.source_weight));
        }
        if !(self.consistency_tol > 0.0) {
            return bad(format!("consistency tolerance {} must be positive", self.consistency_tol));
        }
        self.grid().map(|_| ())
    }

    pub fn grid(&self) -> Result<TorusGrid> {
        TorusGrid::new(self.n, self.grid_size, self.period).map_err(|e| Error::InvalidConfig(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        SolverConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_invalid_fields() {
        let base = SolverConfig::default();
        for cfg in [
            SolverConfig { n: 2, ..base.clone() },
            SolverConfig { horizon: 0.0, ..base.clone() },
            SolverConfig { grading: 0.5, ..base.clone() },
            SolverConfig { dealias_fraction: 1.5, ..base.clone() },
            SolverConfig { grid_size: 30, ..base.clone() },
            SolverConfig { relaxation: 0.0, ..base.clone() },
        ] {
            assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))), "{cfg:?}");
        }
    }
}
