//! Mild-solution solver: Duhamel quadrature, critical norms and the Picard
//! iteration, with the measured constants and monitors around it.

pub mod config;
pub mod diagnostics;
pub mod duhamel;
pub mod mesh;
pub mod nonlinear;
pub mod norms;
pub mod picard;
pub mod presets;
pub mod quadrature;

pub use config::SolverConfig;
pub use diagnostics::{
    b1, b2, b3, db_monitor, free_evolution_norms, local_t_search, measure_bilinear_constants, scaling_check,
    BilinearConstants, HorizonSearch, ScalingMode,
};
pub use duhamel::{duhamel, DuhamelAccumulator, DuhamelWeights};
pub use mesh::TimeMesh;
pub use nonlinear::{nonlin_convection, nonlin_induction, nonlin_lorentz, InductionTerm, NodeFields};
pub use norms::{critical_norms, CriticalNorms, NodeNorms};
pub use picard::{free_evolution, ingest, picard_solve, picard_solve_projected, IterationRecord, MildTrajectory, PicardLog};
pub use presets::{random_low_mode_field, Preset};
pub use quadrature::kernel_weight;
