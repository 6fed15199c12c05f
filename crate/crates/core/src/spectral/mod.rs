//! Form fields on the flat periodic torus and their Fourier multipliers.

pub mod decay;
pub mod field;
pub mod grid;
pub mod io;
pub mod norms;
pub mod ops;
pub mod probes;

pub use decay::{check_exponents, decay_diagnostic, log_time_grid, DecayReport, Semigroup};
pub use field::{blade_count, transform_forward, transform_inverse, PhysicalFormField, SpectralFormField};
pub use grid::TorusGrid;
pub use norms::{gradient_norm, inner_product, jacobian, l2_norm_spectral, lp_norm, lp_norm_components};
pub use ops::{
    coexact_part, contract_fields, d_spec, dealias, dealias_cutoff, delta_spec, exact_part, exact_project,
    harmonic_part, heat_semigroup, leray_project, maxwell_semigroup, partial, stokes_semigroup, wedge_fields,
};
