//! Exterior calculus for the n-dimensional MHD system: exact polynomial
//! forms, spectral form fields on the periodic torus, and a mild-solution
//! Picard solver.

pub mod error;
pub mod exterior;
pub mod poly;
pub mod solver;
pub mod spectral;
pub mod symbolic;

pub use error::{Error, Result};
pub use exterior::{
    contract, grade_project, matrix_to_2form, normal_split, wedge, AntisymMatrix2Form, Blade, Coefficient,
    Multivector, Scalar,
};
pub use poly::{Partial, PolyScalar};
pub use symbolic::{
    d_sym, delta_sym, grad_matrix, magic_lhs, magic_rhs, verify_magic, ContractionRule, PolyForm, PolyJacobian,
    SuiteReport,
};
