//! Finite flat algebras given by structure constants, their norms, and
//! Fitting-ideal freeness tests.

mod algebra;
mod fitting;

pub use algebra::{FiniteFlatAlgebra, ModuleSection};
pub use fitting::{
    check_locally_free, cokernel_is_zero, fitting_ideal, sigma_inverting_equiv, LocalFreeness,
    SigmaVerdicts,
};
