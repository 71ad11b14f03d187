//! Fock-basis elements of zero-mean two-mode Gaussian states through
//! four-index Hermite polynomials.

mod density;
mod hermite;
mod husimi;
mod r_matrix;

pub use density::{fock_elements, TruncatedDensityMatrix};
pub use hermite::{
    cutoff_cap, hermite_table, hermite_table_capped, shell_sums, HermiteTable, ShellSums,
    CUTOFF_CAP_ENV, DEFAULT_CUTOFF_CAP,
};
pub(crate) use husimi::husimi_from_r;
pub use husimi::{generating_function_check, husimi_at};
pub use r_matrix::{build_r_matrix, standard_form_r_matrix, RMatrix};
