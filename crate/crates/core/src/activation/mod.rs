//! The CNOT activation protocol in truncated Fock space and the covariance-level
//! demonstration that Gaussian circuits cannot activate separable inputs.

mod faithfulness;
mod nogo;
mod protocol;

pub use faithfulness::{
    faithfulness_check, FaithfulnessReport, FaithfulnessVerdict, FAITHFULNESS_MAX_CUTOFF,
};
pub use nogo::{
    ancilla_swap, empirical_covariance, nogo_run, nogo_run_with_certificate, random_scenario,
    sample_displacements, NoGoOutcome, NoGoScenario, SeparabilityCertificate,
};
pub use protocol::{
    apply_cnot_pair, negativity_oracle_dense, partial_transpose_ab, protocol_output,
    protocol_output_dense, FourModeState, DENSE_ROW_CAP,
};
