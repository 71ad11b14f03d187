use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{is_classical, standard_form_invariants, CovarianceMatrix};
use crate::negativity::{negativity_truncated, NegativityResult};

/// Largest cutoff tried by [`faithfulness_check`].
pub const FAITHFULNESS_MAX_CUTOFF: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FaithfulnessVerdict {
    ClassicalSeparableOutput,
    NonclassicalEntangledOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FaithfulnessReport {
    pub verdict: FaithfulnessVerdict,
    pub negativity: NegativityResult,
}

/// Checks that the protocol output is separable exactly for classical inputs.
///
/// The state is first brought to standard form, where classical (product)
/// states are diagonal in the Fock basis. Since truncated values only grow
/// with the cutoff, an unconverged value above `tol` still certifies
/// entanglement.
pub fn faithfulness_check(cm: &CovarianceMatrix, tol: f64) -> Result<FaithfulnessReport> {
    if cm.modes() != 2 {
        return Err(Error::NotTwoModes(cm.modes()));
    }
    let classical = is_classical(cm, &[0])?;
    let sf = standard_form_invariants(cm)?.assemble()?;
    let negativity = negativity_truncated(&sf, tol, FAITHFULNESS_MAX_CUTOFF)?;
    let entangled = negativity.value > tol;
    if classical == entangled {
        return Err(Error::FaithfulnessViolation {
            classical,
            negativity: negativity.value,
        });
    }
    let verdict = if classical {
        FaithfulnessVerdict::ClassicalSeparableOutput
    } else {
        FaithfulnessVerdict::NonclassicalEntangledOutput
    };
    Ok(FaithfulnessReport {
        verdict,
        negativity,
    })
}
