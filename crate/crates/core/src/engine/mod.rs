//! The two elimination pipelines: ordinary inputs through a state-space
//! model, and partial inputs through theta-derivations.

mod multi;
mod prep;
mod result;
mod select;
mod uni;

pub use multi::{
    arithmetic_multi, seed_input_derivatives, InputPde, seed_output_derivatives, MultiOptions, MultiOutcome, NotFound,
};
pub use result::{canonical_order, canonical_ranking, finish_result, output_context, AdeOrder, AdeResult};
pub use select::{select_min, select_min_multi};
pub use uni::{arithmetic_uni, unary_uni, LhoMode, UniOptions};

use thiserror::Error;

use crate::diffalg::DiffError;
use crate::dynsys::{self, DynError};
use crate::groebner::GroebnerError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("the elimination ideal contains no equation in the target")]
    NoAdeFound,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Diff(#[from] DiffError),
}

/// The equations of a parsed file as ordinary inputs.
pub fn uni_inputs(sys: &crate::frontend::ParsedSystem) -> Result<Vec<dynsys::InputAde>, EngineError> {
    sys.equations
        .iter()
        .map(|e| Ok(dynsys::InputAde::new(e.poly.clone())?.with_cleared(e.cleared.clone())))
        .collect()
}

/// The equations of a parsed file as partial inputs.
pub fn multi_inputs(sys: &crate::frontend::ParsedSystem) -> Result<Vec<InputPde>, EngineError> {
    sys.equations.iter().map(|e| Ok(InputPde::new(e.poly.clone())?.with_cleared(e.cleared.clone()))).collect()
}
