//! Flow finding and correction synthesis.

mod causal;
mod corrections;
mod finder;

pub use causal::{find_causal_flow, CausalFlow};
pub use corrections::{correction_for, simultaneous_correction, Axis, CorrectionOp, Displacement};
pub use finder::{find_flow, flow_from_layers, layer_decomposition, Correction, FlowResult};

use thiserror::Error;

use crate::field_linalg::LinalgError;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FlowError {
    #[error("vertex {0} is not measured under this flow")]
    NotMeasured(usize),
    #[error("layer {0} does not exist")]
    NotALayer(usize),
    #[error("layering does not partition the measured vertices (vertex {0})")]
    BadLayering(usize),
    #[error("correction equation of vertex {0} has no solution")]
    Unsolvable(usize),
    #[error("correction vector of vertex {vertex} does not solve its equation: {lhs}")]
    Unsound { vertex: usize, lhs: String },
    #[error("correction touches vertex {0}, which is not a correctable column")]
    OutsideColumns(usize),
    #[error("expected {expected} outcomes, found {found}")]
    OutcomeCount { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
