//! Dense state-vector simulation of prime-dimensional qudits: graph states,
//! measurement patterns with corrections, and circuits.

mod gates;
mod graph_state;
mod mbqc;
mod run;
mod state;
mod verify;

pub use gates::{apply, omega_table, GateOp};
pub use graph_state::prepare_graph_state;
pub use mbqc::{
    branch_count, run_mbqc, run_mbqc_unchecked, BranchPolicy, BranchRecord, EXHAUSTIVE_BUDGET,
};
pub use run::{lower_gate, run_circuit};
pub use state::{states_equal_up_to_phase, QuditState};
pub use verify::{
    standard_inputs, verify, verify_unchecked, BranchCheck, VerificationReport, NULL_BRANCH,
    PROBABILITY_TOL,
};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SimError {
    #[error("dimension {0} is not prime")]
    NotPrime(u64),
    #[error("{n} qudits of dimension {d} do not fit in memory")]
    TooLarge { d: u64, n: usize },
    #[error("expected {expected} amplitudes, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("states of dimension {0} and {1} cannot be combined")]
    DimensionMismatch(u64, u64),
    #[error("qudit {0} out of range")]
    QuditOutOfRange(usize),
    #[error("two-qudit gate acts twice on qudit {0}")]
    RepeatedQudit(usize),
    #[error("weight {0} is not invertible")]
    NonInvertibleWeight(u64),
    #[error("not a permutation of the qudits")]
    BadPermutation,
    #[error("graph is over ℤ_{graph} but the state has dimension {state}")]
    FieldMismatch { graph: u64, state: u64 },
    #[error("input state has {found} qudits but {expected} are expected")]
    InputCount { expected: usize, found: usize },
    #[error("flow does not hold on this graph: {0}")]
    InvalidFlow(String),
    #[error("{branches} branches exceed the exhaustive budget")]
    BranchBudget { branches: f64 },
}
