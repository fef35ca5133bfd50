//! Flow analysis and circuit extraction for measurement patterns on
//! weighted open graphs.
//!
//! Graphs are weighted over a field chosen at load time: the reals with a
//! zero threshold, or a prime field `ℤ_p`. Over `ℤ_2` the flow finder decides
//! g-flow; over the reals it decides CV-flow. Patterns with a flow and as
//! many inputs as outputs can be turned into a circuit, and over `ℤ_d` both
//! the pattern and the circuit can be run on a dense qudit simulator.

pub mod extract;
pub mod field_linalg;
pub mod fixtures;
pub mod flow;
pub mod open_graph;
pub mod qudit_sim;

pub use field_linalg::{Field, Matrix, PrimeField, Reals};
pub use open_graph::OpenGraph;

/// Real weights in double precision.
pub type RealField = Reals<f64>;
pub type RealMatrix = Matrix<RealField>;
pub type ModMatrix = Matrix<PrimeField>;
pub type RealGraph = OpenGraph<RealField>;
pub type ModGraph = OpenGraph<PrimeField>;
