use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::extract::Circuit;
use crate::field_linalg::PrimeField;
use crate::flow::FlowResult;
use crate::open_graph::OpenGraph;

use super::{run_circuit, run_mbqc_unchecked, BranchPolicy, QuditState, SimError};

/// Branches with probability at or below this carry no output state.
pub const NULL_BRANCH: f64 = 1e-12;

/// Uniformity and probability-sum tolerance.
pub const PROBABILITY_TOL: f64 = 1e-9;

/// Comparison of one pattern branch with the circuit output.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchCheck {
    /// Index into the input list.
    pub input: usize,
    pub outcomes: Vec<(usize, u64)>,
    pub probability: f64,
    /// `None` on a null branch.
    pub fidelity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub exhaustive: bool,
    pub tolerance: f64,
    pub inputs: usize,
    pub branches: Vec<BranchCheck>,
    pub min_fidelity: f64,
    /// Largest `|Σ p − 1|` over inputs; zero for sampled runs.
    pub probability_error: f64,
    /// Largest `|p − d^{−|O^c|}|` over branches.
    pub uniformity_error: f64,
    pub passed: bool,
}

/// Computational basis states on `n` qudits (all of them if there are at
/// most `max_basis`, otherwise a seeded selection of `max_basis`), followed
/// by `random` seeded random states.
pub fn standard_inputs(
    d: u64,
    n: usize,
    max_basis: usize,
    random: usize,
    seed: u64,
) -> Result<Vec<QuditState>, SimError> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = (d as f64).powi(n as i32);
    let digits_of = |mut idx: u64| -> Vec<u64> {
        (0..n)
            .map(|_| {
                let x = idx % d;
                idx /= d;
                x
            })
            .collect()
    };
    let mut out = Vec::new();
    if total <= max_basis as f64 {
        for idx in 0..total as u64 {
            out.push(QuditState::basis(d, &digits_of(idx))?);
        }
    } else {
        for _ in 0..max_basis {
            let digits: Vec<u64> = (0..n).map(|_| rng.gen_range(0..d)).collect();
            out.push(QuditState::basis(d, &digits)?);
        }
    }
    for _ in 0..random {
        out.push(QuditState::random(d, n, &mut rng)?);
    }
    Ok(out)
}

/// Runs the pattern and the circuit on every input and compares them branch
/// by branch up to global phase.
pub fn verify(
    g: &OpenGraph<PrimeField>,
    fr: &FlowResult<PrimeField>,
    circuit: &Circuit<PrimeField>,
    angles: &[[u64; 3]],
    inputs: &[QuditState],
    policy: BranchPolicy,
    tol: f64,
) -> Result<VerificationReport, SimError> {
    fr.check(g)
        .map_err(|e| SimError::InvalidFlow(e.to_string()))?;
    verify_unchecked(g, fr, circuit, angles, inputs, policy, tol)
}

/// [`verify`] without the flow check, so a corrupted flow can be run
/// against a circuit extracted from the correct one.
pub fn verify_unchecked(
    g: &OpenGraph<PrimeField>,
    fr: &FlowResult<PrimeField>,
    circuit: &Circuit<PrimeField>,
    angles: &[[u64; 3]],
    inputs: &[QuditState],
    policy: BranchPolicy,
    tol: f64,
) -> Result<VerificationReport, SimError> {
    let uniform = 1.0 / super::branch_count(g);
    let mut branches = Vec::new();
    let mut probability_error: f64 = 0.0;
    for (i, input) in inputs.iter().enumerate() {
        let expected = run_circuit(circuit, input)?;
        let records = run_mbqc_unchecked(g, fr, angles, input, policy)?;
        if policy == BranchPolicy::Exhaustive {
            let sum: f64 = records.iter().map(|r| r.probability).sum();
            probability_error = probability_error.max((sum - 1.0).abs());
        }
        for r in records {
            let fidelity = if r.probability > NULL_BRANCH {
                Some(r.state.fidelity(&expected)?)
            } else {
                None
            };
            branches.push(BranchCheck {
                input: i,
                outcomes: r.outcomes,
                probability: r.probability,
                fidelity,
            });
        }
    }
    let min_fidelity = branches
        .iter()
        .filter_map(|b| b.fidelity)
        .fold(1.0, f64::min);
    let uniformity_error = branches
        .iter()
        .map(|b| (b.probability - uniform).abs())
        .fold(0.0, f64::max);
    let passed = min_fidelity >= 1.0 - tol
        && branches.iter().all(|b| b.fidelity.is_some())
        && probability_error <= PROBABILITY_TOL
        && uniformity_error <= PROBABILITY_TOL;
    Ok(VerificationReport {
        exhaustive: policy == BranchPolicy::Exhaustive,
        tolerance: tol,
        inputs: inputs.len(),
        branches,
        min_fidelity,
        probability_error,
        uniformity_error,
        passed,
    })
}
