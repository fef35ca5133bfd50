//! Serialisable report types. Field order is the output order, so the JSON
//! is byte-stable for a given input.

use std::collections::BTreeMap;

use cvflow::extract::{Circuit, Gate};
use cvflow::flow::FlowResult;
use cvflow::open_graph::{FieldSpec, WeightCodec};
use cvflow::qudit_sim::{BranchPolicy, QuditState, VerificationReport};
use cvflow::OpenGraph;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CausalFlow,
    CvFlow,
    None,
}

#[derive(Serialize)]
pub struct Amount {
    pub vertex: String,
    pub amount: Value,
}

#[derive(Serialize)]
pub struct CorrectionEntry {
    pub vertex: String,
    pub layer: usize,
    pub vector: Vec<Amount>,
}

#[derive(Serialize)]
pub struct FlowReport {
    pub command: &'static str,
    pub field: FieldSpec,
    pub verdict: Verdict,
    /// Number of measured layers; 0 when there is no flow.
    pub depth: usize,
    /// `layers[k]` lists layer `k`; layer 0 holds the outputs and the
    /// highest layer is measured first.
    pub layers: Vec<Vec<String>>,
    pub corrections: Vec<CorrectionEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gflow: Option<bool>,
}

impl FlowReport {
    pub fn new<F: WeightCodec>(
        g: &OpenGraph<F>,
        fr: Option<&FlowResult<F>>,
        verdict: Verdict,
        gflow: Option<bool>,
    ) -> Self {
        let name = |v: usize| g.label(v).to_string();
        let (layers, corrections) = match fr {
            Some(fr) => (
                std::iter::once(g.outputs())
                    .chain(
                        (1..=fr.depth()).map(|k| fr.layer_vertices(k).unwrap_or_default().to_vec()),
                    )
                    .map(|l| l.into_iter().map(name).collect())
                    .collect(),
                fr.corrections()
                    .iter()
                    .map(|(&v, c)| CorrectionEntry {
                        vertex: name(v),
                        layer: fr.layer(v),
                        vector: c
                            .iter()
                            .map(|&(k, a)| Amount {
                                vertex: name(k),
                                amount: g.field().encode(a),
                            })
                            .collect(),
                    })
                    .collect(),
            ),
            None => (Vec::new(), Vec::new()),
        };
        Self {
            command: "flow",
            field: g.field().spec(),
            verdict,
            depth: fr.map_or(0, FlowResult::depth),
            layers,
            corrections,
            gflow,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "UPPERCASE")]
pub enum GateEntry {
    J {
        wire: usize,
        weight: Value,
        angles: [Value; 3],
        from: String,
        to: String,
    },
    CZ {
        a: usize,
        b: usize,
        weight: Value,
    },
    CX {
        control: usize,
        target: usize,
        weight: Value,
    },
    Phase {
        wire: usize,
        weight: Value,
    },
}

#[derive(Serialize)]
pub struct WireEntry {
    pub wire: usize,
    pub path: Vec<String>,
}

#[derive(Serialize)]
pub struct SectionEntry {
    pub layer: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Serialize)]
pub struct CircuitReport {
    pub command: &'static str,
    pub field: FieldSpec,
    pub wires: Vec<WireEntry>,
    pub gates: Vec<GateEntry>,
    pub sections: Vec<SectionEntry>,
    pub counts: BTreeMap<&'static str, usize>,
}

impl CircuitReport {
    pub fn new<F: WeightCodec>(c: &Circuit<F>) -> Self {
        let f = &c.field;
        let name = |v: usize| c.labels[v].clone();
        let gates = c
            .gates
            .iter()
            .map(|g| match *g {
                Gate::J {
                    wire,
                    weight,
                    angles,
                    from,
                    to,
                } => GateEntry::J {
                    wire,
                    weight: f.encode(weight),
                    angles: angles.map(|a| f.encode(a)),
                    from: name(from),
                    to: name(to),
                },
                Gate::CZ { a, b, weight } => GateEntry::CZ {
                    a,
                    b,
                    weight: f.encode(weight),
                },
                Gate::CX {
                    control,
                    target,
                    weight,
                } => GateEntry::CX {
                    control,
                    target,
                    weight: f.encode(weight),
                },
                Gate::Phase { wire, weight } => GateEntry::Phase {
                    wire,
                    weight: f.encode(weight),
                },
            })
            .collect();
        let mut counts = BTreeMap::new();
        for g in &c.gates {
            *counts.entry(g.name()).or_insert(0) += 1;
        }
        Self {
            command: "extract",
            field: f.spec(),
            wires: c
                .paths
                .iter()
                .enumerate()
                .map(|(wire, p)| WireEntry {
                    wire,
                    path: p.iter().map(|&v| name(v)).collect(),
                })
                .collect(),
            gates,
            sections: c
                .sections
                .iter()
                .map(|s| SectionEntry {
                    layer: s.layer,
                    start: s.start,
                    end: s.end,
                })
                .collect(),
            counts,
        }
    }
}

/// A command that declined to produce its normal output.
#[derive(Serialize)]
pub struct Refusal {
    pub command: &'static str,
    pub status: &'static str,
    pub reason: &'static str,
    pub detail: String,
}

impl Refusal {
    pub fn new(command: &'static str, reason: &'static str, detail: impl Into<String>) -> Self {
        Self {
            command,
            status: "refused",
            reason,
            detail: detail.into(),
        }
    }
}

#[derive(Serialize)]
pub struct PolicyEntry {
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// True when exhaustive enumeration was requested but exceeded the
    /// branch budget.
    pub fallback: bool,
    pub branches_per_input: f64,
}

impl PolicyEntry {
    pub fn new(p: BranchPolicy, fallback: bool, branches_per_input: f64) -> Self {
        match p {
            BranchPolicy::Exhaustive => Self {
                mode: "exhaustive",
                count: None,
                seed: None,
                fallback,
                branches_per_input,
            },
            BranchPolicy::Sampled { count, seed } => Self {
                mode: "sampled",
                count: Some(count),
                seed: Some(seed),
                fallback,
                branches_per_input,
            },
        }
    }
}

/// Labels of the measured vertices in the order their outcomes appear.
pub fn measurement_order<F: WeightCodec>(
    g: &OpenGraph<F>,
    first: Option<&[(usize, u64)]>,
) -> Vec<String> {
    first
        .unwrap_or_default()
        .iter()
        .map(|&(v, _)| g.label(v).to_string())
        .collect()
}

pub fn digits(o: &[(usize, u64)]) -> Vec<u64> {
    o.iter().map(|&(_, x)| x).collect()
}

#[derive(Serialize)]
pub struct SimBranch {
    /// Outcome digits in `measurement_order`.
    pub outcomes: Vec<u64>,
    pub probability: f64,
    /// Output amplitudes as `[re, im]`, little-endian over `output_order`.
    pub state: Vec<[f64; 2]>,
}

pub fn amplitudes(s: &QuditState) -> Vec<[f64; 2]> {
    s.amplitudes().iter().map(|a| [a.re, a.im]).collect()
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub command: &'static str,
    pub field: FieldSpec,
    pub policy: PolicyEntry,
    pub input: Vec<u64>,
    pub measurement_order: Vec<String>,
    pub output_order: Vec<String>,
    pub branches: Vec<SimBranch>,
}

#[derive(Serialize)]
pub struct VerifyBranch {
    pub input: usize,
    /// Outcome digits in `measurement_order`.
    pub outcomes: Vec<u64>,
    pub probability: f64,
    /// Absent on a null branch.
    pub fidelity: Option<f64>,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub field: FieldSpec,
    pub passed: bool,
    pub policy: PolicyEntry,
    pub tolerance: f64,
    pub inputs: usize,
    pub branch_count: usize,
    pub min_fidelity: f64,
    pub probability_error: f64,
    pub uniformity_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrupted: Option<String>,
    pub measurement_order: Vec<String>,
    pub branches: Vec<VerifyBranch>,
}

impl VerifyReport {
    pub fn new<F: WeightCodec>(
        g: &OpenGraph<F>,
        r: &VerificationReport,
        policy: PolicyEntry,
        corrupted: Option<String>,
    ) -> Self {
        Self {
            command: "verify",
            field: g.field().spec(),
            passed: r.passed,
            policy,
            tolerance: r.tolerance,
            inputs: r.inputs,
            branch_count: r.branches.len(),
            min_fidelity: r.min_fidelity,
            probability_error: r.probability_error,
            uniformity_error: r.uniformity_error,
            corrupted,
            measurement_order: measurement_order(
                g,
                r.branches.first().map(|b| b.outcomes.as_slice()),
            ),
            branches: r
                .branches
                .iter()
                .map(|b| VerifyBranch {
                    input: b.input,
                    outcomes: digits(&b.outcomes),
                    probability: b.probability,
                    fidelity: b.fidelity,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct VerifySummary {
    pub passed: bool,
    pub policy: PolicyEntry,
    pub branch_count: usize,
    pub min_fidelity: f64,
}

#[derive(Serialize)]
pub struct AdderReport {
    pub command: &'static str,
    pub demo: &'static str,
    pub n: usize,
    pub d: u64,
    pub inputs: Vec<u64>,
    pub layers: usize,
    pub wires: usize,
    pub gates: Vec<&'static str>,
    /// Most likely digit on the last wire of the circuit output.
    pub output_digit: u64,
    pub output_probability: f64,
    pub expected_digit: u64,
    pub verification: VerifySummary,
}

#[derive(Serialize)]
pub struct FixtureDemoReport {
    pub command: &'static str,
    pub demo: &'static str,
    /// ℤ_2 flow, equivalently a g-flow.
    pub gflow: bool,
    /// Flow over the reals.
    pub cv_flow: bool,
    pub expected_gflow: bool,
    pub expected_cv_flow: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerifySummary>,
}
