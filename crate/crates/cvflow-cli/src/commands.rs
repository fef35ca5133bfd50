use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use cvflow::extract::{extract_circuit, Circuit, ExtractError};
use cvflow::flow::{find_causal_flow, find_flow, FlowResult};
use cvflow::open_graph::{AnyGraph, FieldSpec, WeightCodec};
use cvflow::qudit_sim::{
    apply, branch_count, run_circuit, run_mbqc, standard_inputs, verify, verify_unchecked,
    BranchPolicy, GateOp, QuditState, VerificationReport, EXHAUSTIVE_BUDGET,
};
use cvflow::{fixtures, Field, ModGraph, OpenGraph, PrimeField, RealField};
use serde::Serialize;

use crate::report::{
    amplitudes, digits, measurement_order, AdderReport, CircuitReport, FixtureDemoReport,
    FlowReport, PolicyEntry, Refusal, SimBranch, SimulateReport, Verdict, VerifyReport,
    VerifySummary,
};
use crate::{input, AngleArgs, BranchArgs, Command, DemoName, Format, GraphArgs, Output};

/// Samples drawn when exhaustive enumeration is over budget.
const FALLBACK_SAMPLES: usize = 1000;

pub fn run(cmd: Command) -> Result<(Output, Option<PathBuf>)> {
    match cmd {
        Command::Flow(ga) => {
            json_only(ga.out.format, "flow")?;
            let out = match load(&ga)? {
                AnyGraph::Real(g) => flow(&g)?,
                AnyGraph::Mod(g) => flow(&g)?,
            };
            Ok((out, ga.out.out))
        }
        Command::Extract { graph: ga, angles } => {
            let out = match load(&ga)? {
                AnyGraph::Real(g) => extract(&g, &angles, ga.out.format)?,
                AnyGraph::Mod(g) => extract(&g, &angles, ga.out.format)?,
            };
            Ok((out, ga.out.out))
        }
        Command::Simulate {
            graph: ga,
            angles,
            branches,
            input,
        } => {
            json_only(ga.out.format, "simulate")?;
            let g = mod_graph(load(&ga)?, "simulate")?;
            Ok((simulate(&g, &angles, &branches, &input)?, ga.out.out))
        }
        Command::Verify {
            graph: ga,
            angles,
            branches,
            tol,
            seed,
            max_basis,
            random_inputs,
            corrupt,
        } => {
            json_only(ga.out.format, "verify")?;
            if !(tol > 0.0 && tol < 1.0) {
                bail!("--tol must lie in (0, 1), got {tol}");
            }
            let g = mod_graph(load(&ga)?, "verify")?;
            let opts = VerifyOptions {
                tol,
                seed,
                max_basis,
                random_inputs,
                corrupt,
            };
            Ok((verify_cmd(&g, &angles, &branches, &opts)?, ga.out.out))
        }
        Command::Demo {
            name,
            n,
            d,
            inputs,
            out,
        } => {
            json_only(out.format, "demo")?;
            let f =
                PrimeField::new(d).map_err(|_| anyhow::anyhow!("--d must be prime, got {d}"))?;
            let body = match name {
                DemoName::Adder => adder_demo(f, n, &inputs)?,
                DemoName::GflowNotCvflow => fixture_demo(f, false)?,
                DemoName::CvflowNotGflow => fixture_demo(f, true)?,
            };
            Ok((body, out.out))
        }
    }
}

fn json_only(format: Format, command: &str) -> Result<()> {
    if format == Format::Ascii {
        bail!("{command} only writes JSON; --format ascii applies to extract");
    }
    Ok(())
}

fn load(ga: &GraphArgs) -> Result<AnyGraph> {
    input::load_graph(&ga.graph, ga.field, ga.eps, ga.d)
}

fn mod_graph(g: AnyGraph, command: &str) -> Result<ModGraph> {
    match g {
        AnyGraph::Mod(g) => Ok(g),
        AnyGraph::Real(_) => bail!("{command} needs a ℤ_d graph; pass --field mod --d P"),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Single-line JSON for reports that carry one entry per branch.
fn to_compact_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

fn refuse(command: &'static str, reason: &'static str, detail: String) -> Result<Output> {
    Ok(Output {
        body: to_json(&Refusal::new(command, reason, detail.clone()))?,
        summary: format!("{command}: refused ({reason}): {detail}"),
        negative: true,
    })
}

fn is_z2(spec: &FieldSpec) -> bool {
    matches!(spec, FieldSpec::Mod { d: 2 })
}

fn flow<F: WeightCodec>(g: &OpenGraph<F>) -> Result<Output> {
    let fr = find_flow(g);
    let verdict = match &fr {
        None => Verdict::None,
        Some(_) if find_causal_flow(g).is_some() => Verdict::CausalFlow,
        Some(_) => Verdict::CvFlow,
    };
    let spec = g.field().spec();
    let gflow = is_z2(&spec).then_some(fr.is_some());
    let report = FlowReport::new(g, fr.as_ref(), verdict, gflow);
    Ok(Output {
        body: to_json(&report)?,
        summary: format!(
            "flow: {} vertices, verdict {}, depth {}",
            g.len(),
            serde_json::to_value(verdict)?.as_str().unwrap_or_default(),
            report.depth
        ),
        negative: fr.is_none(),
    })
}

/// Flow and circuit, or the refusal to emit instead.
type Extracted<F> = Result<(FlowResult<F>, Circuit<F>), Output>;

fn extract_parts<F: WeightCodec>(
    g: &OpenGraph<F>,
    angles: &[[F::Elem; 3]],
    command: &'static str,
) -> Result<Extracted<F>> {
    let (ni, no) = (g.inputs().len(), g.outputs().len());
    if ni != no {
        return refuse(command, "io_mismatch", format!("{ni} inputs, {no} outputs")).map(Err);
    }
    let Some(fr) = find_flow(g) else {
        return refuse(
            command,
            "no_flow",
            "the graph has no flow over this field".into(),
        )
        .map(Err);
    };
    match extract_circuit(g, &fr, angles) {
        Ok(c) => Ok(Ok((fr, c))),
        Err(ExtractError::IoMismatch { inputs, outputs }) => refuse(
            command,
            "io_mismatch",
            format!("{inputs} inputs, {outputs} outputs"),
        )
        .map(Err),
        Err(e) => Err(e).context("extraction failed"),
    }
}

fn extract<F: WeightCodec>(g: &OpenGraph<F>, angles: &AngleArgs, format: Format) -> Result<Output> {
    let angles = input::load_angles(angles.angles.as_deref(), g)?;
    let c = match extract_parts(g, &angles, "extract")? {
        Ok((_, c)) => c,
        Err(refusal) => return Ok(refusal),
    };
    let f = c.field.clone();
    let body = match format {
        Format::Json => to_json(&CircuitReport::new(&c))?,
        Format::Ascii => c.render_ascii(|w| f.encode(w).to_string()),
    };
    Ok(Output {
        body,
        summary: format!(
            "extract: {} wires, {} gates ({} J, {} CZ, {} CX), {} sections",
            c.wires(),
            c.gates.len(),
            c.count("J"),
            c.count("CZ"),
            c.count("CX"),
            c.sections.len()
        ),
        negative: false,
    })
}

/// Exhaustive if affordable, otherwise seeded sampling.
fn effective_policy(g: &ModGraph, requested: BranchPolicy) -> (BranchPolicy, PolicyEntry) {
    let per_input = branch_count(g);
    if requested == BranchPolicy::Exhaustive && per_input > EXHAUSTIVE_BUDGET {
        let p = BranchPolicy::Sampled {
            count: FALLBACK_SAMPLES,
            seed: 0,
        };
        (p, PolicyEntry::new(p, true, per_input))
    } else {
        (requested, PolicyEntry::new(requested, false, per_input))
    }
}

fn simulate(
    g: &ModGraph,
    angles: &AngleArgs,
    branches: &BranchArgs,
    input: &[u64],
) -> Result<Output> {
    let angles = input::load_angles(angles.angles.as_deref(), g)?;
    let d = g.field().modulus();
    let k = g.inputs().len();
    let input = if input.is_empty() {
        vec![0; k]
    } else {
        input.to_vec()
    };
    if input.len() != k {
        bail!(
            "--input has {} digits, the graph has {k} inputs",
            input.len()
        );
    }
    if let Some(x) = input.iter().find(|&&x| x >= d) {
        bail!("input digit {x} is not below d = {d}");
    }
    let Some(fr) = find_flow(g) else {
        return refuse(
            "simulate",
            "no_flow",
            "the graph has no flow over this field".into(),
        );
    };
    let (policy, entry) = effective_policy(g, branches.branches);
    let state = QuditState::basis(d, &input)?;
    let records = run_mbqc(g, &fr, &angles, &state, policy)?;
    let report = SimulateReport {
        command: "simulate",
        field: g.field().spec(),
        policy: entry,
        input,
        measurement_order: measurement_order(g, records.first().map(|r| r.outcomes.as_slice())),
        output_order: g
            .outputs()
            .iter()
            .map(|&v| g.label(v).to_string())
            .collect(),
        branches: records
            .iter()
            .map(|r| SimBranch {
                outcomes: digits(&r.outcomes),
                probability: r.probability,
                state: amplitudes(&r.state),
            })
            .collect(),
    };
    Ok(Output {
        body: to_compact_json(&report)?,
        summary: format!(
            "simulate: {} branches ({})",
            records.len(),
            report.policy.mode
        ),
        negative: false,
    })
}

pub struct VerifyOptions {
    tol: f64,
    seed: u64,
    max_basis: usize,
    random_inputs: usize,
    corrupt: Option<String>,
}

/// Adds one to the first entry of the correction vector of `label`.
fn corrupt(
    g: &ModGraph,
    fr: FlowResult<PrimeField>,
    label: &str,
) -> Result<FlowResult<PrimeField>> {
    let v = g.index_of(label)?;
    let f = g.field();
    let Some(c) = fr.correction(v) else {
        bail!("{label} is not measured, so it has no correction vector");
    };
    let mut c = c.clone();
    c[0].1 = f.add(c[0].1, f.one());
    c.retain(|&(_, a)| !f.is_zero(a));
    Ok(fr.with_correction(v, c))
}

fn verify_cmd(
    g: &ModGraph,
    angles: &AngleArgs,
    branches: &BranchArgs,
    o: &VerifyOptions,
) -> Result<Output> {
    let angles = input::load_angles(angles.angles.as_deref(), g)?;
    let (fr, c) = match extract_parts(g, &angles, "verify")? {
        Ok(parts) => parts,
        Err(refusal) => return Ok(refusal),
    };
    let d = g.field().modulus();
    let inputs = standard_inputs(d, g.inputs().len(), o.max_basis, o.random_inputs, o.seed)?;
    let (policy, entry) = effective_policy(g, branches.branches);
    let r = match &o.corrupt {
        Some(label) => {
            let bad = corrupt(g, fr, label)?;
            verify_unchecked(g, &bad, &c, &angles, &inputs, policy, o.tol)?
        }
        None => verify(g, &fr, &c, &angles, &inputs, policy, o.tol)?,
    };
    let report = VerifyReport::new(g, &r, entry, o.corrupt.clone());
    Ok(Output {
        body: to_compact_json(&report)?,
        summary: format!(
            "verify: {} over {} inputs and {} branches ({}), min fidelity {:.12}",
            if r.passed { "passed" } else { "FAILED" },
            r.inputs,
            r.branches.len(),
            report.policy.mode,
            r.min_fidelity
        ),
        negative: !r.passed,
    })
}

fn summary(r: &VerificationReport, policy: PolicyEntry) -> VerifySummary {
    VerifySummary {
        passed: r.passed,
        policy,
        branch_count: r.branches.len(),
        min_fidelity: r.min_fidelity,
    }
}

fn adder_demo(f: PrimeField, n: usize, inputs: &[u64]) -> Result<Output> {
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let d = f.modulus();
    let ks: Vec<u64> = if inputs.is_empty() {
        (1..=n as u64).map(|k| k % d).collect()
    } else {
        inputs.iter().map(|k| k % d).collect()
    };
    if ks.len() != n {
        bail!(
            "--inputs has {} values, the chain has {n} summands",
            ks.len()
        );
    }
    let g = fixtures::adder(f, n)?;
    let fr = find_flow(&g).context("the adder chain has no flow")?;
    let zero = vec![[0u64; 3]; g.len()];
    let c = extract_circuit(&g, &fr, &zero)?;
    // Each summand enters as H⁻¹|k⟩.
    let mut state = QuditState::basis(d, &ks)?;
    for q in 0..n {
        apply(&mut state, &GateOp::HInv { q })?;
    }
    let out = run_circuit(&c, &state)?;
    let mut marginal = vec![0.0; d as usize];
    for (i, a) in out.amplitudes().iter().enumerate() {
        marginal[out.digit(i, n - 1) as usize] += a.norm_sqr();
    }
    let (digit, p) =
        marginal.iter().enumerate().fold(
            (0, 0.0),
            |best, (x, &p)| if p > best.1 { (x as u64, p) } else { best },
        );
    let expected = ks.iter().sum::<u64>() % d;
    let (policy, entry) = effective_policy(&g, BranchPolicy::Exhaustive);
    let r = verify(&g, &fr, &c, &zero, &[state], policy, 1e-9)?;
    let ok = r.passed && fr.depth() == 1 && digit == expected;
    let report = AdderReport {
        command: "demo",
        demo: "adder",
        n,
        d,
        inputs: ks,
        layers: fr.depth(),
        wires: c.wires(),
        gates: c.gates.iter().map(|g| g.name()).collect(),
        output_digit: digit,
        output_probability: p,
        expected_digit: expected,
        verification: summary(&r, entry),
    };
    Ok(Output {
        body: to_json(&report)?,
        summary: format!(
            "demo adder: N={n} d={d}, {} layer, last wire reads {digit} (expected {expected}), verification {}",
            fr.depth(),
            if r.passed { "passed" } else { "FAILED" }
        ),
        negative: !ok,
    })
}

/// `hexagon = true` runs the CV-flow-without-gflow graph, otherwise the
/// gflow-without-CV-flow graph. The hexagon is also verified over `f`.
fn fixture_demo(f: PrimeField, hexagon: bool) -> Result<Output> {
    let z2 = PrimeField::new(2)?;
    let r = RealField::default();
    let (name, gflow, cv_flow) = if hexagon {
        (
            "cvflow_not_gflow",
            find_flow(&fixtures::hexagon(z2)?).is_some(),
            find_flow(&fixtures::hexagon(r)?).is_some(),
        )
    } else {
        (
            "gflow_not_cvflow",
            find_flow(&fixtures::gflow_not_cvflow(z2)?).is_some(),
            find_flow(&fixtures::gflow_not_cvflow(r)?).is_some(),
        )
    };
    let verification = if hexagon {
        let g = fixtures::hexagon(f)?;
        match find_flow(&g) {
            Some(fr) => {
                let zero = vec![[0u64; 3]; g.len()];
                let c = extract_circuit(&g, &fr, &zero)?;
                let inputs = standard_inputs(f.modulus(), 3, 27, 2, 0)?;
                let (policy, entry) = effective_policy(&g, BranchPolicy::Exhaustive);
                Some(summary(
                    &verify(&g, &fr, &c, &zero, &inputs, policy, 1e-9)?,
                    entry,
                ))
            }
            None => None,
        }
    } else {
        None
    };
    let (expected_gflow, expected_cv_flow) = (!hexagon, hexagon);
    let ok = gflow == expected_gflow
        && cv_flow == expected_cv_flow
        && verification.as_ref().map_or(true, |v| v.passed);
    let report = FixtureDemoReport {
        command: "demo",
        demo: name,
        gflow,
        cv_flow,
        expected_gflow,
        expected_cv_flow,
        verification,
    };
    Ok(Output {
        body: to_json(&report)?,
        summary: format!("demo {name}: gflow={gflow}, cv_flow={cv_flow}"),
        negative: !ok,
    })
}
