//! Named open graphs used by the tests, the acceptance harness and the CLI
//! demos, plus a seeded random-graph generator.
//!
//! The hexagon, the gflow-without-CV-flow graph and the two-layer graph are
//! reconstructed from their correction matrices; only those matrices are
//! pinned, not any drawing.

use rand::Rng;

use crate::field_linalg::Field;
use crate::open_graph::{GraphError, OpenGraph};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn build<F: Field>(
    f: F,
    names: &[&str],
    edges: &[(usize, usize, i64)],
    inputs: &[usize],
    outputs: &[usize],
) -> Result<OpenGraph<F>, GraphError> {
    let edges: Vec<(usize, usize, F::Elem)> = edges
        .iter()
        .map(|&(u, v, w)| (u, v, f.from_i64(w)))
        .collect();
    OpenGraph::new(f, labels(names), &edges, inputs, outputs)
}

/// `i – o` with weight `w`.
pub fn single_edge<F: Field>(f: F, w: i64) -> Result<OpenGraph<F>, GraphError> {
    build(f, &["i", "o"], &[(0, 1, w)], &[0], &[1])
}

/// Path `v0 – v1 – … – v{n-1}` with unit weights, input `v0`, output the
/// last vertex.
pub fn line<F: Field>(f: F, n: usize) -> Result<OpenGraph<F>, GraphError> {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<(usize, usize, i64)> = (1..n).map(|i| (i - 1, i, 1)).collect();
    build(f, &refs, &edges, &[0], &[n.saturating_sub(1)])
}

/// Reconstructed 6-cycle `v1 – o1 – v2 – o2 – v3 – o3 – v1` with unit
/// weights, `I = {v1, v2, v3}`, `O = {o1, o2, o3}`. Has a CV-flow but no
/// gflow: the measured-by-output block is `[[1,0,1],[1,1,0],[0,1,1]]`, which
/// is invertible over ℝ and singular over ℤ_2.
pub fn hexagon<F: Field>(f: F) -> Result<OpenGraph<F>, GraphError> {
    build(
        f,
        &["v1", "v2", "v3", "o1", "o2", "o3"],
        &[
            (0, 3, 1),
            (3, 1, 1),
            (1, 4, 1),
            (4, 2, 1),
            (2, 5, 1),
            (5, 0, 1),
        ],
        &[0, 1, 2],
        &[3, 4, 5],
    )
}

/// Reconstructed graph with a gflow but no CV-flow: a centre `c` adjacent to
/// everything, outer vertices `a1, a2, a3` with `a_i` adjacent to the two
/// outputs other than `o_{4-i}`. Measuring `c` last gives the correction
/// matrix `[[1,1,1],[1,1,0],[1,0,1],[0,1,1]]` with right-hand side `e_c`.
pub fn gflow_not_cvflow<F: Field>(f: F) -> Result<OpenGraph<F>, GraphError> {
    build(
        f,
        &["c", "a1", "a2", "a3", "o1", "o2", "o3"],
        &[
            (0, 4, 1),
            (0, 5, 1),
            (0, 6, 1),
            (0, 1, 1),
            (0, 2, 1),
            (0, 3, 1),
            (1, 4, 1),
            (1, 5, 1),
            (2, 4, 1),
            (2, 6, 1),
            (3, 5, 1),
            (3, 6, 1),
        ],
        &[1, 2, 3],
        &[4, 5, 6],
    )
}

/// Augmented correction matrix when the centre of [`gflow_not_cvflow`] is
/// measured last.
pub const CENTRE_LAST: [[i64; 4]; 4] = [[1, 1, 1, 1], [1, 1, 0, 0], [1, 0, 1, 0], [0, 1, 1, 0]];

/// Augmented correction matrix when an outer vertex is measured last.
pub const OUTER_LAST: [[i64; 4]; 4] = [[1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 0], [0, 1, 1, 0]];

/// Chain `I_1 – O_1 – I_2 – O_2 – … – I_N – O_N` with `A[I_n, O_n] = 1` and
/// `A[I_{n+1}, O_n] = −1`. Vertex `2n` is `I_{n+1}`, vertex `2n + 1` is
/// `O_{n+1}`. Its flow has one layer and the combined correction on `O_n`
/// is driven by `Σ_{j≤n} m_j`.
pub fn adder<F: Field>(f: F, n: usize) -> Result<OpenGraph<F>, GraphError> {
    let names: Vec<String> = (1..=n)
        .flat_map(|k| [format!("i{k}"), format!("o{k}")])
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut edges = Vec::new();
    for k in 0..n {
        edges.push((2 * k, 2 * k + 1, 1));
        if k + 1 < n {
            edges.push((2 * k + 2, 2 * k + 1, -1));
        }
    }
    let inputs: Vec<usize> = (0..n).map(|k| 2 * k).collect();
    let outputs: Vec<usize> = (0..n).map(|k| 2 * k + 1).collect();
    build(f, &refs, &edges, &inputs, &outputs)
}

/// Two wires `i1 – a1 – o1`, `i2 – a2 – o2` joined by `i1 – i2` and
/// `a1 – a2`. Has a causal flow `i → a → o`.
pub fn two_wire<F: Field>(f: F) -> Result<OpenGraph<F>, GraphError> {
    build(
        f,
        &["i1", "i2", "a1", "a2", "o1", "o2"],
        &[
            (0, 2, 1),
            (2, 4, 1),
            (1, 3, 1),
            (3, 5, 2),
            (0, 1, 1),
            (2, 3, 1),
        ],
        &[0, 1],
        &[4, 5],
    )
}

/// Reconstructed two-layer graph: inputs `a, b, c`, middle `d, e, f`,
/// outputs `g, h, i`. Both layer-to-layer blocks are the hexagon block
/// `[[1,1,0],[0,1,1],[1,0,1]]`, so neither layer is causal and both need
/// triangularisation. Has a flow over ℝ and every odd `ℤ_d`.
pub fn two_layer<F: Field>(f: F) -> Result<OpenGraph<F>, GraphError> {
    build(
        f,
        &["a", "b", "c", "d", "e", "f", "g", "h", "i"],
        &[
            (0, 3, 1),
            (0, 4, 1),
            (1, 4, 1),
            (1, 5, 1),
            (2, 3, 1),
            (2, 5, 1),
            (3, 6, 1),
            (3, 7, 1),
            (4, 7, 1),
            (4, 8, 1),
            (5, 6, 1),
            (5, 8, 1),
        ],
        &[0, 1, 2],
        &[6, 7, 8],
    )
}

/// Single output and no input; the smallest graph that cannot be extracted.
pub fn lone_output<F: Field>(f: F) -> Result<OpenGraph<F>, GraphError> {
    build(f, &["o"], &[], &[], &[0])
}

/// Random open graph on `n` vertices: each pair is an edge with probability
/// `density`, weights drawn by `weight` (zero draws drop the edge), `k`
/// distinct inputs and `k` distinct outputs drawn independently.
pub fn random_graph<F: Field, R: Rng>(
    f: F,
    n: usize,
    k: usize,
    density: f64,
    rng: &mut R,
    mut weight: impl FnMut(&mut R) -> F::Elem,
) -> Result<OpenGraph<F>, GraphError> {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                let w = weight(rng);
                if !f.is_zero(w) {
                    edges.push((u, v, w));
                }
            }
        }
    }
    let pick = |rng: &mut R| -> Vec<usize> {
        let mut all: Vec<usize> = (0..n).collect();
        for i in 0..k.min(n) {
            let j = rng.gen_range(i..n);
            all.swap(i, j);
        }
        all.truncate(k.min(n));
        all
    };
    let inputs = pick(rng);
    let outputs = pick(rng);
    OpenGraph::new(f, names, &edges, &inputs, &outputs)
}
