use std::collections::BTreeMap;

use crate::field_linalg::{ColumnOp, Field};
use crate::flow::FlowResult;
use crate::open_graph::OpenGraph;

use super::ExtractError;

/// Gate produced by a column operation, over vertex indices of the graph it
/// was derived from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SideGate<E> {
    CX {
        control: usize,
        target: usize,
        weight: E,
    },
    Phase {
        vertex: usize,
        weight: E,
    },
}

/// Result of peeling the last-measured layer `L_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularisedLayer<F: Field> {
    /// Graph after the column operations; only edges touching `C` differ.
    pub graph: OpenGraph<F>,
    /// Column operations in the order they were applied.
    pub ops: Vec<ColumnOp<F::Elem>>,
    /// Gates realising the operations, in time order.
    pub side_gates: Vec<SideGate<F::Elem>>,
    /// Pairs `(v, k_v)` with `v ∈ L_1`, in teleportation order.
    pub causal_map: Vec<(usize, usize)>,
}

/// Finds a causal assignment `L → C ⊆ cols` of the correction matrix of
/// `L` in `g`, or `None` if the matrix is not triangular under any
/// permutation.
///
/// Column `k_v` must vanish on every measured row outside `L` and on the `L`
/// rows teleported before `v`.
pub fn causal_assignment<F: Field>(
    g: &OpenGraph<F>,
    layer: &[usize],
    cols: &[usize],
) -> Option<Vec<(usize, usize)>> {
    let n = g.len();
    let mut in_layer = vec![false; n];
    for &v in layer {
        in_layer[v] = true;
    }
    let others: Vec<usize> = (0..n)
        .filter(|&r| !g.is_output(r) && !in_layer[r])
        .collect();
    let mut assigned = vec![false; n];
    let mut used = vec![false; n];
    let mut reversed = Vec::with_capacity(layer.len());
    while reversed.len() < layer.len() {
        let pick = cols.iter().find_map(|&c| {
            if used[c] || others.iter().any(|&r| g.is_adjacent(r, c)) {
                return None;
            }
            let mut open = layer
                .iter()
                .filter(|&&v| !assigned[v] && g.is_adjacent(v, c));
            match (open.next(), open.next()) {
                (Some(&v), None) => Some((v, c)),
                _ => None,
            }
        });
        let (v, c) = pick?;
        assigned[v] = true;
        used[c] = true;
        reversed.push((v, c));
    }
    reversed.reverse();
    Some(reversed)
}

/// Brings the correction matrix of `L_1` into causal form.
///
/// If it already is, nothing changes. Otherwise every vector `c_v` of `L_1`
/// is reduced in ascending `v`: the first unused support vertex `k` becomes
/// the pivot and each other support vertex `i` is folded in with
/// `col_k += (c_i / c_k) col_i`. The pivot column then equals `e_v / c_k`.
/// Each operation `col_k += s col_i` is realised by `Phase_k(s A[i,k])`
/// followed by `CX_{k→i}(s)`, and the gates of later operations act first.
pub fn triangularise_layer<F: Field>(
    g: &OpenGraph<F>,
    fr: &FlowResult<F>,
) -> Result<TriangularisedLayer<F>, ExtractError> {
    let (ni, no) = (g.inputs().len(), g.outputs().len());
    if ni != no {
        return Err(ExtractError::IoMismatch {
            inputs: ni,
            outputs: no,
        });
    }
    let layer = fr
        .layer_vertices(1)
        .ok_or(ExtractError::NothingToPeel)?
        .to_vec();
    let cols: Vec<usize> = (0..g.len())
        .filter(|&v| g.is_output(v) && !g.is_input(v))
        .collect();
    if let Some(causal_map) = causal_assignment(g, &layer, &cols) {
        return Ok(TriangularisedLayer {
            graph: g.clone(),
            ops: Vec::new(),
            side_gates: Vec::new(),
            causal_map,
        });
    }

    let f = g.field().clone();
    let mut adj = g.adjacency().clone();
    let mut pending: BTreeMap<usize, BTreeMap<usize, F::Elem>> = BTreeMap::new();
    for &v in &layer {
        let c = fr.correction(v).ok_or(ExtractError::InvalidFlow(
            crate::flow::FlowError::NotMeasured(v),
        ))?;
        pending.insert(v, c.iter().copied().collect());
    }
    let mut ops = Vec::new();
    let mut forward = Vec::new();
    let mut used = vec![false; g.len()];
    for &v in &layer {
        let support: Vec<(usize, F::Elem)> = pending[&v]
            .iter()
            .filter(|(_, &a)| !f.is_zero(a))
            .map(|(&k, &a)| (k, a))
            .collect();
        let &(k, ck) = support
            .iter()
            .find(|(k, _)| !used[*k])
            .ok_or_else(|| ExtractError::Internal(format!("no pivot left for vertex {v}")))?;
        let ck_inv = f.inv(ck).expect("support entries are nonzero");
        for &(i, ci) in support.iter().filter(|(i, _)| *i != k) {
            let s = f.mul(ci, ck_inv);
            forward.push(SideGate::Phase {
                vertex: k,
                weight: f.mul(s, adj.get(i, k)),
            });
            forward.push(SideGate::CX {
                control: k,
                target: i,
                weight: s,
            });
            for l in (0..g.len()).filter(|&l| l != k) {
                let w = f.clean(f.add(adj.get(l, k), f.mul(s, adj.get(l, i))));
                adj.set(l, k, w);
                adj.set(k, l, w);
            }
            ops.push(ColumnOp::AddScaled {
                target: k,
                source: i,
                scalar: s,
            });
            for vec in pending.values_mut() {
                let at_k = vec.get(&k).copied().unwrap_or_else(|| f.zero());
                if f.is_zero(at_k) {
                    continue;
                }
                let e = vec.entry(i).or_insert_with(|| f.zero());
                *e = f.clean(f.sub(*e, f.mul(s, at_k)));
            }
        }
        used[k] = true;
    }
    let graph = g.with_adjacency(adj)?;
    let causal_map = causal_assignment(&graph, &layer, &cols)
        .ok_or_else(|| ExtractError::Internal("reduction did not reach causal form".into()))?;
    let side_gates = forward
        .chunks(2)
        .rev()
        .flatten()
        .copied()
        .filter(|gate| !matches!(gate, SideGate::Phase { weight, .. } if f.is_zero(*weight)))
        .collect();
    Ok(TriangularisedLayer {
        graph,
        ops,
        side_gates,
        causal_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_linalg::{apply_column_ops, Reals};
    use crate::fixtures;
    use crate::flow::flow_from_layers;

    #[test]
    fn hexagon_last_vertex_gets_a_unit_column() {
        let f = Reals::default();
        let g = fixtures::hexagon(f).unwrap();
        let fr = flow_from_layers(&g, vec![vec![2], vec![1], vec![0]]).unwrap();
        let t = triangularise_layer(&g, &fr).unwrap();
        assert_eq!(t.ops.len(), 2);
        assert_eq!(
            t.side_gates
                .iter()
                .filter(|s| matches!(s, SideGate::CX { .. }))
                .count(),
            2
        );
        let cut = g.adjacency().submatrix(&[0, 1, 2], &[3, 4, 5]);
        let relabel: Vec<_> = t.ops.iter().map(|op| op.relabel(|v| v - 3)).collect();
        let after = apply_column_ops(&cut, &relabel).unwrap();
        assert_eq!(after.column(0), vec![0.0, 0.0, -2.0]);
        assert_eq!(t.causal_map, vec![(2, 3)]);
        assert_eq!(after, t.graph.adjacency().submatrix(&[0, 1, 2], &[3, 4, 5]));
    }

    #[test]
    fn causal_layers_need_no_operations() {
        let f = Reals::default();
        let g = fixtures::adder(f, 4).unwrap();
        let fr = crate::flow::find_flow(&g).unwrap();
        let t = triangularise_layer(&g, &fr).unwrap();
        assert!(t.ops.is_empty() && t.side_gates.is_empty());
        assert_eq!(t.causal_map, vec![(0, 1), (2, 3), (4, 5), (6, 7)]);
    }

    #[test]
    fn unequal_io_is_refused() {
        let f = Reals::default();
        let g = fixtures::lone_output(f).unwrap();
        let fr = crate::flow::find_flow(&g).unwrap();
        assert_eq!(
            triangularise_layer(&g, &fr),
            Err(ExtractError::IoMismatch {
                inputs: 0,
                outputs: 1
            })
        );
    }
}
