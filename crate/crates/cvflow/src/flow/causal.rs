use std::collections::BTreeMap;

use crate::field_linalg::Field;
use crate::open_graph::OpenGraph;

use super::FlowResult;

/// Causal flow: one corrector `f(v)` per measured vertex, with layers as in
/// [`FlowResult`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalFlow {
    f: BTreeMap<usize, usize>,
    layer: Vec<usize>,
    layers: Vec<Vec<usize>>,
}

impl CausalFlow {
    pub fn successor(&self, v: usize) -> Option<usize> {
        self.f.get(&v).copied()
    }

    pub fn successors(&self) -> &BTreeMap<usize, usize> {
        &self.f
    }

    pub fn layer(&self, v: usize) -> usize {
        self.layer[v]
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Measurement sequence: deepest layer first, ascending inside a layer.
    pub fn measurement_order(&self) -> Vec<usize> {
        self.layers.iter().rev().flatten().copied().collect()
    }

    /// The same flow as single-support correction vectors
    /// `c_v = A[v, f(v)]⁻¹ · e_{f(v)}`.
    pub fn to_flow_result<F: Field>(&self, g: &OpenGraph<F>) -> FlowResult<F> {
        let f = g.field();
        let corrections = self
            .f
            .iter()
            .map(|(&v, &u)| {
                let w = f.inv(g.weight(v, u)).expect("causal arcs are edges");
                (v, vec![(u, w)])
            })
            .collect();
        FlowResult::from_parts(self.layer.clone(), self.layers.clone(), corrections)
    }

    /// Checks the causal-flow conditions against `g`.
    pub fn is_valid_for<F: Field>(&self, g: &OpenGraph<F>) -> bool {
        let n = g.len();
        if self.layer.len() != n {
            return false;
        }
        for v in 0..n {
            if g.is_output(v) == self.f.contains_key(&v) {
                return false;
            }
        }
        self.f.iter().all(|(&i, &fi)| {
            g.is_adjacent(i, fi)
                && !g.is_input(fi)
                && self.layer[fi] < self.layer[i]
                && (0..n)
                    .filter(|&k| k != i && g.is_adjacent(fi, k))
                    .all(|k| self.layer[k] < self.layer[i])
        })
    }
}

/// Layered greedy causal-flow search.
///
/// A vertex `v` joins the current layer when an already-placed non-input
/// neighbour `u` has `v` as its only neighbour outside the placed set; the
/// smallest such `u` becomes `f(v)`.
pub fn find_causal_flow<F: Field>(g: &OpenGraph<F>) -> Option<CausalFlow> {
    let n = g.len();
    let mut out: Vec<bool> = (0..n).map(|v| g.is_output(v)).collect();
    let mut layer = vec![0usize; n];
    let mut layers = Vec::new();
    let mut f = BTreeMap::new();
    while out.iter().any(|&o| !o) {
        let k = layers.len() + 1;
        let mut current = Vec::new();
        for v in (0..n).filter(|&v| !out[v]) {
            let corrector = (0..n).find(|&u| {
                out[u]
                    && !g.is_input(u)
                    && g.is_adjacent(v, u)
                    && (0..n).all(|x| x == v || out[x] || !g.is_adjacent(u, x))
            });
            if let Some(u) = corrector {
                f.insert(v, u);
                layer[v] = k;
                current.push(v);
            }
        }
        if current.is_empty() {
            return None;
        }
        for &v in &current {
            out[v] = true;
        }
        layers.push(current);
    }
    Some(CausalFlow { f, layer, layers })
}
