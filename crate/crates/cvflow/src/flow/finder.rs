use std::collections::BTreeMap;

use crate::field_linalg::{solve_columns, Field, Matrix};
use crate::open_graph::{CorrectionMatrix, OpenGraph, VertexOrder};

use super::FlowError;

/// Sparse correction vector: `(column vertex, amount)` pairs in ascending
/// vertex order, zero amounts omitted.
pub type Correction<E> = Vec<(usize, E)>;

/// Layered flow: a layer per vertex and a correction vector per measured
/// vertex.
///
/// Outputs sit in layer 0. Layer `k + 1` is measured before layer `k`, so
/// `L_N` goes first and `L_1` last.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult<F: Field> {
    layer: Vec<usize>,
    layers: Vec<Vec<usize>>,
    corrections: BTreeMap<usize, Correction<F::Elem>>,
}

impl<F: Field> FlowResult<F> {
    pub(crate) fn from_parts(
        layer: Vec<usize>,
        layers: Vec<Vec<usize>>,
        corrections: BTreeMap<usize, Correction<F::Elem>>,
    ) -> Self {
        Self {
            layer,
            layers,
            corrections,
        }
    }

    pub fn layer(&self, v: usize) -> usize {
        self.layer[v]
    }

    pub fn layer_map(&self) -> &[usize] {
        &self.layer
    }

    /// Number of non-output layers `N`.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// `L_k` for `k` in `1..=N`, ascending vertex order.
    pub fn layer_vertices(&self, k: usize) -> Option<&[usize]> {
        k.checked_sub(1)
            .and_then(|i| self.layers.get(i))
            .map(Vec::as_slice)
    }

    pub fn correction(&self, v: usize) -> Option<&Correction<F::Elem>> {
        self.corrections.get(&v)
    }

    pub fn corrections(&self) -> &BTreeMap<usize, Correction<F::Elem>> {
        &self.corrections
    }

    /// Measurement sequence: `L_N` first, ascending index inside a layer.
    pub fn measurement_order(&self) -> Vec<usize> {
        self.layers.iter().rev().flatten().copied().collect()
    }

    pub fn order(&self) -> VertexOrder {
        VertexOrder::new(self.measurement_order()).expect("layers are disjoint")
    }

    /// Vertices measured no later than layer `k`: every layer `≥ k`.
    pub fn past_of_layer(&self, k: usize) -> Vec<usize> {
        self.layers[k - 1..]
            .iter()
            .rev()
            .flatten()
            .copied()
            .collect()
    }

    /// Replaces the stored correction of `v`; meant for negative controls.
    pub fn with_correction(mut self, v: usize, c: Correction<F::Elem>) -> Self {
        self.corrections.insert(v, c);
        self
    }

    /// Re-multiplies every stored vector through its correction matrix.
    pub fn check(&self, g: &OpenGraph<F>) -> Result<(), FlowError> {
        for k in 1..=self.depth() {
            let cm = CorrectionMatrix::for_past(g, &self.past_of_layer(k));
            for &v in &self.layers[k - 1] {
                let c = self.corrections.get(&v).ok_or(FlowError::NotMeasured(v))?;
                let dense = densify(g.field(), &cm.cols, c)?;
                let lhs = cm.matrix.mul_vec(&dense)?;
                let unit = cm.unit(v).ok_or(FlowError::NotMeasured(v))?;
                if !crate::field_linalg::residual_ok(&cm.matrix, &dense, &unit) {
                    return Err(FlowError::Unsound {
                        vertex: v,
                        lhs: format!("{lhs:?}"),
                    });
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn densify<F: Field>(
    f: &F,
    cols: &[usize],
    c: &Correction<F::Elem>,
) -> Result<Vec<F::Elem>, FlowError> {
    let mut out = vec![f.zero(); cols.len()];
    for &(v, a) in c {
        let i = cols
            .iter()
            .position(|&x| x == v)
            .ok_or(FlowError::OutsideColumns(v))?;
        out[i] = a;
    }
    Ok(out)
}

fn sparsify<F: Field>(f: &F, cols: &[usize], x: &[F::Elem]) -> Correction<F::Elem> {
    cols.iter()
        .zip(x)
        .filter(|(_, &a)| !f.is_zero(a))
        .map(|(&v, &a)| (v, a))
        .collect()
}

/// Layered flow search: every round adds all vertices whose correction
/// equation is solvable against the current output set.
///
/// Returns `None` when a round makes no progress. Over `ℤ_2` this decides
/// g-flow.
pub fn find_flow<F: Field>(g: &OpenGraph<F>) -> Option<FlowResult<F>> {
    let f = g.field().clone();
    let n = g.len();
    let mut out: Vec<bool> = (0..n).map(|v| g.is_output(v)).collect();
    let mut layer = vec![0usize; n];
    let mut layers = Vec::new();
    let mut corrections = BTreeMap::new();
    loop {
        let rows: Vec<usize> = (0..n).filter(|&v| !out[v]).collect();
        if rows.is_empty() {
            return Some(FlowResult {
                layer,
                layers,
                corrections,
            });
        }
        let cols: Vec<usize> = (0..n).filter(|&v| out[v] && !g.is_input(v)).collect();
        let a = g.adjacency().submatrix(&rows, &cols);
        let rhs = Matrix::identity(f.clone(), rows.len());
        let solutions = solve_columns(&a, &rhs).expect("square right-hand side");
        let k = layers.len() + 1;
        let mut current = Vec::new();
        for (&v, x) in rows.iter().zip(solutions) {
            if let Some(x) = x {
                corrections.insert(v, sparsify(&f, &cols, &x));
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
}

/// Correction vectors for a prescribed layering, solved in `g`.
///
/// `layers[k - 1]` is `L_k`; together they must partition the non-outputs.
pub fn flow_from_layers<F: Field>(
    g: &OpenGraph<F>,
    layers: Vec<Vec<usize>>,
) -> Result<FlowResult<F>, FlowError> {
    let n = g.len();
    let mut layer = vec![0usize; n];
    let mut seen = vec![false; n];
    for (i, l) in layers.iter().enumerate() {
        if l.is_empty() {
            return Err(FlowError::NotALayer(i + 1));
        }
        for &v in l {
            if v >= n || g.is_output(v) || seen[v] {
                return Err(FlowError::BadLayering(v));
            }
            seen[v] = true;
            layer[v] = i + 1;
        }
    }
    if let Some(v) = (0..n).find(|&v| !g.is_output(v) && !seen[v]) {
        return Err(FlowError::BadLayering(v));
    }
    let mut layers = layers;
    for l in &mut layers {
        l.sort_unstable();
    }
    let mut fr = FlowResult {
        layer,
        layers,
        corrections: BTreeMap::new(),
    };
    let f = g.field();
    for k in 1..=fr.depth() {
        let cm = CorrectionMatrix::for_past(g, &fr.past_of_layer(k));
        let targets = fr.layers[k - 1].clone();
        let mut rhs = Matrix::zeros(f.clone(), cm.rows.len(), targets.len());
        for (j, &v) in targets.iter().enumerate() {
            rhs.set(cm.row_of(v).expect("layer is in its past"), j, f.one());
        }
        for (&v, x) in targets.iter().zip(solve_columns(&cm.matrix, &rhs)?) {
            let x = x.ok_or(FlowError::Unsolvable(v))?;
            fr.corrections.insert(v, sparsify(f, &cm.cols, &x));
        }
    }
    Ok(fr)
}

/// `L_1, …, L_N` of a flow.
pub fn layer_decomposition<F: Field>(fr: &FlowResult<F>) -> Vec<Vec<usize>> {
    fr.layers.clone()
}
