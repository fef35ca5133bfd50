use std::collections::HashMap;

use crate::field_linalg::{Field, Matrix};

use super::GraphError;

/// Weighted open graph `(G, I, O)` with a symmetric zero-diagonal adjacency.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenGraph<F: Field> {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Matrix<F>,
    inputs: Vec<bool>,
    outputs: Vec<bool>,
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>, GraphError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(GraphError::DuplicateVertex(l.clone()));
        }
    }
    Ok(index)
}

fn membership(n: usize, set: &[usize]) -> Result<Vec<bool>, GraphError> {
    let mut out = vec![false; n];
    for &v in set {
        *out.get_mut(v).ok_or(GraphError::VertexOutOfRange(v))? = true;
    }
    Ok(out)
}

impl<F: Field> OpenGraph<F> {
    /// Builds a graph from an undirected edge list over vertex indices.
    pub fn new(
        field: F,
        labels: Vec<String>,
        edges: &[(usize, usize, F::Elem)],
        inputs: &[usize],
        outputs: &[usize],
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        let index = index_labels(&labels)?;
        let mut adjacency = Matrix::zeros(field.clone(), n, n);
        let mut seen = vec![false; n * n];
        for &(u, v, w) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v));
            }
            let (lu, lv) = (labels[u].clone(), labels[v].clone());
            if u == v {
                return Err(GraphError::NonzeroDiagonal(lu));
            }
            if field.is_zero(w) {
                return Err(GraphError::ZeroWeightEdge(lu, lv));
            }
            if seen[u * n + v] {
                if field.is_zero(field.sub(adjacency.get(u, v), w)) {
                    return Err(GraphError::DuplicateEdge(lu, lv));
                }
                return Err(GraphError::Asymmetric(lu, lv));
            }
            seen[u * n + v] = true;
            seen[v * n + u] = true;
            adjacency.set(u, v, w);
            adjacency.set(v, u, w);
        }
        Ok(Self {
            labels,
            index,
            adjacency,
            inputs: membership(n, inputs)?,
            outputs: membership(n, outputs)?,
        })
    }

    /// Builds a graph from a full adjacency matrix.
    pub fn from_adjacency(
        labels: Vec<String>,
        adjacency: Matrix<F>,
        inputs: &[usize],
        outputs: &[usize],
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        if adjacency.rows() != n || adjacency.cols() != n {
            return Err(GraphError::ShapeMismatch {
                vertices: n,
                rows: adjacency.rows(),
                cols: adjacency.cols(),
            });
        }
        let index = index_labels(&labels)?;
        let f = adjacency.field().clone();
        let mut adjacency = adjacency;
        for i in 0..n {
            if !f.is_zero(adjacency.get(i, i)) {
                return Err(GraphError::NonzeroDiagonal(labels[i].clone()));
            }
            adjacency.set(i, i, f.zero());
            for j in i + 1..n {
                let (a, b) = (adjacency.get(i, j), adjacency.get(j, i));
                if !f.is_zero(f.sub(a, b)) {
                    return Err(GraphError::Asymmetric(labels[i].clone(), labels[j].clone()));
                }
                let a = f.clean(a);
                adjacency.set(i, j, a);
                adjacency.set(j, i, a);
            }
        }
        Ok(Self {
            labels,
            index,
            adjacency,
            inputs: membership(n, inputs)?,
            outputs: membership(n, outputs)?,
        })
    }

    pub fn field(&self) -> &F {
        self.adjacency.field()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, GraphError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    }

    pub fn adjacency(&self) -> &Matrix<F> {
        &self.adjacency
    }

    pub fn weight(&self, u: usize, v: usize) -> F::Elem {
        self.adjacency.get(u, v)
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        !self.field().is_zero(self.weight(u, v))
    }

    pub fn is_input(&self, v: usize) -> bool {
        self.inputs[v]
    }

    pub fn is_output(&self, v: usize) -> bool {
        self.outputs[v]
    }

    pub fn inputs(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.inputs[v]).collect()
    }

    pub fn outputs(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.outputs[v]).collect()
    }

    /// Vertices outside `O`, i.e. the ones that get measured.
    pub fn measured(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| !self.outputs[v]).collect()
    }

    pub fn neighbours(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        if v >= self.len() {
            return Err(GraphError::VertexOutOfRange(v));
        }
        Ok((0..self.len())
            .filter(|&u| self.is_adjacent(v, u))
            .collect())
    }

    /// Edges `(u, v, w)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, F::Elem)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            for v in u + 1..self.len() {
                if self.is_adjacent(u, v) {
                    out.push((u, v, self.weight(u, v)));
                }
            }
        }
        out
    }

    /// Same graph with a different input/output designation.
    pub fn with_io(&self, inputs: &[usize], outputs: &[usize]) -> Result<Self, GraphError> {
        Ok(Self {
            inputs: membership(self.len(), inputs)?,
            outputs: membership(self.len(), outputs)?,
            ..self.clone()
        })
    }

    /// Same vertices and designation with a replaced adjacency matrix.
    pub fn with_adjacency(&self, adjacency: Matrix<F>) -> Result<Self, GraphError> {
        Self::from_adjacency(
            self.labels.clone(),
            adjacency,
            &self.inputs(),
            &self.outputs(),
        )
    }

    /// Induced subgraph on `keep` (in the given order) with new `I`/`O`
    /// given as indices into the original graph.
    pub fn induced(
        &self,
        keep: &[usize],
        inputs: &[usize],
        outputs: &[usize],
    ) -> Result<Self, GraphError> {
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            *pos.get_mut(v).ok_or(GraphError::VertexOutOfRange(v))? = i;
        }
        let map = |set: &[usize]| -> Result<Vec<usize>, GraphError> {
            set.iter()
                .map(|&v| match pos.get(v) {
                    Some(&p) if p != usize::MAX => Ok(p),
                    _ => Err(GraphError::VertexOutOfRange(v)),
                })
                .collect()
        };
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        Self::from_adjacency(
            labels,
            self.adjacency.submatrix(keep, keep),
            &map(inputs)?,
            &map(outputs)?,
        )
    }
}
