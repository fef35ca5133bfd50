use std::collections::HashMap;

use crate::field_linalg::{Field, Matrix};

use super::{GraphError, OpenGraph};

/// Total order over a subset of vertices, earliest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrder {
    seq: Vec<usize>,
    pos: HashMap<usize, usize>,
}

impl VertexOrder {
    pub fn new(seq: Vec<usize>) -> Result<Self, GraphError> {
        let mut pos = HashMap::with_capacity(seq.len());
        for (i, &v) in seq.iter().enumerate() {
            if pos.insert(v, i).is_some() {
                return Err(GraphError::DuplicateInOrder(v));
            }
        }
        Ok(Self { seq, pos })
    }

    pub fn sequence(&self) -> &[usize] {
        &self.seq
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.pos.get(&v).copied()
    }

    /// `P(j)`: every vertex up to and including `j`.
    pub fn past(&self, j: usize) -> Result<&[usize], GraphError> {
        self.past_of(&[j])
    }

    /// `P(L)`: every vertex up to the latest member of `targets`.
    pub fn past_of(&self, targets: &[usize]) -> Result<&[usize], GraphError> {
        let mut end = 0;
        for &t in targets {
            let p = self.position(t).ok_or(GraphError::NotInOrder(t))?;
            end = end.max(p + 1);
        }
        Ok(&self.seq[..end])
    }
}

/// A correction matrix together with the vertices labelling its rows and
/// columns.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionMatrix<F: Field> {
    pub matrix: Matrix<F>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl<F: Field> CorrectionMatrix<F> {
    /// Rows are `past` in the given order; columns are the remaining
    /// non-input vertices in ascending index order.
    pub fn for_past(g: &OpenGraph<F>, past: &[usize]) -> Self {
        let mut in_past = vec![false; g.len()];
        for &v in past {
            in_past[v] = true;
        }
        let cols: Vec<usize> = (0..g.len())
            .filter(|&v| !in_past[v] && !g.is_input(v))
            .collect();
        Self {
            matrix: g.adjacency().submatrix(past, &cols),
            rows: past.to_vec(),
            cols,
        }
    }

    pub fn row_of(&self, v: usize) -> Option<usize> {
        self.rows.iter().position(|&r| r == v)
    }

    /// Unit vector on the row belonging to `v`.
    pub fn unit(&self, v: usize) -> Option<Vec<F::Elem>> {
        let f = self.matrix.field();
        let r = self.row_of(v)?;
        Some(
            (0..self.rows.len())
                .map(|i| if i == r { f.one() } else { f.zero() })
                .collect(),
        )
    }
}

/// `A[P(target), V ∖ (P(target) ∪ I)]`.
pub fn correction_matrix<F: Field>(
    g: &OpenGraph<F>,
    order: &VertexOrder,
    targets: &[usize],
) -> Result<CorrectionMatrix<F>, GraphError> {
    Ok(CorrectionMatrix::for_past(g, order.past_of(targets)?))
}
