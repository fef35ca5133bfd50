use std::collections::BTreeMap;

use crate::field_linalg::Field;
use crate::open_graph::OpenGraph;

use super::{FlowError, FlowResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Displacement<E> {
    pub axis: Axis,
    pub vertex: usize,
    pub amount: E,
}

/// Product of displacements; X terms first, each axis in ascending vertex
/// order, zero amounts dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionOp<E> {
    pub terms: Vec<Displacement<E>>,
}

impl<E> CorrectionOp<E> {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn on_axis(&self, axis: Axis) -> impl Iterator<Item = &Displacement<E>> {
        self.terms.iter().filter(move |t| t.axis == axis)
    }
}

/// Reduced-form correction for a total displacement vector `x = Σ m_j c_j`
/// applied while layer `k` is the latest measured.
fn reduced_form<F: Field>(
    g: &OpenGraph<F>,
    fr: &FlowResult<F>,
    k: usize,
    x: &BTreeMap<usize, F::Elem>,
) -> CorrectionOp<F::Elem> {
    let f = g.field();
    let mut terms: Vec<Displacement<F::Elem>> = x
        .iter()
        .filter(|(_, &a)| !f.is_zero(a))
        .map(|(&v, &a)| Displacement {
            axis: Axis::X,
            vertex: v,
            amount: f.neg(a),
        })
        .collect();
    for l in (0..g.len()).filter(|&l| fr.layer(l) < k) {
        let s = x.iter().fold(f.zero(), |acc, (&v, &a)| {
            f.add(acc, f.mul(g.weight(v, l), a))
        });
        let s = f.clean(s);
        if !f.is_zero(s) {
            terms.push(Displacement {
                axis: Axis::Z,
                vertex: l,
                amount: f.neg(s),
            });
        }
    }
    CorrectionOp { terms }
}

fn measured_layer<F: Field>(fr: &FlowResult<F>, j: usize) -> Result<usize, FlowError> {
    match fr.layer_map().get(j) {
        Some(&k) if k > 0 => Ok(k),
        _ => Err(FlowError::NotMeasured(j)),
    }
}

/// Correction cancelling the error left by measuring `j` with error value
/// `m`: `X_k(−m c_k)` on the support and `Z_ℓ(−Σ_k A[k,ℓ] m c_k)` on every
/// still-unmeasured `ℓ`.
pub fn correction_for<F: Field>(
    g: &OpenGraph<F>,
    fr: &FlowResult<F>,
    j: usize,
    m: F::Elem,
) -> Result<CorrectionOp<F::Elem>, FlowError> {
    let k = measured_layer(fr, j)?;
    let f = g.field();
    let c = fr.correction(j).ok_or(FlowError::NotMeasured(j))?;
    let x = c.iter().map(|&(v, a)| (v, f.mul(m, a))).collect();
    Ok(reduced_form(g, fr, k, &x))
}

/// Combined correction for layer `k`; `outcomes[i]` is the error value of the
/// `i`-th vertex of `L_k` in ascending order.
pub fn simultaneous_correction<F: Field>(
    g: &OpenGraph<F>,
    fr: &FlowResult<F>,
    k: usize,
    outcomes: &[F::Elem],
) -> Result<CorrectionOp<F::Elem>, FlowError> {
    let layer = fr.layer_vertices(k).ok_or(FlowError::NotALayer(k))?;
    if layer.len() != outcomes.len() {
        return Err(FlowError::OutcomeCount {
            expected: layer.len(),
            found: outcomes.len(),
        });
    }
    let f = g.field();
    let mut x: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (&j, &m) in layer.iter().zip(outcomes) {
        let c = fr.correction(j).ok_or(FlowError::NotMeasured(j))?;
        for &(v, a) in c {
            let e = x.entry(v).or_insert_with(|| f.zero());
            *e = f.add(*e, f.mul(m, a));
        }
    }
    Ok(reduced_form(g, fr, k, &x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_linalg::{PrimeField, Reals};
    use crate::flow::{find_causal_flow, find_flow};

    fn line(f: PrimeField) -> OpenGraph<PrimeField> {
        let labels = ["i", "m", "o"].iter().map(|s| s.to_string()).collect();
        OpenGraph::new(f, labels, &[(0, 1, 2), (1, 2, 3)], &[0], &[2]).unwrap()
    }

    #[test]
    fn zero_outcome_needs_nothing() {
        let g = line(PrimeField::new(5).unwrap());
        let fr = find_flow(&g).unwrap();
        assert!(correction_for(&g, &fr, 0, 0).unwrap().is_empty());
        assert!(simultaneous_correction(&g, &fr, 2, &[0])
            .unwrap()
            .is_empty());
    }

    #[test]
    fn causal_form() {
        // f(i) = m with A[i,m] = 2, so X_m(−m/2) and Z_o(−3m/2).
        let f = PrimeField::new(5).unwrap();
        let g = line(f);
        let fr = find_causal_flow(&g).unwrap().to_flow_result(&g);
        let op = correction_for(&g, &fr, 0, 1).unwrap();
        let half = f.inv(2).unwrap();
        assert_eq!(
            op.terms,
            vec![
                Displacement {
                    axis: Axis::X,
                    vertex: 1,
                    amount: f.neg(half)
                },
                Displacement {
                    axis: Axis::Z,
                    vertex: 2,
                    amount: f.neg(f.mul(3, half))
                },
            ]
        );
        assert_eq!(op, simultaneous_correction(&g, &fr, 2, &[1]).unwrap());
    }

    #[test]
    fn unmeasured_vertex_rejected() {
        let g = line(PrimeField::new(7).unwrap());
        let fr = find_flow(&g).unwrap();
        assert_eq!(
            correction_for(&g, &fr, 2, 1),
            Err(FlowError::NotMeasured(2))
        );
        assert!(matches!(
            simultaneous_correction(&g, &fr, 1, &[1, 1]),
            Err(FlowError::OutcomeCount { .. })
        ));
        assert!(matches!(
            simultaneous_correction(&g, &fr, 3, &[]),
            Err(FlowError::NotALayer(3))
        ));
    }

    #[test]
    fn real_amounts_scale_linearly() {
        let labels = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let g = OpenGraph::new(Reals::default(), labels, &[(0, 1, 4.0)], &[0], &[1]).unwrap();
        let fr = find_flow(&g).unwrap();
        let op = correction_for(&g, &fr, 0, 2.0).unwrap();
        assert_eq!(op.terms.len(), 1);
        assert!((op.terms[0].amount + 0.5).abs() < 1e-12);
    }
}
