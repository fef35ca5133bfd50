use crate::field_linalg::PrimeField;
use crate::open_graph::OpenGraph;

use super::{apply, GateOp, QuditState, SimError};

/// `E_G` applied to the input state on `I` and `H|0⟩` on every other vertex.
///
/// Qudit `q` of the result is vertex `q`; qudit `i` of `input` sits on the
/// `i`-th input in ascending vertex order.
pub fn prepare_graph_state(
    g: &OpenGraph<PrimeField>,
    input: &QuditState,
) -> Result<QuditState, SimError> {
    let d = g.field().modulus();
    if input.dim() != d {
        return Err(SimError::FieldMismatch {
            graph: d,
            state: input.dim(),
        });
    }
    let inputs = g.inputs();
    if input.qudits() != inputs.len() {
        return Err(SimError::InputCount {
            expected: inputs.len(),
            found: input.qudits(),
        });
    }
    let others: Vec<usize> = (0..g.len()).filter(|&v| !g.is_input(v)).collect();
    let mut rest = QuditState::basis(d, &vec![0; others.len()])?;
    for q in 0..others.len() {
        apply(&mut rest, &GateOp::H { q })?;
    }
    let joint = input.tensor(&rest)?;
    let mut order = vec![0; g.len()];
    for (q, &v) in inputs.iter().chain(&others).enumerate() {
        order[v] = q;
    }
    let mut s = joint.permute(&order)?;
    for (u, v, w) in g.edges() {
        apply(&mut s, &GateOp::CZ { a: u, b: v, w })?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_edges_gives_product_state() {
        let f = PrimeField::new(3).unwrap();
        let g = OpenGraph::new(f, vec!["a".into(), "b".into()], &[], &[1], &[0]).unwrap();
        let input = QuditState::basis(3, &[2]).unwrap();
        let s = prepare_graph_state(&g, &input).unwrap();
        let mut plus = QuditState::basis(3, &[0]).unwrap();
        apply(&mut plus, &GateOp::H { q: 0 }).unwrap();
        assert_eq!(s, plus.tensor(&input).unwrap());
    }

    #[test]
    fn wrong_inputs_rejected() {
        let f = PrimeField::new(3).unwrap();
        let g = OpenGraph::new(f, vec!["a".into()], &[], &[0], &[0]).unwrap();
        let five = QuditState::basis(5, &[0]).unwrap();
        assert!(matches!(
            prepare_graph_state(&g, &five),
            Err(SimError::FieldMismatch { .. })
        ));
        let two = QuditState::basis(3, &[0, 0]).unwrap();
        assert!(matches!(
            prepare_graph_state(&g, &two),
            Err(SimError::InputCount { .. })
        ));
    }
}
