use crate::extract::{Circuit, Gate};
use crate::field_linalg::{Field, PrimeField};

use super::{apply, GateOp, QuditState, SimError};

/// Gate sequence realising one circuit gate.
pub fn lower_gate(f: &PrimeField, gate: &Gate<u64>) -> Result<Vec<GateOp>, SimError> {
    Ok(match *gate {
        Gate::J {
            wire,
            weight,
            angles: [a, b, c],
            ..
        } => {
            let inv = f.inv(weight).ok_or(SimError::NonInvertibleWeight(weight))?;
            vec![
                GateOp::DiagPoly { q: wire, a, b, c },
                GateOp::H { q: wire },
                GateOp::M { q: wire, w: inv },
            ]
        }
        Gate::CZ { a, b, weight } => vec![GateOp::CZ { a, b, w: weight }],
        Gate::CX {
            control,
            target,
            weight,
        } => vec![GateOp::CX {
            control,
            target,
            w: weight,
        }],
        Gate::Phase { wire, weight } => vec![GateOp::DiagPoly {
            q: wire,
            a: 0,
            b: weight,
            c: 0,
        }],
    })
}

/// Runs `c` on `input` (qudit `i` on wire `i`) and returns the state with
/// qudits reordered to ascending output vertex, matching
/// [`run_mbqc`](super::run_mbqc).
pub fn run_circuit(c: &Circuit<PrimeField>, input: &QuditState) -> Result<QuditState, SimError> {
    let d = c.field.modulus();
    if input.dim() != d {
        return Err(SimError::FieldMismatch {
            graph: d,
            state: input.dim(),
        });
    }
    if input.qudits() != c.wires() {
        return Err(SimError::InputCount {
            expected: c.wires(),
            found: input.qudits(),
        });
    }
    let mut s = input.clone();
    for gate in &c.gates {
        for op in lower_gate(&c.field, gate)? {
            apply(&mut s, &op)?;
        }
    }
    let mut ends: Vec<(usize, usize)> = c
        .paths
        .iter()
        .enumerate()
        .map(|(w, p)| (*p.last().expect("paths are nonempty"), w))
        .collect();
    ends.sort_unstable();
    let order: Vec<usize> = ends.into_iter().map(|(_, w)| w).collect();
    s.permute(&order)
}
