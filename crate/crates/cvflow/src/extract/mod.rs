//! Circuit extraction from patterns with a flow and `|I| = |O|`.
//!
//! Layers are peeled from the last-measured end. Each peeled layer `L` is
//! brought into causal form by column operations (see
//! [`triangularise_layer`]), its vertices are teleported onto their partners
//! `C`, and the column operations are undone by controlled-X and phase gates.
//! What is left is the induced subgraph on `V ∖ C`, handled recursively.

mod circuit;
mod triangularise;

pub use circuit::{Circuit, Gate, Section};
pub use triangularise::{causal_assignment, triangularise_layer, SideGate, TriangularisedLayer};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::field_linalg::Field;
use crate::flow::{flow_from_layers, CausalFlow, FlowError, FlowResult};
use crate::open_graph::{GraphError, OpenGraph};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ExtractError {
    #[error("extraction needs as many inputs as outputs ({inputs} inputs, {outputs} outputs)")]
    IoMismatch { inputs: usize, outputs: usize },
    #[error("flow does not hold on this graph: {0}")]
    InvalidFlow(FlowError),
    #[error("causal flow does not hold on this graph")]
    InvalidCausalFlow,
    #[error("expected {expected} angle triples, found {found}")]
    AngleCount { expected: usize, found: usize },
    #[error("no layer left to peel")]
    NothingToPeel,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("extraction invariant violated: {0}")]
    Internal(String),
}

/// Vertex-disjoint paths, one per wire, each from an input to an output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCover {
    pub paths: Vec<Vec<usize>>,
}

impl PathCover {
    /// True iff the paths partition the vertices, each starts in `I`, ends in
    /// `O`, and meets `I` and `O` nowhere else.
    ///
    /// Arcs are causal-flow arcs of the triangularised graphs, so they need
    /// not be edges of `g`.
    pub fn covers<F: Field>(&self, g: &OpenGraph<F>) -> bool {
        let mut seen = vec![false; g.len()];
        for p in &self.paths {
            let (Some(&a), Some(&b)) = (p.first(), p.last()) else {
                return false;
            };
            if p.iter().any(|&v| v >= g.len()) || !g.is_input(a) || !g.is_output(b) {
                return false;
            }
            let inner_io = p
                .iter()
                .enumerate()
                .any(|(i, &v)| (i > 0 && g.is_input(v)) || (i + 1 < p.len() && g.is_output(v)));
            if inner_io {
                return false;
            }
            for &v in p {
                if std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Emits gates while tracking which vertex each wire currently carries.
struct Builder<F: Field> {
    field: F,
    wire: Vec<Option<usize>>,
    paths: Vec<Vec<usize>>,
    gates: Vec<Gate<F::Elem>>,
    sections: Vec<Section>,
    emitted: BTreeSet<(usize, usize)>,
}

impl<F: Field> Builder<F> {
    fn new(g: &OpenGraph<F>) -> Self {
        let mut wire = vec![None; g.len()];
        let inputs = g.inputs();
        for (w, &v) in inputs.iter().enumerate() {
            wire[v] = Some(w);
        }
        Self {
            field: g.field().clone(),
            wire,
            paths: inputs.iter().map(|&v| vec![v]).collect(),
            gates: Vec::new(),
            sections: Vec::new(),
            emitted: BTreeSet::new(),
        }
    }

    fn wire_of(&self, v: usize) -> Result<usize, ExtractError> {
        self.wire[v].ok_or_else(|| ExtractError::Internal(format!("vertex {v} is not live")))
    }

    fn cz(&mut self, a: usize, b: usize, weight: F::Elem) -> Result<(), ExtractError> {
        let (wa, wb) = (self.wire_of(a)?, self.wire_of(b)?);
        self.emitted.insert((a.min(b), a.max(b)));
        self.gates.push(Gate::CZ {
            a: wa,
            b: wb,
            weight,
        });
        Ok(())
    }

    /// Teleports `from` onto the fresh vertex `to`, then entangles `to` with
    /// every live neighbour. `weight(x)` is the edge weight `to`–`x`.
    fn teleport(
        &mut self,
        from: usize,
        to: usize,
        weight: F::Elem,
        angles: [F::Elem; 3],
        neighbour_weight: impl Fn(usize) -> F::Elem,
    ) -> Result<(), ExtractError> {
        let w = self.wire_of(from)?;
        if self.wire[to].is_some() {
            return Err(ExtractError::Internal(format!(
                "vertex {to} is already live"
            )));
        }
        self.gates.push(Gate::J {
            wire: w,
            weight,
            angles,
            from,
            to,
        });
        self.wire[from] = None;
        self.wire[to] = Some(w);
        self.paths[w].push(to);
        self.emitted.insert((from.min(to), from.max(to)));
        for x in 0..self.wire.len() {
            if x != to && self.wire[x].is_some() {
                let a = neighbour_weight(x);
                if !self.field.is_zero(a) {
                    self.cz(to, x, a)?;
                }
            }
        }
        Ok(())
    }

    fn close_section(&mut self, layer: usize) {
        let start = self.sections.last().map_or(0, |s| s.end);
        self.sections.push(Section {
            layer,
            start,
            end: self.gates.len(),
        });
    }

    fn finish(
        self,
        g: &OpenGraph<F>,
        expected: BTreeSet<(usize, usize)>,
    ) -> Result<Circuit<F>, ExtractError> {
        if expected != self.emitted {
            return Err(ExtractError::Internal(
                "emitted entanglers do not match the graph".into(),
            ));
        }
        let circuit = Circuit {
            field: self.field,
            labels: g.labels().to_vec(),
            paths: self.paths,
            gates: self.gates,
            sections: self.sections,
        };
        circuit.validate().map_err(ExtractError::Internal)?;
        Ok(circuit)
    }
}

fn check_shape<F: Field>(g: &OpenGraph<F>, angles: &[[F::Elem; 3]]) -> Result<(), ExtractError> {
    let (ni, no) = (g.inputs().len(), g.outputs().len());
    if ni != no {
        return Err(ExtractError::IoMismatch {
            inputs: ni,
            outputs: no,
        });
    }
    if angles.len() != g.len() {
        return Err(ExtractError::AngleCount {
            expected: g.len(),
            found: angles.len(),
        });
    }
    Ok(())
}

fn base_entanglers<F: Field>(b: &mut Builder<F>, g: &OpenGraph<F>) -> Result<(), ExtractError> {
    for (u, v, w) in g.edges() {
        if g.is_input(u) && g.is_input(v) {
            b.cz(u, v, w)?;
        }
    }
    Ok(())
}

/// Circuit of a pattern with causal flow: one `J` per measured vertex along
/// `v → f(v)`, entanglers placed as soon as both ends exist. One section per
/// causal layer, deepest first.
pub fn spt<F: Field>(
    g: &OpenGraph<F>,
    cf: &CausalFlow,
    angles: &[[F::Elem; 3]],
) -> Result<Circuit<F>, ExtractError> {
    check_shape(g, angles)?;
    if !cf.is_valid_for(g) {
        return Err(ExtractError::InvalidCausalFlow);
    }
    let mut b = Builder::new(g);
    base_entanglers(&mut b, g)?;
    let depth = cf.layers().len();
    for k in (1..=depth).rev() {
        for &v in &cf.layers()[k - 1] {
            let to = cf.successor(v).expect("measured vertices have a successor");
            b.teleport(v, to, g.weight(v, to), angles[v], |x| g.weight(to, x))?;
        }
        b.close_section(k);
    }
    if depth == 0 {
        b.close_section(0);
    }
    let expected = g.edges().into_iter().map(|(u, v, _)| (u, v)).collect();
    b.finish(g, expected)
}

/// One peeled layer. `peeled` is expressed in the vertex numbering of the
/// stage graph; `origin[i]` is the original index of its vertex `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stage<F: Field> {
    /// Layer of the original flow that this stage removes.
    pub layer: usize,
    pub peeled: TriangularisedLayer<F>,
    pub origin: Vec<usize>,
}

/// All stages of an extraction plus the graph left at the end, which has
/// only inputs as vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Peeling<F: Field> {
    pub stages: Vec<Stage<F>>,
    pub base: OpenGraph<F>,
    pub base_origin: Vec<usize>,
}

/// Repeatedly triangularises and removes the last-measured layer.
pub fn peel_layers<F: Field>(
    g: &OpenGraph<F>,
    fr: &FlowResult<F>,
) -> Result<Peeling<F>, ExtractError> {
    fr.check(g).map_err(ExtractError::InvalidFlow)?;
    let mut stages = Vec::new();
    let mut cur = g.clone();
    let mut cur_fr = fr.clone();
    let mut origin: Vec<usize> = (0..g.len()).collect();
    let mut layer = 1;
    while cur_fr.depth() > 0 {
        let peeled = triangularise_layer(&cur, &cur_fr)?;
        let mut in_c = vec![false; cur.len()];
        for &(_, k) in &peeled.causal_map {
            in_c[k] = true;
        }
        let keep: Vec<usize> = (0..cur.len()).filter(|&v| !in_c[v]).collect();
        let peeled_layer = cur_fr.layer_vertices(1).expect("depth is positive");
        let outputs: Vec<usize> = keep
            .iter()
            .copied()
            .filter(|&v| cur.is_output(v) || peeled_layer.contains(&v))
            .collect();
        let next = peeled.graph.induced(&keep, &cur.inputs(), &outputs)?;
        let mut pos = vec![usize::MAX; cur.len()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let layers = (2..=cur_fr.depth())
            .map(|k| {
                cur_fr
                    .layer_vertices(k)
                    .expect("layer exists")
                    .iter()
                    .map(|&v| pos[v])
                    .collect()
            })
            .collect();
        let next_fr = flow_from_layers(&next, layers)
            .map_err(|e| ExtractError::Internal(format!("reduced graph lost its flow: {e}")))?;
        stages.push(Stage {
            layer,
            peeled,
            origin: origin.clone(),
        });
        origin = keep.iter().map(|&v| origin[v]).collect();
        cur = next;
        cur_fr = next_fr;
        layer += 1;
    }
    Ok(Peeling {
        stages,
        base: cur,
        base_origin: origin,
    })
}

/// Extracts a circuit from `g` with flow `fr`. `angles[v]` are the
/// coefficients of `U_v = exp(2πi(a q + b q² + c q³)/d)` (or their
/// continuous-variable counterparts) applied before measuring `v`.
///
/// Time order: entanglers among the inputs, then for each layer from the
/// first-measured to the last its teleportations with their entanglers
/// followed by the gates undoing its column operations.
pub fn extract_circuit<F: Field>(
    g: &OpenGraph<F>,
    fr: &FlowResult<F>,
    angles: &[[F::Elem; 3]],
) -> Result<Circuit<F>, ExtractError> {
    check_shape(g, angles)?;
    let Peeling {
        stages,
        base,
        base_origin,
    } = peel_layers(g, fr)?;
    let mut b = Builder::new(g);
    let mut expected = BTreeSet::new();
    for (u, v, w) in base.edges() {
        let (a, c) = (base_origin[u], base_origin[v]);
        expected.insert((a.min(c), a.max(c)));
        b.cz(a, c, w)?;
    }
    for stage in stages.iter().rev() {
        let sg = &stage.peeled.graph;
        let o = &stage.origin;
        let mut in_c = vec![false; sg.len()];
        for &(_, k) in &stage.peeled.causal_map {
            in_c[k] = true;
        }
        for (u, v, _) in sg.edges() {
            if in_c[u] || in_c[v] {
                expected.insert((o[u].min(o[v]), o[u].max(o[v])));
            }
        }
        let mut inverse = vec![usize::MAX; g.len()];
        for (i, &v) in o.iter().enumerate() {
            inverse[v] = i;
        }
        for &(v, k) in &stage.peeled.causal_map {
            b.teleport(
                o[v],
                o[k],
                sg.weight(v, k),
                angles[o[v]],
                |x| match inverse[x] {
                    usize::MAX => sg.field().zero(),
                    i => sg.weight(k, i),
                },
            )?;
        }
        for gate in &stage.peeled.side_gates {
            b.gates.push(match *gate {
                SideGate::CX {
                    control,
                    target,
                    weight,
                } => Gate::CX {
                    control: b.wire_of(o[control])?,
                    target: b.wire_of(o[target])?,
                    weight,
                },
                SideGate::Phase { vertex, weight } => Gate::Phase {
                    wire: b.wire_of(o[vertex])?,
                    weight,
                },
            });
        }
        b.close_section(stage.layer);
    }
    if stages.is_empty() {
        b.close_section(0);
    }
    b.finish(g, expected)
}

/// Path cover induced by the extraction: the wire paths of
/// [`extract_circuit`].
pub fn build_path_cover<F: Field>(
    g: &OpenGraph<F>,
    fr: &FlowResult<F>,
) -> Result<PathCover, ExtractError> {
    let zero = g.field().zero();
    let angles = vec![[zero; 3]; g.len()];
    let c = extract_circuit(g, fr, &angles)?;
    Ok(PathCover { paths: c.paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_linalg::{PrimeField, Reals};
    use crate::fixtures;
    use crate::flow::{find_causal_flow, find_flow};

    fn zeros<F: Field>(g: &OpenGraph<F>) -> Vec<[F::Elem; 3]> {
        vec![[g.field().zero(); 3]; g.len()]
    }

    #[test]
    fn line_is_one_wire_of_teleportations() {
        let g = fixtures::line(Reals::default(), 3).unwrap();
        let fr = find_flow(&g).unwrap();
        let c = extract_circuit(&g, &fr, &zeros(&g)).unwrap();
        assert_eq!(c.wires(), 1);
        assert_eq!(c.count("J"), 2);
        assert_eq!(c.gates.len(), 2);
        assert_eq!(c.paths, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn adder_is_a_staircase() {
        let f = PrimeField::new(5).unwrap();
        let g = fixtures::adder(f, 4).unwrap();
        let fr = find_flow(&g).unwrap();
        let c = extract_circuit(&g, &fr, &zeros(&g)).unwrap();
        assert_eq!(c.wires(), 4);
        assert_eq!(c.sections.len(), 1);
        let names: Vec<&str> = c.gates.iter().map(Gate::name).collect();
        assert_eq!(names, ["J", "CZ", "J", "CZ", "J", "CZ", "J"]);
        for (i, g) in c.gates.iter().enumerate().filter(|(i, _)| i % 2 == 1) {
            assert_eq!(
                *g,
                Gate::CZ {
                    a: i / 2,
                    b: i / 2 + 1,
                    weight: 4
                }
            );
        }
    }

    #[test]
    fn hexagon_needs_column_operations() {
        let g = fixtures::hexagon(Reals::default()).unwrap();
        let fr = find_flow(&g).unwrap();
        let c = extract_circuit(&g, &fr, &zeros(&g)).unwrap();
        assert_eq!(c.sections.len(), 1);
        assert!(c.count("CX") >= 1);
        let cover = build_path_cover(&g, &fr).unwrap();
        assert!(cover.covers(&g));
    }

    #[test]
    fn two_layers_give_two_sections_and_a_cover() {
        let g = fixtures::two_layer(Reals::default()).unwrap();
        let fr = find_flow(&g).unwrap();
        assert_eq!(fr.depth(), 2);
        let c = extract_circuit(&g, &fr, &zeros(&g)).unwrap();
        assert_eq!(
            c.sections.iter().map(|s| s.layer).collect::<Vec<_>>(),
            vec![2, 1]
        );
        assert!(build_path_cover(&g, &fr).unwrap().covers(&g));
    }

    #[test]
    fn io_mismatch_is_refused() {
        let g = fixtures::lone_output(Reals::default()).unwrap();
        let fr = find_flow(&g).unwrap();
        assert_eq!(
            extract_circuit(&g, &fr, &zeros(&g)),
            Err(ExtractError::IoMismatch {
                inputs: 0,
                outputs: 1
            })
        );
        assert!(matches!(
            extract_circuit(&g, &fr, &[]),
            Err(ExtractError::IoMismatch { .. })
        ));
    }

    #[test]
    fn invalid_inputs_are_refused() {
        let g = fixtures::line(Reals::default(), 3).unwrap();
        let fr = find_flow(&g).unwrap();
        assert!(matches!(
            extract_circuit(&g, &fr, &[]),
            Err(ExtractError::AngleCount {
                expected: 3,
                found: 0
            })
        ));
        let broken = fr.clone().with_correction(0, vec![(2, 1.0)]);
        assert!(matches!(
            extract_circuit(&g, &broken, &zeros(&g)),
            Err(ExtractError::InvalidFlow(_))
        ));
    }

    #[test]
    fn spt_matches_extraction_on_causal_graphs() {
        let f = PrimeField::new(3).unwrap();
        let g = fixtures::two_wire(f).unwrap();
        let cf = find_causal_flow(&g).unwrap();
        let c = spt(&g, &cf, &zeros(&g)).unwrap();
        assert_eq!(c.count("J"), 4);
        assert_eq!(c.count("CZ"), 2);
        assert!(c.validate().is_ok());
        let other = extract_circuit(&g, &cf.to_flow_result(&g), &zeros(&g)).unwrap();
        assert_eq!(c.paths, other.paths);
        assert_eq!(c.gates.len(), other.gates.len());
        let hex = fixtures::hexagon(Reals::default()).unwrap();
        let line = fixtures::line(Reals::default(), 3).unwrap();
        let lcf = find_causal_flow(&line).unwrap();
        assert_eq!(
            spt(&hex, &lcf, &zeros(&hex)),
            Err(ExtractError::InvalidCausalFlow)
        );
    }

    #[test]
    fn ascii_rendering_has_one_row_per_wire() {
        let f = PrimeField::new(5).unwrap();
        let g = fixtures::adder(f, 3).unwrap();
        let fr = find_flow(&g).unwrap();
        let c = extract_circuit(&g, &fr, &zeros(&g)).unwrap();
        let text = c.render_ascii(|w| w.to_string());
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().next().unwrap().starts_with("i1 "));
        assert!(text.lines().next().unwrap().ends_with(" o1"));
    }
}
