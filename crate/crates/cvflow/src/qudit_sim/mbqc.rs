use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::field_linalg::{Field, PrimeField};
use crate::flow::{simultaneous_correction, Axis, FlowResult};
use crate::open_graph::OpenGraph;

use super::{apply, GateOp, QuditState, SimError};

/// Largest branch count enumerated exhaustively.
pub const EXHAUSTIVE_BUDGET: f64 = 2e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchPolicy {
    /// Every outcome tuple, in lexicographic order of the measurement
    /// sequence.
    Exhaustive,
    /// `count` runs drawing outcomes from their Born probabilities.
    Sampled { count: usize, seed: u64 },
}

/// One run of the pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchRecord {
    /// `(vertex, outcome)` in measurement order.
    pub outcomes: Vec<(usize, u64)>,
    pub probability: f64,
    /// Normalised state of the outputs in ascending vertex order; the zero
    /// vector on a zero-probability branch.
    pub state: QuditState,
}

/// Number of branches of an exhaustive run, `d^{|O^c|}`, as a float.
pub fn branch_count(g: &OpenGraph<PrimeField>) -> f64 {
    (g.field().modulus() as f64).powi(g.measured().len() as i32)
}

/// Pattern state with qudits allocated on first use.
#[derive(Clone)]
struct Lazy {
    state: QuditState,
    /// `slot[v]`: position of vertex `v`, if allocated and not yet measured.
    slot: Vec<Option<usize>>,
    allocated: Vec<bool>,
    entangled: Vec<Vec<bool>>,
}

impl Lazy {
    fn new(g: &OpenGraph<PrimeField>, input: &QuditState) -> Self {
        let n = g.len();
        let mut slot = vec![None; n];
        let mut allocated = vec![false; n];
        for (q, v) in g.inputs().into_iter().enumerate() {
            slot[v] = Some(q);
            allocated[v] = true;
        }
        Self {
            state: input.clone(),
            slot,
            allocated,
            entangled: vec![vec![false; n]; n],
        }
    }

    fn allocate(&mut self, v: usize) -> Result<(), SimError> {
        if self.allocated[v] {
            return Ok(());
        }
        let d = self.state.dim();
        let mut plus = QuditState::basis(d, &[0])?;
        apply(&mut plus, &GateOp::H { q: 0 })?;
        self.slot[v] = Some(self.state.qudits());
        self.state = self.state.tensor(&plus)?;
        self.allocated[v] = true;
        Ok(())
    }

    fn pos(&self, v: usize) -> usize {
        self.slot[v].expect("vertex is live")
    }

    /// Allocates `v` and its neighbours and applies every edge at `v`.
    fn entangle(&mut self, g: &OpenGraph<PrimeField>, v: usize) -> Result<(), SimError> {
        self.allocate(v)?;
        for u in 0..g.len() {
            if u != v && g.is_adjacent(u, v) && !self.entangled[u][v] {
                self.allocate(u)?;
                let (a, b) = (self.pos(u), self.pos(v));
                apply(
                    &mut self.state,
                    &GateOp::CZ {
                        a,
                        b,
                        w: g.weight(u, v),
                    },
                )?;
                self.entangled[u][v] = true;
                self.entangled[v][u] = true;
            }
        }
        Ok(())
    }

    fn measure_prepare(
        &mut self,
        g: &OpenGraph<PrimeField>,
        v: usize,
        angles: [u64; 3],
    ) -> Result<(), SimError> {
        self.entangle(g, v)?;
        let q = self.pos(v);
        let [a, b, c] = angles;
        apply(&mut self.state, &GateOp::DiagPoly { q, a, b, c })?;
        apply(&mut self.state, &GateOp::H { q })
    }

    fn project(&self, v: usize, outcome: u64) -> Self {
        let q = self.pos(v);
        let mut next = Self {
            state: self.state.project(q, outcome),
            slot: self.slot.clone(),
            allocated: self.allocated.clone(),
            entangled: self.entangled.clone(),
        };
        next.slot[v] = None;
        for s in next.slot.iter_mut().flatten() {
            if *s > q {
                *s -= 1;
            }
        }
        next
    }

    /// Reduced output state in ascending vertex order.
    fn finish(mut self, g: &OpenGraph<PrimeField>) -> Result<(f64, QuditState), SimError> {
        for v in g.outputs() {
            self.entangle(g, v)?;
        }
        let order: Vec<usize> = g.outputs().iter().map(|&v| self.pos(v)).collect();
        let mut s = self.state.permute(&order)?;
        let p = s.norm_sqr();
        s.normalize();
        Ok((p, s))
    }
}

struct Runner<'a> {
    g: &'a OpenGraph<PrimeField>,
    fr: &'a FlowResult<PrimeField>,
    angles: &'a [[u64; 3]],
    /// `(layer, vertex)` in measurement order.
    sequence: Vec<(usize, usize)>,
}

impl Runner<'_> {
    fn correct(
        &self,
        lazy: &mut Lazy,
        k: usize,
        outcomes: &[(usize, u64)],
    ) -> Result<(), SimError> {
        let f = self.g.field();
        let layer = self.fr.layer_vertices(k).expect("layer exists");
        let m: Vec<u64> = layer
            .iter()
            .map(|v| {
                let out = outcomes
                    .iter()
                    .find(|(u, _)| u == v)
                    .expect("layer is measured")
                    .1;
                f.neg(out)
            })
            .collect();
        let op =
            simultaneous_correction(self.g, self.fr, k, &m).expect("layer outcomes are aligned");
        for t in &op.terms {
            lazy.entangle(self.g, t.vertex)?;
            let q = lazy.pos(t.vertex);
            let gate = match t.axis {
                Axis::X => GateOp::X { q, a: t.amount },
                Axis::Z => GateOp::Z { q, a: t.amount },
            };
            apply(&mut lazy.state, &gate)?;
        }
        Ok(())
    }

    /// Applies the layer correction if position `i - 1` closed its layer.
    fn after_measure(
        &self,
        lazy: &Lazy,
        i: usize,
        outcomes: &[(usize, u64)],
    ) -> Result<Lazy, SimError> {
        let mut next = lazy.clone();
        let (k, _) = self.sequence[i - 1];
        if self.sequence.get(i).map_or(true, |&(k2, _)| k2 != k) {
            self.correct(&mut next, k, outcomes)?;
        }
        Ok(next)
    }

    fn descend(
        &self,
        lazy: Lazy,
        i: usize,
        outcomes: Vec<(usize, u64)>,
        parallel: bool,
    ) -> Result<Vec<BranchRecord>, SimError> {
        if i == self.sequence.len() {
            let (probability, state) = lazy.finish(self.g)?;
            return Ok(vec![BranchRecord {
                outcomes,
                probability,
                state,
            }]);
        }
        let (_, v) = self.sequence[i];
        let mut prepared = lazy;
        prepared.measure_prepare(self.g, v, self.angles[v])?;
        let d = self.g.field().modulus();
        let branch = |out: u64| -> Result<Vec<BranchRecord>, SimError> {
            let mut o = outcomes.clone();
            o.push((v, out));
            let next = self.after_measure(&prepared.project(v, out), i + 1, &o)?;
            self.descend(next, i + 1, o, false)
        };
        let parts: Vec<Result<Vec<BranchRecord>, SimError>> = if parallel {
            (0..d).into_par_iter().map(branch).collect()
        } else {
            (0..d).map(branch).collect()
        };
        let mut all = Vec::new();
        for p in parts {
            all.extend(p?);
        }
        Ok(all)
    }

    fn sample(&self, input: &Lazy, rng: &mut ChaCha8Rng) -> Result<BranchRecord, SimError> {
        let mut lazy = input.clone();
        let mut outcomes = Vec::with_capacity(self.sequence.len());
        let d = self.g.field().modulus();
        for i in 0..self.sequence.len() {
            let (_, v) = self.sequence[i];
            lazy.measure_prepare(self.g, v, self.angles[v])?;
            let branches: Vec<Lazy> = (0..d).map(|out| lazy.project(v, out)).collect();
            let weights: Vec<f64> = branches.iter().map(|b| b.state.norm_sqr()).collect();
            let total: f64 = weights.iter().sum();
            let mut r = rng.gen_range(0.0..1.0) * total;
            let mut pick = weights.iter().rposition(|&w| w > 0.0).unwrap_or(0);
            for (j, &w) in weights.iter().enumerate() {
                if w > 0.0 && r < w {
                    pick = j;
                    break;
                }
                r -= w;
            }
            outcomes.push((v, pick as u64));
            lazy = self.after_measure(&branches[pick], i + 1, &outcomes)?;
        }
        let (probability, state) = lazy.finish(self.g)?;
        Ok(BranchRecord {
            outcomes,
            probability,
            state,
        })
    }
}

/// Runs the pattern of `g` with flow `fr` on `input`.
///
/// Layers are measured from `L_N` down to `L_1`, ascending inside a layer.
/// Measuring `v` applies `DiagPoly(angles[v])`, then `H`, then projects onto
/// an outcome `o`; the error value is `m = −o`. After each layer the
/// simultaneous correction for its error values is applied as `X`/`Z`
/// powers. Qudits are allocated and entangled on first use, which gives the
/// same branch states as preparing the full graph state up front.
pub fn run_mbqc(
    g: &OpenGraph<PrimeField>,
    fr: &FlowResult<PrimeField>,
    angles: &[[u64; 3]],
    input: &QuditState,
    policy: BranchPolicy,
) -> Result<Vec<BranchRecord>, SimError> {
    let d = g.field().modulus();
    if input.dim() != d {
        return Err(SimError::FieldMismatch {
            graph: d,
            state: input.dim(),
        });
    }
    if input.qudits() != g.inputs().len() {
        return Err(SimError::InputCount {
            expected: g.inputs().len(),
            found: input.qudits(),
        });
    }
    if angles.len() != g.len() {
        return Err(SimError::ShapeMismatch {
            expected: g.len(),
            found: angles.len(),
        });
    }
    fr.check(g)
        .map_err(|e| SimError::InvalidFlow(e.to_string()))?;
    run_mbqc_unchecked(g, fr, angles, input, policy)
}

/// [`run_mbqc`] without the flow check, for negative controls. Shapes are
/// still checked; a wrong correction vector shows up in the branch states.
pub fn run_mbqc_unchecked(
    g: &OpenGraph<PrimeField>,
    fr: &FlowResult<PrimeField>,
    angles: &[[u64; 3]],
    input: &QuditState,
    policy: BranchPolicy,
) -> Result<Vec<BranchRecord>, SimError> {
    if input.dim() != g.field().modulus()
        || input.qudits() != g.inputs().len()
        || angles.len() != g.len()
    {
        return run_mbqc(g, fr, angles, input, policy);
    }
    if fr.layer_map().len() != g.len() {
        return Err(SimError::InvalidFlow(
            "layer map does not match the graph".into(),
        ));
    }
    let sequence = (1..=fr.depth())
        .rev()
        .flat_map(|k| {
            fr.layer_vertices(k)
                .expect("layer exists")
                .iter()
                .map(move |&v| (k, v))
        })
        .collect();
    let runner = Runner {
        g,
        fr,
        angles,
        sequence,
    };
    let start = Lazy::new(g, input);
    match policy {
        BranchPolicy::Exhaustive => {
            let count = branch_count(g);
            if count > EXHAUSTIVE_BUDGET {
                return Err(SimError::BranchBudget { branches: count });
            }
            runner.descend(start, 0, Vec::new(), true)
        }
        BranchPolicy::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| runner.sample(&start, &mut rng))
                .collect()
        }
    }
}
