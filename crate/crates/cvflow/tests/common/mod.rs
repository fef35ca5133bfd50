//! Brute-force oracles shared by the integration tests and the acceptance
//! harness.
#![allow(dead_code)]

use cvflow::{Field, ModGraph, PrimeField};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every permutation of `items`.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Unweighted g-flow by exhaustion: some measurement order of `O^c` in which
/// every vertex `i` has a set `S` of non-inputs measured after it (or
/// outputs) whose odd neighbourhood meets `{measured up to i}` in `{i}`.
pub fn has_gflow(adj: &[Vec<bool>], inputs: &[bool], outputs: &[bool]) -> bool {
    let n = adj.len();
    let measured: Vec<usize> = (0..n).filter(|&v| !outputs[v]).collect();
    permutations(&measured).into_iter().any(|order| {
        (0..order.len()).all(|j| {
            let past = &order[..=j];
            let later: Vec<usize> = (0..n)
                .filter(|v| !past.contains(v) && !inputs[*v])
                .collect();
            (0u32..1 << later.len()).any(|mask| {
                let set: Vec<usize> = (0..later.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| later[b])
                    .collect();
                past.iter().all(|&u| {
                    let odd = set.iter().filter(|&&s| adj[u][s]).count() % 2 == 1;
                    odd == (u == order[j])
                })
            })
        })
    })
}

/// Flow over `ℤ_p` by exhaustion: some measurement order in which every
/// vertex `i` has a vector `c` on later non-inputs with
/// `Σ_k A[u,k] c_k = δ_{u,i}` for every `u` measured up to `i`.
pub fn has_flow_mod(g: &ModGraph) -> bool {
    let f = g.field();
    let p = f.modulus();
    let n = g.len();
    let measured: Vec<usize> = (0..n).filter(|&v| !g.is_output(v)).collect();
    permutations(&measured).into_iter().any(|order| {
        (0..order.len()).all(|j| {
            let past = &order[..=j];
            let later: Vec<usize> = (0..n)
                .filter(|v| !past.contains(v) && !g.is_input(*v))
                .collect();
            let total = p.pow(later.len() as u32);
            (0..total).any(|mut code| {
                let c: Vec<u64> = (0..later.len())
                    .map(|_| {
                        let x = code % p;
                        code /= p;
                        x
                    })
                    .collect();
                past.iter().all(|&u| {
                    let s = later
                        .iter()
                        .zip(&c)
                        .fold(0, |acc, (&k, &x)| f.add(acc, f.mul(g.weight(u, k), x)));
                    s == if u == order[j] { 1 } else { 0 }
                })
            })
        })
    })
}

pub fn random_unweighted(rng: &mut ChaCha8Rng, max_n: usize) -> ModGraph {
    let n = rng.gen_range(1..=max_n);
    let f = PrimeField::new(2).unwrap();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((u, v, 1));
            }
        }
    }
    let inputs: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
    let outputs: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    cvflow::OpenGraph::new(
        f,
        (0..n).map(|i| format!("v{i}")).collect(),
        &edges,
        &inputs,
        &outputs,
    )
    .unwrap()
}

pub fn as_sets(g: &ModGraph) -> (Vec<Vec<bool>>, Vec<bool>, Vec<bool>) {
    let n = g.len();
    let adj = (0..n)
        .map(|u| (0..n).map(|v| g.is_adjacent(u, v)).collect())
        .collect();
    (
        adj,
        (0..n).map(|v| g.is_input(v)).collect(),
        (0..n).map(|v| g.is_output(v)).collect(),
    )
}
