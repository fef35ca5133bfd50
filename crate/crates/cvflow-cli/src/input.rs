use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use cvflow::open_graph::{AnyGraph, FieldSpec, GraphDocument, WeightCodec, DEFAULT_EPS};
use cvflow::qudit_sim::BranchPolicy;
use cvflow::OpenGraph;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldKind {
    Real,
    Mod,
}

/// Field requested on the command line, merged with the document's.
pub fn field_spec(
    doc: &FieldSpec,
    kind: Option<FieldKind>,
    eps: Option<f64>,
    d: Option<u64>,
) -> Result<FieldSpec> {
    let kind = kind.unwrap_or(match (doc, d, eps) {
        (_, Some(_), None) => FieldKind::Mod,
        (_, None, Some(_)) => FieldKind::Real,
        (FieldSpec::Real { .. }, ..) => FieldKind::Real,
        (FieldSpec::Mod { .. }, ..) => FieldKind::Mod,
    });
    match kind {
        FieldKind::Real => {
            let eps = eps.unwrap_or(match doc {
                FieldSpec::Real { eps } => *eps,
                FieldSpec::Mod { .. } => DEFAULT_EPS,
            });
            if !(eps > 0.0 && eps.is_finite()) {
                bail!("--eps must be a positive number, got {eps}");
            }
            Ok(FieldSpec::Real { eps })
        }
        FieldKind::Mod => {
            let d = d
                .or(match doc {
                    FieldSpec::Mod { d } => Some(*d),
                    FieldSpec::Real { .. } => None,
                })
                .ok_or_else(|| anyhow!("--field mod needs --d"))?;
            Ok(FieldSpec::Mod { d })
        }
    }
}

pub fn load_graph(
    path: &Path,
    kind: Option<FieldKind>,
    eps: Option<f64>,
    d: Option<u64>,
) -> Result<AnyGraph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = GraphDocument::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    let spec = field_spec(&doc.field, kind, eps, d)?;
    AnyGraph::from_document(&doc, Some(&spec))
        .with_context(|| format!("loading {}", path.display()))
}

/// Reads a label → triple map; vertices not named get zeros.
pub fn load_angles<F: WeightCodec>(
    path: Option<&Path>,
    g: &OpenGraph<F>,
) -> Result<Vec<[F::Elem; 3]>> {
    let f = g.field();
    let mut out = vec![[f.zero(); 3]; g.len()];
    let Some(path) = path else { return Ok(out) };
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let map: BTreeMap<String, [Value; 3]> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    for (label, triple) in map {
        let v = g
            .index_of(&label)
            .with_context(|| format!("angles for {label}"))?;
        for (slot, x) in out[v].iter_mut().zip(&triple) {
            *slot = f.decode(x).map_err(|e| anyhow!("angle of {label}: {e}"))?;
        }
    }
    Ok(out)
}

pub fn parse_policy(s: &str) -> Result<BranchPolicy, String> {
    if s == "exhaustive" {
        return Ok(BranchPolicy::Exhaustive);
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["sample", n, seed] => {
            let count = n.parse().map_err(|_| format!("bad sample count {n:?}"))?;
            let seed = seed.parse().map_err(|_| format!("bad seed {seed:?}"))?;
            if count == 0 {
                return Err("sample count must be positive".into());
            }
            Ok(BranchPolicy::Sampled { count, seed })
        }
        _ => Err(format!("expected exhaustive or sample:N:SEED, got {s:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies() {
        assert_eq!(parse_policy("exhaustive"), Ok(BranchPolicy::Exhaustive));
        assert_eq!(
            parse_policy("sample:10:3"),
            Ok(BranchPolicy::Sampled { count: 10, seed: 3 })
        );
        assert!(parse_policy("sample:0:3").is_err());
        assert!(parse_policy("sample:x").is_err());
    }

    #[test]
    fn field_overrides() {
        let real = FieldSpec::Real { eps: 1e-6 };
        assert_eq!(field_spec(&real, None, None, None).unwrap(), real);
        assert_eq!(
            field_spec(&real, None, None, Some(3)).unwrap(),
            FieldSpec::Mod { d: 3 }
        );
        assert!(field_spec(&real, Some(FieldKind::Mod), None, None).is_err());
        assert!(field_spec(&real, Some(FieldKind::Real), Some(-1.0), None).is_err());
        let m = FieldSpec::Mod { d: 5 };
        assert_eq!(
            field_spec(&m, Some(FieldKind::Real), None, None).unwrap(),
            FieldSpec::Real { eps: DEFAULT_EPS }
        );
    }
}
