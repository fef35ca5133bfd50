use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::field_linalg::{Field, PrimeField, Reals};

use super::{GraphError, OpenGraph};

pub const DEFAULT_EPS: f64 = 1e-9;

fn default_eps() -> f64 {
    DEFAULT_EPS
}

/// Field declaration of a graph document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Real {
        #[serde(default = "default_eps")]
        eps: f64,
    },
    Mod {
        d: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub u: String,
    pub v: String,
    pub w: Value,
}

/// On-disk JSON form of an open graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub field: FieldSpec,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeDocument>,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
}

/// Conversion between field elements and JSON numbers.
pub trait WeightCodec: Field {
    fn encode(&self, e: Self::Elem) -> Value;
    fn decode(&self, v: &Value) -> Result<Self::Elem, String>;
    fn spec(&self) -> FieldSpec;
}

impl WeightCodec for Reals<f64> {
    fn encode(&self, e: f64) -> Value {
        serde_json::Number::from_f64(e).map_or(Value::Null, Value::Number)
    }

    fn decode(&self, v: &Value) -> Result<f64, String> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Ok(x),
            _ => Err(format!("expected a finite number, got {v}")),
        }
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Real { eps: self.eps() }
    }
}

impl WeightCodec for PrimeField {
    fn encode(&self, e: u64) -> Value {
        Value::from(e)
    }

    fn decode(&self, v: &Value) -> Result<u64, String> {
        if let Some(i) = v.as_i64() {
            return Ok(self.residue(i));
        }
        if let Some(u) = v.as_u64() {
            return Ok(u % self.modulus());
        }
        match v.as_f64() {
            Some(x) if x.fract() == 0.0 && x.abs() < 9.0e15 => Ok(self.residue(x as i64)),
            _ => Err(format!("expected an integer residue, got {v}")),
        }
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Mod { d: self.modulus() }
    }
}

impl FieldSpec {
    pub fn real_field(&self) -> Result<Reals<f64>, GraphError> {
        match *self {
            FieldSpec::Real { eps } => {
                Reals::new(eps).map_err(|_| GraphError::InvalidTolerance(eps))
            }
            FieldSpec::Mod { .. } => Err(GraphError::FieldMismatch),
        }
    }

    pub fn prime_field(&self) -> Result<PrimeField, GraphError> {
        match *self {
            FieldSpec::Mod { d } => PrimeField::new(d).map_err(|_| GraphError::NotPrime(d)),
            FieldSpec::Real { .. } => Err(GraphError::FieldMismatch),
        }
    }
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))
    }

    /// Validates the document and builds the graph over `field`, ignoring
    /// the document's own field declaration.
    pub fn build<F: WeightCodec>(&self, field: F) -> Result<OpenGraph<F>, GraphError> {
        let labels = self.vertices.clone();
        let probe = OpenGraph::new(field.clone(), labels.clone(), &[], &[], &[])?;
        let lookup = |l: &str| probe.index_of(l);
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let (u, v) = (lookup(&e.u)?, lookup(&e.v)?);
            let w = field
                .decode(&e.w)
                .map_err(|reason| GraphError::InvalidWeight(e.u.clone(), e.v.clone(), reason))?;
            edges.push((u, v, w));
        }
        let inputs = self
            .inputs
            .iter()
            .map(|l| lookup(l))
            .collect::<Result<Vec<_>, _>>()?;
        let outputs = self
            .outputs
            .iter()
            .map(|l| lookup(l))
            .collect::<Result<Vec<_>, _>>()?;
        OpenGraph::new(field, labels, &edges, &inputs, &outputs)
    }

    pub fn from_graph<F: WeightCodec>(g: &OpenGraph<F>) -> Self {
        let name = |v: usize| g.label(v).to_string();
        Self {
            field: g.field().spec(),
            vertices: g.labels().to_vec(),
            edges: g
                .edges()
                .into_iter()
                .map(|(u, v, w)| EdgeDocument {
                    u: name(u),
                    v: name(v),
                    w: g.field().encode(w),
                })
                .collect(),
            inputs: g.inputs().into_iter().map(name).collect(),
            outputs: g.outputs().into_iter().map(name).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph documents always serialise")
    }
}

/// A graph over whichever field its document declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyGraph {
    Real(OpenGraph<Reals<f64>>),
    Mod(OpenGraph<PrimeField>),
}

impl AnyGraph {
    pub fn from_document(
        doc: &GraphDocument,
        field: Option<&FieldSpec>,
    ) -> Result<Self, GraphError> {
        let spec = field.unwrap_or(&doc.field);
        match spec {
            FieldSpec::Real { .. } => Ok(AnyGraph::Real(doc.build(spec.real_field()?)?)),
            FieldSpec::Mod { .. } => Ok(AnyGraph::Mod(doc.build(spec.prime_field()?)?)),
        }
    }

    pub fn document(&self) -> GraphDocument {
        match self {
            AnyGraph::Real(g) => GraphDocument::from_graph(g),
            AnyGraph::Mod(g) => GraphDocument::from_graph(g),
        }
    }
}

/// Parses and validates a graph document.
pub fn load_graph(text: &str) -> Result<AnyGraph, GraphError> {
    AnyGraph::from_document(&GraphDocument::parse(text)?, None)
}

pub fn serialize_graph<F: WeightCodec>(g: &OpenGraph<F>) -> String {
    GraphDocument::from_graph(g).to_json()
}
