//! JSON documents for networks, ultrametrics and persistence diagrams.
//!
//! Network documents look like
//! `{"nodes": ["a","b"], "weights": [[0,1],[2,0]], "measure": [0.5,0.5], "components": [["a"],["b"]]}`
//! with `measure` and `components` optional. Floats are written in shortest
//! round-trip decimal form.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::clustering::Ultrametric;
use crate::error::{Error, Result};
use crate::network::{FiniteNetwork, MeasuredNetwork};
use crate::persistence::Diagram;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub nodes: Vec<String>,
    pub weights: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Vec<String>>>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
}

impl NetworkDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(parse_error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("network documents always serialize")
    }

    pub fn from_network(net: &FiniteNetwork) -> Self {
        Self {
            nodes: net.nodes().to_vec(),
            weights: net.rows(),
            measure: None,
            components: None,
        }
    }

    pub fn from_measured(m: &MeasuredNetwork) -> Self {
        let net = m.network();
        Self {
            measure: Some(m.measure().to_vec()),
            components: m.components().map(|blocks| {
                blocks
                    .iter()
                    .map(|b| b.iter().map(|&i| net.nodes()[i].clone()).collect())
                    .collect()
            }),
            ..Self::from_network(net)
        }
    }

    pub fn network(&self) -> Result<FiniteNetwork> {
        FiniteNetwork::new(self.nodes.clone(), self.weights.clone())
    }

    /// The measured network; the measure defaults to uniform.
    pub fn measured(&self) -> Result<MeasuredNetwork> {
        let net = self.network()?;
        let n = net.len();
        let measure = self
            .measure
            .clone()
            .unwrap_or_else(|| vec![1.0 / n as f64; n]);
        let components = self
            .components
            .as_ref()
            .map(|blocks| {
                blocks
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(|id| {
                                net.index_of(id).ok_or_else(|| {
                                    Error::InvalidComponents(format!("unknown node id {id:?}"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        MeasuredNetwork::new(net, measure, components)
    }
}

pub fn network_to_json(net: &FiniteNetwork) -> String {
    NetworkDocument::from_network(net).to_json()
}

pub fn network_from_json(text: &str) -> Result<FiniteNetwork> {
    NetworkDocument::from_json(text)?.network()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UltrametricDocument {
    pub nodes: Vec<String>,
    pub u: Vec<Vec<f64>>,
}

impl From<&Ultrametric> for UltrametricDocument {
    fn from(u: &Ultrametric) -> Self {
        Self {
            nodes: u.nodes().to_vec(),
            u: u.matrix().to_vec(),
        }
    }
}

/// `{"dim": k, "pairs": [[b, d] | [b, "inf"], ...]}`
pub fn diagram_to_value(d: &Diagram) -> Value {
    let pairs: Vec<Value> = d
        .pairs()
        .iter()
        .map(|&(b, death)| {
            if death.is_finite() {
                json!([b, death])
            } else {
                json!([b, "inf"])
            }
        })
        .collect();
    json!({ "dim": d.dim(), "pairs": pairs })
}

pub fn diagram_from_value(v: &Value) -> Result<Diagram> {
    let bad = |what: &str| Error::Parse(format!("diagram: {what}"));
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing integer field \"dim\""))? as usize;
    let pairs = v
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing array field \"pairs\""))?;
    let mut out = Vec::with_capacity(pairs.len());
    for (k, p) in pairs.iter().enumerate() {
        let pair = p
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| bad(&format!("pairs[{k}] is not a two-element array")))?;
        let birth = pair[0]
            .as_f64()
            .ok_or_else(|| bad(&format!("pairs[{k}][0] is not a number")))?;
        let death = match &pair[1] {
            Value::String(s) if s == "inf" => f64::INFINITY,
            other => other
                .as_f64()
                .ok_or_else(|| bad(&format!("pairs[{k}][1] is neither a number nor \"inf\"")))?,
        };
        if death < birth {
            return Err(bad(&format!("pairs[{k}] dies before it is born")));
        }
        out.push((birth, death));
    }
    Ok(Diagram::new(dim, out))
}

pub fn diagram_from_json(text: &str) -> Result<Diagram> {
    let v: Value = serde_json::from_str(text).map_err(parse_error)?;
    diagram_from_value(&v)
}
