//! JSON interchange format.
//!
//! ```json
//! {"wires_in": 1, "wires_out": 1, "scalar": [1.0, 0.0],
//!  "nodes": [{"id": 0, "kind": "B"}, {"id": 1, "kind": "Z", "phase": "pi/4"},
//!            {"id": 2, "kind": "B"}],
//!  "edges": [[0, 1, 1], [1, 2, 1]]}
//! ```
//!
//! Phases are written as exact strings (`"pi/4"`) when known, otherwise as
//! `[re, im]`. H-box labels are `[re, im]`, with an optional exact
//! `"exponent"`. `inputs`/`outputs` list boundary ids in wire order; when
//! absent the first `wires_in` boundaries (by id) are the inputs.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Diagram, DiagramError, HLabel, NodeId, NodeKind};
use crate::phase::Phase;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonNode {
    pub id: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<String>,
}

pub type JsonEdge = (usize, usize, usize);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DiagramJson {
    pub wires_in: usize,
    pub wires_out: usize,
    pub scalar: [f64; 2],
    pub nodes: Vec<JsonNode>,
    pub edges: Vec<JsonEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<usize>>,
}

fn phase_to_json(p: &Phase) -> Value {
    match p.exact() {
        Some(_) => Value::String(p.to_string()),
        None => serde_json::json!([p.value().re, p.value().im]),
    }
}

fn phase_from_json(v: &Value) -> Result<Phase, DiagramError> {
    let bad = || DiagramError::Json(format!("bad phase {v}"));
    match v {
        Value::String(s) => s.parse().map_err(|_| bad()),
        Value::Number(n) => Ok(Phase::radians(n.as_f64().ok_or_else(bad)?)),
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or_else(bad)?;
            let im = a[1].as_f64().ok_or_else(bad)?;
            Ok(Phase::complex(C64::new(re, im)))
        }
        _ => Err(bad()),
    }
}

impl Diagram {
    /// Serializable form with nodes renumbered densely.
    pub fn to_json(&self) -> DiagramJson {
        let d = self.compacted();
        let nodes = d
            .nodes()
            .map(|(id, k)| {
                let mut n = JsonNode { id, kind: String::new(), phase: None, label: None, exponent: None };
                match k {
                    NodeKind::Z(p) => {
                        n.kind = "Z".into();
                        n.phase = Some(phase_to_json(p));
                    }
                    NodeKind::X(p) => {
                        n.kind = "X".into();
                        n.phase = Some(phase_to_json(p));
                    }
                    NodeKind::H(l) => {
                        n.kind = "H".into();
                        n.label = Some([l.value().re, l.value().im]);
                        n.exponent = l.exponent().filter(|e| e.exact().is_some()).map(|e| e.to_string());
                    }
                    NodeKind::Boundary => n.kind = "B".into(),
                }
                n
            })
            .collect();
        DiagramJson {
            wires_in: d.num_inputs(),
            wires_out: d.num_outputs(),
            scalar: [d.scalar().re, d.scalar().im],
            nodes,
            edges: d.edges(),
            inputs: Some(d.inputs().to_vec()),
            outputs: Some(d.outputs().to_vec()),
        }
    }

    pub fn from_json(j: &DiagramJson) -> Result<Diagram, DiagramError> {
        let mut d = Diagram::new();
        let mut map: BTreeMap<usize, NodeId> = BTreeMap::new();
        let mut boundaries = Vec::new();
        for n in &j.nodes {
            let kind = match n.kind.as_str() {
                "Z" | "X" => {
                    let p = match &n.phase {
                        Some(v) => phase_from_json(v)?,
                        None => Phase::zero(),
                    };
                    if n.kind == "Z" {
                        NodeKind::Z(p)
                    } else {
                        NodeKind::X(p)
                    }
                }
                "H" => {
                    let label = match (&n.exponent, n.label) {
                        (Some(e), _) => HLabel::exp(
                            e.parse().map_err(|_| DiagramError::Json(format!("bad exponent {e}")))?,
                        ),
                        (None, Some([re, im])) => HLabel::new(C64::new(re, im)),
                        (None, None) => HLabel::default(),
                    };
                    NodeKind::H(label)
                }
                "B" => NodeKind::Boundary,
                other => return Err(DiagramError::Json(format!("unknown node kind '{other}'"))),
            };
            if map.contains_key(&n.id) {
                return Err(DiagramError::Json(format!("duplicate node id {}", n.id)));
            }
            let id = d.add_node(kind);
            if kind.is_boundary() {
                boundaries.push(n.id);
            }
            map.insert(n.id, id);
        }
        let lookup = |id: usize| map.get(&id).copied().ok_or(DiagramError::Json(format!("edge to unknown node {id}")));
        for &(a, b, k) in &j.edges {
            d.add_edges(lookup(a)?, lookup(b)?, k);
        }
        let (ins, outs) = match (&j.inputs, &j.outputs) {
            (Some(i), Some(o)) => (i.clone(), o.clone()),
            _ => {
                boundaries.sort_unstable();
                if boundaries.len() < j.wires_in {
                    return Err(DiagramError::Json("fewer boundaries than wires_in".into()));
                }
                let outs = boundaries.split_off(j.wires_in);
                (boundaries, outs)
            }
        };
        if ins.len() != j.wires_in || outs.len() != j.wires_out {
            return Err(DiagramError::Json("boundary counts disagree with wires_in/wires_out".into()));
        }
        let ins = ins.into_iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
        let outs = outs.into_iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
        d.set_boundaries(ins, outs);
        d.set_scalar(C64::new(j.scalar[0], j.scalar[1]));
        d.validate()?;
        Ok(d)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("diagram JSON serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Diagram, DiagramError> {
        let j: DiagramJson = serde_json::from_str(s).map_err(|e| DiagramError::Json(e.to_string()))?;
        Diagram::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_stable() {
        let d = Diagram::controlled_phase(Phase::pi_frac(1, 4), &[0, 2], 3).unwrap();
        let s = d.to_json_string();
        let back = Diagram::from_json_str(&s).unwrap();
        assert_eq!(back.to_json_string(), s);
    }

    #[test]
    fn json_without_boundary_lists() {
        let s = r#"{"wires_in":1,"wires_out":1,"scalar":[1,0],
            "nodes":[{"id":0,"kind":"B"},{"id":1,"kind":"Z","phase":"pi/2"},{"id":2,"kind":"B"}],
            "edges":[[0,1,1],[1,2,1]]}"#;
        let d = Diagram::from_json_str(s).unwrap();
        assert_eq!(d.num_inputs(), 1);
        assert_eq!(d.kind(1), Some(&NodeKind::Z(Phase::pi_frac(1, 2))));
    }

    #[test]
    fn json_rejects_unknown_kind() {
        let s = r#"{"wires_in":0,"wires_out":0,"scalar":[1,0],"nodes":[{"id":0,"kind":"Q"}],"edges":[]}"#;
        assert!(Diagram::from_json_str(s).is_err());
    }
}
