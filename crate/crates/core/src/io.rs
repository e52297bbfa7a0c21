//! JSON interchange and DOT export for labeled multigraphs.
//!
//! ```json
//! {"labels": ["x1", "x2"],
//!  "vertices": [{"id": 0, "label": "x1", "tag": "X(1)"}, {"id": 1}],
//!  "edges": [[0, 1], [1, 1]]}
//! ```
//!
//! Parallel edges are repeated pairs, a loop is `[v, v]`. Output is
//! byte-stable: vertices ascend by id, edges are sorted with `a <= b`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::multigraph::{GraphError, LabeledMultigraph, VertexId, VertexSpec, VertexTag};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub labels: Vec<String>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[u32; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    pub id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
}

impl From<&LabeledMultigraph> for GraphJson {
    fn from(g: &LabeledMultigraph) -> Self {
        GraphJson {
            labels: g.labels().map(str::to_string).collect(),
            vertices: g
                .vertices()
                .map(|v| {
                    let tag = g.tag(v).filter(|t| !t.is_anonymous());
                    VertexJson {
                        id: v.0,
                        label: g.label(v).map(str::to_string),
                        tag: tag.map(|t| t.to_string()),
                    }
                })
                .collect(),
            edges: g.edges().into_iter().map(|(a, b)| [a.0, b.0]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for LabeledMultigraph {
    type Error = GraphError;

    fn try_from(doc: GraphJson) -> Result<Self, Self::Error> {
        let declared: BTreeSet<&str> = doc.labels.iter().map(String::as_str).collect();
        let mut specs = Vec::with_capacity(doc.vertices.len());
        for v in &doc.vertices {
            if let Some(l) = &v.label {
                if !declared.contains(l.as_str()) {
                    return Err(GraphError::UndeclaredLabel(VertexId(v.id)));
                }
            }
            let tag = match &v.tag {
                Some(t) => t.parse()?,
                None => VertexTag::Anonymous,
            };
            specs.push(VertexSpec {
                id: VertexId(v.id),
                label: v.label.clone(),
                tag,
            });
        }
        let g = LabeledMultigraph::from_parts(
            specs,
            doc.edges.iter().map(|[a, b]| (VertexId(*a), VertexId(*b))),
        )?;
        if let Some(unused) = doc.labels.iter().find(|l| g.vertex_by_label(l).is_none()) {
            return Err(GraphError::UnusedLabel(unused.clone()));
        }
        Ok(g)
    }
}

pub fn to_json(g: &LabeledMultigraph) -> String {
    let mut s = serde_json::to_string_pretty(&GraphJson::from(g)).expect("graph serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<LabeledMultigraph, GraphError> {
    let doc: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
    doc.try_into()
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz `graph` text. Labelled vertices show their label; tags become
/// tooltips.
pub fn to_dot(g: &LabeledMultigraph, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "graph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  node [shape=point];").unwrap();
    for v in g.vertices() {
        let mut attrs = Vec::new();
        if let Some(l) = g.label(v) {
            attrs.push(format!("shape=plaintext, label=\"{}\"", escape(l)));
        }
        if let Some(t) = g.tag(v).filter(|t| !t.is_anonymous()) {
            attrs.push(format!("tooltip=\"{}\"", escape(&t.to_string())));
        }
        if attrs.is_empty() {
            writeln!(out, "  {v};").unwrap();
        } else {
            writeln!(out, "  {v} [{}];", attrs.join(", ")).unwrap();
        }
    }
    for (a, b) in g.edges() {
        writeln!(out, "  {a} -- {b};").unwrap();
    }
    out.push_str("}\n");
    out
}
