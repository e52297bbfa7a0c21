//! Undirected multigraphs with optional unique leaf labels and provenance tags.
//!
//! Parallel edges are stored as multiplicities and a self-loop on `v` is
//! stored as `adj[v][v]`; a loop adds 2 to the degree of its vertex.
//! Graphs are immutable once built: every structural operation returns a new
//! graph, and vertex identifiers survive operations that keep the vertex.

mod bridges;
mod network;
mod paths;
mod suppress;
mod tag;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bridges::{blobs, contract_blobs, cut_edges, Component};
pub use network::{is_binary, is_network, Network, NetworkError, NetworkVerdict, NetworkViolation};
pub use paths::{all_distance_signatures, distance, distance_signature, DistanceSignature};
pub use suppress::SuppressionRecord;
pub use tag::{LexPath, Side, VertexTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex identifier {0}")]
    DuplicateVertex(VertexId),
    #[error("label {0:?} is carried by more than one vertex")]
    DuplicateLabel(String),
    #[error("edge endpoint {0} does not exist")]
    DanglingEdge(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no vertex carries label {0:?}")]
    UnknownLabel(String),
    #[error("labelled vertex {0} has degree 2 and cannot be suppressed")]
    LabeledDegreeTwo(VertexId),
    #[error("graph is not connected")]
    Disconnected,
    #[error("network characterizations disagree: blob contraction says {contraction}, cut-edge partitions say {cut_edges}")]
    CharacterizationMismatch { contraction: bool, cut_edges: bool },
    #[error("malformed vertex tag {0:?}")]
    BadTag(String),
    #[error("vertex {0} carries a label missing from the label list")]
    UndeclaredLabel(VertexId),
    #[error("declared label {0:?} is not carried by any vertex")]
    UnusedLabel(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Node {
    label: Option<String>,
    tag: VertexTag,
    adj: BTreeMap<VertexId, u32>,
}

/// Input record for [`LabeledMultigraph::from_parts`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSpec {
    pub id: VertexId,
    pub label: Option<String>,
    pub tag: VertexTag,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledMultigraph {
    nodes: BTreeMap<VertexId, Node>,
    label_index: BTreeMap<String, VertexId>,
}

impl LabeledMultigraph {
    /// Builds a graph with exactly the given vertices and edges. Each edge
    /// pair adds one edge; repeat a pair for parallel edges, use `(v, v)` for
    /// a loop.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = VertexSpec>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut g = LabeledMultigraph::default();
        for spec in vertices {
            g.insert_vertex(spec.id, spec.label, spec.tag)?;
        }
        for (a, b) in edges {
            g.insert_edge(a, b)?;
        }
        Ok(g)
    }

    fn insert_vertex(
        &mut self,
        id: VertexId,
        label: Option<String>,
        tag: VertexTag,
    ) -> Result<(), GraphError> {
        if self.nodes.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        if let Some(l) = &label {
            if self.label_index.contains_key(l) {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
            self.label_index.insert(l.clone(), id);
        }
        self.nodes.insert(
            id,
            Node {
                label,
                tag,
                adj: BTreeMap::new(),
            },
        );
        Ok(())
    }

    fn insert_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        for v in [a, b] {
            if !self.nodes.contains_key(&v) {
                return Err(GraphError::DanglingEdge(v));
            }
        }
        *self.nodes.get_mut(&a).unwrap().adj.entry(b).or_insert(0) += 1;
        if a != b {
            *self.nodes.get_mut(&b).unwrap().adj.entry(a).or_insert(0) += 1;
        }
        Ok(())
    }

    /// Removes one copy of edge `{a, b}`. Panics if absent.
    fn take_edge(&mut self, a: VertexId, b: VertexId) {
        for (x, y) in [(a, b), (b, a)] {
            let adj = &mut self.nodes.get_mut(&x).expect("vertex exists").adj;
            let m = adj.get_mut(&y).expect("edge exists");
            *m -= 1;
            if *m == 0 {
                adj.remove(&y);
            }
            if a == b {
                break;
            }
        }
    }

    fn drop_vertex(&mut self, v: VertexId) {
        let node = self.nodes.remove(&v).expect("vertex exists");
        for u in node.adj.keys() {
            if *u != v {
                self.nodes.get_mut(u).expect("neighbor exists").adj.remove(&v);
            }
        }
        if let Some(l) = node.label {
            self.label_index.remove(&l);
        }
    }

    fn node(&self, v: VertexId) -> Result<&Node, GraphError> {
        self.nodes.get(&v).ok_or(GraphError::UnknownVertex(v))
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of edges counted with multiplicity; a loop counts once.
    pub fn edge_count(&self) -> usize {
        self.nodes
            .iter()
            .flat_map(|(v, n)| n.adj.iter().filter(move |(u, _)| *u >= v))
            .map(|(_, m)| *m as usize)
            .sum()
    }

    /// `|E| - |V|`.
    pub fn excess(&self) -> i64 {
        self.edge_count() as i64 - self.vertex_count() as i64
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.nodes.contains_key(&v)
    }

    /// Vertex identifiers in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.nodes.get(&v).and_then(|n| n.label.as_deref())
    }

    pub fn tag(&self, v: VertexId) -> Option<&VertexTag> {
        self.nodes.get(&v).map(|n| &n.tag)
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.label_index.get(label).copied()
    }

    /// Labels in sorted order.
    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.label_index.keys().map(String::as_str)
    }

    pub fn label_set(&self) -> BTreeSet<String> {
        self.label_index.keys().cloned().collect()
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        let n = self.node(v)?;
        Ok(n
            .adj
            .iter()
            .map(|(u, m)| if *u == v { 2 * *m } else { *m } as usize)
            .sum())
    }

    pub fn loops(&self, v: VertexId) -> u32 {
        self.nodes
            .get(&v)
            .and_then(|n| n.adj.get(&v).copied())
            .unwrap_or(0)
    }

    pub fn multiplicity(&self, a: VertexId, b: VertexId) -> u32 {
        self.nodes
            .get(&a)
            .and_then(|n| n.adj.get(&b).copied())
            .unwrap_or(0)
    }

    /// Distinct neighbours with edge multiplicities, loops included.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.nodes
            .get(&v)
            .into_iter()
            .flat_map(|n| n.adj.iter().map(|(u, m)| (*u, *m)))
    }

    /// Every edge as `(a, b)` with `a <= b`, repeated by multiplicity, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (v, n) in &self.nodes {
            for (u, m) in n.adj.range(*v..) {
                out.extend(std::iter::repeat_n((*v, *u), *m as usize));
            }
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        self.nodes
            .iter()
            .all(|(v, n)| n.adj.iter().all(|(u, m)| u != v && *m == 1))
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.nodes.keys().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([*start]);
        let mut stack = vec![*start];
        while let Some(v) = stack.pop() {
            for (u, _) in self.neighbors(v) {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == self.nodes.len()
    }

    /// Map from tag to vertex for every non-anonymous tag. If a tag repeats,
    /// the lowest identifier wins.
    pub fn tag_index(&self) -> HashMap<VertexTag, VertexId> {
        let mut out = HashMap::new();
        for (v, n) in self.nodes.iter().rev() {
            if !n.tag.is_anonymous() {
                out.insert(n.tag.clone(), *v);
            }
        }
        out
    }

    /// Deletes `v` and its incident edges without suppressing anything.
    pub fn delete_vertex(&self, v: VertexId) -> Result<LabeledMultigraph, GraphError> {
        self.node(v)?;
        let mut g = self.clone();
        g.drop_vertex(v);
        Ok(g)
    }

    /// Removal `G_a`: delete `a` with its edges, then suppress every
    /// unlabelled degree-2 vertex.
    pub fn remove_vertex(&self, a: VertexId) -> Result<LabeledMultigraph, GraphError> {
        self.delete_vertex(a)?.suppress_degree_two()
    }

    /// Removal of the vertex carrying `label`.
    pub fn remove_label(&self, label: &str) -> Result<LabeledMultigraph, GraphError> {
        let v = self
            .vertex_by_label(label)
            .ok_or_else(|| GraphError::UnknownLabel(label.to_string()))?;
        self.remove_vertex(v)
    }

    /// Copy with the edge `{a, b}` replaced by `{a, c}`.
    pub fn rewire_edge(&self, a: VertexId, b: VertexId, c: VertexId) -> Result<LabeledMultigraph, GraphError> {
        for v in [a, b, c] {
            self.node(v)?;
        }
        if self.multiplicity(a, b) == 0 {
            return Err(GraphError::DanglingEdge(b));
        }
        let mut g = self.clone();
        g.take_edge(a, b);
        g.insert_edge(a, c)?;
        Ok(g)
    }
}

/// Incremental construction with identifier allocation.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    graph: LabeledMultigraph,
    next: u32,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: Option<&str>, tag: VertexTag) -> Result<VertexId, GraphError> {
        let id = VertexId(self.next);
        self.graph.insert_vertex(id, label.map(str::to_string), tag)?;
        self.next += 1;
        Ok(id)
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        self.graph.insert_edge(a, b)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn build(self) -> LabeledMultigraph {
        self.graph
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Graph on vertices `0..n` (unlabelled) with the given edges.
    pub fn plain(n: u32, edges: &[(u32, u32)]) -> LabeledMultigraph {
        labeled(n, &[], edges)
    }

    pub fn labeled(n: u32, labels: &[(u32, &str)], edges: &[(u32, u32)]) -> LabeledMultigraph {
        let lab: BTreeMap<u32, &str> = labels.iter().copied().collect();
        LabeledMultigraph::from_parts(
            (0..n).map(|i| VertexSpec {
                id: VertexId(i),
                label: lab.get(&i).map(|s| s.to_string()),
                tag: VertexTag::Anonymous,
            }),
            edges.iter().map(|&(a, b)| (VertexId(a), VertexId(b))),
        )
        .unwrap()
    }

    /// Quartet tree `x1 x2 | x3 x4`: leaves 0..4, internal 4 (x1,x2) and 5 (x3,x4).
    pub fn quartet() -> LabeledMultigraph {
        labeled(
            6,
            &[(0, "x1"), (1, "x2"), (2, "x3"), (3, "x4")],
            &[(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)],
        )
    }
}
