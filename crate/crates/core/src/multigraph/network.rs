//! Unrooted phylogenetic network validation.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::bridges::{contract_blobs, cut_edges};
use super::{GraphError, LabeledMultigraph, VertexId};

/// First violated network condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkViolation {
    TooFewLabels(usize),
    Loop(VertexId),
    ParallelEdges(VertexId, VertexId),
    Disconnected,
    UnlabeledLeaf(VertexId),
    LabeledNonLeaf(VertexId),
    LabelSetMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },
    DegreeTwo(VertexId),
    /// Blob contraction leaves a vertex of degree 2.
    ContractedDegreeTwo(VertexId),
    /// Blob contraction leaves an unlabelled leaf.
    ContractedUnlabeledLeaf(VertexId),
}

impl fmt::Display for NetworkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NetworkViolation::*;
        match self {
            TooFewLabels(n) => write!(f, "label set has {n} elements, need at least 2"),
            Loop(v) => write!(f, "self-loop at vertex {v}"),
            ParallelEdges(a, b) => write!(f, "parallel edges between {a} and {b}"),
            Disconnected => write!(f, "graph is disconnected"),
            UnlabeledLeaf(v) => write!(f, "leaf {v} has no label"),
            LabeledNonLeaf(v) => write!(f, "labelled vertex {v} is not a leaf"),
            LabelSetMismatch { missing, extra } => {
                write!(f, "labels missing {missing:?}, unexpected {extra:?}")
            }
            DegreeTwo(v) => write!(f, "vertex {v} has degree 2"),
            ContractedDegreeTwo(v) => write!(f, "blob contraction leaves degree-2 vertex {v}"),
            ContractedUnlabeledLeaf(v) => {
                write!(f, "blob contraction leaves unlabelled leaf {v}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkVerdict {
    pub violation: Option<NetworkViolation>,
}

impl NetworkVerdict {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Every vertex has degree 1 or 3.
pub fn is_binary(g: &LabeledMultigraph) -> bool {
    g.vertices()
        .all(|v| matches!(g.degree(v), Ok(1) | Ok(3)))
}

fn local_violation(g: &LabeledMultigraph, labels: &BTreeSet<String>) -> Option<NetworkViolation> {
    if labels.len() < 2 {
        return Some(NetworkViolation::TooFewLabels(labels.len()));
    }
    for v in g.vertices() {
        for (u, m) in g.neighbors(v) {
            if u == v {
                return Some(NetworkViolation::Loop(v));
            }
            if m > 1 {
                return Some(NetworkViolation::ParallelEdges(v.min(u), v.max(u)));
            }
        }
    }
    if !g.is_connected() {
        return Some(NetworkViolation::Disconnected);
    }
    for v in g.vertices() {
        let deg = g.degree(v).expect("vertex exists");
        match (deg, g.label(v)) {
            (1, None) => return Some(NetworkViolation::UnlabeledLeaf(v)),
            (d, Some(_)) if d != 1 => return Some(NetworkViolation::LabeledNonLeaf(v)),
            _ => {}
        }
    }
    let present = g.label_set();
    if &present != labels {
        return Some(NetworkViolation::LabelSetMismatch {
            missing: labels.difference(&present).cloned().collect(),
            extra: present.difference(labels).cloned().collect(),
        });
    }
    g.vertices()
        .find(|&v| g.degree(v) == Ok(2))
        .map(NetworkViolation::DegreeTwo)
}

fn contraction_violation(g: &LabeledMultigraph) -> Result<Option<NetworkViolation>, GraphError> {
    // a bridge tree is always a tree; only its degrees can fail
    let t = contract_blobs(g)?;
    for v in t.vertices() {
        match t.degree(v)? {
            2 => return Ok(Some(NetworkViolation::ContractedDegreeTwo(v))),
            1 if t.label(v).is_none() => {
                return Ok(Some(NetworkViolation::ContractedUnlabeledLeaf(v)))
            }
            _ => {}
        }
    }
    Ok(None)
}

/// Each cut-edge splits the leaves into two non-empty sides and no two
/// cut-edges give the same split.
fn cut_partitions_ok(g: &LabeledMultigraph) -> Result<bool, GraphError> {
    let first_label = match g.labels().next() {
        Some(l) => l.to_string(),
        None => return Ok(false),
    };
    let all = g.label_set();
    let mut seen = HashSet::new();
    for (a, b) in cut_edges(g)? {
        let mut side = BTreeSet::from([a]);
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for (y, _) in g.neighbors(x) {
                if (x, y) == (a, b) || (x, y) == (b, a) {
                    continue;
                }
                if side.insert(y) {
                    stack.push(y);
                }
            }
        }
        let mut part: BTreeSet<String> = side
            .iter()
            .filter_map(|v| g.label(*v).map(str::to_string))
            .collect();
        if part.is_empty() || part.len() == all.len() {
            return Ok(false);
        }
        if !part.contains(&first_label) {
            part = all.difference(&part).cloned().collect();
        }
        if !seen.insert(part) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides whether `g` is an unrooted phylogenetic network on `labels`.
///
/// The blob-contraction test decides the verdict; the cut-edge partition test
/// is run as a cross-check and a disagreement is returned as an error.
pub fn is_network(g: &LabeledMultigraph, labels: &BTreeSet<String>) -> Result<NetworkVerdict, GraphError> {
    if let Some(v) = local_violation(g, labels) {
        return Ok(NetworkVerdict { violation: Some(v) });
    }
    let violation = contraction_violation(g)?;
    let by_cuts = cut_partitions_ok(g)?;
    if by_cuts != violation.is_none() {
        return Err(GraphError::CharacterizationMismatch {
            contraction: violation.is_none(),
            cut_edges: by_cuts,
        });
    }
    Ok(NetworkVerdict { violation })
}

/// A multigraph checked to be a network on its label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    graph: LabeledMultigraph,
    label_set: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("not a network: {0}")]
    Invalid(NetworkViolation),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl Network {
    pub fn new(graph: LabeledMultigraph, label_set: BTreeSet<String>) -> Result<Self, NetworkError> {
        match is_network(&graph, &label_set)?.violation {
            Some(v) => Err(NetworkError::Invalid(v)),
            None => Ok(Network { graph, label_set }),
        }
    }

    /// Validates against the labels the graph carries.
    pub fn from_graph(graph: LabeledMultigraph) -> Result<Self, NetworkError> {
        let labels = graph.label_set();
        Network::new(graph, labels)
    }

    pub fn graph(&self) -> &LabeledMultigraph {
        &self.graph
    }

    pub fn label_set(&self) -> &BTreeSet<String> {
        &self.label_set
    }

    pub fn into_graph(self) -> LabeledMultigraph {
        self.graph
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x(n: usize) -> BTreeSet<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn quartet_is_binary_network() {
        let q = quartet();
        assert!(is_network(&q, &x(4)).unwrap().is_valid());
        assert!(is_binary(&q));
        assert!(Network::from_graph(q).is_ok());
    }

    #[test]
    fn unlabeled_leaf_rejected() {
        let g = labeled(
            6,
            &[(0, "x1"), (1, "x2"), (2, "x3")],
            &[(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)],
        );
        assert_eq!(
            is_network(&g, &x(3)).unwrap().violation,
            Some(NetworkViolation::UnlabeledLeaf(VertexId(3)))
        );
    }

    #[test]
    fn other_violations() {
        let q = quartet();
        assert!(matches!(
            is_network(&q, &x(5)).unwrap().violation,
            Some(NetworkViolation::LabelSetMismatch { .. })
        ));
        let two = labeled(2, &[(0, "x1"), (1, "x2")], &[(0, 1), (0, 1)]);
        assert!(matches!(
            is_network(&two, &x(2)).unwrap().violation,
            Some(NetworkViolation::ParallelEdges(..))
        ));
        let path = labeled(3, &[(0, "x1"), (2, "x2")], &[(0, 1), (1, 2)]);
        assert_eq!(
            is_network(&path, &x(2)).unwrap().violation,
            Some(NetworkViolation::DegreeTwo(VertexId(1)))
        );
        // square blob with a pendant pair on one corner only: the blob is a
        // leaf of the contraction
        let g = labeled(
            7,
            &[(5, "x1"), (6, "x2")],
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3), (0, 4), (4, 5), (4, 6)],
        );
        assert!(matches!(
            is_network(&g, &x(2)).unwrap().violation,
            Some(NetworkViolation::LabeledNonLeaf(_)) | Some(NetworkViolation::ContractedUnlabeledLeaf(_))
        ));
        assert!(!is_binary(&g));
    }

    #[test]
    fn blob_with_two_bridges_is_contracted_degree_two() {
        // K4 blob with two pendant cherries hanging off two corners
        let g = labeled(
            10,
            &[(6, "x1"), (7, "x2"), (8, "x3"), (9, "x4")],
            &[
                (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
                (0, 4), (1, 5), (4, 6), (4, 7), (5, 8), (5, 9),
            ],
        );
        assert!(matches!(
            is_network(&g, &x(4)).unwrap().violation,
            Some(NetworkViolation::ContractedDegreeTwo(_))
        ));
    }

    #[test]
    fn triangle_blob_network() {
        // triangle, each corner with a labelled leaf
        let g = labeled(
            6,
            &[(3, "x1"), (4, "x2"), (5, "x3")],
            &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)],
        );
        assert!(is_network(&g, &x(3)).unwrap().is_valid());
        assert!(is_binary(&g));
    }

    // Both characterizations agree (no CharacterizationMismatch) on random
    // simple graphs whose leaves are labelled.
    #[test]
    fn characterizations_agree_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut valid = 0;
        for _ in 0..2000 {
            let n = rng.gen_range(3..=10u32);
            let mut edges = std::collections::BTreeSet::new();
            // random tree plus a few extra chords
            for v in 1..n {
                let u = rng.gen_range(0..v);
                edges.insert((u, v));
            }
            for _ in 0..rng.gen_range(0..=3) {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if a != b {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
            let edges: Vec<_> = edges.into_iter().collect();
            let probe = plain(n, &edges);
            let leaves: Vec<u32> = (0..n)
                .filter(|&v| probe.degree(VertexId(v)).unwrap() == 1)
                .collect();
            let names: Vec<String> = (1..=leaves.len()).map(|i| format!("x{i}")).collect();
            let labels: Vec<(u32, &str)> = leaves
                .iter()
                .zip(&names)
                .map(|(v, s)| (*v, s.as_str()))
                .collect();
            let g = labeled(n, &labels, &edges);
            let verdict = is_network(&g, &g.label_set()).expect("characterizations agree");
            if verdict.is_valid() {
                valid += 1;
            }
        }
        assert!(valid > 10, "only {valid} valid networks sampled");
    }
}
