use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::{GraphError, LabeledMultigraph, VertexId};

/// Hop distance from one vertex to every labelled vertex, keyed by label.
/// `None` marks an unreachable label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DistanceSignature(pub BTreeMap<String, Option<usize>>);

impl DistanceSignature {
    pub fn get(&self, label: &str) -> Option<Option<usize>> {
        self.0.get(label).copied()
    }
}

impl fmt::Display for DistanceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, (label, d)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            match d {
                Some(d) => write!(f, "{label}:{d}")?,
                None => write!(f, "{label}:-")?,
            }
        }
        f.write_str(")")
    }
}

fn bfs(g: &LabeledMultigraph, from: VertexId) -> BTreeMap<VertexId, usize> {
    let mut dist = BTreeMap::from([(from, 0)]);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for (u, _) in g.neighbors(v) {
            dist.entry(u).or_insert_with(|| {
                queue.push_back(u);
                d + 1
            });
        }
    }
    dist
}

/// Shortest-path edge count, `None` if `b` is unreachable from `a`.
pub fn distance(g: &LabeledMultigraph, a: VertexId, b: VertexId) -> Result<Option<usize>, GraphError> {
    for v in [a, b] {
        if !g.contains(v) {
            return Err(GraphError::UnknownVertex(v));
        }
    }
    Ok(bfs(g, a).get(&b).copied())
}

pub fn distance_signature(g: &LabeledMultigraph, v: VertexId) -> Result<DistanceSignature, GraphError> {
    if !g.contains(v) {
        return Err(GraphError::UnknownVertex(v));
    }
    let dist = bfs(g, v);
    Ok(DistanceSignature(
        g.label_index
            .iter()
            .map(|(l, x)| (l.clone(), dist.get(x).copied()))
            .collect(),
    ))
}

/// Signatures of every vertex, from one BFS per labelled vertex.
pub fn all_distance_signatures(g: &LabeledMultigraph) -> BTreeMap<VertexId, DistanceSignature> {
    let per_label: Vec<(String, BTreeMap<VertexId, usize>)> = g
        .label_index
        .iter()
        .map(|(l, x)| (l.clone(), bfs(g, *x)))
        .collect();
    g.vertices()
        .map(|v| {
            let sig = per_label
                .iter()
                .map(|(l, d)| (l.clone(), d.get(&v).copied()))
                .collect();
            (v, DistanceSignature(sig))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn distance_examples() {
        let q = quartet();
        assert_eq!(distance(&q, VertexId(0), VertexId(0)).unwrap(), Some(0));
        assert_eq!(distance(&q, VertexId(0), VertexId(3)).unwrap(), Some(3));
        let g = plain(3, &[(0, 1)]);
        assert_eq!(distance(&g, VertexId(0), VertexId(2)).unwrap(), None);
        assert!(distance(&g, VertexId(0), VertexId(5)).is_err());
    }

    #[test]
    fn signature_contains_zero_at_own_label() {
        let q = quartet();
        let sig = distance_signature(&q, VertexId(2)).unwrap();
        assert_eq!(sig.get("x3"), Some(Some(0)));
        assert_eq!(sig.get("x1"), Some(Some(3)));
        assert_eq!(sig.to_string(), "(x1:3, x2:3, x3:0, x4:2)");
        assert_eq!(all_distance_signatures(&q)[&VertexId(2)], sig);
    }

    #[test]
    fn symmetric_and_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(2..=9u32);
            let edges: Vec<(u32, u32)> = (0..rng.gen_range(0..=2 * n))
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect();
            let g = plain(n, &edges);
            let d = |a: u32, b: u32| distance(&g, VertexId(a), VertexId(b)).unwrap();
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(d(a, b), d(b, a));
                    for c in 0..n {
                        if let (Some(ab), Some(bc)) = (d(a, b), d(b, c)) {
                            assert!(d(a, c).unwrap() <= ab + bc);
                        }
                    }
                }
            }
        }
    }
}
