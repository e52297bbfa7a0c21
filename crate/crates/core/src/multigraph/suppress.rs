use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{GraphError, LabeledMultigraph, VertexId, VertexTag};

/// One suppressed vertex: its identity, its tag, and the endpoints of the
/// edge that replaced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuppressionRecord {
    pub vertex: VertexId,
    #[serde(serialize_with = "tag_text")]
    pub tag: VertexTag,
    pub joined: (VertexId, VertexId),
}

fn tag_text<S: serde::Serializer>(tag: &VertexTag, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&tag.to_string())
}

impl LabeledMultigraph {
    /// Replaces every unlabelled degree-2 vertex `v` with edges `{a,v},{v,b}`
    /// by a single edge `{a,b}` until none remain. `|E| - |V|` is unchanged.
    /// A cycle of degree-2 vertices ends as one vertex with a loop.
    pub fn suppress_degree_two(&self) -> Result<LabeledMultigraph, GraphError> {
        Ok(self.suppress_in_order(None)?.0)
    }

    /// As [`suppress_degree_two`](Self::suppress_degree_two), also returning
    /// the record of each suppressed vertex in suppression order.
    pub fn suppress_degree_two_logged(
        &self,
    ) -> Result<(LabeledMultigraph, Vec<SuppressionRecord>), GraphError> {
        self.suppress_in_order(None)
    }

    /// Suppression visiting candidates in a seeded random order.
    pub fn suppress_degree_two_shuffled(&self, seed: u64) -> Result<LabeledMultigraph, GraphError> {
        Ok(self.suppress_in_order(Some(seed))?.0)
    }

    fn suppress_in_order(
        &self,
        seed: Option<u64>,
    ) -> Result<(LabeledMultigraph, Vec<SuppressionRecord>), GraphError> {
        let mut candidates = Vec::new();
        for v in self.vertices() {
            if self.degree(v)? == 2 {
                if self.label(v).is_some() {
                    return Err(GraphError::LabeledDegreeTwo(v));
                }
                candidates.push(v);
            }
        }
        if let Some(seed) = seed {
            candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }

        // Suppressing v leaves every other degree unchanged, so the initial
        // degree-2 set is the whole worklist.
        let mut g = self.clone();
        let mut log = Vec::new();
        let mut work: VecDeque<VertexId> = candidates.into();
        while let Some(v) = work.pop_front() {
            let node = &g.nodes[&v];
            let mut ends = Vec::with_capacity(2);
            for (u, m) in &node.adj {
                if *u == v {
                    // a lone loop: nothing left to shorten
                    ends.clear();
                    break;
                }
                ends.extend(std::iter::repeat_n(*u, *m as usize));
            }
            if ends.len() != 2 {
                continue;
            }
            let (a, b) = (ends[0], ends[1]);
            log.push(SuppressionRecord {
                vertex: v,
                tag: node.tag.clone(),
                joined: (a, b),
            });
            g.drop_vertex(v);
            g.insert_edge(a, b)?;
        }
        Ok((g, log))
    }
}
