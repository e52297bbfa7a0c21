//! Equivalence of labelled multigraphs: a bijection that preserves labels
//! and the number of edges between every pair of vertices (loops included).
//! Tags are ignored.

mod brute;
mod canon;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multigraph::{LabeledMultigraph, VertexId};

pub use brute::{brute_force_cap, brute_force_equivalent, brute_force_equivalent_with_cap, DEFAULT_BRUTE_FORCE_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("graph has {size} vertices, brute force is capped at {cap}")]
    CapExceeded { size: usize, cap: usize },
}

/// Vertex map from one graph into another, `{"map": {"0": 5, ...}}` on the wire.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoWitness {
    pub map: BTreeMap<VertexId, VertexId>,
}

impl IsoWitness {
    pub fn identity(g: &LabeledMultigraph) -> Self {
        IsoWitness {
            map: g.vertices().map(|v| (v, v)).collect(),
        }
    }

    pub fn get(&self, v: VertexId) -> Option<VertexId> {
        self.map.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn inverse(&self) -> IsoWitness {
        IsoWitness {
            map: self.map.iter().map(|(a, b)| (*b, *a)).collect(),
        }
    }

    /// The witness restricted to vertices present in `g`.
    pub fn restrict_to(&self, g: &LabeledMultigraph) -> IsoWitness {
        IsoWitness {
            map: self
                .map
                .iter()
                .filter(|(a, _)| g.contains(**a))
                .map(|(a, b)| (*a, *b))
                .collect(),
        }
    }
}

impl FromIterator<(VertexId, VertexId)> for IsoWitness {
    fn from_iter<T: IntoIterator<Item = (VertexId, VertexId)>>(iter: T) -> Self {
        IsoWitness {
            map: iter.into_iter().collect(),
        }
    }
}

/// First reason a map fails to be an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessViolation {
    SizeMismatch { source: usize, target: usize },
    Unmapped(VertexId),
    UnknownSource(VertexId),
    UnknownTarget(VertexId),
    NotInjective(VertexId),
    LabelMismatch { vertex: VertexId, image: VertexId },
    EdgeMismatch {
        a: VertexId,
        b: VertexId,
        source: u32,
        target: u32,
    },
}

impl fmt::Display for WitnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use WitnessViolation::*;
        match self {
            SizeMismatch { source, target } => {
                write!(f, "vertex counts differ: {source} vs {target}")
            }
            Unmapped(v) => write!(f, "vertex {v} has no image"),
            UnknownSource(v) => write!(f, "map sends {v}, which is not a source vertex"),
            UnknownTarget(v) => write!(f, "image {v} is not a target vertex"),
            NotInjective(v) => write!(f, "{v} is the image of two vertices"),
            LabelMismatch { vertex, image } => {
                write!(f, "label of {vertex} differs from label of its image {image}")
            }
            EdgeMismatch { a, b, source, target } => write!(
                f,
                "{source} edge(s) between {a} and {b} but {target} between their images"
            ),
        }
    }
}

/// Checks that `f` is a bijection `V(g) -> V(h)` preserving labels and edge
/// multiplicities.
pub fn verify_witness(g: &LabeledMultigraph, h: &LabeledMultigraph, f: &IsoWitness) -> Result<(), WitnessViolation> {
    if g.vertex_count() != h.vertex_count() {
        return Err(WitnessViolation::SizeMismatch {
            source: g.vertex_count(),
            target: h.vertex_count(),
        });
    }
    if let Some(a) = f.map.keys().find(|a| !g.contains(**a)) {
        return Err(WitnessViolation::UnknownSource(*a));
    }
    let mut images = BTreeSet::new();
    for v in g.vertices() {
        let w = f.get(v).ok_or(WitnessViolation::Unmapped(v))?;
        if !h.contains(w) {
            return Err(WitnessViolation::UnknownTarget(w));
        }
        if !images.insert(w) {
            return Err(WitnessViolation::NotInjective(w));
        }
        if g.label(v) != h.label(w) {
            return Err(WitnessViolation::LabelMismatch { vertex: v, image: w });
        }
    }
    for v in g.vertices() {
        for (u, m) in g.neighbors(v) {
            let hm = h.multiplicity(f.map[&v], f.map[&u]);
            if hm != m {
                return Err(WitnessViolation::EdgeMismatch {
                    a: v,
                    b: u,
                    source: m,
                    target: hm,
                });
            }
        }
    }
    // every source edge is matched, so any surplus lives in the target
    if g.edge_count() != h.edge_count() {
        let inv = f.inverse();
        for w in h.vertices() {
            for (x, m) in h.neighbors(w) {
                let (a, b) = (inv.map[&w], inv.map[&x]);
                let gm = g.multiplicity(a, b);
                if gm != m {
                    return Err(WitnessViolation::EdgeMismatch {
                        a,
                        b,
                        source: gm,
                        target: m,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Canonical byte string of a labelled multigraph plus the vertex order that
/// produced it. Two graphs have equal bytes iff they are equivalent.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
    /// `order[k]` is the vertex placed at canonical position `k`.
    order: Vec<VertexId>,
}

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    /// Lowercase hex of the bytes; stable across runs.
    pub fn hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.bytes == other.bytes
    }
}

impl Eq for CanonicalForm {}

pub fn canonical_form(g: &LabeledMultigraph) -> CanonicalForm {
    let dense = canon::Dense::new(g);
    let (pos, cert) = canon::canonical_positions(&dense);
    let mut order = vec![VertexId(0); dense.len()];
    for (v, &p) in pos.iter().enumerate() {
        order[p as usize] = dense.ids[v];
    }
    let mut bytes = Vec::new();
    bytes.extend_from_slice(&(dense.len() as u32).to_le_bytes());
    for v in &order {
        match g.label(*v) {
            Some(l) => {
                bytes.push(1);
                bytes.extend_from_slice(&(l.len() as u32).to_le_bytes());
                bytes.extend_from_slice(l.as_bytes());
            }
            None => bytes.push(0),
        }
    }
    bytes.extend_from_slice(&(cert.len() as u32).to_le_bytes());
    for (a, b, m) in cert {
        for x in [a, b, m] {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
    }
    CanonicalForm { bytes, order }
}

/// A witness `g -> h` if the graphs are equivalent.
pub fn are_equivalent(g: &LabeledMultigraph, h: &LabeledMultigraph) -> Option<IsoWitness> {
    if g.vertex_count() != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || !g.labels().eq(h.labels())
    {
        return None;
    }
    let (cg, ch) = (canonical_form(g), canonical_form(h));
    if cg != ch {
        return None;
    }
    let witness: IsoWitness = cg.order.iter().copied().zip(ch.order.iter().copied()).collect();
    debug_assert_eq!(verify_witness(g, h, &witness), Ok(()));
    Some(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::testing::{labeled, plain, quartet};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Copy of `g` with identifiers permuted by `perm[i]`.
    pub(crate) fn relabel(g: &LabeledMultigraph, perm: &[u32]) -> LabeledMultigraph {
        let specs = g.vertices().map(|v| crate::multigraph::VertexSpec {
            id: VertexId(perm[v.0 as usize]),
            label: g.label(v).map(str::to_string),
            tag: Default::default(),
        });
        let edges: Vec<_> = g
            .edges()
            .into_iter()
            .map(|(a, b)| (VertexId(perm[a.0 as usize]), VertexId(perm[b.0 as usize])))
            .collect();
        LabeledMultigraph::from_parts(specs, edges).unwrap()
    }

    #[test]
    fn identity_witness_verifies() {
        let q = quartet();
        assert_eq!(verify_witness(&q, &q, &IsoWitness::identity(&q)), Ok(()));
    }

    #[test]
    fn label_swapping_map_fails() {
        let q = quartet();
        let mut f = IsoWitness::identity(&q);
        f.map.insert(VertexId(0), VertexId(2));
        f.map.insert(VertexId(2), VertexId(0));
        assert!(matches!(
            verify_witness(&q, &q, &f),
            Err(WitnessViolation::LabelMismatch { .. })
        ));
    }

    #[test]
    fn witness_violations() {
        let q = quartet();
        let mut f = IsoWitness::identity(&q);
        f.map.remove(&VertexId(5));
        assert_eq!(verify_witness(&q, &q, &f), Err(WitnessViolation::Unmapped(VertexId(5))));
        f.map.insert(VertexId(5), VertexId(4));
        assert_eq!(verify_witness(&q, &q, &f), Err(WitnessViolation::NotInjective(VertexId(4))));
        let small = plain(2, &[(0, 1)]);
        assert!(matches!(
            verify_witness(&q, &small, &IsoWitness::identity(&q)),
            Err(WitnessViolation::SizeMismatch { .. })
        ));
        // swapping the two internal vertices keeps labels but breaks edges
        let mut f = IsoWitness::identity(&q);
        f.map.insert(VertexId(4), VertexId(5));
        f.map.insert(VertexId(5), VertexId(4));
        assert!(matches!(
            verify_witness(&q, &q, &f),
            Err(WitnessViolation::EdgeMismatch { .. })
        ));
    }

    #[test]
    fn surplus_target_edge_is_reported() {
        let g = plain(2, &[(0, 1)]);
        let h = plain(2, &[(0, 1), (1, 1)]);
        assert!(matches!(
            verify_witness(&g, &h, &IsoWitness::identity(&g)),
            Err(WitnessViolation::EdgeMismatch { source: 0, target: 1, .. })
        ));
    }

    #[test]
    fn shuffled_copy_is_equivalent() {
        let q = quartet();
        let h = relabel(&q, &[7, 3, 9, 1, 0, 4]);
        let w = are_equivalent(&q, &h).expect("equivalent");
        assert_eq!(verify_witness(&q, &h, &w), Ok(()));
        assert_eq!(canonical_form(&q), canonical_form(&h));
        assert_eq!(canonical_form(&q).hex(), canonical_form(&h).hex());
    }

    #[test]
    fn non_equivalent_pairs() {
        let tri = plain(3, &[(0, 1), (1, 2), (2, 0)]);
        let path = plain(3, &[(0, 1), (1, 2)]);
        assert!(are_equivalent(&tri, &path).is_none());
        let double = plain(2, &[(0, 1), (0, 1)]);
        let with_loop = plain(2, &[(0, 1), (0, 0)]);
        assert!(are_equivalent(&double, &with_loop).is_none());
        assert_ne!(canonical_form(&double), canonical_form(&with_loop));
        // quartet 12|34 vs 13|24
        let other = labeled(
            6,
            &[(0, "x1"), (1, "x3"), (2, "x2"), (3, "x4")],
            &[(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)],
        );
        assert!(are_equivalent(&quartet(), &other).is_none());
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: u32) -> LabeledMultigraph {
        let m = rng.gen_range(0..=2 * n);
        let edges: Vec<(u32, u32)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let k = rng.gen_range(0..=n.min(3));
        let names = ["a", "b", "c"];
        let labels: Vec<(u32, &str)> = (0..k).map(|i| (i, names[i as usize])).collect();
        labeled(n, &labels, &edges)
    }

    #[test]
    fn agrees_with_brute_force_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7u32);
            let g = random_graph(&mut rng, n);
            let mut perm: Vec<u32> = (0..n).collect();
            perm.shuffle(&mut rng);
            let same = relabel(&g, &perm);
            assert!(are_equivalent(&g, &same).is_some());
            assert!(brute_force_equivalent(&g, &same).unwrap());
            let other = random_graph(&mut rng, n);
            let fast = are_equivalent(&g, &other);
            assert_eq!(fast.is_some(), brute_force_equivalent(&g, &other).unwrap());
            if let Some(w) = fast {
                assert_eq!(verify_witness(&g, &other, &w), Ok(()));
            }
        }
    }

    #[test]
    fn witness_json_shape() {
        let w: IsoWitness = [(VertexId(0), VertexId(5)), (VertexId(10), VertexId(2))].into_iter().collect();
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, r#"{"map":{"0":5,"10":2}}"#);
        assert_eq!(serde_json::from_str::<IsoWitness>(&text).unwrap(), w);
    }
}
