#![allow(dead_code)]

use leafdeck::multigraph::VertexSpec;
use leafdeck::{LabeledMultigraph, VertexId, VertexTag};
use rand::seq::SliceRandom;
use rand::Rng;

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn assemble(n: u32, labels: &[(u32, &str)], edges: &[(u32, u32)]) -> LabeledMultigraph {
    LabeledMultigraph::from_parts(
        (0..n).map(|i| VertexSpec {
            id: VertexId(i),
            label: labels.iter().find(|(v, _)| *v == i).map(|(_, l)| l.to_string()),
            tag: VertexTag::Anonymous,
        }),
        edges.iter().map(|&(a, b)| (VertexId(a), VertexId(b))),
    )
    .expect("generated graph is well formed")
}

/// Any multigraph on `1..=max_n` vertices: loops, parallel edges and up to
/// three labels on arbitrary vertices.
pub fn random_multigraph<R: Rng>(rng: &mut R, max_n: u32) -> LabeledMultigraph {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=2 * n);
    let edges: Vec<(u32, u32)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    let k = rng.gen_range(0..=n.min(3));
    let mut ids: Vec<u32> = (0..n).collect();
    ids.shuffle(rng);
    let labels: Vec<(u32, &str)> = ids[..k as usize].iter().zip(NAMES).map(|(v, l)| (*v, l)).collect();
    assemble(n, &labels, &edges)
}

/// Multigraph whose labelled vertices are pendant leaves, so suppression
/// never meets a labelled degree-2 vertex.
pub fn random_leafed<R: Rng>(rng: &mut R, max_inner: u32) -> LabeledMultigraph {
    let n = rng.gen_range(1..=max_inner);
    let m = rng.gen_range(0..=2 * n);
    let mut edges: Vec<(u32, u32)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    let k = rng.gen_range(0..=4u32);
    let mut labels = Vec::new();
    for j in 0..k {
        edges.push((n + j, rng.gen_range(0..n)));
        labels.push((n + j, NAMES[j as usize]));
    }
    assemble(n + k, &labels, &edges)
}

/// Copy of `g` with identifiers shuffled.
pub fn shuffled<R: Rng>(rng: &mut R, g: &LabeledMultigraph) -> LabeledMultigraph {
    let ids: Vec<VertexId> = g.vertices().collect();
    let mut perm = ids.clone();
    perm.shuffle(rng);
    let to = |v: VertexId| perm[ids.iter().position(|x| *x == v).unwrap()];
    LabeledMultigraph::from_parts(
        ids.iter().map(|v| VertexSpec {
            id: to(*v),
            label: g.label(*v).map(str::to_string),
            tag: VertexTag::Anonymous,
        }),
        g.edges().into_iter().map(|(a, b)| (to(a), to(b))),
    )
    .unwrap()
}

/// `g` with one edge moved to a random pair of vertices; may or may not
/// stay equivalent to `g`.
pub fn perturbed<R: Rng>(rng: &mut R, g: &LabeledMultigraph) -> LabeledMultigraph {
    let ids: Vec<VertexId> = g.vertices().collect();
    let mut edges = g.edges();
    if !edges.is_empty() {
        let k = rng.gen_range(0..edges.len());
        edges.swap_remove(k);
    }
    edges.push((*ids.choose(rng).unwrap(), *ids.choose(rng).unwrap()));
    LabeledMultigraph::from_parts(
        ids.iter().map(|v| VertexSpec {
            id: *v,
            label: g.label(*v).map(str::to_string),
            tag: VertexTag::Anonymous,
        }),
        edges,
    )
    .unwrap()
}

/// Sorted labels, repeated per vertex.
pub fn label_multiset(g: &LabeledMultigraph) -> Vec<String> {
    let mut out: Vec<String> = g.vertices().filter_map(|v| g.label(v).map(str::to_string)).collect();
    out.sort();
    out
}
