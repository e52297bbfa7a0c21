//! Cut-edges, 2-edge-connected components and blob contraction.

use std::collections::BTreeMap;

use super::{GraphError, LabeledMultigraph, VertexId, VertexSpec, VertexTag};

/// A maximal 2-edge-connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Ascending.
    pub vertices: Vec<VertexId>,
    /// Edges with both ends inside, loops included.
    pub edge_count: usize,
    /// At least two internal edges.
    pub is_blob: bool,
}

struct Indexed {
    ids: Vec<VertexId>,
    // (neighbour index, edge id), one entry per parallel copy, loops skipped
    adj: Vec<Vec<(usize, usize)>>,
    ends: Vec<(usize, usize)>,
}

fn index(g: &LabeledMultigraph) -> Indexed {
    let ids: Vec<VertexId> = g.vertices().collect();
    let pos: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut adj = vec![Vec::new(); ids.len()];
    let mut ends = Vec::new();
    for (a, b) in g.edges() {
        if a == b {
            continue;
        }
        let (x, y) = (pos[&a], pos[&b]);
        let e = ends.len();
        ends.push((x, y));
        adj[x].push((y, e));
        adj[y].push((x, e));
    }
    Indexed { ids, adj, ends }
}

/// Bridge flags per edge id (iterative low-link DFS). Parallel copies carry
/// distinct edge ids, so they are never bridges.
fn bridge_flags(ix: &Indexed) -> Vec<bool> {
    const UNSEEN: usize = usize::MAX;
    let n = ix.ids.len();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut is_bridge = vec![false; ix.ends.len()];
    let mut clock = 0;
    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        // (vertex, edge used to enter it, next adjacency slot)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, via, ref mut slot)) = stack.last_mut() {
            if let Some(&(u, e)) = ix.adj[v].get(*slot) {
                *slot += 1;
                if e == via {
                    continue;
                }
                if disc[u] == UNSEEN {
                    disc[u] = clock;
                    low[u] = clock;
                    clock += 1;
                    stack.push((u, e, 0));
                } else {
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        is_bridge[via] = true;
                    }
                }
            }
        }
    }
    is_bridge
}

/// Every bridge as `(a, b)` with `a < b`, sorted.
pub fn cut_edges(g: &LabeledMultigraph) -> Result<Vec<(VertexId, VertexId)>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let ix = index(g);
    let flags = bridge_flags(&ix);
    let mut out: Vec<_> = ix
        .ends
        .iter()
        .zip(&flags)
        .filter(|(_, b)| **b)
        .map(|(&(x, y), _)| (ix.ids[x].min(ix.ids[y]), ix.ids[x].max(ix.ids[y])))
        .collect();
    out.sort();
    Ok(out)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Partition into 2-edge-connected components, ordered by smallest vertex.
pub fn blobs(g: &LabeledMultigraph) -> Result<Vec<Component>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let ix = index(g);
    let flags = bridge_flags(&ix);
    let mut parent: Vec<usize> = (0..ix.ids.len()).collect();
    for (e, &(x, y)) in ix.ends.iter().enumerate() {
        if !flags[e] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent[rx] = ry;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..ix.ids.len() {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    let mut internal: BTreeMap<usize, usize> = BTreeMap::new();
    for (e, &(x, _)) in ix.ends.iter().enumerate() {
        if !flags[e] {
            *internal.entry(find(&mut parent, x)).or_default() += 1;
        }
    }
    for (x, v) in ix.ids.iter().enumerate() {
        let loops = g.loops(*v) as usize;
        if loops > 0 {
            *internal.entry(find(&mut parent, x)).or_default() += loops;
        }
    }
    let mut out: Vec<Component> = groups
        .into_iter()
        .map(|(root, members)| {
            let edge_count = internal.get(&root).copied().unwrap_or(0);
            Component {
                vertices: members.iter().map(|&i| ix.ids[i]).collect(),
                edge_count,
                is_blob: edge_count >= 2,
            }
        })
        .collect();
    out.sort_by_key(|c| c.vertices[0]);
    Ok(out)
}

/// Quotient graph with one vertex per 2-edge-connected component and one
/// edge per bridge. A component keeps the identifier of its smallest vertex;
/// single-vertex components also keep label and tag.
pub fn contract_blobs(g: &LabeledMultigraph) -> Result<LabeledMultigraph, GraphError> {
    let comps = blobs(g)?;
    let mut rep = BTreeMap::new();
    let mut specs = Vec::new();
    for c in &comps {
        let id = c.vertices[0];
        for v in &c.vertices {
            rep.insert(*v, id);
        }
        let (label, tag) = if c.vertices.len() == 1 {
            (g.label(id).map(str::to_string), g.tag(id).cloned().unwrap_or_default())
        } else {
            (None, VertexTag::Anonymous)
        };
        specs.push(VertexSpec { id, label, tag });
    }
    let edges = cut_edges(g)?.into_iter().map(|(a, b)| (rep[&a], rep[&b]));
    LabeledMultigraph::from_parts(specs, edges)
}
