//! Canonical labelling by colour refinement and individualization.
//!
//! Colours start from `(label, degree, loop count)` and are refined by the
//! multiset of `(neighbour colour, edge multiplicity)` until stable. The
//! search individualizes vertices of the first smallest non-singleton cell,
//! lowest index first, and keeps the lexicographically smallest leaf
//! certificate. Automorphisms found on the way prune sibling branches that
//! lie in one orbit of the pointwise stabiliser of the current prefix.

use crate::multigraph::{LabeledMultigraph, VertexId};

pub(crate) struct Dense {
    pub ids: Vec<VertexId>,
    pub labels: Vec<Option<String>>,
    pub loops: Vec<u32>,
    /// Neighbours other than self with multiplicities.
    pub adj: Vec<Vec<(usize, u32)>>,
}

impl Dense {
    pub fn new(g: &LabeledMultigraph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let pos: std::collections::HashMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let adj = ids
            .iter()
            .map(|v| {
                g.neighbors(*v)
                    .filter(|(u, _)| u != v)
                    .map(|(u, m)| (pos[&u], m))
                    .collect()
            })
            .collect();
        Dense {
            labels: ids.iter().map(|v| g.label(*v).map(str::to_string)).collect(),
            loops: ids.iter().map(|v| g.loops(*v)).collect(),
            ids,
            adj,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    fn degree(&self, v: usize) -> u32 {
        self.adj[v].iter().map(|(_, m)| m).sum::<u32>() + 2 * self.loops[v]
    }
}

/// Replaces keys by their rank among the distinct keys; returns cell count.
fn rank<K: Ord>(keys: Vec<K>, colors: &mut [u32]) -> usize {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|a, b| keys[*a].cmp(&keys[*b]));
    let mut cells = 0;
    for (k, &v) in order.iter().enumerate() {
        if k > 0 && keys[order[k - 1]] != keys[v] {
            cells += 1;
        }
        colors[v] = cells as u32;
    }
    if keys.is_empty() {
        0
    } else {
        cells + 1
    }
}

fn initial_colors(g: &Dense) -> (Vec<u32>, usize) {
    let keys: Vec<(Option<&str>, u32, u32)> = (0..g.len())
        .map(|v| (g.labels[v].as_deref(), g.degree(v), g.loops[v]))
        .collect();
    let mut colors = vec![0; g.len()];
    let cells = rank(keys, &mut colors);
    (colors, cells)
}

fn refine(g: &Dense, colors: &mut [u32], mut cells: usize) -> usize {
    loop {
        let keys: Vec<(u32, Vec<(u32, u32)>)> = (0..g.len())
            .map(|v| {
                let mut nb: Vec<(u32, u32)> = g.adj[v].iter().map(|&(u, m)| (colors[u], m)).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(keys, colors);
        if next == cells {
            return cells;
        }
        cells = next;
    }
}

fn individualize(g: &Dense, colors: &[u32], v: usize) -> (Vec<u32>, usize) {
    let keys: Vec<(u32, bool)> = (0..colors.len()).map(|u| (colors[u], u != v)).collect();
    let mut out = vec![0; colors.len()];
    let cells = rank(keys, &mut out);
    let cells = refine(g, &mut out, cells);
    (out, cells)
}

/// Members of the first smallest non-singleton cell, ascending.
fn target_cell(colors: &[u32], cells: usize) -> Option<Vec<usize>> {
    let mut sizes = vec![0usize; cells];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    let best = (0..cells)
        .filter(|&c| sizes[c] > 1)
        .min_by_key(|&c| (sizes[c], c))?;
    Some(
        (0..colors.len())
            .filter(|&v| colors[v] as usize == best)
            .collect(),
    )
}

/// Edges and loops of the graph relabelled by `pos`, sorted.
fn certificate(g: &Dense, pos: &[u32]) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for v in 0..g.len() {
        if g.loops[v] > 0 {
            out.push((pos[v], pos[v], g.loops[v]));
        }
        for &(u, m) in &g.adj[v] {
            if pos[v] < pos[u] {
                out.push((pos[v], pos[u], m));
            }
        }
    }
    out.sort_unstable();
    out
}

struct Leaf {
    cert: Vec<(u32, u32, u32)>,
    pos: Vec<u32>,
}

struct Search<'a> {
    g: &'a Dense,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Search<'_> {
    fn automorphism(&self, a: &[u32], b: &[u32]) -> Vec<usize> {
        // a^{-1} ∘ b
        let mut inv = vec![0usize; a.len()];
        for (v, &p) in a.iter().enumerate() {
            inv[p as usize] = v;
        }
        b.iter().map(|&p| inv[p as usize]).collect()
    }

    fn orbits_fixing(&self, prefix: &[usize]) -> Vec<usize> {
        let n = self.g.len();
        let mut parent: Vec<usize> = (0..n).collect();
        for gamma in &self.generators {
            if prefix.iter().all(|&p| gamma[p] == p) {
                for (v, &image) in gamma.iter().enumerate() {
                    let (a, b) = (find(&mut parent, v), find(&mut parent, image));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }

    fn leaf(&mut self, colors: Vec<u32>) {
        let cert = certificate(self.g, &colors);
        let leaf = Leaf { cert, pos: colors };
        let Some(first) = &self.first else {
            self.first = Some(Leaf {
                cert: leaf.cert.clone(),
                pos: leaf.pos.clone(),
            });
            self.best = Some(leaf);
            return;
        };
        if first.cert == leaf.cert {
            let gamma = self.automorphism(&first.pos, &leaf.pos);
            self.generators.push(gamma);
            return;
        }
        let best = self.best.as_ref().expect("best set with first");
        match leaf.cert.cmp(&best.cert) {
            std::cmp::Ordering::Equal => {
                let gamma = self.automorphism(&best.pos, &leaf.pos);
                self.generators.push(gamma);
            }
            std::cmp::Ordering::Less => self.best = Some(leaf),
            std::cmp::Ordering::Greater => {}
        }
    }

    fn visit(&mut self, colors: Vec<u32>, cells: usize, prefix: &mut Vec<usize>) {
        let Some(cell) = target_cell(&colors, cells) else {
            self.leaf(colors);
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        let mut orbits: Option<(usize, Vec<usize>)> = None;
        for v in cell {
            if !explored.is_empty() {
                if orbits.as_ref().map(|(k, _)| *k) != Some(self.generators.len()) {
                    orbits = Some((self.generators.len(), self.orbits_fixing(prefix)));
                }
                let orb = &orbits.as_ref().unwrap().1;
                if explored.iter().any(|&e| orb[e] == orb[v]) {
                    continue;
                }
            }
            explored.push(v);
            let (next, next_cells) = individualize(self.g, &colors, v);
            prefix.push(v);
            self.visit(next, next_cells, prefix);
            prefix.pop();
        }
    }
}

/// Canonical position of every vertex (index into `g.ids`) and the
/// certificate of that labelling.
pub(crate) fn canonical_positions(g: &Dense) -> (Vec<u32>, Vec<(u32, u32, u32)>) {
    let (mut colors, cells) = initial_colors(g);
    let cells = refine(g, &mut colors, cells);
    let mut search = Search {
        g,
        first: None,
        best: None,
        generators: Vec::new(),
    };
    search.visit(colors, cells, &mut Vec::new());
    let best = search.best.expect("search reaches at least one leaf");
    (best.pos, best.cert)
}
