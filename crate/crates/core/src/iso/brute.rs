//! Exhaustive equivalence test over label-consistent bijections. Used as the
//! ground truth that the refinement search is checked against.

use super::IsoError;
use crate::multigraph::{LabeledMultigraph, VertexId};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 10;

/// Vertex cap, from `LEAFDECK_MAX_BRUTE_FORCE` when set to a number.
pub fn brute_force_cap() -> usize {
    std::env::var("LEAFDECK_MAX_BRUTE_FORCE")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_equivalent(g: &LabeledMultigraph, h: &LabeledMultigraph) -> Result<bool, IsoError> {
    brute_force_equivalent_with_cap(g, h, brute_force_cap())
}

struct Side {
    ids: Vec<VertexId>,
    mult: Vec<Vec<u32>>,
    labels: Vec<Option<String>>,
}

fn side(g: &LabeledMultigraph) -> Side {
    let ids: Vec<VertexId> = g.vertices().collect();
    let mult = ids
        .iter()
        .map(|a| ids.iter().map(|b| g.multiplicity(*a, *b)).collect())
        .collect();
    let labels = ids.iter().map(|v| g.label(*v).map(str::to_string)).collect();
    Side { ids, mult, labels }
}

fn extend(g: &Side, h: &Side, image: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = image.len();
    if i == g.ids.len() {
        return true;
    }
    for j in 0..h.ids.len() {
        if used[j] || g.labels[i] != h.labels[j] || g.mult[i][i] != h.mult[j][j] {
            continue;
        }
        if (0..i).any(|k| g.mult[i][k] != h.mult[j][image[k]]) {
            continue;
        }
        used[j] = true;
        image.push(j);
        if extend(g, h, image, used) {
            return true;
        }
        image.pop();
        used[j] = false;
    }
    false
}

pub fn brute_force_equivalent_with_cap(
    g: &LabeledMultigraph,
    h: &LabeledMultigraph,
    cap: usize,
) -> Result<bool, IsoError> {
    let size = g.vertex_count().max(h.vertex_count());
    if size > cap {
        return Err(IsoError::CapExceeded { size, cap });
    }
    if g.vertex_count() != h.vertex_count() {
        return Ok(false);
    }
    let (gs, hs) = (side(g), side(h));
    let mut used = vec![false; hs.ids.len()];
    Ok(extend(&gs, &hs, &mut Vec::new(), &mut used))
}
