//! Mechanical check battery over the parity constructions.
//!
//! Each check is a named predicate with a one-line claim. Checks that have
//! both an explicit witness and a general search run both. The report is a
//! deterministic function of its parameters apart from the `millis` fields.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::construct::{
    build_g, build_m, build_n, excess_by_components, excess_closing_formula, g_witness_on, label_set, leaf_label,
    m_witness_on, ConstructError, MAX_R, MIN_R,
};
use crate::deck::{certify_not_leaf_reconstructible, signature_separator};
use crate::iso::{are_equivalent, canonical_form, verify_witness};
use crate::multigraph::{
    all_distance_signatures, blobs, distance_signature, is_binary, is_network, DistanceSignature, GraphError,
    LabeledMultigraph, LexPath, Network, VertexId, VertexTag,
};
use crate::seq::{enumerate_parity, BinarySeq, Parity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("need 4 <= r_min <= r_max <= 16, got r_min = {0}, r_max = {1}")]
    BadRange(usize, usize),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub claim: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u64,
}

type Outcome = Result<String, String>;

fn run(name: String, claim: &str, f: impl FnOnce() -> Outcome) -> CheckResult {
    let start = Instant::now();
    let out = f();
    let millis = start.elapsed().as_millis() as u64;
    let (passed, detail) = match out {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        name,
        claim: claim.to_string(),
        passed,
        detail,
        millis,
    }
}

fn name(r: usize, check: &str) -> String {
    format!("r{r:02}/{check}")
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn u0(r: usize) -> VertexTag {
    VertexTag::U(BinarySeq::zeros(r).expect("r within sequence bounds"))
}

fn tagged(g: &LabeledMultigraph, tag: &VertexTag) -> Result<VertexId, String> {
    g.tag_index().get(tag).copied().ok_or_else(|| format!("no vertex tagged {tag}"))
}

/// Whether any vertex of `g` has signature `s`.
fn has_signature(g: &LabeledMultigraph, s: &DistanceSignature) -> bool {
    all_distance_signatures(g).values().any(|t| t == s)
}

/// Non-equivalence by two mechanisms: search and canonical-form bytes.
fn not_equivalent(a: &LabeledMultigraph, b: &LabeledMultigraph) -> Outcome {
    if are_equivalent(a, b).is_some() {
        return Err("isomorphism search found a witness".into());
    }
    if canonical_form(a) == canonical_form(b) {
        return Err("canonical forms coincide".into());
    }
    Ok("search finds no witness; canonical forms differ".into())
}

/// Signature of `u_0` in `a`, required absent from `b`.
fn u0_absent(r: usize, a: &LabeledMultigraph, b: &LabeledMultigraph, expect: Option<usize>) -> Outcome {
    let u = tagged(a, &u0(r))?;
    let s = distance_signature(a, u).map_err(err)?;
    if let Some(d) = expect {
        if s.0.values().any(|v| *v != Some(d)) {
            return Err(format!("u_0 has signature {s}, expected all {d}"));
        }
    }
    if has_signature(b, &s) {
        return Err(format!("signature {s} also occurs in the other graph"));
    }
    Ok(format!("u_0 signature {s} absent from the other graph"))
}

/// For every label, the deck entries are related by the explicit map and
/// by independent search.
fn deck_pair(
    r: usize,
    a: &LabeledMultigraph,
    b: &LabeledMultigraph,
    remove: impl Fn(&LabeledMultigraph, &str) -> Result<LabeledMultigraph, GraphError>,
    witness: impl Fn(&LabeledMultigraph, &LabeledMultigraph, usize) -> Result<crate::iso::IsoWitness, ConstructError>,
) -> Outcome {
    for i in 1..=r {
        let x = leaf_label(i);
        let ea = remove(a, &x).map_err(|e| format!("{x}: {e}"))?;
        let eb = remove(b, &x).map_err(|e| format!("{x}: {e}"))?;
        let f = witness(&ea, &eb, i).map_err(|e| format!("{x}: {e}"))?;
        verify_witness(&ea, &eb, &f).map_err(|e| format!("{x}: explicit map fails: {e}"))?;
        let g = are_equivalent(&ea, &eb).ok_or_else(|| format!("{x}: search finds no isomorphism"))?;
        verify_witness(&ea, &eb, &g).map_err(|e| format!("{x}: search witness fails: {e}"))?;
    }
    Ok(format!("{r} labels: explicit map and search both succeed"))
}

fn remove_by_label(g: &LabeledMultigraph, x: &str) -> Result<LabeledMultigraph, GraphError> {
    g.remove_label(x)
}

fn delete_by_label(g: &LabeledMultigraph, x: &str) -> Result<LabeledMultigraph, GraphError> {
    let v = g.vertex_by_label(x).ok_or_else(|| GraphError::UnknownLabel(x.to_string()))?;
    g.delete_vertex(v)
}

/// The non-binary battery on the given pair, normally `M(r, even)` and
/// `M(r, odd)`.
pub fn check_m_graphs(r: usize, even: &LabeledMultigraph, odd: &LabeledMultigraph) -> Vec<CheckResult> {
    vec![
        run(name(r, "m.not_equivalent"), "the non-binary pair is not equivalent", || {
            not_equivalent(even, odd)
        }),
        run(
            name(r, "m.u0_signature"),
            "u_0 is at distance 2 from every leaf of the even graph, and no odd vertex is",
            || u0_absent(r, even, odd, Some(2)),
        ),
        run(name(r, "m.deck"), "the non-binary pair has equivalent leaf-deleted graphs", || {
            deck_pair(r, even, odd, remove_by_label, m_witness_on)
        }),
    ]
}

pub fn check_m_pair(r: usize) -> Result<Vec<CheckResult>, ConstructError> {
    Ok(check_m_graphs(r, &build_m(r, Parity::Even)?, &build_m(r, Parity::Odd)?))
}

/// Signature of the surviving `u_0` in `N(r, even)` and whether some vertex
/// of `N(r, odd)` carries it.
pub fn u0_signature_in_n(r: usize) -> Result<(DistanceSignature, bool), ConstructError> {
    let even = build_n(r, Parity::Even)?;
    let odd = build_n(r, Parity::Odd)?;
    let u = even
        .graph()
        .tag_index()
        .get(&u0(r))
        .copied()
        .ok_or_else(|| ConstructError::MissingTag(u0(r).to_string()))?;
    let s = distance_signature(even.graph(), u)?;
    let present = has_signature(odd.graph(), &s);
    Ok((s, present))
}

/// True when no vertex of `N(r, odd)` has the signature of `u_0` in `N(r, even)`.
pub fn check_u0_signature(r: usize) -> Result<bool, ConstructError> {
    Ok(!u0_signature_in_n(r)?.1)
}

/// Smallest sequence of `parity` starting with `a b`.
fn lowest_with_prefix(r: usize, parity: Parity, a: u8, b: u8) -> Result<BinarySeq, ConstructError> {
    enumerate_parity(r, parity)?
        .into_iter()
        .find(|w| w.at(1) == Ok(a) && w.at(2) == Ok(b))
        .ok_or_else(|| ConstructError::MissingTag(format!("{a}{b}*")))
}

/// Path between two leaves of tree `(pos, h)` through their lowest common
/// ancestor, endpoints included.
fn tree_path(
    g: &LabeledMultigraph,
    r: usize,
    parity: Parity,
    pos: usize,
    h: u8,
    from: BinarySeq,
    to: BinarySeq,
) -> Result<Vec<VertexId>, ConstructError> {
    let leaves = crate::seq::subset_ih(r, parity, pos, h)?;
    let depth = leaves.len().trailing_zeros() as usize;
    let path_of = |w: BinarySeq| {
        leaves
            .binary_search(&w)
            .map(|k| LexPath::of_leaf(k, depth))
            .map_err(|_| ConstructError::MissingTag(VertexTag::Z { w, pos }.to_string()))
    };
    let (pa, pb) = (path_of(from)?, path_of(to)?);
    let common = pa.steps().iter().zip(pb.steps()).take_while(|(a, b)| a == b).count();
    let index = g.tag_index();
    let at = |p: LexPath, w: BinarySeq| {
        let tag = if p.depth() == depth {
            VertexTag::Z { w, pos }
        } else if p.is_root() {
            VertexTag::V { pos, h }
        } else {
            VertexTag::LexInternal { pos, h: Some(h), path: p }
        };
        index.get(&tag).copied().ok_or_else(|| ConstructError::MissingTag(tag.to_string()))
    };
    let mut out = Vec::new();
    for d in (common..=depth).rev() {
        out.push(at(pa.prefix(d), from)?);
    }
    for d in common + 1..=depth {
        out.push(at(pb.prefix(d), to)?);
    }
    Ok(out)
}

/// The cycle through the hubs of the lowest sequences beginning `00`, `01`,
/// `11`, `10`, routed through trees `(1,0)`, `(2,1)`, `(1,1)`, `(2,0)`.
/// The first vertex is not repeated at the end.
pub fn blob_cycle(g: &LabeledMultigraph, r: usize, parity: Parity) -> Result<(Vec<BinarySeq>, Vec<VertexId>), ConstructError> {
    let w: Vec<BinarySeq> = [(0, 0), (0, 1), (1, 1), (1, 0)]
        .iter()
        .map(|&(a, b)| lowest_with_prefix(r, parity, a, b))
        .collect::<Result<_, _>>()?;
    // hop k leaves w[k] at position pos into tree (pos, h) and enters w[k+1]
    let hops = [(1, 0), (2, 1), (1, 1), (2, 0)];
    let index = g.tag_index();
    let mut cycle = Vec::new();
    for (k, &(pos, h)) in hops.iter().enumerate() {
        let (a, b) = (w[k], w[(k + 1) % 4]);
        let u = VertexTag::U(a);
        cycle.push(*index.get(&u).ok_or_else(|| ConstructError::MissingTag(u.to_string()))?);
        cycle.extend(tree_path(g, r, parity, pos, h, a, b)?);
    }
    Ok((w, cycle))
}

/// Closed walk `c[0] .. c[n-1] c[0]` that repeats no vertex, with `n >= 3`.
pub fn is_simple_cycle(g: &LabeledMultigraph, cycle: &[VertexId]) -> bool {
    let distinct: BTreeSet<&VertexId> = cycle.iter().collect();
    cycle.len() >= 3
        && distinct.len() == cycle.len()
        && (0..cycle.len()).all(|k| g.multiplicity(cycle[k], cycle[(k + 1) % cycle.len()]) > 0)
}

fn single_blob(g: &LabeledMultigraph) -> Outcome {
    let comps = blobs(g).map_err(err)?;
    let found: Vec<_> = comps.iter().filter(|c| c.is_blob).collect();
    if found.len() != 1 {
        return Err(format!("{} blobs", found.len()));
    }
    let inner: BTreeSet<VertexId> = g.vertices().filter(|v| g.degree(*v).is_ok_and(|d| d > 1)).collect();
    let blob: BTreeSet<VertexId> = found[0].vertices.iter().copied().collect();
    if blob != inner {
        return Err("blob differs from the set of non-leaf vertices".into());
    }
    Ok(format!("one blob with {} vertices", blob.len()))
}

fn check_blob(g: &LabeledMultigraph, r: usize, parity: Parity) -> Outcome {
    let blob = single_blob(g)?;
    let (w, cycle) = blob_cycle(g, r, parity).map_err(err)?;
    if !is_simple_cycle(g, &cycle) {
        return Err("four-caterpillar walk is not a simple cycle".into());
    }
    let reps: Vec<String> = w.iter().map(|w| w.to_string()).collect();
    Ok(format!("{blob}; cycle of length {} through {}", cycle.len(), reps.join(", ")))
}

/// Single-blob check plus the explicit cycle on `G(r, parity)`.
pub fn check_blob_cycle(r: usize, parity: Parity) -> Result<bool, ConstructError> {
    let g = build_g(r, parity)?;
    Ok(check_blob(&g, r, parity).is_ok())
}

/// The battery on `G(r, even)` and `G(r, odd)`.
pub fn check_g_graphs(r: usize, even: &LabeledMultigraph, odd: &LabeledMultigraph) -> Vec<CheckResult> {
    vec![
        run(name(r, "g.deck"), "the binary pair minus any leaf is equivalent before suppression", || {
            deck_pair(r, even, odd, delete_by_label, |a, b, i| g_witness_on(a, b, r, i))
        }),
        run(
            name(r, "g.u0_signature"),
            "the leaf distances of u_0 in the even graph occur at no odd vertex, before suppression",
            || u0_absent(r, even, odd, None),
        ),
        run(name(r, "g.not_equivalent"), "the binary pair is not equivalent before suppression", || {
            not_equivalent(even, odd)
        }),
        run(name(r, "g.blob.even"), "all non-leaf vertices of the even graph form one blob", || {
            check_blob(even, r, Parity::Even)
        }),
        run(name(r, "g.blob.odd"), "all non-leaf vertices of the odd graph form one blob", || {
            check_blob(odd, r, Parity::Odd)
        }),
    ]
}

pub fn check_g_pair(r: usize) -> Result<Vec<CheckResult>, ConstructError> {
    Ok(check_g_graphs(r, &build_g(r, Parity::Even)?, &build_g(r, Parity::Odd)?))
}

/// The battery on the suppressed pair, normally `N(r, even)` and `N(r, odd)`.
/// Graphs are taken unvalidated so that corrupted inputs can be checked.
pub fn check_n_graphs(r: usize, even: &LabeledMultigraph, odd: &LabeledMultigraph) -> Vec<CheckResult> {
    let labels = label_set(r);
    vec![
        run(name(r, "n.network"), "both suppressed graphs are binary networks on x1..xr", || {
            for (side, g) in [("even", even), ("odd", odd)] {
                let verdict = is_network(g, &labels).map_err(err)?;
                if let Some(v) = verdict.violation {
                    return Err(format!("{side}: {v}"));
                }
                if !is_binary(g) {
                    return Err(format!("{side}: not binary"));
                }
            }
            Ok(format!("{} and {} vertices, all of degree 1 or 3", even.vertex_count(), odd.vertex_count()))
        }),
        run(
            name(r, "n.u0_signature"),
            "the leaf distances of u_0 in the even network occur at no odd vertex",
            || u0_absent(r, even, odd, None),
        ),
        run(name(r, "n.not_equivalent"), "the binary networks are not equivalent", || {
            let sep = signature_separator(even, odd).ok_or("no signature separates the networks")?;
            not_equivalent(even, odd)?;
            Ok(format!("vertex {} has signature {}; search and canonical forms agree", sep.0, sep.1))
        }),
        run(name(r, "n.deck"), "the binary networks have equivalent decks", || {
            deck_pair(r, even, odd, remove_by_label, |a, b, i| g_witness_on(a, b, r, i))
        }),
        run(
            name(r, "n.certificate"),
            "the even network is not leaf-reconstructible, with the odd network as the other reconstruction",
            || {
                let n = Network::new(even.clone(), labels.clone()).map_err(err)?;
                let n2 = Network::new(odd.clone(), labels.clone()).map_err(err)?;
                let cert = certify_not_leaf_reconstructible(&n, &n2).map_err(err)?;
                Ok(format!("{} deck witnesses and a non-equivalence certificate", cert.witnesses.len()))
            },
        ),
        run(name(r, "n.excess"), "|E|-|V| agrees across parities and with the component count", || {
            let want = excess_by_components(r);
            let (a, b) = (even.excess(), odd.excess());
            if a != want || b != want {
                return Err(format!("even {a}, odd {b}, component count {want}"));
            }
            Ok(format!("|E|-|V| = {want}"))
        }),
    ]
}

pub fn check_n_pair(r: usize) -> Result<Vec<CheckResult>, ConstructError> {
    let even = build_n(r, Parity::Even)?.into_graph();
    let odd = build_n(r, Parity::Odd)?.into_graph();
    Ok(check_n_graphs(r, &even, &odd))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub r: usize,
    pub n_even: (usize, usize),
    pub n_odd: (usize, usize),
    pub excess_g_even: i64,
    pub excess_g_odd: i64,
    pub excess_n_even: i64,
    pub excess_n_odd: i64,
    pub component_count: i64,
    pub closing_formula: i64,
    /// Measured values agree with each other and with the component count.
    pub consistent: bool,
    pub matches_closing_formula: bool,
}

pub fn count_row(r: usize) -> Result<CountRow, ConstructError> {
    let (ge, go) = (build_g(r, Parity::Even)?, build_g(r, Parity::Odd)?);
    let (ne, no) = (build_n(r, Parity::Even)?, build_n(r, Parity::Odd)?);
    let (ne, no) = (ne.graph(), no.graph());
    let component_count = excess_by_components(r);
    let closing_formula = excess_closing_formula(r);
    let values = [ge.excess(), go.excess(), ne.excess(), no.excess()];
    Ok(CountRow {
        r,
        n_even: (ne.vertex_count(), ne.edge_count()),
        n_odd: (no.vertex_count(), no.edge_count()),
        excess_g_even: values[0],
        excess_g_odd: values[1],
        excess_n_even: values[2],
        excess_n_odd: values[3],
        component_count,
        closing_formula,
        consistent: values.iter().all(|v| *v == component_count),
        matches_closing_formula: values[2] == closing_formula,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeControl {
    pub r: usize,
    /// Edge `{a, b}` replaced by `{a, c}`.
    pub removed: (VertexId, VertexId),
    pub added: (VertexId, VertexId),
    pub caught_by: Vec<String>,
}

/// `count` random single-edge rewirings of `N(r, even)`, each run through
/// the suppressed-pair battery against the unmodified odd network.
pub fn negative_controls(r: usize, count: usize, seed: u64) -> Result<Vec<NegativeControl>, ConstructError> {
    let even = build_n(r, Parity::Even)?.into_graph();
    let odd = build_n(r, Parity::Odd)?.into_graph();
    let vertices: Vec<VertexId> = even.vertices().collect();
    let edges = even.edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let &(p, q) = edges.choose(&mut rng).expect("network has edges");
        let (a, b) = if rng.gen_bool(0.5) { (p, q) } else { (q, p) };
        let c = loop {
            let c = *vertices.choose(&mut rng).expect("network has vertices");
            if c != a && c != b {
                break c;
            }
        };
        let mutated = even.rewire_edge(a, b, c)?;
        let caught_by = check_n_graphs(r, &mutated, &odd)
            .into_iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        out.push(NegativeControl {
            r,
            removed: (a, b),
            added: (a, c),
            caught_by,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub r_min: usize,
    pub r_max: usize,
    pub seed: u64,
    /// Ordered by name.
    pub checks: Vec<CheckResult>,
    pub counts: Vec<CountRow>,
    pub negative_controls: Vec<NegativeControl>,
    /// Observations that do not affect `passed`.
    pub notes: Vec<String>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn battery(r: usize) -> Result<(Vec<CheckResult>, CountRow), ConstructError> {
    let mut checks = check_m_pair(r)?;
    checks.extend(check_g_pair(r)?);
    checks.extend(check_n_pair(r)?);
    let row = count_row(r)?;
    checks.push(run(name(r, "counts"), "measured |E|-|V| is the same in G and N for both parities", || {
        if row.consistent {
            Ok(format!("{}", row.component_count))
        } else {
            Err(format!("{row:?}"))
        }
    }));
    Ok((checks, row))
}

/// Every battery for `r_min..=r_max`, one thread per `r`. Negative controls
/// run on the smallest `r` when `negative_controls > 0`.
pub fn run_matrix(
    r_min: usize,
    r_max: usize,
    negative_controls_count: usize,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    if r_min < MIN_R || r_min > r_max || r_max > MAX_R {
        return Err(VerifyError::BadRange(r_min, r_max));
    }
    let results: Vec<Result<(Vec<CheckResult>, CountRow), ConstructError>> = std::thread::scope(|s| {
        let handles: Vec<_> = (r_min..=r_max).map(|r| s.spawn(move || battery(r))).collect();
        handles.into_iter().map(|h| h.join().expect("battery thread panicked")).collect()
    });
    let mut checks = Vec::new();
    let mut counts = Vec::new();
    for res in results {
        let (c, row) = res?;
        checks.extend(c);
        counts.push(row);
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let controls = if negative_controls_count > 0 {
        negative_controls(r_min, negative_controls_count, seed)?
    } else {
        Vec::new()
    };
    let mut notes = Vec::new();
    for row in &counts {
        if !row.matches_closing_formula {
            notes.push(format!(
                "r = {}: measured |E|-|V| = {}, the closed form (2^(r-1)-1)(2r-1)-1 gives {}",
                row.r, row.excess_n_even, row.closing_formula
            ));
        }
    }
    let uncaught = controls.iter().filter(|c| c.caught_by.is_empty()).count();
    if !controls.is_empty() {
        notes.push(format!(
            "{} of {} edge rewirings caught",
            controls.len() - uncaught,
            controls.len()
        ));
    }
    let passed = checks.iter().all(|c| c.passed) && uncaught == 0;
    Ok(VerificationReport {
        r_min,
        r_max,
        seed,
        checks,
        counts,
        negative_controls: controls,
        notes,
        passed,
    })
}
