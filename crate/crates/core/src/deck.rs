//! X-decks and the reconstruction predicates built on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::iso::{are_equivalent, canonical_form, IsoWitness};
use crate::multigraph::{all_distance_signatures, DistanceSignature, GraphError, LabeledMultigraph, Network, VertexId};

/// Removal result `N_x` for every label `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deck {
    pub entries: BTreeMap<String, LabeledMultigraph>,
}

impl Deck {
    pub fn get(&self, label: &str) -> Option<&LabeledMultigraph> {
        self.entries.get(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.entries.keys().map(String::as_str)
    }
}

pub fn x_deck(n: &Network) -> Result<Deck, GraphError> {
    let entries = n
        .label_set()
        .iter()
        .map(|x| Ok((x.clone(), n.graph().remove_label(x)?)))
        .collect::<Result<_, GraphError>>()?;
    Ok(Deck { entries })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeckError {
    #[error("label sets differ: {left:?} vs {right:?}")]
    LabelSetsDiffer {
        left: BTreeSet<String>,
        right: BTreeSet<String>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn same_labels(a: &Network, b: &Network) -> Result<(), DeckError> {
    if a.label_set() != b.label_set() {
        return Err(DeckError::LabelSetsDiffer {
            left: a.label_set().clone(),
            right: b.label_set().clone(),
        });
    }
    Ok(())
}

/// Per-label witnesses `N'_x -> N_x`, or the first label whose entries are
/// not equivalent.
pub fn deck_witnesses(n2: &Network, n: &Network) -> Result<Result<BTreeMap<String, IsoWitness>, String>, DeckError> {
    same_labels(n2, n)?;
    let mut out = BTreeMap::new();
    for x in n.label_set() {
        let a = n2.graph().remove_label(x)?;
        let b = n.graph().remove_label(x)?;
        match are_equivalent(&a, &b) {
            Some(w) => {
                out.insert(x.clone(), w);
            }
            None => return Ok(Err(x.clone())),
        }
    }
    Ok(Ok(out))
}

/// Whether `n2` is an X-reconstruction of `n`: `N'_x ~ N_x` for every `x`.
pub fn is_reconstruction(n2: &Network, n: &Network) -> Result<bool, DeckError> {
    Ok(deck_witnesses(n2, n)?.is_ok())
}

/// Why two networks are known to differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonEquivalenceEvidence {
    /// A vertex of one network whose leaf distances occur at no vertex of
    /// the other.
    SignatureSeparator {
        /// `"left"` or `"right"`.
        side: String,
        vertex: VertexId,
        signature: BTreeMap<String, Option<usize>>,
    },
    /// Distance signatures coincide as sets but canonical forms differ.
    CanonicalFormMismatch,
}

/// A vertex of `a` whose signature no vertex of `b` has.
pub fn signature_separator(a: &LabeledMultigraph, b: &LabeledMultigraph) -> Option<(VertexId, DistanceSignature)> {
    let present: BTreeSet<DistanceSignature> = all_distance_signatures(b).into_values().collect();
    all_distance_signatures(a)
        .into_iter()
        .find(|(_, s)| !present.contains(s))
}

/// Evidence that `a` and `b` are not equivalent, if they are not.
pub fn non_equivalence_evidence(a: &LabeledMultigraph, b: &LabeledMultigraph) -> Option<NonEquivalenceEvidence> {
    let found = signature_separator(a, b)
        .map(|s| ("left", s))
        .or_else(|| signature_separator(b, a).map(|s| ("right", s)));
    if let Some((side, (vertex, signature))) = found {
        return Some(NonEquivalenceEvidence::SignatureSeparator {
            side: side.to_string(),
            vertex,
            signature: signature.0,
        });
    }
    (canonical_form(a) != canonical_form(b)).then_some(NonEquivalenceEvidence::CanonicalFormMismatch)
}

/// Proof that `N` is not leaf-reconstructible: a non-equivalent `N'` with
/// the same deck.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// `N'_x -> N_x` for every label.
    pub witnesses: BTreeMap<String, IsoWitness>,
    pub evidence: NonEquivalenceEvidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("label sets differ")]
    LabelSetsDiffer,
    #[error("deck entries for {0} are not equivalent")]
    DeckMismatch(String),
    #[error("networks are equivalent")]
    NetworksEquivalent,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn certify_not_leaf_reconstructible(n: &Network, n2: &Network) -> Result<Certificate, CertifyError> {
    let witnesses = match deck_witnesses(n2, n) {
        Err(DeckError::LabelSetsDiffer { .. }) => return Err(CertifyError::LabelSetsDiffer),
        Err(DeckError::Graph(e)) => return Err(e.into()),
        Ok(Err(x)) => return Err(CertifyError::DeckMismatch(x)),
        Ok(Ok(w)) => w,
    };
    let evidence = non_equivalence_evidence(n.graph(), n2.graph()).ok_or(CertifyError::NetworksEquivalent)?;
    Ok(Certificate { witnesses, evidence })
}
