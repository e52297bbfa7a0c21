//! Leaf decks of unrooted phylogenetic networks.
//!
//! The crate builds, for every `r >= 4`, two networks on `{x1, ..., xr}` whose
//! leaf-deleted subnetworks are pairwise equivalent while the networks
//! themselves are not, and checks every step of that claim mechanically:
//!
//! * [`seq`]: binary sequences, parity classes, flips and masks.
//! * [`multigraph`]: labelled multigraphs, suppression, bridges, blobs,
//!   network validation and distances.
//! * [`iso`]: label-preserving multigraph equivalence with witnesses and a
//!   canonical form, plus a brute-force oracle.
//! * [`construct`]: the parity graphs `M`, `G`, `N` and their building blocks,
//!   together with explicit isomorphism witnesses.
//! * [`deck`]: X-decks and reconstruction predicates.
//! * [`verify`]: the full check battery and its JSON report.

pub mod construct;
pub mod deck;
pub mod io;
pub mod iso;
pub mod multigraph;
pub mod seq;
pub mod verify;

pub use multigraph::{LabeledMultigraph, Network, VertexId, VertexTag};
pub use seq::{BinarySeq, Parity};
