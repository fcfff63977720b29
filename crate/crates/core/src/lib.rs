//! Pattern occurrence in partially ordered sets.
//!
//! Posets are stored as their strict, transitively closed relation. The crate
//! counts and enumerates occurrences of one poset in another in every flavor
//! (induced or not, injective or not, labeled or up to automorphism), counts
//! linear extensions through the modular decomposition, counts automorphisms
//! of two-dimensional posets, and builds and checks the 3-SAT gadget that
//! turns satisfying assignments into permutation pattern matches.

pub mod cli;
pub mod combin;
pub mod decomp;
pub mod error;
pub mod generate;
pub mod lecount;
pub mod occur;
pub mod par;
pub mod poset;
pub mod sat;

pub use decomp::{dilworth, gallai_tree, intrinsic_width, width, ChainDecomposition, GallaiTree, NodeKind};
pub use error::{Error, Result};
pub use lecount::{count_automorphisms_dim2, count_linear_extensions, ExtensionCount};
pub use occur::{count_occurrences, enumerate_occurrences, OccurrenceCount, PermMatcher};
pub use par::Strategy;
pub use poset::{OccurrenceFlavor, OccurrenceMap, Permutation, Poset};
