//! Tools for turning a multiple sequence alignment into an indexable
//! elastic founder graph.
//!
//! The pipeline has three stages that can be run separately or back to back:
//!
//! * **Segmentation**: partition the alignment columns into consecutive
//!   segments so that the induced graph admits exact pattern matching
//!   ([`validity`], [`segmentation`]).
//! * **Graph construction**: build the founder graph from a segmentation and
//!   serialize it ([`efg`]).
//! * **Indexing and matching**: build one of three exact-match indexes over
//!   the graph ([`index`]), or convert the graph to a Wheeler automaton
//!   ([`wheeler`]).
//!
//! [`hardness`] contains an online matcher that serves as the reference
//! oracle for the indexes, together with a generator for the orthogonal
//! vectors reduction that explains why indexing arbitrary segmentations
//! cannot be done in subquadratic time.

pub mod efg;
pub mod hardness;
pub mod index;
pub mod msa;
pub mod segmentation;
pub mod stringds;
pub mod validity;
pub mod wheeler;

pub use efg::Efg;
pub use index::{IndexKind, OccursIndex, Witness};
pub use msa::Msa;
pub use segmentation::Segmentation;
pub use validity::{ValidityMode, ValidityTable};
