//! Lexicographic shellability toolkit for finite bounded posets.
//!
//! The crate builds and validates posets, enumerates chains and rooted
//! intervals, verifies chain-edge labelings (EL, CL, EC, CC, TCL,
//! self-consistent), constructs labelings from chain orders, checks recursive
//! first atom sets and the chain orders they induce, searches for recursive
//! atom orderings, and verifies shelling orders of order complexes.

pub mod chain;
pub mod corpus;
pub mod error;
pub mod io;
pub mod labeling;
pub mod poset;
pub mod rao;
pub mod relabel;
pub mod rfas;
pub mod shelling;

pub use chain::{Chain, Limits, RootedInterval};
pub use error::{Error, Result};
pub use labeling::{classify, CeLabeling, LabelSequence, LabelingReport, Property};
pub use poset::Poset;
pub use relabel::{relabel_from_order, MaxChainOrder};
pub use rfas::{check_rfas, FirstAtomSet};
pub use shelling::OrderComplex;
