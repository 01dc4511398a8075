//! Covering numbers of monolithic groups with alternating socle.

pub mod bitset;
pub mod certificate;
pub mod covers;
pub mod error;
pub mod group;
pub mod inequalities;
pub mod monolith;
pub mod perm;
pub mod subgroups;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use perm::{CycleType, Permutation};
