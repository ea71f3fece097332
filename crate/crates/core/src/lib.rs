//! Lexicographic cross-intersecting families.
//!
//! Sets are ascending `usize` vectors over `[n]`; counts are generic over
//! [`count::CountScalar`], with [`Count`] exact and [`FastCount`] checked.

pub mod count;
pub mod error;
pub mod families;
pub mod lexset;
pub mod objective;
pub mod partner;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use families::{classify, Params, Regime, SystemIds};
pub use lexset::KSet;

/// Exact counts.
pub type Count = num_bigint::BigUint;
/// Machine counts; arithmetic that would overflow reports [`Error::Overflow`].
pub type FastCount = u64;

pub type ExactInstance = families::Instance<Count>;
pub type FastInstance = families::Instance<FastCount>;
