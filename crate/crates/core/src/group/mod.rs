//! Numbered groups: concrete families, their equality enumerators and
//! explicit Følner constructions.

pub mod construct;
pub mod enumerator;
pub mod injective;
pub mod zoo;

pub use enumerator::{equality_pairs, EqualityEnumerator, EqualityPairs, ZooEnumerator};
pub use injective::InjectiveView;
pub use zoo::{CanonicalElement, GroupDescriptor, MetricKind};
