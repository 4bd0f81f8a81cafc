//! Følner sets, Reiter functions and matching-based amenability on
//! computably presented groups.
//!
//! Group elements are named by natural numbers through a fixed bijective
//! coding of the free group on generators `g0, g1, …` (see [`word`]). A
//! [`GroupDescriptor`] maps each generator into a concrete group, which turns
//! every code into an element.

pub mod error;
pub mod folner;
pub mod group;
pub mod means;
pub mod metric;
pub mod pairing;
pub mod rational;
pub mod reiter;
pub mod sequences;
pub mod word;
pub mod wp;

pub use error::{Error, Result};
pub use group::{CanonicalElement, EqualityEnumerator, GroupDescriptor, InjectiveView, ZooEnumerator};
pub use rational::Q;
pub use word::{decode_word, encode_word, inv, star, ElementCode, FreeWord, Letter};
