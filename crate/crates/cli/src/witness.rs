//! Self-contained witness documents: each carries its group, so `verify`
//! needs nothing else.

use folner_core::folner::FolnerWitness;
use folner_core::metric::MetricWitness;
use folner_core::reiter::ReiterFunction;
use folner_core::{ElementCode, GroupDescriptor};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A `1/n`-Følner set for `d`.
    Folner {
        group: GroupDescriptor,
        d: Vec<ElementCode>,
        #[serde(flatten)]
        witness: FolnerWitness,
    },
    /// A characteristic Reiter function with `ℓ¹` ratios at most `1/n`.
    Reiter {
        group: GroupDescriptor,
        n: u64,
        d: Vec<ElementCode>,
        #[serde(flatten)]
        function: ReiterFunction,
    },
    /// A metric-Følner set with its distance assignment.
    MetricFolner {
        group: GroupDescriptor,
        #[serde(flatten)]
        witness: MetricWitness,
    },
}
