//! Two-qubit realizations of (2,2,2) behaviors and the search for the
//! smallest efficiency any of them needs to show a given violation.

mod realization;
mod search;

pub use realization::{born_rule_oracle, realization_probabilities, QuantumRealization};
pub use search::{
    max_noisy_eberhard, min_efficiency_qr, noisy_eberhard, BisectionResult, SearchConfig,
    SearchOutcome,
};
