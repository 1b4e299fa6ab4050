//! NPA moment-matrix relaxations of the (2,2,2) quantum set.

mod functional;
mod relax;
mod structure;
mod word;

pub use functional::{
    correlator_moments, eberhard_coefficient_functionals, probability_functional,
    EberhardFunctionals, LinearFunctional,
};
pub use relax::{
    export_sdp, max_noisy_eberhard_sdp, maximize_functional, min_efficiency_npa,
    min_efficiency_npa_with, realization_moment_matrix, sdp_interchange, NpaBound, NpaMaximum,
    NpaStep, FEASIBILITY_SLACK, PRIMAL_RESIDUAL_SLACK, SDP_TOLERANCE,
};
pub use structure::{MomentStructure, NpaLevel};
pub use word::{Letter, OperatorWord};
