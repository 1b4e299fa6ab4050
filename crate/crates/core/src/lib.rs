//! Device-independent bounds on detector efficiency in (2,2,2) Bell tests.
//!
//! Given an observed Eberhard violation (equivalently a CHSH value), the crate
//! computes
//!
//! * an upper bound on the minimum efficiency by searching explicit two-qubit
//!   realizations ([`quantum::min_efficiency_qr`]),
//! * a certified lower bound from the NPA hierarchy ([`npa::min_efficiency_npa`]),
//! * a closed-form lower bound from Tsirelson-respecting no-signaling
//!   behaviors ([`analytic::eta_ns`]),
//!
//! with optional dark counts in the detector model.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod behavior;
pub mod bisect;
pub mod error;
pub mod noise;
pub mod npa;
pub mod polytope;
pub mod quantum;
pub mod sdp;
pub mod validate;

pub use behavior::{eberhard_from_chsh, Behavior, Correlators, NoSignalingReport, Outcome};
pub use bisect::{EBERHARD_THRESHOLD, QUANTUM_MAX_EBERHARD};
pub use error::{Error, Result};
pub use noise::{
    apply_detection_noise, eberhard_coefficients, observed_eberhard, EberhardCoefficients,
    NoiseParams,
};
pub use polytope::{ld_distribution, ns_mixture, pr_box, LdAssignment, NsDecomposition};
