use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("behavior is signaling: max marginal violation {max_violation:e}")]
    MarginalInconsistency { max_violation: f64 },

    #[error("observed violation {e_obs} exceeds the achievable maximum {achievable} at xi = {xi}")]
    Infeasible {
        e_obs: f64,
        xi: f64,
        achievable: f64,
    },

    #[error(
        "SDP solver did not converge after {iterations} iterations (primal {primal}, dual {dual})"
    )]
    SolverNonConvergence {
        iterations: usize,
        primal: f64,
        dual: f64,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
