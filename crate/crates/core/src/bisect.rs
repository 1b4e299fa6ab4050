//! Bisection for the smallest feasible efficiency.
//!
//! Both the quantum-realization search and the NPA relaxation rely on the
//! feasible set of η being upper-closed, so a single threshold separates
//! infeasible from feasible efficiencies.

use crate::error::{Error, Result};

/// Largest Eberhard value reachable by a quantum behavior, (√2 − 1)/2.
pub const QUANTUM_MAX_EBERHARD: f64 = 0.207_106_781_186_547_5;

/// Eberhard's efficiency threshold below which no violation is possible.
pub const EBERHARD_THRESHOLD: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

pub(crate) fn check_request(e_obs: f64, tol: f64) -> Result<()> {
    if !(e_obs > 0.0) {
        return Err(Error::Domain(format!(
            "observed violation must be positive, got {e_obs}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Shrinks `[lower, upper]` until `upper − lower ≤ tol`, moving `upper` down
/// whenever `feasible(mid)` holds. `upper` must already be feasible.
pub fn bisect_feasible(
    lower: f64,
    upper: f64,
    tol: f64,
    mut feasible: impl FnMut(f64) -> Result<bool>,
) -> Result<Bracket> {
    let (mut lo, mut hi) = (lower, upper);
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(Bracket {
        lower: lo,
        upper: hi,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_threshold() {
        let b = bisect_feasible(EBERHARD_THRESHOLD, 1.0, 1e-9, |x| Ok(x >= 0.8)).unwrap();
        assert!(b.upper >= 0.8 && b.upper - 0.8 <= 1e-9);
        assert!(b.lower < 0.8);
    }

    #[test]
    fn quantum_max_constant() {
        assert!((QUANTUM_MAX_EBERHARD - (2f64.sqrt() - 1.0) / 2.0).abs() < 1e-16);
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(check_request(0.0, 1e-7).is_err());
        assert!(check_request(0.01, 0.0).is_err());
        assert!(check_request(f64::NAN, 1e-7).is_err());
    }
}
