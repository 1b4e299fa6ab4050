//! Linear detector noise: each party's outcome passes through a binary
//! channel, chosen by that party's own setting, that drops a click with
//! probability 1 − η and adds a dark count to a no-click with probability ξ.

use serde::{Deserialize, Serialize};

use crate::behavior::{Behavior, Outcome};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub eta_a: [f64; 2],
    pub eta_b: [f64; 2],
    pub xi_a: [f64; 2],
    pub xi_b: [f64; 2],
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self::ideal()
    }
}

impl NoiseParams {
    pub fn ideal() -> Self {
        Self::symmetric(1.0, 0.0)
    }

    /// Identical, setting-independent detectors.
    pub fn symmetric(eta: f64, xi: f64) -> Self {
        Self {
            eta_a: [eta; 2],
            eta_b: [eta; 2],
            xi_a: [xi; 2],
            xi_b: [xi; 2],
        }
    }

    /// Per-party efficiencies without dark counts.
    pub fn per_party(eta_a: f64, eta_b: f64) -> Self {
        Self {
            eta_a: [eta_a; 2],
            eta_b: [eta_b; 2],
            xi_a: [0.0; 2],
            xi_b: [0.0; 2],
        }
    }

    fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        self.eta_a
            .iter()
            .chain(&self.eta_b)
            .chain(&self.xi_a)
            .chain(&self.xi_b)
            .copied()
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries().all(|v| (0.0..=1.0).contains(&v)) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "noise parameters outside [0, 1]: {self:?}"
            )))
        }
    }

    fn setting_independent(&self) -> bool {
        self.eta_a[0] == self.eta_a[1]
            && self.eta_b[0] == self.eta_b[1]
            && self.xi_a[0] == self.xi_a[1]
            && self.xi_b[0] == self.xi_b[1]
    }

    /// Transition probability `in → out` for Alice's detector at setting x.
    fn alice(&self, x: usize, out: Outcome, inp: Outcome) -> f64 {
        transition(self.eta_a[x], self.xi_a[x], out, inp)
    }

    fn bob(&self, y: usize, out: Outcome, inp: Outcome) -> f64 {
        transition(self.eta_b[y], self.xi_b[y], out, inp)
    }
}

fn transition(eta: f64, xi: f64, out: Outcome, inp: Outcome) -> f64 {
    use Outcome::{Plus, Zero};
    match (inp, out) {
        (Plus, Plus) => eta,
        (Plus, Zero) => 1.0 - eta,
        (Zero, Plus) => xi,
        (Zero, Zero) => 1.0 - xi,
    }
}

/// Output behavior of the detector channel applied to `b`.
pub fn apply_detection_noise(b: &Behavior, n: &NoiseParams) -> Behavior {
    Behavior::from_fn(|a_out, b_out, x, y| {
        let mut q = 0.0;
        for a_in in Outcome::ALL {
            for b_in in Outcome::ALL {
                q += n.alice(x, a_out, a_in) * n.bob(y, b_out, b_in) * b.prob(a_in, b_in, x, y);
            }
        }
        q
    })
}

/// The six linear combinations of probabilities that make the noisy
/// Eberhard value a polynomial in (η, ξ):
/// `E = K η_A η_B − L′ η_A − L″ η_B` without dark counts and
/// `E = K η² − L η + M ξ η − N ξ + O ξ²` for identical detectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EberhardCoefficients {
    pub k: f64,
    pub lp: f64,
    pub lpp: f64,
    pub m: f64,
    pub n: f64,
    pub o: f64,
    #[serde(skip)]
    source: Behavior,
}

impl EberhardCoefficients {
    /// L = L′ + L″.
    pub fn l(&self) -> f64 {
        self.lp + self.lpp
    }

    /// K η² − L η + M ξ η − N ξ + O ξ².
    pub fn symmetric_value(&self, eta: f64, xi: f64) -> f64 {
        self.k * eta * eta - self.l() * eta + self.m * xi * eta - self.n * xi + self.o * xi * xi
    }

    pub fn source(&self) -> &Behavior {
        &self.source
    }
}

pub fn eberhard_coefficients(b: &Behavior) -> EberhardCoefficients {
    use Outcome::{Plus as P, Zero as Z};
    let pr = |a, bb, x, y| b.prob(a, bb, x, y);
    EberhardCoefficients {
        k: pr(P, P, 0, 0) - pr(P, P, 1, 1) + pr(P, P, 0, 1) + pr(P, P, 1, 0),
        lp: pr(P, Z, 0, 1) + pr(P, P, 0, 1),
        lpp: pr(Z, P, 1, 0) + pr(P, P, 1, 0),
        m: pr(Z, P, 0, 0)
            + pr(P, Z, 0, 0)
            + pr(Z, P, 0, 1)
            + pr(P, Z, 1, 0)
            + pr(P, Z, 0, 1)
            + pr(Z, P, 1, 0)
            - pr(Z, P, 1, 1)
            - pr(P, Z, 1, 1),
        n: pr(Z, Z, 0, 1) + pr(Z, Z, 1, 0) + pr(Z, P, 0, 1) + pr(P, Z, 1, 0),
        o: pr(Z, Z, 0, 0) + pr(Z, Z, 0, 1) + pr(Z, Z, 1, 0) - pr(Z, Z, 1, 1),
        source: b.clone(),
    }
}

/// Eberhard value observed after the detector channel.
///
/// Setting-independent parameters use the closed polynomial forms; anything
/// else falls back to expanding the channel on the source behavior.
pub fn observed_eberhard(c: &EberhardCoefficients, n: &NoiseParams) -> f64 {
    let no_dark = n.xi_a == [0.0; 2] && n.xi_b == [0.0; 2];
    if n.setting_independent() && no_dark {
        let (ea, eb) = (n.eta_a[0], n.eta_b[0]);
        return c.k * ea * eb - c.lp * ea - c.lpp * eb;
    }
    if n.setting_independent() && n.eta_a == n.eta_b && n.xi_a == n.xi_b {
        return c.symmetric_value(n.eta_a[0], n.xi_a[0]);
    }
    apply_detection_noise(&c.source, n).eberhard_value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{ld_distribution, pr_box, LdAssignment};
    use approx::assert_abs_diff_eq;
    use Outcome::Zero as Z;

    #[test]
    fn ideal_is_identity() {
        let b = pr_box();
        assert_eq!(apply_detection_noise(&b, &NoiseParams::ideal()).p, b.p);
    }

    #[test]
    fn pr_box_coefficients() {
        let c = eberhard_coefficients(&pr_box());
        assert_eq!(c.k, 1.5);
        assert_eq!(c.l(), 1.0);
        assert_abs_diff_eq!(
            observed_eberhard(&c, &NoiseParams::symmetric(2.0 / 3.0, 0.0)),
            0.0,
            epsilon = 1e-15
        );
        assert_eq!(observed_eberhard(&c, &NoiseParams::ideal()), 0.5);
    }

    #[test]
    fn all_zero_point_has_no_k_or_l() {
        let c = eberhard_coefficients(&ld_distribution(LdAssignment::new(Z, Z, Z, Z)));
        assert_eq!(c.k, 0.0);
        assert_eq!(c.l(), 0.0);
    }

    #[test]
    fn symmetric_polynomials_match_channel() {
        let b = pr_box();
        let c = eberhard_coefficients(&b);
        for &(eta, xi) in &[(0.8, 0.0), (0.9, 0.01), (0.7, 0.2), (1.0, 0.05)] {
            let n = NoiseParams::symmetric(eta, xi);
            let direct = apply_detection_noise(&b, &n).eberhard_value();
            assert_abs_diff_eq!(c.symmetric_value(eta, xi), direct, epsilon = 1e-14);
            if xi == 0.0 {
                assert_abs_diff_eq!(c.k * eta * eta - c.l() * eta, direct, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn asymmetric_efficiencies() {
        let b = pr_box();
        let c = eberhard_coefficients(&b);
        let n = NoiseParams::per_party(0.9, 0.75);
        let direct = apply_detection_noise(&b, &n).eberhard_value();
        assert_abs_diff_eq!(observed_eberhard(&c, &n), direct, epsilon = 1e-14);
        assert_abs_diff_eq!(
            c.k * 0.9 * 0.75 - c.lp * 0.9 - c.lpp * 0.75,
            direct,
            epsilon = 1e-14
        );
    }

    #[test]
    fn out_of_range_params_rejected() {
        let mut n = NoiseParams::symmetric(0.9, 0.0);
        assert!(n.validate().is_ok());
        n.xi_b[1] = 1.5;
        assert!(n.validate().is_err());
    }
}
