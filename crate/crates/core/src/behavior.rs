//! Behaviors of the (2,2,2) scenario: sixteen conditional probabilities
//! P(ab|xy), their correlator representation and the CHSH / Eberhard
//! functionals.
//!
//! Outcomes are `Plus` (a click) and `Zero` (no click). Wherever a sign is
//! needed, `Plus` maps to +1 and `Zero` to -1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for range and normalization checks.
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Tolerance for the no-signaling equalities.
pub const NO_SIGNALING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Plus,
    Zero,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Plus, Outcome::Zero];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Zero => -1.0,
        }
    }

    fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Zero => 1,
        }
    }
}

/// Row index of setting pair (x, y): x0y0, x0y1, x1y0, x1y1.
#[inline]
pub fn setting_index(x: usize, y: usize) -> usize {
    debug_assert!(x < 2 && y < 2);
    2 * x + y
}

/// Column index of outcome pair (a, b): ++, +0, 0+, 00.
#[inline]
pub fn outcome_index(a: Outcome, b: Outcome) -> usize {
    2 * a.index() + b.index()
}

/// A bipartite box with binary inputs and outputs.
///
/// `p[setting_index(x, y)][outcome_index(a, b)] = P(ab|xy)`, which is also the
/// row-major layout of the JSON form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Behavior {
    pub p: [[f64; 4]; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Marginal and joint expectation values of a no-signaling behavior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlators {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub ab: [[f64; 2]; 2],
}

/// Outcome of a no-signaling check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoSignalingReport {
    /// Largest absolute violation over the eight marginal equalities.
    pub max_violation: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Behavior {
    pub fn new(p: [[f64; 4]; 4]) -> Self {
        Self { p, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The behavior with every entry equal to 1/4.
    pub fn uniform() -> Self {
        Self::new([[0.25; 4]; 4])
    }

    /// Builds a behavior from a closure `(a, b, x, y) -> P(ab|xy)`.
    pub fn from_fn(mut f: impl FnMut(Outcome, Outcome, usize, usize) -> f64) -> Self {
        let mut p = [[0.0; 4]; 4];
        for x in 0..2 {
            for y in 0..2 {
                for a in Outcome::ALL {
                    for b in Outcome::ALL {
                        p[setting_index(x, y)][outcome_index(a, b)] = f(a, b, x, y);
                    }
                }
            }
        }
        Self::new(p)
    }

    #[inline]
    pub fn prob(&self, a: Outcome, b: Outcome, x: usize, y: usize) -> f64 {
        self.p[setting_index(x, y)][outcome_index(a, b)]
    }

    /// Alice's marginal P(a|x) computed with Bob's setting y.
    pub fn alice_marginal(&self, a: Outcome, x: usize, y: usize) -> f64 {
        Outcome::ALL.iter().map(|&b| self.prob(a, b, x, y)).sum()
    }

    /// Bob's marginal P(b|y) computed with Alice's setting x.
    pub fn bob_marginal(&self, b: Outcome, x: usize, y: usize) -> f64 {
        Outcome::ALL.iter().map(|&a| self.prob(a, b, x, y)).sum()
    }

    /// Largest deviation of any entry from [0, 1] or of any row sum from 1.
    pub fn structural_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.p {
            for &v in row {
                worst = worst.max(-v).max(v - 1.0);
            }
            worst = worst.max((row.iter().sum::<f64>() - 1.0).abs());
        }
        worst
    }

    /// Entries in [0, 1] and rows normalized, both within [`STRUCTURAL_TOL`].
    pub fn is_valid(&self) -> bool {
        self.structural_error() <= STRUCTURAL_TOL
    }

    pub fn validate(&self) -> Result<()> {
        let err = self.structural_error();
        if err > STRUCTURAL_TOL {
            return Err(Error::Domain(format!(
                "behavior is not a valid probability table (error {err:e})"
            )));
        }
        Ok(())
    }

    pub fn check_no_signaling(&self, tol: f64) -> NoSignalingReport {
        let mut worst: f64 = 0.0;
        for o in Outcome::ALL {
            for x in 0..2 {
                worst =
                    worst.max((self.alice_marginal(o, x, 0) - self.alice_marginal(o, x, 1)).abs());
            }
            for y in 0..2 {
                worst = worst.max((self.bob_marginal(o, 0, y) - self.bob_marginal(o, 1, y)).abs());
            }
        }
        NoSignalingReport {
            max_violation: worst,
            tol,
            passed: worst <= tol,
        }
    }

    /// Correlators of a no-signaling behavior.
    pub fn correlators(&self) -> Result<Correlators> {
        let report = self.check_no_signaling(NO_SIGNALING_TOL);
        if !report.passed {
            return Err(Error::MarginalInconsistency {
                max_violation: report.max_violation,
            });
        }
        let mut c = Correlators {
            a: [0.0; 2],
            b: [0.0; 2],
            ab: [[0.0; 2]; 2],
        };
        for x in 0..2 {
            c.a[x] = Outcome::ALL
                .iter()
                .map(|&o| o.sign() * self.alice_marginal(o, x, 0))
                .sum();
        }
        for y in 0..2 {
            c.b[y] = Outcome::ALL
                .iter()
                .map(|&o| o.sign() * self.bob_marginal(o, 0, y))
                .sum();
        }
        for x in 0..2 {
            for y in 0..2 {
                let mut s = 0.0;
                for a in Outcome::ALL {
                    for b in Outcome::ALL {
                        s += a.sign() * b.sign() * self.prob(a, b, x, y);
                    }
                }
                c.ab[x][y] = s;
            }
        }
        Ok(c)
    }

    /// Inverts [`Behavior::correlators`]. The result is not checked; call
    /// [`Behavior::is_valid`] to detect negative reconstructed entries.
    pub fn from_correlators(c: &Correlators) -> Self {
        Self::from_fn(|a, b, x, y| {
            0.25 * (1.0 + a.sign() * c.a[x] + b.sign() * c.b[y] + a.sign() * b.sign() * c.ab[x][y])
        })
    }

    /// β = ⟨A0B0⟩ + ⟨A0B1⟩ + ⟨A1B0⟩ − ⟨A1B1⟩.
    pub fn chsh_value(&self) -> Result<f64> {
        Ok(self.correlators()?.chsh())
    }

    /// P(++|x0y0) − P(+0|x0y1) − P(0+|x1y0) − P(++|x1y1). Defined for any
    /// table, signaling or not.
    pub fn eberhard_value(&self) -> f64 {
        use Outcome::{Plus, Zero};
        self.prob(Plus, Plus, 0, 0)
            - self.prob(Plus, Zero, 0, 1)
            - self.prob(Zero, Plus, 1, 0)
            - self.prob(Plus, Plus, 1, 1)
    }

    /// Convex combination `Σ w_i b_i`.
    pub fn mixture<'a>(parts: impl IntoIterator<Item = (f64, &'a Behavior)>) -> Self {
        let mut p = [[0.0; 4]; 4];
        for (w, b) in parts {
            for (row, src) in p.iter_mut().zip(&b.p) {
                for (v, s) in row.iter_mut().zip(src) {
                    *v += w * s;
                }
            }
        }
        Self::new(p)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl Correlators {
    pub fn chsh(&self) -> f64 {
        self.ab[0][0] + self.ab[0][1] + self.ab[1][0] - self.ab[1][1]
    }
}

/// Eberhard value of a no-signaling behavior with CHSH value `beta`.
pub fn eberhard_from_chsh(beta: f64) -> f64 {
    beta / 4.0 - 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::pr_box;
    use approx::assert_abs_diff_eq;
    use Outcome::{Plus, Zero};

    #[test]
    fn pr_box_correlators() {
        let c = pr_box().correlators().unwrap();
        assert_eq!(c.a, [0.0, 0.0]);
        assert_eq!(c.b, [0.0, 0.0]);
        assert_eq!(c.ab, [[1.0, 1.0], [1.0, -1.0]]);
        assert_eq!(c.chsh(), 4.0);
        assert_eq!(pr_box().eberhard_value(), 0.5);
    }

    #[test]
    fn uniform_behavior() {
        let u = Behavior::uniform();
        let c = u.correlators().unwrap();
        assert_eq!(c.a, [0.0; 2]);
        assert_eq!(c.ab, [[0.0; 2]; 2]);
        assert_eq!(u.chsh_value().unwrap(), 0.0);
        assert_eq!(u.eberhard_value(), -0.5);
        assert_eq!(Behavior::from_correlators(&c), u);
    }

    #[test]
    fn eberhard_from_chsh_values() {
        assert_eq!(eberhard_from_chsh(2.0), 0.0);
        assert_abs_diff_eq!(
            eberhard_from_chsh(2.0 * 2f64.sqrt()),
            0.207107,
            epsilon = 1e-6
        );
        assert_eq!(eberhard_from_chsh(4.0), 0.5);
    }

    #[test]
    fn inconsistent_correlators_are_flagged() {
        let c = Correlators {
            a: [1.0, 0.0],
            b: [1.0, 0.0],
            ab: [[-1.0, 0.0], [0.0, 0.0]],
        };
        let b = Behavior::from_correlators(&c);
        assert_eq!(b.prob(Plus, Plus, 0, 0), 0.5);
        assert_eq!(b.prob(Plus, Zero, 0, 0), 0.5);
        assert_eq!(b.prob(Zero, Plus, 0, 0), 0.5);
        assert_eq!(b.prob(Zero, Zero, 0, 0), -0.5);
        assert!(!b.is_valid());
    }

    #[test]
    fn signaling_is_detected() {
        let mut b = Behavior::uniform();
        // Shift 0.1 from +0 to 0+ at x0y1: P(+|x0) becomes 0.4 with y1.
        b.p[setting_index(0, 1)][outcome_index(Plus, Zero)] -= 0.1;
        b.p[setting_index(0, 1)][outcome_index(Zero, Plus)] += 0.1;
        assert!(b.is_valid());
        let r = b.check_no_signaling(NO_SIGNALING_TOL);
        assert!(!r.passed);
        assert_abs_diff_eq!(r.max_violation, 0.1, epsilon = 1e-15);
        match b.correlators() {
            Err(Error::MarginalInconsistency { max_violation }) => {
                assert_abs_diff_eq!(max_violation, 0.1, epsilon = 1e-15)
            }
            other => panic!("expected marginal inconsistency, got {other:?}"),
        }
        // Eberhard is still defined pointwise.
        assert!(b.eberhard_value().is_finite());
    }

    #[test]
    fn json_layout() {
        let b = pr_box().with_label("PR");
        let v: serde_json::Value = serde_json::from_str(&b.to_json().unwrap()).unwrap();
        assert_eq!(v["label"], "PR");
        assert_eq!(v["p"][3][1], 0.5);
        assert_eq!(v["p"][0][3], 0.5);
        let back = Behavior::from_json(&b.to_json().unwrap()).unwrap();
        assert_eq!(back, b);
        let unlabeled: serde_json::Value =
            serde_json::from_str(&Behavior::uniform().to_json().unwrap()).unwrap();
        assert!(unlabeled.get("label").is_none());
    }
}
