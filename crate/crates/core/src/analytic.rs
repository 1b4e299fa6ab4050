//! Closed-form lower bound from no-signaling behaviors that respect the
//! Tsirelson bound, and a numerical check of the argument behind it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behavior::Behavior;
use crate::bisect::QUANTUM_MAX_EBERHARD;
use crate::error::{Error, Result};
use crate::noise::{apply_detection_noise, NoiseParams};
use crate::polytope::{ns_mixture, NsDecomposition};

/// Largest PR-box weight compatible with the Tsirelson bound, √2 − 1.
pub const Q_PR: f64 = std::f64::consts::SQRT_2 - 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticBound {
    pub e_obs: f64,
    pub eta_ns: f64,
}

impl AnalyticBound {
    pub fn new(e_obs: f64) -> Result<Self> {
        Ok(Self {
            e_obs,
            eta_ns: eta_ns(e_obs)?,
        })
    }
}

/// g(η) = (3/2)η² − η.
fn g(eta: f64) -> f64 {
    1.5 * eta * eta - eta
}

/// η_ns = 1/3 + (1/3)√(1 + 6 E / q), the positive root of q·g(η) = E.
pub fn eta_ns(e_obs: f64) -> Result<f64> {
    if !(e_obs > 0.0 && e_obs <= QUANTUM_MAX_EBERHARD) {
        return Err(Error::Domain(format!(
            "observed violation must lie in (0, {QUANTUM_MAX_EBERHARD}], got {e_obs}"
        )));
    }
    Ok((1.0 / 3.0 + (1.0 + 6.0 * e_obs / Q_PR).sqrt() / 3.0).min(1.0))
}

/// The Tsirelson-saturating mixture of PR_1 with weight √2 − 1 and the
/// all-zero-type deterministic points 4, 8 and 12.
pub fn p_ns(p4: f64, p8: f64, p12: f64) -> Result<Behavior> {
    let target = 1.0 - Q_PR;
    if p4 < 0.0 || p8 < 0.0 || p12 < 0.0 || (p4 + p8 + p12 - target).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "weights ({p4}, {p8}, {p12}) must be nonnegative and sum to {target}"
        )));
    }
    let d = NsDecomposition {
        p_pr: Q_PR,
        p4,
        p8,
        p12,
        ..Default::default()
    };
    ns_mixture(&d).map(|b| b.with_label("P_ns"))
}

/// (3/2 p_PR + α) η² − (p_PR + α) η.
pub fn noisy_eberhard_ns_mixture(d: &NsDecomposition, eta: f64) -> f64 {
    let alpha = d.alpha();
    (1.5 * d.p_pr + alpha) * eta * eta - (d.p_pr + alpha) * eta
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NsChainReport {
    pub eta: f64,
    pub e_obs: f64,
    pub eta_ns: Option<f64>,
    pub links: Vec<ChainLink>,
    pub holds: bool,
}

const CHAIN_TOL: f64 = 1e-12;

/// Checks each step of
/// E = p_PR g(η) + α(η² − η) ≤ p_PR g(η) ≤ q g(η)  ⇒  η_ns(E) ≤ η.
pub fn verify_ns_chain(d: &NsDecomposition, eta: f64) -> NsChainReport {
    let e = noisy_eberhard_ns_mixture(d, eta);
    let alpha = d.alpha();
    let link = |name: &str, lhs: f64, rhs: f64| ChainLink {
        name: name.to_string(),
        lhs,
        rhs,
        holds: lhs <= rhs + CHAIN_TOL,
    };
    let mut links = vec![
        link(
            "decomposition valid",
            0.0,
            if d.validate().is_ok() { 0.0 } else { -1.0 },
        ),
        link("positive violation", 0.0, e),
        link("alpha term nonpositive", alpha * (eta * eta - eta), 0.0),
        link("tsirelson weight", d.p_pr, Q_PR),
        link("g nonnegative", 0.0, g(eta)),
        link("bounded by q g(eta)", e, Q_PR * g(eta)),
    ];
    links[1].holds = e > 0.0;
    let eta_ns = eta_ns(e).ok();
    links.push(link(
        "eta_ns below eta",
        eta_ns.unwrap_or(f64::INFINITY),
        eta,
    ));
    let holds = links.iter().all(|l| l.holds);
    NsChainReport {
        eta,
        e_obs: e,
        eta_ns,
        links,
        holds,
    }
}

/// Uniformly random decomposition with p_PR ≤ √2 − 1.
pub fn random_tsirelson_decomposition<R: Rng>(rng: &mut R) -> NsDecomposition {
    let p_pr = rng.random_range(0.0..=Q_PR);
    let raw: [f64; 8] = std::array::from_fn(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln());
    let total: f64 = raw.iter().sum();
    let w = raw.map(|r| r / total * (1.0 - p_pr));
    NsDecomposition {
        p_pr,
        p1: w[0],
        p4: w[1],
        p5: w[2],
        p8: w[3],
        p9: w[4],
        p12: w[5],
        p14: w[6],
        p15: w[7],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub draws: usize,
    /// Draws with a positive violation, on which the chain was checked.
    pub evaluated: usize,
    pub counterexamples: usize,
    /// Largest gap between the closed form and the explicit channel.
    pub max_formula_error: f64,
}

const BLOCK: usize = 1000;

/// Samples `draws` decompositions and efficiencies in (2/3, 1] and checks the
/// chain on each one with a positive violation.
pub fn monte_carlo_ns_chain(draws: usize, seed: u64) -> MonteCarloReport {
    let blocks = draws.div_ceil(BLOCK);
    let parts: Vec<MonteCarloReport> = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(blk as u64);
            let count = BLOCK.min(draws - blk * BLOCK);
            let mut rep = MonteCarloReport {
                draws: count,
                evaluated: 0,
                counterexamples: 0,
                max_formula_error: 0.0,
            };
            for _ in 0..count {
                let d = random_tsirelson_decomposition(&mut rng);
                let eta = rng.random_range(2.0 / 3.0..=1.0);
                let direct = ns_mixture(&d)
                    .map(|b| {
                        apply_detection_noise(&b, &NoiseParams::symmetric(eta, 0.0))
                            .eberhard_value()
                    })
                    .unwrap_or(f64::NAN);
                let err = (direct - noisy_eberhard_ns_mixture(&d, eta)).abs();
                rep.max_formula_error =
                    rep.max_formula_error
                        .max(if err.is_nan() { f64::INFINITY } else { err });
                if noisy_eberhard_ns_mixture(&d, eta) > 0.0 {
                    rep.evaluated += 1;
                    if !verify_ns_chain(&d, eta).holds {
                        rep.counterexamples += 1;
                    }
                }
            }
            rep
        })
        .collect();
    parts.into_iter().fold(
        MonteCarloReport {
            draws: 0,
            evaluated: 0,
            counterexamples: 0,
            max_formula_error: 0.0,
        },
        |acc, r| MonteCarloReport {
            draws: acc.draws + r.draws,
            evaluated: acc.evaluated + r.evaluated,
            counterexamples: acc.counterexamples + r.counterexamples,
            max_formula_error: acc.max_formula_error.max(r.max_formula_error),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Root of q·g(η) = E on [2/3, 1] by plain bisection.
    fn root_oracle(e: f64) -> f64 {
        let (mut lo, mut hi) = (2.0 / 3.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if Q_PR * g(mid) >= e {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    #[test]
    fn endpoints() {
        assert_eq!(eta_ns(QUANTUM_MAX_EBERHARD).unwrap(), 1.0);
        assert_abs_diff_eq!(eta_ns(1e-15).unwrap(), 2.0 / 3.0, epsilon = 1e-12);
        assert!(eta_ns(0.0).is_err());
        assert!(eta_ns(0.25).is_err());
    }

    #[test]
    fn known_value() {
        let v = eta_ns(0.1).unwrap();
        assert_abs_diff_eq!(v, 0.854926, epsilon = 1e-6);
        assert_abs_diff_eq!(v, root_oracle(0.1), epsilon = 1e-14);
    }

    #[test]
    fn p_ns_properties() {
        let target = 1.0 - Q_PR;
        for (p4, p8, p12) in [
            (target, 0.0, 0.0),
            (target / 3.0, target / 3.0, target / 3.0),
        ] {
            let b = p_ns(p4, p8, p12).unwrap();
            assert!(b.is_valid());
            assert_abs_diff_eq!(b.eberhard_value(), QUANTUM_MAX_EBERHARD, epsilon = 1e-14);
            assert_abs_diff_eq!(b.chsh_value().unwrap(), 2.0 * 2f64.sqrt(), epsilon = 1e-13);
            for eta in [0.7, 0.8, 0.95] {
                let noisy = apply_detection_noise(&b, &NoiseParams::symmetric(eta, 0.0));
                assert_abs_diff_eq!(noisy.eberhard_value(), Q_PR * g(eta), epsilon = 1e-14);
            }
        }
        assert!(p_ns(0.1, 0.1, 0.1).is_err());
        assert!(p_ns(-0.1, target + 0.1, 0.0).is_err());
    }

    #[test]
    fn ns_mixture_formula_cases() {
        let pure = NsDecomposition {
            p_pr: 1.0,
            ..Default::default()
        };
        assert_abs_diff_eq!(
            noisy_eberhard_ns_mixture(&pure, 2.0 / 3.0),
            0.0,
            epsilon = 1e-15
        );
        let heavy = NsDecomposition {
            p_pr: 0.3,
            p1: 0.4,
            p4: 0.3,
            ..Default::default()
        };
        let light = NsDecomposition {
            p_pr: 0.3,
            p4: 0.7,
            ..Default::default()
        };
        assert_abs_diff_eq!(
            noisy_eberhard_ns_mixture(&heavy, 1.0),
            0.15,
            epsilon = 1e-15
        );
        assert!(noisy_eberhard_ns_mixture(&heavy, 0.8) < noisy_eberhard_ns_mixture(&light, 0.8));
    }

    #[test]
    fn tight_and_strict_cases() {
        let tight = NsDecomposition {
            p_pr: Q_PR,
            p4: 1.0 - Q_PR,
            ..Default::default()
        };
        let r = verify_ns_chain(&tight, 0.9);
        assert!(r.holds);
        assert_abs_diff_eq!(r.eta_ns.unwrap(), 0.9, epsilon = 1e-12);

        let strict = NsDecomposition {
            p_pr: Q_PR,
            p4: 0.5 - Q_PR,
            p1: 0.5,
            ..Default::default()
        };
        let r = verify_ns_chain(&strict, 0.95);
        assert!(r.holds);
        assert!(r.eta_ns.unwrap() < 0.95);
    }

    #[test]
    fn violations_of_preconditions_are_reported() {
        let super_quantum = NsDecomposition {
            p_pr: 0.9,
            p4: 0.1,
            ..Default::default()
        };
        let r = verify_ns_chain(&super_quantum, 0.95);
        assert!(!r.holds);
        assert!(
            !r.links
                .iter()
                .find(|l| l.name == "tsirelson weight")
                .unwrap()
                .holds
        );
    }

    #[test]
    fn monte_carlo_small() {
        let r = monte_carlo_ns_chain(5000, 7);
        assert_eq!(r.draws, 5000);
        assert!(r.evaluated > 0);
        assert_eq!(r.counterexamples, 0);
        assert!(r.max_formula_error <= 1e-12);
        assert_eq!(r, monte_carlo_ns_chain(5000, 7));
    }

    proptest! {
        #[test]
        fn quadratic_consistency(e in 1e-6..QUANTUM_MAX_EBERHARD) {
            let v = eta_ns(e).unwrap();
            prop_assert!((Q_PR * g(v) - e).abs() <= 1e-13);
        }

        #[test]
        fn strictly_increasing(e in 1e-6..0.2f64, de in 1e-6..0.007f64) {
            prop_assert!(eta_ns(e + de).unwrap() > eta_ns(e).unwrap());
        }
    }
}
