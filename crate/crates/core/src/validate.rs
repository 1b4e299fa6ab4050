//! Property suites shared by the command line and the test harness.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{eta_ns, monte_carlo_ns_chain, Q_PR};
use crate::behavior::{eberhard_from_chsh, Behavior, NO_SIGNALING_TOL};
use crate::bisect::{EBERHARD_THRESHOLD, QUANTUM_MAX_EBERHARD};
use crate::error::Error;
use crate::noise::{apply_detection_noise, eberhard_coefficients, NoiseParams};
use crate::npa::{max_noisy_eberhard_sdp, realization_moment_matrix, MomentStructure, NpaLevel};
use crate::polytope::{pr_box, LdAssignment};
use crate::quantum::{born_rule_oracle, QuantumRealization};

/// The forty level-2 moment equalities, grouped by common value.
pub const LEVEL_TWO_EQUALITIES: [&[(usize, usize)]; 20] = [
    &[(0, 1), (2, 8), (3, 6), (4, 7)],
    &[(0, 2), (1, 5), (3, 9), (4, 10)],
    &[(0, 3), (1, 6), (2, 9), (4, 12)],
    &[(0, 4), (1, 7), (2, 10), (3, 11)],
    &[(0, 5), (1, 2), (6, 9), (7, 10)],
    &[(0, 6), (1, 3), (8, 9), (7, 12)],
    &[(0, 7), (1, 4), (6, 11), (8, 10)],
    &[(0, 9), (2, 3), (5, 6), (10, 12)],
    &[(0, 10), (2, 4), (5, 7), (9, 11)],
    &[(0, 11), (3, 4), (6, 7), (9, 10)],
    &[(1, 9), (3, 5)],
    &[(1, 10), (4, 5)],
    &[(1, 11), (3, 7)],
    &[(1, 12), (4, 6)],
    &[(2, 6), (3, 8)],
    &[(2, 7), (4, 8)],
    &[(2, 11), (3, 10)],
    &[(2, 12), (4, 9)],
    &[(6, 10), (8, 11)],
    &[(7, 9), (8, 12)],
];

type Groups = BTreeSet<BTreeSet<(usize, usize)>>;

fn golden_groups() -> Groups {
    LEVEL_TWO_EQUALITIES
        .iter()
        .map(|g| g.iter().copied().collect())
        .collect()
}

fn generated_groups() -> Groups {
    MomentStructure::new(NpaLevel::Two)
        .equality_groups()
        .into_iter()
        .map(|g| g.into_iter().collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Quantum,
    Npa,
    Analytic,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "core" => Ok(Suite::Core),
            "quantum" => Ok(Suite::Quantum),
            "npa" => Ok(Suite::Npa),
            "analytic" => Ok(Suite::Analytic),
            "all" => Ok(Suite::All),
            other => Err(Error::Domain(format!(
                "unknown suite {other:?}; expected core, quantum, npa, analytic or all"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Core => "core",
            Suite::Quantum => "quantum",
            Suite::Npa => "npa",
            Suite::Analytic => "analytic",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    fn at_most(suite: &str, name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            suite: suite.into(),
            name: name.into(),
            passed: measured <= tolerance,
            measured,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidateConfig {
    pub realizations: usize,
    pub ns_behaviors: usize,
    pub monte_carlo_draws: usize,
    pub seed: u64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self {
            realizations: 10_000,
            ns_behaviors: 10_000,
            monte_carlo_draws: 100_000,
            seed: 0x5eed,
        }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn random_realization<R: Rng>(rng: &mut R) -> QuantumRealization {
    use std::f64::consts::{FRAC_PI_2, TAU};
    QuantumRealization::new(
        rng.random_range(0.0..=FRAC_PI_2),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
    )
}

/// Random mixture of the sixteen deterministic points and the PR box.
pub fn random_ns_behavior<R: Rng>(rng: &mut R) -> Behavior {
    let lds: Vec<Behavior> = LdAssignment::all().map(|a| a.behavior()).collect();
    let pr = pr_box();
    let raw: Vec<f64> = (0..17)
        .map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let parts = lds
        .iter()
        .chain(std::iter::once(&pr))
        .zip(&raw)
        .map(|(b, w)| (w / total, b));
    Behavior::mixture(parts)
}

/// Largest value of `f` over `n` samples drawn in parallel blocks.
fn par_max(n: usize, seed: u64, f: impl Fn(&mut ChaCha8Rng) -> f64 + Sync) -> f64 {
    const BLOCK: usize = 500;
    (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|blk| {
            let mut r = rng(seed, blk as u64);
            (0..BLOCK.min(n - blk * BLOCK))
                .map(|_| f(&mut r))
                .fold(
                    0.0,
                    |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) },
                )
        })
        .reduce(|| 0.0, f64::max)
}

fn max_entry_diff(a: &Behavior, b: &Behavior) -> f64 {
    (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| (a.p[i][j] - b.p[i][j]).abs())
        .fold(0.0, f64::max)
}

fn core_checks(cfg: &ValidateConfig) -> Vec<Check> {
    let equivalence = par_max(cfg.ns_behaviors, cfg.seed ^ 0xb, |r| {
        let b = random_ns_behavior(r);
        let beta = b.chsh_value().unwrap_or(f64::NAN);
        (b.eberhard_value() - eberhard_from_chsh(beta)).abs()
    });
    let signaling = par_max(cfg.ns_behaviors, cfg.seed ^ 0xc, |r| {
        random_ns_behavior(r)
            .check_no_signaling(NO_SIGNALING_TOL)
            .max_violation
    });
    let local_bound = LdAssignment::all()
        .map(|a| a.behavior().eberhard_value())
        .fold(f64::NEG_INFINITY, f64::max);
    let channel = par_max(cfg.ns_behaviors, cfg.seed ^ 0xd, |r| {
        let b = random_ns_behavior(r);
        let eta = r.random_range(0.0..=1.0);
        let xi = r.random_range(0.0..0.5);
        let direct = apply_detection_noise(&b, &NoiseParams::symmetric(eta, xi)).eberhard_value();
        (eberhard_coefficients(&b).symmetric_value(eta, xi) - direct).abs()
    });
    vec![
        Check::at_most(
            "core",
            "eberhard_equals_chsh_over_four_minus_half",
            equivalence,
            1e-12,
        ),
        Check::at_most(
            "core",
            "random_mixtures_no_signaling",
            signaling,
            NO_SIGNALING_TOL,
        ),
        Check::at_most("core", "deterministic_points_local_bound", local_bound, 0.0),
        Check::at_most("core", "noise_polynomial_matches_channel", channel, 1e-12),
    ]
}

fn quantum_checks(cfg: &ValidateConfig) -> Vec<Check> {
    let closed_forms = par_max(cfg.realizations, cfg.seed ^ 0xa, |r| {
        let q = random_realization(r);
        max_entry_diff(&q.probabilities(), &born_rule_oracle(&q))
    });
    let canonical = par_max(cfg.realizations, cfg.seed ^ 0xe, |r| {
        let v: [f64; 5] = std::array::from_fn(|_| r.random_range(-20.0..20.0));
        let q = QuantumRealization::from_angles(v);
        let c = q.canonical();
        if c.in_bounds() {
            max_entry_diff(&q.probabilities(), &c.probabilities())
        } else {
            f64::INFINITY
        }
    });
    let tsirelson = par_max(cfg.realizations, cfg.seed ^ 0xf, |r| {
        let q = random_realization(r);
        (q.probabilities().eberhard_value() - QUANTUM_MAX_EBERHARD).max(0.0)
    });
    vec![
        Check::at_most(
            "quantum",
            "closed_forms_match_born_rule",
            closed_forms,
            1e-12,
        ),
        Check::at_most(
            "quantum",
            "canonical_form_preserves_probabilities",
            canonical,
            1e-12,
        ),
        Check::at_most(
            "quantum",
            "random_realizations_within_tsirelson",
            tsirelson,
            1e-12,
        ),
    ]
}

fn npa_checks(cfg: &ValidateConfig) -> Vec<Check> {
    let golden = golden_groups();
    let generated = generated_groups();
    let mismatched = golden.symmetric_difference(&generated).count();
    let count = MomentStructure::new(NpaLevel::Two).equality_count();
    let s = MomentStructure::new(NpaLevel::Two);
    let psd = par_max(cfg.realizations.min(1000), cfg.seed ^ 0x11, |r| {
        let g = realization_moment_matrix(&s, &random_realization(r));
        (-nalgebra::SymmetricEigen::new(g).eigenvalues.min()).max(0.0)
    });
    let max_err = |eta: f64, target: f64| {
        max_noisy_eberhard_sdp(eta, 0.0, NpaLevel::Two)
            .map(|m| (m.value - target).abs().max((m.dual_value - target).abs()))
            .unwrap_or(f64::INFINITY)
    };
    vec![
        Check::at_most(
            "npa",
            "level_two_equalities_match_fixture",
            mismatched as f64,
            0.0,
        ),
        Check::at_most(
            "npa",
            "level_two_equality_count_is_40",
            (count as f64 - 40.0).abs(),
            0.0,
        ),
        Check::at_most("npa", "realization_moment_matrices_psd", psd, 1e-10),
        Check::at_most(
            "npa",
            "level_two_maximum_at_unit_efficiency",
            max_err(1.0, QUANTUM_MAX_EBERHARD),
            1e-6,
        ),
        Check::at_most(
            "npa",
            "level_two_maximum_at_threshold",
            max_err(EBERHARD_THRESHOLD, 0.0),
            1e-7,
        ),
    ]
}

fn analytic_checks(cfg: &ValidateConfig) -> Vec<Check> {
    let mc = monte_carlo_ns_chain(cfg.monte_carlo_draws, cfg.seed);
    let residual = (1..=2000)
        .map(|i| {
            let e = QUANTUM_MAX_EBERHARD * i as f64 / 2000.0;
            let v = eta_ns(e).unwrap_or(f64::NAN);
            (Q_PR * (1.5 * v * v - v) - e).abs()
        })
        .fold(
            0.0,
            |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) },
        );
    let top = eta_ns(QUANTUM_MAX_EBERHARD)
        .map(|v| (v - 1.0).abs())
        .unwrap_or(f64::INFINITY);
    vec![
        Check::at_most(
            "analytic",
            "ns_chain_counterexamples",
            mc.counterexamples as f64,
            0.0,
        ),
        Check::at_most(
            "analytic",
            "mixture_formula_matches_channel",
            mc.max_formula_error,
            1e-12,
        ),
        Check::at_most("analytic", "quadratic_residual", residual, 1e-13),
        Check::at_most("analytic", "unit_efficiency_at_quantum_maximum", top, 0.0),
    ]
}

pub fn run_suite(suite: Suite, cfg: &ValidateConfig) -> Vec<Check> {
    match suite {
        Suite::Core => core_checks(cfg),
        Suite::Quantum => quantum_checks(cfg),
        Suite::Npa => npa_checks(cfg),
        Suite::Analytic => analytic_checks(cfg),
        Suite::All => [Suite::Core, Suite::Quantum, Suite::Npa, Suite::Analytic]
            .iter()
            .flat_map(|&s| run_suite(s, cfg))
            .collect(),
    }
}
