use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::{SMatrix, SVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::realization::QuantumRealization;
use crate::behavior::Behavior;
use crate::bisect::{bisect_feasible, check_request, EBERHARD_THRESHOLD};
use crate::error::{Error, Result};
use crate::noise::eberhard_coefficients;

type Vec5 = SVector<f64, 5>;
type Mat5 = SMatrix<f64, 5, 5>;

const FD_STEP: f64 = 1e-6;
const GRAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Convergence tolerance of the local ascent, also the slack allowed when
    /// comparing the inner maximum against the observed violation.
    pub inner_tolerance: f64,
    pub max_iterations: usize,
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            inner_tolerance: 1e-10,
            max_iterations: 500,
            rng_seed: 0x5eed,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Domain("restarts must be at least 1".into()));
        }
        if !(self.inner_tolerance > 0.0) {
            return Err(Error::Domain("inner_tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub value: f64,
    pub witness: QuantumRealization,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectionResult {
    pub eta: f64,
    pub realization: QuantumRealization,
    pub iterations: usize,
    pub achieved_value: f64,
    pub e_obs: f64,
    pub xi: f64,
}

#[derive(Serialize, Deserialize)]
struct BisectionResultJson {
    eta: f64,
    angles: [f64; 5],
    achieved_value: f64,
    iterations: usize,
    e_obs: f64,
    xi: f64,
}

impl Serialize for BisectionResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BisectionResultJson {
            eta: self.eta,
            angles: self.realization.angles(),
            achieved_value: self.achieved_value,
            iterations: self.iterations,
            e_obs: self.e_obs,
            xi: self.xi,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BisectionResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BisectionResultJson::deserialize(d)?;
        Ok(Self {
            eta: j.eta,
            realization: QuantumRealization::from_angles(j.angles),
            iterations: j.iterations,
            achieved_value: j.achieved_value,
            e_obs: j.e_obs,
            xi: j.xi,
        })
    }
}

/// Same behavior as the closed forms, assembled from the correlators
/// ⟨A_x⟩ = cos θ_x cos 2θ, ⟨B_y⟩ = cos θ_y cos 2θ and
/// ⟨A_x B_y⟩ = cos θ_x cos θ_y + sin θ_x sin θ_y sin 2θ. Cheaper inside the
/// optimizer loop.
pub(crate) fn fast_behavior(v: &[f64; 5]) -> Behavior {
    let (s2, c2) = (2.0 * v[0]).sin_cos();
    let a = [v[1].sin_cos(), v[2].sin_cos()];
    let b = [v[3].sin_cos(), v[4].sin_cos()];
    Behavior::from_fn(|oa, ob, x, y| {
        let (sx, cx) = a[x];
        let (sy, cy) = b[y];
        let (ga, gb) = (oa.sign(), ob.sign());
        0.25 * (1.0 + ga * cx * c2 + gb * cy * c2 + ga * gb * (cx * cy + sx * sy * s2))
    })
}

/// Noisy Eberhard value K η² − L η + M ξ η − N ξ + O ξ² of a realization.
pub fn noisy_eberhard(r: &QuantumRealization, eta: f64, xi: f64) -> f64 {
    objective(&r.angles(), eta, xi)
}

fn objective(v: &[f64; 5], eta: f64, xi: f64) -> f64 {
    eberhard_coefficients(&fast_behavior(v)).symmetric_value(eta, xi)
}

fn gradient(f: &impl Fn(&Vec5) -> f64, x: &Vec5) -> Vec5 {
    let mut g = Vec5::zeros();
    for i in 0..5 {
        let mut xp = *x;
        let mut xm = *x;
        xp[i] += FD_STEP;
        xm[i] -= FD_STEP;
        g[i] = (f(&xp) - f(&xm)) / (2.0 * FD_STEP);
    }
    g
}

/// BFGS minimization with Armijo backtracking.
fn bfgs_minimize(
    f: impl Fn(&Vec5) -> f64,
    x0: Vec5,
    tol: f64,
    max_iterations: usize,
) -> (Vec5, f64) {
    let mut x = x0;
    let mut fx = f(&x);
    let mut g = gradient(&f, &x);
    let mut h = Mat5::identity();
    let mut fresh = true;
    let mut stalls = 0;
    for _ in 0..max_iterations {
        if g.amax() <= GRAD_TOL {
            break;
        }
        let mut p = -(h * g);
        let mut slope = g.dot(&p);
        if slope >= 0.0 {
            h = Mat5::identity();
            fresh = true;
            p = -g;
            slope = -g.norm_squared();
        }
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-14 {
            let xn = x + p * t;
            let fxn = f(&xn);
            if fxn <= fx + 1e-4 * t * slope {
                accepted = Some((xn, fxn));
                break;
            }
            t *= 0.5;
        }
        let Some((xn, fxn)) = accepted else {
            if fresh {
                break;
            }
            h = Mat5::identity();
            fresh = true;
            continue;
        };
        let gn = gradient(&f, &xn);
        let s = xn - x;
        let y = gn - g;
        let ys = y.dot(&s);
        if ys > 1e-16 {
            if fresh {
                h *= ys / y.norm_squared();
            }
            let rho = 1.0 / ys;
            let i = Mat5::identity();
            h = (i - s * y.transpose() * rho) * h * (i - y * s.transpose() * rho)
                + s * s.transpose() * rho;
            fresh = false;
        }
        let decrease = fx - fxn;
        x = xn;
        fx = fxn;
        g = gn;
        if decrease <= tol * 1e-3 * (1.0 + fx.abs()) {
            stalls += 1;
            if stalls >= 3 {
                break;
            }
        } else {
            stalls = 0;
        }
    }
    (x, fx)
}

fn random_start(rng: &mut ChaCha8Rng) -> [f64; 5] {
    [
        rng.random_range(0.0..FRAC_PI_2),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
    ]
}

/// Multi-start local maximization from `warm` starts plus `cfg.restarts`
/// random ones drawn from stream `stream` of the configured seed.
fn maximize_from(
    eta: f64,
    xi: f64,
    cfg: &SearchConfig,
    warm: &[QuantumRealization],
    stream: u64,
) -> SearchOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(stream);
    let starts: Vec<[f64; 5]> = warm
        .iter()
        .map(|r| r.angles())
        .chain((0..cfg.restarts).map(|_| random_start(&mut rng)))
        .collect();
    let neg = |v: &Vec5| -objective(&[v[0], v[1], v[2], v[3], v[4]], eta, xi);
    let results: Vec<(f64, [f64; 5])> = starts
        .par_iter()
        .map(|s| {
            let (x, fx) =
                bfgs_minimize(neg, Vec5::from(*s), cfg.inner_tolerance, cfg.max_iterations);
            (-fx, [x[0], x[1], x[2], x[3], x[4]])
        })
        .collect();
    let (_, best) = results
        .into_iter()
        .fold((f64::NEG_INFINITY, [0.0; 5]), |acc, r| {
            if r.0 > acc.0 {
                r
            } else {
                acc
            }
        });
    let witness = QuantumRealization::from_angles(best).canonical();
    SearchOutcome {
        value: noisy_eberhard(&witness, eta, xi),
        witness,
    }
}

/// Best noisy Eberhard value found over the five-angle family at fixed η, ξ.
/// A lower bound on the true maximum.
pub fn max_noisy_eberhard(eta: f64, xi: f64, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if !(0.0..=1.0).contains(&eta) || !(0.0..1.0).contains(&xi) {
        return Err(Error::Domain(format!(
            "need 0 <= eta <= 1 and 0 <= xi < 1, got eta={eta}, xi={xi}"
        )));
    }
    cfg.validate()?;
    Ok(maximize_from(eta, xi, cfg, &[], 0))
}

/// Smallest efficiency on [2/3, 1] at which some realization in the family
/// reaches `e_obs`, by bisection. This is an upper bound on the true minimum.
pub fn min_efficiency_qr(
    e_obs: f64,
    xi: f64,
    tol: f64,
    cfg: &SearchConfig,
) -> Result<BisectionResult> {
    check_request(e_obs, tol)?;
    if !(0.0..1.0).contains(&xi) {
        return Err(Error::Domain(format!(
            "dark count rate must be in [0, 1), got {xi}"
        )));
    }
    cfg.validate()?;
    let slack = cfg.inner_tolerance;

    let mut stream = 0u64;
    let top = maximize_from(1.0, xi, cfg, &[], stream);
    if top.value < e_obs - slack {
        return Err(Error::Infeasible {
            e_obs,
            xi,
            achievable: top.value,
        });
    }
    let mut best = top;
    let mut last = top.witness;
    let bracket = bisect_feasible(EBERHARD_THRESHOLD, 1.0, tol, |eta| {
        stream += 1;
        let warm = [best.witness, last];
        let found = maximize_from(eta, xi, cfg, &warm, stream);
        last = found.witness;
        if found.value >= e_obs - slack {
            best = found;
            Ok(true)
        } else {
            Ok(false)
        }
    })?;
    let achieved_value = noisy_eberhard(&best.witness, bracket.upper, xi);
    Ok(BisectionResult {
        eta: bracket.upper,
        realization: best.witness,
        iterations: bracket.iterations,
        achieved_value,
        e_obs,
        xi,
    })
}
