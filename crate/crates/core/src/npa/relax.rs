use nalgebra::{DMatrix, Matrix4};
use serde::{Deserialize, Serialize};

use super::functional::{eberhard_coefficient_functionals, LinearFunctional};
use super::structure::{MomentStructure, NpaLevel};
use super::word::Letter;
use crate::bisect::{bisect_feasible, check_request};
use crate::error::{Error, Result};
use crate::quantum::QuantumRealization;
use crate::sdp::{
    ClassCoefficient, InterchangeClass, InterchangeObjective, InteriorPoint, SdpInterchange,
    SdpSolver, SdpStatus,
};

/// Duality-gap tolerance of every inner solve.
pub const SDP_TOLERANCE: f64 = 1e-9;

/// Slack on the feasibility comparison `max ≥ E_obs − slack`.
pub const FEASIBILITY_SLACK: f64 = 1e-9;

/// Largest primal residual accepted when an unconverged solve already
/// exhibits a moment matrix reaching `E_obs`.
pub const PRIMAL_RESIDUAL_SLACK: f64 = 1e-8;

/// Interchange form of `maximize f(Γ)` over the structure's moment matrices.
pub fn sdp_interchange(s: &MomentStructure, objective: &LinearFunctional) -> SdpInterchange {
    let classes = s
        .class_cells()
        .into_iter()
        .enumerate()
        .map(|(id, cells)| InterchangeClass {
            id,
            word: Some(s.class_words[id].to_string()),
            cells: cells.into_iter().map(|(i, j)| [i, j]).collect(),
            fixed: s.unit_classes.contains(&id).then_some(1.0),
        })
        .collect();
    SdpInterchange {
        dimension: s.dim(),
        objective: InterchangeObjective {
            constant: objective.constant,
            coefficients: objective
                .coeffs
                .iter()
                .map(|(&class, &value)| ClassCoefficient { class, value })
                .collect(),
        },
        classes,
    }
}

/// Interchange form of the noisy Eberhard maximization at fixed (η, ξ).
pub fn export_sdp(level: NpaLevel, eta: f64, xi: f64) -> Result<SdpInterchange> {
    check_noise(eta, xi)?;
    let s = MomentStructure::new(level);
    let f = eberhard_coefficient_functionals(&s).noisy_objective(eta, xi);
    Ok(sdp_interchange(&s, &f))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NpaMaximum {
    /// Primal value attained by the returned moment matrix.
    pub value: f64,
    /// Certified upper bound on the relaxation's optimum.
    pub dual_value: f64,
    /// Moment of every class at the optimum, indexed by class id.
    pub moments: Vec<f64>,
    pub iterations: usize,
}

fn check_noise(eta: f64, xi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!(
            "efficiency must lie in [0, 1], got {eta}"
        )));
    }
    if !(0.0..1.0).contains(&xi) {
        return Err(Error::Domain(format!(
            "dark-count rate must lie in [0, 1), got {xi}"
        )));
    }
    Ok(())
}

/// Maximizes `objective` over the level's moment matrices with `solver`.
pub fn maximize_functional(
    solver: &dyn SdpSolver,
    s: &MomentStructure,
    objective: &LinearFunctional,
) -> Result<NpaMaximum> {
    let problem = sdp_interchange(s, objective).to_dense()?;
    let sol = solver.solve(&problem, SDP_TOLERANCE)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::SolverNonConvergence {
            iterations: sol.iterations,
            primal: sol.value,
            dual: sol.dual_value,
        });
    }
    let moments = s
        .class_cells()
        .iter()
        .map(|cells| {
            let (i, j) = cells[0];
            sol.x[(i, j)]
        })
        .collect();
    Ok(NpaMaximum {
        value: sol.value,
        dual_value: sol.dual_value,
        moments,
        iterations: sol.iterations,
    })
}

/// Largest noisy Eberhard value K η² − L η + M ξη − N ξ + O ξ² over the
/// level's relaxation of the quantum set.
pub fn max_noisy_eberhard_sdp(eta: f64, xi: f64, level: NpaLevel) -> Result<NpaMaximum> {
    check_noise(eta, xi)?;
    let s = MomentStructure::new(level);
    let f = eberhard_coefficient_functionals(&s).noisy_objective(eta, xi);
    maximize_functional(&InteriorPoint::default(), &s, &f)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NpaStep {
    pub eta: f64,
    pub value: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NpaBound {
    pub eta: f64,
    pub lower: f64,
    pub e_obs: f64,
    pub xi: f64,
    pub level: NpaLevel,
    pub iterations: usize,
    pub trace: Vec<NpaStep>,
}

/// Smallest efficiency compatible with `e_obs` over the level's relaxation,
/// found by bisection on [0, 1]. The returned `eta` is the upper end of the
/// final bracket.
///
/// A step whose solve stops short of the gap tolerance is still decided when
/// the certified upper bound lies below `E_obs`, or when the primal iterate
/// reaches `E_obs` with a negligible residual.
pub fn min_efficiency_npa(e_obs: f64, xi: f64, tol: f64, level: NpaLevel) -> Result<NpaBound> {
    min_efficiency_npa_with(&InteriorPoint::default(), e_obs, xi, tol, level)
}

pub fn min_efficiency_npa_with(
    solver: &dyn SdpSolver,
    e_obs: f64,
    xi: f64,
    tol: f64,
    level: NpaLevel,
) -> Result<NpaBound> {
    check_request(e_obs, tol)?;
    check_noise(1.0, xi)?;
    let s = MomentStructure::new(level);
    let funcs = eberhard_coefficient_functionals(&s);
    let mut trace = Vec::new();
    let mut step = |eta: f64| -> Result<bool> {
        let problem = sdp_interchange(&s, &funcs.noisy_objective(eta, xi)).to_dense()?;
        let sol = solver.solve(&problem, SDP_TOLERANCE)?;
        let feasible = if sol.status == SdpStatus::Optimal {
            sol.dual_value >= e_obs - FEASIBILITY_SLACK
        } else if sol.dual_value < e_obs - FEASIBILITY_SLACK {
            false
        } else if sol.value >= e_obs && sol.primal_residual <= PRIMAL_RESIDUAL_SLACK {
            true
        } else {
            return Err(Error::SolverNonConvergence {
                iterations: sol.iterations,
                primal: sol.value,
                dual: sol.dual_value,
            });
        };
        trace.push(NpaStep {
            eta,
            value: sol.dual_value,
            feasible,
        });
        Ok(feasible)
    };
    if !step(1.0)? {
        let achievable = trace[0].value;
        return Err(Error::Infeasible {
            e_obs,
            xi,
            achievable,
        });
    }
    let bracket = bisect_feasible(0.0, 1.0, tol, &mut step)?;
    Ok(NpaBound {
        eta: bracket.upper,
        lower: bracket.lower,
        e_obs,
        xi,
        level,
        iterations: bracket.iterations,
        trace,
    })
}

/// Moment matrix ⟨ψ| w_i† w_j |ψ⟩ of a two-qubit realization.
pub fn realization_moment_matrix(s: &MomentStructure, r: &QuantumRealization) -> DMatrix<f64> {
    let psi = r.state();
    let (a, b) = r.observables();
    let op = |letters: &[Letter]| {
        letters.iter().fold(Matrix4::<f64>::identity(), |acc, l| {
            let m = if l.is_alice() {
                a[l.setting()]
            } else {
                b[l.setting()]
            };
            acc * m
        })
    };
    let ops: Vec<Matrix4<f64>> = s.words.iter().map(|w| op(w.letters())).collect();
    let n = s.dim();
    DMatrix::from_fn(n, n, |i, j| psi.dot(&(ops[i].transpose() * ops[j] * psi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::npa::functional::probability_functional;
    use crate::sdp::solve_sdp;
    use crate::QUANTUM_MAX_EBERHARD;
    use approx::assert_abs_diff_eq;
    use nalgebra::SymmetricEigen;

    fn chsh(s: &MomentStructure) -> LinearFunctional {
        let mut f = LinearFunctional::default();
        f.add_term(s.joint_class(0, 0), 1.0);
        f.add_term(s.joint_class(0, 1), 1.0);
        f.add_term(s.joint_class(1, 0), 1.0);
        f.add_term(s.joint_class(1, 1), -1.0);
        f
    }

    #[test]
    fn single_correlator_bound() {
        let s = MomentStructure::new(NpaLevel::One);
        let mut f = LinearFunctional::default();
        f.add_term(s.joint_class(0, 0), 1.0);
        let m = maximize_functional(&InteriorPoint::default(), &s, &f).unwrap();
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn tsirelson_at_level_one() {
        let s = MomentStructure::new(NpaLevel::One);
        let m = maximize_functional(&InteriorPoint::default(), &s, &chsh(&s)).unwrap();
        assert_abs_diff_eq!(m.value, 2.0 * 2f64.sqrt(), epsilon = 1e-7);
        assert!(m.dual_value >= m.value - 1e-12);
    }

    #[test]
    fn eberhard_maximum_at_level_two() {
        let m = max_noisy_eberhard_sdp(1.0, 0.0, NpaLevel::Two).unwrap();
        assert_abs_diff_eq!(m.value, QUANTUM_MAX_EBERHARD, epsilon = 1e-7);
        assert_abs_diff_eq!(m.dual_value, QUANTUM_MAX_EBERHARD, epsilon = 1e-7);
    }

    #[test]
    fn threshold_is_zero() {
        let m = max_noisy_eberhard_sdp(crate::EBERHARD_THRESHOLD, 0.0, NpaLevel::Two).unwrap();
        assert!(m.value.abs() <= 1e-7, "{}", m.value);
    }

    #[test]
    fn level_one_dominates_level_two() {
        let one = max_noisy_eberhard_sdp(0.9, 0.0, NpaLevel::One).unwrap();
        let two = max_noisy_eberhard_sdp(0.9, 0.0, NpaLevel::Two).unwrap();
        assert!(one.dual_value >= two.value - 1e-9);
    }

    #[test]
    fn optimum_moments_give_probabilities() {
        let s = MomentStructure::new(NpaLevel::Two);
        let m = max_noisy_eberhard_sdp(1.0, 0.0, NpaLevel::Two).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                for a in crate::Outcome::ALL {
                    for b in crate::Outcome::ALL {
                        let p = probability_functional(&s, a, b, x, y).evaluate(&m.moments);
                        assert!(p >= -1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn realization_moments_are_feasible() {
        let s = MomentStructure::new(NpaLevel::Two);
        let r = QuantumRealization::new(0.312188, 3.319115, 2.183795, 2.964065, 4.099364);
        let g = realization_moment_matrix(&s, &r);
        let lmin = SymmetricEigen::new(g.clone()).eigenvalues.min();
        assert!(lmin >= -1e-10);
        for cells in s.class_cells() {
            let (i0, j0) = cells[0];
            for (i, j) in cells {
                assert_abs_diff_eq!(g[(i, j)], g[(i0, j0)], epsilon = 1e-12);
            }
        }
        let b = r.probabilities();
        let c = b.correlators().unwrap();
        assert_abs_diff_eq!(g[(0, 6)], c.ab[0][0], epsilon = 1e-12);
        assert_abs_diff_eq!(g[(0, 2)], c.a[1], epsilon = 1e-12);
    }

    #[test]
    fn export_round_trips_through_solver() {
        let ic = export_sdp(NpaLevel::Two, 1.0, 0.0).unwrap();
        let json = ic.to_json().unwrap();
        let back = SdpInterchange::from_json(&json).unwrap();
        let sol = solve_sdp(&back.to_dense().unwrap(), 1e-9).unwrap();
        assert_abs_diff_eq!(sol.value, QUANTUM_MAX_EBERHARD, epsilon = 1e-7);
        assert_eq!(
            back.classes.len(),
            MomentStructure::new(NpaLevel::Two).num_classes()
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(max_noisy_eberhard_sdp(1.2, 0.0, NpaLevel::Two).is_err());
        assert!(max_noisy_eberhard_sdp(0.9, 1.0, NpaLevel::Two).is_err());
        assert!(min_efficiency_npa(0.0, 0.0, 1e-7, NpaLevel::Two).is_err());
        assert!(matches!(
            min_efficiency_npa(0.3, 0.0, 1e-7, NpaLevel::Two),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn table_two_first_row() {
        let b = min_efficiency_npa(0.006951, 0.0, 1e-7, NpaLevel::Two).unwrap();
        assert_abs_diff_eq!(b.eta, 0.753773, epsilon = 1e-5);
        assert!(b.eta - b.lower <= 1e-7);
    }
}
