//! Small dense semidefinite programs.
//!
//! Problems are stated in maximize form:
//!
//! ```text
//! maximize   ⟨C, X⟩ + offset
//! subject to ⟨A_k, X⟩ = b_k   for every constraint k
//!            X ⪰ 0
//! ```
//!
//! The default solver is a primal–dual interior-point method using the
//! HKM search direction with a Mehrotra predictor–corrector step. Matrix sizes
//! here are tiny (at most 16), so every kernel is dense.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SdpConstraint {
    pub a: DMatrix<f64>,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseSdp {
    pub dim: usize,
    pub objective: DMatrix<f64>,
    pub offset: f64,
    pub constraints: Vec<SdpConstraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdpStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// Primal objective ⟨C, X⟩ + offset.
    pub value: f64,
    pub x: DMatrix<f64>,
    /// Dual multipliers of the equality constraints.
    pub y: DVector<f64>,
    /// Upper bound on the optimum implied by `y`, corrected for any residual
    /// dual infeasibility when the constraints pin the trace of X.
    pub dual_value: f64,
    pub gap: f64,
    pub status: SdpStatus,
    pub iterations: usize,
    /// Largest |⟨A_k, X⟩ − b_k|.
    pub primal_residual: f64,
}

/// A backend able to solve [`DenseSdp`] problems.
pub trait SdpSolver {
    fn solve(&self, problem: &DenseSdp, tol: f64) -> Result<SdpSolution>;
}

/// Symmetric constraint matrix with a single entry: ⟨A, X⟩ = X_ij.
pub fn entry_selector(dim: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(dim, dim);
    if i == j {
        a[(i, i)] = 1.0;
    } else {
        a[(i, j)] = 0.5;
        a[(j, i)] = 0.5;
    }
    a
}

impl DenseSdp {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            objective: DMatrix::zeros(dim, dim),
            offset: 0.0,
            constraints: Vec::new(),
        }
    }

    /// Adds the constraint X_ij = value.
    pub fn pin_entry(&mut self, i: usize, j: usize, value: f64) {
        self.constraints.push(SdpConstraint {
            a: entry_selector(self.dim, i, j),
            b: value,
        });
    }

    /// Adds the constraint X_ij − X_kl = 0.
    pub fn tie_entries(&mut self, (i, j): (usize, usize), (k, l): (usize, usize)) {
        let a = entry_selector(self.dim, i, j) - entry_selector(self.dim, k, l);
        self.constraints.push(SdpConstraint { a, b: 0.0 });
    }

    pub fn objective_value(&self, x: &DMatrix<f64>) -> f64 {
        self.objective.dot(x) + self.offset
    }

    pub fn max_residual(&self, x: &DMatrix<f64>) -> f64 {
        self.constraints
            .iter()
            .map(|c| (c.a.dot(x) - c.b).abs())
            .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Domain("SDP dimension must be positive".into()));
        }
        let check = |m: &DMatrix<f64>, what: &str| -> Result<()> {
            if m.shape() != (n, n) {
                return Err(Error::Domain(format!(
                    "{what} has shape {:?}, expected ({n}, {n})",
                    m.shape()
                )));
            }
            if (m - m.transpose()).amax() > 1e-12 {
                return Err(Error::Domain(format!("{what} is not symmetric")));
            }
            Ok(())
        };
        check(&self.objective, "objective")?;
        for (k, c) in self.constraints.iter().enumerate() {
            check(&c.a, &format!("constraint {k}"))?;
        }
        Ok(())
    }

    /// Sum of the pinned diagonal values when every diagonal entry is pinned
    /// by its own selector constraint, which bounds tr(X) on the feasible set.
    fn pinned_trace(&self) -> Option<f64> {
        let n = self.dim;
        let mut pinned = vec![None; n];
        for c in &self.constraints {
            let nnz: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| c.a[(i, j)] != 0.0)
                .collect();
            if let [(i, j)] = nnz[..] {
                if i == j && c.a[(i, i)] == 1.0 {
                    pinned[i] = Some(c.b);
                }
            }
        }
        pinned.into_iter().sum()
    }
}

/// Primal–dual interior-point solver.
#[derive(Debug, Clone, Copy)]
pub struct InteriorPoint {
    pub max_iterations: usize,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
}

impl Default for InteriorPoint {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            step_fraction: 0.95,
        }
    }
}

/// Largest α with M + α·D ⪰ 0, given M ≻ 0 with Cholesky factor `chol`.
fn max_step(chol: &Cholesky<f64, nalgebra::Dyn>, d: &DMatrix<f64>) -> f64 {
    let l = chol.l();
    let linv_d = l.solve_lower_triangular(d).expect("triangular solve");
    let s = l
        .solve_lower_triangular(&linv_d.transpose())
        .expect("triangular solve");
    let s = (&s + s.transpose()) * 0.5;
    let lmin = SymmetricEigen::new(s).eigenvalues.min();
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(sym(m.clone())).eigenvalues.min()
}

struct Workspace<'a> {
    a: Vec<&'a DMatrix<f64>>,
    b: DVector<f64>,
    c: DMatrix<f64>,
}

impl Workspace<'_> {
    fn apply(&self, x: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_iterator(self.a.len(), self.a.iter().map(|a| a.dot(x)))
    }

    fn adjoint(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let n = self.c.nrows();
        self.a
            .iter()
            .zip(y.iter())
            .fold(DMatrix::zeros(n, n), |acc, (a, &yi)| acc + *a * yi)
    }
}

/// Factor of the Schur complement M_ij = tr(A_i W A_j W) = ⟨Gᵀ A_i G, Gᵀ A_j G⟩
/// for W = G Gᵀ. M = UᵀU comes from a QR of the stacked Gᵀ A_k G, which avoids
/// forming M explicitly.
struct SchurFactor {
    u: DMatrix<f64>,
}

impl SchurFactor {
    fn new(a: &[&DMatrix<f64>], g: &DMatrix<f64>) -> Option<Self> {
        let n = g.nrows();
        let gt = g.transpose();
        let mut stacked = DMatrix::zeros(n * n, a.len());
        for (k, ak) in a.iter().enumerate() {
            let gk = &gt * *ak * g;
            stacked.column_mut(k).copy_from_slice(gk.as_slice());
        }
        let u = stacked.qr().r();
        let dmax = u.diagonal().amax();
        if !(dmax > 0.0) || u.diagonal().iter().any(|d| d.abs() <= 1e-15 * dmax) {
            return None;
        }
        Some(Self { u })
    }

    fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let w = self.u.tr_solve_upper_triangular(rhs).expect("nonsingular");
        self.u.solve_upper_triangular(&w).expect("nonsingular")
    }
}

/// Indices of a maximal linearly independent subset of the constraint
/// matrices, and whether the dropped constraints agree with the kept ones.
fn independent_constraints(problem: &DenseSdp) -> (Vec<usize>, bool) {
    let mut basis: Vec<DMatrix<f64>> = Vec::new();
    let mut keep = Vec::new();
    for (k, c) in problem.constraints.iter().enumerate() {
        let mut r = c.a.clone();
        for q in &basis {
            r -= q * q.dot(&r);
        }
        let norm = r.norm();
        if norm > 1e-10 * c.a.norm() {
            basis.push(r / norm);
            keep.push(k);
        }
    }
    let m = keep.len();
    let gram = DMatrix::from_fn(m, m, |i, j| {
        problem.constraints[keep[i]]
            .a
            .dot(&problem.constraints[keep[j]].a)
    });
    let Some(chol) = Cholesky::new(gram) else {
        return (keep, false);
    };
    let b = DVector::from_iterator(m, keep.iter().map(|&k| problem.constraints[k].b));
    let t = chol.solve(&b);
    let x0 = keep.iter().zip(t.iter()).fold(
        DMatrix::zeros(problem.dim, problem.dim),
        |acc, (&k, &tk)| acc + &problem.constraints[k].a * tk,
    );
    let consistent = problem
        .constraints
        .iter()
        .all(|c| (c.a.dot(&x0) - c.b).abs() <= 1e-9 * (1.0 + c.b.abs()));
    (keep, consistent)
}

impl SdpSolver for InteriorPoint {
    fn solve(&self, problem: &DenseSdp, tol: f64) -> Result<SdpSolution> {
        problem.validate()?;
        if !(tol > 0.0) {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let n = problem.dim;
        let (keep, consistent) = independent_constraints(problem);
        if !consistent {
            let x = DMatrix::identity(n, n);
            return Ok(SdpSolution {
                value: f64::NEG_INFINITY,
                primal_residual: problem.max_residual(&x),
                x,
                y: DVector::zeros(problem.constraints.len()),
                dual_value: f64::NEG_INFINITY,
                gap: f64::INFINITY,
                status: SdpStatus::Infeasible,
                iterations: 0,
            });
        }
        let m = keep.len();
        // Internally: minimize ⟨c, X⟩ with c = −C; dual max bᵀy, Aᵀy + Z = c.
        let ws = Workspace {
            a: keep.iter().map(|&k| &problem.constraints[k].a).collect(),
            b: DVector::from_iterator(m, keep.iter().map(|&k| problem.constraints[k].b)),
            c: -problem.objective.clone(),
        };
        let nf = n as f64;
        let gram = DMatrix::from_fn(m, m, |i, j| ws.a[i].dot(ws.a[j]));
        let gram = Cholesky::new(gram).expect("independent constraints");

        let mut x = DMatrix::<f64>::identity(n, n);
        let mut z = DMatrix::<f64>::identity(n, n) * (1.0 + ws.c.norm());
        let mut y = DVector::<f64>::zeros(m);
        let mut status = SdpStatus::MaxIter;
        let mut iterations = 0;
        let trace_bound = problem.pinned_trace();
        // Certified bound (maximize sense) from y alone: −bᵀy plus the trace
        // bound times the infeasibility of the exact dual slack c − Aᵀy.
        let certify = |x: &DMatrix<f64>, y: &DVector<f64>| {
            let slack = &ws.c - ws.adjoint(y);
            let lmin = min_eigenvalue(&slack);
            let t = trace_bound.unwrap_or_else(|| x.trace());
            -ws.b.dot(y) + problem.offset + (-lmin).max(0.0) * t
        };
        let mut best: Option<(f64, DMatrix<f64>, DVector<f64>)> = None;

        for it in 0..self.max_iterations {
            iterations = it + 1;
            let rp = &ws.b - ws.apply(&x);
            let rd = &ws.c - &z - ws.adjoint(&y);
            let mu = x.dot(&z) / nf;
            let value = problem.objective_value(&x);
            let score = (certify(&x, &y) - value).abs().max(rp.amax());
            if best.as_ref().is_none_or(|b| score < b.0) {
                best = Some((score, x.clone(), y.clone()));
            }
            if score <= tol {
                status = SdpStatus::Optimal;
                break;
            }
            if x.amax() > 1e12 || y.amax() > 1e12 {
                status = SdpStatus::Infeasible;
                break;
            }

            // Nesterov–Todd scaling: with X = Lx Lxᵀ, Z = Lz Lzᵀ and
            // Lzᵀ Lx = U Λ Vᵀ, G = Lx V Λ^{-1/2} gives Gᵀ Z G = G⁻¹ X G⁻ᵀ = Λ.
            let Some(xchol) = Cholesky::new(x.clone()) else {
                break;
            };
            let Some(zchol) = Cholesky::new(z.clone()) else {
                break;
            };
            let lx = xchol.l();
            let svd = (zchol.l().transpose() * &lx).svd(true, true);
            let (Some(v_t), lambda) = (svd.v_t, svd.singular_values) else {
                break;
            };
            if lambda.min() <= 0.0 {
                break;
            }
            let g = &lx * v_t.transpose() * DMatrix::from_diagonal(&lambda.map(|l| l.powf(-0.5)));
            let Some(lx_inv) = lx.solve_lower_triangular(&DMatrix::identity(n, n)) else {
                break;
            };
            let g_inv = DMatrix::from_diagonal(&lambda.map(f64::sqrt)) * &v_t * lx_inv;
            let w = &g * g.transpose();
            let Some(schur) = SchurFactor::new(&ws.a, &g) else {
                break;
            };

            let w_rd_w = &w * &rd * &w;
            let direction = |d: &DMatrix<f64>| {
                let t = &g * d * g.transpose();
                let rhs = &rp - ws.apply(&(&t - &w_rd_w));
                let dy = schur.solve(&rhs);
                let dz = &rd - ws.adjoint(&dy);
                let dx = sym(t - &w * &dz * &w);
                // Restore A(ΔX) = r_p, which round-off erodes as X Z → 0.
                let fix = ws.adjoint(&gram.solve(&(&rp - ws.apply(&dx))));
                (dx + fix, dy, dz)
            };
            // Solves Λ∘D = rhs for the symmetrized product (ΛD + DΛ)/2.
            let lyapunov = |rhs: &DMatrix<f64>| {
                DMatrix::from_fn(n, n, |i, j| 2.0 * rhs[(i, j)] / (lambda[i] + lambda[j]))
            };

            // Predictor.
            let (dx_a, _, dz_a) = direction(&DMatrix::from_diagonal(&(-&lambda)));
            let ap = max_step(&xchol, &dx_a).min(1.0);
            let ad = max_step(&zchol, &dz_a).min(1.0);
            let mu_aff = (&x + &dx_a * ap).dot(&(&z + &dz_a * ad)) / nf;
            let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

            // Corrector.
            let dxs = &g_inv * &dx_a * g_inv.transpose();
            let dzs = g.transpose() * &dz_a * &g;
            let lam2 = DMatrix::from_diagonal(&lambda.map(|l| l * l));
            let centred = DMatrix::identity(n, n) * (sigma * mu) - lam2;
            let frac = self.step_fraction.max(0.9 + 0.09 * ap.min(ad));
            let steps = |(dx, dy, dz): (DMatrix<f64>, DVector<f64>, DMatrix<f64>)| {
                let ap = (frac * max_step(&xchol, &dx)).min(1.0);
                let ad = (frac * max_step(&zchol, &dz)).min(1.0);
                (dx, dy, dz, ap, ad)
            };
            let mut chosen = steps(direction(&lyapunov(&(&centred - sym(&dxs * &dzs)))));
            if chosen.3.min(chosen.4) < 0.5 {
                let plain = steps(direction(&lyapunov(&centred)));
                if plain.3.min(plain.4) > chosen.3.min(chosen.4) {
                    chosen = plain;
                }
            }
            let (dx, dy, dz, ap, ad) = chosen;
            x += &dx * ap;
            x = sym(x);
            y += &dy * ad;
            z += &dz * ad;
            z = sym(z);
            if ap < 1e-12 && ad < 1e-12 {
                break;
            }
        }

        if status != SdpStatus::Optimal {
            if let Some((_, bx, by)) = best {
                x = bx;
                y = by;
            }
        }
        let value = problem.objective_value(&x);
        let primal_residual = problem.max_residual(&x);
        let dual_value = certify(&x, &y);
        let gap = dual_value - value;
        if status == SdpStatus::Optimal && (gap.abs() > tol || primal_residual > tol) {
            status = SdpStatus::MaxIter;
        }
        let mut y_full = DVector::zeros(problem.constraints.len());
        for (i, &k) in keep.iter().enumerate() {
            y_full[k] = y[i];
        }
        Ok(SdpSolution {
            value,
            x,
            y: y_full,
            dual_value,
            gap,
            status,
            iterations,
            primal_residual,
        })
    }
}

/// Solves with the default [`InteriorPoint`] backend.
pub fn solve_sdp(problem: &DenseSdp, tol: f64) -> Result<SdpSolution> {
    InteriorPoint::default().solve(problem, tol)
}

/// One sparse objective term: `value` times the common entry of a class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassCoefficient {
    pub class: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterchangeObjective {
    pub constant: f64,
    pub coefficients: Vec<ClassCoefficient>,
}

/// A set of matrix cells constrained to share one value, optionally fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterchangeClass {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    /// Upper-triangle cells `[i, j]` with i ≤ j.
    pub cells: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<f64>,
}

/// JSON interchange form of a moment-matrix SDP: maximize
/// `constant + Σ value · X[class]` over symmetric X ⪰ 0 whose cells are
/// equal within each class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpInterchange {
    pub dimension: usize,
    pub objective: InterchangeObjective,
    pub classes: Vec<InterchangeClass>,
}

impl SdpInterchange {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Standard-form problem: fixed classes become pins, other classes tie
    /// every cell to the first one.
    pub fn to_dense(&self) -> Result<DenseSdp> {
        let n = self.dimension;
        let mut p = DenseSdp::new(n);
        let mut seen = vec![vec![false; n]; n];
        let mut representative = std::collections::HashMap::new();
        for class in &self.classes {
            let Some(&[i0, j0]) = class.cells.first() else {
                return Err(Error::Domain(format!("class {} has no cells", class.id)));
            };
            for &[i, j] in &class.cells {
                if i >= n || j >= n || i > j {
                    return Err(Error::Domain(format!(
                        "class {} has invalid cell [{i}, {j}] for dimension {n}",
                        class.id
                    )));
                }
                if std::mem::replace(&mut seen[i][j], true) {
                    return Err(Error::Domain(format!("cell [{i}, {j}] listed twice")));
                }
                match class.fixed {
                    Some(v) => p.pin_entry(i, j, v),
                    None if (i, j) != (i0, j0) => p.tie_entries((i0, j0), (i, j)),
                    None => {}
                }
            }
            if representative.insert(class.id, (i0, j0)).is_some() {
                return Err(Error::Domain(format!("duplicate class id {}", class.id)));
            }
        }
        p.offset = self.objective.constant;
        for term in &self.objective.coefficients {
            let &(i, j) = representative.get(&term.class).ok_or_else(|| {
                Error::Domain(format!("objective references unknown class {}", term.class))
            })?;
            p.objective += entry_selector(n, i, j) * term.value;
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_diagonal(n: usize) -> DenseSdp {
        let mut p = DenseSdp::new(n);
        for i in 0..n {
            p.pin_entry(i, i, 1.0);
        }
        p
    }

    #[test]
    fn single_correlation() {
        let mut p = unit_diagonal(2);
        p.objective = entry_selector(2, 0, 1);
        let s = solve_sdp(&p, 1e-9).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert_abs_diff_eq!(s.value, 1.0, epsilon = 1e-8);
        assert!(s.dual_value >= s.value - 1e-12);
    }

    #[test]
    fn max_cut_triangle() {
        // maximize −Σ_{i<j} X_ij with unit diagonal: optimum 3/2 at X_ij = −1/2.
        let mut p = unit_diagonal(3);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            p.objective -= entry_selector(3, i, j);
        }
        let s = solve_sdp(&p, 1e-9).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert_abs_diff_eq!(s.value, 1.5, epsilon = 1e-8);
        assert!(min_eigenvalue(&s.x) >= -1e-9);
        assert!(s.primal_residual <= 1e-9);
    }

    #[test]
    fn offset_is_added() {
        let mut p = unit_diagonal(2);
        p.objective = entry_selector(2, 0, 1);
        p.offset = -0.25;
        let s = solve_sdp(&p, 1e-9).unwrap();
        assert_abs_diff_eq!(s.value, 0.75, epsilon = 1e-8);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let mut p = unit_diagonal(3);
        p.constraints.push(SdpConstraint {
            a: DMatrix::identity(2, 2),
            b: 1.0,
        });
        assert!(matches!(solve_sdp(&p, 1e-9), Err(Error::Domain(_))));
        let mut q = unit_diagonal(2);
        q.objective[(0, 1)] = 1.0;
        assert!(matches!(solve_sdp(&q, 1e-9), Err(Error::Domain(_))));
    }

    #[test]
    fn deterministic() {
        let mut p = unit_diagonal(3);
        p.objective = entry_selector(3, 0, 1) + entry_selector(3, 1, 2) * 0.3;
        let a = solve_sdp(&p, 1e-9).unwrap();
        let b = solve_sdp(&p, 1e-9).unwrap();
        assert!((a.value - b.value).abs() <= 1e-10);
    }

    #[test]
    fn interchange_round_trip() {
        let json = r#"{
            "dimension": 2,
            "objective": {"constant": 0.5, "coefficients": [{"class": 1, "value": 2.0}]},
            "classes": [
                {"id": 0, "word": "I", "cells": [[0, 0], [1, 1]], "fixed": 1.0},
                {"id": 1, "cells": [[0, 1]]}
            ]
        }"#;
        let ic = SdpInterchange::from_json(json).unwrap();
        let back = SdpInterchange::from_json(&ic.to_json().unwrap()).unwrap();
        assert_eq!(ic, back);
        let s = solve_sdp(&ic.to_dense().unwrap(), 1e-9).unwrap();
        assert_abs_diff_eq!(s.value, 2.5, epsilon = 1e-8);
    }

    #[test]
    fn interchange_rejects_bad_cells() {
        let ic = SdpInterchange {
            dimension: 2,
            objective: InterchangeObjective {
                constant: 0.0,
                coefficients: vec![ClassCoefficient {
                    class: 7,
                    value: 1.0,
                }],
            },
            classes: vec![InterchangeClass {
                id: 0,
                word: None,
                cells: vec![[0, 0], [1, 1]],
                fixed: Some(1.0),
            }],
        };
        assert!(ic.to_dense().is_err());
        let mut bad = ic.clone();
        bad.objective.coefficients.clear();
        bad.classes[0].cells.push([1, 0]);
        assert!(bad.to_dense().is_err());
    }

    #[test]
    fn infeasible_is_reported() {
        // X_00 = 1 and X_00 = 2 cannot both hold.
        let mut p = unit_diagonal(2);
        p.pin_entry(0, 0, 2.0);
        let s = solve_sdp(&p, 1e-9).unwrap();
        assert_ne!(s.status, SdpStatus::Optimal);
    }
}
