use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::behavior::{Behavior, Outcome};

/// Two-qubit realization: the state cos θ |00⟩ + sin θ |11⟩ measured along
/// directions in the X–Z plane at the given angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumRealization {
    pub theta: f64,
    pub theta_a: [f64; 2],
    pub theta_b: [f64; 2],
}

impl QuantumRealization {
    pub fn new(theta: f64, theta_a0: f64, theta_a1: f64, theta_b0: f64, theta_b1: f64) -> Self {
        Self {
            theta,
            theta_a: [theta_a0, theta_a1],
            theta_b: [theta_b0, theta_b1],
        }
    }

    /// `[θ, θ_a0, θ_a1, θ_b0, θ_b1]`.
    pub fn angles(&self) -> [f64; 5] {
        [
            self.theta,
            self.theta_a[0],
            self.theta_a[1],
            self.theta_b[0],
            self.theta_b[1],
        ]
    }

    pub fn from_angles(v: [f64; 5]) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4])
    }

    /// Whether θ ∈ [0, π/2] and every measurement angle is in [0, 2π].
    pub fn in_bounds(&self) -> bool {
        (0.0..=FRAC_PI_2).contains(&self.theta)
            && self
                .theta_a
                .iter()
                .chain(&self.theta_b)
                .all(|t| (0.0..=TAU).contains(t))
    }

    /// Maps arbitrary real angles to the box θ ∈ [0, π/2], others in [0, 2π),
    /// without changing any probability.
    ///
    /// θ → θ + π flips the global sign of the state, and θ → −θ equals
    /// applying σ_Z on Bob's qubit, which reflects his measurement angles.
    pub fn canonical(&self) -> Self {
        let mut theta = self.theta.rem_euclid(PI);
        let mut theta_b = self.theta_b;
        if theta > FRAC_PI_2 {
            theta = PI - theta;
            theta_b = [-theta_b[0], -theta_b[1]];
        }
        let wrap = |t: f64| {
            let w = t.rem_euclid(TAU);
            if w >= TAU {
                0.0
            } else {
                w
            }
        };
        Self {
            theta,
            theta_a: self.theta_a.map(wrap),
            theta_b: theta_b.map(wrap),
        }
    }

    /// Behavior from the closed-form trigonometric expressions.
    pub fn probabilities(&self) -> Behavior {
        let (s2, c2) = (2.0 * self.theta).sin_cos();
        let theta = self.theta;
        Behavior::from_fn(|a, b, x, y| {
            let tx = self.theta_a[x];
            let ty = self.theta_b[y];
            let (sx, cx) = tx.sin_cos();
            let (sy, cy) = ty.sin_cos();
            match (a, b) {
                (Outcome::Plus, Outcome::Plus) => {
                    (2.0 + (2.0 * theta - tx).cos()
                        + (2.0 * theta + tx).cos()
                        + 2.0 * cy * (c2 + cx)
                        + 2.0 * sx * sy * s2)
                        / 8.0
                }
                (Outcome::Plus, Outcome::Zero) => {
                    let (st, ct) = theta.sin_cos();
                    (tx / 2.0).sin().powi(2) * (ty / 2.0).cos().powi(2) * st * st
                        + (tx / 2.0).cos().powi(2) * (ty / 2.0).sin().powi(2) * ct * ct
                        - 0.25 * sx * sy * s2
                }
                (Outcome::Zero, Outcome::Plus) => {
                    (2.0 + (2.0 * theta + ty).cos() + (2.0 * theta - ty).cos()
                        - 2.0 * cx * (c2 + cy)
                        - 2.0 * sx * sy * s2)
                        / 8.0
                }
                (Outcome::Zero, Outcome::Zero) => {
                    (1.0 + cx * cy - (cx + cy) * c2 + sx * sy * s2) / 4.0
                }
            }
        })
    }

    /// The state vector in the basis |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn state(&self) -> Vector4<f64> {
        Vector4::new(self.theta.cos(), 0.0, 0.0, self.theta.sin())
    }

    /// Alice's observables A_x ⊗ I and Bob's I ⊗ B_y as 4×4 matrices.
    pub fn observables(&self) -> ([Matrix4<f64>; 2], [Matrix4<f64>; 2]) {
        let id = Matrix2::<f64>::identity();
        let a = self.theta_a.map(|t| kron(&qubit_observable(t), &id));
        let b = self.theta_b.map(|t| kron(&id, &qubit_observable(t)));
        (a, b)
    }
}

/// cos t σ_Z + sin t σ_X.
fn qubit_observable(t: f64) -> Matrix2<f64> {
    let (s, c) = t.sin_cos();
    Matrix2::new(c, s, s, -c)
}

/// Rank-one projector onto outcome `o` of the qubit observable at angle t.
fn qubit_projector(t: f64, o: Outcome) -> Matrix2<f64> {
    (Matrix2::identity() + o.sign() * qubit_observable(t)) * 0.5
}

fn kron(a: &Matrix2<f64>, b: &Matrix2<f64>) -> Matrix4<f64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Born-rule probabilities ⟨ψ| Π_a^x ⊗ Π_b^y |ψ⟩ from explicit state and
/// projector matrices; independent of the closed forms.
pub fn born_rule_oracle(r: &QuantumRealization) -> Behavior {
    let psi = r.state();
    Behavior::from_fn(|a, b, x, y| {
        let op = kron(
            &qubit_projector(r.theta_a[x], a),
            &qubit_projector(r.theta_b[y], b),
        );
        psi.dot(&(op * psi))
    })
}

pub fn realization_probabilities(r: &QuantumRealization) -> Behavior {
    r.probabilities()
}
