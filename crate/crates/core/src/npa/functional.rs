use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::structure::MomentStructure;
use crate::behavior::{Correlators, Outcome};

/// constant + Σ coeff_c · (moment of class c).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearFunctional {
    pub constant: f64,
    pub coeffs: BTreeMap<usize, f64>,
}

impl LinearFunctional {
    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, class: usize, coeff: f64) {
        *self.coeffs.entry(class).or_insert(0.0) += coeff;
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            constant: self.constant * s,
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, v * s)).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.constant += other.constant;
        for (&k, &v) in &other.coeffs {
            out.add_term(k, v);
        }
        out
    }

    /// Drops coefficients that cancelled to zero.
    pub fn pruned(mut self) -> Self {
        self.coeffs.retain(|_, v| *v != 0.0);
        self
    }

    /// Value on a moment vector indexed by class id.
    pub fn evaluate(&self, moments: &[f64]) -> f64 {
        self.constant
            + self
                .coeffs
                .iter()
                .map(|(&k, &v)| v * moments[k])
                .sum::<f64>()
    }

    pub fn references_only(&self, s: &MomentStructure) -> bool {
        self.coeffs.keys().all(|&k| k < s.num_classes())
    }
}

/// P(ab|xy) = ¼[1 + a⟨A_x⟩ + b⟨B_y⟩ + ab⟨A_xB_y⟩].
pub fn probability_functional(
    s: &MomentStructure,
    a: Outcome,
    b: Outcome,
    x: usize,
    y: usize,
) -> LinearFunctional {
    let (sa, sb) = (a.sign(), b.sign());
    let mut f = LinearFunctional::constant(0.25);
    f.add_term(s.alice_class(x), 0.25 * sa);
    f.add_term(s.bob_class(y), 0.25 * sb);
    f.add_term(s.joint_class(x, y), 0.25 * sa * sb);
    f
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EberhardFunctionals {
    pub k: LinearFunctional,
    pub l: LinearFunctional,
    pub m: LinearFunctional,
    pub n: LinearFunctional,
    pub o: LinearFunctional,
}

impl EberhardFunctionals {
    /// K η² − L η + M ξη − N ξ + O ξ².
    pub fn noisy_objective(&self, eta: f64, xi: f64) -> LinearFunctional {
        self.k
            .scaled(eta * eta)
            .plus(&self.l.scaled(-eta))
            .plus(&self.m.scaled(xi * eta))
            .plus(&self.n.scaled(-xi))
            .plus(&self.o.scaled(xi * xi))
            .pruned()
    }
}

pub fn eberhard_coefficient_functionals(s: &MomentStructure) -> EberhardFunctionals {
    use Outcome::{Plus as P, Zero as Z};
    let p = |a, b, x, y| probability_functional(s, a, b, x, y);
    let sum = |terms: &[(f64, LinearFunctional)]| {
        terms
            .iter()
            .fold(LinearFunctional::default(), |acc, (c, f)| {
                acc.plus(&f.scaled(*c))
            })
            .pruned()
    };

    let mut k = LinearFunctional::constant(0.5);
    k.add_term(s.alice_class(0), 0.5);
    k.add_term(s.bob_class(0), 0.5);
    k.add_term(s.joint_class(0, 0), 0.25);
    k.add_term(s.joint_class(0, 1), 0.25);
    k.add_term(s.joint_class(1, 0), 0.25);
    k.add_term(s.joint_class(1, 1), -0.25);

    let mut l = LinearFunctional::constant(1.0);
    l.add_term(s.alice_class(0), 0.5);
    l.add_term(s.bob_class(0), 0.5);

    let m = sum(&[
        (1.0, p(Z, P, 0, 0)),
        (1.0, p(P, Z, 0, 0)),
        (1.0, p(Z, P, 0, 1)),
        (1.0, p(P, Z, 1, 0)),
        (1.0, p(P, Z, 0, 1)),
        (1.0, p(Z, P, 1, 0)),
        (-1.0, p(Z, P, 1, 1)),
        (-1.0, p(P, Z, 1, 1)),
    ]);
    let n = sum(&[
        (1.0, p(Z, Z, 0, 1)),
        (1.0, p(Z, Z, 1, 0)),
        (1.0, p(Z, P, 0, 1)),
        (1.0, p(P, Z, 1, 0)),
    ]);
    let o = sum(&[
        (1.0, p(Z, Z, 0, 0)),
        (1.0, p(Z, Z, 0, 1)),
        (1.0, p(Z, Z, 1, 0)),
        (-1.0, p(Z, Z, 1, 1)),
    ]);
    EberhardFunctionals { k, l, m, n, o }
}

/// Moment vector carrying only the unit, single-party and A·B correlator
/// classes; other classes are left at zero.
pub fn correlator_moments(s: &MomentStructure, c: &Correlators) -> Vec<f64> {
    let mut v = vec![0.0; s.num_classes()];
    v[0] = 1.0;
    for x in 0..2 {
        v[s.alice_class(x)] = c.a[x];
        v[s.bob_class(x)] = c.b[x];
        for y in 0..2 {
            v[s.joint_class(x, y)] = c.ab[x][y];
        }
    }
    v
}
