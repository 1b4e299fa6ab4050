//! Vertices of the no-signaling polytope that matter here: the PR box
//! `PR_1` and the local deterministic (LD) points, plus the nine-weight
//! decomposition of CHSH-violating no-signaling behaviors.

use serde::{Deserialize, Serialize};

use crate::behavior::{outcome_index, setting_index, Behavior, Outcome};
use crate::error::{Error, Result};

/// Local deterministic strategy: Alice outputs `a[x]`, Bob outputs `b[y]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LdAssignment {
    pub a: [Outcome; 2],
    pub b: [Outcome; 2],
}

use Outcome::{Plus as P, Zero as Z};

/// The eight CHSH-saturating LD points with their index in the external
/// sixteen-point enumeration. Read off from the columns in which each weight
/// appears in the nine-weight decomposition table.
const SIXTEEN_POINT_INDEX: [(u8, LdAssignment); 8] = [
    (
        1,
        LdAssignment {
            a: [P, P],
            b: [P, P],
        },
    ),
    (
        4,
        LdAssignment {
            a: [Z, Z],
            b: [Z, Z],
        },
    ),
    (
        5,
        LdAssignment {
            a: [P, P],
            b: [P, Z],
        },
    ),
    (
        8,
        LdAssignment {
            a: [Z, Z],
            b: [Z, P],
        },
    ),
    (
        9,
        LdAssignment {
            a: [P, Z],
            b: [P, P],
        },
    ),
    (
        12,
        LdAssignment {
            a: [Z, P],
            b: [Z, Z],
        },
    ),
    (
        14,
        LdAssignment {
            a: [P, Z],
            b: [Z, P],
        },
    ),
    (
        15,
        LdAssignment {
            a: [Z, P],
            b: [P, Z],
        },
    ),
];

impl LdAssignment {
    pub fn new(a0: Outcome, a1: Outcome, b0: Outcome, b1: Outcome) -> Self {
        Self {
            a: [a0, a1],
            b: [b0, b1],
        }
    }

    /// All sixteen LD assignments.
    pub fn all() -> impl Iterator<Item = LdAssignment> {
        (0..16u8).map(|bits| {
            let o = |k: u8| if bits >> k & 1 == 0 { P } else { Z };
            Self::new(o(3), o(2), o(1), o(0))
        })
    }

    /// Looks up one of the eight CHSH-saturating points by its index in
    /// {1, 4, 5, 8, 9, 12, 14, 15}.
    pub fn from_sixteen_point_index(index: u8) -> Option<Self> {
        SIXTEEN_POINT_INDEX
            .iter()
            .find(|(i, _)| *i == index)
            .map(|(_, d)| *d)
    }

    pub fn sixteen_point_index(&self) -> Option<u8> {
        SIXTEEN_POINT_INDEX
            .iter()
            .find(|(_, d)| d == self)
            .map(|(i, _)| *i)
    }

    pub fn behavior(&self) -> Behavior {
        let mut p = [[0.0; 4]; 4];
        for x in 0..2 {
            for y in 0..2 {
                p[setting_index(x, y)][outcome_index(self.a[x], self.b[y])] = 1.0;
            }
        }
        Behavior::new(p)
    }
}

pub fn ld_distribution(assignment: LdAssignment) -> Behavior {
    assignment.behavior()
}

/// `PR_1`: perfectly correlated on x0y0, x0y1, x1y0 and anti-correlated on x1y1.
pub fn pr_box() -> Behavior {
    Behavior::from_fn(|a, b, x, y| {
        let correlated = (a == b) != (x == 1 && y == 1);
        if correlated {
            0.5
        } else {
            0.0
        }
    })
    .with_label("PR_1")
}

/// Weights of `PR_1` and the eight CHSH-saturating LD points.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NsDecomposition {
    pub p_pr: f64,
    pub p1: f64,
    pub p4: f64,
    pub p5: f64,
    pub p8: f64,
    pub p9: f64,
    pub p12: f64,
    pub p14: f64,
    pub p15: f64,
}

impl NsDecomposition {
    pub fn ld_weights(&self) -> [(u8, f64); 8] {
        [
            (1, self.p1),
            (4, self.p4),
            (5, self.p5),
            (8, self.p8),
            (9, self.p9),
            (12, self.p12),
            (14, self.p14),
            (15, self.p15),
        ]
    }

    pub fn total(&self) -> f64 {
        self.p_pr + self.ld_weights().iter().map(|(_, w)| w).sum::<f64>()
    }

    /// α = 2(p1 + p5 + p9) + p14 + p15.
    pub fn alpha(&self) -> f64 {
        2.0 * (self.p1 + self.p5 + self.p9) + self.p14 + self.p15
    }

    pub fn validate(&self) -> Result<()> {
        let negative = std::iter::once(self.p_pr)
            .chain(self.ld_weights().iter().map(|(_, w)| *w))
            .any(|w| !(w >= -1e-12));
        if negative {
            return Err(Error::Domain(format!("negative weight in {self:?}")));
        }
        let total = self.total();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("weights sum to {total}, expected 1")));
        }
        Ok(())
    }
}

/// The behavior `p_PR·PR_1 + Σ p_i D_i`.
pub fn ns_mixture(d: &NsDecomposition) -> Result<Behavior> {
    d.validate()?;
    let pr = pr_box();
    let lds: Vec<(f64, Behavior)> = d
        .ld_weights()
        .iter()
        .map(|&(i, w)| {
            (
                w,
                LdAssignment::from_sixteen_point_index(i)
                    .unwrap()
                    .behavior(),
            )
        })
        .collect();
    let parts = std::iter::once((d.p_pr, &pr)).chain(lds.iter().map(|(w, b)| (*w, b)));
    Ok(Behavior::mixture(parts))
}
