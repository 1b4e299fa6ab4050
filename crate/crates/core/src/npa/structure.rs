use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::word::{Letter, OperatorWord};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NpaLevel {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "1+AB")]
    OnePlusAb,
    #[serde(rename = "2")]
    Two,
}

impl NpaLevel {
    pub const ALL: [NpaLevel; 3] = [NpaLevel::One, NpaLevel::OnePlusAb, NpaLevel::Two];

    /// Generating words, in the order used for matrix rows.
    pub fn words(self) -> Vec<OperatorWord> {
        use Letter::*;
        let single = |l| OperatorWord::new(vec![l]);
        let pair = |a, b| OperatorWord::new(vec![a, b]);
        let mut words = vec![
            OperatorWord::identity(),
            single(A0),
            single(A1),
            single(B0),
            single(B1),
        ];
        match self {
            NpaLevel::One => {}
            NpaLevel::OnePlusAb => {
                words.extend([pair(A0, B0), pair(A0, B1), pair(A1, B0), pair(A1, B1)]);
            }
            NpaLevel::Two => {
                words.extend([
                    pair(A0, A1),
                    pair(A0, B0),
                    pair(A0, B1),
                    pair(A1, A0),
                    pair(A1, B0),
                    pair(A1, B1),
                    pair(B0, B1),
                    pair(B1, B0),
                ]);
            }
        }
        words
    }
}

impl fmt::Display for NpaLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NpaLevel::One => "1",
            NpaLevel::OnePlusAb => "1+AB",
            NpaLevel::Two => "2",
        })
    }
}

impl FromStr for NpaLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_uppercase().as_str() {
            "1" => Ok(NpaLevel::One),
            "1+AB" => Ok(NpaLevel::OnePlusAb),
            "2" => Ok(NpaLevel::Two),
            other => Err(Error::Domain(format!(
                "unknown NPA level {other:?}; expected 1, 1+AB or 2"
            ))),
        }
    }
}

/// Moment matrix Γ_ij = ⟨w_i† w_j⟩ organised by equivalence classes of
/// canonical words.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentStructure {
    pub level: NpaLevel,
    pub words: Vec<OperatorWord>,
    /// Class id of every cell; symmetric.
    pub entry_class: Vec<Vec<usize>>,
    /// Canonical word of every class, indexed by class id.
    pub class_words: Vec<OperatorWord>,
    pub free_entries: Vec<usize>,
    pub unit_classes: Vec<usize>,
}

impl MomentStructure {
    pub fn new(level: NpaLevel) -> Self {
        let words = level.words();
        let n = words.len();
        let mut ids: BTreeMap<OperatorWord, usize> = BTreeMap::new();
        let mut class_words = vec![OperatorWord::identity()];
        ids.insert(OperatorWord::identity(), 0);
        let mut entry_class = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i..n {
                let word = words[i].adjoint().concat(&words[j]).canonicalized();
                let id = *ids.entry(word.clone()).or_insert_with(|| {
                    class_words.push(word);
                    class_words.len() - 1
                });
                entry_class[i][j] = id;
                entry_class[j][i] = id;
            }
        }
        Self {
            level,
            words,
            entry_class,
            free_entries: (1..class_words.len()).collect(),
            class_words,
            unit_classes: vec![0],
        }
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_words.len()
    }

    pub fn class_of(&self, word: &OperatorWord) -> Option<usize> {
        let c = word.canonicalized();
        self.class_words.iter().position(|w| *w == c)
    }

    /// Upper-triangle cells (i ≤ j) of every class, row-major.
    pub fn class_cells(&self) -> Vec<Vec<(usize, usize)>> {
        let mut cells = vec![Vec::new(); self.num_classes()];
        for i in 0..self.dim() {
            for j in i..self.dim() {
                cells[self.entry_class[i][j]].push((i, j));
            }
        }
        cells
    }

    /// Groups of off-diagonal cells forced equal, each with at least two cells.
    pub fn equality_groups(&self) -> Vec<Vec<(usize, usize)>> {
        self.class_cells()
            .into_iter()
            .map(|cells| {
                cells
                    .into_iter()
                    .filter(|(i, j)| i != j)
                    .collect::<Vec<_>>()
            })
            .filter(|cells| cells.len() > 1)
            .collect()
    }

    /// Number of independent pairwise equalities among off-diagonal cells.
    pub fn equality_count(&self) -> usize {
        self.equality_groups().iter().map(|g| g.len() - 1).sum()
    }

    /// Class id of ⟨A_x⟩.
    pub fn alice_class(&self, x: usize) -> usize {
        self.class_of(&OperatorWord::new(vec![Letter::alice(x)]))
            .expect("level ≥ 1")
    }

    pub fn bob_class(&self, y: usize) -> usize {
        self.class_of(&OperatorWord::new(vec![Letter::bob(y)]))
            .expect("level ≥ 1")
    }

    pub fn joint_class(&self, x: usize, y: usize) -> usize {
        self.class_of(&OperatorWord::new(vec![Letter::alice(x), Letter::bob(y)]))
            .expect("level ≥ 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(MomentStructure::new(NpaLevel::One).dim(), 5);
        assert_eq!(MomentStructure::new(NpaLevel::OnePlusAb).dim(), 9);
        assert_eq!(MomentStructure::new(NpaLevel::Two).dim(), 13);
    }

    #[test]
    fn level_parsing() {
        assert_eq!("1".parse::<NpaLevel>().unwrap(), NpaLevel::One);
        assert_eq!("1+ab".parse::<NpaLevel>().unwrap(), NpaLevel::OnePlusAb);
        assert_eq!("2".parse::<NpaLevel>().unwrap(), NpaLevel::Two);
        assert!("3".parse::<NpaLevel>().is_err());
        assert_eq!(NpaLevel::OnePlusAb.to_string(), "1+AB");
    }

    #[test]
    fn level_one_matches_display() {
        let s = MomentStructure::new(NpaLevel::One);
        let name = |i: usize, j: usize| s.class_words[s.entry_class[i][j]].to_string();
        assert_eq!(name(0, 1), "A0");
        assert_eq!(name(0, 4), "B1");
        assert_eq!(name(1, 2), "A0A1");
        assert_eq!(name(1, 3), "A0B0");
        assert_eq!(name(2, 4), "A1B1");
        assert_eq!(name(3, 4), "B0B1");
        for i in 0..5 {
            assert_eq!(s.entry_class[i][i], 0);
        }
    }

    #[test]
    fn level_two_landmarks() {
        let s = MomentStructure::new(NpaLevel::Two);
        assert_eq!(s.entry_class[0][1], s.alice_class(0));
        assert_eq!(s.entry_class[0][6], s.joint_class(0, 0));
        assert_eq!(s.entry_class[0][10], s.joint_class(1, 1));
        assert_eq!(s.entry_class[5][5], 0);
        for i in 0..13 {
            for j in 0..13 {
                assert_eq!(s.entry_class[i][j], s.entry_class[j][i]);
            }
        }
    }

    #[test]
    fn off_diagonal_cells_avoid_unit_class() {
        for level in NpaLevel::ALL {
            let s = MomentStructure::new(level);
            for i in 0..s.dim() {
                for j in 0..s.dim() {
                    assert_eq!(s.entry_class[i][j] == 0, i == j);
                }
            }
        }
    }
}
