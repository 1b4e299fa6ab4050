use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A dichotomic observable: A_x or B_y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    A0,
    A1,
    B0,
    B1,
}

impl Letter {
    pub fn is_alice(self) -> bool {
        matches!(self, Letter::A0 | Letter::A1)
    }

    pub fn setting(self) -> usize {
        match self {
            Letter::A0 | Letter::B0 => 0,
            Letter::A1 | Letter::B1 => 1,
        }
    }

    pub fn alice(x: usize) -> Self {
        [Letter::A0, Letter::A1][x]
    }

    pub fn bob(y: usize) -> Self {
        [Letter::B0, Letter::B1][y]
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Letter::A0 => "A0",
            Letter::A1 => "A1",
            Letter::B0 => "B0",
            Letter::B1 => "B1",
        };
        f.write_str(s)
    }
}

/// A product of observables. Canonical words list Alice's letters before
/// Bob's and never repeat a letter twice in a row.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OperatorWord {
    letters: Vec<Letter>,
    canonical: bool,
}

impl OperatorWord {
    pub fn identity() -> Self {
        Self {
            letters: Vec::new(),
            canonical: true,
        }
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        let mut w = Self {
            letters,
            canonical: false,
        };
        w.canonical = w.canonicalized().letters == w.letters;
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Adjoint: generators are Hermitian, so the adjoint reverses the word.
    pub fn adjoint(&self) -> Self {
        Self::new(self.letters.iter().rev().copied().collect())
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self::new(letters)
    }

    /// Commutes every A-letter left of every B-letter, then cancels adjacent
    /// repeats within each party.
    pub fn canonicalized(&self) -> Self {
        let reduce = |it: &mut dyn Iterator<Item = Letter>| {
            let mut out: Vec<Letter> = Vec::new();
            for l in it {
                if out.last() == Some(&l) {
                    out.pop();
                } else {
                    out.push(l);
                }
            }
            out
        };
        let mut letters = reduce(&mut self.letters.iter().copied().filter(|l| l.is_alice()));
        letters.extend(reduce(
            &mut self.letters.iter().copied().filter(|l| !l.is_alice()),
        ));
        Self {
            letters,
            canonical: true,
        }
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("I");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for OperatorWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "I" || s.is_empty() {
            return Ok(Self::identity());
        }
        let bytes = s.as_bytes();
        if !bytes.len().is_multiple_of(2) {
            return Err(Error::Domain(format!("malformed operator word {s:?}")));
        }
        let letters = bytes
            .chunks(2)
            .map(|c| match c {
                b"A0" => Ok(Letter::A0),
                b"A1" => Ok(Letter::A1),
                b"B0" => Ok(Letter::B0),
                b"B1" => Ok(Letter::B1),
                _ => Err(Error::Domain(format!("malformed operator word {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> OperatorWord {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_rules() {
        assert_eq!(w("B0A1").canonicalized(), w("A1B0"));
        assert_eq!(w("A0A0").canonicalized(), OperatorWord::identity());
        assert_eq!(w("A1A0A0A1").canonicalized(), OperatorWord::identity());
        assert_eq!(w("B0A0A1B0").canonicalized(), w("A0A1"));
        assert_eq!(w("A1A0A1A0").canonicalized(), w("A1A0A1A0"));
    }

    #[test]
    fn canonical_flag() {
        assert!(w("A0B1").is_canonical());
        assert!(!w("B1A0").is_canonical());
        assert!(!w("A0A0").is_canonical());
        assert!(w("A0A1").is_canonical());
    }

    #[test]
    fn display_round_trip() {
        for s in ["I", "A0", "A1B0", "A0A1B1B0"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert!("A2".parse::<OperatorWord>().is_err());
        assert!("A".parse::<OperatorWord>().is_err());
    }

    #[test]
    fn adjoint_reverses() {
        assert_eq!(w("A0A1B0").adjoint().letters(), w("B0A1A0").letters());
    }
}
