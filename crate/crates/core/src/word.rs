//! Words in the generators `ι` and `τ`.
//!
//! Text syntax is a comma-separated list of letters `i`, `i^k`, `t` and `t^k`,
//! e.g. `i,t^2,i,t^-1`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Iota,
    Tau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub exponent: i64,
}

impl Letter {
    pub fn iota(exponent: i64) -> Self {
        Letter {
            generator: Generator::Iota,
            exponent,
        }
    }

    pub fn tau(exponent: i64) -> Self {
        Letter {
            generator: Generator::Tau,
            exponent,
        }
    }
}

/// Sequence of letters with nonzero exponents and no two adjacent `τ` letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a word, merging adjacent `τ` powers and dropping zero exponents.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Word::new();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn push(&mut self, letter: Letter) {
        if letter.exponent == 0 {
            return;
        }
        if letter.generator == Generator::Tau {
            if let Some(last) = self.letters.last_mut() {
                if last.generator == Generator::Tau {
                    last.exponent += letter.exponent;
                    if last.exponent == 0 {
                        self.letters.pop();
                    }
                    return;
                }
            }
        }
        self.letters.push(letter);
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(*l);
        }
        w
    }

    /// Number of generator applications, counting `|exponent|` per letter.
    pub fn letter_count(&self) -> u64 {
        self.letters.iter().map(|l| l.exponent.unsigned_abs()).sum()
    }

    pub fn parse(input: &str) -> Result<Word> {
        let mut w = Word::new();
        if input.trim().is_empty() {
            return Ok(w);
        }
        let mut offset = 0;
        for raw in input.split(',') {
            let lead = raw.len() - raw.trim_start().len();
            let tok = raw.trim();
            let pos = offset + lead;
            offset += raw.len() + 1;
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e = e.trim().parse::<i64>().map_err(|_| {
                        Error::parse(pos + n.len() + 1, format!("bad exponent in `{tok}`"))
                    })?;
                    (n.trim(), e)
                }
                None => (tok, 1),
            };
            let letter = match name {
                "i" => Letter::iota(exp),
                "t" => Letter::tau(exp),
                "" => return Err(Error::parse(pos, "empty letter")),
                other => {
                    return Err(Error::parse(
                        pos,
                        format!("unknown generator `{other}`; expected `i` or `t`"),
                    ))
                }
            };
            if exp == 0 {
                return Err(Error::parse(pos, "exponent must be nonzero"));
            }
            w.push(letter);
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                let name = match l.generator {
                    Generator::Iota => "i",
                    Generator::Tau => "t",
                };
                if l.exponent == 1 {
                    name.to_owned()
                } else {
                    format!("{name}^{}", l.exponent)
                }
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display() {
        let w = Word::parse("i,t^2,i,t^-1").unwrap();
        assert_eq!(
            w.letters(),
            &[Letter::iota(1), Letter::tau(2), Letter::iota(1), Letter::tau(-1)]
        );
        assert_eq!(w.to_string(), "i,t^2,i,t^-1");
        assert_eq!(Word::parse("").unwrap(), Word::new());
    }

    #[test]
    fn adjacent_taus_merge() {
        let w = Word::parse("t,t^2,i,t,t^-1").unwrap();
        assert_eq!(w.letters(), &[Letter::tau(3), Letter::iota(1)]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Word::parse("i,x"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(Word::parse("i, t^z"), Err(Error::Parse { pos: 5, .. })));
        assert!(Word::parse("i,,t").is_err());
        assert!(Word::parse("t^0").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(exps in proptest::collection::vec((any::<bool>(), -5i64..=5), 0..12)) {
            let w = Word::from_letters(exps.into_iter().map(|(iota, e)| {
                if iota { Letter::iota(e) } else { Letter::tau(e) }
            }));
            prop_assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
        }
    }
}
