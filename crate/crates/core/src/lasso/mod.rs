//! Ultimately periodic words `u v^ω` and exact evaluation over them.

mod entailed;
mod eval;
mod master;

pub use entailed::{composed_entailed, entailed_set, EntailedTrace};
pub use eval::{eval, holds, Evaluator, PeriodicBitSeq};
pub use master::{check_master, limit_sets, stability_index, LimitSets, MasterReport};

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// A valuation: the set of propositions that hold.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(BTreeSet<String>);

impl Letter {
    pub fn new<S: AsRef<str>>(props: impl IntoIterator<Item = S>) -> Self {
        Letter(props.into_iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn empty() -> Self {
        Letter::default()
    }

    pub fn contains(&self, prop: &str) -> bool {
        self.0.contains(prop)
    }

    pub fn props(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// Ordered atomic propositions. Letter `i` is the valuation whose members are
/// the names at the set bits of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Self {
        let set: BTreeSet<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
        assert!(set.len() < 20, "alphabet too large");
        Alphabet {
            names: set.into_iter().collect(),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letter_count(&self) -> usize {
        1 << self.names.len()
    }

    pub fn letter(&self, index: usize) -> Letter {
        Letter(
            self.names
                .iter()
                .enumerate()
                .filter(|(i, _)| index & (1 << i) != 0)
                .map(|(_, n)| n.clone())
                .collect(),
        )
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.letter_count()).map(|i| self.letter(i)).collect()
    }

    /// Index of the projection of `letter` onto this alphabet.
    pub fn index_of(&self, letter: &Letter) -> usize {
        self.names
            .iter()
            .enumerate()
            .filter(|(_, n)| letter.contains(n))
            .map(|(i, _)| 1 << i)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LassoError {
    #[error("the period of a lasso word must be non-empty")]
    EmptyPeriod,
    #[error("malformed lasso word at position {position}: {message}")]
    Syntax { position: usize, message: String },
}

/// `u v^ω` with `v` non-empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Self, LassoError> {
        if period.is_empty() {
            return Err(LassoError::EmptyPeriod);
        }
        Ok(LassoWord { prefix, period })
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Smallest position with the same suffix as `t`.
    pub fn canonical_position(&self, t: usize) -> usize {
        let u = self.prefix.len();
        if t < u {
            t
        } else {
            u + (t - u) % self.period.len()
        }
    }

    pub fn letter_at(&self, t: usize) -> &Letter {
        let c = self.canonical_position(t);
        if c < self.prefix.len() {
            &self.prefix[c]
        } else {
            &self.period[c - self.prefix.len()]
        }
    }

    /// `w_t`.
    pub fn suffix(&self, t: usize) -> LassoWord {
        let c = self.canonical_position(t);
        let u = self.prefix.len();
        if c < u {
            LassoWord {
                prefix: self.prefix[c..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            let k = c - u;
            let mut period = self.period[k..].to_vec();
            period.extend_from_slice(&self.period[..k]);
            LassoWord {
                prefix: vec![],
                period,
            }
        }
    }

    /// `w_{0t}`: the first `t` letters.
    pub fn first(&self, t: usize) -> Vec<Letter> {
        (0..t).map(|i| self.letter_at(i).clone()).collect()
    }

    /// Proposition names occurring in some letter.
    pub fn vars(&self) -> BTreeSet<String> {
        self.prefix
            .iter()
            .chain(self.period.iter())
            .flat_map(|l| l.props().map(str::to_string))
            .collect()
    }

    pub fn parse(src: &str) -> Result<Self, LassoError> {
        let Some(semi) = src.find(';') else {
            return Err(LassoError::Syntax {
                position: src.len(),
                message: "expected ';' between prefix and period".into(),
            });
        };
        if src[semi + 1..].contains(';') {
            return Err(LassoError::Syntax {
                position: semi + 1 + src[semi + 1..].find(';').unwrap_or(0),
                message: "more than one ';'".into(),
            });
        }
        let prefix = parse_letters(&src[..semi], 0)?;
        let period = parse_letters(&src[semi + 1..], semi + 1)?;
        LassoWord::new(prefix, period)
    }
}

fn parse_letters(src: &str, offset: usize) -> Result<Vec<Letter>, LassoError> {
    let err = |position: usize, message: &str| LassoError::Syntax {
        position: offset + position,
        message: message.to_string(),
    };
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == bytes.len() {
        return Ok(out);
    }
    loop {
        skip_ws(&mut i);
        if i >= bytes.len() || bytes[i] != b'{' {
            return Err(err(i, "expected '{'"));
        }
        let Some(close) = src[i..].find('}') else {
            return Err(err(i, "unclosed '{'"));
        };
        let body = &src[i + 1..i + close];
        let mut props = BTreeSet::new();
        for (k, name) in body.split(',').enumerate() {
            let name = name.trim();
            if name.is_empty() {
                if k == 0 && body.trim().is_empty() {
                    continue;
                }
                return Err(err(i + 1, "empty proposition name"));
            }
            let valid = name.starts_with(|c: char| c.is_ascii_lowercase())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(err(i + 1, &format!("invalid proposition '{name}'")));
            }
            props.insert(name.to_string());
        }
        out.push(Letter(props));
        i += close + 1;
        skip_ws(&mut i);
        if i == bytes.len() {
            return Ok(out);
        }
        if bytes[i] != b',' {
            return Err(err(i, "expected ','"));
        }
        i += 1;
    }
}

impl std::str::FromStr for LassoWord {
    type Err = LassoError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LassoWord::parse(s)
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Letter]| {
            xs.iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        if self.prefix.is_empty() {
            write!(f, "; {}", join(&self.period))
        } else {
            write!(f, "{} ; {}", join(&self.prefix), join(&self.period))
        }
    }
}
