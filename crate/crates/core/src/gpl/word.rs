use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::letter::Letter;
use crate::util::Q;

/// An ordered letter sequence `(α₁, …, αₙ)`; the weight is its length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Word::new(xs.iter().map(|&x| Letter::int(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Word::new(vec![Letter::Zero; n])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<&Letter> {
        self.letters.first()
    }

    pub fn last(&self) -> Option<&Letter> {
        self.letters.last()
    }

    pub fn is_all_zero(&self) -> bool {
        self.letters.iter().all(Letter::is_zero)
    }

    pub fn trailing_zeros(&self) -> usize {
        self.letters
            .iter()
            .rev()
            .take_while(|l| l.is_zero())
            .count()
    }

    /// Number of nonzero letters (the MPL depth).
    pub fn depth(&self) -> usize {
        self.letters.iter().filter(|l| !l.is_zero()).count()
    }

    pub fn prepend(&self, l: Letter) -> Word {
        let mut v = Vec::with_capacity(self.letters.len() + 1);
        v.push(l);
        v.extend(self.letters.iter().cloned());
        Word::new(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.letters.clone();
        v.extend(other.letters.iter().cloned());
        Word::new(v)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word::new(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Finite rational combination of words, with an optional power of
/// `G(0; z) = log z` multiplying every term.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WordCombination {
    terms: BTreeMap<Word, Q>,
    #[serde(default)]
    pub scalar_logs: u32,
}

impl WordCombination {
    pub fn new() -> Self {
        WordCombination::default()
    }

    pub fn single(w: Word, c: Rational) -> Self {
        let mut out = WordCombination::new();
        out.add_term(w, c);
        out
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w).or_default();
        entry.0 += c;
        if entry.0 == 0 {
            self.terms.retain(|_, v| v.0 != 0);
        }
    }

    pub fn add(&mut self, other: &WordCombination) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.0.clone());
        }
    }

    pub fn scaled(&self, c: &Rational) -> WordCombination {
        let mut out = WordCombination {
            scalar_logs: self.scalar_logs,
            ..Default::default()
        };
        for (w, q) in &self.terms {
            out.add_term(w.clone(), Rational::from(&q.0 * c));
        }
        out
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).map(|q| q.0.clone()).unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter().map(|(w, q)| (w, &q.0))
    }

    /// Sum of the coefficients.
    pub fn total_multiplicity(&self) -> Rational {
        self.terms.values().map(|q| q.0.clone()).sum()
    }
}

impl fmt::Display for WordCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·G{w}")?;
        }
        if self.scalar_logs > 0 {
            write!(f, " [× log^{} z]", self.scalar_logs)?;
        }
        Ok(())
    }
}
