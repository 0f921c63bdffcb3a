//! Words of the trace monoid: strings modulo swaps of adjacent commuting
//! symbols, kept in lexicographic normal form.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::alphabet::{AlphabetError, CommutableSet, Side, Symbol, SymbolSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("symbol index {0} is not in the alphabet")]
    ForeignSymbol(usize),
    #[error("alphabet is not a direct sum")]
    NotDirectSum,
    #[error("prefix tests need a discrete alphabet")]
    NotDiscrete,
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

/// A trace word in lexicographic normal form with respect to the symbol
/// order of the alphabet it was normalized against.
///
/// Ordering is shortlex: by length, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TraceWord {
    letters: Vec<Symbol>,
}

impl PartialOrd for TraceWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TraceWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

/// Result of [`TraceWord::mismatch`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Mismatch {
    /// Longest common prefix and the first differing letters.
    At(TraceWord, Symbol, Symbol),
    NoMismatch,
}

/// Incremental normal-form check: tracks which letters may be appended to a
/// normal-form word so that the result is again in normal form.
///
/// A letter `a` is blocked when some nonempty suffix `v` of the word has all
/// letters commuting with and distinct from `a`, and `a` is less than the
/// first letter of `v`: then `a` could be moved in front of `v` to obtain a
/// smaller representative.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalFormTracker {
    blocked: SymbolSet,
}

impl NormalFormTracker {
    pub fn new(x: &CommutableSet) -> Self {
        NormalFormTracker {
            blocked: SymbolSet::empty(x.len()),
        }
    }

    pub fn can_append(&self, c: Symbol) -> bool {
        !self.blocked.contains(c)
    }

    pub fn append(&mut self, c: Symbol, x: &CommutableSet) {
        for a in x.symbols() {
            let passes = a != c && x.commute(a, c);
            if passes && (a < c || self.blocked.contains(a)) {
                self.blocked.insert(a);
            } else {
                self.blocked.remove(a);
            }
        }
    }
}

impl TraceWord {
    pub fn empty() -> Self {
        TraceWord::default()
    }

    /// Normalizes a raw symbol sequence by greedy selection: at each step the
    /// least letter that can be moved to the front of the remaining letters.
    pub fn normalize(raw: &[Symbol], x: &CommutableSet) -> Result<Self, TraceError> {
        if let Some(bad) = raw.iter().find(|s| s.index() >= x.len()) {
            return Err(TraceError::ForeignSymbol(bad.index()));
        }
        Ok(Self::normalize_unchecked(raw, x))
    }

    pub(crate) fn normalize_unchecked(raw: &[Symbol], x: &CommutableSet) -> Self {
        let mut rest: Vec<Symbol> = raw.to_vec();
        let mut letters = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut best: Option<usize> = None;
            for i in 0..rest.len() {
                let c = rest[i];
                if best.is_some_and(|b| rest[b] <= c) {
                    continue;
                }
                if rest[..i].iter().all(|&d| d != c && x.commute(d, c)) {
                    best = Some(i);
                }
            }
            let i = best.expect("the first remaining letter is always movable");
            letters.push(rest.remove(i));
        }
        TraceWord { letters }
    }

    /// Wraps a letter sequence already known to be in normal form.
    pub(crate) fn from_normal(letters: Vec<Symbol>) -> Self {
        TraceWord { letters }
    }

    pub fn singleton(s: Symbol) -> Self {
        TraceWord { letters: vec![s] }
    }

    /// Parses space-separated symbol names; `1` (or the empty string) is the
    /// empty word.
    pub fn parse(text: &str, x: &CommutableSet) -> Result<Self, TraceError> {
        let mut raw = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            raw.push(x.symbol(tok)?);
        }
        Self::normalize(&raw, x)
    }

    pub fn from_names(names: &[&str], x: &CommutableSet) -> Result<Self, TraceError> {
        let raw = names
            .iter()
            .map(|n| x.symbol(n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::normalize(&raw, x)
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &TraceWord, x: &CommutableSet) -> TraceWord {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let mut raw = self.letters.clone();
        raw.extend_from_slice(&other.letters);
        Self::normalize_unchecked(&raw, x)
    }

    /// `x · self`.
    pub fn prepend(&self, s: Symbol, x: &CommutableSet) -> TraceWord {
        TraceWord::singleton(s).concat(self, x)
    }

    /// Deletes the letters of the other side and strips side tags; the result
    /// lives over the operand on `side`.
    pub fn project(&self, side: Side, x: &CommutableSet) -> Result<TraceWord, TraceError> {
        let operand = match side {
            Side::Left => x.left(),
            Side::Right => x.right(),
        }
        .ok_or(TraceError::NotDirectSum)?;
        let raw: Vec<Symbol> = self
            .letters
            .iter()
            .filter_map(|&s| x.sided(s).filter(|t| t.side == side).map(|t| t.base))
            .collect();
        Ok(Self::normalize_unchecked(&raw, operand))
    }

    pub fn pair_split(&self, x: &CommutableSet) -> Result<(TraceWord, TraceWord), TraceError> {
        Ok((self.project(Side::Left, x)?, self.project(Side::Right, x)?))
    }

    /// `u_l · v_r` over the direct sum `x`.
    pub fn pair_join(
        u: &TraceWord,
        v: &TraceWord,
        x: &CommutableSet,
    ) -> Result<TraceWord, TraceError> {
        let (left, right) = match (x.left(), x.right()) {
            (Some(l), Some(r)) => (l, r),
            _ => return Err(TraceError::NotDirectSum),
        };
        let mut raw = Vec::with_capacity(u.len() + v.len());
        for &s in &u.letters {
            if s.index() >= left.len() {
                return Err(TraceError::ForeignSymbol(s.index()));
            }
            raw.push(x.embed(Side::Left, s).expect("checked against operand"));
        }
        for &s in &v.letters {
            if s.index() >= right.len() {
                return Err(TraceError::ForeignSymbol(s.index()));
            }
            raw.push(x.embed(Side::Right, s).expect("checked against operand"));
        }
        Ok(Self::normalize_unchecked(&raw, x))
    }

    /// Embeds a word on one side of a direct sum.
    pub fn on_side(&self, side: Side, x: &CommutableSet) -> Result<TraceWord, TraceError> {
        let raw = self
            .letters
            .iter()
            .map(|&s| x.embed(side, s).ok_or(TraceError::ForeignSymbol(s.index())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::normalize_unchecked(&raw, x))
    }

    /// Maps each letter `x` to `x_l x_r` in the doubled alphabet.
    pub fn embed_doubled(&self, doubled: &CommutableSet) -> Result<TraceWord, TraceError> {
        if !doubled.is_direct_sum() {
            return Err(TraceError::NotDirectSum);
        }
        let mut raw = Vec::with_capacity(2 * self.len());
        for &s in &self.letters {
            let l = doubled.embed(Side::Left, s);
            let r = doubled.embed(Side::Right, s);
            match (l, r) {
                (Some(l), Some(r)) => {
                    raw.push(l);
                    raw.push(r);
                }
                _ => return Err(TraceError::ForeignSymbol(s.index())),
            }
        }
        Ok(Self::normalize_unchecked(&raw, doubled))
    }

    pub fn is_prefix(&self, t: &TraceWord, x: &CommutableSet) -> Result<bool, TraceError> {
        if !x.is_discrete() {
            return Err(TraceError::NotDiscrete);
        }
        Ok(t.letters.starts_with(&self.letters))
    }

    pub fn mismatch(&self, other: &TraceWord, x: &CommutableSet) -> Result<Mismatch, TraceError> {
        if !x.is_discrete() {
            return Err(TraceError::NotDiscrete);
        }
        let common = self
            .letters
            .iter()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count();
        match (self.letters.get(common), other.letters.get(common)) {
            (Some(&a), Some(&b)) => Ok(Mismatch::At(
                TraceWord::from_normal(self.letters[..common].to_vec()),
                a,
                b,
            )),
            _ => Ok(Mismatch::NoMismatch),
        }
    }

    pub fn render(&self, x: &CommutableSet) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|&s| x.name(s))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn display<'a>(&'a self, x: &'a CommutableSet) -> impl fmt::Display + 'a {
        DisplayWord {
            word: self,
            alphabet: x,
        }
    }
}

struct DisplayWord<'a> {
    word: &'a TraceWord,
    alphabet: &'a CommutableSet,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word.render(self.alphabet))
    }
}

/// All normal-form words of exactly length `n`, in lexicographic order.
pub fn words_of_length(x: &CommutableSet, n: usize) -> Vec<TraceWord> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn go(
        x: &CommutableSet,
        n: usize,
        prefix: &mut Vec<Symbol>,
        tracker: &NormalFormTracker,
        out: &mut Vec<TraceWord>,
    ) {
        if prefix.len() == n {
            out.push(TraceWord::from_normal(prefix.clone()));
            return;
        }
        for c in x.symbols() {
            if tracker.can_append(c) {
                let mut next = tracker.clone();
                next.append(c, x);
                prefix.push(c);
                go(x, n, prefix, &next, out);
                prefix.pop();
            }
        }
    }
    go(x, n, &mut stack, &NormalFormTracker::new(x), &mut out);
    out
}

/// All normal-form words of length at most `n`, in shortlex order.
pub fn words_upto(x: &CommutableSet, n: usize) -> Vec<TraceWord> {
    (0..=n).flat_map(|k| words_of_length(x, k)).collect()
}
