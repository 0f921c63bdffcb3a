//! The language interpretation, evaluated on bounded fragments.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{Kind, Term};
use crate::alphabet::CommutableSet;
use crate::derivatives::word_derivative;
use crate::traces::TraceWord;

/// A finite set of trace words, iterated in shortlex order.
pub type Language = BTreeSet<TraceWord>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("the language of the term is infinite")]
    InfiniteLanguage,
}

fn concat_bounded(a: &Language, b: &Language, n: usize, x: &CommutableSet) -> Language {
    let mut out = Language::new();
    for u in a {
        for v in b {
            if u.len() + v.len() > n {
                // both sets iterate by increasing length
                break;
            }
            out.insert(u.concat(v, x));
        }
    }
    out
}

fn upto(e: &Term, n: usize, x: &CommutableSet, memo: &mut HashMap<Term, Language>) -> Language {
    if let Some(l) = memo.get(e) {
        return l.clone();
    }
    let lang = match e.kind() {
        Kind::Zero => Language::new(),
        Kind::One => Language::from([TraceWord::empty()]),
        Kind::Sym(s) => {
            if n >= 1 {
                Language::from([TraceWord::singleton(*s)])
            } else {
                Language::new()
            }
        }
        Kind::Plus(ts) => {
            let mut out = Language::new();
            for t in ts {
                out.extend(upto(t, n, x, memo));
            }
            out
        }
        Kind::Times(fs) => {
            let mut acc = Language::from([TraceWord::empty()]);
            for f in fs {
                if acc.is_empty() {
                    break;
                }
                let lf = upto(f, n, x, memo);
                acc = concat_bounded(&acc, &lf, n, x);
            }
            acc
        }
        Kind::Star(body) => {
            let mut lb = upto(body, n, x, memo);
            lb.remove(&TraceWord::empty());
            let mut all = Language::from([TraceWord::empty()]);
            let mut frontier = all.clone();
            while !frontier.is_empty() {
                let step = concat_bounded(&lb, &frontier, n, x);
                frontier = step.into_iter().filter(|w| !all.contains(w)).collect();
                all.extend(frontier.iter().cloned());
            }
            all
        }
    };
    memo.insert(e.clone(), lang.clone());
    lang
}

/// `{ s ∈ l(e) : |s| ≤ n }`.
pub fn language_upto(e: &Term, n: usize, x: &CommutableSet) -> Language {
    upto(e, n, x, &mut HashMap::new())
}

/// `s ∈ l(e)`, decided by a word derivative.
pub fn member(s: &TraceWord, e: &Term, x: &CommutableSet) -> bool {
    word_derivative(e, s, x).nullable()
}

/// Whether `l(e) ⊆ {ε}`.
pub fn only_epsilon(e: &Term) -> bool {
    match e.kind() {
        Kind::Zero | Kind::One => true,
        Kind::Sym(_) => false,
        Kind::Times(ts) | Kind::Plus(ts) => ts.iter().all(only_epsilon),
        Kind::Star(b) => only_epsilon(b),
    }
}

/// Length of a longest word of `l(e)` when the language is finite; the empty
/// language has maximum length 0.
pub fn max_len(e: &Term) -> Option<usize> {
    match e.kind() {
        Kind::Zero | Kind::One => Some(0),
        Kind::Sym(_) => Some(1),
        Kind::Times(fs) => fs.iter().try_fold(0, |acc, f| Some(acc + max_len(f)?)),
        Kind::Plus(ts) => ts.iter().try_fold(0, |acc, t| Some(acc.max(max_len(t)?))),
        Kind::Star(b) => only_epsilon(b).then_some(0),
    }
}

pub fn is_finite(e: &Term) -> bool {
    max_len(e).is_some()
}

pub fn finite_words(e: &Term, x: &CommutableSet) -> Result<Language, TermError> {
    let n = max_len(e).ok_or(TermError::InfiniteLanguage)?;
    Ok(language_upto(e, n, x))
}

/// All words of `l(e)` of minimal length.
pub fn shortest_words(e: &Term, x: &CommutableSet) -> Language {
    match e.kind() {
        Kind::Zero => Language::new(),
        Kind::One | Kind::Star(_) => Language::from([TraceWord::empty()]),
        Kind::Sym(s) => Language::from([TraceWord::singleton(*s)]),
        Kind::Plus(ts) => {
            let m = e.min_len();
            ts.iter()
                .filter(|t| t.min_len() == m)
                .flat_map(|t| shortest_words(t, x))
                .collect()
        }
        Kind::Times(fs) => {
            let mut acc = Language::from([TraceWord::empty()]);
            for f in fs {
                let lf = shortest_words(f, x);
                acc = acc
                    .iter()
                    .flat_map(|u| lf.iter().map(move |v| u.concat(v, x)))
                    .collect();
            }
            acc
        }
    }
}

/// A shortest word of `l(e)`, least in normal-form order among those.
pub fn find_word(e: &Term, x: &CommutableSet) -> Option<TraceWord> {
    shortest_words(e, x).into_iter().next()
}

/// The sum of the given words.
pub fn sum_of_words<'a, I: IntoIterator<Item = &'a TraceWord>>(words: I) -> Term {
    Term::sum(words.into_iter().map(Term::word).collect::<Vec<_>>())
}
