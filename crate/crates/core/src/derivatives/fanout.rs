//! Bounded-output certificates for terms over a direct sum.

use std::collections::BTreeMap;

use super::expansion::build_automaton;
use super::{restrict, DerivError};
use crate::alphabet::{CommutableSet, Side};
use crate::terms::{find_word, language_upto, only_epsilon, Kind, Term};
use crate::traces::TraceWord;

/// Length bound used to re-validate a certificate on sampled words.
pub const SAMPLE_BOUND: usize = 8;

/// Evidence that `|π_r(s)| ≤ (|π_l(s)| + 1)·k` for every word `s` of `term`.
#[derive(Clone, Debug)]
pub struct FanoutCertificate {
    pub term: Term,
    pub k: usize,
    /// The structural bound the fanout was derived from.
    pub k0: usize,
    /// A shortest word of every nonzero automaton state.
    pub witness_words: BTreeMap<Term, TraceWord>,
}

impl FanoutCertificate {
    /// Checks the fanout inequality on one word.
    pub fn admits(&self, s: &TraceWord, x: &CommutableSet) -> bool {
        fanout_holds(s, self.k, x)
    }
}

pub(crate) fn fanout_holds(s: &TraceWord, k: usize, x: &CommutableSet) -> bool {
    let (l, r) = side_counts(s, x);
    r <= (l + 1) * k
}

fn side_counts(s: &TraceWord, x: &CommutableSet) -> (usize, usize) {
    let mut l = 0;
    let mut r = 0;
    for &c in s.letters() {
        match x.sided(c).map(|t| t.side) {
            Some(Side::Left) => l += 1,
            Some(Side::Right) => r += 1,
            None => {}
        }
    }
    (l, r)
}

/// A structural fanout bound: right symbols count 1, left symbols 0, sums
/// take the maximum, products add up (plus one) and stars over left-positive
/// bodies double.
pub fn structural_fanout(e: &Term, x: &CommutableSet) -> Result<usize, DerivError> {
    if !x.is_direct_sum() {
        return Err(DerivError::NotDirectSum);
    }
    let right = x.side_set(Side::Right);
    fn go(e: &Term, right: &crate::alphabet::SymbolSet) -> Result<usize, DerivError> {
        match e.kind() {
            Kind::Zero | Kind::One => Ok(0),
            Kind::Sym(s) => Ok(usize::from(right.contains(*s))),
            Kind::Plus(ts) => ts.iter().try_fold(0, |m, t| Ok(m.max(go(t, right)?))),
            Kind::Times(fs) => fs.iter().try_fold(1, |m, f| Ok(m + go(f, right)?)),
            Kind::Star(b) => {
                if !only_epsilon(&restrict(b, right)) {
                    return Err(DerivError::UnboundedOutput);
                }
                Ok(2 * go(b, right)?)
            }
        }
    }
    go(e, &right)
}

pub fn fanout_certificate(e: &Term, x: &CommutableSet) -> Result<FanoutCertificate, DerivError> {
    let k0 = structural_fanout(e, x)?;
    let aut = build_automaton(e, x)?;
    let mut witness_words = BTreeMap::new();
    let mut m = 0;
    for state in aut.states() {
        if let Some(w) = find_word(state, x) {
            m = m.max(side_counts(&w, x).0);
            witness_words.insert(state.clone(), w);
        }
    }
    let cert = FanoutCertificate {
        term: e.clone(),
        k: (m + 1) * k0,
        k0,
        witness_words,
    };
    if let Some(bad) = language_upto(e, SAMPLE_BOUND, x)
        .into_iter()
        .find(|s| !cert.admits(s, x))
    {
        return Err(DerivError::CertificateRefuted(bad.render(x)));
    }
    Ok(cert)
}
