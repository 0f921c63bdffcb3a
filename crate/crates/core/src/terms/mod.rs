//! Pre-Kleene-algebra terms in a light canonical form.
//!
//! Terms are hash-consed only in the weak sense that every node caches its
//! hash and a few structural facts; equality is structural. The smart
//! constructors flatten, sort and deduplicate sums, flatten products and
//! apply the unit and absorption laws `0 + e = e`, `0·e = e·0 = 0`,
//! `1·e = e·1 = e` and `0* = 1`.

mod lang;
mod parse;

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::alphabet::{CommutableSet, Symbol, SymbolSet};
use crate::traces::TraceWord;

pub use lang::{
    find_word, finite_words, is_finite, language_upto, max_len, member, only_epsilon,
    shortest_words, sum_of_words, Language, TermError,
};
pub use parse::{identifiers, parse_term, ParseError};

/// The node of a term. Sums and products hold at least two operands.
#[derive(Debug)]
pub enum Kind {
    Zero,
    One,
    Sym(Symbol),
    Times(Vec<Term>),
    Star(Term),
    Plus(Vec<Term>),
}

impl Kind {
    fn rank(&self) -> u8 {
        match self {
            Kind::Zero => 0,
            Kind::One => 1,
            Kind::Sym(_) => 2,
            Kind::Times(_) => 3,
            Kind::Star(_) => 4,
            Kind::Plus(_) => 5,
        }
    }
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    hash: u64,
    nullable: bool,
    min_len: usize,
    size: usize,
}

#[derive(Clone)]
pub struct Term(Arc<Node>);

impl Term {
    fn make(kind: Kind) -> Term {
        let mut h = DefaultHasher::new();
        kind.rank().hash(&mut h);
        let (nullable, min_len, size) = match &kind {
            Kind::Zero => (false, usize::MAX, 1),
            Kind::One => (true, 0, 1),
            Kind::Sym(s) => {
                s.hash(&mut h);
                (false, 1, 1)
            }
            Kind::Times(fs) => {
                for f in fs {
                    f.0.hash.hash(&mut h);
                }
                (
                    fs.iter().all(Term::nullable),
                    fs.iter()
                        .map(Term::raw_min_len)
                        .fold(0usize, usize::saturating_add),
                    1 + fs.iter().map(Term::size).sum::<usize>(),
                )
            }
            Kind::Plus(ts) => {
                for t in ts {
                    t.0.hash.hash(&mut h);
                }
                (
                    ts.iter().any(Term::nullable),
                    ts.iter().map(Term::raw_min_len).min().unwrap_or(usize::MAX),
                    1 + ts.iter().map(Term::size).sum::<usize>(),
                )
            }
            Kind::Star(body) => {
                body.0.hash.hash(&mut h);
                (true, 0, 1 + body.size())
            }
        };
        Term(Arc::new(Node {
            kind,
            hash: h.finish(),
            nullable,
            min_len,
            size,
        }))
    }

    pub fn zero() -> Term {
        Term::make(Kind::Zero)
    }

    pub fn one() -> Term {
        Term::make(Kind::One)
    }

    pub fn sym(s: Symbol) -> Term {
        Term::make(Kind::Sym(s))
    }

    /// `e1 + e2`.
    pub fn plus(&self, other: &Term) -> Term {
        Term::sum([self.clone(), other.clone()])
    }

    /// `e1 · e2`.
    pub fn times(&self, other: &Term) -> Term {
        Term::product([self.clone(), other.clone()])
    }

    pub fn star(&self) -> Term {
        match self.kind() {
            Kind::Zero => Term::one(),
            _ => Term::make(Kind::Star(self.clone())),
        }
    }

    /// Canonical sum of the given terms; the empty sum is `0`.
    pub fn sum<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        let mut items = Vec::new();
        for t in terms {
            match t.kind() {
                Kind::Zero => {}
                Kind::Plus(ts) => items.extend(ts.iter().cloned()),
                _ => items.push(t),
            }
        }
        items.sort();
        items.dedup();
        match items.len() {
            0 => Term::zero(),
            1 => items.pop().expect("one item"),
            _ => Term::make(Kind::Plus(items)),
        }
    }

    /// Canonical product of the given terms; the empty product is `1`.
    pub fn product<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        let mut items = Vec::new();
        for t in terms {
            match t.kind() {
                Kind::Zero => return Term::zero(),
                Kind::One => {}
                Kind::Times(fs) => items.extend(fs.iter().cloned()),
                _ => items.push(t),
            }
        }
        match items.len() {
            0 => Term::one(),
            1 => items.pop().expect("one item"),
            _ => Term::make(Kind::Times(items)),
        }
    }

    /// The product of the letters of a word.
    pub fn word(w: &TraceWord) -> Term {
        Term::product(w.letters().iter().map(|&s| Term::sym(s)))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind(), Kind::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self.kind(), Kind::One)
    }

    /// `[e]₀`: whether the empty word belongs to `l(e)`.
    pub fn nullable(&self) -> bool {
        self.0.nullable
    }

    /// `[e]₀` as a term, `0` or `1`.
    pub fn empty_word(&self) -> Term {
        if self.nullable() {
            Term::one()
        } else {
            Term::zero()
        }
    }

    fn raw_min_len(&self) -> usize {
        self.0.min_len
    }

    /// Length of a shortest word of `l(e)`, or `None` when `l(e)` is empty.
    pub fn min_len(&self) -> Option<usize> {
        (self.0.min_len != usize::MAX).then_some(self.0.min_len)
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// The summands of a sum, or the term itself.
    pub fn summands(&self) -> &[Term] {
        match self.kind() {
            Kind::Plus(ts) => ts,
            Kind::Zero => &[],
            _ => std::slice::from_ref(self),
        }
    }

    /// The factors of a product, or the term itself.
    pub fn factors(&self) -> &[Term] {
        match self.kind() {
            Kind::Times(fs) => fs,
            Kind::One => &[],
            _ => std::slice::from_ref(self),
        }
    }

    /// Symbols occurring in the term.
    pub fn symbols(&self) -> SymbolSet {
        let mut set = SymbolSet::default();
        self.collect_symbols(&mut set);
        set
    }

    fn collect_symbols(&self, set: &mut SymbolSet) {
        match self.kind() {
            Kind::Zero | Kind::One => {}
            Kind::Sym(s) => set.insert(*s),
            Kind::Times(ts) | Kind::Plus(ts) => ts.iter().for_each(|t| t.collect_symbols(set)),
            Kind::Star(b) => b.collect_symbols(set),
        }
    }

    /// Replaces every symbol by a term and re-canonicalizes.
    pub fn substitute(&self, f: &mut impl FnMut(Symbol) -> Term) -> Term {
        match self.kind() {
            Kind::Zero | Kind::One => self.clone(),
            Kind::Sym(s) => f(*s),
            Kind::Times(fs) => {
                Term::product(fs.iter().map(|t| t.substitute(f)).collect::<Vec<_>>())
            }
            Kind::Plus(ts) => Term::sum(ts.iter().map(|t| t.substitute(f)).collect::<Vec<_>>()),
            Kind::Star(b) => b.substitute(f).star(),
        }
    }

    /// Checks that every symbol belongs to an alphabet of `len` symbols.
    pub fn fits(&self, x: &CommutableSet) -> bool {
        self.symbols().iter().all(|s| s.index() < x.len())
    }

    pub fn render(&self, x: &CommutableSet) -> String {
        let mut out = String::new();
        self.write(x, &mut out);
        out
    }

    fn write(&self, x: &CommutableSet, out: &mut String) {
        match self.kind() {
            Kind::Zero => out.push('0'),
            Kind::One => out.push('1'),
            Kind::Sym(s) => out.push_str(x.name(*s)),
            Kind::Plus(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" + ");
                    }
                    t.write(x, out);
                }
            }
            Kind::Times(fs) => {
                for (i, f) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    if matches!(f.kind(), Kind::Plus(_)) {
                        out.push('(');
                        f.write(x, out);
                        out.push(')');
                    } else {
                        f.write(x, out);
                    }
                }
            }
            Kind::Star(b) => {
                if matches!(b.kind(), Kind::Zero | Kind::One | Kind::Sym(_)) {
                    b.write(x, out);
                } else {
                    out.push('(');
                    b.write(x, out);
                    out.push(')');
                }
                out.push('*');
            }
        }
    }

    pub fn display<'a>(&'a self, x: &'a CommutableSet) -> impl fmt::Display + 'a {
        DisplayTerm {
            term: self,
            alphabet: x,
        }
    }
}

struct DisplayTerm<'a> {
    term: &'a Term,
    alphabet: &'a CommutableSet,
}

impl fmt::Display for DisplayTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.term.render(self.alphabet))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Zero => f.write_str("0"),
            Kind::One => f.write_str("1"),
            Kind::Sym(s) => write!(f, "#{}", s.index()),
            Kind::Times(fs) => f.debug_tuple("Times").field(fs).finish(),
            Kind::Plus(ts) => f.debug_tuple("Plus").field(ts).finish(),
            Kind::Star(b) => f.debug_tuple("Star").field(b).finish(),
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash {
            return false;
        }
        match (self.kind(), other.kind()) {
            (Kind::Zero, Kind::Zero) | (Kind::One, Kind::One) => true,
            (Kind::Sym(a), Kind::Sym(b)) => a == b,
            (Kind::Times(a), Kind::Times(b)) | (Kind::Plus(a), Kind::Plus(b)) => a == b,
            (Kind::Star(a), Kind::Star(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (a, b) = (self.kind(), other.kind());
        a.rank().cmp(&b.rank()).then_with(|| match (a, b) {
            (Kind::Sym(x), Kind::Sym(y)) => x.cmp(y),
            (Kind::Times(x), Kind::Times(y)) | (Kind::Plus(x), Kind::Plus(y)) => x.cmp(y),
            (Kind::Star(x), Kind::Star(y)) => x.cmp(y),
            _ => Ordering::Equal,
        })
    }
}
