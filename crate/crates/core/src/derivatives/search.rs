//! Bounded language inclusion and intersection by a product search over
//! derivatives.
//!
//! The search walks canonical representatives of trace words breadth first,
//! carrying the pair of word derivatives `(δ_w(e1), δ_w(e2))`. A branch is
//! cut when `δ_w(e1)` has no word that fits the remaining length budget, or
//! (for inclusion) when `δ_w(e2)` is syntactically universal.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use super::{restrict, DerivativeCache};
use crate::alphabet::{CommutableSet, Side, Symbol, SymbolSet};
use crate::terms::{Kind, Term};
use crate::traces::{NormalFormTracker, TraceWord};

pub const DEFAULT_NODE_LIMIT: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search exceeded {0} nodes")]
    NodeLimit(usize),
    #[error("balanced traversal needs a direct sum")]
    NotDirectSum,
}

/// Which representative of each trace the search walks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Lexicographic normal forms; counterexamples are shortlex least.
    Lex,
    /// For direct sums: alternate between the sides, one letter each, until
    /// one side is exhausted. Words relating two similar strings stay in
    /// step, which keeps derivatives small. Counterexamples are shortest.
    Balanced,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub bound: usize,
    pub strategy: Strategy,
    pub node_limit: usize,
}

impl SearchOptions {
    pub fn new(bound: usize) -> Self {
        SearchOptions {
            bound,
            strategy: Strategy::Lex,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }

    pub fn balanced(mut self) -> Self {
        self.strategy = Strategy::Balanced;
        self
    }

    pub fn node_limit(mut self, limit: usize) -> Self {
        self.node_limit = limit;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// A word in lexicographic normal form, if one was found.
    pub witness: Option<TraceWord>,
    pub nodes: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Phase {
    Alternate { left_turn: bool },
    Only(Side),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Cursor {
    Lex(NormalFormTracker),
    Balanced {
        left: NormalFormTracker,
        right: NormalFormTracker,
        phase: Phase,
    },
}

struct Walker<'a> {
    set: &'a CommutableSet,
    left: Option<&'a CommutableSet>,
    right: Option<&'a CommutableSet>,
}

impl<'a> Walker<'a> {
    fn new(set: &'a CommutableSet, strategy: Strategy) -> Result<(Self, Cursor), SearchError> {
        match strategy {
            Strategy::Lex => Ok((
                Walker {
                    set,
                    left: None,
                    right: None,
                },
                Cursor::Lex(NormalFormTracker::new(set)),
            )),
            Strategy::Balanced => {
                let (l, r) = match (set.left(), set.right()) {
                    (Some(l), Some(r)) => (l.as_ref(), r.as_ref()),
                    _ => return Err(SearchError::NotDirectSum),
                };
                Ok((
                    Walker {
                        set,
                        left: Some(l),
                        right: Some(r),
                    },
                    Cursor::Balanced {
                        left: NormalFormTracker::new(l),
                        right: NormalFormTracker::new(r),
                        phase: Phase::Alternate { left_turn: true },
                    },
                ))
            }
        }
    }

    /// The side a balanced walk is confined to, once one side has ended.
    fn only_side(&self, cursor: &Cursor) -> Option<Side> {
        match cursor {
            Cursor::Balanced {
                phase: Phase::Only(side),
                ..
            } => Some(*side),
            _ => None,
        }
    }

    /// The cursor after appending `c`, if the extended word is canonical.
    fn step(&self, cursor: &Cursor, c: Symbol) -> Option<Cursor> {
        match cursor {
            Cursor::Lex(t) => {
                if !t.can_append(c) {
                    return None;
                }
                let mut t = t.clone();
                t.append(c, self.set);
                Some(Cursor::Lex(t))
            }
            Cursor::Balanced { left, right, phase } => {
                let sided = self.set.sided(c)?;
                let next_phase = match *phase {
                    Phase::Alternate { left_turn } => {
                        let turn = if left_turn { Side::Left } else { Side::Right };
                        if sided.side == turn {
                            Phase::Alternate {
                                left_turn: !left_turn,
                            }
                        } else {
                            Phase::Only(sided.side)
                        }
                    }
                    Phase::Only(side) if side == sided.side => Phase::Only(side),
                    Phase::Only(_) => return None,
                };
                let (mut left, mut right) = (left.clone(), right.clone());
                let (tracker, operand) = match sided.side {
                    Side::Left => (&mut left, self.left?),
                    Side::Right => (&mut right, self.right?),
                };
                if !tracker.can_append(sided.base) {
                    return None;
                }
                tracker.append(sided.base, operand);
                Some(Cursor::Balanced {
                    left,
                    right,
                    phase: next_phase,
                })
            }
        }
    }
}

/// Whether `l(t)` is the set of all words, judged syntactically: some summand
/// is a product of nullable factors one of which is a star whose body has
/// every letter as a summand.
pub fn is_universal(t: &Term, all: &SymbolSet) -> bool {
    t.summands().iter().any(|s| {
        s.factors().iter().all(Term::nullable)
            && s.factors().iter().any(|f| match f.kind() {
                Kind::Star(body) => {
                    let letters: SymbolSet = body
                        .summands()
                        .iter()
                        .filter_map(|b| match b.kind() {
                            Kind::Sym(c) => Some(*c),
                            _ => None,
                        })
                        .collect();
                    all.iter().all(|c| letters.contains(c))
                }
                _ => false,
            })
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    /// A word of `e1` outside `e2`.
    Escape,
    /// A word of both.
    Common,
}

fn search(
    e1: &Term,
    e2: &Term,
    set: &CommutableSet,
    opts: &SearchOptions,
    goal: Goal,
) -> Result<SearchOutcome, SearchError> {
    let (walker, cursor) = Walker::new(set, opts.strategy)?;
    let all = set.all();
    let mut cache = DerivativeCache::new(set);
    // arena of (parent, letter) for reconstructing words
    let mut arena: Vec<(usize, Symbol)> = Vec::new();
    let mut visited: HashSet<(Term, Term, Cursor)> = HashSet::new();
    let mut queue: VecDeque<(Term, Term, Cursor, usize, usize)> = VecDeque::new();

    let hopeless = |t: &Term, depth: usize| t.min_len().is_none_or(|m| m + depth > opts.bound);
    let sides = set
        .is_direct_sum()
        .then(|| (set.side_set(Side::Left), set.side_set(Side::Right)));
    let scope = |side: Option<Side>| match (side, &sides) {
        (Some(Side::Left), Some((l, _))) => l,
        (Some(Side::Right), Some((_, r))) => r,
        _ => &all,
    };
    let cut_right = |t: &Term, depth: usize, side: Option<Side>| match goal {
        Goal::Escape => is_universal(t, scope(side)),
        Goal::Common => hopeless(t, depth),
    };

    let word_of = |arena: &[(usize, Symbol)], mut node: usize| {
        let mut letters = Vec::new();
        while node != usize::MAX {
            let (parent, c) = arena[node];
            letters.push(c);
            node = parent;
        }
        letters.reverse();
        TraceWord::normalize_unchecked(&letters, set)
    };

    if hopeless(e1, 0) || cut_right(e2, 0, None) {
        return Ok(SearchOutcome {
            witness: None,
            nodes: 0,
        });
    }
    visited.insert((e1.clone(), e2.clone(), cursor.clone()));
    queue.push_back((e1.clone(), e2.clone(), cursor, usize::MAX, 0));
    let mut nodes = 0usize;
    while let Some((d1, d2, cursor, node, depth)) = queue.pop_front() {
        nodes += 1;
        if nodes > opts.node_limit {
            return Err(SearchError::NodeLimit(opts.node_limit));
        }
        let hit = d1.nullable()
            && match goal {
                Goal::Escape => !d2.nullable(),
                Goal::Common => d2.nullable(),
            };
        if hit {
            let witness = if node == usize::MAX {
                TraceWord::empty()
            } else {
                word_of(&arena, node)
            };
            return Ok(SearchOutcome {
                witness: Some(witness),
                nodes,
            });
        }
        if depth == opts.bound {
            continue;
        }
        for c in set.symbols() {
            let Some(next_cursor) = walker.step(&cursor, c) else {
                continue;
            };
            let mut n1 = cache.derivative(&d1, c);
            let only = walker.only_side(&next_cursor);
            let entered = only.filter(|_| walker.only_side(&cursor).is_none());
            if let Some(side) = entered {
                n1 = restrict(&n1, scope(Some(side)));
            }
            if hopeless(&n1, depth + 1) {
                continue;
            }
            let mut n2 = cache.derivative(&d2, c);
            if let Some(side) = entered {
                n2 = restrict(&n2, scope(Some(side)));
            }
            if cut_right(&n2, depth + 1, only) {
                continue;
            }
            let key = (n1, n2, next_cursor);
            if visited.contains(&key) {
                continue;
            }
            visited.insert(key.clone());
            arena.push((node, c));
            let (n1, n2, next_cursor) = key;
            queue.push_back((n1, n2, next_cursor, arena.len() - 1, depth + 1));
        }
        cache.trim(2_000_000);
    }
    Ok(SearchOutcome {
        witness: None,
        nodes,
    })
}

/// Looks for a word of `l(e1)` of length at most the bound that is not in
/// `l(e2)`.
pub fn bounded_inclusion(
    e1: &Term,
    e2: &Term,
    set: &CommutableSet,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    search(e1, e2, set, opts, Goal::Escape)
}

/// Looks for a word of length at most the bound in both `l(e1)` and `l(e2)`.
pub fn bounded_intersection(
    e1: &Term,
    e2: &Term,
    set: &CommutableSet,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    search(e1, e2, set, opts, Goal::Common)
}
