//! Commutable sets: finite alphabets with a reflexive, symmetric commuting
//! relation, their direct sums `X ⊕ Y` and the doubled alphabet `X ⊕ X`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
    #[error("too many symbols ({0}); at most 65535 are supported")]
    TooLarge(usize),
    #[error("alphabet file line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// An interned symbol; the index doubles as the symbol's rank in the total
/// order of its alphabet.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(u16);

impl Symbol {
    pub(crate) fn new(index: usize) -> Self {
        Symbol(index as u16)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn suffix(self) -> &'static str {
        match self {
            Side::Left => "_l",
            Side::Right => "_r",
        }
    }
}

/// A symbol of `X ⊕ Y`: a base symbol of one operand tagged with its side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SidedSymbol {
    pub base: Symbol,
    pub side: Side,
}

/// How the commuting relation of [`CommutableSet::new`] is given.
#[derive(Clone, Debug)]
pub enum Mode<'a> {
    Discrete,
    Commutative,
    Pairs(&'a [(&'a str, &'a str)]),
}

/// A compact set of symbols of one alphabet.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SymbolSet(Vec<u64>);

impl SymbolSet {
    pub fn empty(size: usize) -> Self {
        SymbolSet(vec![0; size.div_ceil(64)])
    }

    pub fn insert(&mut self, s: Symbol) {
        let i = s.index();
        if i / 64 >= self.0.len() {
            self.0.resize(i / 64 + 1, 0);
        }
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, s: Symbol) {
        let i = s.index();
        if let Some(w) = self.0.get_mut(i / 64) {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, s: Symbol) -> bool {
        let i = s.index();
        self.0.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w & (1u64 << b) != 0)
                .map(move |b| Symbol::new(wi * 64 + b))
        })
    }
}

impl FromIterator<Symbol> for SymbolSet {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        let mut set = SymbolSet::default();
        for s in iter {
            set.insert(s);
        }
        set
    }
}

#[derive(Debug)]
struct SumParts {
    left: Arc<CommutableSet>,
    right: Arc<CommutableSet>,
    sides: Vec<SidedSymbol>,
    // operand symbol -> sum symbol, per side
    left_embed: Vec<Symbol>,
    right_embed: Vec<Symbol>,
}

/// A finite alphabet with a reflexive symmetric commuting relation.
///
/// Symbols are totally ordered by declaration order. For a direct sum the
/// declaration order interleaves the operands: `x0_l, y0_r, x1_l, y1_r, ...`,
/// so the doubled alphabet of `a b` is ordered `a_l a_r b_l b_r`.
#[derive(Debug)]
pub struct CommutableSet {
    names: Vec<String>,
    index: HashMap<String, Symbol>,
    commutes: Vec<bool>,
    sum: Option<SumParts>,
}

fn valid_base_name(name: &str) -> bool {
    let mut chars = name.chars();
    let first_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    first_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn has_side_suffix(name: &str) -> bool {
    name.ends_with("_l") || name.ends_with("_r")
}

impl CommutableSet {
    /// Builds a plain (non-sum) commutable set.
    pub fn new(symbols: &[&str], mode: Mode<'_>) -> Result<Self, AlphabetError> {
        let owned: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
        let mut set = Self::with_names(owned, false)?;
        let n = set.len();
        match mode {
            Mode::Discrete => {}
            Mode::Commutative => set.commutes.iter_mut().for_each(|c| *c = true),
            Mode::Pairs(pairs) => {
                for (x, y) in pairs {
                    let x = set.symbol(x)?;
                    let y = set.symbol(y)?;
                    set.commutes[x.index() * n + y.index()] = true;
                    set.commutes[y.index() * n + x.index()] = true;
                }
            }
        }
        Ok(set)
    }

    pub fn discrete(symbols: &[&str]) -> Result<Self, AlphabetError> {
        Self::new(symbols, Mode::Discrete)
    }

    pub fn commutative(symbols: &[&str]) -> Result<Self, AlphabetError> {
        Self::new(symbols, Mode::Commutative)
    }

    fn with_names(names: Vec<String>, sided: bool) -> Result<Self, AlphabetError> {
        if names.len() > u16::MAX as usize {
            return Err(AlphabetError::TooLarge(names.len()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !valid_base_name(name) || (!sided && has_side_suffix(name)) {
                return Err(AlphabetError::InvalidName(name.clone()));
            }
            if index.insert(name.clone(), Symbol::new(i)).is_some() {
                return Err(AlphabetError::DuplicateSymbol(name.clone()));
            }
        }
        let n = names.len();
        let mut commutes = vec![false; n * n];
        for i in 0..n {
            commutes[i * n + i] = true;
        }
        Ok(CommutableSet {
            names,
            index,
            commutes,
            sum: None,
        })
    }

    /// `X ⊕ Y`: left symbols commute with right symbols, and each side keeps
    /// the relation of its operand.
    pub fn direct_sum(left: Arc<CommutableSet>, right: Arc<CommutableSet>) -> Self {
        let mut sides = Vec::with_capacity(left.len() + right.len());
        for i in 0..left.len().max(right.len()) {
            if i < left.len() {
                sides.push(SidedSymbol {
                    base: Symbol::new(i),
                    side: Side::Left,
                });
            }
            if i < right.len() {
                sides.push(SidedSymbol {
                    base: Symbol::new(i),
                    side: Side::Right,
                });
            }
        }
        let names: Vec<String> = sides
            .iter()
            .map(|s| {
                let op = if s.side == Side::Left { &left } else { &right };
                format!("{}{}", op.name(s.base), s.side.suffix())
            })
            .collect();
        let mut set = Self::with_names(names, true)
            .expect("operand names are valid and sides disambiguate them");
        let n = set.len();
        for (i, si) in sides.iter().enumerate() {
            for (j, sj) in sides.iter().enumerate() {
                set.commutes[i * n + j] = match (si.side, sj.side) {
                    (Side::Left, Side::Left) => left.commute(si.base, sj.base),
                    (Side::Right, Side::Right) => right.commute(si.base, sj.base),
                    _ => true,
                };
            }
        }
        let mut left_embed = vec![Symbol::new(0); left.len()];
        let mut right_embed = vec![Symbol::new(0); right.len()];
        for (i, s) in sides.iter().enumerate() {
            match s.side {
                Side::Left => left_embed[s.base.index()] = Symbol::new(i),
                Side::Right => right_embed[s.base.index()] = Symbol::new(i),
            }
        }
        set.sum = Some(SumParts {
            left,
            right,
            sides,
            left_embed,
            right_embed,
        });
        set
    }

    /// `X ⊕ X`.
    pub fn double(base: Arc<CommutableSet>) -> Self {
        Self::direct_sum(base.clone(), base)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl ExactSizeIterator<Item = Symbol> + Clone {
        (0..self.len()).map(Symbol::new)
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol, AlphabetError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| AlphabetError::UnknownSymbol(name.to_string()))
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn commute(&self, x: Symbol, y: Symbol) -> bool {
        self.commutes[x.index() * self.len() + y.index()]
    }

    pub fn is_discrete(&self) -> bool {
        self.symbols()
            .all(|x| self.symbols().all(|y| x == y || !self.commute(x, y)))
    }

    pub fn is_commutative(&self) -> bool {
        self.commutes.iter().all(|c| *c)
    }

    /// All commuting pairs `(x, y)`, including the reflexive ones.
    pub fn commuting_pairs(&self) -> Vec<(Symbol, Symbol)> {
        let mut out = Vec::new();
        for x in self.symbols() {
            for y in self.symbols() {
                if self.commute(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn all(&self) -> SymbolSet {
        self.symbols().collect()
    }

    pub fn is_direct_sum(&self) -> bool {
        self.sum.is_some()
    }

    pub fn left(&self) -> Option<&Arc<CommutableSet>> {
        self.sum.as_ref().map(|s| &s.left)
    }

    pub fn right(&self) -> Option<&Arc<CommutableSet>> {
        self.sum.as_ref().map(|s| &s.right)
    }

    pub fn sided(&self, s: Symbol) -> Option<SidedSymbol> {
        self.sum.as_ref().map(|p| p.sides[s.index()])
    }

    /// Embeds an operand symbol on the given side.
    pub fn embed(&self, side: Side, base: Symbol) -> Option<Symbol> {
        let parts = self.sum.as_ref()?;
        let table = match side {
            Side::Left => &parts.left_embed,
            Side::Right => &parts.right_embed,
        };
        table.get(base.index()).copied()
    }

    pub fn side_set(&self, side: Side) -> SymbolSet {
        match &self.sum {
            None => SymbolSet::empty(self.len()),
            Some(parts) => parts
                .sides
                .iter()
                .enumerate()
                .filter(|(_, s)| s.side == side)
                .map(|(i, _)| Symbol::new(i))
                .collect(),
        }
    }

    /// Structural equality: same names in the same order with the same
    /// relation.
    pub fn same_as(&self, other: &CommutableSet) -> bool {
        self.names == other.names && self.commutes == other.commutes
    }

    /// Parses the line-oriented alphabet format:
    ///
    /// ```text
    /// alphabet a b c
    /// commute a b
    /// ```
    ///
    /// `commute *` makes the set commutative. If every symbol carries an
    /// `_l`/`_r` suffix and the relation is that of a direct sum, the set is
    /// rebuilt as a direct sum.
    pub fn parse(text: &str) -> Result<Self, AlphabetError> {
        let mut names: Option<Vec<String>> = None;
        let mut pairs: Vec<(String, String)> = Vec::new();
        let mut all = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: &str| AlphabetError::Syntax {
                line: lineno + 1,
                msg: msg.to_string(),
            };
            let mut words = line.split_whitespace();
            match words.next() {
                Some("alphabet") => {
                    if names.is_some() {
                        return Err(syntax("repeated `alphabet` line"));
                    }
                    names = Some(words.map(str::to_string).collect());
                }
                Some("commute") => {
                    if names.is_none() {
                        return Err(syntax("`commute` before `alphabet`"));
                    }
                    let args: Vec<&str> = words.collect();
                    match args.as_slice() {
                        ["*"] => all = true,
                        [x, y] => pairs.push((x.to_string(), y.to_string())),
                        _ => return Err(syntax("expected `commute x y` or `commute *`")),
                    }
                }
                Some(other) => return Err(syntax(&format!("unknown directive `{other}`"))),
                None => {}
            }
        }
        let names = names.ok_or(AlphabetError::Syntax {
            line: 0,
            msg: "missing `alphabet` line".into(),
        })?;

        let sided = !names.is_empty() && names.iter().all(|n| has_side_suffix(n));
        let mut set = Self::with_names(names, sided)?;
        let n = set.len();
        for (x, y) in &pairs {
            let (x, y) = (set.symbol(x)?, set.symbol(y)?);
            set.commutes[x.index() * n + y.index()] = true;
            set.commutes[y.index() * n + x.index()] = true;
        }
        if all {
            set.commutes.iter_mut().for_each(|c| *c = true);
        }
        if sided {
            if let Some(sum) = set.as_direct_sum() {
                return Ok(sum);
            }
        }
        Ok(set)
    }

    /// Reconstructs `X ⊕ Y` from a flat set with sided names, if the names and
    /// the relation match a direct sum exactly.
    fn as_direct_sum(&self) -> Option<CommutableSet> {
        let mut bases: [Vec<(String, Symbol)>; 2] = [Vec::new(), Vec::new()];
        for s in self.symbols() {
            let name = self.name(s);
            let (base, side) = name.split_at(name.len() - 2);
            let k = if side == "_l" { 0 } else { 1 };
            bases[k].push((base.to_string(), s));
        }
        let build = |items: &[(String, Symbol)]| -> Option<CommutableSet> {
            let names: Vec<&str> = items.iter().map(|(n, _)| n.as_str()).collect();
            let mut op = CommutableSet::discrete(&names).ok()?;
            let n = op.len();
            for (i, (_, x)) in items.iter().enumerate() {
                for (j, (_, y)) in items.iter().enumerate() {
                    op.commutes[i * n + j] = self.commute(*x, *y);
                }
            }
            Some(op)
        };
        let left = Arc::new(build(&bases[0])?);
        let right = Arc::new(build(&bases[1])?);
        let candidate = if left.same_as(&right) {
            CommutableSet::double(left)
        } else {
            CommutableSet::direct_sum(left, right)
        };
        // declaration order must be the canonical interleaving, otherwise
        // symbol identities would silently change
        candidate.same_as(self).then_some(candidate)
    }

    /// Renders the set in the alphabet file format.
    pub fn render(&self) -> String {
        let mut out = String::from("alphabet");
        for name in &self.names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        if self.len() > 1 && self.is_commutative() {
            out.push_str("commute *\n");
            return out;
        }
        for x in self.symbols() {
            for y in self.symbols().filter(|y| *y > x) {
                if self.commute(x, y) {
                    out.push_str(&format!("commute {} {}\n", self.name(x), self.name(y)));
                }
            }
        }
        out
    }
}

impl fmt::Display for CommutableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(set: CommutableSet) -> Arc<CommutableSet> {
        Arc::new(set)
    }

    #[test]
    fn discrete_relation_is_identity() {
        let x = CommutableSet::discrete(&["a", "b"]).unwrap();
        let a = x.symbol("a").unwrap();
        let b = x.symbol("b").unwrap();
        assert_eq!(x.commuting_pairs(), vec![(a, a), (b, b)]);
        assert!(x.is_discrete());
    }

    #[test]
    fn commutative_relation_is_total() {
        let x = CommutableSet::commutative(&["a", "b"]).unwrap();
        assert_eq!(x.commuting_pairs().len(), 4);
        assert!(x.is_commutative());
    }

    #[test]
    fn pairs_are_closed_symmetrically() {
        let x = CommutableSet::new(&["a", "b", "c"], Mode::Pairs(&[("a", "b")])).unwrap();
        let s = |n| x.symbol(n).unwrap();
        let mut expected = vec![
            (s("a"), s("a")),
            (s("a"), s("b")),
            (s("b"), s("a")),
            (s("b"), s("b")),
            (s("c"), s("c")),
        ];
        expected.sort();
        assert_eq!(x.commuting_pairs(), expected);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            CommutableSet::discrete(&["a", "a"]).unwrap_err(),
            AlphabetError::DuplicateSymbol("a".into())
        );
        assert_eq!(
            CommutableSet::new(&["a"], Mode::Pairs(&[("a", "z")])).unwrap_err(),
            AlphabetError::UnknownSymbol("z".into())
        );
        assert!(matches!(
            CommutableSet::discrete(&["x_l"]),
            Err(AlphabetError::InvalidName(_))
        ));
    }

    #[test]
    fn direct_sum_rules() {
        let x = arc(CommutableSet::discrete(&["a"]).unwrap());
        let y = arc(CommutableSet::discrete(&["b"]).unwrap());
        let sum = CommutableSet::direct_sum(x, y);
        let al = sum.symbol("a_l").unwrap();
        let br = sum.symbol("b_r").unwrap();
        assert!(sum.commute(al, br));
        assert!(sum.commute(al, al));

        let xy = arc(CommutableSet::discrete(&["a", "b"]).unwrap());
        let sum = CommutableSet::direct_sum(xy.clone(), xy);
        let al = sum.symbol("a_l").unwrap();
        let bl = sum.symbol("b_l").unwrap();
        assert!(!sum.commute(al, bl));
    }

    #[test]
    fn doubling() {
        let x = arc(CommutableSet::discrete(&["a"]).unwrap());
        let d = CommutableSet::double(x);
        assert_eq!(d.names(), &["a_l".to_string(), "a_r".to_string()]);
        assert!(d.commute(Symbol::new(0), Symbol::new(1)));

        let empty = arc(CommutableSet::discrete(&[]).unwrap());
        assert!(CommutableSet::double(empty).is_empty());
    }

    #[test]
    fn doubled_sets_inherit_each_side() {
        let base = arc(CommutableSet::new(&["a", "b", "c"], Mode::Pairs(&[("a", "c")])).unwrap());
        let d = CommutableSet::double(base.clone());
        assert_eq!(d.len(), 2 * base.len());
        for x in d.symbols() {
            for y in d.symbols() {
                assert_eq!(d.commute(x, y), d.commute(y, x));
                let (sx, sy) = (d.sided(x).unwrap(), d.sided(y).unwrap());
                if sx.side != sy.side {
                    assert!(d.commute(x, y));
                } else {
                    assert_eq!(d.commute(x, y), base.commute(sx.base, sy.base));
                }
            }
        }
    }

    #[test]
    fn file_format_round_trip() {
        let text = "alphabet a b c\ncommute a b\n";
        let set = CommutableSet::parse(text).unwrap();
        assert_eq!(set.render(), text);
        let all = CommutableSet::parse("alphabet a b\ncommute *\n").unwrap();
        assert!(all.is_commutative());

        let base = arc(CommutableSet::new(&["a", "b"], Mode::Pairs(&[("a", "b")])).unwrap());
        let d = CommutableSet::double(base);
        let back = CommutableSet::parse(&d.render()).unwrap();
        assert!(back.is_direct_sum());
        assert!(back.same_as(&d));
    }

    #[test]
    fn file_format_errors() {
        assert!(matches!(
            CommutableSet::parse("commute a b\n"),
            Err(AlphabetError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            CommutableSet::parse("alphabet a\ncommute a\n"),
            Err(AlphabetError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            CommutableSet::parse("alphabet a\ncommute a z\n"),
            Err(AlphabetError::UnknownSymbol(_))
        ));
    }

    #[test]
    fn symbol_sets() {
        let mut s = SymbolSet::empty(3);
        s.insert(Symbol::new(2));
        s.insert(Symbol::new(70));
        assert!(s.contains(Symbol::new(70)));
        assert!(!s.contains(Symbol::new(1)));
        assert_eq!(
            s.iter().collect::<Vec<_>>(),
            vec![Symbol::new(2), Symbol::new(70)]
        );
        s.remove(Symbol::new(2));
        s.remove(Symbol::new(70));
        assert!(s.is_empty());
    }
}
