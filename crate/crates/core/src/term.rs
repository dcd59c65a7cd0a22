//! Hash-consed ground terms.
//!
//! Every [`Term`] lives in a process-wide table: two structurally equal terms
//! are the same allocation, so equality and hashing are pointer/id based.
//! Terms are immutable and `Copy`, and may be shared freely between threads.
//!
//! Heads are either declared symbols (AC, uninterpreted or theory symbols),
//! internal abstraction variables, abstraction constants (`K`), or exact
//! rational numerals.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::{Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::TermError;

pub type Rational = BigRational;

/// Which part of the signature a symbol belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    /// Theory symbols (`+`, `-`, `*` of linear arithmetic).
    Theory,
    /// Free function symbols and constants.
    Uninterpreted,
    /// Binary associative-commutative symbols.
    Ac,
}

struct SymbolData {
    name: Box<str>,
    kind: SymbolKind,
    arity: usize,
    id: u32,
}

/// An interned function symbol. Symbols with the same name but a different
/// kind or arity are distinct.
#[derive(Clone, Copy)]
pub struct Symbol(&'static SymbolData);

type SymbolKey = (Box<str>, SymbolKind, usize);

fn symbol_table() -> &'static Mutex<HashMap<SymbolKey, Symbol>> {
    static TABLE: OnceLock<Mutex<HashMap<SymbolKey, Symbol>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Symbol {
    pub fn new(name: &str, kind: SymbolKind, arity: usize) -> Result<Symbol, TermError> {
        if kind == SymbolKind::Ac && arity != 2 {
            return Err(TermError::AcArity {
                symbol: name.to_string(),
                arity,
            });
        }
        let mut table = symbol_table().lock().unwrap();
        let key: SymbolKey = (name.into(), kind, arity);
        if let Some(sym) = table.get(&key) {
            return Ok(*sym);
        }
        let id = table.len() as u32;
        let data = Box::leak(Box::new(SymbolData {
            name: name.into(),
            kind,
            arity,
            id,
        }));
        let sym = Symbol(data);
        table.insert(key, sym);
        Ok(sym)
    }

    pub fn ac(name: &str) -> Symbol {
        Symbol::new(name, SymbolKind::Ac, 2).expect("AC symbols are binary")
    }

    pub fn uninterpreted(name: &str, arity: usize) -> Symbol {
        Symbol::new(name, SymbolKind::Uninterpreted, arity).unwrap()
    }

    pub fn theory(name: &str, arity: usize) -> Symbol {
        Symbol::new(name, SymbolKind::Theory, arity).unwrap()
    }

    pub fn name(&self) -> &'static str {
        &self.0.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.0.kind
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn is_ac(&self) -> bool {
        self.0.kind == SymbolKind::Ac
    }

    pub fn is_theory(&self) -> bool {
        self.0.kind == SymbolKind::Theory
    }

    /// Interning-independent order: kind, then name, then arity.
    pub fn structural_cmp(&self, other: &Symbol) -> Ordering {
        self.kind()
            .cmp(&other.kind())
            .then_with(|| self.name().cmp(other.name()))
            .then_with(|| self.arity().cmp(&other.arity()))
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name(), self.arity())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The root of a term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    Sym(Symbol),
    /// Abstraction variable produced by the pure-part mapping.
    Var(u32),
    /// Abstraction constant introduced by term abstraction.
    K(u32),
    Num(Rational),
}

struct TermData {
    id: u32,
    head: Head,
    args: Box<[Term]>,
    size: u32,
}

/// An interned, immutable ground term.
#[derive(Clone, Copy)]
pub struct Term(&'static TermData);

type TermKey = (Head, Box<[Term]>);

fn term_table() -> &'static RwLock<HashMap<TermKey, Term>> {
    static TABLE: OnceLock<RwLock<HashMap<TermKey, Term>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(HashMap::new()))
}

static NEXT_TERM_ID: AtomicU32 = AtomicU32::new(0);

impl Term {
    fn intern(head: Head, args: Vec<Term>) -> Term {
        let key: TermKey = (head, args.into_boxed_slice());
        if let Some(t) = term_table().read().unwrap().get(&key) {
            return *t;
        }
        let mut table = term_table().write().unwrap();
        if let Some(t) = table.get(&key) {
            return *t;
        }
        let size = 1 + key.1.iter().map(|a| a.size()).sum::<u32>();
        let data = Box::leak(Box::new(TermData {
            id: NEXT_TERM_ID.fetch_add(1, AtomicOrdering::Relaxed),
            head: key.0.clone(),
            args: key.1.clone(),
            size,
        }));
        let t = Term(data);
        table.insert(key, t);
        t
    }

    /// Builds `sym(args)`. Panics when the argument count does not match the
    /// declared arity; callers that handle user input check arities first.
    pub fn app(sym: Symbol, args: Vec<Term>) -> Term {
        assert_eq!(
            sym.arity(),
            args.len(),
            "arity mismatch for symbol {}",
            sym.name()
        );
        Term::intern(Head::Sym(sym), args)
    }

    pub fn constant(sym: Symbol) -> Term {
        Term::app(sym, Vec::new())
    }

    pub fn var(index: u32) -> Term {
        Term::intern(Head::Var(index), Vec::new())
    }

    pub fn kconst(index: u32) -> Term {
        Term::intern(Head::K(index), Vec::new())
    }

    pub fn num(value: Rational) -> Term {
        Term::intern(Head::Num(value), Vec::new())
    }

    pub fn int(value: i64) -> Term {
        Term::num(Rational::from_integer(BigInt::from(value)))
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn head(&self) -> &'static Head {
        &self.0.head
    }

    pub fn args(&self) -> &'static [Term] {
        &self.0.args
    }

    pub fn arity(&self) -> usize {
        self.0.args.len()
    }

    /// Number of nodes.
    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn symbol(&self) -> Option<Symbol> {
        match self.head() {
            Head::Sym(s) => Some(*s),
            _ => None,
        }
    }

    pub fn numeral(&self) -> Option<&'static Rational> {
        match self.head() {
            Head::Num(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self.head(), Head::Var(_))
    }

    pub fn is_kconst(&self) -> bool {
        matches!(self.head(), Head::K(_))
    }

    /// Abstraction constants and user constants (nullary uninterpreted
    /// symbols) both count as constants of the abstracted fragment.
    pub fn is_constant(&self) -> bool {
        match self.head() {
            Head::K(_) => true,
            Head::Sym(s) => s.kind() == SymbolKind::Uninterpreted && s.arity() == 0,
            _ => false,
        }
    }

    /// True for numerals and terms headed by a theory symbol.
    pub fn is_theory_node(&self) -> bool {
        match self.head() {
            Head::Num(_) => true,
            Head::Sym(s) => s.is_theory(),
            _ => false,
        }
    }

    pub fn is_headed_by(&self, sym: Symbol) -> bool {
        self.symbol() == Some(sym)
    }

    /// Rebuilds this node with new arguments.
    pub fn with_args(&self, args: Vec<Term>) -> Term {
        debug_assert_eq!(args.len(), self.arity());
        if args.iter().zip(self.args()).all(|(a, b)| a == b) {
            return *self;
        }
        Term::intern(self.head().clone(), args)
    }

    /// Does `sub` occur in `self`?
    pub fn contains(&self, sub: Term) -> bool {
        *self == sub || (self.size() > sub.size() && self.args().iter().any(|a| a.contains(sub)))
    }

    /// Pre-order iterator over all subterm occurrences.
    pub fn subterms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        let mut stack = vec![*self];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(t.args().iter().rev());
        }
        out
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, n: &Rational) -> fmt::Result {
    if n.is_integer() {
        write!(f, "{}", n.numer())
    } else {
        write!(f, "{}/{}", n.numer(), n.denom())
    }
}

impl Term {
    fn is_sum(&self) -> bool {
        matches!(self.symbol(), Some(s) if s.is_theory() && (s.name() == "+" || (s.name() == "-" && s.arity() == 2)))
    }

    /// For display: `x` when the term reads `-x`, `(-q)*x` or `-q`.
    fn negated(&self) -> Option<Term> {
        match (self.head(), self.args()) {
            (Head::Num(n), _) if n.is_negative() => Some(Term::num(-n.clone())),
            (Head::Sym(s), [a]) if s.is_theory() && s.name() == "-" => Some(*a),
            (Head::Sym(s), [k, x]) if s.is_theory() && s.name() == "*" => match k.head() {
                Head::Num(n) if n.is_negative() => {
                    let m = -n.clone();
                    Some(if m.is_one() {
                        *x
                    } else {
                        Term::app(*s, vec![Term::num(m), *x])
                    })
                }
                _ => None,
            },
            _ => None,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, in_product: bool) -> fmt::Result {
        match self.head() {
            Head::Num(n) => {
                if in_product && n.is_negative() {
                    f.write_str("(")?;
                    write_rational(f, n)?;
                    f.write_str(")")
                } else {
                    write_rational(f, n)
                }
            }
            Head::Var(i) => write!(f, "x{i}"),
            Head::K(i) => write!(f, "k{i}"),
            Head::Sym(s) if s.is_theory() => {
                let paren = in_product && self.is_sum();
                if paren {
                    f.write_str("(")?;
                }
                match (s.name(), self.args()) {
                    ("+", [a, b]) => {
                        a.fmt_prec(f, false)?;
                        match b.negated() {
                            Some(nb) => {
                                f.write_str(" - ")?;
                                nb.fmt_prec(f, true)?;
                            }
                            None => {
                                f.write_str(" + ")?;
                                b.fmt_prec(f, false)?;
                            }
                        }
                    }
                    ("-", [a, b]) => {
                        a.fmt_prec(f, false)?;
                        f.write_str(" - ")?;
                        b.fmt_prec(f, true)?;
                    }
                    ("-", [a]) => {
                        f.write_str("-")?;
                        a.fmt_prec(f, true)?;
                    }
                    ("*", [a, b]) if a.numeral().is_some_and(|n| (-n).is_one()) => {
                        f.write_str("-")?;
                        b.fmt_prec(f, true)?;
                    }
                    ("*", [a, b]) => {
                        a.fmt_prec(f, true)?;
                        f.write_str("*")?;
                        b.fmt_prec(f, true)?;
                    }
                    _ => write_app(f, s.name(), self.args())?,
                }
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Head::Sym(s) => write_app(f, s.name(), self.args()),
        }
    }
}

fn write_app(f: &mut fmt::Formatter<'_>, name: &str, args: &[Term]) -> fmt::Result {
    f.write_str(name)?;
    if !args.is_empty() {
        f.write_str("(")?;
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            a.fmt_prec(f, false)?;
        }
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}

/// A path of 0-based child indices; the empty path is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn is_valid_in(&self, t: Term) -> bool {
        subterm_at(t, self).is_ok()
    }
}

impl From<Vec<usize>> for Position {
    fn from(v: Vec<usize>) -> Self {
        Position(v)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("Λ");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

pub fn subterm_at(t: Term, p: &Position) -> Result<Term, TermError> {
    let mut cur = t;
    for &i in &p.0 {
        cur = *cur
            .args()
            .get(i)
            .ok_or_else(|| TermError::InvalidPosition {
                term: t.to_string(),
                position: p.to_string(),
            })?;
    }
    Ok(cur)
}

pub fn replace_at(t: Term, p: &Position, r: Term) -> Result<Term, TermError> {
    fn go(t: Term, path: &[usize], r: Term) -> Option<Term> {
        match path.split_first() {
            None => Some(r),
            Some((&i, rest)) => {
                let child = *t.args().get(i)?;
                let new_child = go(child, rest, r)?;
                let mut args = t.args().to_vec();
                args[i] = new_child;
                Some(t.with_args(args))
            }
        }
    }
    go(t, &p.0, r).ok_or_else(|| TermError::InvalidPosition {
        term: t.to_string(),
        position: p.to_string(),
    })
}

/// A finite multiset of terms, kept sorted by term id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Multiset(Vec<Term>);

impl Multiset {
    pub fn new() -> Multiset {
        Multiset(Vec::new())
    }

    pub fn from_vec(mut v: Vec<Term>) -> Multiset {
        v.sort_unstable_by_key(|t| t.id());
        Multiset(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Term] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<Term> {
        self.0
    }

    pub fn count(&self, t: Term) -> usize {
        self.0.iter().filter(|x| **x == t).count()
    }

    fn merge_walk(&self, other: &Multiset, mut f: impl FnMut(Option<Term>, Option<Term>)) {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x.id() == y.id() => {
                    f(Some(*x), Some(*y));
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x.id() < y.id() => {
                    f(Some(*x), None);
                    i += 1;
                }
                (Some(_), Some(y)) => {
                    f(None, Some(*y));
                    j += 1;
                }
                (Some(x), None) => {
                    f(Some(*x), None);
                    i += 1;
                }
                (None, Some(y)) => {
                    f(None, Some(*y));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
    }

    pub fn intersection(&self, other: &Multiset) -> Multiset {
        let mut out = Vec::new();
        self.merge_walk(other, |a, b| {
            if let (Some(x), Some(_)) = (a, b) {
                out.push(x)
            }
        });
        Multiset(out)
    }

    /// `self - other` with multiplicities.
    pub fn difference(&self, other: &Multiset) -> Multiset {
        let mut out = Vec::new();
        self.merge_walk(other, |a, b| {
            if let (Some(x), None) = (a, b) {
                out.push(x)
            }
        });
        Multiset(out)
    }

    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Multiset::from_vec(v)
    }

    pub fn is_submultiset_of(&self, other: &Multiset) -> bool {
        let mut ok = true;
        self.merge_walk(other, |a, b| {
            if let (Some(_), None) = (a, b) {
                ok = false
            }
        });
        ok
    }

    pub fn is_strict_submultiset_of(&self, other: &Multiset) -> bool {
        self.len() < other.len() && self.is_submultiset_of(other)
    }
}

impl FromIterator<Term> for Multiset {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        Multiset::from_vec(iter.into_iter().collect())
    }
}

/// Pushes the `u`-aliens of `t` (maximal subterms not headed by `u`).
pub fn flatten_into(t: Term, u: Symbol, out: &mut Vec<Term>) {
    if t.is_headed_by(u) {
        for a in t.args() {
            flatten_into(*a, u, out);
        }
    } else {
        out.push(t);
    }
}

pub fn flatten(t: Term, u: Symbol) -> Vec<Term> {
    let mut out = Vec::new();
    flatten_into(t, u, &mut out);
    out
}

/// The multiset of `u`-aliens of `t`; `{t}` when `t` is not headed by `u`.
pub fn aliens(t: Term, u: Symbol) -> Result<Multiset, TermError> {
    if !u.is_ac() {
        return Err(TermError::NotAc(u.name().to_string()));
    }
    Ok(Multiset::from_vec(flatten(t, u)))
}

/// Right-leaning `u`-comb over the elements sorted by [`struct_cmp`]. A single
/// element is returned as is.
pub fn ac_comb(u: Symbol, mut elems: Vec<Term>) -> Term {
    assert!(!elems.is_empty(), "empty AC comb");
    elems.sort_by(|a, b| struct_cmp(*a, *b));
    let mut acc = elems.pop().unwrap();
    while let Some(e) = elems.pop() {
        acc = Term::app(u, vec![e, acc]);
    }
    acc
}

/// Replaces every occurrence of a key of `subst` by its image.
pub fn apply_substitution(t: Term, subst: &HashMap<Term, Term>) -> Term {
    if subst.is_empty() {
        return t;
    }
    if let Some(r) = subst.get(&t) {
        return *r;
    }
    if t.arity() == 0 {
        return t;
    }
    let args = t
        .args()
        .iter()
        .map(|a| apply_substitution(*a, subst))
        .collect();
    t.with_args(args)
}

fn head_class(h: &Head) -> u8 {
    match h {
        Head::Num(_) => 0,
        Head::K(_) => 1,
        Head::Var(_) => 2,
        Head::Sym(s) => match s.kind() {
            SymbolKind::Theory => 3,
            SymbolKind::Uninterpreted => 4,
            SymbolKind::Ac => 5,
        },
    }
}

/// The total structural order used to sort AC arguments. It does not
/// depend on interning order, so canonical forms are reproducible.
pub fn struct_cmp(a: Term, b: Term) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let (ha, hb) = (a.head(), b.head());
    head_class(ha)
        .cmp(&head_class(hb))
        .then_with(|| match (ha, hb) {
            (Head::Num(x), Head::Num(y)) => x.cmp(y),
            (Head::K(x), Head::K(y)) | (Head::Var(x), Head::Var(y)) => x.cmp(y),
            (Head::Sym(x), Head::Sym(y)) => x.structural_cmp(y),
            _ => Ordering::Equal,
        })
        .then_with(|| a.arity().cmp(&b.arity()))
        .then_with(|| {
            for (x, y) in a.args().iter().zip(b.args()) {
                let c = struct_cmp(*x, *y);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(name: &str) -> Term {
        Term::constant(Symbol::uninterpreted(name, 0))
    }

    #[test]
    fn interning_identifies_equal_terms() {
        let f = Symbol::uninterpreted("f", 2);
        let t1 = Term::app(f, vec![c("a"), c("b")]);
        let t2 = Term::app(f, vec![c("a"), c("b")]);
        assert_eq!(t1, t2);
        assert_eq!(t1.id(), t2.id());
        assert_ne!(t1, Term::app(f, vec![c("b"), c("a")]));
    }

    #[test]
    fn ac_symbols_must_be_binary() {
        assert!(Symbol::new("u3", SymbolKind::Ac, 3).is_err());
    }

    #[test]
    fn subterm_and_replace() {
        let u = Symbol::ac("u");
        let t = Term::app(u, vec![c("a"), c("b")]);
        assert_eq!(subterm_at(t, &Position(vec![1])).unwrap(), c("b"));
        assert_eq!(subterm_at(t, &Position::root()).unwrap(), t);
        assert!(subterm_at(t, &Position(vec![2])).is_err());
        assert!(subterm_at(t, &Position(vec![0, 0])).is_err());

        let f = Symbol::uninterpreted("f", 1);
        let fa = Term::app(f, vec![c("a")]);
        assert_eq!(
            replace_at(fa, &Position(vec![0]), c("b")).unwrap(),
            Term::app(f, vec![c("b")])
        );
        assert_eq!(replace_at(fa, &Position::root(), c("b")).unwrap(), c("b"));
        let t = Term::app(u, vec![c("a"), Term::app(u, vec![c("b"), c("c")])]);
        assert_eq!(
            replace_at(t, &Position(vec![1]), c("d")).unwrap(),
            Term::app(u, vec![c("a"), c("d")])
        );
        assert!(replace_at(t, &Position(vec![5]), c("d")).is_err());
    }

    #[test]
    fn aliens_flatten_one_symbol() {
        let u = Symbol::ac("u");
        let u2 = Symbol::ac("u'");
        let t = Term::app(u, vec![c("a"), Term::app(u, vec![c("b"), c("a")])]);
        assert_eq!(
            aliens(t, u).unwrap(),
            Multiset::from_vec(vec![c("a"), c("a"), c("b")])
        );

        let f = Symbol::uninterpreted("f", 1);
        let inner = Term::app(u, vec![c("a"), c("b")]);
        let fu = Term::app(f, vec![inner]);
        assert_eq!(aliens(fu, u).unwrap(), Multiset::from_vec(vec![fu]));

        let ucb = Term::app(u2, vec![c("c"), c("b")]);
        let t = Term::app(u, vec![c("b"), Term::app(u, vec![c("c"), ucb])]);
        assert_eq!(
            aliens(t, u).unwrap(),
            Multiset::from_vec(vec![c("b"), c("c"), ucb])
        );

        assert!(aliens(t, f).is_err());
    }

    #[test]
    fn substitution_is_homomorphic() {
        let u = Symbol::ac("u");
        let f = Symbol::uninterpreted("f", 1);
        let plus = Symbol::theory("+", 2);
        let (x, y) = (Term::var(0), Term::var(1));
        let mut s = HashMap::new();
        s.insert(x, c("a"));
        assert_eq!(apply_substitution(x, &s), c("a"));
        let fx = Term::app(f, vec![x]);
        assert_eq!(apply_substitution(fx, &HashMap::new()), fx);

        let uab = Term::app(u, vec![c("a"), c("b")]);
        let mut s = HashMap::new();
        s.insert(x, uab);
        s.insert(y, c("a"));
        let sum = Term::app(plus, vec![x, y]);
        assert_eq!(
            apply_substitution(sum, &s),
            Term::app(plus, vec![uab, c("a")])
        );
    }

    #[test]
    fn multiset_operations() {
        let (a, b, d) = (c("a"), c("b"), c("d"));
        let m1 = Multiset::from_vec(vec![a, a, b]);
        let m2 = Multiset::from_vec(vec![a, b, d]);
        assert_eq!(m1.intersection(&m2), Multiset::from_vec(vec![a, b]));
        assert_eq!(m1.difference(&m2), Multiset::from_vec(vec![a]));
        assert_eq!(m2.difference(&m1), Multiset::from_vec(vec![d]));
        assert!(Multiset::from_vec(vec![a, b]).is_strict_submultiset_of(&m1));
        assert!(!m1.is_strict_submultiset_of(&m1));
        assert!(!m1.is_submultiset_of(&m2));
        assert_eq!(m1.union(&m2).len(), 6);
    }

    #[test]
    fn comb_is_right_leaning_and_sorted() {
        let u = Symbol::ac("u");
        let t = ac_comb(u, vec![c("c"), c("a"), c("b")]);
        assert_eq!(
            t,
            Term::app(u, vec![c("a"), Term::app(u, vec![c("b"), c("c")])])
        );
        assert_eq!(ac_comb(u, vec![c("a")]), c("a"));
    }

    #[test]
    fn structural_order_puts_numerals_first() {
        let plus = Symbol::theory("+", 2);
        let one = Term::int(1);
        let sum = Term::app(plus, vec![c("c1"), one]);
        assert_eq!(struct_cmp(one, c("a")), Ordering::Less);
        assert_eq!(struct_cmp(Term::kconst(3), c("a")), Ordering::Less);
        assert_eq!(struct_cmp(sum, c("a")), Ordering::Less);
        assert_eq!(struct_cmp(c("a"), c("b")), Ordering::Less);
    }

    #[test]
    fn display_is_readable() {
        let u = Symbol::ac("u");
        let plus = Symbol::theory("+", 2);
        let times = Symbol::theory("*", 2);
        let t = Term::app(
            u,
            vec![
                c("a"),
                Term::app(
                    plus,
                    vec![Term::app(times, vec![Term::int(2), c("c1")]), Term::int(1)],
                ),
            ],
        );
        assert_eq!(t.to_string(), "u(a,2*c1 + 1)");
    }
}
