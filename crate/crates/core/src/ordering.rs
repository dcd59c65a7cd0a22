//! Term orderings.
//!
//! Two orderings live here:
//!
//! * the partial ordering on abstracted terms, built from a total path
//!   ordering on terms over theory symbols and constants and its multiset
//!   extension ([`compare`]);
//! * a total ground AC path ordering ([`AcRpo`]) used when completion runs
//!   directly on unabstracted input.
//!
//! Both read symbol and constant ranks from a [`Precedence`].

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::OrderError;
use crate::term::{ac_comb, flatten, struct_cmp, Head, Symbol, SymbolKind, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderResult {
    Less,
    Greater,
    Equivalent,
    Incomparable,
}

impl OrderResult {
    pub fn reverse(self) -> OrderResult {
        match self {
            OrderResult::Less => OrderResult::Greater,
            OrderResult::Greater => OrderResult::Less,
            r => r,
        }
    }

    pub fn is_less(self) -> bool {
        self == OrderResult::Less
    }

    pub fn is_greater(self) -> bool {
        self == OrderResult::Greater
    }
}

/// Which ordering drives orientation and collapse decisions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum OrderingMode {
    /// Abstracted input, partial multiset ordering.
    #[default]
    Abstracted,
    /// Unabstracted input, total ground AC path ordering.
    Direct,
}

/// Ranks of constants and symbols. Constants (user constants and
/// abstraction constants) are ranked by registration order; unregistered
/// ones sort after all registered ones, by structure.
#[derive(Clone, Debug, Default)]
pub struct Precedence {
    constants: HashMap<Term, u32>,
    symbols: HashMap<Symbol, u32>,
}

/// Fixed precedence of the arithmetic symbols, lowest first.
const THEORY_SYMBOLS: [(&str, usize); 4] = [("+", 2), ("*", 2), ("-", 1), ("-", 2)];

impl Precedence {
    pub fn new() -> Precedence {
        Precedence::default()
    }

    /// Registers a constant above every constant registered so far.
    /// Re-registering is a no-op.
    pub fn register_constant(&mut self, c: Term) {
        debug_assert!(c.is_constant(), "{c} is not a constant");
        let next = self.constants.len() as u32;
        self.constants.entry(c).or_insert(next);
    }

    pub fn register_symbol(&mut self, s: Symbol) {
        let next = self.symbols.len() as u32;
        self.symbols.entry(s).or_insert(next);
    }

    pub fn constant_rank(&self, c: Term) -> Option<u32> {
        self.constants.get(&c).copied()
    }

    pub fn constant_cmp(&self, a: Term, b: Term) -> Ordering {
        match (self.constants.get(&a), self.constants.get(&b)) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => struct_cmp(a, b),
        }
    }

    fn symbol_cmp(&self, a: Symbol, b: Symbol) -> Ordering {
        match (self.symbols.get(&a), self.symbols.get(&b)) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => a.structural_cmp(&b),
        }
    }

    fn theory_rank(s: Symbol) -> usize {
        THEORY_SYMBOLS
            .iter()
            .position(|(n, a)| *n == s.name() && *a == s.arity())
            .unwrap_or(THEORY_SYMBOLS.len())
    }

    /// Precedence class of a head: numerals < theory symbols < variables <
    /// constants < non-constant free symbols < AC symbols.
    fn head_class(t: Term) -> u8 {
        if t.is_constant() {
            return 3;
        }
        match t.head() {
            Head::Num(_) => 0,
            Head::Var(_) => 2,
            Head::K(_) => 3,
            Head::Sym(s) => match s.kind() {
                SymbolKind::Theory => 1,
                SymbolKind::Uninterpreted => 4,
                SymbolKind::Ac => 5,
            },
        }
    }

    /// Compares the head symbols of two terms.
    pub fn head_cmp(&self, a: Term, b: Term) -> Ordering {
        let (ca, cb) = (Self::head_class(a), Self::head_class(b));
        if ca != cb {
            return ca.cmp(&cb);
        }
        match (a.head(), b.head()) {
            (Head::Num(x), Head::Num(y)) => x.cmp(y),
            (Head::Var(x), Head::Var(y)) => x.cmp(y),
            _ if ca == 3 => self.constant_cmp(a, b),
            (Head::Sym(x), Head::Sym(y)) if ca == 1 => Self::theory_rank(*x)
                .cmp(&Self::theory_rank(*y))
                .then_with(|| x.structural_cmp(y)),
            (Head::Sym(x), Head::Sym(y)) => self.symbol_cmp(*x, *y),
            _ => Ordering::Equal,
        }
    }
}

/// Membership of a term in the fragments used by abstraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fragment {
    /// Built from theory symbols, numerals and constants only.
    PureXK,
    /// A free symbol of positive arity applied to pure arguments.
    TEmpty,
    /// An AC comb whose aliens are all pure.
    TAc(Symbol),
    Other,
}

pub fn is_pure(t: Term) -> bool {
    if t.is_constant() {
        return true;
    }
    match t.head() {
        Head::Num(_) => true,
        Head::Sym(s) if s.is_theory() => t.args().iter().all(|a| is_pure(*a)),
        _ => false,
    }
}

pub fn fragment(t: Term) -> Fragment {
    if is_pure(t) {
        return Fragment::PureXK;
    }
    match t.head() {
        Head::Sym(s) if s.is_ac() => {
            if flatten(t, *s).into_iter().all(is_pure) {
                Fragment::TAc(*s)
            } else {
                Fragment::Other
            }
        }
        Head::Sym(s) if s.kind() == SymbolKind::Uninterpreted => {
            if t.args().iter().all(|a| is_pure(*a)) {
                Fragment::TEmpty
            } else {
                Fragment::Other
            }
        }
        _ => Fragment::Other,
    }
}

/// Recursive path ordering with AC flattening.
///
/// Arithmetic symbols have multiset status and `+` is compared on its
/// flattened summands. Free symbols use lexicographic status. AC symbols
/// follow the ground AC path ordering: an argument is "small" when its head
/// is below the AC symbol, and small arguments can be embedded into the
/// comb.
struct PathOrder<'a> {
    prec: &'a Precedence,
    cache: HashMap<(u32, u32), bool>,
}

impl<'a> PathOrder<'a> {
    fn new(prec: &'a Precedence) -> Self {
        PathOrder {
            prec,
            cache: HashMap::new(),
        }
    }

    fn ord_args(t: Term) -> Vec<Term> {
        match t.symbol() {
            Some(s) if s.is_ac() || (s.is_theory() && s.name() == "+") => flatten(t, s),
            _ => t.args().to_vec(),
        }
    }

    fn ge(&mut self, s: Term, t: Term) -> bool {
        s == t || self.gt(s, t)
    }

    fn gt(&mut self, s: Term, t: Term) -> bool {
        if s == t {
            return false;
        }
        if let Some(r) = self.cache.get(&(s.id(), t.id())) {
            return *r;
        }
        let r = self.gt_uncached(s, t);
        self.cache.insert((s.id(), t.id()), r);
        r
    }

    fn gt_uncached(&mut self, s: Term, t: Term) -> bool {
        if is_arith(s) && is_arith(t) {
            // Arithmetic terms compare by their atoms, then by monomial count,
            // so that collecting like monomials always decreases.
            let (xs, ys) = (arith_atoms(s), arith_atoms(t));
            if xs != ys {
                return self.mul_gt(&xs, &ys);
            }
            let (ms, mt) = (monomials(s), monomials(t));
            if ms != mt {
                return ms > mt;
            }
        }
        let sargs = Self::ord_args(s);
        if sargs.iter().any(|a| self.ge(*a, t)) {
            return true;
        }
        let targs = Self::ord_args(t);
        match self.prec.head_cmp(s, t) {
            Ordering::Less => false,
            Ordering::Greater => targs.iter().all(|b| self.gt(s, *b)),
            Ordering::Equal => match s.symbol() {
                Some(u) if u.is_ac() => self.ac_gt(s, t, u, &sargs, &targs),
                Some(f) if f.is_theory() => {
                    targs.iter().all(|b| self.gt(s, *b)) && self.mul_gt(&sargs, &targs)
                }
                Some(_) => targs.iter().all(|b| self.gt(s, *b)) && self.lex_gt(&sargs, &targs),
                None => false,
            },
        }
    }

    fn lex_gt(&mut self, a: &[Term], b: &[Term]) -> bool {
        for (x, y) in a.iter().zip(b) {
            if x != y {
                return self.gt(*x, *y);
            }
        }
        a.len() > b.len()
    }

    /// Dershowitz-Manna multiset extension of `gt`.
    fn mul_gt(&mut self, a: &[Term], b: &[Term]) -> bool {
        let (a, b) = multiset_minus_common(a, b);
        if a.is_empty() {
            return false;
        }
        b.iter().all(|y| a.iter().any(|x| self.gt(*x, *y)))
    }

    fn mul_ge(&mut self, a: &[Term], b: &[Term]) -> bool {
        let (ra, rb) = multiset_minus_common(a, b);
        (ra.is_empty() && rb.is_empty()) || self.mul_gt(a, b)
    }

    fn emb_small(&self, s: Term, u: Symbol, args: &[Term]) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        for (i, v) in args.iter().enumerate() {
            if args[..i].contains(v) || self.prec.head_cmp(*v, s) != Ordering::Less {
                continue;
            }
            let rest: Vec<Term> = args
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, x)| *x)
                .collect();
            // A small argument is replaced by one of its own arguments.
            for w in v.args() {
                let mut xs = rest.clone();
                xs.extend(flatten(*w, u));
                out.push(ac_comb(u, xs));
            }
        }
        out
    }

    fn ac_gt(&mut self, s: Term, t: Term, u: Symbol, sargs: &[Term], targs: &[Term]) -> bool {
        for e in self.emb_small(s, u, sargs) {
            if self.ge(e, t) {
                return true;
            }
        }
        for e in self.emb_small(t, u, targs) {
            if !self.gt(s, e) {
                return false;
            }
        }
        let prec = self.prec;
        let no_small = |args: &[Term], top: Term| -> Vec<Term> {
            args.iter()
                .copied()
                .filter(|a| prec.head_cmp(*a, top) != Ordering::Less)
                .collect()
        };
        let big = |args: &[Term], top: Term| -> Vec<Term> {
            args.iter()
                .copied()
                .filter(|a| prec.head_cmp(*a, top) == Ordering::Greater)
                .collect()
        };
        let (nss, nst) = (no_small(sargs, s), no_small(targs, t));
        if !self.mul_ge(&nss, &nst) {
            return false;
        }
        let (bs, bt) = (big(sargs, s), big(targs, t));
        self.mul_gt(&bs, &bt)
            || sargs.len() > targs.len()
            || (sargs.len() >= targs.len() && self.mul_gt(sargs, targs))
    }

    fn compare(&mut self, s: Term, t: Term) -> OrderResult {
        let (s, t) = (permutation_normal(s), permutation_normal(t));
        if s == t {
            OrderResult::Equivalent
        } else if self.gt(s, t) {
            OrderResult::Greater
        } else if self.gt(t, s) {
            OrderResult::Less
        } else {
            OrderResult::Incomparable
        }
    }
}

fn is_arith(t: Term) -> bool {
    t.numeral().is_some() || t.symbol().is_some_and(|s| s.is_theory())
}

/// Maximal subterms outside arithmetic, with repetitions, sorted by id.
fn arith_atoms(t: Term) -> Vec<Term> {
    fn go(t: Term, out: &mut Vec<Term>) {
        match t.head() {
            Head::Num(_) => {}
            Head::Sym(s) if s.is_theory() => t.args().iter().for_each(|a| go(*a, out)),
            _ => out.push(t),
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    out.sort_by_key(|a| a.id());
    out
}

/// Number of monomials of an arithmetic term expanded without collecting
/// like terms. Canonization never increases it.
fn monomials(t: Term) -> u64 {
    match (t.symbol(), t.args()) {
        (Some(f), [a, b]) if f.is_theory() && f.name() == "*" => {
            monomials(*a).saturating_mul(monomials(*b))
        }
        (Some(f), args) if f.is_theory() => args
            .iter()
            .fold(0u64, |n, a| n.saturating_add(monomials(*a))),
        _ => 1,
    }
}

/// Sorts the arguments of AC symbols and of `+`, so that terms equal up to
/// such permutations become identical.
fn permutation_normal(t: Term) -> Term {
    match t.symbol() {
        Some(u) if u.is_ac() || (u.is_theory() && u.name() == "+") => {
            let mut xs: Vec<Term> = flatten(t, u).into_iter().map(permutation_normal).collect();
            xs.sort_by(|a, b| struct_cmp(*a, *b));
            ac_comb(u, xs)
        }
        _ if t.arity() > 0 => {
            t.with_args(t.args().iter().map(|a| permutation_normal(*a)).collect())
        }
        _ => t,
    }
}

fn multiset_minus_common(a: &[Term], b: &[Term]) -> (Vec<Term>, Vec<Term>) {
    let mut rb: Vec<Option<Term>> = b.iter().copied().map(Some).collect();
    let mut ra = Vec::new();
    for x in a {
        match rb.iter().position(|y| *y == Some(*x)) {
            Some(j) => rb[j] = None,
            None => ra.push(*x),
        }
    }
    (ra, rb.into_iter().flatten().collect())
}

/// The total path ordering on terms over theory symbols, numerals and
/// constants. Numerals sit below theory symbols, which sit below constants.
pub fn compare_x(v1: Term, v2: Term, prec: &Precedence) -> Result<OrderResult, OrderError> {
    for v in [v1, v2] {
        if !is_pure(v) {
            return Err(OrderError::NotPure(v.to_string()));
        }
    }
    Ok(PathOrder::new(prec).compare(v1, v2))
}

/// Multiset extension of [`compare_x`]: is `m1` strictly below `m2`?
/// Elements outside the pure fragment make the answer `false`.
pub fn multiset_less(m1: &[Term], m2: &[Term], prec: &Precedence) -> bool {
    if m1.iter().chain(m2).any(|t| !is_pure(*t)) {
        return false;
    }
    PathOrder::new(prec).mul_gt(m2, m1)
}

/// The partial ordering on abstracted terms:
///
/// 1. pure terms are compared with [`compare_x`];
/// 2. pure terms are below free-symbol applications;
/// 3. pure terms are below AC combs;
/// 4. two combs of the same AC symbol compare by the multiset extension on
///    their aliens.
///
/// Everything else is incomparable.
pub fn compare(s: Term, t: Term, prec: &Precedence) -> Result<OrderResult, OrderError> {
    let (fs, ft) = (fragment(s), fragment(t));
    for (x, f) in [(s, fs), (t, ft)] {
        if f == Fragment::Other {
            return Err(OrderError::NotAbstracted(x.to_string()));
        }
    }
    if s == t {
        return Ok(OrderResult::Equivalent);
    }
    Ok(match (fs, ft) {
        (Fragment::PureXK, Fragment::PureXK) => PathOrder::new(prec).compare(s, t),
        (Fragment::PureXK, _) => OrderResult::Less,
        (_, Fragment::PureXK) => OrderResult::Greater,
        (Fragment::TAc(u), Fragment::TAc(v)) if u == v => {
            // Alien count first: a bare multiset comparison is not monotone
            // once combs may collapse to pure terms.
            let (ms, mt) = (flatten(s, u), flatten(t, u));
            let mut po = PathOrder::new(prec);
            if ms.len() != mt.len() {
                if ms.len() < mt.len() {
                    OrderResult::Less
                } else {
                    OrderResult::Greater
                }
            } else if po.mul_gt(&mt, &ms) {
                OrderResult::Less
            } else if po.mul_gt(&ms, &mt) {
                OrderResult::Greater
            } else {
                OrderResult::Incomparable
            }
        }
        _ => OrderResult::Incomparable,
    })
}

/// Total ground AC path ordering over arbitrary canonical terms.
///
/// Terms are compared modulo permutation of AC and `+` arguments. Two
/// arithmetic terms compare first by their non-arithmetic atoms, then by
/// monomial count, and only then by the path ordering, so canonization
/// never increases a term.
pub struct AcRpo;

impl AcRpo {
    pub fn compare(s: Term, t: Term, prec: &Precedence) -> OrderResult {
        PathOrder::new(prec).compare(s, t)
    }
}

/// A reusable comparator bound to a mode, with a memo table shared across
/// calls. The memo is valid as long as ranks of already registered
/// constants do not change, which registration guarantees.
pub struct Comparator {
    mode: OrderingMode,
    cache: HashMap<(u32, u32), bool>,
}

impl Comparator {
    pub fn new(mode: OrderingMode) -> Comparator {
        Comparator {
            mode,
            cache: HashMap::new(),
        }
    }

    pub fn mode(&self) -> OrderingMode {
        self.mode
    }

    pub fn compare(
        &mut self,
        s: Term,
        t: Term,
        prec: &Precedence,
    ) -> Result<OrderResult, OrderError> {
        match self.mode {
            OrderingMode::Abstracted => compare(s, t, prec),
            OrderingMode::Direct => {
                let mut po = PathOrder {
                    prec,
                    cache: std::mem::take(&mut self.cache),
                };
                let r = po.compare(s, t);
                self.cache = po.cache;
                Ok(r)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Symbol;

    fn k(i: u32, prec: &mut Precedence) -> Term {
        let t = Term::kconst(i);
        prec.register_constant(t);
        t
    }

    fn plus(a: Term, b: Term) -> Term {
        Term::app(Symbol::theory("+", 2), vec![a, b])
    }

    fn times(a: Term, b: Term) -> Term {
        Term::app(Symbol::theory("*", 2), vec![a, b])
    }

    #[test]
    fn compare_x_basics() {
        let mut prec = Precedence::new();
        let k1 = k(1, &mut prec);
        let k2 = k(2, &mut prec);
        let one = Term::int(1);
        let t = plus(k1, one);
        assert_eq!(compare_x(t, t, &prec).unwrap(), OrderResult::Equivalent);
        assert_eq!(compare_x(one, k1, &prec).unwrap(), OrderResult::Less);
        assert_eq!(compare_x(k1, k2, &prec).unwrap(), OrderResult::Less);
        assert_eq!(compare_x(k2, k1, &prec).unwrap(), OrderResult::Greater);
        // a constant dominates any polynomial over smaller constants
        assert_eq!(
            compare_x(k2, plus(times(Term::int(7), k1), one), &prec).unwrap(),
            OrderResult::Greater
        );
        let f = Symbol::uninterpreted("f", 1);
        assert!(compare_x(Term::app(f, vec![k1]), k1, &prec).is_err());
    }

    #[test]
    fn compare_abstracted_rules() {
        let mut prec = Precedence::new();
        let (k1, k2, k3) = (k(1, &mut prec), k(2, &mut prec), k(3, &mut prec));
        let u = Symbol::ac("u");
        let u12 = Term::app(u, vec![k1, k2]);
        let u123 = ac_comb(u, vec![k1, k2, k3]);
        assert_eq!(compare(k3, u12, &prec).unwrap(), OrderResult::Less);
        assert_eq!(compare(u12, u123, &prec).unwrap(), OrderResult::Less);
        assert_eq!(compare(u123, u12, &prec).unwrap(), OrderResult::Greater);
        let f = Symbol::uninterpreted("f", 1);
        let g = Symbol::uninterpreted("g", 1);
        let (fk, gk) = (Term::app(f, vec![k1]), Term::app(g, vec![k1]));
        assert_eq!(compare(fk, gk, &prec).unwrap(), OrderResult::Incomparable);
        assert_eq!(compare(fk, u12, &prec).unwrap(), OrderResult::Incomparable);
        assert_eq!(compare(k1, fk, &prec).unwrap(), OrderResult::Less);
        let u2 = Symbol::ac("v");
        let v12 = Term::app(u2, vec![k1, k2]);
        assert_eq!(compare(v12, u12, &prec).unwrap(), OrderResult::Incomparable);
        let nested = Term::app(f, vec![fk]);
        assert!(compare(nested, k1, &prec).is_err());
    }

    #[test]
    fn multiset_extension() {
        let mut prec = Precedence::new();
        let (k1, k2) = (k(1, &mut prec), k(2, &mut prec));
        assert!(multiset_less(&[], &[k1], &prec));
        assert!(multiset_less(&[k1, k1], &[k2], &prec));
        assert!(!multiset_less(&[k2], &[k1, k1], &prec));
        assert!(!multiset_less(&[k1, k2], &[k1, k2], &prec));
    }

    #[test]
    fn direct_ordering_on_running_example_atoms() {
        let mut prec = Precedence::new();
        let names = ["a", "b", "c1", "c2", "d", "e1", "e2"];
        let cs: Vec<Term> = names
            .iter()
            .map(|n| {
                let t = Term::constant(Symbol::uninterpreted(n, 0));
                prec.register_constant(t);
                t
            })
            .collect();
        let (a, b, c1, d, e1, e2) = (cs[0], cs[1], cs[2], cs[4], cs[5], cs[6]);
        let f = Symbol::uninterpreted("f", 1);
        let u = Symbol::ac("u");
        prec.register_symbol(f);
        prec.register_symbol(u);
        let c1p1 = plus(c1, Term::int(1));
        let cmp = |s, t| AcRpo::compare(s, t, &prec);
        assert_eq!(cmp(d, c1p1), OrderResult::Greater);
        assert_eq!(cmp(e2, b), OrderResult::Greater);
        let ube1 = ac_comb(u, vec![b, e1]);
        let fb = Term::app(f, vec![b]);
        assert_eq!(cmp(ube1, fb), OrderResult::Greater);
        assert_eq!(
            cmp(ac_comb(u, vec![c1p1, c1p1]), Term::int(0)),
            OrderResult::Greater
        );
        assert_eq!(cmp(ac_comb(u, vec![a, c1p1]), a), OrderResult::Greater);
        assert_eq!(
            cmp(ac_comb(u, vec![Term::int(0), a]), a),
            OrderResult::Greater
        );
        assert_eq!(
            cmp(ac_comb(u, vec![e1, e2]), ac_comb(u, vec![d, d])),
            OrderResult::Greater
        );
    }
}
