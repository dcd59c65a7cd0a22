//! Canonical forms for mixed terms and the solver wrapper.
//!
//! [`CanonContext`] owns everything a completion run shares: the α/ρ
//! mapping between foreign subterms and abstraction variables, the
//! abstraction constants and their bindings, the precedence, the ordering
//! and a memo of canonical forms.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{EngineError, OrderError, TheoryError};
use crate::ordering::{Comparator, OrderResult, OrderingMode, Precedence};
use crate::shostak::{AtomOracle, ShostakTheory, SolveResult};
use crate::term::{ac_comb, apply_substitution, flatten_into, Head, Symbol, Term};

/// Outcome of [`CanonContext::wrapped_solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solved {
    Bottom,
    /// Rules `lhs → rhs` with `rhs ≺ lhs`.
    Rules(Vec<(Term, Term)>),
}

#[derive(Debug)]
pub struct CanonContext {
    theory: Arc<dyn ShostakTheory>,
    alpha: HashMap<Term, Term>,
    rho: HashMap<Term, Term>,
    next_var: u32,
    pi: HashMap<Term, Term>,
    k_bindings: Vec<(Term, Term)>,
    prec: Precedence,
    comparator: Comparator,
    memo: HashMap<Term, Term>,
}

impl std::fmt::Debug for Comparator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Comparator({:?})", self.mode())
    }
}

/// Builds the right comb for `u` over the aliens of already canonical
/// arguments.
fn comb_of(u: Symbol, args: &[Term]) -> Term {
    let mut elems = Vec::new();
    for a in args {
        flatten_into(*a, u, &mut elems);
    }
    ac_comb(u, elems)
}

/// AC canonizer: right-leaning combs over sorted aliens, recursively.
pub fn can_ac(t: Term) -> Term {
    if t.arity() == 0 {
        return t;
    }
    let args: Vec<Term> = t.args().iter().map(|a| can_ac(*a)).collect();
    match t.symbol() {
        Some(u) if u.is_ac() => comb_of(u, &args),
        _ => t.with_args(args),
    }
}

impl CanonContext {
    pub fn new(theory: Arc<dyn ShostakTheory>, mode: OrderingMode) -> CanonContext {
        CanonContext {
            theory,
            alpha: HashMap::new(),
            rho: HashMap::new(),
            next_var: 0,
            pi: HashMap::new(),
            k_bindings: Vec::new(),
            prec: Precedence::new(),
            comparator: Comparator::new(mode),
            memo: HashMap::new(),
        }
    }

    pub fn theory(&self) -> &Arc<dyn ShostakTheory> {
        &self.theory
    }

    pub fn mode(&self) -> OrderingMode {
        self.comparator.mode()
    }

    pub fn precedence(&self) -> &Precedence {
        &self.prec
    }

    /// Ranks a user constant above all constants declared so far.
    pub fn declare_constant(&mut self, c: Term) {
        self.prec.register_constant(c);
    }

    pub fn declare_symbol(&mut self, s: Symbol) {
        self.prec.register_symbol(s);
    }

    pub fn compare(&mut self, s: Term, t: Term) -> Result<OrderResult, OrderError> {
        self.comparator.compare(s, t, &self.prec)
    }

    /// The abstraction constant for a canonical term, created on first use.
    /// Returns the constant and whether it is new.
    pub fn abstraction_constant(&mut self, canonical: Term) -> (Term, bool) {
        if let Some(k) = self.pi.get(&canonical) {
            return (*k, false);
        }
        let k = Term::kconst(self.k_bindings.len() as u32 + 1);
        self.pi.insert(canonical, k);
        self.k_bindings.push((k, canonical));
        self.prec.register_constant(k);
        (k, true)
    }

    pub fn k_bindings(&self) -> &[(Term, Term)] {
        &self.k_bindings
    }

    pub fn binding_of(&self, k: Term) -> Option<Term> {
        match k.head() {
            Head::K(i) if *i >= 1 => self.k_bindings.get(*i as usize - 1).map(|(_, t)| *t),
            _ => None,
        }
    }

    /// α: the abstraction variable for a foreign term.
    pub fn alpha(&mut self, t: Term) -> Term {
        if let Some(x) = self.alpha.get(&t) {
            return *x;
        }
        let x = Term::var(self.next_var);
        self.next_var += 1;
        self.alpha.insert(t, x);
        self.rho.insert(x, t);
        x
    }

    /// ρ: the term an abstraction variable stands for.
    pub fn rho(&self, x: Term) -> Option<Term> {
        self.rho.get(&x).copied()
    }

    fn owns(&self, t: Term) -> bool {
        matches!(t.head(), Head::Sym(s) if self.theory.owns(*s))
    }

    /// Replaces every maximal foreign subterm by its abstraction variable.
    pub fn pure_part(&mut self, t: Term) -> Term {
        match t.head() {
            Head::Num(_) | Head::Var(_) => t,
            _ if self.owns(t) => {
                let args = t.args().iter().map(|a| self.pure_part(*a)).collect();
                t.with_args(args)
            }
            _ => self.alpha(t),
        }
    }

    fn unpure(&self, t: Term) -> Term {
        apply_substitution(t, &self.rho)
    }

    /// The global canonizer combining the theory canonizer with AC
    /// canonization.
    pub fn global_can(&mut self, t: Term) -> Result<Term, TheoryError> {
        if t.arity() == 0 {
            return Ok(t);
        }
        if let Some(r) = self.memo.get(&t) {
            return Ok(*r);
        }
        let args = t
            .args()
            .iter()
            .map(|a| self.global_can(*a))
            .collect::<Result<Vec<_>, _>>()?;
        let sym = t.symbol().expect("non-constant term has a symbol");
        let r = if sym.is_ac() {
            comb_of(sym, &args)
        } else if sym.is_theory() {
            if !self.theory.owns(sym) {
                return Err(TheoryError::UnsupportedSymbol(
                    sym.to_string(),
                    self.theory.name(),
                ));
            }
            let p = self.pure_part(t.with_args(args));
            let theory = Arc::clone(&self.theory);
            let q = theory.canonize(p, self)?;
            self.unpure(q)
        } else {
            t.with_args(args)
        };
        self.memo.insert(t, r);
        self.memo.insert(r, r);
        Ok(r)
    }

    /// Solves `s = t` in the theory and maps the solution back through ρ.
    pub fn wrapped_solve(&mut self, s: Term, t: Term) -> Result<Solved, EngineError> {
        let (ps, pt) = (self.pure_part(s), self.pure_part(t));
        let theory = Arc::clone(&self.theory);
        match theory.solve(ps, pt, self)? {
            SolveResult::Bottom => Ok(Solved::Bottom),
            SolveResult::Solved(pairs) => {
                let mut rules = Vec::with_capacity(pairs.len());
                for (x, e) in pairs {
                    let lhs = self.unpure(x);
                    let rhs = self.global_can(self.unpure(e))?;
                    if lhs == rhs {
                        continue;
                    }
                    if self.compare(rhs, lhs)? != OrderResult::Less {
                        return Err(EngineError::Unorientable(lhs.to_string(), rhs.to_string()));
                    }
                    rules.push((lhs, rhs));
                }
                Ok(Solved::Rules(rules))
            }
        }
    }
}

impl AtomOracle for CanonContext {
    fn resolve(&self, atom: Term) -> Term {
        self.rho(atom).unwrap_or(atom)
    }

    fn compare_atoms(&mut self, a: Term, b: Term) -> Result<OrderResult, OrderError> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        self.compare(a, b)
    }
}
