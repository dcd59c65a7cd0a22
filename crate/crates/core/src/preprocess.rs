//! Term abstraction.
//!
//! Rewrites arbitrary ground equations into abstracted equations, those of
//! one of the shapes
//!
//! 1. `s ≈ t` with `s`, `t` pure (theory symbols, numerals, constants);
//! 2. `s ≈ t` with `s` a free-symbol application or AC comb over pure
//!    arguments and `t` pure;
//! 3. `s ≈ t` with `s`, `t` combs of the same AC symbol over pure aliens.
//!
//! Nested foreign subterms are named by abstraction constants: `f(v)`
//! becomes `k` together with the defining equation `f(v) ≈ k`. Names are
//! keyed on canonical forms, so equal subterms share one constant.

use crate::canon::CanonContext;
use crate::error::{EngineError, TheoryError};
use crate::ordering::{fragment, Fragment};
use crate::term::{ac_comb, apply_substitution, flatten, Head, Term};

pub fn classify(t: Term) -> Fragment {
    fragment(t)
}

/// Whether an equation has one of the abstracted shapes.
pub fn is_abstracted(s: Term, t: Term) -> bool {
    match (fragment(s), fragment(t)) {
        (Fragment::PureXK, Fragment::PureXK) => true,
        (Fragment::PureXK, Fragment::TEmpty | Fragment::TAc(_)) => true,
        (Fragment::TEmpty | Fragment::TAc(_), Fragment::PureXK) => true,
        (Fragment::TAc(u), Fragment::TAc(v)) => u == v,
        _ => false,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AbstractionRun {
    pub input: Vec<(Term, Term)>,
    /// Abstracted equations: defining equations precede their uses.
    pub output: Vec<(Term, Term)>,
    /// Constants introduced by this run with their bindings.
    pub k_bindings: Vec<(Term, Term)>,
}

struct Abstractor<'a> {
    ctx: &'a mut CanonContext,
    defs: Vec<(Term, Term)>,
    fresh: Vec<(Term, Term)>,
}

impl Abstractor<'_> {
    /// Replaces `t` by a pure term, naming foreign layers innermost first.
    fn purify(&mut self, t: Term) -> Result<Term, TheoryError> {
        match t.head() {
            Head::Num(_) | Head::K(_) | Head::Var(_) => Ok(t),
            _ if t.is_constant() => Ok(t),
            Head::Sym(s) if s.is_theory() => {
                let args = t
                    .args()
                    .iter()
                    .map(|a| self.purify(*a))
                    .collect::<Result<Vec<_>, _>>()?;
                self.ctx.global_can(t.with_args(args))
            }
            Head::Sym(_) => {
                let shallow = self.top(t)?;
                if matches!(fragment(shallow), Fragment::PureXK) {
                    return Ok(shallow);
                }
                let (k, new) = self.ctx.abstraction_constant(shallow);
                if new {
                    self.defs.push((shallow, k));
                    self.fresh.push((k, shallow));
                }
                Ok(k)
            }
        }
    }

    /// Keeps the root of a free or AC term and purifies below it.
    fn top(&mut self, t: Term) -> Result<Term, TheoryError> {
        match t.symbol() {
            Some(u) if u.is_ac() => {
                let elems = flatten(t, u)
                    .into_iter()
                    .map(|a| self.purify(a))
                    .collect::<Result<Vec<_>, _>>()?;
                self.ctx.global_can(ac_comb(u, elems))
            }
            Some(s) if !s.is_theory() && t.arity() > 0 => {
                let args = t
                    .args()
                    .iter()
                    .map(|a| self.purify(*a))
                    .collect::<Result<Vec<_>, _>>()?;
                self.ctx.global_can(t.with_args(args))
            }
            _ => self.purify(t),
        }
    }

    fn equation(&mut self, s: Term, t: Term) -> Result<(Term, Term), TheoryError> {
        if is_abstracted(s, t) {
            return Ok((s, t));
        }
        let (s2, t2) = (self.top(s)?, self.top(t)?);
        if is_abstracted(s2, t2) {
            return Ok((s2, t2));
        }
        Ok((self.purify(s2)?, t2))
    }
}

/// Abstracts canonical equations. The context keeps the naming, so later
/// calls (for goals, say) reuse the constants introduced here.
pub fn abstract_equations(
    equations: &[(Term, Term)],
    ctx: &mut CanonContext,
) -> Result<AbstractionRun, TheoryError> {
    let mut ab = Abstractor {
        ctx,
        defs: Vec::new(),
        fresh: Vec::new(),
    };
    let mut output = Vec::new();
    for (s, t) in equations {
        let (s, t) = (ab.ctx.global_can(*s)?, ab.ctx.global_can(*t)?);
        let e = ab.equation(s, t)?;
        output.append(&mut ab.defs);
        output.push(e);
    }
    Ok(AbstractionRun {
        input: equations.to_vec(),
        output,
        k_bindings: ab.fresh,
    })
}

/// Purifies a term completely, returning the pure result and the defining
/// equations for constants it introduced.
pub fn abstract_term(
    t: Term,
    ctx: &mut CanonContext,
) -> Result<(Term, Vec<(Term, Term)>), TheoryError> {
    let mut ab = Abstractor {
        ctx,
        defs: Vec::new(),
        fresh: Vec::new(),
    };
    let c = ab.ctx.global_can(t)?;
    let p = ab.purify(c)?;
    Ok((p, ab.defs))
}

/// Abstracts a term down to one of the abstracted shapes: the root of a
/// free or AC term is kept and only nested foreign subterms are named.
pub fn abstract_shallow(
    t: Term,
    ctx: &mut CanonContext,
) -> Result<(Term, Vec<(Term, Term)>), TheoryError> {
    let mut ab = Abstractor {
        ctx,
        defs: Vec::new(),
        fresh: Vec::new(),
    };
    let c = ab.ctx.global_can(t)?;
    let p = ab.top(c)?;
    Ok((p, ab.defs))
}

/// Replaces abstraction constants by the terms they name, recursively.
pub fn unabstract(t: Term, ctx: &CanonContext) -> Result<Term, EngineError> {
    let mut cur = t;
    loop {
        let ks: Vec<Term> = cur
            .subterms()
            .into_iter()
            .filter(|s| s.is_kconst())
            .collect();
        if ks.is_empty() {
            return Ok(cur);
        }
        let mut subst = std::collections::HashMap::new();
        for k in ks {
            let b = ctx
                .binding_of(k)
                .ok_or_else(|| EngineError::UnboundConstant(k.to_string()))?;
            subst.insert(k, b);
        }
        cur = apply_substitution(cur, &subst);
    }
}
