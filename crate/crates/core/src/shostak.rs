//! Shostak theories: a canonizer and a solver over pure terms.
//!
//! Pure terms are built from the theory's symbols, numerals and atoms.
//! Atoms are abstraction variables, abstraction constants or user
//! constants. The theory never looks inside an atom; it asks an
//! [`AtomOracle`] for the term an atom stands for and for the ordering
//! between atoms.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{EngineError, OrderError, TheoryError};
use crate::ordering::OrderResult;
use crate::term::{struct_cmp, Head, Rational, Symbol, Term};

/// What a theory needs to know about atoms.
pub trait AtomOracle {
    /// The term an atom stands for (the inverse of the pure-part mapping).
    fn resolve(&self, atom: Term) -> Term;
    /// Compares the terms two atoms stand for.
    fn compare_atoms(&mut self, a: Term, b: Term) -> Result<OrderResult, OrderError>;
}

/// Atoms that stand for themselves, ordered structurally. Handy for
/// exercising a theory in isolation.
#[derive(Clone, Copy, Debug, Default)]
pub struct StructuralAtoms;

impl AtomOracle for StructuralAtoms {
    fn resolve(&self, atom: Term) -> Term {
        atom
    }

    fn compare_atoms(&mut self, a: Term, b: Term) -> Result<OrderResult, OrderError> {
        Ok(match struct_cmp(a, b) {
            Ordering::Less => OrderResult::Less,
            Ordering::Greater => OrderResult::Greater,
            Ordering::Equal => OrderResult::Equivalent,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Bottom,
    /// Solved pairs `x ↦ t` with `x` an atom not occurring in any `t`.
    Solved(Vec<(Term, Term)>),
}

pub trait ShostakTheory: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;
    /// Whether `sym` belongs to the theory signature.
    fn owns(&self, sym: Symbol) -> bool;
    fn canonize(&self, t: Term, atoms: &mut dyn AtomOracle) -> Result<Term, TheoryError>;
    fn solve(
        &self,
        s: Term,
        t: Term,
        atoms: &mut dyn AtomOracle,
    ) -> Result<SolveResult, EngineError>;
}

/// The theory without function symbols: every pure term is an atom.
#[derive(Clone, Copy, Debug, Default)]
pub struct EmptyTheory;

impl ShostakTheory for EmptyTheory {
    fn name(&self) -> &'static str {
        "empty"
    }

    fn owns(&self, _sym: Symbol) -> bool {
        false
    }

    fn canonize(&self, t: Term, _atoms: &mut dyn AtomOracle) -> Result<Term, TheoryError> {
        Ok(t)
    }

    fn solve(
        &self,
        s: Term,
        t: Term,
        atoms: &mut dyn AtomOracle,
    ) -> Result<SolveResult, EngineError> {
        if s == t {
            return Ok(SolveResult::Solved(Vec::new()));
        }
        match atoms.compare_atoms(s, t)? {
            OrderResult::Greater => Ok(SolveResult::Solved(vec![(s, t)])),
            OrderResult::Less => Ok(SolveResult::Solved(vec![(t, s)])),
            _ => Err(EngineError::Unorientable(
                atoms.resolve(s).to_string(),
                atoms.resolve(t).to_string(),
            )),
        }
    }
}

pub fn plus_symbol() -> Symbol {
    Symbol::theory("+", 2)
}

pub fn minus_symbol() -> Symbol {
    Symbol::theory("-", 2)
}

pub fn neg_symbol() -> Symbol {
    Symbol::theory("-", 1)
}

pub fn times_symbol() -> Symbol {
    Symbol::theory("*", 2)
}

pub fn add(a: Term, b: Term) -> Term {
    Term::app(plus_symbol(), vec![a, b])
}

pub fn sub(a: Term, b: Term) -> Term {
    Term::app(minus_symbol(), vec![a, b])
}

pub fn neg(a: Term) -> Term {
    Term::app(neg_symbol(), vec![a])
}

pub fn mul(a: Term, b: Term) -> Term {
    Term::app(times_symbol(), vec![a, b])
}

/// A linear combination of atoms plus a constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    monomials: HashMap<Term, Rational>,
    constant: Rational,
}

impl Polynomial {
    pub fn constant(c: Rational) -> Polynomial {
        Polynomial {
            monomials: HashMap::new(),
            constant: c,
        }
    }

    pub fn atom(a: Term) -> Polynomial {
        let mut monomials = HashMap::new();
        monomials.insert(a, Rational::one());
        Polynomial {
            monomials,
            constant: Rational::zero(),
        }
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn coefficient(&self, a: Term) -> Rational {
        self.monomials
            .get(&a)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn atoms(&self) -> impl Iterator<Item = Term> + '_ {
        self.monomials.keys().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn add_scaled(&mut self, other: &Polynomial, k: &Rational) {
        for (a, c) in &other.monomials {
            let e = self.monomials.entry(*a).or_insert_with(Rational::zero);
            *e += c * k;
            if e.is_zero() {
                self.monomials.remove(a);
            }
        }
        self.constant += &other.constant * k;
    }

    pub fn scale(&mut self, k: &Rational) {
        if k.is_zero() {
            self.monomials.clear();
            self.constant = Rational::zero();
            return;
        }
        for c in self.monomials.values_mut() {
            *c *= k;
        }
        self.constant *= k;
    }

    /// Reads a pure term. Anything that is neither a numeral nor headed by
    /// an arithmetic symbol is an atom.
    pub fn from_term(t: Term) -> Result<Polynomial, TheoryError> {
        match t.head() {
            Head::Num(n) => return Ok(Polynomial::constant(n.clone())),
            Head::Sym(s) if s.is_theory() => {}
            _ => return Ok(Polynomial::atom(t)),
        }
        let s = t.symbol().unwrap();
        let args = t.args();
        match (s.name(), args.len()) {
            ("+", 2) | ("-", 2) => {
                let mut p = Polynomial::from_term(args[0])?;
                let q = Polynomial::from_term(args[1])?;
                let k = if s.name() == "+" {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                p.add_scaled(&q, &k);
                Ok(p)
            }
            ("-", 1) => {
                let mut p = Polynomial::from_term(args[0])?;
                p.scale(&-Rational::one());
                Ok(p)
            }
            ("*", 2) => {
                let mut p = Polynomial::from_term(args[0])?;
                let mut q = Polynomial::from_term(args[1])?;
                if p.is_constant() {
                    std::mem::swap(&mut p, &mut q);
                }
                if !q.is_constant() {
                    return Err(TheoryError::Nonlinear(t.to_string()));
                }
                p.scale(&q.constant);
                Ok(p)
            }
            _ => Err(TheoryError::UnsupportedSymbol(s.to_string(), "lia")),
        }
    }

    /// Renders the unique term for this polynomial: monomials by
    /// decreasing atom image, then the constant.
    pub fn to_term(&self, atoms: &dyn AtomOracle) -> Term {
        let mut mons: Vec<(Term, Term, &Rational)> = self
            .monomials
            .iter()
            .map(|(a, c)| (atoms.resolve(*a), *a, c))
            .collect();
        mons.sort_by(|x, y| struct_cmp(y.0, x.0));
        let mut parts: Vec<Term> = mons
            .into_iter()
            .map(|(_, a, c)| {
                if c.is_one() {
                    a
                } else {
                    mul(Term::num(c.clone()), a)
                }
            })
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(Term::num(self.constant.clone()));
        }
        let mut acc = parts.pop().unwrap();
        while let Some(p) = parts.pop() {
            acc = add(p, acc);
        }
        acc
    }
}

/// Linear arithmetic over the rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct LinearArith;

impl LinearArith {
    fn pivot(p: &Polynomial, atoms: &mut dyn AtomOracle) -> Result<Term, EngineError> {
        let mut cands: Vec<Term> = p.atoms().collect();
        cands.sort_by(|a, b| struct_cmp(atoms.resolve(*a), atoms.resolve(*b)));
        let mut best = cands[0];
        for &c in &cands[1..] {
            let better = match atoms.compare_atoms(c, best)? {
                OrderResult::Greater => true,
                OrderResult::Less => false,
                _ => {
                    let (x, y) = (p.coefficient(c).abs(), p.coefficient(best).abs());
                    x > y
                        || (x == y
                            && struct_cmp(atoms.resolve(c), atoms.resolve(best))
                                == Ordering::Greater)
                }
            };
            if better {
                best = c;
            }
        }
        Ok(best)
    }
}

impl ShostakTheory for LinearArith {
    fn name(&self) -> &'static str {
        "lia"
    }

    fn owns(&self, sym: Symbol) -> bool {
        sym.is_theory()
    }

    fn canonize(&self, t: Term, atoms: &mut dyn AtomOracle) -> Result<Term, TheoryError> {
        Ok(Polynomial::from_term(t)?.to_term(atoms))
    }

    fn solve(
        &self,
        s: Term,
        t: Term,
        atoms: &mut dyn AtomOracle,
    ) -> Result<SolveResult, EngineError> {
        let mut p = Polynomial::from_term(s)?;
        p.add_scaled(&Polynomial::from_term(t)?, &-Rational::one());
        if p.is_constant() {
            return Ok(if p.constant.is_zero() {
                SolveResult::Solved(Vec::new())
            } else {
                SolveResult::Bottom
            });
        }
        let x = Self::pivot(&p, atoms)?;
        let c = p.coefficient(x);
        let mut rest = p;
        rest.monomials.remove(&x);
        rest.scale(&(-Rational::one() / c));
        Ok(SolveResult::Solved(vec![(x, rest.to_term(atoms))]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn c(n: &str) -> Term {
        Term::constant(Symbol::uninterpreted(n, 0))
    }

    fn canon(t: Term) -> Term {
        LinearArith.canonize(t, &mut StructuralAtoms).unwrap()
    }

    #[test]
    fn la_canonize_examples() {
        let a = c("a");
        assert_eq!(canon(add(a, mul(Term::int(2), a))), mul(Term::int(3), a));
        let x = Term::var(0);
        assert_eq!(canon(sub(x, x)), Term::int(0));
        let t = add(Term::int(1), add(mul(Term::int(2), x), Term::int(3)));
        assert_eq!(canon(t), add(mul(Term::int(2), x), Term::int(4)));
        assert_eq!(canon(neg(neg(a))), a);
        assert_eq!(canon(sub(Term::int(0), a)), mul(Term::int(-1), a));
        let half = Term::num(Rational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(canon(mul(a, half)), mul(half, a));
    }

    #[test]
    fn la_canonize_is_idempotent() {
        let (a, b) = (c("a"), c("b"));
        let t = canon(sub(add(mul(Term::int(3), b), Term::int(5)), add(a, b)));
        assert_eq!(canon(t), t);
        assert_eq!(t.to_string(), "2*b + -a + 5");
    }

    #[test]
    fn la_rejects_nonlinear_products() {
        let (a, b) = (c("a"), c("b"));
        assert!(matches!(
            LinearArith.canonize(mul(a, b), &mut StructuralAtoms),
            Err(TheoryError::Nonlinear(_))
        ));
    }

    #[test]
    fn la_solve_examples() {
        let (x, y) = (Term::var(1), Term::var(0));
        let r = LinearArith
            .solve(add(x, y), Term::int(0), &mut StructuralAtoms)
            .unwrap();
        assert_eq!(r, SolveResult::Solved(vec![(x, mul(Term::int(-1), y))]));
        let r = LinearArith
            .solve(x, add(x, Term::int(1)), &mut StructuralAtoms)
            .unwrap();
        assert_eq!(r, SolveResult::Bottom);
        let r = LinearArith
            .solve(mul(Term::int(2), x), Term::int(6), &mut StructuralAtoms)
            .unwrap();
        assert_eq!(r, SolveResult::Solved(vec![(x, Term::int(3))]));
        let r = LinearArith
            .solve(add(x, Term::int(0)), x, &mut StructuralAtoms)
            .unwrap();
        assert_eq!(r, SolveResult::Solved(vec![]));
    }

    #[test]
    fn empty_solve_orients_both_ways() {
        let (x, y) = (Term::var(1), Term::var(0));
        let expected = SolveResult::Solved(vec![(x, y)]);
        assert_eq!(
            EmptyTheory.solve(x, y, &mut StructuralAtoms).unwrap(),
            expected
        );
        assert_eq!(
            EmptyTheory.solve(y, x, &mut StructuralAtoms).unwrap(),
            expected
        );
        assert_eq!(
            EmptyTheory.solve(x, x, &mut StructuralAtoms).unwrap(),
            SolveResult::Solved(vec![])
        );
        assert_eq!(EmptyTheory.canonize(x, &mut StructuralAtoms).unwrap(), x);
    }
}
