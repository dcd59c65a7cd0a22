//! Random small problems for differential testing against the oracle.
//!
//! Roughly half of the problems use linear arithmetic. Goals are either
//! random pairs of terms or a hypothesis instantiated under a random
//! context with its right side shuffled, so valid and invalid goals both
//! occur often.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::problem::{Problem, TheoryKind};
use crate::shostak::{add, mul, sub};
use crate::term::{ac_comb, flatten, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub max_constants: usize,
    pub max_ac_symbols: usize,
    pub max_hypotheses: usize,
    pub max_depth: usize,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_constants: 6,
            max_ac_symbols: 2,
            max_hypotheses: 4,
            max_depth: 3,
        }
    }
}

struct Gen<'a, R> {
    rng: &'a mut R,
    lia: bool,
    constants: Vec<Term>,
    ac: Vec<Symbol>,
    free: Vec<Symbol>,
}

impl<R: Rng> Gen<'_, R> {
    fn leaf(&mut self) -> Term {
        if self.lia && self.rng.gen_bool(0.2) {
            Term::int(self.rng.gen_range(0..3))
        } else {
            *self.constants.choose(self.rng).unwrap()
        }
    }

    fn term(&mut self, depth: usize) -> Term {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return self.leaf();
        }
        let ops = self.ac.len() + self.free.len() + if self.lia { 3 } else { 0 };
        let pick = self.rng.gen_range(0..ops);
        if pick < self.ac.len() {
            let (x, y) = (self.term(depth - 1), self.term(depth - 1));
            return Term::app(self.ac[pick], vec![x, y]);
        }
        let pick = pick - self.ac.len();
        if pick < self.free.len() {
            let f = self.free[pick];
            let args = (0..f.arity()).map(|_| self.term(depth - 1)).collect();
            return Term::app(f, args);
        }
        let (x, y) = (self.term(depth - 1), self.term(depth - 1));
        match pick - self.free.len() {
            0 => add(x, y),
            1 => sub(x, y),
            _ => mul(Term::int(self.rng.gen_range(2..4)), x),
        }
    }

    /// The same term up to associativity and commutativity.
    fn shuffle(&mut self, t: Term) -> Term {
        match t.symbol() {
            Some(u) if u.is_ac() => {
                let mut xs: Vec<Term> =
                    flatten(t, u).into_iter().map(|a| self.shuffle(a)).collect();
                xs.shuffle(self.rng);
                if self.rng.gen_bool(0.5) {
                    ac_comb(u, xs)
                } else {
                    xs[1..]
                        .iter()
                        .fold(xs[0], |acc, x| Term::app(u, vec![acc, *x]))
                }
            }
            _ if t.arity() > 0 => {
                let args = t.args().iter().map(|a| self.shuffle(*a)).collect();
                t.with_args(args)
            }
            _ => t,
        }
    }

    /// Plugs `t` into a random context of the given depth.
    fn context(&mut self, t: Term, depth: usize, other: &mut Term) -> Term {
        if depth == 0 || self.rng.gen_bool(0.4) || (self.ac.is_empty() && self.free.is_empty()) {
            return t;
        }
        let inner = self.context(t, depth - 1, other);
        let extra = self.term(1);
        let wrap = |s: Term, sym: Symbol| {
            if sym.arity() == 1 {
                Term::app(sym, vec![s])
            } else {
                Term::app(sym, vec![s, extra])
            }
        };
        let choices: Vec<Symbol> = self.ac.iter().chain(&self.free).copied().collect();
        let sym = *choices.choose(self.rng).unwrap();
        *other = wrap(*other, sym);
        wrap(inner, sym)
    }
}

pub fn random_problem<R: Rng>(rng: &mut R, params: &RandomParams) -> Problem {
    let lia = rng.gen_bool(0.5);
    let n_const = rng.gen_range(2..=params.max_constants.max(2));
    let constants: Vec<Term> = (0..n_const)
        .map(|i| Term::constant(Symbol::uninterpreted(&format!("c{i}"), 0)))
        .collect();
    let ac: Vec<Symbol> = ["u", "v"]
        .iter()
        .take(rng.gen_range(1..=params.max_ac_symbols.max(1)))
        .map(|n| Symbol::ac(n))
        .collect();
    let free: Vec<Symbol> = [("f", 1), ("g", 2)]
        .iter()
        .take(rng.gen_range(0..=2))
        .map(|(n, a)| Symbol::uninterpreted(n, *a))
        .collect();
    let mut g = Gen {
        rng,
        lia,
        constants,
        ac,
        free,
    };
    let hyp_depth = params.max_depth.saturating_sub(1).max(1);
    let n_hyp = g.rng.gen_range(1..=params.max_hypotheses.max(1));
    let hypotheses: Vec<(Term, Term)> = (0..n_hyp)
        .map(|_| {
            let l = g.term(hyp_depth);
            let r = g.term(hyp_depth);
            (l, r)
        })
        .collect();
    let goal = if g.rng.gen_bool(0.5) {
        let (l, r) = *hypotheses.choose(g.rng).unwrap();
        let mut rhs = g.shuffle(r);
        let lhs = g.context(l, params.max_depth.saturating_sub(1), &mut rhs);
        (lhs, g.shuffle(rhs))
    } else {
        (g.term(params.max_depth), g.term(params.max_depth))
    };
    Problem {
        theory: if lia {
            TheoryKind::Lia
        } else {
            TheoryKind::Empty
        },
        ac_symbols: g.ac,
        functions: g.free,
        constants: g.constants,
        hypotheses,
        goals: vec![goal],
    }
}

/// A random term over the signature of `problem`.
pub fn random_term<R: Rng>(rng: &mut R, problem: &Problem, depth: usize) -> Term {
    gen_for(rng, problem).term(depth)
}

/// A random rearrangement of `t` modulo associativity and commutativity.
pub fn ac_shuffle<R: Rng>(rng: &mut R, t: Term) -> Term {
    gen_for(rng, &Problem::default()).shuffle(t)
}

fn gen_for<'a, R: Rng>(rng: &'a mut R, problem: &Problem) -> Gen<'a, R> {
    Gen {
        rng,
        lia: problem.theory == TheoryKind::Lia,
        constants: problem.constants.clone(),
        ac: problem.ac_symbols.clone(),
        free: problem.functions.clone(),
    }
}
