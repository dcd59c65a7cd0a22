//! Generators for the two benchmark families over a set-union symbol.
//!
//! Both families use an AC symbol `u` (union), a free unary symbol `sing`
//! (singleton), constants `a{p}_{i}` and `b{p}`. Hypothesis `p` reads
//! `u(sing(x_p), a{p}_1, …, a{p}_d) ≈ b{p}`, where `x_p` is a shared
//! constant `e` in the first family and `t{p} - p` in the second, whose
//! hypotheses also chain `t{p} + 1 ≈ t{p+1}`. The goals, one per pair
//! `p < q`, are `u(a{p}_d, …, a{p}_1, b{q}) ≈ u(a{q}_d, …, a{q}_1, b{p})`.

use crate::problem::{Problem, TheoryKind};
use crate::shostak::{add, sub};
use crate::term::{Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchParams {
    /// Number of hypothesis equations over sets.
    pub n: usize,
    /// Number of set constants per hypothesis.
    pub d: usize,
}

impl BenchParams {
    pub fn new(n: usize, d: usize) -> Result<BenchParams, String> {
        if n < 2 || d < 1 {
            return Err(format!("need n >= 2 and d >= 1, got n={n}, d={d}"));
        }
        Ok(BenchParams { n, d })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    C1,
    C2,
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "c1" | "C1" => Ok(Family::C1),
            "c2" | "C2" => Ok(Family::C2),
            _ => Err(format!(
                "unknown benchmark family {s:?} (expected c1 or c2)"
            )),
        }
    }
}

struct Builder {
    problem: Problem,
    union: Symbol,
    sing: Symbol,
}

impl Builder {
    fn new(theory: TheoryKind) -> Builder {
        let union = Symbol::ac("u");
        let sing = Symbol::uninterpreted("sing", 1);
        Builder {
            problem: Problem {
                theory,
                ac_symbols: vec![union],
                functions: vec![sing],
                ..Problem::default()
            },
            union,
            sing,
        }
    }

    fn constant(&mut self, name: &str) -> Term {
        let c = Term::constant(Symbol::uninterpreted(name, 0));
        if !self.problem.constants.contains(&c) {
            self.problem.constants.push(c);
        }
        c
    }

    /// Left-nested union of the given terms, in the order written.
    fn union_of(&self, items: &[Term]) -> Term {
        items[1..]
            .iter()
            .fold(items[0], |acc, x| Term::app(self.union, vec![acc, *x]))
    }

    fn sets(&mut self, p: BenchParams) -> (Vec<Vec<Term>>, Vec<Term>) {
        let a: Vec<Vec<Term>> = (1..=p.n)
            .map(|q| {
                (1..=p.d)
                    .map(|i| self.constant(&format!("a{q}_{i}")))
                    .collect()
            })
            .collect();
        let b = (1..=p.n).map(|q| self.constant(&format!("b{q}"))).collect();
        (a, b)
    }

    fn hypotheses(&mut self, singles: &[Term], a: &[Vec<Term>], b: &[Term]) {
        for (q, s) in singles.iter().enumerate() {
            let mut items = vec![Term::app(self.sing, vec![*s])];
            items.extend_from_slice(&a[q]);
            let lhs = self.union_of(&items);
            self.problem.hypotheses.push((lhs, b[q]));
        }
    }

    fn goals(&mut self, a: &[Vec<Term>], b: &[Term]) {
        let n = b.len();
        for p in 0..n {
            for q in p + 1..n {
                let mut left: Vec<Term> = a[p].iter().rev().copied().collect();
                left.push(b[q]);
                let mut right: Vec<Term> = a[q].iter().rev().copied().collect();
                right.push(b[p]);
                let g = (self.union_of(&left), self.union_of(&right));
                self.problem.goals.push(g);
            }
        }
    }
}

pub fn gen_c1(p: BenchParams) -> Problem {
    let mut b = Builder::new(TheoryKind::Empty);
    let e = b.constant("e");
    let (sa, sb) = b.sets(p);
    b.hypotheses(&vec![e; p.n], &sa, &sb);
    b.goals(&sa, &sb);
    b.problem
}

fn c2_with_step(p: BenchParams, first_step: i64) -> Problem {
    let mut b = Builder::new(TheoryKind::Lia);
    let t: Vec<Term> = (1..=p.n).map(|q| b.constant(&format!("t{q}"))).collect();
    let (sa, sb) = b.sets(p);
    let singles: Vec<Term> = t
        .iter()
        .enumerate()
        .map(|(q, tq)| sub(*tq, Term::int(q as i64 + 1)))
        .collect();
    b.hypotheses(&singles, &sa, &sb);
    for q in 0..p.n - 1 {
        let step = if q == 0 { first_step } else { 1 };
        b.problem
            .hypotheses
            .push((add(t[q], Term::int(step)), t[q + 1]));
    }
    b.goals(&sa, &sb);
    b.problem
}

pub fn gen_c2(p: BenchParams) -> Problem {
    c2_with_step(p, 1)
}

pub fn generate(family: Family, p: BenchParams) -> Problem {
    match family {
        Family::C1 => gen_c1(p),
        Family::C2 => gen_c2(p),
    }
}

/// The first family with `b2` in the first goal replaced by a fresh
/// constant, which makes that goal underivable.
pub fn gen_c1_mutated(p: BenchParams) -> Problem {
    let mut prob = gen_c1(p);
    let fresh = Term::constant(Symbol::uninterpreted("fresh", 0));
    prob.constants.push(fresh);
    let b2 = Term::constant(Symbol::uninterpreted("b2", 0));
    let (l, r) = prob.goals[0];
    prob.goals[0] = (replace(l, b2, fresh), r);
    prob
}

/// The second family with the first chain link broken: `t1 + 2 ≈ t2`.
pub fn gen_c2_mutated(p: BenchParams) -> Problem {
    c2_with_step(p, 2)
}

fn replace(t: Term, from: Term, to: Term) -> Term {
    if t == from {
        return to;
    }
    if t.arity() == 0 {
        return t;
    }
    t.with_args(t.args().iter().map(|a| replace(*a, from, to)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::Verdict;
    use crate::ordering::OrderingMode;
    use crate::problem::{parse_problem, render_problem};
    use crate::prover::{prove, ProveOptions};

    fn verdict(p: &Problem, mode: OrderingMode) -> Verdict {
        prove(
            p,
            &ProveOptions {
                mode,
                ..Default::default()
            },
        )
        .unwrap()
        .verdict
    }

    #[test]
    fn shapes() {
        let p = gen_c1(BenchParams::new(3, 3).unwrap());
        assert_eq!((p.hypotheses.len(), p.goals.len()), (3, 3));
        let p = gen_c2(BenchParams::new(3, 3).unwrap());
        assert_eq!((p.hypotheses.len(), p.goals.len()), (5, 3));
        assert_eq!(gen_c1(BenchParams::new(2, 1).unwrap()).goals.len(), 1);
        assert!(BenchParams::new(1, 3).is_err());
        let text = render_problem(&p);
        assert_eq!(parse_problem(&text).unwrap(), p);
    }

    #[test]
    fn small_instances_decide_as_expected() {
        let small = BenchParams::new(2, 1).unwrap();
        let mid = BenchParams::new(3, 3).unwrap();
        for mode in [OrderingMode::Abstracted, OrderingMode::Direct] {
            for p in [small, mid] {
                assert_eq!(verdict(&gen_c1(p), mode), Verdict::Valid);
                assert_eq!(verdict(&gen_c2(p), mode), Verdict::Valid);
                assert_eq!(verdict(&gen_c1_mutated(p), mode), Verdict::Invalid);
                assert_eq!(verdict(&gen_c2_mutated(p), mode), Verdict::Invalid);
            }
        }
    }
}
