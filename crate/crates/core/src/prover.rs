//! End-to-end decision procedure for problems.

use std::time::{Duration, Instant};

use crate::canon::CanonContext;
use crate::completion::{complete, decide_with, Completed, Verdict, DEFAULT_BUDGET};
use crate::error::EngineError;
use crate::ordering::OrderingMode;
use crate::preprocess::{abstract_equations, abstract_shallow, AbstractionRun};
use crate::problem::{Problem, TheoryKind};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProveOptions {
    pub mode: OrderingMode,
    pub budget: u64,
    /// Overrides the theory named in the problem.
    pub theory: Option<TheoryKind>,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions {
            mode: OrderingMode::Abstracted,
            budget: DEFAULT_BUDGET,
            theory: None,
        }
    }
}

#[derive(Debug)]
pub struct ProofReport {
    pub verdict: Verdict,
    /// One verdict per goal, in file order.
    pub goal_verdicts: Vec<Verdict>,
    pub completed: Completed,
    /// Present in abstracted mode.
    pub abstraction: Option<AbstractionRun>,
    /// The equations handed to completion.
    pub equations: Vec<(Term, Term)>,
    pub context: CanonContext,
    pub elapsed: Duration,
}

/// A context with the problem's theory and precedence: constants by
/// declaration order, then free symbols, then AC symbols.
pub fn context_for(
    problem: &Problem,
    mode: OrderingMode,
    theory: Option<TheoryKind>,
) -> CanonContext {
    let kind = theory.unwrap_or(problem.theory);
    let mut ctx = CanonContext::new(kind.instance(), mode);
    for c in &problem.constants {
        ctx.declare_constant(*c);
    }
    for f in problem.functions.iter().chain(&problem.ac_symbols) {
        ctx.declare_symbol(*f);
    }
    ctx
}

pub fn prove(problem: &Problem, opts: &ProveOptions) -> Result<ProofReport, EngineError> {
    let start = Instant::now();
    let mut ctx = context_for(problem, opts.mode, opts.theory);
    let (equations, goals, abstraction) = match opts.mode {
        OrderingMode::Abstracted => {
            let run = abstract_equations(&problem.hypotheses, &mut ctx)?;
            let mut eqs = run.output.clone();
            let mut goals = Vec::with_capacity(problem.goals.len());
            for (s, t) in &problem.goals {
                let (ps, ds) = abstract_shallow(*s, &mut ctx)?;
                let (pt, dt) = abstract_shallow(*t, &mut ctx)?;
                eqs.extend(ds);
                eqs.extend(dt);
                goals.push((ps, pt));
            }
            (eqs, goals, Some(run))
        }
        OrderingMode::Direct => (problem.hypotheses.clone(), problem.goals.clone(), None),
    };
    let completed = complete(&equations, &mut ctx, opts.budget)?;
    let goal_verdicts = goals
        .iter()
        .map(|g| decide_with(&completed, *g, &mut ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let verdict = if completed.is_inconsistent() {
        Verdict::ValidInconsistent
    } else if goal_verdicts.iter().all(|v| v.is_valid()) {
        Verdict::Valid
    } else {
        Verdict::Invalid
    };
    Ok(ProofReport {
        verdict,
        goal_verdicts,
        completed,
        abstraction,
        equations,
        context: ctx,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;

    const RUNNING: &str = "
        (theory lia)
        (ac u)
        (op f 1)
        (const a b c1 c2 d e1 e2)
        (assert (= (u a (- c2 c1)) a))
        (assert (= (- (u e1 e2) (f b)) (u d d)))
        (assert (= d (+ c1 1)))
        (assert (= e2 b))
        (assert (= (u b e1) (f e2)))
        (assert (= c2 (+ (* 2 c1) 1)))
        (goal (= a (u a 0)))
    ";

    #[test]
    fn running_example_in_both_modes() {
        let p = parse_problem(RUNNING).unwrap();
        for mode in [OrderingMode::Abstracted, OrderingMode::Direct] {
            let opts = ProveOptions {
                mode,
                ..Default::default()
            };
            let r = prove(&p, &opts).unwrap();
            assert_eq!(r.verdict, Verdict::Valid, "{mode:?}");
        }
        let r = prove(
            &p,
            &ProveOptions {
                mode: OrderingMode::Direct,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.completed.rules.len(), 7);
    }

    #[test]
    fn invalid_goal() {
        let p = parse_problem("(ac u)(const a b c)(assert (= (u a b) c))(goal (= a b))").unwrap();
        for mode in [OrderingMode::Abstracted, OrderingMode::Direct] {
            let r = prove(
                &p,
                &ProveOptions {
                    mode,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(r.verdict, Verdict::Invalid);
        }
    }

    #[test]
    fn nested_free_terms() {
        let text = "(op f 1)(op g 1)(const a b c)(assert (= (f (g a)) b))(assert (= (g a) c))(goal (= (f c) b))";
        let p = parse_problem(text).unwrap();
        for mode in [OrderingMode::Abstracted, OrderingMode::Direct] {
            let r = prove(
                &p,
                &ProveOptions {
                    mode,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(r.verdict, Verdict::Valid, "{mode:?}");
        }
    }
}
