//! The completion engine.
//!
//! A run keeps a worklist of equations and a set of rules. Each equation is
//! simplified to normal form, then discarded (Trivial), turned into a
//! contradiction (Bottom) or solved into rules (Orient). Every new rule
//! composes the right-hand sides of the other rules, collapses the rules
//! whose left-hand side it reduces, and deduces head critical pairs.
//!
//! Equations released by Collapse are handled before the equations that
//! were already waiting. Critical pairs join the back of the worklist:
//! processing them depth first lets large pairs breed larger ones before
//! the small equations that would interreduce them get a turn.

use std::collections::VecDeque;
use std::fmt;

use crate::canon::{CanonContext, Solved};
use crate::error::EngineError;
use crate::ordering::OrderResult;
use crate::rewrite::{can_rewrite_step, normal_form_traced, Rule, RuleSet, DEFAULT_STEP_BUDGET};
use crate::term::{ac_comb, flatten, flatten_into, Multiset, Term};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Inference {
    Trivial,
    Bottom,
    Orient,
    Simplify,
    Compose,
    Collapse,
    Deduce,
}

impl Inference {
    pub fn short_name(self) -> &'static str {
        match self {
            Inference::Trivial => "Tri",
            Inference::Bottom => "Bot",
            Inference::Orient => "Ori",
            Inference::Simplify => "Sim",
            Inference::Compose => "Com",
            Inference::Collapse => "Col",
            Inference::Deduce => "Ded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Rule(Rule),
    Equation(Term, Term),
    Bottom,
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Rule(r) => write!(f, "{r}"),
            Item::Equation(s, t) => write!(f, "{s} ≈ {t}"),
            Item::Bottom => f.write_str("⊥"),
        }
    }
}

/// Where an equation came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// An input equation, as given.
    Input(Term, Term),
    /// The trace step that produced it.
    Step(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    /// 1-based step number; rule labels are the steps that created them.
    pub step: usize,
    pub inference: Inference,
    pub item: Item,
    /// The equation acted on (Trivial, Bottom, Orient, Simplify).
    pub source: Option<Source>,
    /// Rules involved, by label.
    pub rules: Vec<usize>,
    /// Set when the entry only served an equation that ended up trivial.
    pub discharged: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    pub fn get(&self, step: usize) -> Option<&TraceEntry> {
        self.entries.get(step.checked_sub(1)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Running,
    Done,
    Inconsistent,
}

#[derive(Clone, Debug)]
struct Pending {
    lhs: Term,
    rhs: Term,
    source: Source,
    /// Trace steps that exist only because of this equation.
    chain: Vec<usize>,
    deduced: bool,
}

/// Head critical pair of two rules whose left-hand sides are combs of the
/// same AC symbol sharing some aliens: `u(b, r2) ≈ u(b', r1)` where
/// `l1 = u(a, b)` and `l2 = u(a, b')` with `a` maximal. Absent when the
/// heads differ or `a`, `b` or `b'` is empty.
pub fn head_cp(
    r1: &Rule,
    r2: &Rule,
    ctx: &mut CanonContext,
) -> Result<Option<(Term, Term)>, EngineError> {
    let u = match (r1.lhs.symbol(), r2.lhs.symbol()) {
        (Some(u), Some(v)) if u == v && u.is_ac() => u,
        _ => return Ok(None),
    };
    let l1 = Multiset::from_vec(flatten(r1.lhs, u));
    let l2 = Multiset::from_vec(flatten(r2.lhs, u));
    let common = l1.intersection(&l2);
    let (b1, b2) = (l1.difference(&common), l2.difference(&common));
    if common.is_empty() || b1.is_empty() || b2.is_empty() {
        return Ok(None);
    }
    let side = |b: Multiset, r: Term| {
        let mut elems = b.into_vec();
        flatten_into(r, u, &mut elems);
        ac_comb(u, elems)
    };
    let s = ctx.global_can(side(b1, r2.rhs))?;
    let t = ctx.global_can(side(b2, r1.rhs))?;
    Ok(Some((s, t)))
}

/// Result of a completion run.
#[derive(Debug)]
pub struct Completed {
    pub status: Status,
    pub rules: RuleSet,
    pub trace: Trace,
    pub inferences: u64,
}

impl Completed {
    pub fn is_inconsistent(&self) -> bool {
        self.status == Status::Inconsistent
    }

    /// Labels of the surviving rules, in creation order.
    pub fn rule_labels(&self) -> Vec<usize> {
        let mut v = self.rules.labels();
        v.sort_unstable();
        v
    }
}

pub struct Completion<'c> {
    ctx: &'c mut CanonContext,
    rules: RuleSet,
    queue: VecDeque<Pending>,
    trace: Trace,
    status: Status,
    inferences: u64,
    budget: u64,
}

impl<'c> Completion<'c> {
    pub fn new(ctx: &'c mut CanonContext, budget: u64) -> Completion<'c> {
        Completion {
            ctx,
            rules: RuleSet::new(),
            queue: VecDeque::new(),
            trace: Trace::default(),
            status: Status::Running,
            inferences: 0,
            budget,
        }
    }

    pub fn context(&mut self) -> &mut CanonContext {
        self.ctx
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// Queues an input equation; both sides are canonized first.
    pub fn add_equation(&mut self, s: Term, t: Term) -> Result<(), EngineError> {
        let (cs, ct) = (self.ctx.global_can(s)?, self.ctx.global_can(t)?);
        self.queue.push_back(Pending {
            lhs: cs,
            rhs: ct,
            source: Source::Input(s, t),
            chain: Vec::new(),
            deduced: false,
        });
        Ok(())
    }

    fn record(
        &mut self,
        inference: Inference,
        item: Item,
        source: Option<Source>,
        rules: Vec<usize>,
    ) -> Result<usize, EngineError> {
        self.inferences += 1;
        if self.inferences > self.budget {
            return Err(EngineError::BudgetExceeded(self.budget));
        }
        let step = self.trace.entries.len() + 1;
        self.trace.entries.push(TraceEntry {
            step,
            inference,
            item,
            source,
            rules,
            discharged: false,
        });
        Ok(step)
    }

    fn normalize(&mut self, t: Term) -> Result<(Term, Vec<usize>), EngineError> {
        normal_form_traced(t, &self.rules, self.ctx, DEFAULT_STEP_BUDGET)
    }

    /// Processes queued equations until the queue is empty or the
    /// hypotheses turn out inconsistent.
    pub fn run(&mut self) -> Result<Status, EngineError> {
        while self.status == Status::Running {
            let Some(e) = self.queue.pop_front() else {
                self.status = Status::Done;
                break;
            };
            let mut fresh = Vec::new();
            self.process_equation(e, &mut fresh)?;
            let (pairs, collapsed): (Vec<_>, Vec<_>) = fresh.into_iter().partition(|p| p.deduced);
            for p in collapsed.into_iter().rev() {
                self.queue.push_front(p);
            }
            self.queue.extend(pairs);
        }
        Ok(self.status)
    }

    fn process_equation(
        &mut self,
        e: Pending,
        fresh: &mut Vec<Pending>,
    ) -> Result<(), EngineError> {
        let Pending {
            lhs,
            rhs,
            mut source,
            mut chain,
            ..
        } = e;
        let (s, mut used) = self.normalize(lhs)?;
        let (t, used_t) = self.normalize(rhs)?;
        for l in used_t {
            if !used.contains(&l) {
                used.push(l);
            }
        }
        if s != lhs || t != rhs {
            used.sort_unstable();
            let step = self.record(
                Inference::Simplify,
                Item::Equation(s, t),
                Some(source),
                used,
            )?;
            chain.push(step);
            source = Source::Step(step);
        }
        if s == t {
            let step = self.record(
                Inference::Trivial,
                Item::Equation(s, t),
                Some(source),
                Vec::new(),
            )?;
            chain.push(step);
            for c in chain {
                self.trace.entries[c - 1].discharged = true;
            }
            return Ok(());
        }
        match self.ctx.wrapped_solve(s, t)? {
            Solved::Bottom => {
                self.record(Inference::Bottom, Item::Bottom, Some(source), Vec::new())?;
                self.status = Status::Inconsistent;
            }
            Solved::Rules(rs) if rs.is_empty() => {
                let step = self.record(
                    Inference::Trivial,
                    Item::Equation(s, t),
                    Some(source),
                    Vec::new(),
                )?;
                chain.push(step);
                for c in chain {
                    self.trace.entries[c - 1].discharged = true;
                }
            }
            Solved::Rules(rs) => {
                for (l, r) in rs {
                    let rule = Rule::new(l, r);
                    let label = self.record(
                        Inference::Orient,
                        Item::Rule(rule),
                        Some(source.clone()),
                        Vec::new(),
                    )?;
                    let slot = self.rules.insert(label, rule);
                    self.compose()?;
                    self.collapse(slot, fresh)?;
                    self.deduce(slot, fresh)?;
                }
            }
        }
        Ok(())
    }

    fn compose(&mut self) -> Result<(), EngineError> {
        let snapshot: Vec<_> = self.rules.iter().collect();
        for (slot, label, rule) in snapshot {
            let (d, mut used) = self.normalize(rule.rhs)?;
            if d != rule.rhs {
                let new_rule = Rule::new(rule.lhs, d);
                used.sort_unstable();
                let mut refs = vec![label];
                refs.extend(used);
                let step = self.record(Inference::Compose, Item::Rule(new_rule), None, refs)?;
                self.rules.set_rhs(slot, d);
                self.rules.relabel(slot, step);
            }
        }
        Ok(())
    }

    fn collapse(&mut self, new_slot: usize, fresh: &mut Vec<Pending>) -> Result<(), EngineError> {
        let (g_label, g_rule) = self.rules.get(new_slot).expect("live rule");
        let mut single = RuleSet::new();
        single.insert(g_label, g_rule);
        let snapshot: Vec<_> = self
            .rules
            .iter()
            .filter(|(s, _, _)| *s != new_slot)
            .collect();
        for (slot, label, rule) in snapshot {
            let Some((l2, _, _)) = can_rewrite_step(rule.lhs, &single, self.ctx)? else {
                continue;
            };
            let guard = match self.ctx.compare(g_rule.lhs, rule.lhs)? {
                OrderResult::Less => true,
                OrderResult::Equivalent => {
                    self.ctx.compare(g_rule.rhs, rule.rhs)? == OrderResult::Less
                }
                _ => false,
            };
            if !guard {
                continue;
            }
            let step = self.record(
                Inference::Collapse,
                Item::Equation(l2, rule.rhs),
                None,
                vec![label, g_label],
            )?;
            self.rules.remove(slot);
            fresh.push(Pending {
                lhs: l2,
                rhs: rule.rhs,
                source: Source::Step(step),
                chain: vec![step],
                deduced: false,
            });
        }
        Ok(())
    }

    fn deduce(&mut self, new_slot: usize, fresh: &mut Vec<Pending>) -> Result<(), EngineError> {
        let Some((label, rule)) = self.rules.get(new_slot) else {
            return Ok(());
        };
        let snapshot: Vec<_> = self
            .rules
            .iter()
            .filter(|(s, _, _)| *s != new_slot)
            .collect();
        for (_, other_label, other) in snapshot {
            if let Some((s, t)) = head_cp(&rule, &other, self.ctx)? {
                let mut refs = vec![other_label, label];
                refs.sort_unstable();
                let step = self.record(Inference::Deduce, Item::Equation(s, t), None, refs)?;
                fresh.push(Pending {
                    lhs: s,
                    rhs: t,
                    source: Source::Step(step),
                    chain: vec![step],
                    deduced: true,
                });
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Completed {
        Completed {
            status: self.status,
            rules: self.rules,
            trace: self.trace,
            inferences: self.inferences,
        }
    }
}

/// Completes a set of equations.
pub fn complete(
    equations: &[(Term, Term)],
    ctx: &mut CanonContext,
    budget: u64,
) -> Result<Completed, EngineError> {
    let mut run = Completion::new(ctx, budget);
    for (s, t) in equations {
        run.add_equation(*s, *t)?;
    }
    run.run()?;
    Ok(run.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// Valid because the hypotheses are inconsistent.
    ValidInconsistent,
    Invalid,
}

impl Verdict {
    pub fn is_valid(self) -> bool {
        self != Verdict::Invalid
    }
}

/// Decides a goal against a completed system by comparing normal forms.
pub fn decide_with(
    completed: &Completed,
    goal: (Term, Term),
    ctx: &mut CanonContext,
) -> Result<Verdict, EngineError> {
    if completed.is_inconsistent() {
        return Ok(Verdict::ValidInconsistent);
    }
    let (s, t) = (ctx.global_can(goal.0)?, ctx.global_can(goal.1)?);
    let (ns, _) = normal_form_traced(s, &completed.rules, ctx, DEFAULT_STEP_BUDGET)?;
    let (nt, _) = normal_form_traced(t, &completed.rules, ctx, DEFAULT_STEP_BUDGET)?;
    Ok(if ns == nt {
        Verdict::Valid
    } else {
        Verdict::Invalid
    })
}

/// Completes the hypotheses and decides one goal.
pub fn decide(
    equations: &[(Term, Term)],
    goal: (Term, Term),
    ctx: &mut CanonContext,
    budget: u64,
) -> Result<Verdict, EngineError> {
    let completed = complete(equations, ctx, budget)?;
    decide_with(&completed, goal, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::OrderingMode;
    use crate::shostak::{add, mul, sub, EmptyTheory, LinearArith};
    use crate::term::Symbol;
    use std::sync::Arc;

    fn consts(ctx: &mut CanonContext, names: &[&str]) -> Vec<Term> {
        names
            .iter()
            .map(|n| {
                let t = Term::constant(Symbol::uninterpreted(n, 0));
                ctx.declare_constant(t);
                t
            })
            .collect()
    }

    #[test]
    fn head_critical_pair() {
        let mut ctx = CanonContext::new(Arc::new(EmptyTheory), OrderingMode::Direct);
        let v = consts(&mut ctx, &["a", "b", "c", "s", "t"]);
        let u = Symbol::ac("u");
        let r1 = Rule::new(ac_comb(u, vec![v[0], v[1]]), v[3]);
        let r2 = Rule::new(ac_comb(u, vec![v[0], v[2]]), v[4]);
        let (s, t) = head_cp(&r1, &r2, &mut ctx).unwrap().unwrap();
        assert_eq!(
            (s, t),
            (ac_comb(u, vec![v[1], v[4]]), ac_comb(u, vec![v[2], v[3]]))
        );
        let r3 = Rule::new(ac_comb(u, vec![v[3], v[4]]), v[0]);
        assert!(head_cp(&r1, &r3, &mut ctx).unwrap().is_none());
        let r4 = Rule::new(ac_comb(u, vec![v[0], v[1], v[2]]), v[0]);
        assert!(head_cp(&r1, &r4, &mut ctx).unwrap().is_none());
    }

    fn ground_ac_equations(ctx: &mut CanonContext) -> (Vec<(Term, Term)>, Vec<Term>) {
        let a = consts(ctx, &["a1", "a2", "a3", "a4", "a5", "a6"]);
        let u = Symbol::ac("u");
        ctx.declare_symbol(u);
        let app = |x: Term, y: Term| Term::app(u, vec![x, y]);
        let eqs = vec![
            (app(a[0], a[3]), a[0]),
            (app(a[2], a[5]), app(a[4], a[4])),
            (a[4], a[3]),
            (a[5], a[1]),
        ];
        (eqs, a)
    }

    #[test]
    fn ground_ac_example_reaches_five_rules() {
        for mode in [OrderingMode::Abstracted, OrderingMode::Direct] {
            let mut ctx = CanonContext::new(Arc::new(EmptyTheory), mode);
            let (eqs, a) = ground_ac_equations(&mut ctx);
            let done = complete(&eqs, &mut ctx, DEFAULT_BUDGET).unwrap();
            assert_eq!(done.status, Status::Done);
            assert_eq!(done.rules.len(), 5, "{mode:?}: {:?}", done.rules.rules());
            let shown: Vec<_> = done
                .trace
                .entries
                .iter()
                .filter(|e| !e.discharged)
                .collect();
            let names: Vec<_> = shown.iter().map(|e| e.inference.short_name()).collect();
            assert_eq!(
                names,
                ["Ori", "Ori", "Ori", "Com", "Ori", "Col", "Ori", "Ded", "Sim", "Ori"]
            );
            let u = Symbol::ac("u");
            let goal = (
                a[0],
                Term::app(u, vec![a[0], Term::app(u, vec![a[5], a[2]])]),
            );
            assert_eq!(decide_with(&done, goal, &mut ctx).unwrap(), Verdict::Valid);
            assert_eq!(
                decide_with(&done, (a[0], a[1]), &mut ctx).unwrap(),
                Verdict::Invalid
            );
        }
    }

    #[test]
    fn running_example_in_direct_mode() {
        let mut ctx = CanonContext::new(Arc::new(LinearArith), OrderingMode::Direct);
        let v = consts(&mut ctx, &["a", "b", "c1", "c2", "d", "e1", "e2"]);
        let (a, b, c1, c2, d, e1, e2) = (v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
        let f = Symbol::uninterpreted("f", 1);
        let u = Symbol::ac("u");
        ctx.declare_symbol(f);
        ctx.declare_symbol(u);
        let app = |x: Term, y: Term| Term::app(u, vec![x, y]);
        let fb = |x: Term| Term::app(f, vec![x]);
        let eqs = vec![
            (app(a, sub(c2, c1)), a),
            (sub(app(e1, e2), fb(b)), app(d, d)),
            (d, add(c1, Term::int(1))),
            (e2, b),
            (app(b, e1), fb(e2)),
            (c2, add(mul(Term::int(2), c1), Term::int(1))),
        ];
        let done = complete(&eqs, &mut ctx, DEFAULT_BUDGET).unwrap();
        assert_eq!(done.rule_labels(), vec![3, 5, 9, 10, 11, 13, 16]);
        assert_eq!(
            done.trace.entries.iter().filter(|e| !e.discharged).count(),
            16
        );
        assert_eq!(
            decide_with(&done, (a, app(a, Term::int(0))), &mut ctx).unwrap(),
            Verdict::Valid
        );
    }

    #[test]
    fn inconsistent_hypotheses() {
        let mut ctx = CanonContext::new(Arc::new(LinearArith), OrderingMode::Direct);
        let v = consts(&mut ctx, &["a", "b"]);
        let eqs = vec![(v[0], add(v[0], Term::int(1)))];
        let verdict = decide(&eqs, (v[0], v[1]), &mut ctx, DEFAULT_BUDGET).unwrap();
        assert_eq!(verdict, Verdict::ValidInconsistent);
        assert_eq!(
            complete(&[], &mut ctx, DEFAULT_BUDGET).unwrap().rules.len(),
            0
        );
    }
}
