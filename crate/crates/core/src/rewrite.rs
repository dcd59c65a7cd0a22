//! Ground rewriting modulo AC and canonized rewriting.
//!
//! All terms handled here are canonical, so matching modulo AC is syntactic
//! equality plus extension matching on AC combs: a rule `u(L) → r` applies
//! to `u(S)` whenever `L` is a strict sub-multiset of `S`, giving
//! `u(r, S − L)`.

use std::collections::HashMap;

use rand::Rng;

use crate::canon::CanonContext;
use crate::error::{EngineError, TermError};
use crate::term::{
    ac_comb, aliens, flatten, flatten_into, replace_at, subterm_at, Multiset, Position, Symbol,
    Term,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Rule {
        Rule { lhs, rhs }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} → {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchOutcome {
    NoMatch,
    Plain,
    /// Extension match; the remainder is non-empty.
    Extended(Multiset),
}

/// Matches `l` against the subterm of `s` at `p`.
pub fn ac_match_at(s: Term, p: &Position, l: Term) -> Result<MatchOutcome, TermError> {
    let v = subterm_at(s, p)?;
    Ok(match_term(v, l))
}

fn match_term(v: Term, l: Term) -> MatchOutcome {
    if v == l {
        return MatchOutcome::Plain;
    }
    match l.symbol() {
        Some(u) if u.is_ac() && v.is_headed_by(u) => {
            let (lv, vv) = (
                Multiset::from_vec(flatten(l, u)),
                Multiset::from_vec(flatten(v, u)),
            );
            if lv.is_strict_submultiset_of(&vv) {
                MatchOutcome::Extended(vv.difference(&lv))
            } else {
                MatchOutcome::NoMatch
            }
        }
        _ => MatchOutcome::NoMatch,
    }
}

fn extended_reduct(u: Symbol, rhs: Term, rem: &Multiset) -> Term {
    let mut elems = Vec::new();
    flatten_into(rhs, u, &mut elems);
    elems.extend_from_slice(rem.as_slice());
    ac_comb(u, elems)
}

/// One plain AC rewrite step at `p` (no canonization of the result).
pub fn rewrite_ac(s: Term, rule: &Rule, p: &Position) -> Result<Option<Term>, TermError> {
    let r = match ac_match_at(s, p, rule.lhs)? {
        MatchOutcome::NoMatch => return Ok(None),
        MatchOutcome::Plain => rule.rhs,
        MatchOutcome::Extended(rem) => extended_reduct(rule.lhs.symbol().unwrap(), rule.rhs, &rem),
    };
    replace_at(s, p, r).map(Some)
}

#[derive(Clone, Debug)]
struct Entry {
    label: usize,
    rule: Rule,
    aliens: Option<(Symbol, Multiset)>,
}

/// Rules in insertion order, indexed by left-hand side and by AC head.
#[derive(Clone, Debug, Default)]
pub struct RuleSet {
    entries: Vec<Option<Entry>>,
    by_lhs: HashMap<Term, usize>,
    by_ac_head: HashMap<Symbol, Vec<usize>>,
    live: usize,
}

/// Handle to a rule inside a [`RuleSet`].
pub type Slot = usize;

impl RuleSet {
    pub fn new() -> RuleSet {
        RuleSet::default()
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Adds a rule under a caller-chosen label (a trace step number).
    pub fn insert(&mut self, label: usize, rule: Rule) -> Slot {
        let slot = self.entries.len();
        let aliens = match rule.lhs.symbol() {
            Some(u) if u.is_ac() => {
                self.by_ac_head.entry(u).or_default().push(slot);
                Some((u, Multiset::from_vec(flatten(rule.lhs, u))))
            }
            _ => None,
        };
        self.by_lhs.entry(rule.lhs).or_insert(slot);
        self.entries.push(Some(Entry {
            label,
            rule,
            aliens,
        }));
        self.live += 1;
        slot
    }

    pub fn remove(&mut self, slot: Slot) -> Option<(usize, Rule)> {
        let e = self.entries.get_mut(slot)?.take()?;
        self.live -= 1;
        if self.by_lhs.get(&e.rule.lhs) == Some(&slot) {
            self.by_lhs.remove(&e.rule.lhs);
            let other = self.entries.iter().enumerate().find_map(|(i, x)| match x {
                Some(x) if x.rule.lhs == e.rule.lhs => Some(i),
                _ => None,
            });
            if let Some(i) = other {
                self.by_lhs.insert(e.rule.lhs, i);
            }
        }
        if let Some((u, _)) = &e.aliens {
            if let Some(v) = self.by_ac_head.get_mut(u) {
                v.retain(|s| *s != slot);
            }
        }
        Some((e.label, e.rule))
    }

    pub fn get(&self, slot: Slot) -> Option<(usize, Rule)> {
        self.entries.get(slot)?.as_ref().map(|e| (e.label, e.rule))
    }

    /// Replaces the right-hand side of a live rule, keeping its slot.
    pub fn set_rhs(&mut self, slot: Slot, rhs: Term) {
        if let Some(Some(e)) = self.entries.get_mut(slot) {
            e.rule.rhs = rhs;
        }
    }

    pub fn relabel(&mut self, slot: Slot, label: usize) {
        if let Some(Some(e)) = self.entries.get_mut(slot) {
            e.label = label;
        }
    }

    /// Live rules in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (Slot, usize, Rule)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.as_ref().map(|e| (i, e.label, e.rule)))
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.iter().map(|(_, _, r)| r).collect()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.iter().map(|(_, l, _)| l).collect()
    }

    /// The first rule (in insertion order) rewriting `v` at its root, with
    /// the reduct.
    pub fn match_root(&self, v: Term) -> Option<(Slot, Term)> {
        let plain = self.by_lhs.get(&v).copied();
        if let Some(u) = v.symbol().filter(|u| u.is_ac()) {
            if let Some(slots) = self.by_ac_head.get(&u) {
                let mut va: Option<Multiset> = None;
                for &slot in slots {
                    if plain.is_some_and(|p| p < slot) {
                        break;
                    }
                    let e = self.entries[slot].as_ref().unwrap();
                    let (_, la) = e.aliens.as_ref().unwrap();
                    let va = va.get_or_insert_with(|| Multiset::from_vec(flatten(v, u)));
                    if la.is_strict_submultiset_of(va) {
                        return Some((slot, extended_reduct(u, e.rule.rhs, &va.difference(la))));
                    }
                }
            }
        }
        plain.map(|p| (p, self.entries[p].as_ref().unwrap().rule.rhs))
    }

    /// Every rule matching `v` at its root, with the reducts.
    pub fn all_root_matches(&self, v: Term) -> Vec<(Slot, Term)> {
        let mut out = Vec::new();
        for (slot, _, rule) in self.iter() {
            match match_term(v, rule.lhs) {
                MatchOutcome::NoMatch => {}
                MatchOutcome::Plain => out.push((slot, rule.rhs)),
                MatchOutcome::Extended(rem) => out.push((
                    slot,
                    extended_reduct(rule.lhs.symbol().unwrap(), rule.rhs, &rem),
                )),
            }
        }
        out
    }
}

/// Positions of the rewritable subterms of `t` in innermost-leftmost order.
/// Inside an AC comb only the aliens are visited; the comb's inner spine
/// is covered by extension matching at its root.
pub fn redex_positions(t: Term) -> Vec<Position> {
    fn go(t: Term, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        match t.symbol() {
            Some(u) if u.is_ac() => {
                let depth = path.len();
                let mut cur = t;
                while cur.is_headed_by(u) {
                    path.push(0);
                    go(cur.args()[0], path, out);
                    path.pop();
                    path.push(1);
                    cur = cur.args()[1];
                }
                go(cur, path, out);
                path.truncate(depth);
            }
            _ => {
                for (i, a) in t.args().iter().enumerate() {
                    path.push(i);
                    go(*a, path, out);
                    path.pop();
                }
            }
        }
        out.push(Position(path.clone()));
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// One canonized rewrite step: the first redex in innermost-leftmost
/// order, rules tried in insertion order, followed by global
/// canonization.
pub fn can_rewrite_step(
    s: Term,
    rules: &RuleSet,
    ctx: &mut CanonContext,
) -> Result<Option<(Term, Slot, Position)>, EngineError> {
    if rules.is_empty() {
        return Ok(None);
    }
    for p in redex_positions(s) {
        let v = subterm_at(s, &p).expect("position from traversal");
        if let Some((slot, r)) = rules.match_root(v) {
            let t = replace_at(s, &p, r).expect("position from traversal");
            return Ok(Some((ctx.global_can(t)?, slot, p)));
        }
    }
    Ok(None)
}

/// Default cap on rewrite steps for one normalization.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// Normal form under canonized rewriting together with the labels of the
/// rules used, in order of first use.
pub fn normal_form_traced(
    s: Term,
    rules: &RuleSet,
    ctx: &mut CanonContext,
    budget: u64,
) -> Result<(Term, Vec<usize>), EngineError> {
    let mut used = Vec::new();
    let mut steps = 0u64;
    let mut memo = HashMap::new();
    let t = nf_bottom_up(s, rules, ctx, &mut memo, &mut used, &mut steps, budget)?;
    Ok((t, used))
}

pub fn normal_form(s: Term, rules: &RuleSet, ctx: &mut CanonContext) -> Result<Term, EngineError> {
    normal_form_traced(s, rules, ctx, DEFAULT_STEP_BUDGET).map(|(t, _)| t)
}

fn nf_bottom_up(
    s: Term,
    rules: &RuleSet,
    ctx: &mut CanonContext,
    memo: &mut HashMap<Term, Term>,
    used: &mut Vec<usize>,
    steps: &mut u64,
    budget: u64,
) -> Result<Term, EngineError> {
    if rules.is_empty() {
        return Ok(s);
    }
    if let Some(t) = memo.get(&s) {
        return Ok(*t);
    }
    let mut cur = s;
    loop {
        let rebuilt = match cur.symbol() {
            Some(u) if u.is_ac() => {
                let mut elems = Vec::new();
                for a in flatten(cur, u) {
                    let n = nf_bottom_up(a, rules, ctx, memo, used, steps, budget)?;
                    flatten_into(n, u, &mut elems);
                }
                ac_comb(u, elems)
            }
            _ if cur.arity() > 0 => {
                let args = cur
                    .args()
                    .iter()
                    .map(|a| nf_bottom_up(*a, rules, ctx, memo, used, steps, budget))
                    .collect::<Result<Vec<_>, _>>()?;
                cur.with_args(args)
            }
            _ => cur,
        };
        let rebuilt = ctx.global_can(rebuilt)?;
        match rules.match_root(rebuilt) {
            None => {
                memo.insert(s, rebuilt);
                return Ok(rebuilt);
            }
            Some((slot, r)) => {
                *steps += 1;
                if *steps > budget {
                    return Err(EngineError::RewriteBudget(budget, s.to_string()));
                }
                let label = rules.get(slot).unwrap().0;
                if !used.contains(&label) {
                    used.push(label);
                }
                cur = ctx.global_can(r)?;
            }
        }
    }
}

/// Normalizes by picking a uniformly random redex and matching rule at
/// every step. Used to witness confluence.
pub fn normal_form_random<R: Rng>(
    s: Term,
    rules: &RuleSet,
    ctx: &mut CanonContext,
    rng: &mut R,
    budget: u64,
) -> Result<Term, EngineError> {
    let mut cur = s;
    for _ in 0..budget {
        let mut options = Vec::new();
        for p in redex_positions(cur) {
            let v = subterm_at(cur, &p).expect("position from traversal");
            for (_, r) in rules.all_root_matches(v) {
                options.push((p.clone(), r));
            }
        }
        if options.is_empty() {
            return Ok(cur);
        }
        let (p, r) = &options[rng.gen_range(0..options.len())];
        cur = ctx.global_can(replace_at(cur, p, *r).expect("position from traversal"))?;
    }
    Err(EngineError::RewriteBudget(budget, s.to_string()))
}

/// The `u`-aliens of `t` as a multiset; convenience for callers that know
/// `u` is AC.
pub fn ac_aliens(t: Term, u: Symbol) -> Multiset {
    aliens(t, u).expect("AC symbol")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::OrderingMode;
    use crate::shostak::{add, mul, LinearArith};
    use std::sync::Arc;

    fn c(n: &str) -> Term {
        Term::constant(Symbol::uninterpreted(n, 0))
    }

    #[test]
    fn matching_cases() {
        let u = Symbol::ac("u");
        let f = Symbol::uninterpreted("f", 2);
        let (a, b, cc, d) = (c("a"), c("b"), c("c"), c("d"));
        let l = ac_comb(u, vec![a, b, cc]);
        let s = Term::app(f, vec![ac_comb(u, vec![cc, b, a]), d]);
        assert_eq!(
            ac_match_at(s, &Position(vec![0]), l).unwrap(),
            MatchOutcome::Plain
        );
        let s2 = ac_comb(u, vec![a, b, cc, d]);
        assert_eq!(
            ac_match_at(s2, &Position::root(), l).unwrap(),
            MatchOutcome::Extended(Multiset::from_vec(vec![d]))
        );
        let g = Symbol::uninterpreted("g", 1);
        let fa = Term::app(g, vec![a]);
        let h = Symbol::uninterpreted("h", 1);
        assert_eq!(
            ac_match_at(Term::app(h, vec![a]), &Position::root(), fa).unwrap(),
            MatchOutcome::NoMatch
        );
        let t = c("t");
        let rule = Rule::new(l, t);
        assert_eq!(
            rewrite_ac(s2, &rule, &Position::root()).unwrap(),
            Some(ac_comb(u, vec![t, d]))
        );
        assert_eq!(
            rewrite_ac(s, &rule, &Position(vec![0])).unwrap(),
            Some(Term::app(f, vec![t, d]))
        );
        assert_eq!(rewrite_ac(s, &rule, &Position(vec![1])).unwrap(), None);
    }

    #[test]
    fn canonized_step_merges_arithmetic() {
        let u = Symbol::ac("u");
        let f = Symbol::uninterpreted("f", 1);
        let (a, b) = (c("a"), c("b"));
        let mut ctx = CanonContext::new(Arc::new(LinearArith), OrderingMode::Direct);
        ctx.declare_constant(a);
        ctx.declare_constant(b);
        let mut rules = RuleSet::new();
        let uab = ctx.global_can(Term::app(u, vec![a, b])).unwrap();
        rules.insert(1, Rule::new(uab, a));
        let s = ctx
            .global_can(Term::app(
                f,
                vec![add(a, mul(Term::int(2), Term::app(u, vec![b, a])))],
            ))
            .unwrap();
        let (t, slot, _) = can_rewrite_step(s, &rules, &mut ctx).unwrap().unwrap();
        assert_eq!(t, Term::app(f, vec![mul(Term::int(3), a)]));
        assert_eq!(slot, 0);
        assert!(can_rewrite_step(t, &rules, &mut ctx).unwrap().is_none());
        assert_eq!(normal_form(s, &rules, &mut ctx).unwrap(), t);
        assert_eq!(normal_form(s, &RuleSet::new(), &mut ctx).unwrap(), s);
    }

    #[test]
    fn rule_set_bookkeeping() {
        let (a, b, cc) = (c("a"), c("b"), c("c"));
        let mut rs = RuleSet::new();
        let s1 = rs.insert(1, Rule::new(b, a));
        let s2 = rs.insert(2, Rule::new(cc, a));
        assert_eq!(rs.len(), 2);
        assert_eq!(rs.match_root(cc), Some((s2, a)));
        rs.remove(s1);
        assert_eq!(rs.match_root(b), None);
        assert_eq!(rs.labels(), vec![2]);
    }

    #[test]
    fn innermost_positions_skip_comb_spine() {
        let u = Symbol::ac("u");
        let f = Symbol::uninterpreted("f", 1);
        let (a, b) = (c("a"), c("b"));
        let t = ac_comb(u, vec![a, b, Term::app(f, vec![a])]);
        let ps: Vec<String> = redex_positions(t).iter().map(|p| p.to_string()).collect();
        assert_eq!(ps, vec!["0", "1.0", "1.1.0", "1.1", "Λ"]);
    }
}
