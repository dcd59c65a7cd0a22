//! Bounded-saturation oracle for ground word problems.
//!
//! An independent, brute-force check used to validate the completion
//! engine. It closes a finite universe of terms under
//!
//! * congruence for free symbols and AC nodes (hash-consing on classes);
//! * representation swapping: a class can be written as a `u`-multiset in
//!   several ways (each of its `u`-nodes, and itself when it holds an atom),
//!   and inside an AC node any occurrence of one may be swapped for another.
//!   This covers flattening and extension (`u(M1) ∈ c`, `M1 ⊂ M` gives
//!   `u(M) = u(M − M1, c)`);
//! * overlap: two AC nodes sharing aliens spawn the node over their union;
//! * linear arithmetic: Gaussian elimination over class variables merges
//!   classes with equal normal forms and detects `0 = 1`.
//!
//! AC node elements are always atom classes, so nodes are flat. Nodes are
//! bounded by their number of aliens and the universe by a node cap. A
//! goal is `Derivable` when both sides end in one class; otherwise the
//! answer is `NotWithinBound`, with `truncated` telling whether the node
//! cap or round limit cut saturation short.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::problem::{Problem, TheoryKind};
use crate::term::{flatten, Head, Rational, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Derivable,
    NotWithinBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    /// Largest AC node, in aliens. `None` picks the largest input node
    /// plus one.
    pub max_aliens: Option<usize>,
    pub max_nodes: usize,
    pub max_rounds: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds {
            max_aliens: None,
            max_nodes: 4000,
            max_rounds: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub goals: Vec<OracleVerdict>,
    pub inconsistent: bool,
    pub truncated: bool,
}

impl OracleReport {
    /// Conjunction over all goals.
    pub fn verdict(&self) -> OracleVerdict {
        if self.inconsistent || self.goals.iter().all(|g| *g == OracleVerdict::Derivable) {
            OracleVerdict::Derivable
        } else {
            OracleVerdict::NotWithinBound
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Const(Symbol),
    Num(Rational),
    App(Symbol, Vec<usize>),
    Ac(Symbol, Vec<usize>),
}

struct Graph {
    keys: Vec<Key>,
    parent: Vec<usize>,
    table: HashMap<Key, usize>,
    arith: bool,
    max_aliens: usize,
    max_nodes: usize,
    truncated: bool,
    inconsistent: bool,
}

impl Graph {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn canon_key(&mut self, k: &Key) -> Key {
        match k {
            Key::App(f, xs) => Key::App(*f, xs.iter().map(|x| self.find(*x)).collect()),
            Key::Ac(u, xs) => {
                let mut v: Vec<usize> = xs.iter().map(|x| self.find(*x)).collect();
                v.sort_unstable();
                Key::Ac(*u, v)
            }
            other => other.clone(),
        }
    }

    /// Adds a node (or finds an existing congruent one). `None` when the
    /// node cap is reached.
    fn add(&mut self, k: Key) -> Option<usize> {
        let k = self.canon_key(&k);
        if let Some(n) = self.table.get(&k) {
            return Some(self.find(*n));
        }
        if self.keys.len() >= self.max_nodes {
            self.truncated = true;
            return None;
        }
        let id = self.keys.len();
        self.keys.push(k.clone());
        self.parent.push(id);
        self.table.insert(k, id);
        Some(id)
    }

    fn add_term(&mut self, t: Term) -> Option<usize> {
        match t.head() {
            Head::Num(q) => self.add(Key::Num(q.clone())),
            Head::Sym(s) if s.is_ac() => {
                let aliens = flatten(t, *s);
                let mut xs = Vec::with_capacity(aliens.len());
                for a in aliens {
                    xs.push(self.add_term(a)?);
                }
                self.add(Key::Ac(*s, xs))
            }
            Head::Sym(s) if t.arity() == 0 => self.add(Key::Const(*s)),
            Head::Sym(s) => {
                let mut xs = Vec::with_capacity(t.arity());
                for a in t.args() {
                    xs.push(self.add_term(*a)?);
                }
                self.add(Key::App(*s, xs))
            }
            Head::K(_) | Head::Var(_) => {
                panic!("oracle input must not contain internal constants: {t}")
            }
        }
    }

    /// Re-canonicalizes every key and merges congruent nodes until stable.
    fn rebuild(&mut self) -> bool {
        let mut changed = false;
        loop {
            let mut merged = false;
            self.table.clear();
            for i in 0..self.keys.len() {
                let k = self.canon_key(&self.keys[i].clone());
                self.keys[i] = k.clone();
                match self.table.get(&k) {
                    Some(j) => {
                        let j = *j;
                        merged |= self.union(i, j);
                    }
                    None => {
                        self.table.insert(k, i);
                    }
                }
            }
            if !merged {
                return changed;
            }
            changed = true;
        }
    }

    fn ac_nodes(&mut self) -> Vec<(usize, Symbol, Vec<usize>)> {
        let mut out = Vec::new();
        for i in 0..self.keys.len() {
            if let Key::Ac(u, xs) = &self.keys[i] {
                let (u, xs) = (*u, xs.clone());
                out.push((self.find(i), u, xs));
            }
        }
        out.sort_by(|a, b| (a.0, a.1.id(), &a.2).cmp(&(b.0, b.1.id(), &b.2)));
        out.dedup();
        out
    }

    fn add_ac_into(&mut self, u: Symbol, elems: Vec<usize>, class: usize) -> bool {
        if elems.len() > self.max_aliens {
            return false;
        }
        let n = if elems.len() == 1 {
            elems[0]
        } else {
            match self.add(Key::Ac(u, elems)) {
                Some(n) => n,
                None => return false,
            }
        };
        self.union(n, class)
    }

    fn ac_round(&mut self) -> bool {
        let nodes = self.ac_nodes();
        let mut changed = false;
        // every way of writing a class as a u-multiset: its u-nodes, plus
        // the class itself when it also holds an atom
        let mut reps: HashMap<(usize, u32), Vec<Vec<usize>>> = HashMap::new();
        let mut syms: Vec<Symbol> = nodes.iter().map(|n| n.1).collect();
        syms.sort_by_key(|u| u.id());
        syms.dedup();
        for i in 0..self.keys.len() {
            let c = self.find(i);
            for u in &syms {
                if !matches!(&self.keys[i], Key::Ac(v, _) if v == u) {
                    let e = reps.entry((c, u.id())).or_default();
                    if !e.contains(&vec![c]) {
                        e.push(vec![c]);
                    }
                }
            }
        }
        for (c, u, xs) in &nodes {
            let e = reps.entry((*c, u.id())).or_default();
            if !e.contains(xs) {
                e.push(xs.clone());
            }
        }
        let swap = |m: &[usize], pattern: &[usize], with: &[usize]| {
            let mut e = minus(m, pattern);
            e.extend_from_slice(with);
            e.sort_unstable();
            e
        };
        for (d, u, m) in &nodes {
            for (i, x) in m.iter().enumerate() {
                if i > 0 && m[i - 1] == *x {
                    continue;
                }
                let alts = reps.get(&(*x, u.id())).cloned().unwrap_or_default();
                for r in alts.iter().filter(|r| r.len() > 1) {
                    changed |= self.add_ac_into(*u, swap(m, &[*x], r), *d);
                }
            }
            for (c, v, m1) in &nodes {
                if u != v || m1.len() >= m.len() || !minus(m1, m).is_empty() {
                    continue;
                }
                let alts = reps.get(&(*c, u.id())).cloned().unwrap_or_default();
                for r in alts.iter().filter(|r| *r != m1) {
                    changed |= self.add_ac_into(*u, swap(m, m1, r), *d);
                }
            }
        }
        for (ci, (_, u1, m1)) in nodes.iter().enumerate() {
            for (_, u2, m2) in nodes.iter().skip(ci + 1) {
                if u1 != u2 {
                    continue;
                }
                let common = intersect(m1, m2);
                if common.is_empty() || common.len() == m1.len() || common.len() == m2.len() {
                    continue;
                }
                let mut all = m1.clone();
                all.extend(minus(m2, &common));
                all.sort_unstable();
                if all.len() > self.max_aliens {
                    continue;
                }
                let before = self.keys.len();
                self.add(Key::Ac(*u1, all));
                changed |= self.keys.len() > before;
            }
        }
        changed
    }

    /// Linear forms `Σ c_x·x + k = 0` over class representatives, one per
    /// arithmetic node.
    fn arith_rows(&mut self) -> Vec<(BTreeMap<usize, Rational>, Rational)> {
        let mut rows = Vec::new();
        let mut constant_of: HashMap<usize, Rational> = HashMap::new();
        for i in 0..self.keys.len() {
            if let Key::Num(q) = &self.keys[i] {
                let q = q.clone();
                let c = self.find(i);
                constant_of.insert(c, q);
            }
        }
        for i in 0..self.keys.len() {
            let c = self.find(i);
            let mut row = BTreeMap::new();
            let mut k = Rational::zero();
            let put = |row: &mut BTreeMap<usize, Rational>, x: usize, q: Rational| {
                let e = row.entry(x).or_insert_with(Rational::zero);
                *e += q;
            };
            match self.keys[i].clone() {
                Key::Num(q) => {
                    put(&mut row, c, Rational::one());
                    k = -q;
                }
                Key::App(f, xs) if f.is_theory() => {
                    let xs: Vec<usize> = xs.iter().map(|x| self.find(*x)).collect();
                    put(&mut row, c, Rational::one());
                    let m1 = -Rational::one();
                    match (f.name(), xs.as_slice()) {
                        ("+", [a, b]) => {
                            put(&mut row, *a, m1.clone());
                            put(&mut row, *b, m1);
                        }
                        ("-", [a, b]) => {
                            put(&mut row, *a, m1);
                            put(&mut row, *b, Rational::one());
                        }
                        ("-", [a]) => put(&mut row, *a, Rational::one()),
                        ("*", [a, b]) => match (constant_of.get(a), constant_of.get(b)) {
                            (Some(q), _) => put(&mut row, *b, -q.clone()),
                            (_, Some(q)) => put(&mut row, *a, -q.clone()),
                            _ => continue,
                        },
                        _ => continue,
                    }
                }
                _ => continue,
            }
            row.retain(|_, q| !q.is_zero());
            rows.push((row, k));
        }
        rows
    }

    fn la_round(&mut self) -> bool {
        let rows = self.arith_rows();
        // pivot variable -> row solved for it: x = Σ c·y + k
        let mut solved: BTreeMap<usize, (BTreeMap<usize, Rational>, Rational)> = BTreeMap::new();
        for (row, k) in rows {
            let (mut row, mut k) = reduce(&solved, row, k);
            let Some((&p, _)) = row.iter().next_back() else {
                if !k.is_zero() {
                    self.inconsistent = true;
                    return false;
                }
                continue;
            };
            let cp = row.remove(&p).unwrap();
            let scale = -Rational::one() / cp;
            for q in row.values_mut() {
                *q *= &scale;
            }
            k *= &scale;
            for (r, rk) in solved.values_mut() {
                if let Some(c) = r.remove(&p) {
                    for (y, q) in &row {
                        let e = r.entry(*y).or_insert_with(Rational::zero);
                        *e += &c * q;
                    }
                    r.retain(|_, q| !q.is_zero());
                    *rk += &c * &k;
                }
            }
            solved.insert(p, (row, k));
        }
        let mut groups: HashMap<(Vec<(usize, Rational)>, Rational), usize> = HashMap::new();
        let mut changed = false;
        let vars: Vec<usize> = {
            let mut v: Vec<usize> = Vec::new();
            for (p, (r, _)) in &solved {
                v.push(*p);
                v.extend(r.keys().copied());
            }
            v.sort_unstable();
            v.dedup();
            v
        };
        for x in vars {
            let nf = match solved.get(&x) {
                Some((r, k)) => (r.iter().map(|(a, b)| (*a, b.clone())).collect(), k.clone()),
                None => (vec![(x, Rational::one())], Rational::zero()),
            };
            match groups.get(&nf) {
                Some(y) => changed |= self.union(x, *y),
                None => {
                    groups.insert(nf, x);
                }
            }
        }
        changed
    }
}

fn reduce(
    solved: &BTreeMap<usize, (BTreeMap<usize, Rational>, Rational)>,
    row: BTreeMap<usize, Rational>,
    mut k: Rational,
) -> (BTreeMap<usize, Rational>, Rational) {
    let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
    for (x, c) in row {
        match solved.get(&x) {
            Some((r, rk)) => {
                for (y, q) in r {
                    let e = out.entry(*y).or_insert_with(Rational::zero);
                    *e += &c * q;
                }
                k += &c * rk;
            }
            None => {
                let e = out.entry(x).or_insert_with(Rational::zero);
                *e += c;
            }
        }
    }
    out.retain(|_, q| !q.is_zero());
    (out, k)
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn minus(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() {
        if j < b.len() && a[i] == b[j] {
            i += 1;
            j += 1;
        } else if j < b.len() && b[j] < a[i] {
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
        }
    }
    out
}

fn max_aliens(t: Term) -> usize {
    let here = match t.symbol() {
        Some(u) if u.is_ac() => flatten(t, u).len(),
        _ => 0,
    };
    t.args()
        .iter()
        .map(|a| max_aliens(*a))
        .max()
        .unwrap_or(0)
        .max(here)
}

/// Saturates the hypotheses and goals of a problem and reports, per goal,
/// whether its sides were shown equal.
pub fn oracle_check(problem: &Problem, bounds: &OracleBounds) -> OracleReport {
    oracle_check_equations(&problem.hypotheses, &problem.goals, problem.theory, bounds)
}

pub fn oracle_check_equations(
    hypotheses: &[(Term, Term)],
    goals: &[(Term, Term)],
    theory: TheoryKind,
    bounds: &OracleBounds,
) -> OracleReport {
    let widest = hypotheses
        .iter()
        .chain(goals)
        .map(|(s, t)| max_aliens(*s).max(max_aliens(*t)))
        .max()
        .unwrap_or(0);
    let mut g = Graph {
        keys: Vec::new(),
        parent: Vec::new(),
        table: HashMap::new(),
        arith: theory == TheoryKind::Lia,
        max_aliens: bounds.max_aliens.unwrap_or(widest + 1).max(2),
        max_nodes: bounds.max_nodes,
        truncated: false,
        inconsistent: false,
    };
    let mut goal_nodes = Vec::new();
    for (s, t) in hypotheses {
        if let (Some(a), Some(b)) = (g.add_term(*s), g.add_term(*t)) {
            g.union(a, b);
        }
    }
    for (s, t) in goals {
        goal_nodes.push((g.add_term(*s), g.add_term(*t)));
    }
    let mut rounds = 0;
    loop {
        let mut changed = g.rebuild();
        changed |= g.ac_round();
        changed |= g.rebuild();
        if g.arith {
            changed |= g.la_round();
            if g.inconsistent {
                break;
            }
        }
        rounds += 1;
        if !changed {
            break;
        }
        if rounds >= bounds.max_rounds {
            g.truncated = true;
            break;
        }
    }
    let verdicts = goal_nodes
        .into_iter()
        .map(|(a, b)| match (a, b) {
            _ if g.inconsistent => OracleVerdict::Derivable,
            (Some(a), Some(b)) if g.find(a) == g.find(b) => OracleVerdict::Derivable,
            _ => OracleVerdict::NotWithinBound,
        })
        .collect();
    OracleReport {
        goals: verdicts,
        inconsistent: g.inconsistent,
        truncated: g.truncated,
    }
}

/// Single-goal convenience wrapper.
pub fn oracle_derivable(
    hypotheses: &[(Term, Term)],
    goal: (Term, Term),
    theory: TheoryKind,
    bounds: &OracleBounds,
) -> OracleVerdict {
    oracle_check_equations(hypotheses, &[goal], theory, bounds).goals[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;

    fn check(text: &str) -> OracleReport {
        oracle_check(&parse_problem(text).unwrap(), &OracleBounds::default())
    }

    #[test]
    fn ground_ac_example() {
        let r = check(
            "(ac u)(const a1 a2 a3 a4 a5 a6)
             (assert (= (u a1 a4) a1)) (assert (= (u a3 a6) (u a5 a5)))
             (assert (= a5 a4)) (assert (= a6 a2))
             (goal (= a1 (u a1 (u a6 a3))))
             (goal (= a1 a2))",
        );
        assert_eq!(
            r.goals,
            vec![OracleVerdict::Derivable, OracleVerdict::NotWithinBound]
        );
    }

    #[test]
    fn running_example() {
        let r = check(
            "(theory lia)(ac u)(op f 1)(const a b c1 c2 d e1 e2)
             (assert (= (u a (- c2 c1)) a))
             (assert (= (- (u e1 e2) (f b)) (u d d)))
             (assert (= d (+ c1 1))) (assert (= e2 b))
             (assert (= (u b e1) (f e2))) (assert (= c2 (+ (* 2 c1) 1)))
             (goal (= a (u a 0)))",
        );
        assert_eq!(r.verdict(), OracleVerdict::Derivable);
    }

    #[test]
    fn empty_hypotheses_prove_nothing() {
        let r = check("(const a b)(goal (= a b))");
        assert_eq!(r.verdict(), OracleVerdict::NotWithinBound);
        assert!(!r.truncated);
    }

    #[test]
    fn inconsistent_arithmetic() {
        let r = check("(theory lia)(const a b)(assert (= a (+ a 1)))(goal (= a b))");
        assert!(r.inconsistent);
        assert_eq!(r.verdict(), OracleVerdict::Derivable);
    }

    #[test]
    fn arithmetic_congruence() {
        let r = check(
            "(theory lia)(op f 1)(const a b)(assert (= a (+ b 1)))(goal (= (f (- a 1)) (f b)))",
        );
        assert_eq!(r.verdict(), OracleVerdict::Derivable);
    }
}
