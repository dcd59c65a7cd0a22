//! Problem files.
//!
//! A problem is a sequence of S-expressions:
//!
//! ```text
//! (theory lia)            ; or empty (the default)
//! (ac u)                  ; AC symbols, binary
//! (op f 1)                ; free symbols with arity
//! (const a b c)           ; free constants
//! (assert (= t1 t2))      ; hypotheses, any number
//! (goal (= t1 t2))        ; goals, at least one; all must hold
//! ```
//!
//! Arithmetic terms use `+`, `-`, `*`, integer literals and `(/ p q)`.
//! Comments run from `;` to the end of the line. Symbols must be declared
//! before they are used.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::ParseError;
use crate::shostak::{add, mul, neg, sub, EmptyTheory, LinearArith, ShostakTheory};
use crate::term::{Head, Rational, Symbol, Term};

const MAX_DEPTH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum TheoryKind {
    #[default]
    Empty,
    Lia,
}

impl TheoryKind {
    pub fn name(self) -> &'static str {
        match self {
            TheoryKind::Empty => "empty",
            TheoryKind::Lia => "lia",
        }
    }

    pub fn instance(self) -> Arc<dyn ShostakTheory> {
        match self {
            TheoryKind::Empty => Arc::new(EmptyTheory),
            TheoryKind::Lia => Arc::new(LinearArith),
        }
    }
}

impl FromStr for TheoryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "empty" => Ok(TheoryKind::Empty),
            "lia" => Ok(TheoryKind::Lia),
            _ => Err(format!("unknown theory {s:?} (expected empty or lia)")),
        }
    }
}

impl fmt::Display for TheoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Problem {
    pub theory: TheoryKind,
    pub ac_symbols: Vec<Symbol>,
    pub functions: Vec<Symbol>,
    /// Free constants in declaration order.
    pub constants: Vec<Term>,
    pub hypotheses: Vec<(Term, Term)>,
    pub goals: Vec<(Term, Term)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self, depth: usize) -> Result<Option<Sexp>, ParseError> {
        self.skip_blank();
        let start = self.pos;
        match self.chars.peek() {
            None => Ok(None),
            Some(')') => Err(err(start, "unexpected ')'")),
            Some('(') => {
                if depth >= MAX_DEPTH {
                    return Err(err(start, "nesting too deep"));
                }
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.chars.peek() {
                        None => return Err(err(start, "unbalanced '('")),
                        Some(')') => {
                            self.bump();
                            return Ok(Some(Sexp::List(items, start)));
                        }
                        _ => items.push(self.read(depth + 1)?.expect("input remains")),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Some(Sexp::Atom(s, start)))
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Decl {
    Ac(Symbol),
    Function(Symbol),
    Constant(Term),
}

const RESERVED: [&str; 5] = ["+", "-", "*", "/", "="];

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

struct Builder {
    problem: Problem,
    names: HashMap<String, Decl>,
    theory_set: bool,
}

impl Builder {
    fn declare(&mut self, name: &Sexp, decl: impl FnOnce(&str) -> Decl) -> Result<(), ParseError> {
        let Sexp::Atom(n, pos) = name else {
            return Err(err(name.pos(), "expected a symbol name"));
        };
        if RESERVED.contains(&n.as_str()) || parse_int(n).is_some() {
            return Err(err(*pos, format!("{n:?} cannot be declared")));
        }
        if self.names.contains_key(n) {
            return Err(err(*pos, format!("symbol {n} declared twice")));
        }
        let d = decl(n);
        match d {
            Decl::Ac(s) => self.problem.ac_symbols.push(s),
            Decl::Function(s) => self.problem.functions.push(s),
            Decl::Constant(c) => self.problem.constants.push(c),
        }
        self.names.insert(n.clone(), d);
        Ok(())
    }

    fn require_lia(&self, pos: Pos, what: &str) -> Result<(), ParseError> {
        if self.problem.theory != TheoryKind::Lia {
            return Err(err(pos, format!("{what} requires (theory lia)")));
        }
        Ok(())
    }

    fn term(&self, s: &Sexp) -> Result<Term, ParseError> {
        match s {
            Sexp::Atom(a, pos) => {
                if let Some(n) = parse_int(a) {
                    self.require_lia(*pos, "numeral")?;
                    return Ok(Term::num(Rational::from_integer(n)));
                }
                match self.names.get(a) {
                    Some(Decl::Constant(c)) => Ok(*c),
                    Some(Decl::Ac(_)) => {
                        Err(err(*pos, format!("AC symbol {a} expects 2 arguments")))
                    }
                    Some(Decl::Function(f)) => Err(err(
                        *pos,
                        format!("symbol {a} expects {} arguments", f.arity()),
                    )),
                    None => Err(err(*pos, format!("undeclared symbol {a}"))),
                }
            }
            Sexp::List(items, pos) => {
                let Some((Sexp::Atom(head, hpos), rest)) = items.split_first() else {
                    return Err(err(*pos, "expected an application"));
                };
                if head == "/" {
                    self.require_lia(*hpos, "rational literal")?;
                    let lit = |x: &Sexp| match x {
                        Sexp::Atom(a, _) => parse_int(a),
                        _ => None,
                    };
                    return match rest {
                        [p, q] => match (lit(p), lit(q)) {
                            (Some(_), Some(q)) if q.is_zero() => Err(err(*pos, "division by zero")),
                            (Some(p), Some(q)) => Ok(Term::num(Rational::new(p, q))),
                            _ => Err(err(*pos, "(/ p q) needs two integer literals")),
                        },
                        _ => Err(err(*pos, "(/ p q) needs two integer literals")),
                    };
                }
                if matches!(head.as_str(), "+" | "-" | "*") {
                    self.require_lia(*hpos, &format!("operator {head}"))?;
                    let args = rest
                        .iter()
                        .map(|x| self.term(x))
                        .collect::<Result<Vec<_>, _>>()?;
                    let fold = |f: fn(Term, Term) -> Term| {
                        args[1..].iter().fold(args[0], |acc, x| f(acc, *x))
                    };
                    return match (head.as_str(), args.len()) {
                        ("-", 1) => Ok(neg(args[0])),
                        (_, 0) | (_, 1) => Err(err(
                            *pos,
                            format!("operator {head} needs at least 2 arguments"),
                        )),
                        ("+", _) => Ok(fold(add)),
                        ("-", _) => Ok(fold(sub)),
                        _ => Ok(fold(mul)),
                    };
                }
                let sym = match self.names.get(head) {
                    Some(Decl::Ac(s)) | Some(Decl::Function(s)) => *s,
                    Some(Decl::Constant(_)) => {
                        return Err(err(*hpos, format!("constant {head} cannot be applied")))
                    }
                    None => return Err(err(*hpos, format!("undeclared symbol {head}"))),
                };
                if rest.len() != sym.arity() {
                    let kind = if sym.is_ac() { "AC symbol" } else { "symbol" };
                    return Err(err(
                        *pos,
                        format!(
                            "{kind} {head} expects {} arguments, got {}",
                            sym.arity(),
                            rest.len()
                        ),
                    ));
                }
                let args = rest
                    .iter()
                    .map(|x| self.term(x))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::app(sym, args))
            }
        }
    }

    fn equation(&self, s: &Sexp) -> Result<(Term, Term), ParseError> {
        match s {
            Sexp::List(items, _) if matches!(items.first(), Some(Sexp::Atom(h, _)) if h == "=") => {
                if items.len() != 3 {
                    return Err(err(s.pos(), "(= t1 t2) needs exactly two terms"));
                }
                Ok((self.term(&items[1])?, self.term(&items[2])?))
            }
            _ => Err(err(s.pos(), "expected (= t1 t2)")),
        }
    }

    fn form(&mut self, s: &Sexp) -> Result<(), ParseError> {
        let Sexp::List(items, pos) = s else {
            return Err(err(s.pos(), "expected a top-level form"));
        };
        let Some((Sexp::Atom(kw, _), rest)) = items.split_first() else {
            return Err(err(*pos, "expected a top-level form"));
        };
        match kw.as_str() {
            "theory" => {
                if self.theory_set {
                    return Err(err(*pos, "theory declared twice"));
                }
                if !self.problem.hypotheses.is_empty() || !self.problem.goals.is_empty() {
                    return Err(err(*pos, "theory must be declared before assertions"));
                }
                match rest {
                    [Sexp::Atom(t, tpos)] => {
                        self.problem.theory = t.parse().map_err(|m: String| err(*tpos, m))?;
                        self.theory_set = true;
                        Ok(())
                    }
                    _ => Err(err(*pos, "expected (theory empty|lia)")),
                }
            }
            "ac" => {
                for n in rest {
                    self.declare(n, |n| Decl::Ac(Symbol::ac(n)))?;
                }
                Ok(())
            }
            "const" => {
                for n in rest {
                    self.declare(n, |n| {
                        Decl::Constant(Term::constant(Symbol::uninterpreted(n, 0)))
                    })?;
                }
                Ok(())
            }
            "op" => match rest {
                [name, Sexp::Atom(ar, apos)] => {
                    let arity: usize = ar
                        .parse()
                        .ok()
                        .filter(|a| *a <= 64)
                        .ok_or_else(|| err(*apos, format!("bad arity {ar}")))?;
                    if arity == 0 {
                        self.declare(name, |n| {
                            Decl::Constant(Term::constant(Symbol::uninterpreted(n, 0)))
                        })
                    } else {
                        self.declare(name, |n| Decl::Function(Symbol::uninterpreted(n, arity)))
                    }
                }
                _ => Err(err(*pos, "expected (op name arity)")),
            },
            "assert" | "goal" => match rest {
                [eq] => {
                    let e = self.equation(eq)?;
                    if kw == "assert" {
                        self.problem.hypotheses.push(e);
                    } else {
                        self.problem.goals.push(e);
                    }
                    Ok(())
                }
                _ => Err(err(*pos, format!("expected ({kw} (= t1 t2))"))),
            },
            other => Err(err(*pos, format!("unknown form {other}"))),
        }
    }
}

pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let mut reader = Reader {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, column: 1 },
    };
    let mut b = Builder {
        problem: Problem::default(),
        names: HashMap::new(),
        theory_set: false,
    };
    while let Some(s) = reader.read(0)? {
        b.form(&s)?;
    }
    if b.problem.goals.is_empty() {
        return Err(err(reader.pos, "no goal"));
    }
    Ok(b.problem)
}

/// Writes a term in problem-file syntax.
pub fn render_term(t: Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

fn write_term(out: &mut String, t: Term) {
    match t.head() {
        Head::Num(n) => {
            if n.denom().is_one() {
                let _ = write!(out, "{}", n.numer());
            } else {
                let _ = write!(out, "(/ {} {})", n.numer(), n.denom());
            }
        }
        Head::K(i) => {
            let _ = write!(out, "k{i}");
        }
        Head::Var(i) => {
            let _ = write!(out, "x{i}");
        }
        Head::Sym(s) => {
            if t.arity() == 0 {
                out.push_str(s.name());
                return;
            }
            out.push('(');
            out.push_str(s.name());
            for a in t.args() {
                out.push(' ');
                write_term(out, *a);
            }
            out.push(')');
        }
    }
}

fn names_of<T>(items: &[T], name: impl Fn(&T) -> String) -> String {
    items.iter().map(name).collect::<Vec<_>>().join(" ")
}

/// Writes a problem in the file syntax; parsing the result gives back an
/// equal problem.
pub fn render_problem(p: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(theory {})", p.theory);
    if !p.ac_symbols.is_empty() {
        let _ = writeln!(
            out,
            "(ac {})",
            names_of(&p.ac_symbols, |s| s.name().to_string())
        );
    }
    for f in &p.functions {
        let _ = writeln!(out, "(op {} {})", f.name(), f.arity());
    }
    if !p.constants.is_empty() {
        let _ = writeln!(out, "(const {})", names_of(&p.constants, |c| c.to_string()));
    }
    for (kw, eqs) in [("assert", &p.hypotheses), ("goal", &p.goals)] {
        for (s, t) in eqs {
            let _ = writeln!(out, "({kw} (= {} {}))", render_term(*s), render_term(*t));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const GROUND_AC_TEXT: &str = "
        ; ground AC example
        (ac u)
        (const a1 a2 a3 a4 a5 a6)
        (assert (= (u a1 a4) a1))
        (assert (= (u a3 a6) (u a5 a5)))
        (assert (= a5 a4))
        (assert (= a6 a2))
        (goal (= a1 (u a1 (u a6 a3))))
    ";

    #[test]
    fn parses_ground_ac_example() {
        let p = parse_problem(GROUND_AC_TEXT).unwrap();
        assert_eq!(p.theory, TheoryKind::Empty);
        assert_eq!(p.hypotheses.len(), 4);
        assert_eq!(p.goals.len(), 1);
        assert_eq!(p.constants.len(), 6);
        assert_eq!(p.goals[0].1.to_string(), "u(a1,u(a6,a3))");
    }

    #[test]
    fn reports_errors_with_positions() {
        let e = parse_problem("(const a)\n(assert (= a a))").unwrap_err();
        assert_eq!(e.message, "no goal");
        let e = parse_problem("(ac u)\n(const a b)\n(goal (= (u a) b))").unwrap_err();
        assert!(e.message.contains("AC symbol u expects 2 arguments"), "{e}");
        assert_eq!((e.line, e.column), (3, 10));
        let e = parse_problem("(const a)\n(goal (= (+ a 1) a))").unwrap_err();
        assert!(e.message.contains("requires (theory lia)"), "{e}");
        let e = parse_problem("(goal (= a b))").unwrap_err();
        assert!(e.message.contains("undeclared"), "{e}");
        assert!(parse_problem("(const a").is_err());
        assert!(parse_problem(")").is_err());
        assert!(parse_problem("(theory lia)(const a)(goal (= a (/ 1 0)))").is_err());
    }

    #[test]
    fn arithmetic_forms() {
        let p =
            parse_problem("(theory lia)(const a)(goal (= (- a) (+ a (* -2 a) (/ 6 4))))").unwrap();
        let (s, t) = p.goals[0];
        assert_eq!(s, neg(p.constants[0]));
        assert_eq!(t.to_string(), "a - 2*a + 3/2");
    }

    #[test]
    fn render_round_trips() {
        let text = "(theory lia)(ac u v)(op f 2)(const a b)(assert (= (f a (/ -1 3)) (u a (v b 2))))(goal (= (- a b) (- a)))";
        let p = parse_problem(text).unwrap();
        let q = parse_problem(&render_problem(&p)).unwrap();
        assert_eq!(p, q);
        let p = parse_problem(GROUND_AC_TEXT).unwrap();
        assert_eq!(parse_problem(&render_problem(&p)).unwrap(), p);
    }
}
