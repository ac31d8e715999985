//! LTL syntax: AST, parser, printer, simplification and the lasso semantics.
//!
//! Grammar (loosest binding first):
//!
//! ```text
//! f ::= f <-> f | f -> f | f | f | f & f | f U f | f R f | f W f
//!     | ! f | X f | F f | G f | ( f ) | true | false | ident | ident[0] | ident[1]
//! ```
//!
//! `->`, `U`, `R` and `W` associate to the right. Unicode `¬ ∧ ∨ → ↔ ◇ □ ◯` are accepted too.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{indexed_name, LassoWord};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub name: String,
    /// Trace index for ∀∀ bodies (`x[0]`, `x[1]`).
    pub trace: Option<u8>,
}

impl Atom {
    pub fn full_name(&self) -> String {
        match self.trace {
            Some(i) => indexed_name(&self.name, i),
            None => self.name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ltl {
    True,
    False,
    Atom(Atom),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Iff(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
    Globally(Box<Ltl>),
    Finally(Box<Ltl>),
}

use Ltl::*;

#[allow(clippy::should_implement_trait)]
impl Ltl {
    pub fn atom(name: &str) -> Ltl {
        Atom(Atom { name: name.to_string(), trace: None })
    }
    pub fn atom_at(name: &str, trace: u8) -> Ltl {
        Atom(Atom { name: name.to_string(), trace: Some(trace) })
    }
    pub fn not(a: Ltl) -> Ltl {
        Not(Box::new(a))
    }
    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Ltl, b: Ltl) -> Ltl {
        Iff(Box::new(a), Box::new(b))
    }
    pub fn next(a: Ltl) -> Ltl {
        Next(Box::new(a))
    }
    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Until(Box::new(a), Box::new(b))
    }
    pub fn release(a: Ltl, b: Ltl) -> Ltl {
        Release(Box::new(a), Box::new(b))
    }
    pub fn globally(a: Ltl) -> Ltl {
        Globally(Box::new(a))
    }
    pub fn finally(a: Ltl) -> Ltl {
        Finally(Box::new(a))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Ltl>) -> Ltl {
        let mut it = items.into_iter();
        match it.next() {
            None => True,
            Some(first) => it.fold(first, Ltl::and),
        }
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Ltl>) -> Ltl {
        let mut it = items.into_iter();
        match it.next() {
            None => False,
            Some(first) => it.fold(first, Ltl::or),
        }
    }

    pub fn parse(text: &str) -> Result<Ltl> {
        Parser::new(text)?.parse_all()
    }

    /// Parses and checks that every atom (full name, including a trace index) is declared.
    pub fn parse_with_vars(text: &str, vars: &BTreeSet<String>) -> Result<Ltl> {
        let f = Ltl::parse(text)?;
        for a in f.atoms() {
            if !vars.contains(&a) {
                return Err(Error::UndeclaredVariable(a));
            }
        }
        Ok(f)
    }

    pub fn children(&self) -> Vec<&Ltl> {
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | Globally(a) | Finally(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b) => vec![a, b],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Full atom names (`x` or `x[i]`).
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            s.insert(a.full_name());
        });
        s
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        if let Atom(a) = self {
            f(a);
        }
        for c in self.children() {
            c.visit_atoms(f);
        }
    }

    pub fn map_atoms(&self, f: &impl Fn(&Atom) -> Ltl) -> Ltl {
        let m = |x: &Ltl| Box::new(x.map_atoms(f));
        match self {
            True => True,
            False => False,
            Atom(a) => f(a),
            Not(a) => Not(m(a)),
            Next(a) => Next(m(a)),
            Globally(a) => Globally(m(a)),
            Finally(a) => Finally(m(a)),
            And(a, b) => And(m(a), m(b)),
            Or(a, b) => Or(m(a), m(b)),
            Implies(a, b) => Implies(m(a), m(b)),
            Iff(a, b) => Iff(m(a), m(b)),
            Until(a, b) => Until(m(a), m(b)),
            Release(a, b) => Release(m(a), m(b)),
        }
    }

    /// Replaces plain atoms by the given formulas.
    pub fn substitute(&self, map: &BTreeMap<String, Ltl>) -> Ltl {
        self.map_atoms(&|a| map.get(&a.full_name()).cloned().unwrap_or(Atom(a.clone())))
    }

    /// Tags every plain atom with trace index `i`.
    pub fn indexed(&self, i: u8) -> Ltl {
        self.map_atoms(&|a| Atom(Atom { name: a.name.clone(), trace: a.trace.or(Some(i)) }))
    }

    /// Maximum nesting of `X` above any atom matching `pred`, or `None` when an atom matching
    /// `pred` occurs below a `U`, `R`, `F` or `G`.
    pub fn next_depth_of(&self, pred: &impl Fn(&Atom) -> bool) -> Option<Option<usize>> {
        fn go(f: &Ltl, pred: &impl Fn(&Atom) -> bool, depth: usize) -> std::result::Result<Option<usize>, ()> {
            match f {
                True | False => Ok(None),
                Atom(a) => Ok(if pred(a) { Some(depth) } else { None }),
                Next(a) => go(a, pred, depth + 1),
                Not(a) => go(a, pred, depth),
                And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                    let x = go(a, pred, depth)?;
                    let y = go(b, pred, depth)?;
                    Ok(x.max(y))
                }
                Until(..) | Release(..) | Globally(_) | Finally(_) => {
                    let mut hit = false;
                    f.visit_atoms(&mut |a| hit |= pred(a));
                    if hit {
                        Err(())
                    } else {
                        Ok(None)
                    }
                }
            }
        }
        go(self, pred, 0).ok()
    }

    /// Local rewriting: constant propagation and a few dualities. Preserves semantics.
    pub fn simplify(&self) -> Ltl {
        let s = |x: &Ltl| x.simplify();
        match self {
            True | False | Atom(_) => self.clone(),
            Not(a) => match s(a) {
                True => False,
                False => True,
                Not(b) => *b,
                Finally(b) => Ltl::globally(Ltl::not(*b).simplify()),
                Globally(b) => Ltl::finally(Ltl::not(*b).simplify()),
                Next(b) => Ltl::next(Ltl::not(*b).simplify()),
                x => Ltl::not(x),
            },
            And(a, b) => match (s(a), s(b)) {
                (False, _) | (_, False) => False,
                (True, x) | (x, True) => x,
                (x, y) if x == y => x,
                (x, y) => Ltl::and(x, y),
            },
            Or(a, b) => match (s(a), s(b)) {
                (True, _) | (_, True) => True,
                (False, x) | (x, False) => x,
                (x, y) if x == y => x,
                (x, y) => Ltl::or(x, y),
            },
            Implies(a, b) => match (s(a), s(b)) {
                (False, _) | (_, True) => True,
                (True, x) => x,
                (x, False) => Ltl::not(x).simplify(),
                (x, y) if x == y => True,
                (x, y) => Ltl::implies(x, y),
            },
            Iff(a, b) => match (s(a), s(b)) {
                (True, x) | (x, True) => x,
                (False, x) | (x, False) => Ltl::not(x).simplify(),
                (x, y) if x == y => True,
                (x, y) => Ltl::iff(x, y),
            },
            Next(a) => match s(a) {
                True => True,
                False => False,
                x => Ltl::next(x),
            },
            Globally(a) => match s(a) {
                True => True,
                False => False,
                Globally(x) => Ltl::globally(*x),
                x => Ltl::globally(x),
            },
            Finally(a) => match s(a) {
                True => True,
                False => False,
                Finally(x) => Ltl::finally(*x),
                x => Ltl::finally(x),
            },
            Until(a, b) => match (s(a), s(b)) {
                (_, True) => True,
                (_, False) => False,
                (False, y) => y,
                (True, y) => Ltl::finally(y),
                (x, y) => Ltl::until(x, y),
            },
            Release(a, b) => match (s(a), s(b)) {
                (_, False) => False,
                (_, True) => True,
                (True, y) => y,
                (False, y) => Ltl::globally(y),
                (x, y) => Ltl::release(x, y),
            },
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Iff(..) => 1,
            Implies(..) => 2,
            Or(..) => 3,
            And(..) => 4,
            Until(..) | Release(..) => 5,
            Not(_) | Next(_) | Globally(_) | Finally(_) => 6,
            True | False | Atom(_) => 7,
        }
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `strict` forces parentheses on an equal-precedence operand (the non-associative side).
        fn sub(f: &mut fmt::Formatter<'_>, x: &Ltl, min: u8, strict: bool) -> fmt::Result {
            let p = x.prec();
            if p < min || (strict && p == min) {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        let bin = |f: &mut fmt::Formatter<'_>, a: &Ltl, op: &str, b: &Ltl, p: u8, right_assoc: bool| {
            sub(f, a, p, right_assoc || p == 1)?;
            write!(f, " {op} ")?;
            sub(f, b, p, !right_assoc || p == 1)
        };
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(a) => write!(f, "{}", a.full_name()),
            Not(a) => {
                write!(f, "!")?;
                sub(f, a, 6, false)
            }
            Next(a) => {
                write!(f, "X ")?;
                sub(f, a, 6, false)
            }
            Globally(a) => {
                write!(f, "G ")?;
                sub(f, a, 6, false)
            }
            Finally(a) => {
                write!(f, "F ")?;
                sub(f, a, 6, false)
            }
            And(a, b) => bin(f, a, "&", b, 4, false),
            Or(a, b) => bin(f, a, "|", b, 3, false),
            Implies(a, b) => bin(f, a, "->", b, 2, true),
            Iff(a, b) => bin(f, a, "<->", b, 1, false),
            Until(a, b) => bin(f, a, "U", b, 5, true),
            Release(a, b) => bin(f, a, "R", b, 5, true),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String, Option<u8>),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    X,
    F,
    G,
    U,
    R,
    W,
    LParen,
    RParen,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (p, c) = chars[i];
            let two = |s: &str| text[p..].starts_with(s);
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let (tok, adv) = if two("<->") {
                (Tok::Iff, 3)
            } else if two("->") {
                (Tok::Implies, 2)
            } else if two("&&") {
                (Tok::And, 2)
            } else if two("||") {
                (Tok::Or, 2)
            } else {
                match c {
                    '!' | '~' | '¬' => (Tok::Not, 1),
                    '&' | '∧' => (Tok::And, 1),
                    '|' | '∨' => (Tok::Or, 1),
                    '→' => (Tok::Implies, 1),
                    '↔' => (Tok::Iff, 1),
                    '◇' => (Tok::F, 1),
                    '□' => (Tok::G, 1),
                    '◯' => (Tok::X, 1),
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    c if c.is_ascii_alphabetic() || c == '_' => {
                        let mut j = i;
                        while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                            j += 1;
                        }
                        let end = if j < chars.len() { chars[j].0 } else { text.len() };
                        let word = &text[p..end];
                        let mut adv = j - i;
                        let tok = match word {
                            "true" => Tok::True,
                            "false" => Tok::False,
                            "X" => Tok::X,
                            "F" => Tok::F,
                            "G" => Tok::G,
                            "U" => Tok::U,
                            "R" => Tok::R,
                            "W" => Tok::W,
                            _ => {
                                let rest = &text[end..];
                                let idx = if rest.starts_with("[0]") {
                                    Some(0)
                                } else if rest.starts_with("[1]") {
                                    Some(1)
                                } else {
                                    None
                                };
                                if idx.is_some() {
                                    adv += 3;
                                }
                                Tok::Ident(word.to_string(), idx)
                            }
                        };
                        (tok, adv)
                    }
                    _ => return Err(Error::Syntax { pos: p, msg: format!("unexpected character `{c}`") }),
                }
            };
            toks.push((p, tok));
            i += adv;
        }
        Ok(Parser { toks, pos: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_all(mut self) -> Result<Ltl> {
        let f = self.iff()?;
        if self.pos < self.toks.len() {
            return Err(Error::Syntax { pos: self.here(), msg: "unexpected trailing input".into() });
        }
        Ok(f)
    }

    fn iff(&mut self) -> Result<Ltl> {
        let mut a = self.implies()?;
        while self.eat(&Tok::Iff) {
            let b = self.implies()?;
            a = Ltl::iff(a, b);
        }
        Ok(a)
    }

    fn implies(&mut self) -> Result<Ltl> {
        let a = self.or()?;
        if self.eat(&Tok::Implies) {
            let b = self.implies()?;
            return Ok(Ltl::implies(a, b));
        }
        Ok(a)
    }

    fn or(&mut self) -> Result<Ltl> {
        let mut a = self.and()?;
        while self.eat(&Tok::Or) {
            let b = self.and()?;
            a = Ltl::or(a, b);
        }
        Ok(a)
    }

    fn and(&mut self) -> Result<Ltl> {
        let mut a = self.binary_temporal()?;
        while self.eat(&Tok::And) {
            let b = self.binary_temporal()?;
            a = Ltl::and(a, b);
        }
        Ok(a)
    }

    fn binary_temporal(&mut self) -> Result<Ltl> {
        let a = self.unary()?;
        if self.eat(&Tok::U) {
            let b = self.binary_temporal()?;
            return Ok(Ltl::until(a, b));
        }
        if self.eat(&Tok::R) {
            let b = self.binary_temporal()?;
            return Ok(Ltl::release(a, b));
        }
        if self.eat(&Tok::W) {
            // a W b  ≡  b R (a | b)
            let b = self.binary_temporal()?;
            return Ok(Ltl::release(b.clone(), Ltl::or(a, b)));
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Ltl> {
        let pos = self.here();
        let t = self.peek().cloned();
        match t {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Ltl::not(self.unary()?))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(Ltl::next(self.unary()?))
            }
            Some(Tok::F) => {
                self.pos += 1;
                Ok(Ltl::finally(self.unary()?))
            }
            Some(Tok::G) => {
                self.pos += 1;
                Ok(Ltl::globally(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(Error::Syntax { pos: self.here(), msg: "expected `)`".into() });
                }
                Ok(f)
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(False)
            }
            Some(Tok::Ident(n, idx)) => {
                self.pos += 1;
                Ok(Atom(Atom { name: n, trace: idx }))
            }
            Some(_) => Err(Error::Syntax { pos, msg: "expected a formula".into() }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

/// Truth value of `phi` at every position of the lasso graph of `w`.
fn eval_positions(w: &LassoWord, phi: &Ltl) -> Result<Vec<bool>> {
    let n = w.len();
    let succ: Vec<usize> = (0..n).map(|i| w.succ(i)).collect();
    let r = |x: &Ltl| eval_positions(w, x);
    Ok(match phi {
        True => vec![true; n],
        False => vec![false; n],
        Atom(a) => {
            let name = a.full_name();
            let i = w.vars.iter().position(|v| *v == name).ok_or(Error::UndeclaredVariable(name))?;
            (0..n).map(|k| w.letter(k) >> i & 1 == 1).collect()
        }
        Not(a) => r(a)?.into_iter().map(|x| !x).collect(),
        And(a, b) => r(a)?.into_iter().zip(r(b)?).map(|(x, y)| x && y).collect(),
        Or(a, b) => r(a)?.into_iter().zip(r(b)?).map(|(x, y)| x || y).collect(),
        Implies(a, b) => r(a)?.into_iter().zip(r(b)?).map(|(x, y)| !x || y).collect(),
        Iff(a, b) => r(a)?.into_iter().zip(r(b)?).map(|(x, y)| x == y).collect(),
        Next(a) => {
            let v = r(a)?;
            (0..n).map(|k| v[succ[k]]).collect()
        }
        Until(a, b) => fixpoint(&r(a)?, &r(b)?, &succ, false),
        Release(a, b) => fixpoint(&r(a)?, &r(b)?, &succ, true),
        Finally(a) => fixpoint(&vec![true; n], &r(a)?, &succ, false),
        Globally(a) => fixpoint(&vec![false; n], &r(a)?, &succ, true),
    })
}

/// Until (least fixpoint, `release == false`) or release (greatest fixpoint) over the lasso graph.
fn fixpoint(a: &[bool], b: &[bool], succ: &[usize], release: bool) -> Vec<bool> {
    let n = a.len();
    let mut v = vec![release; n];
    loop {
        let mut changed = false;
        for k in (0..n).rev() {
            let nv = if release { b[k] && (a[k] || v[succ[k]]) } else { b[k] || (a[k] && v[succ[k]]) };
            if nv != v[k] {
                v[k] = nv;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

/// Whether `stem · loop^ω ⊨ phi`.
pub fn eval_ltl(w: &LassoWord, phi: &Ltl) -> Result<bool> {
    Ok(eval_positions(w, phi)?[0])
}
