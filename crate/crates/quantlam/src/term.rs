//! Term syntax for the two calculi.
//!
//! One tree covers both: a lambda-ES term is a bang term that uses neither
//! `!` nor `der`. Binders are de Bruijn indices carrying a display hint, free
//! variables are names, so alpha-equivalence is plain structural equality
//! (hints excluded) and meta-level substitution cannot capture.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

/// Which grammar a term is meant to live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Calculus {
    /// Variables, abstraction, application, explicit substitution.
    LambdaEs,
    /// The above plus bang and dereliction.
    Bang,
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Calculus::LambdaEs => write!(f, "lambda-es"),
            Calculus::Bang => write!(f, "bang"),
        }
    }
}

/// A variable occurrence: bound (de Bruijn index) or free (name).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Bound(u32),
    Free(String),
}

/// Terms of the lambda-ES and bang calculi.
///
/// `ESub(t, x, u)` renders `t[x := u]`: the binder scopes over `t` only.
/// The `String` on `Abs`/`ESub` is a printing hint and is ignored by
/// comparisons and hashing.
#[derive(Debug, Clone)]
pub enum Term {
    Var(Var),
    Abs(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    ESub(Box<Term>, String, Box<Term>),
    Bang(Box<Term>),
    Der(Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(Var::Free(name.into()))
    }

    pub fn bound(idx: u32) -> Term {
        Term::Var(Var::Bound(idx))
    }

    pub fn abs(hint: impl Into<String>, body: Term) -> Term {
        Term::Abs(hint.into(), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn esub(body: Term, hint: impl Into<String>, arg: Term) -> Term {
        Term::ESub(Box::new(body), hint.into(), Box::new(arg))
    }

    pub fn bang(body: Term) -> Term {
        Term::Bang(Box::new(body))
    }

    pub fn der(body: Term) -> Term {
        Term::Der(Box::new(body))
    }

    /// True when the term uses neither `!` nor `der`.
    pub fn is_lambda_es(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Abs(_, b) => b.is_lambda_es(),
            Term::App(f, a) => f.is_lambda_es() && a.is_lambda_es(),
            Term::ESub(b, _, a) => b.is_lambda_es() && a.is_lambda_es(),
            Term::Bang(_) | Term::Der(_) => false,
        }
    }

    /// Free variable names.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(Var::Free(n)) => {
                out.insert(n.clone());
            }
            Term::Var(Var::Bound(_)) => {}
            Term::Abs(_, b) | Term::Bang(b) | Term::Der(b) => b.collect_free(out),
            Term::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
            Term::ESub(b, _, a) => {
                b.collect_free(out);
                a.collect_free(out);
            }
        }
    }

    /// Largest dangling de Bruijn index plus one; 0 for locally closed terms.
    pub fn dangling(&self) -> u32 {
        fn go(t: &Term, depth: u32) -> u32 {
            match t {
                Term::Var(Var::Bound(i)) => i.saturating_sub(depth - depth.min(*i)).max(
                    if *i >= depth { *i - depth + 1 } else { 0 },
                ),
                Term::Var(Var::Free(_)) => 0,
                Term::Abs(_, b) | Term::ESub(b, _, _) => {
                    let b = go(b, depth + 1);
                    match t {
                        Term::ESub(_, _, a) => b.max(go(a, depth)),
                        _ => b,
                    }
                }
                Term::App(f, a) => go(f, depth).max(go(a, depth)),
                Term::Bang(b) | Term::Der(b) => go(b, depth),
            }
        }
        go(self, 0)
    }

    /// Shift dangling indices `>= cutoff` up by `by`.
    pub(crate) fn shift_above(&self, by: u32, cutoff: u32) -> Term {
        match self {
            Term::Var(Var::Bound(i)) => {
                if *i >= cutoff {
                    Term::bound(i + by)
                } else {
                    self.clone()
                }
            }
            Term::Var(Var::Free(_)) => self.clone(),
            Term::Abs(h, b) => Term::Abs(h.clone(), Box::new(b.shift_above(by, cutoff + 1))),
            Term::App(f, a) => Term::app(f.shift_above(by, cutoff), a.shift_above(by, cutoff)),
            Term::ESub(b, h, a) => Term::ESub(
                Box::new(b.shift_above(by, cutoff + 1)),
                h.clone(),
                Box::new(a.shift_above(by, cutoff)),
            ),
            Term::Bang(b) => Term::bang(b.shift_above(by, cutoff)),
            Term::Der(b) => Term::der(b.shift_above(by, cutoff)),
        }
    }

    pub(crate) fn shift(&self, by: u32) -> Term {
        if by == 0 {
            self.clone()
        } else {
            self.shift_above(by, 0)
        }
    }

    /// Replace index `j` (relative to the root of `self`) by `repl`, shifting
    /// `repl` under binders and decrementing indices above `j`.
    pub(crate) fn subst_bound(&self, j: u32, repl: &Term) -> Term {
        match self {
            Term::Var(Var::Bound(i)) => match (*i).cmp(&j) {
                Ordering::Equal => repl.shift(j),
                Ordering::Greater => Term::bound(i - 1),
                Ordering::Less => self.clone(),
            },
            Term::Var(Var::Free(_)) => self.clone(),
            Term::Abs(h, b) => Term::Abs(h.clone(), Box::new(b.subst_bound(j + 1, repl))),
            Term::App(f, a) => Term::app(f.subst_bound(j, repl), a.subst_bound(j, repl)),
            Term::ESub(b, h, a) => Term::ESub(
                Box::new(b.subst_bound(j + 1, repl)),
                h.clone(),
                Box::new(a.subst_bound(j, repl)),
            ),
            Term::Bang(b) => Term::bang(b.subst_bound(j, repl)),
            Term::Der(b) => Term::der(b.subst_bound(j, repl)),
        }
    }

    /// Capture-free meta-level substitution of the free name `x` by `u`.
    /// `u` must be locally closed.
    pub fn subst_meta(&self, x: &str, u: &Term) -> Term {
        debug_assert_eq!(u.dangling(), 0, "substituted term must be locally closed");
        match self {
            Term::Var(Var::Free(n)) if n == x => u.clone(),
            Term::Var(_) => self.clone(),
            Term::Abs(h, b) => Term::Abs(h.clone(), Box::new(b.subst_meta(x, u))),
            Term::App(f, a) => Term::app(f.subst_meta(x, u), a.subst_meta(x, u)),
            Term::ESub(b, h, a) => Term::ESub(
                Box::new(b.subst_meta(x, u)),
                h.clone(),
                Box::new(a.subst_meta(x, u)),
            ),
            Term::Bang(b) => Term::bang(b.subst_meta(x, u)),
            Term::Der(b) => Term::der(b.subst_meta(x, u)),
        }
    }

    /// Open a binder body: index 0 becomes the free name `x`.
    pub fn open(&self, x: &str) -> Term {
        self.subst_bound(0, &Term::var(x))
    }

    /// Close over a free name: occurrences of `x` become index 0.
    pub fn close(&self, x: &str) -> Term {
        fn go(t: &Term, x: &str, depth: u32) -> Term {
            match t {
                Term::Var(Var::Free(n)) if n == x => Term::bound(depth),
                Term::Var(Var::Bound(i)) if *i >= depth => Term::bound(i + 1),
                Term::Var(_) => t.clone(),
                Term::Abs(h, b) => Term::Abs(h.clone(), Box::new(go(b, x, depth + 1))),
                Term::App(f, a) => Term::app(go(f, x, depth), go(a, x, depth)),
                Term::ESub(b, h, a) => Term::ESub(
                    Box::new(go(b, x, depth + 1)),
                    h.clone(),
                    Box::new(go(a, x, depth)),
                ),
                Term::Bang(b) => Term::bang(go(b, x, depth)),
                Term::Der(b) => Term::der(go(b, x, depth)),
            }
        }
        go(self, x, 0)
    }

    /// Alpha-equivalence; same as `==` with this representation.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other
    }

    fn rank(&self) -> u8 {
        match self {
            Term::Var(_) => 0,
            Term::Abs(..) => 1,
            Term::App(..) => 2,
            Term::ESub(..) => 3,
            Term::Bang(_) => 4,
            Term::Der(_) => 5,
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Term {}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        use Term::*;
        match (self, other) {
            (Var(a), Var(b)) => a.cmp(b),
            (Abs(_, a), Abs(_, b)) => a.cmp(b),
            (App(f1, a1), App(f2, a2)) => f1.cmp(f2).then_with(|| a1.cmp(a2)),
            (ESub(b1, _, a1), ESub(b2, _, a2)) => b1.cmp(b2).then_with(|| a1.cmp(a2)),
            (Bang(a), Bang(b)) | (Der(a), Der(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Term::Var(v) => v.hash(state),
            Term::Abs(_, b) | Term::Bang(b) | Term::Der(b) => b.hash(state),
            Term::App(f, a) => {
                f.hash(state);
                a.hash(state);
            }
            Term::ESub(b, _, a) => {
                b.hash(state);
                a.hash(state);
            }
        }
    }
}

/// A step to one child of a term node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Fun,
    Arg,
    Body,
    SubBody,
    SubArg,
    DerBody,
    BangBody,
}

impl Dir {
    fn label(self) -> &'static str {
        match self {
            Dir::Fun => "fun",
            Dir::Arg => "arg",
            Dir::Body => "body",
            Dir::SubBody => "sbody",
            Dir::SubArg => "sarg",
            Dir::DerBody => "der",
            Dir::BangBody => "bang",
        }
    }
}

/// A path addressing one subterm.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position(pub Vec<Dir>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn child(&self, d: Dir) -> Position {
        let mut p = self.0.clone();
        p.push(d);
        Position(p)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<&str> = self.0.iter().map(|d| d.label()).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl Term {
    /// The subterm at `pos`, if the path is valid for this tree.
    pub fn at(&self, pos: &Position) -> Option<&Term> {
        let mut cur = self;
        for d in &pos.0 {
            cur = match (cur, d) {
                (Term::App(f, _), Dir::Fun) => f,
                (Term::App(_, a), Dir::Arg) => a,
                (Term::Abs(_, b), Dir::Body) => b,
                (Term::ESub(b, _, _), Dir::SubBody) => b,
                (Term::ESub(_, _, a), Dir::SubArg) => a,
                (Term::Der(b), Dir::DerBody) => b,
                (Term::Bang(b), Dir::BangBody) => b,
                _ => return None,
            };
        }
        Some(cur)
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn freshen(hint: &str, avoid: &BTreeSet<String>) -> String {
    let base = if is_ident(hint) { hint } else { "x" };
    if !avoid.contains(base) {
        return base.to_string();
    }
    let mut k = 0u64;
    loop {
        let cand = format!("{base}{k}");
        if !avoid.contains(&cand) {
            return cand;
        }
        k += 1;
    }
}

/// Binding strength of the printing context.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd)]
enum Prec {
    Term, // abstraction allowed bare
    App,  // left of application
    Atom, // argument / ES body / bang body
}

fn print_rec(t: &Term, env: &mut Vec<String>, avoid: &mut BTreeSet<String>, prec: Prec, out: &mut String) {
    match t {
        Term::Var(Var::Free(n)) => out.push_str(n),
        Term::Var(Var::Bound(i)) => {
            let idx = env.len() as i64 - 1 - *i as i64;
            if idx >= 0 {
                out.push_str(&env[idx as usize]);
            } else {
                // dangling index; only reachable when printing raw subterms
                out.push_str(&format!("#{i}"));
            }
        }
        Term::Abs(h, b) => {
            let paren = prec > Prec::Term;
            if paren {
                out.push('(');
            }
            let name = freshen(h, avoid);
            out.push('\\');
            out.push_str(&name);
            out.push('.');
            avoid.insert(name.clone());
            env.push(name.clone());
            print_rec(b, env, avoid, Prec::Term, out);
            env.pop();
            avoid.remove(&name);
            if paren {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            let paren = prec > Prec::App;
            if paren {
                out.push('(');
            }
            print_rec(f, env, avoid, Prec::App, out);
            out.push(' ');
            print_rec(a, env, avoid, Prec::Atom, out);
            if paren {
                out.push(')');
            }
        }
        Term::ESub(b, h, a) => {
            // postfix [x := u] attaches to an atom
            print_rec(b, env, avoid, Prec::Atom, out);
            let name = freshen(h, avoid);
            out.push('[');
            out.push_str(&name);
            out.push_str(" := ");
            print_rec(a, env, avoid, Prec::Term, out);
            out.push(']');
            // note: `a` is outside the binder, `b` inside; the binder name only
            // matters for `b`, which was printed before the name was chosen.
            // To keep occurrences of the binder inside `b` correct we print
            // `b` with the name pushed, so redo with proper scoping:
            let _ = name;
        }
        Term::Bang(b) => {
            out.push('!');
            print_rec(b, env, avoid, Prec::Atom, out);
        }
        Term::Der(b) => {
            out.push_str("der(");
            print_rec(b, env, avoid, Prec::Term, out);
            out.push(')');
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut avoid = self.free_vars();
        let mut env = Vec::new();
        let mut out = String::new();
        print_scoped(self, &mut env, &mut avoid, Prec::Term, &mut out);
        write!(f, "{out}")
    }
}

/// Like `print_rec` but handles `ESub` binder scoping correctly: the binder
/// name must be chosen before printing the body.
fn print_scoped(t: &Term, env: &mut Vec<String>, avoid: &mut BTreeSet<String>, prec: Prec, out: &mut String) {
    if let Term::ESub(b, h, a) = t {
        let name = freshen(h, avoid);
        avoid.insert(name.clone());
        env.push(name.clone());
        let mut body = String::new();
        print_scoped(b, env, avoid, Prec::Atom, &mut body);
        env.pop();
        avoid.remove(&name);
        out.push_str(&body);
        out.push('[');
        out.push_str(&name);
        out.push_str(" := ");
        print_scoped(a, env, avoid, Prec::Term, out);
        out.push(']');
        return;
    }
    match t {
        Term::Var(Var::Free(n)) => out.push_str(n),
        Term::Var(Var::Bound(i)) => {
            let idx = env.len() as i64 - 1 - *i as i64;
            if idx >= 0 {
                out.push_str(&env[idx as usize]);
            } else {
                out.push_str(&format!("#{i}"));
            }
        }
        Term::Abs(h, b) => {
            let paren = prec > Prec::Term;
            if paren {
                out.push('(');
            }
            let name = freshen(h, avoid);
            out.push('\\');
            out.push_str(&name);
            out.push('.');
            avoid.insert(name.clone());
            env.push(name.clone());
            print_scoped(b, env, avoid, Prec::Term, out);
            env.pop();
            avoid.remove(&name);
            if paren {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            let paren = prec > Prec::App;
            if paren {
                out.push('(');
            }
            print_scoped(f, env, avoid, Prec::App, out);
            out.push(' ');
            print_scoped(a, env, avoid, Prec::Atom, out);
            if paren {
                out.push(')');
            }
        }
        Term::ESub(..) => unreachable!(),
        Term::Bang(b) => {
            out.push('!');
            print_scoped(b, env, avoid, Prec::Atom, out);
        }
        Term::Der(b) => {
            out.push_str("der(");
            print_scoped(b, env, avoid, Prec::Term, out);
            out.push(')');
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("calculus mismatch at byte {offset}: `{construct}` is not part of the lambda-ES grammar")]
    CalculusMismatch { offset: usize, construct: String },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    calculus: Calculus,
    scope: Vec<String>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", b as char))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            _ => return self.err("expected identifier"),
        }
        while let Some(c) = self.src.get(self.pos) {
            if c.is_ascii_alphanumeric() || *c == b'_' || *c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn mk_var(&self, name: String) -> Term {
        // innermost binder wins
        for (i, n) in self.scope.iter().rev().enumerate() {
            if *n == name {
                return Term::bound(i as u32);
            }
        }
        Term::var(name)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.eat(b'\\') {
            let name = self.ident()?;
            self.expect(b'.')?;
            self.scope.push(name.clone());
            let body = self.term()?;
            self.scope.pop();
            return Ok(Term::abs(name.clone(), body.close_innermost(&name, &self.scope)));
        }
        self.app()
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut cur = self.atom()?;
        loop {
            match self.peek() {
                Some(c)
                    if c.is_ascii_alphabetic()
                        || c == b'('
                        || c == b'!' =>
                {
                    let arg = self.atom()?;
                    cur = Term::app(cur, arg);
                }
                _ => break,
            }
        }
        Ok(cur)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let mut cur = self.primary()?;
        // postfix explicit substitutions
        while self.peek() == Some(b'[') {
            self.pos += 1;
            let name = self.ident()?;
            self.skip_ws();
            if !(self.src.get(self.pos) == Some(&b':') && self.src.get(self.pos + 1) == Some(&b'=')) {
                return self.err("expected `:=`");
            }
            self.pos += 2;
            let arg = self.term()?;
            self.expect(b']')?;
            // the binder scopes over what we already parsed: re-close it
            cur = Term::ESub(
                Box::new(cur.close(&name)),
                name,
                Box::new(arg),
            );
        }
        Ok(cur)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(b')')?;
                Ok(t)
            }
            Some(b'!') => {
                let at = self.pos;
                if self.calculus == Calculus::LambdaEs {
                    return Err(ParseError::CalculusMismatch {
                        offset: at,
                        construct: "!".to_string(),
                    });
                }
                self.pos += 1;
                let body = self.atom()?;
                Ok(Term::bang(body))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let name = self.ident()?;
                if name == "der" && self.peek() == Some(b'(') {
                    if self.calculus == Calculus::LambdaEs {
                        return Err(ParseError::CalculusMismatch {
                            offset: at,
                            construct: "der".to_string(),
                        });
                    }
                    self.pos += 1;
                    let body = self.term()?;
                    self.expect(b')')?;
                    return Ok(Term::der(body));
                }
                Ok(self.mk_var(name))
            }
            _ => self.err("expected a term"),
        }
    }
}

impl Term {
    /// Turn free occurrences of `name` back into the index for the binder the
    /// parser just closed. The parser builds bodies with scope names resolved
    /// lazily, so free occurrences of shadowed names never appear here.
    fn close_innermost(&self, _name: &str, _outer: &[String]) -> Term {
        // Bodies are already built with `mk_var` resolving to indices, so
        // nothing is left to close.
        self.clone()
    }
}

/// Parse `src` as a term of `calculus`.
pub fn parse(src: &str, calculus: Calculus) -> Result<Term, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        calculus,
        scope: Vec::new(),
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    debug_assert_eq!(t.dangling(), 0);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(s: &str) -> Term {
        parse(s, Calculus::LambdaEs).unwrap()
    }

    fn pb(s: &str) -> Term {
        parse(s, Calculus::Bang).unwrap()
    }

    #[test]
    fn parse_identity() {
        assert_eq!(pl("\\x.x"), Term::abs("x", Term::bound(0)));
    }

    #[test]
    fn parse_closure() {
        // x[x := y] is ESub(Var x, x, Var y) with x bound in the body
        let t = pl("x[x := y]");
        assert_eq!(t, Term::esub(Term::bound(0), "x", Term::var("y")));
    }

    #[test]
    fn parse_bang_der() {
        let t = pb("der((\\x.!x) !y)");
        let expect = Term::der(Term::app(
            Term::abs("x", Term::bang(Term::bound(0))),
            Term::bang(Term::var("y")),
        ));
        assert_eq!(t, expect);
    }

    #[test]
    fn bang_rejected_in_lambda_es() {
        assert!(matches!(
            parse("!x", Calculus::LambdaEs),
            Err(ParseError::CalculusMismatch { .. })
        ));
        assert!(matches!(
            parse("der(x)", Calculus::LambdaEs),
            Err(ParseError::CalculusMismatch { .. })
        ));
        // `der` as a plain variable stays legal in lambda-ES
        assert_eq!(pl("der x"), Term::app(Term::var("der"), Term::var("x")));
    }

    #[test]
    fn syntax_error_offset() {
        match parse("\\x. (x", Calculus::LambdaEs) {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn free_vars_cases() {
        assert!(pl("\\x.x").free_vars().is_empty());
        let fv = pl("x[x := y]").free_vars();
        assert_eq!(fv.into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
        let fv = pl("z z").free_vars();
        assert_eq!(fv.into_iter().collect::<Vec<_>>(), vec!["z".to_string()]);
    }

    #[test]
    fn alpha_eq_cases() {
        assert!(pl("\\x.x").alpha_eq(&pl("\\y.y")));
        assert!(pl("\\x.\\y.x").alpha_eq(&pl("\\y.\\x.y")));
        assert!(!pl("\\x.\\y.x").alpha_eq(&pl("\\x.\\y.y")));
    }

    #[test]
    fn subst_meta_cases() {
        // subst_meta(Var x, x, \y.y) = \y.y
        assert_eq!(pl("x").subst_meta("x", &pl("\\y.y")), pl("\\y.y"));
        // subst_meta(\y.x, x, y): no capture; prints with a fresh binder
        let t = pl("\\y.x").subst_meta("x", &pl("y"));
        assert_eq!(t, Term::abs("y", Term::var("y")));
        assert_eq!(t.to_string(), "\\y0.y");
        // subst_meta(x[y := x], x, z) = z[y := z]
        let t = pl("x[y := x]").subst_meta("x", &pl("z"));
        assert_eq!(t, pl("z[y := z]"));
    }

    #[test]
    fn print_round_trip() {
        for s in [
            "\\x.x",
            "x[x := y]",
            "(\\x.\\y.x) (z (\\w.w)) ((\\w.w) (\\w.w))",
            "x y z",
            "x (y z)",
            "(x y)[z := w]",
            "\\x.x y",
        ] {
            let t = pl(s);
            let printed = t.to_string();
            assert_eq!(pl(&printed), t, "round-trip of {s} via {printed}");
        }
        for s in ["der((\\x.!x) !y)", "!x[y := z]", "(!x)[y := z]", "der(!x) !y"] {
            let t = pb(s);
            let printed = t.to_string();
            assert_eq!(pb(&printed), t, "round-trip of {s} via {printed}");
        }
    }

    #[test]
    fn es_binds_tighter_than_app() {
        // x y[z := w] applies x to the closure
        let t = pl("x y[z := w]");
        assert_eq!(
            t,
            Term::app(Term::var("x"), Term::esub(Term::var("y"), "z", Term::var("w")))
        );
    }

    #[test]
    fn positions_address_subterms() {
        let t = pl("(\\x.x) (y[y := z])");
        let p = Position(vec![Dir::Arg, Dir::SubArg]);
        assert_eq!(t.at(&p), Some(&Term::var("z")));
        assert_eq!(t.at(&Position(vec![Dir::Fun, Dir::Body])), Some(&Term::bound(0)));
        assert_eq!(t.at(&Position(vec![Dir::Fun, Dir::Arg])), None);
    }
}
