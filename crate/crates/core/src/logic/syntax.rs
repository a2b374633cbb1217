//! Canonical text form of terms.
//!
//! Prefix S-expressions with explicit sorts:
//!
//! ```text
//! (exists d:d:length (and (tall john d) (> d (theta tall length U))))
//! (forall d:d:length (imp (tall harry (- d 50.8mm)) (tall mary d)))
//! (lambda F:(e -> t) (F john))
//! ```
//!
//! Constants print bare when the reader can recover their type: entities in argument
//! position, and heads of saturated predications. Anything else is written `name:type`.
//! Integer literals (`3`) are counts; measure literals carry a unit suffix (`50.8mm`).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::term::{Arith, Rational, Rel, Term};
use super::types::{SemType, Sort};
use super::units::UnitTable;
use super::LogicError;

// ---------------------------------------------------------------- printing

pub fn print_type(t: &SemType) -> String {
    t.to_string()
}

pub fn print_rational(v: &Rational) -> String {
    let (n, d) = (v.numer(), v.denom());
    if d.is_one() {
        return n.to_string();
    }
    // finite decimal expansion iff the denominator only has factors 2 and 5
    let mut rest = d.clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{n}/{d}");
    }
    let digits = twos.max(fives);
    let scaled = v * Rational::from_integer(BigInt::from(10).pow(digits));
    let s = scaled.to_integer().abs().to_string();
    let s = format!("{:0>width$}", s, width = digits as usize + 1);
    let (int, frac) = s.split_at(s.len() - digits as usize);
    let sign = if v.is_negative() { "-" } else { "" };
    format!("{sign}{int}.{frac}")
}

fn print_arith(a: &Arith, out: &mut String) {
    match a {
        Arith::Int(n) => out.push_str(&n.to_string()),
        Arith::Rat { value, unit } => {
            let s = print_rational(value);
            match unit {
                Some(u) => {
                    out.push_str(&s);
                    out.push_str(&u.name);
                }
                None if value.is_integer() => {
                    out.push_str(&s);
                    out.push_str("/1");
                }
                None if s.contains('/') => out.push_str(&s),
                None => {
                    out.push_str(&format!("{}/{}", value.numer(), value.denom()));
                }
            }
        }
        Arith::Threshold {
            adjective,
            class,
            sort,
        } => {
            out.push_str(&format!("(theta {adjective} {sort} "));
            print_into(class, false, out);
            out.push(')');
        }
        Arith::Sum(x, y) | Arith::Diff(x, y) => {
            out.push_str(if matches!(a, Arith::Sum(..)) { "(+ " } else { "(- " });
            print_into(x, false, out);
            out.push(' ');
            print_into(y, false, out);
            out.push(')');
        }
        Arith::Scaled { amount, unit } => {
            out.push_str(&format!("(measure {} ", unit.name));
            print_into(amount, false, out);
            out.push(')');
        }
    }
}

fn print_const(name: &str, ty: &SemType, bare: bool, out: &mut String) {
    out.push_str(name);
    if !bare {
        out.push(':');
        out.push_str(&ty.to_string());
    }
}

fn print_into(t: &Term, _head: bool, out: &mut String) {
    match t {
        Term::Var(x, _) => out.push_str(x),
        Term::Const(x, ty) => print_const(x, ty, *ty == SemType::Entity, out),
        Term::Abs(x, ty, b) | Term::Exists(x, ty, b) | Term::Forall(x, ty, b) => {
            let kw = match t {
                Term::Abs(..) => "lambda",
                Term::Exists(..) => "exists",
                _ => "forall",
            };
            out.push_str(&format!("({kw} {x}:{ty} "));
            print_into(b, false, out);
            out.push(')');
        }
        Term::App(..) => {
            let (head, args) = t.spine();
            out.push('(');
            match head {
                Term::Const(name, ty) => {
                    let (params, res) = ty.uncurry();
                    let bare = params.len() == args.len() && *res == SemType::Prop;
                    print_const(name, ty, bare, out);
                }
                other => print_into(other, true, out),
            }
            for a in args {
                out.push(' ');
                print_into(a, false, out);
            }
            out.push(')');
        }
        Term::Top => out.push_str("true"),
        Term::Bot => out.push_str("false"),
        Term::Not(a) => {
            out.push_str("(not ");
            print_into(a, false, out);
            out.push(')');
        }
        Term::And(a, b) | Term::Or(a, b) | Term::Imp(a, b) => {
            out.push_str(match t {
                Term::And(..) => "(and ",
                Term::Or(..) => "(or ",
                _ => "(imp ",
            });
            print_into(a, false, out);
            out.push(' ');
            print_into(b, false, out);
            out.push(')');
        }
        Term::Cmp(r, a, b) => {
            out.push_str(&format!("({} ", r.symbol()));
            print_into(a, false, out);
            out.push(' ');
            print_into(b, false, out);
            out.push(')');
        }
        Term::Arith(a) => print_arith(a, out),
    }
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    print_into(t, false, &mut s);
    s
}

/// Conventional mathematical rendering, for human-readable output only.
pub fn pretty(t: &Term) -> String {
    match t {
        Term::Var(x, _) | Term::Const(x, _) => x.clone(),
        Term::Abs(x, _, b) => format!("λ{x}.{}", pretty(b)),
        Term::Exists(x, _, b) => format!("∃{x}({})", pretty_body(b)),
        Term::Forall(x, _, b) => format!("∀{x}({})", pretty_body(b)),
        Term::App(..) => {
            let (h, args) = t.spine();
            let args: Vec<String> = args.into_iter().map(pretty).collect();
            match h {
                Term::Const(..) | Term::Var(..) => format!("{}({})", pretty(h), args.join(",")),
                _ => format!("({})({})", pretty(h), args.join(",")),
            }
        }
        Term::Top => "⊤".into(),
        Term::Bot => "⊥".into(),
        Term::Not(a) => format!("¬{}", pretty(a)),
        Term::And(a, b) => format!("({} ∧ {})", pretty(a), pretty_and(b)),
        Term::Or(a, b) => format!("({} ∨ {})", pretty(a), pretty(b)),
        Term::Imp(a, b) => format!("({} → {})", pretty(a), pretty(b)),
        Term::Cmp(r, a, b) => {
            let sym = match r {
                Rel::Lt => "<",
                Rel::Le => "≤",
                Rel::Eq => "=",
                Rel::Ge => "≥",
                Rel::Gt => ">",
            };
            format!("({} {sym} {})", pretty(a), pretty(b))
        }
        Term::Arith(a) => match a {
            Arith::Threshold {
                adjective, class, ..
            } => format!("θ_{adjective}({})", pretty(class)),
            Arith::Sum(x, y) => format!("{} + {}", pretty(x), pretty(y)),
            Arith::Diff(x, y) => format!("{} − {}", pretty(x), pretty(y)),
            _ => print_term(t),
        },
    }
}

fn pretty_and(t: &Term) -> String {
    match t {
        Term::And(a, b) => format!("{} ∧ {}", pretty(a), pretty_and(b)),
        other => pretty(other),
    }
}

fn pretty_body(t: &Term) -> String {
    let s = pretty(t);
    if matches!(t, Term::And(..) | Term::Or(..) | Term::Imp(..)) {
        s[1..s.len() - 1].to_string()
    } else {
        s
    }
}

// ---------------------------------------------------------------- reading

/// Reader for the canonical syntax; needs a unit table to resolve literal suffixes.
pub struct Reader<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    units: &'a UnitTable,
    scope: Vec<(String, SemType)>,
}

pub fn read_term(text: &str, units: &UnitTable) -> Result<Term, LogicError> {
    let mut r = Reader {
        src: text.as_bytes(),
        text,
        pos: 0,
        units,
        scope: Vec::new(),
    };
    let t = r.term()?;
    r.ws();
    if r.pos != r.src.len() {
        return Err(r.err("trailing input"));
    }
    Ok(t)
}

pub fn read_type(text: &str) -> Result<SemType, LogicError> {
    let units = UnitTable::empty();
    let mut r = Reader {
        src: text.as_bytes(),
        text,
        pos: 0,
        units: &units,
        scope: Vec::new(),
    };
    let t = r.ty()?;
    r.ws();
    if r.pos != r.src.len() {
        return Err(r.err("trailing input"));
    }
    Ok(t)
}

fn is_delim(c: u8) -> bool {
    c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b':'
}

impl<'a> Reader<'a> {
    fn err(&self, msg: &str) -> LogicError {
        LogicError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), LogicError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn atom(&mut self) -> Result<&'a str, LogicError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && !is_delim(self.src[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a symbol"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn ty(&mut self) -> Result<SemType, LogicError> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut parts = vec![self.ty()?];
            loop {
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    break;
                }
                let arrow = self.atom()?;
                if arrow != "->" {
                    return Err(self.err("expected '->'"));
                }
                parts.push(self.ty()?);
            }
            let res = parts.pop().unwrap();
            return Ok(SemType::curried(parts, res));
        }
        let a = self.atom()?;
        match a {
            "e" => Ok(SemType::Entity),
            "t" => Ok(SemType::Prop),
            "d" => {
                self.eat(b':')?;
                let s = self.atom()?;
                Ok(SemType::Degree(parse_sort(s).ok_or_else(|| self.err("bad sort"))?))
            }
            _ => Err(self.err(&format!("unknown type '{a}'"))),
        }
    }

    fn binder(&mut self) -> Result<(String, SemType), LogicError> {
        let x = self.atom()?.to_string();
        self.eat(b':')?;
        let t = self.ty()?;
        Ok((x, t))
    }

    fn number(&mut self, tok: &str) -> Result<Term, LogicError> {
        let split = tok
            .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == '/' || c == '-'))
            .unwrap_or(tok.len());
        let (num, unit) = tok.split_at(split);
        let value = parse_rational(num).ok_or_else(|| self.err(&format!("bad number '{num}'")))?;
        if unit.is_empty() {
            if num.contains('.') || num.contains('/') {
                return Ok(Term::Arith(Arith::Rat { value, unit: None }));
            }
            return Ok(Term::Arith(Arith::Int(value.to_integer())));
        }
        let u = self
            .units
            .lookup(unit)
            .ok_or_else(|| LogicError::UnknownUnit(unit.to_string()))?;
        Ok(Term::Arith(Arith::Rat {
            value,
            unit: Some(u),
        }))
    }

    /// A bare or annotated symbol in argument position.
    fn symbol(&mut self, name: &str) -> Result<Term, LogicError> {
        if let Some((_, t)) = self.scope.iter().rev().find(|(n, _)| n == name) {
            return Ok(Term::Var(name.to_string(), t.clone()));
        }
        match name {
            "true" => return Ok(Term::Top),
            "false" => return Ok(Term::Bot),
            _ => {}
        }
        if self.src.get(self.pos) == Some(&b':') {
            self.pos += 1;
            let t = self.ty()?;
            return Ok(Term::Const(name.to_string(), t));
        }
        Ok(Term::Const(name.to_string(), SemType::Entity))
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let t = self.compound()?;
                self.eat(b')')?;
                Ok(t)
            }
            Some(c) => {
                let tok = self.atom()?;
                if c.is_ascii_digit() || (c == b'-' && tok.len() > 1) {
                    self.number(tok)
                } else {
                    self.symbol(tok)
                }
            }
        }
    }

    fn terms_until_close(&mut self) -> Result<Vec<Term>, LogicError> {
        let mut v = Vec::new();
        while self.peek() != Some(b')') {
            v.push(self.term()?);
        }
        Ok(v)
    }

    fn compound(&mut self) -> Result<Term, LogicError> {
        if self.peek() == Some(b'(') {
            let head = self.term()?;
            let args = self.terms_until_close()?;
            return Ok(args.into_iter().fold(head, |f, a| Term::App(Box::new(f), Box::new(a))));
        }
        let start = self.pos;
        let kw = self.atom()?;
        match kw {
            "lambda" | "exists" | "forall" => {
                // `(lambda (x:T y:U) b)` abbreviates nested binders
                let binders = if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let mut bs = Vec::new();
                    while self.peek() != Some(b')') {
                        bs.push(self.binder()?);
                    }
                    self.pos += 1;
                    bs
                } else {
                    vec![self.binder()?]
                };
                let depth = self.scope.len();
                self.scope.extend(binders.iter().cloned());
                let body = self.term();
                self.scope.truncate(depth);
                let mut acc = body?;
                for (x, t) in binders.into_iter().rev() {
                    let b = Box::new(acc);
                    acc = match kw {
                        "lambda" => Term::Abs(x, t, b),
                        "exists" => Term::Exists(x, t, b),
                        _ => Term::Forall(x, t, b),
                    };
                }
                Ok(acc)
            }
            "not" => Ok(Term::Not(Box::new(self.term()?))),
            "and" | "or" => {
                let mut items = self.terms_until_close()?;
                let Some(mut acc) = items.pop() else {
                    return Ok(if kw == "and" { Term::Top } else { Term::Bot });
                };
                while let Some(t) = items.pop() {
                    acc = if kw == "and" {
                        Term::And(Box::new(t), Box::new(acc))
                    } else {
                        Term::Or(Box::new(t), Box::new(acc))
                    };
                }
                Ok(acc)
            }
            "imp" => {
                let a = self.term()?;
                let b = self.term()?;
                Ok(Term::Imp(Box::new(a), Box::new(b)))
            }
            "<" | "<=" | "=" | ">=" | ">" => {
                let r = match kw {
                    "<" => Rel::Lt,
                    "<=" => Rel::Le,
                    "=" => Rel::Eq,
                    ">=" => Rel::Ge,
                    _ => Rel::Gt,
                };
                let a = self.term()?;
                let b = self.term()?;
                Ok(Term::Cmp(r, Box::new(a), Box::new(b)))
            }
            "+" | "-" => {
                let a = Box::new(self.term()?);
                let b = Box::new(self.term()?);
                Ok(Term::Arith(if kw == "+" {
                    Arith::Sum(a, b)
                } else {
                    Arith::Diff(a, b)
                }))
            }
            "theta" => {
                let adjective = self.atom()?.to_string();
                let sort = parse_sort(self.atom()?).ok_or_else(|| self.err("bad sort"))?;
                let class = self.term()?;
                Ok(Term::Arith(Arith::Threshold {
                    adjective,
                    class: Box::new(class),
                    sort,
                }))
            }
            "measure" => {
                let uname = self.atom()?;
                let unit = self
                    .units
                    .lookup(uname)
                    .ok_or_else(|| LogicError::UnknownUnit(uname.to_string()))?;
                let amount = self.term()?;
                Ok(Term::Arith(Arith::Scaled {
                    amount: Box::new(amount),
                    unit,
                }))
            }
            _ => {
                // application with a symbol head
                self.pos = start;
                let name = self.atom()?.to_string();
                let annotated = self.src.get(self.pos) == Some(&b':');
                let bound = self.scope.iter().rev().any(|(n, _)| *n == name);
                let head = if bound || annotated {
                    Some(self.symbol(&name)?)
                } else {
                    None
                };
                let args = self.terms_until_close()?;
                let head = match head {
                    Some(h) => h,
                    None => {
                        let mut arg_types = Vec::with_capacity(args.len());
                        for a in &args {
                            arg_types.push(self.local_type(a)?);
                        }
                        Term::Const(name, SemType::curried(arg_types, SemType::Prop))
                    }
                };
                Ok(args.into_iter().fold(head, |f, a| Term::App(Box::new(f), Box::new(a))))
            }
        }
    }

    /// Type of an argument term, read off its annotations.
    fn local_type(&self, t: &Term) -> Result<SemType, LogicError> {
        let mut tc = super::typecheck::TypeChecker::for_term(t);
        let mut env = self.scope.clone();
        tc.infer(t, &mut env).map(|ty| tc.resolve(&ty))
    }
}

pub fn parse_sort(s: &str) -> Option<Sort> {
    if let Some(n) = s.strip_prefix('?') {
        return n.parse().ok().map(Sort::Var);
    }
    if s == "count" {
        return Some(Sort::Count);
    }
    if s.is_empty() || !s.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return None;
    }
    Some(Sort::Measure(s.to_string()))
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        if f.is_empty() || !f.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = i.starts_with('-');
        let digits = format!("{}{}", i.trim_start_matches('-'), f);
        let n: BigInt = digits.parse().ok()?;
        let d = BigInt::from(10).pow(f.len() as u32);
        let v = Rational::new(n, d);
        return Some(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Names of all constants occurring in `t`.
pub fn constants(t: &Term, out: &mut BTreeSet<(String, SemType)>) {
    if let Term::Const(n, ty) = t {
        out.insert((n.clone(), ty.clone()));
    }
    for c in t.children() {
        constants(c, out);
    }
}
