//! TPTP-TFF output and input, SZS status lines, and invocation of an external prover.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::Command;
use std::time::Instant;

use crate::logic::syntax::{constants, parse_rational, parse_sort, read_type};
use crate::logic::{resolve_sorts, Arith, Rational, Rel, SemType, Sort, Term, UnitTable};

use super::{Backend, Budget, ProofResult, ProofStats, ProofStatus, ProofTask, ProverError};

fn tff_sort(s: &Sort) -> &'static str {
    match s {
        Sort::Count => "$int",
        _ => "$rat",
    }
}

fn tff_type(t: &SemType) -> String {
    match t {
        SemType::Entity => "entity".into(),
        SemType::Prop => "$o".into(),
        SemType::Degree(s) => tff_sort(s).into(),
        SemType::Fun(..) => {
            let (args, res) = t.uncurry();
            let args: Vec<String> = args.iter().map(|a| tff_type(a)).collect();
            if args.len() == 1 {
                format!("{} > {}", args[0], tff_type(res))
            } else {
                format!("({}) > {}", args.join(" * "), tff_type(res))
            }
        }
    }
}

fn is_lower_word(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn name(s: &str) -> String {
    if is_lower_word(s) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

fn theta_name(adj: &str) -> String {
    format!("theta_{adj}")
}

fn collect_thresholds(t: &Term, out: &mut BTreeSet<(String, Sort)>) {
    if let Term::Arith(Arith::Threshold { adjective, sort, .. }) = t {
        out.insert((adjective.clone(), sort.clone()));
    }
    for c in t.children() {
        collect_thresholds(c, out);
    }
}

struct Emitter {
    scope: Vec<(String, String)>,
    next: usize,
}

impl Emitter {
    fn var(&self, x: &str) -> String {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| format!("FREE_{x}"))
    }

    fn rational(q: &Rational) -> String {
        format!("{}/{}", q.numer(), q.denom())
    }

    fn term(&mut self, t: &Term) -> String {
        match t {
            Term::Var(x, _) => self.var(x),
            Term::Const(c, _) => name(c),
            Term::App(..) => {
                let (head, args) = t.spine();
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("{}({})", self.term(head), args.join(", "))
            }
            Term::Arith(a) => match a {
                Arith::Int(n) => n.to_string(),
                Arith::Rat { value, .. } => Self::rational(value),
                Arith::Threshold { adjective, class, .. } => format!("{}({})", name(&theta_name(adjective)), self.term(class)),
                Arith::Sum(x, y) => format!("$sum({}, {})", self.term(x), self.term(y)),
                Arith::Diff(x, y) => format!("$difference({}, {})", self.term(x), self.term(y)),
                Arith::Scaled { amount, unit } => format!("'{}'({})", unit.name, self.term(amount)),
            },
            other => self.formula(other),
        }
    }

    fn formula(&mut self, t: &Term) -> String {
        match t {
            Term::Top => "$true".into(),
            Term::Bot => "$false".into(),
            Term::Not(a) => format!("~ {}", self.formula(a)),
            Term::And(a, b) => format!("({} & {})", self.formula(a), self.formula(b)),
            Term::Or(a, b) => format!("({} | {})", self.formula(a), self.formula(b)),
            Term::Imp(a, b) => format!("({} => {})", self.formula(a), self.formula(b)),
            Term::Exists(x, ty, b) | Term::Forall(x, ty, b) => {
                let q = if matches!(t, Term::Exists(..)) { "?" } else { "!" };
                let clean: String = x.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
                let v = format!("V{}_{clean}", self.next);
                self.next += 1;
                self.scope.push((x.clone(), v.clone()));
                let body = self.formula(b);
                self.scope.pop();
                format!("{q}[{v}: {}]: {body}", tff_type(ty))
            }
            Term::Cmp(r, a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                match r {
                    Rel::Eq => format!("{a} = {b}"),
                    Rel::Lt => format!("$less({a}, {b})"),
                    Rel::Le => format!("$lesseq({a}, {b})"),
                    Rel::Gt => format!("$greater({a}, {b})"),
                    Rel::Ge => format!("$greatereq({a}, {b})"),
                }
            }
            other => self.term(other),
        }
    }
}

/// TPTP-TFF text of a task. Declarations are sorted; `%` comments carry the degree
/// dimensions that TFF's numeric types cannot express, so the text reads back exactly.
pub fn emit_tff(task: &ProofTask) -> String {
    let mut consts = BTreeSet::new();
    let mut thresholds = BTreeSet::new();
    for f in task.formulas() {
        constants(f, &mut consts);
        collect_thresholds(f, &mut thresholds);
    }
    let mut out = String::new();
    out.push_str("tff(entity_type, type, entity: $tType).\n");
    for (c, ty) in &consts {
        let _ = writeln!(out, "% type {} {}", name(c), ty);
        let _ = writeln!(out, "tff({}, type, {}: {}).", name(&format!("decl_{c}")), name(c), tff_type(ty));
    }
    for (adj, sort) in &thresholds {
        let theta = theta_name(adj);
        let _ = writeln!(out, "% dimension {} {adj} {sort}", name(&theta));
        let _ = writeln!(out, "tff({}, type, {}: entity > {}).", name(&format!("decl_{theta}")), name(&theta), tff_sort(sort));
    }
    let mut em = Emitter { scope: vec![], next: 0 };
    for (i, a) in task.axioms.iter().enumerate() {
        let _ = writeln!(out, "tff(axiom_{}, axiom, {}).", i + 1, em.formula(a));
    }
    for (i, p) in task.premises.iter().enumerate() {
        let _ = writeln!(out, "tff(premise_{}, axiom, {}).", i + 1, em.formula(p));
    }
    if task.goal != Term::Top {
        let _ = writeln!(out, "tff(goal, conjecture, {}).", em.formula(&task.goal));
    }
    out
}

// ---------------------------------------------------------------- reading

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Var(String),
    Dollar(String),
    Num(String),
    Punct(&'static str),
}

fn lex(text: &str) -> Result<Vec<Tok>, ProverError> {
    let err = |m: String| ProverError::Tff(m);
    let cs: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '%' {
            while i < cs.len() && cs[i] != '\n' {
                i += 1;
            }
        } else if c == '\'' {
            let mut s = String::new();
            i += 1;
            while i < cs.len() && cs[i] != '\'' {
                if cs[i] == '\\' && i + 1 < cs.len() {
                    i += 1;
                }
                s.push(cs[i]);
                i += 1;
            }
            if i >= cs.len() {
                return Err(err("unterminated quote".into()));
            }
            i += 1;
            out.push(Tok::Word(s));
        } else if c.is_ascii_alphabetic() || c == '$' {
            let start = i;
            i += 1;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            let w: String = cs[start..i].iter().collect();
            out.push(if c == '$' {
                Tok::Dollar(w)
            } else if c.is_ascii_uppercase() {
                Tok::Var(w)
            } else {
                Tok::Word(w)
            });
        } else if c.is_ascii_digit() || (c == '-' && i + 1 < cs.len() && cs[i + 1].is_ascii_digit()) {
            let start = i;
            i += 1;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '/' || cs[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(cs[start..i].iter().collect()));
        } else {
            let rest: String = cs[i..cs.len().min(i + 3)].iter().collect();
            let p = ["<=>", "=>", "!=", "(", ")", "[", "]", ",", ":", "!", "?", "~", "&", "|", "=", ">", "*", "."]
                .into_iter()
                .find(|p| rest.starts_with(p))
                .ok_or_else(|| err(format!("unexpected character {c:?}")))?;
            i += p.chars().count();
            out.push(Tok::Punct(p));
        }
    }
    Ok(out)
}

struct Reader<'a> {
    toks: Vec<Tok>,
    pos: usize,
    decls: BTreeMap<String, SemType>,
    thetas: BTreeMap<String, (String, Sort)>,
    scope: Vec<(String, String, SemType)>,
    units: &'a UnitTable,
    next_sort: u32,
    in_binder: bool,
}

impl<'a> Reader<'a> {
    fn err<T>(&self, m: impl Into<String>) -> Result<T, ProverError> {
        Err(ProverError::Tff(format!("{} at token {}", m.into(), self.pos)))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, ProverError> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t.map_or_else(|| self.err("unexpected end"), Ok)
    }

    fn punct(&mut self, p: &str) -> Result<(), ProverError> {
        match self.next()? {
            Tok::Punct(q) if q == p => Ok(()),
            other => self.err(format!("expected {p}, found {other:?}")),
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn word(&mut self) -> Result<String, ProverError> {
        match self.next()? {
            Tok::Word(w) => Ok(w),
            other => self.err(format!("expected a name, found {other:?}")),
        }
    }

    fn tff_type(&mut self) -> Result<SemType, ProverError> {
        match self.next()? {
            Tok::Word(w) if w == "entity" => Ok(SemType::Entity),
            Tok::Dollar(d) if d == "$o" => Ok(SemType::Prop),
            Tok::Dollar(d) if d == "$int" => Ok(SemType::Degree(Sort::Count)),
            Tok::Dollar(d) if (d == "$rat" || d == "$real") && self.in_binder => {
                self.next_sort += 1;
                Ok(SemType::Degree(Sort::Var(self.next_sort)))
            }
            Tok::Dollar(d) if d == "$rat" || d == "$real" => Ok(SemType::Degree(Sort::measure("generic"))),
            Tok::Dollar(d) if d == "$tType" => Ok(SemType::Entity),
            Tok::Punct("(") => {
                let mut args = vec![self.tff_type()?];
                while self.is_punct("*") {
                    self.pos += 1;
                    args.push(self.tff_type()?);
                }
                self.punct(")")?;
                self.punct(">")?;
                let res = self.tff_type()?;
                Ok(SemType::curried(args, res))
            }
            other => self.err(format!("bad type {other:?}")),
        }
        .and_then(|t| {
            if self.is_punct(">") && !matches!(t, SemType::Fun(..)) {
                self.pos += 1;
                let res = self.tff_type()?;
                Ok(SemType::fun(t, res))
            } else {
                Ok(t)
            }
        })
    }

    fn args(&mut self) -> Result<Vec<Term>, ProverError> {
        let mut out = Vec::new();
        if self.is_punct("(") {
            self.pos += 1;
            out.push(self.term()?);
            while self.is_punct(",") {
                self.pos += 1;
                out.push(self.term()?);
            }
            self.punct(")")?;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Term, ProverError> {
        match self.next()? {
            Tok::Var(v) => match self.scope.iter().rev().find(|(t, _, _)| *t == v) {
                Some((_, n, ty)) => Ok(Term::Var(n.clone(), ty.clone())),
                None => self.err(format!("unbound variable {v}")),
            },
            Tok::Num(n) => {
                if n.contains('/') || n.contains('.') {
                    let q = parse_rational(&n).map_or_else(|| self.err(format!("bad number {n}")), Ok)?;
                    Ok(Term::Arith(Arith::Rat { value: q, unit: None }))
                } else {
                    Ok(Term::Arith(Arith::Int(n.parse().map_err(|_| ProverError::Tff(format!("bad number {n}")))?)))
                }
            }
            Tok::Dollar(d) if d == "$sum" || d == "$difference" => {
                let a = self.args()?;
                if a.len() != 2 {
                    return self.err(format!("{d} takes two arguments"));
                }
                let mut it = a.into_iter();
                let (x, y) = (Box::new(it.next().unwrap()), Box::new(it.next().unwrap()));
                Ok(Term::Arith(if d == "$sum" { Arith::Sum(x, y) } else { Arith::Diff(x, y) }))
            }
            Tok::Word(w) => {
                let args = self.args()?;
                if let Some((adj, sort)) = self.thetas.get(&w).cloned() {
                    if args.len() != 1 {
                        return self.err(format!("{w} takes one argument"));
                    }
                    return Ok(Term::Arith(Arith::Threshold {
                        adjective: adj,
                        class: Box::new(args.into_iter().next().unwrap()),
                        sort,
                    }));
                }
                let ty = match self.decls.get(&w) {
                    Some(t) => t.clone(),
                    None => return self.err(format!("undeclared symbol {w}")),
                };
                Ok(args
                    .into_iter()
                    .fold(Term::Const(w, ty), |f, a| Term::App(Box::new(f), Box::new(a))))
            }
            other => self.err(format!("unexpected {other:?} in term")),
        }
    }

    fn atom(&mut self) -> Result<Term, ProverError> {
        if let Some(Tok::Dollar(d)) = self.peek().cloned() {
            let rel = match d.as_str() {
                "$true" => {
                    self.pos += 1;
                    return Ok(Term::Top);
                }
                "$false" => {
                    self.pos += 1;
                    return Ok(Term::Bot);
                }
                "$less" => Some(Rel::Lt),
                "$lesseq" => Some(Rel::Le),
                "$greater" => Some(Rel::Gt),
                "$greatereq" => Some(Rel::Ge),
                _ => None,
            };
            if let Some(r) = rel {
                self.pos += 1;
                let a = self.args()?;
                if a.len() != 2 {
                    return self.err(format!("{d} takes two arguments"));
                }
                let mut it = a.into_iter();
                return Ok(Term::Cmp(r, Box::new(it.next().unwrap()), Box::new(it.next().unwrap())));
            }
        }
        let lhs = self.term()?;
        if self.is_punct("=") || self.is_punct("!=") {
            let neg = self.is_punct("!=");
            self.pos += 1;
            let rhs = self.term()?;
            let eq = Term::Cmp(Rel::Eq, Box::new(lhs), Box::new(rhs));
            return Ok(if neg { Term::Not(Box::new(eq)) } else { eq });
        }
        Ok(lhs)
    }

    fn unitary(&mut self) -> Result<Term, ProverError> {
        if self.is_punct("(") {
            self.pos += 1;
            let f = self.formula()?;
            self.punct(")")?;
            return Ok(f);
        }
        if self.is_punct("~") {
            self.pos += 1;
            return Ok(Term::Not(Box::new(self.unitary()?)));
        }
        if self.is_punct("!") || self.is_punct("?") {
            let universal = self.is_punct("!");
            self.pos += 1;
            self.punct("[")?;
            let mut vars = Vec::new();
            loop {
                let v = match self.next()? {
                    Tok::Var(v) => v,
                    other => return self.err(format!("expected variable, found {other:?}")),
                };
                self.punct(":")?;
                self.in_binder = true;
                let ty = self.tff_type();
                self.in_binder = false;
                vars.push((v, ty?));
                if self.is_punct(",") {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            self.punct("]")?;
            self.punct(":")?;
            let n = self.scope.len();
            for (v, ty) in &vars {
                let base = v.split_once('_').map_or(v.as_str(), |(_, b)| b).to_string();
                let base = if base.is_empty() { "v".to_string() } else { base };
                self.scope.push((v.clone(), base, ty.clone()));
            }
            let mut body = self.unitary()?;
            let bound: Vec<_> = self.scope.drain(n..).collect();
            for (_, nm, ty) in bound.into_iter().rev() {
                body = if universal {
                    Term::Forall(nm, ty, Box::new(body))
                } else {
                    Term::Exists(nm, ty, Box::new(body))
                };
            }
            return Ok(body);
        }
        self.atom()
    }

    fn formula(&mut self) -> Result<Term, ProverError> {
        let mut lhs = self.unitary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Punct(p @ ("&" | "|" | "=>" | "<=>"))) => *p,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unitary()?;
            lhs = match op {
                "&" => Term::And(Box::new(lhs), Box::new(rhs)),
                "|" => Term::Or(Box::new(lhs), Box::new(rhs)),
                "=>" => Term::Imp(Box::new(lhs), Box::new(rhs)),
                _ => Term::And(
                    Box::new(Term::Imp(Box::new(lhs.clone()), Box::new(rhs.clone()))),
                    Box::new(Term::Imp(Box::new(rhs), Box::new(lhs))),
                ),
            };
        }
    }

    /// Attaches the base unit of the expected dimension to bare rational literals.
    fn fix_units(&self, t: &Term, want: Option<&Sort>) -> Term {
        let sort_of = |x: &Term| super::linear::degree_sort(x).filter(|s| !matches!(s, Sort::Var(_)));
        match t {
            Term::Arith(Arith::Rat { value, unit: None }) => {
                let unit = match want {
                    Some(Sort::Measure(d)) => self.units.base_unit(d),
                    _ => None,
                };
                Term::Arith(Arith::Rat { value: value.clone(), unit })
            }
            Term::Cmp(r, a, b) => {
                let s = sort_of(a).or_else(|| sort_of(b));
                Term::Cmp(*r, Box::new(self.fix_units(a, s.as_ref())), Box::new(self.fix_units(b, s.as_ref())))
            }
            Term::Arith(Arith::Sum(a, b)) | Term::Arith(Arith::Diff(a, b)) => {
                let s = sort_of(a).or_else(|| sort_of(b)).or_else(|| want.cloned());
                let (a, b) = (Box::new(self.fix_units(a, s.as_ref())), Box::new(self.fix_units(b, s.as_ref())));
                Term::Arith(if matches!(t, Term::Arith(Arith::Sum(..))) { Arith::Sum(a, b) } else { Arith::Diff(a, b) })
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                let params: Vec<SemType> = match head {
                    Term::Const(_, ty) => ty.uncurry().0.into_iter().cloned().collect(),
                    _ => vec![],
                };
                args.iter().enumerate().fold(head.clone(), |f, (i, a)| {
                    let s = params.get(i).and_then(|p| p.sort());
                    Term::App(Box::new(f), Box::new(self.fix_units(a, s)))
                })
            }
            other => other.map_children(&mut |c| self.fix_units(c, None)),
        }
    }
}

/// Reads text in the form written by [`emit_tff`] back into a task (default budget).
pub fn read_tff(text: &str, units: &UnitTable) -> Result<ProofTask, ProverError> {
    let mut decls = BTreeMap::new();
    let mut thetas = BTreeMap::new();
    for line in text.lines() {
        let parts: Vec<&str> = line.trim().splitn(4, ' ').collect();
        let unq = |s: &str| s.trim_matches('\'').replace("\\'", "'").replace("\\\\", "\\");
        match parts.as_slice() {
            ["%", "type", n, ty] => {
                let t = read_type(ty).map_err(|e| ProverError::Tff(e.to_string()))?;
                decls.insert(unq(n), t);
            }
            ["%", "dimension", n, rest] => {
                let (adj, sort) = rest.split_once(' ').ok_or_else(|| ProverError::Tff(line.to_string()))?;
                let sort = parse_sort(sort).ok_or_else(|| ProverError::Tff(line.to_string()))?;
                thetas.insert(unq(n), (adj.to_string(), sort));
            }
            _ => {}
        }
    }
    let mut r = Reader {
        toks: lex(text)?,
        pos: 0,
        decls,
        thetas,
        scope: vec![],
        units,
        next_sort: 1000,
        in_binder: false,
    };
    let (mut axioms, mut premises, mut goal) = (vec![], vec![], Term::Top);
    while r.peek().is_some() {
        match r.next()? {
            Tok::Word(w) if w == "tff" => {}
            other => return r.err(format!("expected tff, found {other:?}")),
        }
        r.punct("(")?;
        let label = r.word()?;
        r.punct(",")?;
        let role = r.word()?;
        r.punct(",")?;
        if role == "type" {
            let sym = match r.next()? {
                Tok::Word(w) => w,
                other => return r.err(format!("expected symbol, found {other:?}")),
            };
            r.punct(":")?;
            let ty = r.tff_type()?;
            if sym != "entity" && !r.thetas.contains_key(&sym) {
                r.decls.entry(sym).or_insert(ty);
            }
        } else {
            let f = r.formula()?;
            let (f, _) = resolve_sorts(&f).map_err(|e| ProverError::Tff(e.to_string()))?;
            let f = r.fix_units(&f, None);
            match role.as_str() {
                "conjecture" => goal = f,
                "axiom" | "hypothesis" if label.starts_with("premise") => premises.push(f),
                "axiom" | "hypothesis" => axioms.push(f),
                other => return r.err(format!("unsupported role {other}")),
            }
        }
        r.punct(")")?;
        r.punct(".")?;
    }
    ProofTask::new(axioms, premises, goal, Budget::default())
}

// ---------------------------------------------------------------- SZS

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SzsStatus {
    Theorem,
    ContradictoryAxioms,
    CounterSatisfiable,
    Timeout,
    GaveUp,
    Unknown,
    Other,
}

/// Maps the first `SZS status` line of a prover's output to a result.
pub fn read_szs(output: &str) -> Result<ProofResult, ProverError> {
    let status = output
        .lines()
        .find_map(|l| {
            let i = l.find("SZS status")?;
            l[i + "SZS status".len()..].split_whitespace().next().map(str::to_string)
        })
        .ok_or_else(|| {
            let head: String = output.chars().take(80).collect();
            ProverError::UnparseableOutput(head)
        })?;
    let szs = match status.as_str() {
        "Theorem" | "Unsatisfiable" => SzsStatus::Theorem,
        "ContradictoryAxioms" => SzsStatus::ContradictoryAxioms,
        "CounterSatisfiable" | "Satisfiable" => SzsStatus::CounterSatisfiable,
        "Timeout" | "ResourceOut" => SzsStatus::Timeout,
        "GaveUp" => SzsStatus::GaveUp,
        "Unknown" => SzsStatus::Unknown,
        _ => SzsStatus::Other,
    };
    let mut stats = ProofStats::default();
    let status = match szs {
        SzsStatus::Theorem | SzsStatus::ContradictoryAxioms => ProofStatus::Proved,
        SzsStatus::CounterSatisfiable => {
            stats.counter_satisfiable = true;
            ProofStatus::NotProvedWithinBudget
        }
        SzsStatus::Timeout => {
            stats.timed_out = true;
            ProofStatus::NotProvedWithinBudget
        }
        _ => ProofStatus::NotProvedWithinBudget,
    };
    Ok(ProofResult {
        status,
        certificate: None,
        stats,
    })
}

/// An external TPTP prover; `{file}` and `{timeout}` (seconds) in the command are substituted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalProver {
    pub command: String,
}

/// Runs the prover on one task through a private temporary file.
pub fn run_external(prover: &ExternalProver, task: &ProofTask) -> Result<ProofResult, ProverError> {
    let start = Instant::now();
    let mut file = tempfile::Builder::new()
        .suffix(".p")
        .tempfile()
        .map_err(|e| ProverError::External(e.to_string()))?;
    file.write_all(emit_tff(task).as_bytes())
        .map_err(|e| ProverError::External(e.to_string()))?;
    let path = file.path().to_string_lossy().to_string();
    let secs = task.budget.timeout_ms.div_ceil(1000).max(1);
    let cmd = if prover.command.contains("{file}") {
        prover.command.replace("{file}", &path)
    } else {
        format!("{} {path}", prover.command)
    }
    .replace("{timeout}", &secs.to_string());
    let out = Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .output()
        .map_err(|e| ProverError::External(format!("{cmd}: {e}")))?;
    let text = String::from_utf8_lossy(&out.stdout);
    let mut r = read_szs(&text)?;
    r.stats.wall_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

impl Backend for ExternalProver {
    fn prove(&self, task: &ProofTask) -> Result<ProofResult, ProverError> {
        run_external(self, task)
    }
}

