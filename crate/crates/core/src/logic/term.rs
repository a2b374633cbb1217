use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::types::{SemType, Sort};

pub type Rational = BigRational;

/// A measurement unit together with the dimension it measures.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unit {
    pub name: String,
    pub dimension: String,
}

impl Unit {
    pub fn new(name: &str, dimension: &str) -> Self {
        Unit {
            name: name.to_string(),
            dimension: dimension.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    /// Relation equivalent to the negation of `self` over a total order (`None` for `=`).
    pub fn negated(self) -> Option<Rel> {
        match self {
            Rel::Lt => Some(Rel::Ge),
            Rel::Le => Some(Rel::Gt),
            Rel::Ge => Some(Rel::Lt),
            Rel::Gt => Some(Rel::Le),
            Rel::Eq => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }

    pub fn holds(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Rel::Lt => a < b,
            Rel::Le => a <= b,
            Rel::Eq => a == b,
            Rel::Ge => a >= b,
            Rel::Gt => a > b,
        }
    }
}

/// Degree-valued terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Arith {
    /// Integer literal of the count sort.
    Int(BigInt),
    /// Rational measure literal. `unit: None` only occurs transiently while reading
    /// formats that do not carry units; the dimension is then fixed by inference.
    Rat { value: Rational, unit: Option<Unit> },
    /// Uninterpreted contextual standard `θ_adj(class)`.
    Threshold {
        adjective: String,
        class: Box<Term>,
        sort: Sort,
    },
    Sum(Box<Term>, Box<Term>),
    Diff(Box<Term>, Box<Term>),
    /// `amount` counted in `unit`, e.g. "2 inches"; removed by unit normalization.
    Scaled { amount: Box<Term>, unit: Unit },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String, SemType),
    Const(String, SemType),
    Abs(String, SemType, Box<Term>),
    App(Box<Term>, Box<Term>),
    Top,
    Bot,
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Imp(Box<Term>, Box<Term>),
    Exists(String, SemType, Box<Term>),
    Forall(String, SemType, Box<Term>),
    Arith(Arith),
    Cmp(Rel, Box<Term>, Box<Term>),
}

pub fn var(name: &str, ty: SemType) -> Term {
    Term::Var(name.to_string(), ty)
}

pub fn cnst(name: &str, ty: SemType) -> Term {
    Term::Const(name.to_string(), ty)
}

pub fn entity(name: &str) -> Term {
    cnst(name, SemType::Entity)
}

pub fn lam(name: &str, ty: SemType, body: Term) -> Term {
    Term::Abs(name.to_string(), ty, Box::new(body))
}

pub fn app(f: Term, a: Term) -> Term {
    Term::App(Box::new(f), Box::new(a))
}

pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
    args.into_iter().fold(f, app)
}

pub fn not(t: Term) -> Term {
    Term::Not(Box::new(t))
}

pub fn and(a: Term, b: Term) -> Term {
    Term::And(Box::new(a), Box::new(b))
}

/// Right-nested conjunction; `Top` when empty.
pub fn and_all<I: IntoIterator<Item = Term>>(items: I) -> Term {
    let mut items: Vec<Term> = items.into_iter().collect();
    let Some(mut acc) = items.pop() else {
        return Term::Top;
    };
    while let Some(t) = items.pop() {
        acc = and(t, acc);
    }
    acc
}

pub fn or(a: Term, b: Term) -> Term {
    Term::Or(Box::new(a), Box::new(b))
}

pub fn imp(a: Term, b: Term) -> Term {
    Term::Imp(Box::new(a), Box::new(b))
}

pub fn exists(name: &str, ty: SemType, body: Term) -> Term {
    Term::Exists(name.to_string(), ty, Box::new(body))
}

pub fn forall(name: &str, ty: SemType, body: Term) -> Term {
    Term::Forall(name.to_string(), ty, Box::new(body))
}

pub fn cmp(rel: Rel, a: Term, b: Term) -> Term {
    Term::Cmp(rel, Box::new(a), Box::new(b))
}

pub fn int(n: i64) -> Term {
    Term::Arith(Arith::Int(BigInt::from(n)))
}

pub fn rat(value: Rational, unit: Unit) -> Term {
    Term::Arith(Arith::Rat {
        value,
        unit: Some(unit),
    })
}

pub fn diff(a: Term, b: Term) -> Term {
    Term::Arith(Arith::Diff(Box::new(a), Box::new(b)))
}

pub fn sum(a: Term, b: Term) -> Term {
    Term::Arith(Arith::Sum(Box::new(a), Box::new(b)))
}

pub fn threshold(adjective: &str, class: Term, sort: Sort) -> Term {
    Term::Arith(Arith::Threshold {
        adjective: adjective.to_string(),
        class: Box::new(class),
        sort,
    })
}

/// Predicate atom `p(args...)` with the predicate's type derived from the argument types.
pub fn atom(pred: &str, args: Vec<(Term, SemType)>) -> Term {
    let ty = SemType::curried(args.iter().map(|(_, t)| t.clone()), SemType::Prop);
    apps(cnst(pred, ty), args.into_iter().map(|(t, _)| t))
}

impl Term {
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(..) | Term::Const(..) | Term::Top | Term::Bot => vec![],
            Term::Abs(_, _, b) | Term::Exists(_, _, b) | Term::Forall(_, _, b) | Term::Not(b) => {
                vec![b]
            }
            Term::App(a, b)
            | Term::And(a, b)
            | Term::Or(a, b)
            | Term::Imp(a, b)
            | Term::Cmp(_, a, b) => vec![a, b],
            Term::Arith(a) => match a {
                Arith::Int(_) | Arith::Rat { .. } => vec![],
                Arith::Threshold { class, .. } => vec![class],
                Arith::Sum(a, b) | Arith::Diff(a, b) => vec![a, b],
                Arith::Scaled { amount, .. } => vec![amount],
            },
        }
    }

    /// Rebuilds the node with each immediate child replaced by `f(child)`; binders are kept.
    pub fn map_children(&self, f: &mut impl FnMut(&Term) -> Term) -> Term {
        let b = |t: &Term, f: &mut dyn FnMut(&Term) -> Term| Box::new(f(t));
        match self {
            Term::Var(..) | Term::Const(..) | Term::Top | Term::Bot => self.clone(),
            Term::Abs(x, t, body) => Term::Abs(x.clone(), t.clone(), b(body, f)),
            Term::Exists(x, t, body) => Term::Exists(x.clone(), t.clone(), b(body, f)),
            Term::Forall(x, t, body) => Term::Forall(x.clone(), t.clone(), b(body, f)),
            Term::Not(a) => Term::Not(b(a, f)),
            Term::App(x, y) => Term::App(b(x, f), b(y, f)),
            Term::And(x, y) => Term::And(b(x, f), b(y, f)),
            Term::Or(x, y) => Term::Or(b(x, f), b(y, f)),
            Term::Imp(x, y) => Term::Imp(b(x, f), b(y, f)),
            Term::Cmp(r, x, y) => Term::Cmp(*r, b(x, f), b(y, f)),
            Term::Arith(a) => Term::Arith(match a {
                Arith::Int(_) | Arith::Rat { .. } => a.clone(),
                Arith::Threshold {
                    adjective,
                    class,
                    sort,
                } => Arith::Threshold {
                    adjective: adjective.clone(),
                    class: b(class, f),
                    sort: sort.clone(),
                },
                Arith::Sum(x, y) => Arith::Sum(b(x, f), b(y, f)),
                Arith::Diff(x, y) => Arith::Diff(b(x, f), b(y, f)),
                Arith::Scaled { amount, unit } => Arith::Scaled {
                    amount: b(amount, f),
                    unit: unit.clone(),
                },
            }),
        }
    }

    pub fn binder(&self) -> Option<(&str, &SemType, &Term)> {
        match self {
            Term::Abs(x, t, b) | Term::Exists(x, t, b) | Term::Forall(x, t, b) => {
                Some((x, t, b))
            }
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x, _) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            _ => {
                if let Some((x, _, body)) = self.binder() {
                    bound.push(x.to_string());
                    body.collect_free(bound, out);
                    bound.pop();
                } else {
                    for c in self.children() {
                        c.collect_free(bound, out);
                    }
                }
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All variable names occurring anywhere, bound or free.
    pub fn all_var_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x, _) => {
                out.insert(x.clone());
            }
            _ => {
                if let Some((x, _, _)) = self.binder() {
                    out.insert(x.to_string());
                }
                for c in self.children() {
                    c.all_var_names(out);
                }
            }
        }
    }

    /// Capture-avoiding substitution of `value` for free occurrences of `name`.
    pub fn subst(&self, name: &str, value: &Term) -> Term {
        let fv = value.free_vars();
        self.subst_inner(name, value, &fv)
    }

    fn subst_inner(&self, name: &str, value: &Term, fv: &BTreeSet<String>) -> Term {
        match self {
            Term::Var(x, _) if x == name => value.clone(),
            Term::Var(..) => self.clone(),
            _ => {
                if let Some((x, ty, body)) = self.binder() {
                    if x == name {
                        return self.clone();
                    }
                    if !body.free_vars().contains(name) {
                        return self.clone();
                    }
                    let (x2, body2) = if fv.contains(x) {
                        let mut avoid = fv.clone();
                        body.all_var_names(&mut avoid);
                        avoid.insert(name.to_string());
                        let fresh = fresh_name(x, &avoid);
                        let renamed = body.subst(x, &Term::Var(fresh.clone(), ty.clone()));
                        (fresh, renamed)
                    } else {
                        (x.to_string(), body.clone())
                    };
                    let new_body = Box::new(body2.subst_inner(name, value, fv));
                    match self {
                        Term::Abs(..) => Term::Abs(x2, ty.clone(), new_body),
                        Term::Exists(..) => Term::Exists(x2, ty.clone(), new_body),
                        _ => Term::Forall(x2, ty.clone(), new_body),
                    }
                } else {
                    self.map_children(&mut |c| c.subst_inner(name, value, fv))
                }
            }
        }
    }

    /// Applies `f` to every type annotation (binders, variables, constants, threshold sorts).
    pub fn map_types(&self, f: &mut impl FnMut(&SemType) -> SemType) -> Term {
        match self {
            Term::Var(x, t) => Term::Var(x.clone(), f(t)),
            Term::Const(x, t) => Term::Const(x.clone(), f(t)),
            Term::Abs(x, t, b) => Term::Abs(x.clone(), f(t), Box::new(b.map_types(f))),
            Term::Exists(x, t, b) => Term::Exists(x.clone(), f(t), Box::new(b.map_types(f))),
            Term::Forall(x, t, b) => Term::Forall(x.clone(), f(t), Box::new(b.map_types(f))),
            Term::Arith(Arith::Threshold {
                adjective,
                class,
                sort,
            }) => {
                let sort = match f(&SemType::Degree(sort.clone())) {
                    SemType::Degree(s) => s,
                    _ => sort.clone(),
                };
                Term::Arith(Arith::Threshold {
                    adjective: adjective.clone(),
                    class: Box::new(class.map_types(f)),
                    sort,
                })
            }
            _ => self.map_children(&mut |c| c.map_types(f)),
        }
    }

    /// Splits `f a1 ... an` into head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Term::Top)
    }
}

/// A name derived from `base` that does not occur in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply of names")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::syntax::print_term(self))
    }
}
