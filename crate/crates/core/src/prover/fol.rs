//! Negation normal form, Skolemization and clause form.

use std::collections::BTreeSet;
use std::fmt;

use crate::logic::{print_term, Arith, Rel, SemType, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// Predicate name, its type, arguments.
    Pred(String, SemType, Vec<Term>),
    Cmp(Rel, Term, Term),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lit {
    pub pos: bool,
    pub atom: Atom,
}

/// A disjunction of literals, implicitly universally closed over `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub lits: Vec<Lit>,
    pub vars: Vec<(String, SemType)>,
    /// Index of the input formula this clause came from.
    pub source: usize,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pred(p, _, args) => {
                write!(f, "({p}")?;
                for a in args {
                    write!(f, " {}", print_term(a))?;
                }
                write!(f, ")")
            }
            Atom::Cmp(r, a, b) => write!(f, "({} {} {})", r.symbol(), print_term(a), print_term(b)),
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pos {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "(not {})", self.atom)
        }
    }
}

/// Negation normal form over ∧, ∨, ∀, ∃ and literals; implications are eliminated.
pub fn nnf(t: &Term, positive: bool) -> Term {
    use Term::*;
    match (t, positive) {
        (Top, true) | (Bot, false) => Top,
        (Top, false) | (Bot, true) => Bot,
        (Not(a), p) => nnf(a, !p),
        (And(a, b), true) => And(Box::new(nnf(a, true)), Box::new(nnf(b, true))),
        (And(a, b), false) => Or(Box::new(nnf(a, false)), Box::new(nnf(b, false))),
        (Or(a, b), true) => Or(Box::new(nnf(a, true)), Box::new(nnf(b, true))),
        (Or(a, b), false) => And(Box::new(nnf(a, false)), Box::new(nnf(b, false))),
        (Imp(a, b), true) => Or(Box::new(nnf(a, false)), Box::new(nnf(b, true))),
        (Imp(a, b), false) => And(Box::new(nnf(a, true)), Box::new(nnf(b, false))),
        (Exists(x, ty, b), true) => Exists(x.clone(), ty.clone(), Box::new(nnf(b, true))),
        (Exists(x, ty, b), false) => Forall(x.clone(), ty.clone(), Box::new(nnf(b, false))),
        (Forall(x, ty, b), true) => Forall(x.clone(), ty.clone(), Box::new(nnf(b, true))),
        (Forall(x, ty, b), false) => Exists(x.clone(), ty.clone(), Box::new(nnf(b, false))),
        (Cmp(r, a, b), false) => match r.negated() {
            Some(n) => Cmp(n, a.clone(), b.clone()),
            None => Not(Box::new(t.clone())),
        },
        (atom, true) => atom.clone(),
        (atom, false) => Not(Box::new(atom.clone())),
    }
}

/// Generates Skolem symbols `sk1, sk2, ...` that avoid the names already in use.
pub struct Skolemizer {
    next: usize,
    taken: BTreeSet<String>,
}

impl Skolemizer {
    pub fn new<'a, I: IntoIterator<Item = &'a Term>>(formulas: I) -> Self {
        let mut taken = BTreeSet::new();
        for f in formulas {
            let mut cs = BTreeSet::new();
            crate::logic::syntax::constants(f, &mut cs);
            taken.extend(cs.into_iter().map(|(n, _)| n));
        }
        Skolemizer { next: 1, taken }
    }

    fn fresh(&mut self) -> String {
        loop {
            let n = format!("sk{}", self.next);
            self.next += 1;
            if !self.taken.contains(&n) {
                self.taken.insert(n.clone());
                return n;
            }
        }
    }

    /// Replaces existentials of an NNF formula by Skolem terms over the enclosing
    /// universal variables that the existential's body mentions. Universal binders are
    /// renamed apart and dropped; the returned list records them.
    pub fn skolemize(&mut self, t: &Term, univ: &mut Vec<(String, SemType)>, all: &mut Vec<(String, SemType)>) -> Term {
        match t {
            Term::Forall(x, ty, b) => {
                let name = format!("{x}_{}", all.len());
                let body = b.subst(x, &Term::Var(name.clone(), ty.clone()));
                univ.push((name.clone(), ty.clone()));
                all.push((name, ty.clone()));
                let out = self.skolemize(&body, univ, all);
                univ.pop();
                out
            }
            Term::Exists(x, ty, b) => {
                let fv = t.free_vars();
                let deps: Vec<(String, SemType)> = univ.iter().filter(|(v, _)| fv.contains(v)).cloned().collect();
                let sk = self.fresh();
                let sk_ty = SemType::curried(deps.iter().map(|(_, t)| t.clone()), ty.clone());
                let head = Term::Const(sk, sk_ty);
                let value = deps
                    .iter()
                    .fold(head, |f, (v, vt)| Term::App(Box::new(f), Box::new(Term::Var(v.clone(), vt.clone()))));
                self.skolemize(&b.subst(x, &value), univ, all)
            }
            Term::And(a, b) => Term::And(
                Box::new(self.skolemize(a, univ, all)),
                Box::new(self.skolemize(b, univ, all)),
            ),
            Term::Or(a, b) => Term::Or(
                Box::new(self.skolemize(a, univ, all)),
                Box::new(self.skolemize(b, univ, all)),
            ),
            other => other.clone(),
        }
    }
}

fn to_lit(t: &Term) -> Option<Lit> {
    let (pos, inner) = match t {
        Term::Not(a) => (false, a.as_ref()),
        other => (true, other),
    };
    let atom = match inner {
        Term::Cmp(r, a, b) => Atom::Cmp(*r, (**a).clone(), (**b).clone()),
        _ => {
            let (head, args) = inner.spine();
            match head {
                Term::Const(p, ty) => Atom::Pred(p.clone(), ty.clone(), args.into_iter().cloned().collect()),
                _ => return None,
            }
        }
    };
    Some(Lit { pos, atom })
}

/// CNF of a quantifier-free NNF formula as a list of literal sets; `None` for a
/// literal that is not first-order.
fn cnf(t: &Term) -> Option<Vec<Vec<Lit>>> {
    match t {
        Term::Top => Some(vec![]),
        Term::Bot => Some(vec![vec![]]),
        Term::And(a, b) => {
            let mut l = cnf(a)?;
            l.extend(cnf(b)?);
            Some(l)
        }
        Term::Or(a, b) => {
            let l = cnf(a)?;
            let r = cnf(b)?;
            let mut out = Vec::with_capacity(l.len() * r.len());
            for x in &l {
                for y in &r {
                    let mut c = x.clone();
                    for lit in y {
                        if !c.contains(lit) {
                            c.push(lit.clone());
                        }
                    }
                    out.push(c);
                }
            }
            Some(out)
        }
        other => Some(vec![vec![to_lit(other)?]]),
    }
}

fn complementary(c: &[Lit]) -> bool {
    c.iter()
        .any(|l| c.iter().any(|m| l.pos != m.pos && l.atom == m.atom))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("formula {0} is not first-order")]
pub struct NotFirstOrder(pub usize);

/// Clause form of a list of closed formulas; tautological clauses are dropped.
pub fn clausify(formulas: &[Term]) -> Result<Vec<Clause>, NotFirstOrder> {
    let mut sk = Skolemizer::new(formulas.iter());
    let mut out = Vec::new();
    for (i, f) in formulas.iter().enumerate() {
        let n = nnf(f, true);
        let mut all = Vec::new();
        let s = sk.skolemize(&n, &mut Vec::new(), &mut all);
        let s = crate::logic::fold_constants(&s);
        for lits in cnf(&s).ok_or(NotFirstOrder(i))? {
            if complementary(&lits) {
                continue;
            }
            let mut used = BTreeSet::new();
            for l in &lits {
                match &l.atom {
                    Atom::Pred(_, _, args) => args.iter().for_each(|a| used.extend(a.free_vars())),
                    Atom::Cmp(_, a, b) => {
                        used.extend(a.free_vars());
                        used.extend(b.free_vars());
                    }
                }
            }
            let vars = all.iter().filter(|(v, _)| used.contains(v)).cloned().collect();
            out.push(Clause { lits, vars, source: i });
        }
    }
    Ok(out)
}

/// True when a term mentions no variables.
pub fn is_ground(t: &Term) -> bool {
    t.free_vars().is_empty()
}

/// Nesting depth of function applications in a term.
pub fn term_depth(t: &Term) -> usize {
    match t {
        Term::App(..) => {
            let (_, args) = t.spine();
            1 + args.iter().map(|a| term_depth(a)).max().unwrap_or(0)
        }
        Term::Arith(Arith::Threshold { class, .. }) => 1 + term_depth(class),
        Term::Arith(Arith::Sum(a, b) | Arith::Diff(a, b)) => term_depth(a).max(term_depth(b)),
        _ => 0,
    }
}
