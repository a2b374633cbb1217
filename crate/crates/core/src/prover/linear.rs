//! Linear arithmetic over rationals with integer tightening: Fourier–Motzkin elimination
//! that records how each contradiction was derived, and a checker for such derivations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::logic::{print_term, Arith, Rational, Rel, SemType, Sort, Term};

/// `Σ coeff·var + constant`, variables named by the canonical text of a ground term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinExpr {
    pub coeffs: BTreeMap<String, Rational>,
    pub constant: Rational,
}

impl LinExpr {
    pub fn constant(c: Rational) -> Self {
        LinExpr {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), Rational::one());
        LinExpr {
            coeffs,
            constant: Rational::zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, v: &str) -> Rational {
        self.coeffs.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_scaled(&self, other: &LinExpr, k: &Rational) -> LinExpr {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            let e = out.coeffs.entry(v.clone()).or_insert_with(Rational::zero);
            *e += c * k;
            if e.is_zero() {
                out.coeffs.remove(v);
            }
        }
        out.constant += &other.constant * k;
        out
    }

    pub fn scale(&self, k: &Rational) -> LinExpr {
        LinExpr::constant(Rational::zero()).add_scaled(self, k)
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        self.add_scaled(other, &-Rational::one())
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, c) in &self.coeffs {
            write!(f, "{c}*{v} + ")?;
        }
        write!(f, "{}", self.constant)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// `e <= 0`
    Le,
    /// `e < 0`
    Lt,
    /// `e = 0`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub expr: LinExpr,
    pub kind: Kind,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            Kind::Le => "<=",
            Kind::Lt => "<",
            Kind::Eq => "=",
        };
        write!(f, "{} {op} 0", self.expr)
    }
}

impl Constraint {
    /// Scales so that the first coefficient has magnitude one (equalities: is one).
    pub fn canonical(mut self) -> Constraint {
        if let Some(lead) = self.expr.coeffs.values().next().cloned() {
            let k = match self.kind {
                Kind::Eq => lead.recip(),
                _ => lead.abs().recip(),
            };
            self.expr = self.expr.scale(&k);
        }
        self
    }

    /// Truth value of a variable-free constraint.
    pub fn constant_truth(&self) -> Option<bool> {
        if !self.expr.is_constant() {
            return None;
        }
        let c = &self.expr.constant;
        Some(match self.kind {
            Kind::Le => !c.is_positive(),
            Kind::Lt => c.is_negative(),
            Kind::Eq => c.is_zero(),
        })
    }

    /// The complement over a total order, for inequalities.
    pub fn negate(&self) -> Option<Constraint> {
        let neg = self.expr.scale(&-Rational::one());
        match self.kind {
            Kind::Le => Some(Constraint { expr: neg, kind: Kind::Lt }),
            Kind::Lt => Some(Constraint { expr: neg, kind: Kind::Le }),
            Kind::Eq => None,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.expr.coeffs.keys()
    }
}

/// How a constraint follows from the inputs of a theory check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Derivation {
    Input(usize),
    /// Nonnegative combination; equalities may take any sign.
    Combine(Vec<(String, Derivation)>),
    /// Rounding of a constraint over integer-valued variables.
    Tighten(Box<Derivation>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid arithmetic derivation: {0}")]
pub struct BadDerivation(pub String);

fn parse_q(s: &str) -> Result<Rational, BadDerivation> {
    crate::logic::syntax::parse_rational(s).ok_or_else(|| BadDerivation(format!("bad multiplier {s}")))
}

/// Integer tightening: `e < 0` becomes `e + 1 <= 0` and coefficients are divided by their
/// gcd with the constant rounded up. `None` unless all variables are integral.
pub fn tighten(c: &Constraint, is_int: &dyn Fn(&str) -> bool) -> Option<Constraint> {
    if c.kind == Kind::Eq || c.expr.is_constant() || !c.vars().all(|v| is_int(v)) {
        return None;
    }
    let denom_lcm = c
        .expr
        .coeffs
        .values()
        .chain(std::iter::once(&c.expr.constant))
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let e = c.expr.scale(&Rational::from_integer(denom_lcm));
    let (mut e, kind) = (e, c.kind);
    if kind == Kind::Lt {
        e.constant += Rational::one();
    }
    let g = e
        .coeffs
        .values()
        .fold(BigInt::zero(), |acc, q| acc.gcd(q.numer()));
    let g = Rational::from_integer(g);
    let mut out = e.scale(&g.recip());
    out.constant = out.constant.ceil();
    Some(Constraint { expr: out, kind: Kind::Le })
}

fn combine(parts: &[(Rational, &Constraint)]) -> Result<Constraint, BadDerivation> {
    let mut expr = LinExpr::constant(Rational::zero());
    let mut strict = false;
    let mut all_eq = true;
    for (k, c) in parts {
        if c.kind != Kind::Eq {
            all_eq = false;
            if k.is_negative() {
                return Err(BadDerivation(format!("negative multiplier on {c}")));
            }
            if c.kind == Kind::Lt && k.is_positive() {
                strict = true;
            }
        }
        expr = expr.add_scaled(&c.expr, k);
    }
    let kind = if all_eq {
        Kind::Eq
    } else if strict {
        Kind::Lt
    } else {
        Kind::Le
    };
    Ok(Constraint { expr, kind })
}

/// Replays a derivation against its inputs.
pub fn replay(
    d: &Derivation,
    inputs: &[Constraint],
    is_int: &dyn Fn(&str) -> bool,
) -> Result<Constraint, BadDerivation> {
    match d {
        Derivation::Input(i) => inputs
            .get(*i)
            .cloned()
            .ok_or_else(|| BadDerivation(format!("no input {i}"))),
        Derivation::Combine(parts) => {
            let mut done = Vec::new();
            for (k, sub) in parts {
                done.push((parse_q(k)?, replay(sub, inputs, is_int)?));
            }
            let refs: Vec<(Rational, &Constraint)> = done.iter().map(|(k, c)| (k.clone(), c)).collect();
            combine(&refs)
        }
        Derivation::Tighten(sub) => {
            let c = replay(sub, inputs, is_int)?;
            tighten(&c, is_int).ok_or_else(|| BadDerivation(format!("cannot tighten {c}")))
        }
    }
}

/// Checks that a derivation ends in a false variable-free constraint.
pub fn check_refutation(
    d: &Derivation,
    inputs: &[Constraint],
    is_int: &dyn Fn(&str) -> bool,
) -> Result<(), BadDerivation> {
    let c = replay(d, inputs, is_int)?;
    match c.constant_truth() {
        Some(false) => Ok(()),
        _ => Err(BadDerivation(format!("derivation ends in {c}, not a contradiction"))),
    }
}

const MAX_CONSTRAINTS: usize = 4000;

/// Searches for a refutation of a conjunction of constraints. `None` means the conjunction
/// is satisfiable over the rationals after tightening (or the search gave up).
pub fn refute(inputs: &[Constraint], is_int: &dyn Fn(&str) -> bool) -> Option<Derivation> {
    let q = |r: &Rational| crate::logic::syntax::print_rational(r);
    let mut rows: Vec<(Constraint, Derivation)> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |rows: &mut Vec<(Constraint, Derivation)>, c: Constraint, d: Derivation| -> Option<Derivation> {
        let (c, d) = match tighten(&c, is_int) {
            Some(t) if t != c => (t, Derivation::Tighten(Box::new(d))),
            _ => (c, d),
        };
        match c.constant_truth() {
            Some(false) => return Some(d),
            Some(true) => return None,
            None => {}
        }
        if seen.insert(c.clone().canonical()) {
            rows.push((c, d));
        }
        None
    };
    for (i, c) in inputs.iter().enumerate() {
        if let Some(d) = push(&mut rows, c.clone(), Derivation::Input(i)) {
            return Some(d);
        }
    }
    loop {
        let vars: BTreeSet<String> = rows.iter().flat_map(|(c, _)| c.vars().cloned()).collect();
        let var = vars.iter().min_by_key(|v| {
            let eq = rows.iter().any(|(c, _)| c.kind == Kind::Eq && !c.expr.coeff(v).is_zero());
            let pos = rows.iter().filter(|(c, _)| c.expr.coeff(v).is_positive()).count();
            let neg = rows.iter().filter(|(c, _)| c.expr.coeff(v).is_negative()).count();
            (!eq, pos * neg)
        })?;
        let (with, without): (Vec<_>, Vec<_>) = rows.into_iter().partition(|(c, _)| !c.expr.coeff(var).is_zero());
        rows = without;
        if let Some(pivot) = with.iter().position(|(c, _)| c.kind == Kind::Eq) {
            let (pc, pd) = &with[pivot];
            let a = pc.expr.coeff(var);
            for (j, (c, d)) in with.iter().enumerate() {
                if j == pivot {
                    continue;
                }
                let k = -(c.expr.coeff(var) / &a);
                let one = Rational::one();
                let res = combine(&[(one.clone(), c), (k.clone(), pc)]).ok()?;
                let deriv = Derivation::Combine(vec![(q(&one), d.clone()), (q(&k), pd.clone())]);
                if let Some(r) = push(&mut rows, res, deriv) {
                    return Some(r);
                }
            }
        } else {
            let pos: Vec<_> = with.iter().filter(|(c, _)| c.expr.coeff(var).is_positive()).collect();
            let neg: Vec<_> = with.iter().filter(|(c, _)| c.expr.coeff(var).is_negative()).collect();
            for (pc, pd) in &pos {
                for (nc, nd) in &neg {
                    let kp = -nc.expr.coeff(var);
                    let kn = pc.expr.coeff(var);
                    let res = combine(&[(kp.clone(), pc), (kn.clone(), nc)]).ok()?;
                    let deriv = Derivation::Combine(vec![(q(&kp), pd.clone()), (q(&kn), nd.clone())]);
                    if let Some(r) = push(&mut rows, res, deriv) {
                        return Some(r);
                    }
                }
            }
        }
        if rows.len() > MAX_CONSTRAINTS {
            return None;
        }
    }
}

/// Sort of a ground degree-valued term, read off its annotations.
pub fn degree_sort(t: &Term) -> Option<Sort> {
    match t {
        Term::Arith(Arith::Int(_)) => Some(Sort::Count),
        Term::Arith(Arith::Rat { unit: Some(u), .. }) => Some(Sort::measure(&u.dimension)),
        Term::Arith(Arith::Threshold { sort, .. }) => Some(sort.clone()),
        Term::Arith(Arith::Sum(a, b) | Arith::Diff(a, b)) => degree_sort(a).or_else(|| degree_sort(b)),
        Term::Var(_, ty) | Term::Const(_, ty) => ty.sort().cloned(),
        Term::App(..) => {
            let (head, args) = t.spine();
            match head {
                Term::Const(_, ty) | Term::Var(_, ty) => {
                    let (params, res) = ty.uncurry();
                    if params.len() == args.len() {
                        res.sort().cloned()
                    } else {
                        None
                    }
                }
                _ => None,
            }
        }
        _ => None,
    }
}

/// Non-arithmetic degree terms met while linearizing, by their canonical text.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    pub sorts: BTreeMap<String, Sort>,
    pub terms: BTreeMap<String, Term>,
}

impl Registry {
    pub fn is_int(&self, key: &str) -> bool {
        matches!(self.sorts.get(key), Some(Sort::Count))
    }
}

/// Linear form of a degree term; non-arithmetic subterms become variables.
pub fn linearize(t: &Term, reg: &mut Registry) -> LinExpr {
    match t {
        Term::Arith(Arith::Int(n)) => LinExpr::constant(Rational::from_integer(n.clone())),
        Term::Arith(Arith::Rat { value, .. }) => LinExpr::constant(value.clone()),
        Term::Arith(Arith::Sum(a, b)) => linearize(a, reg).add_scaled(&linearize(b, reg), &Rational::one()),
        Term::Arith(Arith::Diff(a, b)) => linearize(a, reg).sub(&linearize(b, reg)),
        other => {
            let key = print_term(other);
            if let Some(s) = degree_sort(other) {
                reg.sorts.entry(key.clone()).or_insert(s);
            }
            reg.terms.entry(key.clone()).or_insert_with(|| other.clone());
            LinExpr::var(&key)
        }
    }
}

/// Canonical constraint for `a rel b`.
pub fn comparison(rel: Rel, a: &Term, b: &Term, reg: &mut Registry) -> Constraint {
    let (la, lb) = (linearize(a, reg), linearize(b, reg));
    let (expr, kind) = match rel {
        Rel::Lt => (la.sub(&lb), Kind::Lt),
        Rel::Le => (la.sub(&lb), Kind::Le),
        Rel::Eq => (la.sub(&lb), Kind::Eq),
        Rel::Gt => (lb.sub(&la), Kind::Lt),
        Rel::Ge => (lb.sub(&la), Kind::Le),
    };
    Constraint { expr, kind }.canonical()
}

/// Back from a linear form to a degree term of the given sort.
pub fn to_term(e: &LinExpr, sort: &Sort, atoms: &BTreeMap<String, Term>) -> Term {
    // literals are unitless rationals whatever the sort
    let lit = |q: &Rational| -> Term {
        Term::Arith(Arith::Rat {
            value: q.clone(),
            unit: None,
        })
    };
    let mut acc: Option<Term> = None;
    for (v, c) in &e.coeffs {
        let base = atoms.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone(), SemType::Degree(sort.clone())));
        let times = c.abs();
        let mut piece = base.clone();
        let mut n = Rational::one();
        while n < times {
            piece = Term::Arith(Arith::Sum(Box::new(piece), Box::new(base.clone())));
            n += Rational::one();
        }
        acc = Some(match acc {
            None if c.is_negative() => Term::Arith(Arith::Diff(Box::new(lit(&Rational::zero())), Box::new(piece))),
            None => piece,
            Some(a) if c.is_negative() => Term::Arith(Arith::Diff(Box::new(a), Box::new(piece))),
            Some(a) => Term::Arith(Arith::Sum(Box::new(a), Box::new(piece))),
        });
    }
    match acc {
        None => lit(&e.constant),
        Some(a) if e.constant.is_zero() => a,
        Some(a) if e.constant.is_negative() => {
            Term::Arith(Arith::Diff(Box::new(a), Box::new(lit(&-e.constant.clone()))))
        }
        Some(a) => Term::Arith(Arith::Sum(Box::new(a), Box::new(lit(&e.constant)))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn c(terms: &[(&str, i64)], k: i64, kind: Kind) -> Constraint {
        let mut e = LinExpr::constant(q(k));
        for (v, a) in terms {
            e = e.add_scaled(&LinExpr::var(v), &q(*a));
        }
        Constraint { expr: e, kind }
    }

    #[test]
    fn rational_refutation() {
        // x < y, y < z, z <= x
        let inputs = vec![
            c(&[("x", 1), ("y", -1)], 0, Kind::Lt),
            c(&[("y", 1), ("z", -1)], 0, Kind::Lt),
            c(&[("z", 1), ("x", -1)], 0, Kind::Le),
        ];
        let d = refute(&inputs, &|_| false).expect("refuted");
        check_refutation(&d, &inputs, &|_| false).unwrap();
    }

    #[test]
    fn integer_gap_needs_tightening() {
        // 3 < n, n < 4 is satisfiable over the rationals only
        let inputs = vec![c(&[("n", -1)], 3, Kind::Lt), c(&[("n", 1)], -4, Kind::Lt)];
        assert!(refute(&inputs, &|_| false).is_none());
        let d = refute(&inputs, &|_| true).expect("refuted over integers");
        check_refutation(&d, &inputs, &|_| true).unwrap();
        assert!(check_refutation(&d, &inputs, &|_| false).is_err());
    }

    #[test]
    fn equalities_substitute() {
        // x = y + 2, y >= 0, x < 1
        let inputs = vec![
            c(&[("x", 1), ("y", -1)], -2, Kind::Eq),
            c(&[("y", -1)], 0, Kind::Le),
            c(&[("x", 1)], -1, Kind::Lt),
        ];
        let d = refute(&inputs, &|_| false).unwrap();
        check_refutation(&d, &inputs, &|_| false).unwrap();
    }

    #[test]
    fn satisfiable_has_no_refutation() {
        let inputs = vec![c(&[("x", 1), ("y", -1)], 0, Kind::Lt), c(&[("y", 1)], -10, Kind::Le)];
        assert!(refute(&inputs, &|_| true).is_none());
    }

    #[test]
    fn tampered_multiplier_rejected() {
        let inputs = vec![c(&[("x", 1)], 0, Kind::Lt), c(&[("x", -1)], 0, Kind::Le)];
        let d = refute(&inputs, &|_| false).unwrap();
        check_refutation(&d, &inputs, &|_| false).unwrap();
        let bad = Derivation::Combine(vec![("-1".into(), Derivation::Input(0)), ("1".into(), Derivation::Input(1))]);
        assert!(check_refutation(&bad, &inputs, &|_| false).is_err());
    }

    #[test]
    fn canonical_forms() {
        let a = c(&[("x", 2), ("y", -4)], 6, Kind::Le).canonical();
        assert_eq!(a, c(&[("x", 1), ("y", -2)], 3, Kind::Le));
        let b = c(&[("x", -2)], 6, Kind::Eq).canonical();
        assert_eq!(b, c(&[("x", 1)], -3, Kind::Eq));
    }
}
