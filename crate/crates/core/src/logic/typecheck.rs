use std::collections::{BTreeMap, HashMap};

use super::term::{Arith, Term};
use super::types::{SemType, Sort};
use super::LogicError;

/// Type inference for terms whose annotations may contain degree-sort variables.
///
/// Sort variables are solved by unification; everything else about a type is fixed by its
/// annotation, so inference is first-order and always terminates.
#[derive(Debug, Default, Clone)]
pub struct TypeChecker {
    subst: HashMap<u32, Sort>,
    next_var: u32,
}

impl TypeChecker {
    pub fn new() -> Self {
        Self::default()
    }

    /// A checker whose fresh sort variables will not collide with those already in `term`.
    pub fn for_term(term: &Term) -> Self {
        let mut max = 0;
        term.map_types(&mut |t| {
            t.map_sorts(&mut |s| {
                if let Sort::Var(v) = s {
                    max = max.max(*v + 1);
                }
                s.clone()
            })
        });
        TypeChecker {
            subst: HashMap::new(),
            next_var: max,
        }
    }

    pub fn fresh_sort(&mut self) -> Sort {
        let v = self.next_var;
        self.next_var += 1;
        Sort::Var(v)
    }

    pub fn resolve_sort(&self, s: &Sort) -> Sort {
        let mut cur = s.clone();
        while let Sort::Var(v) = cur {
            match self.subst.get(&v) {
                Some(next) => cur = next.clone(),
                None => return Sort::Var(v),
            }
        }
        cur
    }

    pub fn resolve(&self, ty: &SemType) -> SemType {
        ty.map_sorts(&mut |s| self.resolve_sort(s))
    }

    pub fn unify_sort(&mut self, a: &Sort, b: &Sort) -> Result<(), LogicError> {
        let (a, b) = (self.resolve_sort(a), self.resolve_sort(b));
        match (&a, &b) {
            _ if a == b => Ok(()),
            (Sort::Var(v), _) => {
                self.subst.insert(*v, b);
                Ok(())
            }
            (_, Sort::Var(v)) => {
                self.subst.insert(*v, a);
                Ok(())
            }
            _ => Err(LogicError::TypeMismatch {
                expected: SemType::Degree(a).to_string(),
                found: SemType::Degree(b).to_string(),
                context: "degree sorts differ".into(),
            }),
        }
    }

    pub fn unify(&mut self, a: &SemType, b: &SemType) -> Result<(), LogicError> {
        match (a, b) {
            (SemType::Entity, SemType::Entity) | (SemType::Prop, SemType::Prop) => Ok(()),
            (SemType::Degree(x), SemType::Degree(y)) => self.unify_sort(x, y),
            (SemType::Fun(a1, r1), SemType::Fun(a2, r2)) => {
                self.unify(a1, a2)?;
                self.unify(r1, r2)
            }
            _ => Err(LogicError::TypeMismatch {
                expected: self.resolve(a).to_string(),
                found: self.resolve(b).to_string(),
                context: "incompatible types".into(),
            }),
        }
    }

    fn expect(&mut self, want: &SemType, got: &SemType, ctx: &Term) -> Result<(), LogicError> {
        self.unify(want, got).map_err(|_| LogicError::TypeMismatch {
            expected: self.resolve(want).to_string(),
            found: self.resolve(got).to_string(),
            context: truncate(&ctx.to_string()),
        })
    }

    /// Infers the type of `term`; `env` holds the types of free variables.
    pub fn infer(
        &mut self,
        term: &Term,
        env: &mut Vec<(String, SemType)>,
    ) -> Result<SemType, LogicError> {
        match term {
            Term::Var(x, ann) => {
                let bound = env
                    .iter()
                    .rev()
                    .find(|(n, _)| n == x)
                    .map(|(_, t)| t.clone())
                    .ok_or_else(|| LogicError::UnboundVariable(x.clone()))?;
                self.expect(&bound, ann, term)?;
                Ok(bound)
            }
            Term::Const(_, ty) => Ok(ty.clone()),
            Term::Abs(x, ty, body) => {
                env.push((x.clone(), ty.clone()));
                let r = self.infer(body, env);
                env.pop();
                Ok(SemType::fun(ty.clone(), r?))
            }
            Term::App(f, a) => {
                let ft = self.infer(f, env)?;
                let at = self.infer(a, env)?;
                match ft {
                    SemType::Fun(p, r) => {
                        self.expect(&p, &at, term)?;
                        Ok(*r)
                    }
                    other => Err(LogicError::TypeMismatch {
                        expected: format!("({} -> ...)", self.resolve(&at)),
                        found: self.resolve(&other).to_string(),
                        context: truncate(&term.to_string()),
                    }),
                }
            }
            Term::Top | Term::Bot => Ok(SemType::Prop),
            Term::Not(a) => {
                let t = self.infer(a, env)?;
                self.expect(&SemType::Prop, &t, term)?;
                Ok(SemType::Prop)
            }
            Term::And(a, b) | Term::Or(a, b) | Term::Imp(a, b) => {
                for c in [a, b] {
                    let t = self.infer(c, env)?;
                    self.expect(&SemType::Prop, &t, term)?;
                }
                Ok(SemType::Prop)
            }
            Term::Exists(x, ty, body) | Term::Forall(x, ty, body) => {
                if !matches!(ty, SemType::Entity | SemType::Degree(_)) {
                    return Err(LogicError::TypeMismatch {
                        expected: "e or d".into(),
                        found: ty.to_string(),
                        context: format!("quantified variable {x}"),
                    });
                }
                env.push((x.clone(), ty.clone()));
                let r = self.infer(body, env);
                env.pop();
                self.expect(&SemType::Prop, &r?, term)?;
                Ok(SemType::Prop)
            }
            Term::Cmp(_, a, b) => {
                let s = self.fresh_sort();
                for c in [a, b] {
                    let t = self.infer(c, env)?;
                    self.expect(&SemType::Degree(s.clone()), &t, term)?;
                }
                Ok(SemType::Prop)
            }
            Term::Arith(ar) => self.infer_arith(term, ar, env),
        }
    }

    fn infer_arith(
        &mut self,
        term: &Term,
        ar: &Arith,
        env: &mut Vec<(String, SemType)>,
    ) -> Result<SemType, LogicError> {
        match ar {
            Arith::Int(_) => Ok(SemType::Degree(Sort::Count)),
            Arith::Rat { unit: Some(u), .. } => Ok(SemType::Degree(Sort::measure(&u.dimension))),
            Arith::Rat { unit: None, .. } => Ok(SemType::Degree(self.fresh_sort())),
            Arith::Threshold { class, sort, .. } => {
                let t = self.infer(class, env)?;
                self.expect(&SemType::Entity, &t, term)?;
                Ok(SemType::Degree(sort.clone()))
            }
            Arith::Sum(a, b) | Arith::Diff(a, b) => {
                let s = self.fresh_sort();
                for c in [a, b] {
                    let t = self.infer(c, env)?;
                    self.expect(&SemType::Degree(s.clone()), &t, term)?;
                }
                Ok(SemType::Degree(s))
            }
            Arith::Scaled { amount, unit } => {
                let t = self.infer(amount, env)?;
                self.expect(&SemType::Degree(Sort::Count), &t, term)?;
                Ok(SemType::Degree(Sort::measure(&unit.dimension)))
            }
        }
    }

    /// Replaces solved sort variables throughout `term`'s annotations.
    pub fn apply(&self, term: &Term) -> Term {
        term.map_types(&mut |t| self.resolve(t))
    }
}

fn truncate(s: &str) -> String {
    if s.chars().count() > 120 {
        let mut t: String = s.chars().take(117).collect();
        t.push_str("...");
        t
    } else {
        s.to_string()
    }
}

/// Principal type of `term` given the types of its free variables.
pub fn type_check(term: &Term, env: &BTreeMap<String, SemType>) -> Result<SemType, LogicError> {
    let mut tc = TypeChecker::for_term(term);
    let mut scope: Vec<(String, SemType)> = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    let ty = tc.infer(term, &mut scope)?;
    Ok(tc.resolve(&ty))
}

/// Infers `term` and writes the solved sorts back into its annotations.
pub fn resolve_sorts(term: &Term) -> Result<(Term, SemType), LogicError> {
    let mut tc = TypeChecker::for_term(term);
    let ty = tc.infer(term, &mut Vec::new())?;
    let ty = tc.resolve(&ty);
    Ok((tc.apply(term), ty))
}
