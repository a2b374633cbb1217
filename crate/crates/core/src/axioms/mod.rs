//! Per-problem instances of the comparative axiom schemas.

pub mod kb;

use std::collections::BTreeMap;
use std::fmt;

use crate::logic::{atom, cmp, forall, imp, not, and, Formula, Rel, SemType, Sort, Term};

pub use kb::LexicalKb;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AxiomError {
    #[error("predicate `{0}` is used with inconsistent sorts")]
    SortClash(String),
    #[error("knowledge base line {line}: {msg}")]
    KbFormat { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

/// Predicate name to its full type.
pub type Signature = BTreeMap<String, SemType>;

fn collect(t: &Term, sig: &mut Signature) -> Result<(), AxiomError> {
    if let Term::Const(name, ty) = t {
        if matches!(ty, SemType::Fun(..)) && *ty.uncurry().1 == SemType::Prop {
            match sig.get(name) {
                Some(prev) if prev != ty => return Err(AxiomError::SortClash(name.clone())),
                Some(_) => {}
                None => {
                    sig.insert(name.clone(), ty.clone());
                }
            }
        }
    }
    for c in t.children() {
        collect(c, sig)?;
    }
    Ok(())
}

/// Every predicate symbol with its type; one symbol used at two types is a clash.
pub fn collect_signature<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> Result<Signature, AxiomError> {
    let mut sig = Signature::new();
    for f in formulas {
        collect(f, &mut sig)?;
    }
    Ok(sig)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Schema {
    Closure,
    Antonym,
    ManyClosure,
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schema::Closure => "CLOSURE",
            Schema::Antonym => "ANTONYM",
            Schema::ManyClosure => "MANY-CLOSURE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub schema: Schema,
    pub params: Vec<String>,
    pub formula: Formula,
}

impl Axiom {
    /// Stable identifier, e.g. `closure_tall`.
    pub fn label(&self) -> String {
        let base = self.schema.to_string().to_lowercase().replace('-', "_");
        format!("{base}_{}", self.params.join("_"))
    }
}

/// Degree sort of a gradable predicate `e -> d:S -> t`.
pub fn gradable_sort(ty: &SemType) -> Option<&Sort> {
    match ty.uncurry() {
        (args, SemType::Prop) if args.len() == 2 && *args[0] == SemType::Entity => args[1].sort(),
        _ => None,
    }
}

fn closure(pred: &str, sort: &Sort) -> Formula {
    let d = SemType::Degree(sort.clone());
    let x = Term::Var("x".into(), SemType::Entity);
    let d1 = Term::Var("d1".into(), d.clone());
    let d2 = Term::Var("d2".into(), d.clone());
    forall(
        "x",
        SemType::Entity,
        forall(
            "d1",
            d.clone(),
            forall(
                "d2",
                d.clone(),
                imp(
                    and(
                        atom(pred, vec![(x.clone(), SemType::Entity), (d1.clone(), d.clone())]),
                        cmp(Rel::Le, d2.clone(), d1),
                    ),
                    atom(pred, vec![(x, SemType::Entity), (d2, d)]),
                ),
            ),
        ),
    )
}

fn antonym(positive: &str, negative: &str, sort: &Sort) -> Formula {
    let d = SemType::Degree(sort.clone());
    let x = Term::Var("x".into(), SemType::Entity);
    let dv = Term::Var("d".into(), d.clone());
    let args = || vec![(x.clone(), SemType::Entity), (dv.clone(), d.clone())];
    let neg = atom(negative, args());
    let pos = atom(positive, args());
    forall(
        "x",
        SemType::Entity,
        forall(
            "d",
            d.clone(),
            and(imp(neg.clone(), not(pos.clone())), imp(not(pos), neg)),
        ),
    )
}

/// Schema instances for the gradable predicates of a signature.
pub fn instantiate_named(sig: &Signature, kb: &LexicalKb) -> Vec<Axiom> {
    let mut out: Vec<Axiom> = Vec::new();
    let mut closed: Vec<String> = Vec::new();
    let mut add_closure = |pred: &str, sort: &Sort, out: &mut Vec<Axiom>| {
        if closed.iter().any(|p| p == pred) {
            return;
        }
        closed.push(pred.to_string());
        let schema = if pred == "many" { Schema::ManyClosure } else { Schema::Closure };
        out.push(Axiom {
            schema,
            params: vec![pred.to_string()],
            formula: closure(pred, sort),
        });
    };
    for (pred, ty) in sig {
        let Some(sort) = gradable_sort(ty) else { continue };
        if !kb.is_negative(pred) {
            add_closure(pred, sort, &mut out);
            continue;
        }
        let partners: Vec<&str> = {
            let all: Vec<&str> = kb
                .antonym_pairs()
                .iter()
                .filter(|(_, q)| q == pred)
                .map(|(p, _)| p.as_str())
                .collect();
            let present: Vec<&str> = all.iter().copied().filter(|p| sig.contains_key(*p)).collect();
            if present.is_empty() {
                all.into_iter().take(1).collect()
            } else {
                present
            }
        };
        for p in partners {
            add_closure(p, sort, &mut out);
            out.push(Axiom {
                schema: Schema::Antonym,
                params: vec![p.to_string(), pred.clone()],
                formula: antonym(p, pred, sort),
            });
        }
    }
    out.sort_by(|a, b| (a.schema, &a.params).cmp(&(b.schema, &b.params)));
    out
}

pub fn instantiate(sig: &Signature, kb: &LexicalKb) -> Vec<Formula> {
    instantiate_named(sig, kb).into_iter().map(|a| a.formula).collect()
}
