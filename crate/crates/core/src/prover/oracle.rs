//! Exhaustive model checking over a small entity domain and finite degree grids.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::logic::{Arith, Rational, SemType, Sort, Term};

use super::{ProofTask, ProverError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub entities: usize,
    /// Degree values per sort; quantifiers over degrees range over these.
    pub grids: BTreeMap<Sort, Vec<Rational>>,
    /// Maximum number of interpretations to enumerate.
    pub cap: u128,
}

impl OracleConfig {
    pub fn new(entities: usize) -> Self {
        OracleConfig {
            entities,
            grids: BTreeMap::new(),
            cap: 1 << 22,
        }
    }

    pub fn grid(mut self, sort: Sort, values: Vec<Rational>) -> Self {
        let mut v = values;
        v.sort();
        v.dedup();
        self.grids.insert(sort, v);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleVerdict {
    Entailed,
    NotEntailed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Val {
    Ent(usize),
    Deg(Rational),
}

/// A symbol and the slots of the interpretation vector it occupies.
struct Symbol {
    params: Vec<SemType>,
    result: SemType,
    /// First slot; one slot per argument tuple.
    offset: usize,
}

struct Model {
    symbols: BTreeMap<String, Symbol>,
    radix: Vec<u128>,
    entities: Vec<Val>,
    grids: BTreeMap<Sort, Vec<Val>>,
}

struct OffGrid;

impl Model {
    fn domain(&self, ty: &SemType) -> Option<&[Val]> {
        match ty {
            SemType::Entity => Some(&self.entities),
            SemType::Degree(s) => self.grids.get(s).map(|g| g.as_slice()),
            _ => None,
        }
    }

    fn index_of(&self, ty: &SemType, v: &Val) -> Option<usize> {
        match (ty, v) {
            (SemType::Entity, Val::Ent(i)) => Some(*i),
            (SemType::Degree(s), Val::Deg(_)) => self.grids.get(s)?.binary_search(v).ok(),
            _ => None,
        }
    }

    fn tuple_slot(&self, sym: &Symbol, args: &[Val]) -> Option<usize> {
        let mut idx = 0;
        for (ty, a) in sym.params.iter().zip(args) {
            let n = self.domain(ty)?.len();
            idx = idx * n + self.index_of(ty, a)?;
        }
        Some(sym.offset + idx)
    }

    fn apply(&self, name: &str, args: &[Val], assign: &[usize]) -> Result<Val, OffGrid> {
        let sym = &self.symbols[name];
        let slot = self.tuple_slot(sym, args).ok_or(OffGrid)?;
        let choice = assign[slot];
        match &sym.result {
            SemType::Prop => Ok(Val::Ent(choice)),
            ty => Ok(self.domain(ty).ok_or(OffGrid)?[choice].clone()),
        }
    }

    fn term(&self, t: &Term, env: &mut Vec<(String, Val)>, assign: &[usize]) -> Result<Val, OffGrid> {
        match t {
            Term::Var(x, _) => env.iter().rev().find(|(n, _)| n == x).map(|(_, v)| v.clone()).ok_or(OffGrid),
            Term::Const(c, _) => self.apply(c, &[], assign),
            Term::App(..) => {
                let (head, args) = t.spine();
                let Term::Const(c, _) = head else { return Err(OffGrid) };
                let vals = args.iter().map(|a| self.term(a, env, assign)).collect::<Result<Vec<_>, _>>()?;
                self.apply(c, &vals, assign)
            }
            Term::Arith(a) => match a {
                Arith::Int(n) => Ok(Val::Deg(Rational::from_integer(n.clone()))),
                Arith::Rat { value, .. } => Ok(Val::Deg(value.clone())),
                Arith::Threshold { adjective, class, .. } => {
                    let c = self.term(class, env, assign)?;
                    self.apply(&threshold_symbol(adjective), &[c], assign)
                }
                Arith::Sum(x, y) | Arith::Diff(x, y) => {
                    let (Val::Deg(p), Val::Deg(q)) = (self.term(x, env, assign)?, self.term(y, env, assign)?) else {
                        return Err(OffGrid);
                    };
                    Ok(Val::Deg(if matches!(a, Arith::Sum(..)) { p + q } else { p - q }))
                }
                Arith::Scaled { .. } => Err(OffGrid),
            },
            _ => Err(OffGrid),
        }
    }

    fn holds(&self, t: &Term, env: &mut Vec<(String, Val)>, assign: &[usize]) -> Result<bool, OffGrid> {
        match t {
            Term::Top => Ok(true),
            Term::Bot => Ok(false),
            Term::Not(a) => Ok(!self.holds(a, env, assign)?),
            Term::And(a, b) => Ok(self.holds(a, env, assign)? && self.holds(b, env, assign)?),
            Term::Or(a, b) => Ok(self.holds(a, env, assign)? || self.holds(b, env, assign)?),
            Term::Imp(a, b) => Ok(!self.holds(a, env, assign)? || self.holds(b, env, assign)?),
            Term::Exists(x, ty, b) | Term::Forall(x, ty, b) => {
                let universal = matches!(t, Term::Forall(..));
                for v in self.domain(ty).ok_or(OffGrid)? {
                    env.push((x.clone(), v.clone()));
                    let r = self.holds(b, env, assign);
                    env.pop();
                    if r? != universal {
                        return Ok(!universal);
                    }
                }
                Ok(universal)
            }
            Term::Cmp(r, a, b) => {
                let (Val::Deg(p), Val::Deg(q)) = (self.term(a, env, assign)?, self.term(b, env, assign)?) else {
                    return Err(OffGrid);
                };
                Ok(r.holds(&p, &q))
            }
            other => Ok(self.term(other, env, assign)? == Val::Ent(1)),
        }
    }
}

fn threshold_symbol(adj: &str) -> String {
    format!("theta:{adj}")
}

fn collect(t: &Term, out: &mut BTreeMap<String, SemType>, lits: &mut BTreeSet<(Sort, Rational)>, sort_hint: Option<&Sort>) {
    match t {
        Term::Const(c, ty) => {
            out.insert(c.clone(), ty.clone());
        }
        Term::Arith(Arith::Threshold { adjective, sort, class }) => {
            out.insert(threshold_symbol(adjective), SemType::fun(SemType::Entity, SemType::Degree(sort.clone())));
            collect(class, out, lits, None);
            return;
        }
        Term::Arith(Arith::Int(n)) => {
            lits.insert((Sort::Count, Rational::from_integer(n.clone())));
        }
        Term::Arith(Arith::Rat { value, unit }) => {
            let s = unit
                .as_ref()
                .map(|u| Sort::measure(&u.dimension))
                .or_else(|| sort_hint.cloned());
            if let Some(s) = s {
                lits.insert((s, value.clone()));
            }
        }
        _ => {}
    }
    for c in t.children() {
        collect(c, out, lits, sort_hint);
    }
}

/// Literal degree constants that sit directly in a predicate argument must be grid points.
fn pred_literal_args(t: &Term, out: &mut BTreeSet<(Sort, Rational)>) {
    if let Term::App(..) = t {
        let (head, args) = t.spine();
        if let Term::Const(_, ty) = head {
            let (params, _) = ty.uncurry();
            for (p, a) in params.iter().zip(&args) {
                if let (SemType::Degree(s), Term::Arith(Arith::Int(_) | Arith::Rat { .. })) = (p, a) {
                    let v = match a {
                        Term::Arith(Arith::Int(n)) => Rational::from_integer(n.clone()),
                        Term::Arith(Arith::Rat { value, .. }) => value.clone(),
                        _ => unreachable!(),
                    };
                    out.insert((s.clone(), v));
                }
            }
        }
    }
    for c in t.children() {
        pred_literal_args(c, out);
    }
}

/// Checks the task in every interpretation over the configured finite domains.
pub fn ground_oracle(task: &ProofTask, cfg: &OracleConfig) -> Result<OracleVerdict, ProverError> {
    let mut sig = BTreeMap::new();
    let mut lits = BTreeSet::new();
    for f in task.formulas() {
        collect(f, &mut sig, &mut lits, None);
    }
    let mut pinned = BTreeSet::new();
    for f in task.formulas() {
        pred_literal_args(f, &mut pinned);
    }
    for (s, v) in &pinned {
        if !cfg.grids.get(s).is_some_and(|g| g.contains(v)) {
            return Ok(OracleVerdict::Inconclusive);
        }
    }
    let mut model = Model {
        symbols: BTreeMap::new(),
        radix: Vec::new(),
        entities: (0..cfg.entities).map(Val::Ent).collect(),
        grids: cfg
            .grids
            .iter()
            .map(|(s, g)| {
                let mut vals: Vec<Val> = g.iter().cloned().map(Val::Deg).collect();
                vals.sort();
                vals.dedup();
                (s.clone(), vals)
            })
            .collect(),
    };
    let mut total: u128 = 1;
    for (name, ty) in &sig {
        let (params, result) = ty.uncurry();
        let params: Vec<SemType> = params.into_iter().cloned().collect();
        let mut tuples: u128 = 1;
        for p in &params {
            match model.domain(p) {
                Some(d) => tuples *= d.len() as u128,
                None => return Ok(OracleVerdict::Inconclusive),
            }
        }
        let r = match result {
            SemType::Prop => 2,
            other => match model.domain(other) {
                Some(d) if !d.is_empty() => d.len() as u128,
                _ => return Ok(OracleVerdict::Inconclusive),
            },
        };
        for _ in 0..tuples {
            total = total.saturating_mul(r);
            if total > cfg.cap {
                return Err(ProverError::DomainTooLarge(total));
            }
            model.radix.push(r);
        }
        let offset = model.radix.len() - tuples as usize;
        model.symbols.insert(
            name.clone(),
            Symbol {
                params,
                result: result.clone(),
                offset,
            },
        );
    }
    let context: Vec<&Term> = task.axioms.iter().chain(&task.premises).collect();
    let mut assign = vec![0usize; model.radix.len()];
    let mut env = Vec::new();
    loop {
        let mut models_context = true;
        for f in &context {
            match model.holds(f, &mut env, &assign) {
                Ok(true) => {}
                Ok(false) => {
                    models_context = false;
                    break;
                }
                Err(OffGrid) => return Ok(OracleVerdict::Inconclusive),
            }
        }
        if models_context {
            match model.holds(&task.goal, &mut env, &assign) {
                Ok(true) => {}
                Ok(false) => return Ok(OracleVerdict::NotEntailed),
                Err(OffGrid) => return Ok(OracleVerdict::Inconclusive),
            }
        }
        let mut k = 0;
        while k < assign.len() {
            assign[k] += 1;
            if (assign[k] as u128) < model.radix[k] {
                break;
            }
            assign[k] = 0;
            k += 1;
        }
        if k == assign.len() {
            return Ok(OracleVerdict::Entailed);
        }
    }
}

