//! Entailment checking: a refutation prover over ground instances with linear degree
//! arithmetic, plus a TPTP-TFF bridge to external provers and a brute-force model checker.

pub mod fol;
mod ground;
pub mod linear;
mod oracle;
mod sat;
mod tptp;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{collect_signature, instantiate, AxiomError, LexicalKb};
use crate::logic::{not, print_term, type_check, Formula, SemType};

pub use fol::{clausify, Atom, Clause, Lit, NotFirstOrder};
pub use ground::{AtomTable, GAtom, GAtomKind, GClause, GLit, GroundLimits, Grounding, Origin};
pub use oracle::{ground_oracle, OracleConfig, OracleVerdict};
pub use sat::{Refutation, ReplayError};
pub use tptp::{emit_tff, read_szs, read_tff, run_external, ExternalProver, SzsStatus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProverError {
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error("{0} is not a closed proposition: {1}")]
    IllFormed(String, String),
    #[error(transparent)]
    NotFirstOrder(#[from] NotFirstOrder),
    #[error("unparseable prover output: {0}")]
    UnparseableOutput(String),
    #[error("malformed TFF: {0}")]
    Tff(String),
    #[error("external prover failed: {0}")]
    External(String),
    #[error("domain of {0} interpretations exceeds the cap")]
    DomainTooLarge(u128),
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    pub timeout_ms: u64,
    /// Rounds of quantifier instantiation.
    pub depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            timeout_ms: 10_000,
            depth: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofTask {
    pub axioms: Vec<Formula>,
    pub premises: Vec<Formula>,
    pub goal: Formula,
    pub budget: Budget,
}

impl ProofTask {
    /// Checks that every formula is a closed proposition with consistent predicate sorts.
    pub fn new(axioms: Vec<Formula>, premises: Vec<Formula>, goal: Formula, budget: Budget) -> Result<Self, ProverError> {
        let task = ProofTask {
            axioms,
            premises,
            goal,
            budget,
        };
        for f in task.formulas() {
            match type_check(f, &BTreeMap::new()) {
                Ok(SemType::Prop) => {}
                Ok(other) => return Err(ProverError::IllFormed(print_term(f), format!("has type {other}"))),
                Err(e) => return Err(ProverError::IllFormed(print_term(f), e.to_string())),
            }
        }
        collect_signature(task.formulas())?;
        Ok(task)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.axioms.iter().chain(&self.premises).chain(std::iter::once(&self.goal))
    }

    /// Axioms, premises and the negated goal, in that order.
    pub fn refutation_inputs(&self) -> Vec<Formula> {
        let mut v: Vec<Formula> = self.axioms.iter().chain(&self.premises).cloned().collect();
        v.push(not(self.goal.clone()));
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProofStatus {
    Proved,
    NotProvedWithinBudget,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStats {
    pub nodes: usize,
    pub ground_clauses: usize,
    pub rounds: usize,
    pub wall_ms: u64,
    pub timed_out: bool,
    /// The external prover reported the negated goal consistent with the inputs.
    pub counter_satisfiable: bool,
}

/// Ground instances and the refutation tree over them.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub clauses: Vec<GClause>,
    pub atoms: Vec<String>,
    pub refutation: Refutation,
}

impl Certificate {
    pub fn summary(&self) -> String {
        format!(
            "{} ground clauses, {} atoms, {} refutation steps",
            self.clauses.len(),
            self.atoms.len(),
            self.refutation.size()
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofResult {
    pub status: ProofStatus,
    pub certificate: Option<Certificate>,
    pub stats: ProofStats,
}

impl ProofResult {
    pub fn proved(&self) -> bool {
        self.status == ProofStatus::Proved
    }
}

/// Tries to refute axioms ∧ premises ∧ ¬goal within the budget.
pub fn prove(task: &ProofTask) -> ProofResult {
    let start = Instant::now();
    let deadline = start + Duration::from_millis(task.budget.timeout_ms);
    let mut stats = ProofStats::default();
    let not_proved = |mut stats: ProofStats| {
        stats.wall_ms = start.elapsed().as_millis() as u64;
        ProofResult {
            status: ProofStatus::NotProvedWithinBudget,
            certificate: None,
            stats,
        }
    };
    let Ok(clauses) = clausify(&task.refutation_inputs()) else {
        return not_proved(stats);
    };
    let limits = GroundLimits::default();
    let mut g = Grounding::new(&clauses);
    for round in 0..=task.budget.depth {
        stats.rounds = round + 1;
        let grew = g.round(&clauses, &limits);
        stats.ground_clauses = g.clauses.len();
        let mut solver = sat::Solver::new(&g.table, &g.clauses, deadline);
        let res = solver.refute();
        stats.nodes += solver.nodes;
        match res {
            Ok(refutation) => {
                stats.wall_ms = start.elapsed().as_millis() as u64;
                return ProofResult {
                    status: ProofStatus::Proved,
                    certificate: Some(Certificate {
                        clauses: g.clauses.clone(),
                        atoms: g.table.atoms.iter().map(|a| a.key.clone()).collect(),
                        refutation,
                    }),
                    stats,
                };
            }
            Err(sat::Stop::Timeout) => {
                stats.timed_out = true;
                return not_proved(stats);
            }
            Err(sat::Stop::Satisfiable) => {}
        }
        if !grew || g.truncated || Instant::now() > deadline {
            stats.timed_out = Instant::now() > deadline;
            break;
        }
    }
    not_proved(stats)
}

/// Re-derives every ground clause of a certificate from the task and replays its refutation.
pub fn validate(task: &ProofTask, cert: &Certificate) -> Result<(), ProverError> {
    let bad = |m: String| ProverError::Certificate(m);
    let clauses = clausify(&task.refutation_inputs())?;
    let mut table = AtomTable::default();
    for (i, gc) in cert.clauses.iter().enumerate() {
        let lits = match &gc.origin {
            Origin::Instance { clause, subst } => {
                let c = clauses.get(*clause).ok_or_else(|| bad(format!("clause {i}: no input clause {clause}")))?;
                if subst.len() != c.vars.len() || subst.iter().zip(&c.vars).any(|((v, _), (w, _))| v != w) {
                    return Err(bad(format!("clause {i}: substitution does not match the clause variables")));
                }
                for ((v, t), (_, ty)) in subst.iter().zip(&c.vars) {
                    let ok = match type_check(t, &BTreeMap::new()) {
                        Ok(found) => crate::logic::TypeChecker::new().unify(&found, ty).is_ok(),
                        Err(_) => false,
                    };
                    if !ok {
                        return Err(bad(format!("clause {i}: {} is not a closed term for {v}:{ty}", print_term(t))));
                    }
                }
                table
                    .ground_clause(c, subst)
                    .ok_or_else(|| bad(format!("clause {i}: instance is trivially true")))?
            }
            Origin::Trichotomy(a) => {
                let key = cert.atoms.get(*a).ok_or_else(|| bad(format!("clause {i}: no atom {a}")))?;
                let idx = table.atoms.iter().position(|x| &x.key == key);
                idx.and_then(|j| table.trichotomy(j))
                    .ok_or_else(|| bad(format!("clause {i}: {key} is not an equality")))?
            }
        };
        let mut want: Vec<(String, bool)> = gc.lits.iter().map(|&(a, p)| (cert.atoms[a].clone(), p)).collect();
        let mut got: Vec<(String, bool)> = lits.iter().map(|&(a, p)| (table.atoms[a].key.clone(), p)).collect();
        want.sort();
        got.sort();
        if want != got {
            return Err(bad(format!("clause {i} differs from its re-derivation")));
        }
    }
    let index: BTreeMap<&str, usize> = table.atoms.iter().enumerate().map(|(i, a)| (a.key.as_str(), i)).collect();
    let remap = |a: usize| -> Result<usize, ProverError> {
        cert.atoms
            .get(a)
            .and_then(|k| index.get(k.as_str()).copied())
            .ok_or_else(|| bad(format!("atom {a} never occurs in a clause")))
    };
    let ground: Vec<GClause> = cert
        .clauses
        .iter()
        .map(|gc| {
            Ok(GClause {
                origin: gc.origin.clone(),
                lits: gc.lits.iter().map(|&(a, p)| Ok((remap(a)?, p))).collect::<Result<_, ProverError>>()?,
            })
        })
        .collect::<Result<_, ProverError>>()?;
    let refutation = remap_refutation(&cert.refutation, &remap)?;
    sat::check(&table, &ground, &refutation).map_err(|e| bad(e.to_string()))
}

fn remap_refutation(
    r: &Refutation,
    f: &dyn Fn(usize) -> Result<usize, ProverError>,
) -> Result<Refutation, ProverError> {
    Ok(match r {
        Refutation::Split { atom, pos, neg } => Refutation::Split {
            atom: f(*atom)?,
            pos: Box::new(remap_refutation(pos, f)?),
            neg: Box::new(remap_refutation(neg, f)?),
        },
        Refutation::Propagate { clause, lit, next } => Refutation::Propagate {
            clause: *clause,
            lit: (f(lit.0)?, lit.1),
            next: Box::new(remap_refutation(next, f)?),
        },
        Refutation::ClauseConflict { clause } => Refutation::ClauseConflict { clause: *clause },
        Refutation::ArithConflict { lits, derivation } => Refutation::ArithConflict {
            lits: lits.iter().map(|&(a, p)| Ok((f(a)?, p))).collect::<Result<_, ProverError>>()?,
            derivation: derivation.clone(),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        })
    }
}

impl std::str::FromStr for Answer {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "yes" | "entailment" => Ok(Answer::Yes),
            "no" | "contradiction" => Ok(Answer::No),
            "unknown" | "neutral" | "undef" => Ok(Answer::Unknown),
            other => Err(format!("unknown answer {other}")),
        }
    }
}

/// How one proof direction ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attempt {
    Proved,
    NotProved,
    TimedOut,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: Answer,
    /// Outcome of proving the hypothesis.
    pub entailment: Attempt,
    /// Outcome of proving its negation.
    pub contradiction: Attempt,
}

fn attempt(r: &ProofResult) -> Attempt {
    match r.status {
        ProofStatus::Proved => Attempt::Proved,
        _ if r.stats.timed_out => Attempt::TimedOut,
        _ => Attempt::NotProved,
    }
}

/// Proof backend used by [`decide_with`].
pub trait Backend: Sync {
    fn prove(&self, task: &ProofTask) -> Result<ProofResult, ProverError>;
}

/// The built-in prover.
pub struct Internal;

impl Backend for Internal {
    fn prove(&self, task: &ProofTask) -> Result<ProofResult, ProverError> {
        Ok(prove(task))
    }
}

/// Axioms for the predicates of the given formulas.
pub fn axioms_for<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I, kb: &LexicalKb) -> Result<Vec<Formula>, ProverError> {
    let sig = collect_signature(formulas)?;
    Ok(instantiate(&sig, kb))
}

/// Tries the hypothesis, then its negation.
pub fn decide_with(
    backend: &dyn Backend,
    premises: &[Formula],
    hypothesis: &Formula,
    kb: &LexicalKb,
    budget: Budget,
) -> Result<Verdict, ProverError> {
    let axioms = axioms_for(premises.iter().chain(std::iter::once(hypothesis)), kb)?;
    let yes = ProofTask::new(axioms.clone(), premises.to_vec(), hypothesis.clone(), budget)?;
    let r = backend.prove(&yes)?;
    if r.proved() {
        return Ok(Verdict {
            answer: Answer::Yes,
            entailment: Attempt::Proved,
            contradiction: Attempt::Skipped,
        });
    }
    let no = ProofTask::new(axioms, premises.to_vec(), crate::semantics::negate_sentence(hypothesis), budget)?;
    let r2 = backend.prove(&no)?;
    Ok(Verdict {
        answer: if r2.proved() { Answer::No } else { Answer::Unknown },
        entailment: attempt(&r),
        contradiction: attempt(&r2),
    })
}

pub fn decide(premises: &[Formula], hypothesis: &Formula, kb: &LexicalKb, budget: Budget) -> Result<Verdict, ProverError> {
    decide_with(&Internal, premises, hypothesis, kb, budget)
}

/// Memoizes proof results by the TFF text of the task; safe to share across threads.
#[derive(Default)]
pub struct ProofCache {
    entries: Mutex<BTreeMap<String, ProofResult>>,
}

impl ProofCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A backend whose proved results are cached; a cached proof is reused under any budget.
pub struct Cached<'a, B: Backend> {
    pub inner: B,
    pub cache: &'a ProofCache,
}

impl<B: Backend> Backend for Cached<'_, B> {
    fn prove(&self, task: &ProofTask) -> Result<ProofResult, ProverError> {
        let key = emit_tff(task);
        if let Some(hit) = self.cache.entries.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let r = self.inner.prove(task)?;
        if r.proved() {
            self.cache.entries.lock().unwrap().insert(key, r.clone());
        }
        Ok(r)
    }
}


#[cfg(test)]
mod tests;
