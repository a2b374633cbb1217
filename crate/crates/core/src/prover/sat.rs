//! Case splitting with unit propagation and an arithmetic theory check, producing a
//! refutation tree that can be replayed independently.

use std::time::Instant;

use super::ground::{AtomTable, GAtomKind, GClause, GLit};
use super::linear::{check_refutation, refute, BadDerivation, Constraint, Derivation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// Both values of the atom lead to contradiction.
    Split { atom: usize, pos: Box<Refutation>, neg: Box<Refutation> },
    /// The clause forces `lit`.
    Propagate { clause: usize, lit: GLit, next: Box<Refutation> },
    /// Every literal of the clause is false.
    ClauseConflict { clause: usize },
    /// The listed true arithmetic literals are jointly unsatisfiable.
    ArithConflict { lits: Vec<GLit>, derivation: Derivation },
}

impl Refutation {
    pub fn size(&self) -> usize {
        match self {
            Refutation::Split { pos, neg, .. } => 1 + pos.size() + neg.size(),
            Refutation::Propagate { next, .. } => 1 + next.size(),
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stop {
    Satisfiable,
    Timeout,
}

pub struct Solver<'a> {
    pub table: &'a AtomTable,
    pub clauses: &'a [GClause],
    pub deadline: Instant,
    pub nodes: usize,
}

fn value(assign: &[Option<bool>], l: GLit) -> Option<bool> {
    assign[l.0].map(|v| v == l.1)
}

impl<'a> Solver<'a> {
    pub fn new(table: &'a AtomTable, clauses: &'a [GClause], deadline: Instant) -> Self {
        Solver {
            table,
            clauses,
            deadline,
            nodes: 0,
        }
    }

    pub fn refute(&mut self) -> Result<Refutation, Stop> {
        let mut assign = vec![None; self.table.atoms.len()];
        self.search(&mut assign)
    }

    fn theory_conflict(&self, assign: &[Option<bool>]) -> Option<Refutation> {
        let mut lits = Vec::new();
        let mut inputs = Vec::new();
        for (i, v) in assign.iter().enumerate() {
            let Some(v) = v else { continue };
            if let Some(c) = self.table.arith_constraint((i, *v)) {
                lits.push((i, *v));
                inputs.push(c);
            }
        }
        if inputs.is_empty() {
            return None;
        }
        let d = refute(&inputs, &|k| self.table.is_int(k))?;
        Some(Refutation::ArithConflict { lits, derivation: d })
    }

    fn search(&mut self, assign: &mut Vec<Option<bool>>) -> Result<Refutation, Stop> {
        self.nodes += 1;
        if Instant::now() > self.deadline {
            return Err(Stop::Timeout);
        }
        let mut trail: Vec<(usize, GLit)> = Vec::new();
        let end = loop {
            let mut forced = None;
            let mut conflict = None;
            for (ci, c) in self.clauses.iter().enumerate() {
                let mut open = None;
                let mut n_open = 0;
                let mut sat = false;
                for &l in &c.lits {
                    match value(assign, l) {
                        Some(true) => {
                            sat = true;
                            break;
                        }
                        None => {
                            n_open += 1;
                            open = Some(l);
                        }
                        Some(false) => {}
                    }
                }
                if sat {
                    continue;
                }
                if n_open == 0 {
                    conflict = Some(ci);
                    break;
                }
                if n_open == 1 && forced.is_none() {
                    forced = Some((ci, open.unwrap()));
                }
            }
            if let Some(ci) = conflict {
                break Some(Refutation::ClauseConflict { clause: ci });
            }
            match forced {
                Some((ci, l)) => {
                    assign[l.0] = Some(l.1);
                    trail.push((ci, l));
                }
                None => break None,
            }
        };
        let result = match end {
            Some(r) => Ok(r),
            None => match self.theory_conflict(assign) {
                Some(r) => Ok(r),
                None => match self.choose(assign) {
                    None => Err(Stop::Satisfiable),
                    Some(atom) => {
                        assign[atom] = Some(true);
                        let pos = self.search(assign);
                        assign[atom] = None;
                        match pos {
                            Err(e) => Err(e),
                            Ok(pos) => {
                                assign[atom] = Some(false);
                                let neg = self.search(assign);
                                assign[atom] = None;
                                neg.map(|neg| Refutation::Split {
                                    atom,
                                    pos: Box::new(pos),
                                    neg: Box::new(neg),
                                })
                            }
                        }
                    }
                },
            },
        };
        for (_, l) in &trail {
            assign[l.0] = None;
        }
        let r = result?;
        Ok(trail.into_iter().rev().fold(r, |next, (clause, lit)| Refutation::Propagate {
            clause,
            lit,
            next: Box::new(next),
        }))
    }

    /// First open atom of a shortest unsatisfied clause.
    fn choose(&self, assign: &[Option<bool>]) -> Option<usize> {
        self.clauses
            .iter()
            .filter(|c| !c.lits.iter().any(|&l| value(assign, l) == Some(true)))
            .filter_map(|c| {
                let open: Vec<_> = c.lits.iter().filter(|&&l| value(assign, l).is_none()).collect();
                open.first().map(|l| (open.len(), l.0))
            })
            .min()
            .map(|(_, a)| a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("step refers to missing clause or atom {0}")]
    Dangling(usize),
    #[error("clause {0} does not force the literal")]
    NotUnit(usize),
    #[error("clause {0} is not falsified")]
    NotFalsified(usize),
    #[error("literal on atom {0} is not true or not arithmetic")]
    BadArithLiteral(usize),
    #[error("split on assigned atom {0}")]
    AssignedSplit(usize),
    #[error(transparent)]
    Arith(#[from] BadDerivation),
}

/// Replays a refutation tree against a ground clause set.
pub fn check(table: &AtomTable, clauses: &[GClause], r: &Refutation) -> Result<(), ReplayError> {
    let mut assign = vec![None; table.atoms.len()];
    check_at(table, clauses, r, &mut assign)
}

fn check_at(
    table: &AtomTable,
    clauses: &[GClause],
    r: &Refutation,
    assign: &mut Vec<Option<bool>>,
) -> Result<(), ReplayError> {
    match r {
        Refutation::Split { atom, pos, neg } => {
            if *atom >= assign.len() {
                return Err(ReplayError::Dangling(*atom));
            }
            if assign[*atom].is_some() {
                return Err(ReplayError::AssignedSplit(*atom));
            }
            for (v, sub) in [(true, pos), (false, neg)] {
                assign[*atom] = Some(v);
                let res = check_at(table, clauses, sub, assign);
                assign[*atom] = None;
                res?;
            }
            Ok(())
        }
        Refutation::Propagate { clause, lit, next } => {
            let c = clauses.get(*clause).ok_or(ReplayError::Dangling(*clause))?;
            let others_false = c
                .lits
                .iter()
                .filter(|&l| l != lit)
                .all(|&l| value(assign, l) == Some(false));
            if !c.lits.contains(lit) || lit.0 >= assign.len() || assign[lit.0].is_some() || !others_false {
                return Err(ReplayError::NotUnit(*clause));
            }
            assign[lit.0] = Some(lit.1);
            let res = check_at(table, clauses, next, assign);
            assign[lit.0] = None;
            res
        }
        Refutation::ClauseConflict { clause } => {
            let c = clauses.get(*clause).ok_or(ReplayError::Dangling(*clause))?;
            if c.lits.iter().all(|&l| value(assign, l) == Some(false)) {
                Ok(())
            } else {
                Err(ReplayError::NotFalsified(*clause))
            }
        }
        Refutation::ArithConflict { lits, derivation } => {
            let mut inputs: Vec<Constraint> = Vec::new();
            for &l in lits {
                if l.0 >= assign.len() || value(assign, l) != Some(true) {
                    return Err(ReplayError::BadArithLiteral(l.0));
                }
                if !matches!(table.atoms[l.0].kind, GAtomKind::Arith(_)) {
                    return Err(ReplayError::BadArithLiteral(l.0));
                }
                inputs.push(table.arith_constraint(l).ok_or(ReplayError::BadArithLiteral(l.0))?);
            }
            check_refutation(derivation, &inputs, &|k| table.is_int(k))?;
            Ok(())
        }
    }
}
