//! Ground instantiation of clauses and the interned table of ground atoms.

use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{fold_constants, print_term, Arith, SemType, Sort, Term};

use super::fol::{term_depth, Atom, Clause, Lit};
use super::linear::{comparison, degree_sort, linearize, to_term, Constraint, Kind, LinExpr, Registry};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GAtomKind {
    Pred(String, Vec<Term>),
    Arith(Constraint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAtom {
    pub key: String,
    pub kind: GAtomKind,
}

pub type GLit = (usize, bool);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Clause `clause` under the substitution, variables in clause order.
    Instance { clause: usize, subst: Vec<(String, Term)> },
    /// `e = 0 ∨ e < 0 ∨ -e < 0` for the equality atom.
    Trichotomy(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GClause {
    pub origin: Origin,
    pub lits: Vec<GLit>,
}

/// Interned ground atoms plus the arithmetic registry that names their degree terms.
#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    pub atoms: Vec<GAtom>,
    index: BTreeMap<String, usize>,
    pub reg: Registry,
}

/// Outcome of grounding one literal.
pub enum Ground {
    Lit(GLit),
    True,
    False,
}

fn is_arith(t: &Term) -> bool {
    matches!(t, Term::Arith(Arith::Int(_) | Arith::Rat { .. } | Arith::Sum(..) | Arith::Diff(..)))
}

impl AtomTable {
    pub fn is_int(&self, key: &str) -> bool {
        self.reg.is_int(key)
    }

    fn intern(&mut self, key: String, kind: GAtomKind) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.atoms.len();
        self.index.insert(key.clone(), i);
        self.atoms.push(GAtom { key, kind });
        i
    }

    /// Canonical form of a ground term: arithmetic subterms become a sum of atoms plus a constant.
    pub fn canon(&mut self, t: &Term) -> Term {
        let t = fold_constants(&t.map_children(&mut |c| self.canon(c)));
        if is_arith(&t) {
            let sort = degree_sort(&t).unwrap_or(Sort::Count);
            let lin = linearize(&t, &mut self.reg);
            let sort = lin
                .coeffs
                .keys()
                .find_map(|k| self.reg.sorts.get(k).cloned())
                .unwrap_or(sort);
            to_term(&lin, &sort, &self.reg.terms)
        } else {
            t
        }
    }

    pub fn constraint(&mut self, c: Constraint) -> Ground {
        match c.constant_truth() {
            Some(true) => Ground::True,
            Some(false) => Ground::False,
            None => {
                let key = c.to_string();
                Ground::Lit((self.intern(key, GAtomKind::Arith(c)), true))
            }
        }
    }

    pub fn ground_lit(&mut self, lit: &Lit) -> Ground {
        let g = match &lit.atom {
            Atom::Pred(p, _, args) => {
                let args: Vec<Term> = args.iter().map(|a| self.canon(a)).collect();
                let key = Atom::Pred(p.clone(), SemType::Prop, args.clone()).to_string();
                Ground::Lit((self.intern(key, GAtomKind::Pred(p.clone(), args)), true))
            }
            Atom::Cmp(r, a, b) => {
                let (a, b) = (self.canon(a), self.canon(b));
                let c = comparison(*r, &a, &b, &mut self.reg);
                self.constraint(c)
            }
        };
        match (g, lit.pos) {
            (Ground::Lit((i, _)), pos) => Ground::Lit((i, pos)),
            (Ground::True, true) | (Ground::False, false) => Ground::True,
            _ => Ground::False,
        }
    }

    /// Ground literals of a clause instance, or `None` if the instance is trivially true.
    pub fn ground_clause(&mut self, clause: &Clause, subst: &[(String, Term)]) -> Option<Vec<GLit>> {
        let mut out: Vec<GLit> = Vec::new();
        for lit in &clause.lits {
            let mut l = lit.clone();
            for (v, t) in subst {
                l.atom = match l.atom {
                    Atom::Pred(p, ty, args) => Atom::Pred(p, ty, args.iter().map(|a| a.subst(v, t)).collect()),
                    Atom::Cmp(r, a, b) => Atom::Cmp(r, a.subst(v, t), b.subst(v, t)),
                };
            }
            match self.ground_lit(&l) {
                Ground::True => return None,
                Ground::False => {}
                Ground::Lit(g) => {
                    if out.contains(&(g.0, !g.1)) {
                        return None;
                    }
                    if !out.contains(&g) {
                        out.push(g);
                    }
                }
            }
        }
        Some(out)
    }

    /// Literals of the trichotomy lemma for an equality atom.
    pub fn trichotomy(&mut self, eq: usize) -> Option<Vec<GLit>> {
        let GAtomKind::Arith(c) = &self.atoms[eq].kind else { return None };
        if c.kind != Kind::Eq {
            return None;
        }
        let e = c.expr.clone();
        let mut lits = vec![(eq, true)];
        for expr in [e.clone(), e.scale(&-num_rational::BigRational::from_integer(1.into()))] {
            if let Ground::Lit(g) = self.constraint(Constraint { expr, kind: Kind::Lt }.canonical()) {
                lits.push(g);
            }
        }
        Some(lits)
    }

    pub fn arith_constraint(&self, lit: GLit) -> Option<Constraint> {
        match &self.atoms[lit.0].kind {
            GAtomKind::Arith(c) if lit.1 => Some(c.clone()),
            GAtomKind::Arith(c) => c.negate(),
            GAtomKind::Pred(..) => None,
        }
    }
}

/// Type of a ground entity or degree term.
pub fn ground_type(t: &Term) -> Option<SemType> {
    if let Some(s) = degree_sort(t) {
        return Some(SemType::Degree(s));
    }
    match t {
        Term::Const(_, SemType::Entity) => Some(SemType::Entity),
        Term::App(..) => {
            let (head, args) = t.spine();
            let Term::Const(_, ty) = head else { return None };
            let (params, res) = ty.uncurry();
            (params.len() == args.len() && *res == SemType::Entity).then_some(SemType::Entity)
        }
        _ => None,
    }
}

/// Candidate terms for instantiation, by argument position and by type.
#[derive(Clone, Debug, Default)]
pub struct Pools {
    pub by_pos: BTreeMap<(String, usize), BTreeMap<String, Term>>,
    pub by_type: BTreeMap<SemType, BTreeMap<String, Term>>,
}

impl Pools {
    fn add_subterms(&mut self, t: &Term) {
        if t.free_vars().is_empty() {
            if let Some(ty) = ground_type(t) {
                if !matches!(t, Term::Arith(Arith::Sum(..) | Arith::Diff(..))) {
                    self.by_type.entry(ty).or_default().insert(print_term(t), t.clone());
                }
            }
        }
        for c in t.children() {
            self.add_subterms(c);
        }
    }

    pub fn add_atom(&mut self, a: &GAtom, table: &AtomTable) {
        match &a.kind {
            GAtomKind::Pred(p, args) => {
                for (i, arg) in args.iter().enumerate() {
                    self.by_pos
                        .entry((p.clone(), i))
                        .or_default()
                        .insert(print_term(arg), arg.clone());
                    self.add_subterms(arg);
                }
            }
            GAtomKind::Arith(c) => {
                for k in c.vars() {
                    if let Some(t) = table.reg.terms.get(k) {
                        self.add_subterms(t);
                    }
                }
            }
        }
    }

    /// Seeds the pools with ground subterms occurring anywhere in the clauses.
    pub fn seed(&mut self, clauses: &[Clause]) {
        for c in clauses {
            for l in &c.lits {
                match &l.atom {
                    Atom::Pred(_, _, args) => args.iter().for_each(|a| self.add_subterms(a)),
                    Atom::Cmp(_, a, b) => {
                        self.add_subterms(a);
                        self.add_subterms(b);
                    }
                }
            }
        }
    }

    fn len(&self) -> usize {
        self.by_pos.values().map(|m| m.len()).sum::<usize>() + self.by_type.values().map(|m| m.len()).sum::<usize>()
    }

    /// Candidates for variable `v` of clause `c`.
    pub fn candidates(&self, c: &Clause, v: &str, ty: &SemType, table: &mut AtomTable) -> Vec<Term> {
        let clause_vars: BTreeSet<&str> = c.vars.iter().map(|(n, _)| n.as_str()).collect();
        let mut out: BTreeMap<String, Term> = BTreeMap::new();
        for lit in &c.lits {
            let Atom::Pred(p, _, args) = &lit.atom else { continue };
            for (i, arg) in args.iter().enumerate() {
                let Some(pool) = self.by_pos.get(&(p.clone(), i)) else { continue };
                match arg {
                    Term::Var(x, _) if x == v => {
                        out.extend(pool.iter().map(|(k, t)| (k.clone(), t.clone())));
                    }
                    _ if is_arith(arg) && arg.free_vars().contains(v) => {
                        for t in solve_for(arg, v, &clause_vars, pool.values(), ty, table) {
                            out.insert(print_term(&t), t);
                        }
                    }
                    _ => {}
                }
            }
        }
        if out.is_empty() {
            if let Some(pool) = self.by_type.get(ty) {
                out.extend(pool.iter().map(|(k, t)| (k.clone(), t.clone())));
            }
        }
        if out.is_empty() {
            let name = match ty {
                SemType::Degree(s) => format!("c_{s}"),
                _ => "c_e".to_string(),
            };
            out.insert(name.clone(), Term::Const(name, ty.clone()));
        }
        out.into_values().collect()
    }
}

/// Values of `v` making the linear term `arg` equal one of the pool terms.
fn solve_for<'a>(
    arg: &Term,
    v: &str,
    clause_vars: &BTreeSet<&str>,
    pool: impl Iterator<Item = &'a Term>,
    ty: &SemType,
    table: &mut AtomTable,
) -> Vec<Term> {
    let mut scratch = Registry::default();
    let lin = linearize(arg, &mut scratch);
    let key = print_term(&Term::Var(v.to_string(), ty.clone()));
    let k = lin.coeff(&key);
    if k == num_rational::BigRational::from_integer(0.into())
        || lin.coeffs.keys().any(|x| x != &key && clause_vars.contains(x.as_str()))
    {
        return vec![];
    }
    let mut rest = lin.clone();
    rest.coeffs.remove(&key);
    let sort = ty.sort().cloned().unwrap_or(Sort::Count);
    let mut out = Vec::new();
    for p in pool {
        let lp = linearize(p, &mut table.reg);
        let sol: LinExpr = lp.sub(&rest).scale(&k.recip());
        for (name, t) in scratch.terms.iter() {
            table.reg.terms.entry(name.clone()).or_insert_with(|| t.clone());
        }
        let t = to_term(&sol, &sort, &table.reg.terms);
        out.push(table.canon(&t));
    }
    out
}

/// Limits on instantiation.
#[derive(Clone, Copy, Debug)]
pub struct GroundLimits {
    pub max_instances: usize,
    pub max_term_depth: usize,
}

impl Default for GroundLimits {
    fn default() -> Self {
        GroundLimits {
            max_instances: 20_000,
            max_term_depth: 3,
        }
    }
}

/// The growing set of ground clauses.
#[derive(Debug, Default)]
pub struct Grounding {
    pub table: AtomTable,
    pub clauses: Vec<GClause>,
    seen: BTreeSet<Vec<GLit>>,
    pools: Pools,
    tricho: BTreeSet<usize>,
    pub truncated: bool,
}

impl Grounding {
    pub fn new(clauses: &[Clause]) -> Self {
        let mut g = Grounding::default();
        g.pools.seed(clauses);
        g
    }

    /// Records a ground clause; returns false for duplicates and trivial clauses.
    pub fn push(&mut self, origin: Origin, lits: Option<Vec<GLit>>) -> bool {
        let Some(mut lits) = lits else { return false };
        let mut key = lits.clone();
        key.sort();
        if !self.seen.insert(key) {
            return false;
        }
        lits.sort();
        self.clauses.push(GClause { origin, lits });
        true
    }

    fn add_lemmas(&mut self) {
        for i in 0..self.table.atoms.len() {
            if self.tricho.contains(&i) {
                continue;
            }
            if let Some(lits) = self.table.trichotomy(i) {
                self.tricho.insert(i);
                self.push(Origin::Trichotomy(i), Some(lits));
            }
        }
    }

    fn refresh_pools(&mut self) {
        for a in &self.table.atoms {
            self.pools.add_atom(a, &self.table);
        }
    }

    /// One round of instantiation against the current pools; returns whether anything was added.
    pub fn round(&mut self, clauses: &[Clause], limits: &GroundLimits) -> bool {
        let before = (self.clauses.len(), self.pools.len());
        for (ci, c) in clauses.iter().enumerate() {
            let cands: Vec<Vec<Term>> = c
                .vars
                .iter()
                .map(|(v, ty)| self.pools.candidates(c, v, ty, &mut self.table))
                .collect();
            let mut idx = vec![0usize; cands.len()];
            loop {
                if self.clauses.len() >= limits.max_instances {
                    self.truncated = true;
                    break;
                }
                let subst: Vec<(String, Term)> = c
                    .vars
                    .iter()
                    .zip(&idx)
                    .zip(&cands)
                    .map(|(((v, _), &i), cs)| (v.clone(), cs[i].clone()))
                    .collect();
                if subst.iter().all(|(_, t)| term_depth(t) <= limits.max_term_depth) {
                    let lits = self.table.ground_clause(c, &subst);
                    self.push(Origin::Instance { clause: ci, subst }, lits);
                }
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < cands[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
        self.add_lemmas();
        self.refresh_pools();
        (self.clauses.len(), self.pools.len()) != before
    }
}
