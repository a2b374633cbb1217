#![allow(dead_code)]

use std::collections::BTreeMap;

use comparative_nli::axioms::LexicalKb;
use comparative_nli::grammar::{check_derivation, parse_with, tokenize, Lexicon, Strategy as ParseStrategy};
use comparative_nli::harness::{combine_answers, parse_jsonl, Problem};
use comparative_nli::logic::{
    alpha_eq, and, app, beta_reduce, cmp, cnst, entity, exists, forall, imp, int, is_beta_normal, lam, not, or,
    print_term, read_term, simplify, sum, type_check, var, Rational, Rel, SemType, Sort, Term, UnitTable,
};
use comparative_nli::prover::{axioms_for, ground_oracle, Answer, Budget, OracleConfig, OracleVerdict, ProofTask};
use comparative_nli::transform::{apply_all, merge_multiword, RuleSet};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const CASES: u32 = 256;

pub fn curated() -> Vec<Problem> {
    parse_jsonl(include_str!("../../data/curated.jsonl")).unwrap()
}

pub fn runner(deterministic: bool) -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    if deterministic {
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
    } else {
        TestRunner::new(config)
    }
}

/// Draws bounded choices from a fixed list of random words.
pub struct Choices {
    words: Vec<u32>,
    next: usize,
}

impl Choices {
    pub fn new(words: Vec<u32>) -> Self {
        Choices { words, next: 0 }
    }

    fn pick(&mut self, n: usize) -> usize {
        let w = self.words[self.next % self.words.len()];
        self.next += 1;
        w as usize % n
    }
}

fn e() -> SemType {
    SemType::Entity
}

fn et() -> SemType {
    SemType::fun(e(), SemType::Prop)
}

fn d() -> SemType {
    SemType::Degree(Sort::Count)
}

fn visible(env: &[(String, SemType)], ty: &SemType) -> Vec<String> {
    env.iter()
        .enumerate()
        .filter(|(i, (n, t))| t == ty && !env[i + 1..].iter().any(|(m, _)| m == n))
        .map(|(_, (n, _))| n.clone())
        .collect()
}

struct TermGen {
    c: Choices,
    names: [&'static str; 3],
}

impl TermGen {
    fn entity(&mut self, env: &[(String, SemType)]) -> Term {
        let vars = visible(env, &e());
        let k = self.c.pick(vars.len() + 2);
        match k {
            0 => entity("john"),
            1 => entity("bob"),
            _ => var(&vars[k - 2], e()),
        }
    }

    fn degree(&mut self, env: &[(String, SemType)]) -> Term {
        let vars = visible(env, &d());
        match self.c.pick(vars.len() + 2) {
            0 => int(self.c.pick(5) as i64),
            1 => sum(int(self.c.pick(3) as i64), int(1)),
            k => var(&vars[k - 2], d()),
        }
    }

    fn predicate(&mut self, env: &mut Vec<(String, SemType)>, fuel: u32) -> Term {
        let vars = visible(env, &et());
        match self.c.pick(vars.len() + 3) {
            0 => cnst("dog", et()),
            1 => cnst("cat", et()),
            2 => {
                let x = self.names[self.c.pick(3)].to_string();
                env.push((x.clone(), e()));
                let body = self.prop(env, fuel.saturating_sub(1));
                env.pop();
                lam(&x, e(), body)
            }
            k => var(&vars[k - 3], et()),
        }
    }

    fn prop(&mut self, env: &mut Vec<(String, SemType)>, fuel: u32) -> Term {
        if fuel == 0 {
            return match self.c.pick(4) {
                0 => Term::Top,
                1 => Term::Bot,
                _ => {
                    let p = self.predicate(env, 0);
                    let x = self.entity(env);
                    app(p, x)
                }
            };
        }
        let f = fuel - 1;
        match self.c.pick(11) {
            0 => {
                let p = self.predicate(env, f);
                let x = self.entity(env);
                app(p, x)
            }
            1 => not(self.prop(env, f)),
            2 => and(self.prop(env, f), self.prop(env, f)),
            3 => or(self.prop(env, f), self.prop(env, f)),
            4 => imp(self.prop(env, f), self.prop(env, f)),
            5 | 6 => {
                let x = self.names[self.c.pick(3)].to_string();
                let ty = if self.c.pick(3) == 0 { d() } else { e() };
                env.push((x.clone(), ty.clone()));
                let body = self.prop(env, f);
                env.pop();
                if self.c.pick(2) == 0 {
                    exists(&x, ty, body)
                } else {
                    forall(&x, ty, body)
                }
            }
            7 => {
                // redex on an entity
                let x = self.names[self.c.pick(3)].to_string();
                env.push((x.clone(), e()));
                let body = self.prop(env, f);
                env.pop();
                let arg = self.entity(env);
                app(lam(&x, e(), body), arg)
            }
            8 => {
                // redex on a predicate
                let name = ["F", "G"][self.c.pick(2)].to_string();
                env.push((name.clone(), et()));
                let body = self.prop(env, f);
                env.pop();
                let arg = self.predicate(env, f);
                app(lam(&name, et(), body), arg)
            }
            9 => {
                let rels = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ge, Rel::Gt];
                let r = rels[self.c.pick(5)];
                cmp(r, self.degree(env), self.degree(env))
            }
            _ => {
                // redex whose body rebinds a name free in the argument
                let arg = self.entity(env);
                let x = self.names[self.c.pick(3)].to_string();
                let y = self.names[self.c.pick(3)].to_string();
                env.push((x.clone(), e()));
                env.push((y.clone(), e()));
                let body = self.prop(env, f);
                env.pop();
                env.pop();
                app(lam(&x, e(), exists(&y, e(), body)), arg)
            }
        }
    }
}

pub fn random_term(words: Vec<u32>, fuel: u32) -> Term {
    let mut g = TermGen {
        c: Choices::new(words),
        names: ["x", "y", "z"],
    };
    g.prop(&mut Vec::new(), fuel)
}

fn words() -> impl Strategy<Value = Vec<u32>> {
    vec(any::<u32>(), 8..64)
}

/// Beta normal forms are fixed points, normal, and keep the type of the redex.
pub fn beta_suite(deterministic: bool) -> Result<(), String> {
    runner(deterministic)
        .run(&(words(), 1u32..6), |(w, fuel)| {
            let t = random_term(w, fuel);
            let before = type_check(&t, &BTreeMap::new());
            prop_assert!(before.is_ok(), "generator produced ill-typed {}", print_term(&t));
            let n = beta_reduce(&t);
            prop_assert!(is_beta_normal(&n), "not normal: {}", print_term(&n));
            prop_assert!(alpha_eq(&beta_reduce(&n), &n));
            prop_assert_eq!(type_check(&n, &BTreeMap::new()), before);
            prop_assert!(n.free_vars().is_subset(&t.free_vars()));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

const ATOMS: [&str; 4] = ["(p a)", "(p b)", "(q a)", "(q b)"];

fn ground_formula(c: &mut Choices, fuel: u32) -> Term {
    let atoms: Vec<Term> = ATOMS.iter().map(|a| read_term(a, &UnitTable::default()).unwrap()).collect();
    if fuel == 0 {
        return match c.pick(7) {
            0 => Term::Top,
            1 => Term::Bot,
            2 => cmp(Rel::Lt, int(c.pick(3) as i64), int(c.pick(3) as i64)),
            k => atoms[k - 3].clone(),
        };
    }
    match c.pick(6) {
        0 => not(ground_formula(c, fuel - 1)),
        1 => and(ground_formula(c, fuel - 1), ground_formula(c, fuel - 1)),
        2 => or(ground_formula(c, fuel - 1), ground_formula(c, fuel - 1)),
        3 => imp(ground_formula(c, fuel - 1), ground_formula(c, fuel - 1)),
        _ => ground_formula(c, 0),
    }
}

fn eval(t: &Term, val: &BTreeMap<String, bool>) -> bool {
    match t {
        Term::Top => true,
        Term::Bot => false,
        Term::Not(a) => !eval(a, val),
        Term::And(a, b) => eval(a, val) && eval(b, val),
        Term::Or(a, b) => eval(a, val) || eval(b, val),
        Term::Imp(a, b) => !eval(a, val) || eval(b, val),
        Term::Cmp(r, a, b) => match (&**a, &**b) {
            (Term::Arith(comparative_nli::logic::Arith::Int(x)), Term::Arith(comparative_nli::logic::Arith::Int(y))) => {
                r.holds(&Rational::from_integer(x.clone()), &Rational::from_integer(y.clone()))
            }
            _ => panic!("non-ground comparison {}", print_term(t)),
        },
        other => val[&print_term(other)],
    }
}

/// Simplification preserves the truth value of ground formulas under every valuation.
pub fn simplify_suite(deterministic: bool) -> Result<(), String> {
    runner(deterministic)
        .run(&(words(), 0u32..5), |(w, fuel)| {
            let f = ground_formula(&mut Choices::new(w), fuel);
            let s = simplify(&f);
            for bits in 0..(1u32 << ATOMS.len()) {
                let val: BTreeMap<String, bool> =
                    ATOMS.iter().enumerate().map(|(i, a)| (a.to_string(), bits >> i & 1 == 1)).collect();
                prop_assert_eq!(eval(&f, &val), eval(&s, &val), "{} vs {}", print_term(&f), print_term(&s));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

const NAMES: [&str; 4] = ["John", "Bob", "Mary", "Chris"];
const ADJS: [&str; 5] = ["tall", "short", "large", "heavy", "old"];
const CMPS: [&str; 5] = ["taller", "shorter", "larger", "heavier", "older"];
const NUMS: [&str; 4] = ["2", "5", "ten", "fifty"];
const UNITS: [&str; 3] = ["cm", "feet", "inches"];
const NOUNS: [&str; 3] = ["dogs", "apples", "campers"];
const NOUN_SG: [&str; 3] = ["dog", "animal", "camper"];

pub fn random_sentence(c: &mut Choices) -> String {
    let n1 = NAMES[c.pick(4)];
    let n2 = NAMES[c.pick(4)];
    let a = ADJS[c.pick(5)];
    let k = CMPS[c.pick(5)];
    let num = NUMS[c.pick(4)];
    let u = UNITS[c.pick(3)];
    let ns = NOUNS[c.pick(3)];
    let sg = NOUN_SG[c.pick(3)];
    match c.pick(14) {
        0 => format!("{n1} is {a}."),
        1 => format!("{n1} is not {a}."),
        2 => format!("{n1} is {k} than {n2}."),
        3 => format!("{n1} is as {a} as {n2}."),
        4 => format!("{n1} is {num} {u} {a}."),
        5 => format!("{n1} is {num} {u} {k} than {n2}."),
        6 => format!("{n1} is {k} than {num} {u}."),
        7 => format!("{n1} is very {a}."),
        8 => format!("{n1} is a {a} {sg}."),
        9 => format!("{n1} is not {k} than {n2}."),
        10 => format!("Most {ns} are {a}."),
        11 => format!("{n1} has {num} {ns}."),
        12 => format!("{n1} is more than {num} {u} {a}."),
        _ => {
            // word salad from the same vocabulary
            let pool: Vec<&str> = NAMES
                .iter()
                .chain(&ADJS)
                .chain(&CMPS)
                .chain(&NUMS)
                .chain(&["is", "not", "than", "as", "very", "a", "more", "every"])
                .copied()
                .collect();
            let len = 1 + c.pick(6);
            (0..len).map(|_| pool[c.pick(pool.len())]).collect::<Vec<_>>().join(" ")
        }
    }
}

/// Every derivation spans exactly the input tokens and is built by valid rule steps,
/// before and after tree rewriting.
pub fn parse_suite(deterministic: bool) -> Result<(), String> {
    let lex = Lexicon::fragment();
    let rules = RuleSet::standard();
    runner(deterministic)
        .run(&words(), |w| {
            let s = random_sentence(&mut Choices::new(w));
            let tokens = merge_multiword(&tokenize(&s), &rules);
            for strategy in [ParseStrategy::Left, ParseStrategy::Right] {
                let Ok(trees) = parse_with(&tokens, &lex, strategy) else { continue };
                for t in &trees {
                    prop_assert_eq!(&t.yield_tokens(), &tokens, "{}", s);
                    prop_assert!(check_derivation(t), "{}: {}", s, t.bracketed());
                    if let Ok(r) = apply_all(t, &rules) {
                        prop_assert_eq!(&r.yield_tokens(), &tokens);
                        prop_assert!(check_derivation(&r), "{}: {}", s, r.bracketed());
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn answer() -> impl Strategy<Value = Answer> {
    prop_oneof![Just(Answer::Yes), Just(Answer::No), Just(Answer::Unknown)]
}

/// Aggregation is commutative and idempotent with unknown as identity.
pub fn combine_suite(deterministic: bool) -> Result<(), String> {
    runner(deterministic)
        .run(&(answer(), answer()), |(a, b)| {
            prop_assert_eq!(combine_answers(a, b), combine_answers(b, a));
            prop_assert_eq!(combine_answers(a, a), a);
            prop_assert_eq!(combine_answers(a, Answer::Unknown), a);
            prop_assert_eq!(combine_answers(Answer::Unknown, a), a);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

const GRADABLE: [(&str, &str); 8] = [
    ("tall", "length"),
    ("short", "length"),
    ("large", "size"),
    ("small", "size"),
    ("heavy", "weight"),
    ("light", "weight"),
    ("old", "age"),
    ("young", "age"),
];

/// The axioms instantiated for any set of gradable predicates, together with positive
/// facts about them, have a model over a one-entity domain.
pub fn axiom_suite(deterministic: bool) -> Result<(), String> {
    let kb = LexicalKb::standard();
    let grid: Vec<Rational> = (0..3).map(|i| Rational::from_integer(i.into())).collect();
    let mut cfg = OracleConfig::new(1);
    for dim in ["length", "size", "weight", "age", "count"] {
        let sort = if dim == "count" { Sort::Count } else { Sort::measure(dim) };
        cfg = cfg.grid(sort, grid.clone());
    }
    runner(deterministic)
        .run(&(vec(0usize..8, 1..3), vec((0usize..8, 0usize..3), 0..3), any::<bool>()), |(preds, facts, many)| {
            let mut formulas = Vec::new();
            let units = UnitTable::default();
            for &p in &preds {
                let (name, dim) = GRADABLE[p];
                formulas.push(read_term(&format!("(exists x:e (exists d:d:{dim} ({name} x d)))"), &units).unwrap());
            }
            if many {
                formulas.push(read_term("(exists x:e (exists d:d:count (many x d)))", &units).unwrap());
            }
            let mut premises = Vec::new();
            for (p, v) in facts {
                let (name, dim) = GRADABLE[p];
                if kb.is_negative(name) {
                    continue;
                }
                let t = format!("(exists x:e (exists d:d:{dim} (and ({name} x d) (= d {v}/1))))");
                premises.push(read_term(&t, &units).unwrap());
            }
            let axioms = axioms_for(formulas.iter().chain(&premises), &kb).unwrap();
            prop_assert!(!axioms.is_empty());
            let task = ProofTask::new(axioms, premises, Term::Bot, Budget::default()).unwrap();
            let v = ground_oracle(&task, &cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(v, OracleVerdict::NotEntailed);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Printing then reading a term gives it back.
pub fn text_round_trip_suite(deterministic: bool) -> Result<(), String> {
    runner(deterministic)
        .run(&(words(), 0u32..6), |(w, fuel)| {
            let t = beta_reduce(&random_term(w, fuel));
            let back = read_term(&print_term(&t), &UnitTable::default());
            prop_assert!(back.is_ok(), "{}", print_term(&t));
            prop_assert!(alpha_eq(&back.unwrap(), &t), "{}", print_term(&t));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub type Suite = fn(bool) -> Result<(), String>;

pub fn property_suites() -> Vec<(&'static str, Suite)> {
    vec![
        ("beta reduction: idempotence and subject reduction", beta_suite),
        ("simplify: truth preservation on ground formulas", simplify_suite),
        ("parse: yield preservation and derivation soundness", parse_suite),
        ("combine_answers: commutative, idempotent, unknown identity", combine_suite),
        ("axioms: satisfiable on small domains", axiom_suite),
        ("canonical text round trip", text_round_trip_suite),
    ]
}
