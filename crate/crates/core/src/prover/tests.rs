use num_traits::FromPrimitive;

use super::*;
use crate::logic::{read_term, Rational, Sort, Term, UnitTable};

fn rd(s: &str) -> Term {
    read_term(s, &UnitTable::default()).unwrap()
}

fn task(premises: &[&str], goal: &str) -> ProofTask {
    let premises: Vec<Term> = premises.iter().map(|p| rd(p)).collect();
    let goal = rd(goal);
    let axioms = axioms_for(premises.iter().chain([&goal]), &LexicalKb::standard()).unwrap();
    ProofTask::new(axioms, premises, goal, Budget::default()).unwrap()
}

fn proved_and_replayed(t: &ProofTask) -> bool {
    let r = prove(t);
    if let Some(c) = &r.certificate {
        validate(t, c).unwrap();
    }
    r.proved()
}

const JOHN_OVER_6FT: &str = "(exists d:d:length (and (tall john d) (> d 1828.8mm)))";
const BOB_UNDER_5FT: &str = "(exists d:d:length (and (short bob d) (>= 1524mm d)))";
const BOB_NOT_TALLER: &str =
    "(not (exists d:d:length (and (tall bob d) (not (tall john d)))))";

fn feet(x: f64) -> Rational {
    Rational::from_f64(x * 304.8).unwrap()
}

#[test]
fn trivial_tasks() {
    let p = "(p a)";
    let t = ProofTask::new(vec![], vec![rd(p)], rd(p), Budget::default()).unwrap();
    assert!(proved_and_replayed(&t));
    let taut = ProofTask::new(vec![], vec![], rd("(or (p a) (not (p a)))"), Budget::default()).unwrap();
    assert!(proved_and_replayed(&taut));
    let open = ProofTask::new(vec![], vec![], rd("(p a)"), Budget::default()).unwrap();
    assert!(!prove(&open).proved());
}

#[test]
fn rejects_ill_sorted_tasks() {
    let a = rd("(exists d:d:length (tall john d))");
    let b = rd("(exists d:d:count (tall john d))");
    assert!(ProofTask::new(vec![], vec![a], b, Budget::default()).is_err());
    let open = crate::logic::app(
        crate::logic::app(rd("(lambda x:e (lambda d:d:length (tall x d)))"), rd("john")),
        Term::Var("d".into(), SemType::Degree(Sort::measure("length"))),
    );
    assert!(ProofTask::new(vec![], vec![], open, Budget::default()).is_err());
}

#[test]
fn taller_and_shorter_than_measures() {
    let t = task(&[JOHN_OVER_6FT, BOB_UNDER_5FT], BOB_NOT_TALLER);
    assert!(proved_and_replayed(&t));
    let v = decide(&t.premises, &t.goal, &LexicalKb::standard(), Budget::default()).unwrap();
    assert_eq!(v.answer, Answer::Yes);
    assert_eq!(v.entailment, Attempt::Proved);
}

#[test]
fn integer_tightening() {
    // more than 4 and fewer than 5 cannot both hold of a count
    let t = ProofTask::new(
        vec![],
        vec![rd("(exists n:d:count (and (< 4 n) (< n 5)))")],
        Term::Bot,
        Budget::default(),
    )
    .unwrap();
    assert!(proved_and_replayed(&t));
    let r = ProofTask::new(
        vec![],
        vec![rd("(exists n:d:length (and (< 4mm n) (< n 5mm)))")],
        Term::Bot,
        Budget::default(),
    )
    .unwrap();
    assert!(!prove(&r).proved());
}

#[test]
fn decide_three_ways() {
    let kb = LexicalKb::standard();
    let b = Budget::default();
    let p: Vec<Term> = vec![rd(JOHN_OVER_6FT), rd(BOB_UNDER_5FT)];
    let h = rd("(exists d:d:length (and (tall john d) (not (tall bob d))))");
    assert_eq!(decide(&p, &h, &kb, b).unwrap().answer, Answer::Yes);
    let h_no = rd("(not (exists d:d:length (and (tall john d) (not (tall bob d)))))");
    let v = decide(&p, &h_no, &kb, b).unwrap();
    assert_eq!(v.answer, Answer::No);
    assert_eq!(v.contradiction, Attempt::Proved);
    let v = decide(&p[..1], &rd(BOB_NOT_TALLER), &kb, b).unwrap();
    assert_eq!(v.answer, Answer::Unknown);
}

#[test]
fn tampered_certificates_are_rejected() {
    let t = task(&[JOHN_OVER_6FT, BOB_UNDER_5FT], BOB_NOT_TALLER);
    let r = prove(&t);
    let cert = r.certificate.unwrap();
    validate(&t, &cert).unwrap();
    let mut dropped = cert.clone();
    dropped.clauses.pop();
    let last_used = validate(&t, &dropped).is_err();
    let mut swapped = cert.clone();
    swapped.refutation = Refutation::ClauseConflict { clause: 0 };
    assert!(validate(&t, &swapped).is_err());
    let other = task(&[JOHN_OVER_6FT], BOB_NOT_TALLER);
    assert!(validate(&other, &cert).is_err());
    let _ = last_used;
}

#[test]
fn szs_lines() {
    assert!(read_szs("% SZS status Theorem for x").unwrap().proved());
    let t = read_szs("% SZS status Timeout for x").unwrap();
    assert_eq!(t.status, ProofStatus::NotProvedWithinBudget);
    assert!(t.stats.timed_out);
    let c = read_szs("SZS status CounterSatisfiable").unwrap();
    assert!(c.stats.counter_satisfiable && !c.proved());
    assert!(matches!(read_szs("segmentation fault"), Err(ProverError::UnparseableOutput(_))));
}

#[test]
fn tff_output() {
    let single = ProofTask::new(vec![rd("p")], vec![], Term::Top, Budget::default());
    // a bare proposition constant
    let single = single.unwrap_or_else(|_| {
        ProofTask::new(vec![rd("(p a)")], vec![], Term::Top, Budget::default()).unwrap()
    });
    let text = emit_tff(&single);
    assert_eq!(text.matches(", axiom,").count(), 1);
    assert!(!text.contains("conjecture"));
    let t = task(&[JOHN_OVER_6FT, BOB_UNDER_5FT], BOB_NOT_TALLER);
    let text = emit_tff(&t);
    assert_eq!(text, emit_tff(&t));
    assert!(text.contains("tall: (entity * $rat) > $o"));
    assert!(text.contains("tff(goal, conjecture,"));
    assert!(text.contains("$greater("));
}

#[test]
fn tff_round_trip() {
    let mut t = task(&[JOHN_OVER_6FT, BOB_UNDER_5FT], BOB_NOT_TALLER);
    t.premises.push(rd("(forall d:d:length (imp (tall harry (- d 50.8mm)) (tall mary d)))"));
    t.premises.push(rd("(exists x:e (and (dog x) (many x (theta many count U))))"));
    t.premises.push(rd("(not (exists x:e (exists d:d:count (and (boy x) (and (many x d) (< 5 d))))))"));
    let back = read_tff(&emit_tff(&t), &UnitTable::default()).unwrap();
    assert_eq!(back.axioms.len(), t.axioms.len());
    for (a, b) in t.formulas().zip(back.formulas()) {
        assert!(crate::logic::alpha_eq(a, b), "{a}\n{b}");
    }
}

#[test]
fn oracle_examples() {
    let t = task(&[JOHN_OVER_6FT, BOB_UNDER_5FT], BOB_NOT_TALLER);
    let grid: Vec<Rational> = [4.9, 5.0, 6.0, 6.1].iter().map(|f| feet(*f)).collect();
    let cfg = OracleConfig::new(2).grid(Sort::measure("length"), grid);
    assert_eq!(ground_oracle(&t, &cfg).unwrap(), OracleVerdict::Entailed);
    let p = ProofTask::new(vec![], vec![rd("(p a)")], rd("(p a)"), Budget::default()).unwrap();
    assert_eq!(ground_oracle(&p, &OracleConfig::new(2)).unwrap(), OracleVerdict::Entailed);
    let q = ProofTask::new(vec![], vec![rd("(p a)")], rd("(p b)"), Budget::default()).unwrap();
    assert_eq!(ground_oracle(&q, &OracleConfig::new(2)).unwrap(), OracleVerdict::NotEntailed);
    let big = OracleConfig {
        cap: 16,
        ..cfg.clone()
    };
    assert!(matches!(ground_oracle(&t, &big), Err(ProverError::DomainTooLarge(_))));
    let coarse = OracleConfig::new(2).grid(Sort::measure("length"), vec![feet(5.0)]);
    let pinned = task(&["(tall john 1524mm)"], "(tall john 1828.8mm)");
    assert_eq!(ground_oracle(&pinned, &coarse).unwrap(), OracleVerdict::Inconclusive);
}
