//! Typed lambda terms, first-order formulas over degrees, and the machinery to normalize them.

mod alpha;
mod reduce;
mod simplify;
pub mod syntax;
mod term;
mod typecheck;
mod types;
mod units;

use thiserror::Error;

pub use alpha::alpha_eq;
pub use reduce::{beta_reduce, is_beta_normal};
pub use simplify::simplify;
pub use syntax::{pretty, print_term, read_term, read_type};
pub use term::*;
pub use typecheck::{resolve_sorts, type_check, TypeChecker};
pub use types::{SemType, Sort};
pub use units::{fold_constants, normalize_units, UnitTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("type mismatch: expected {expected}, found {found} in {context}")]
    TypeMismatch {
        expected: String,
        found: String,
        context: String,
    },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("unknown unit {0}")]
    UnknownUnit(String),
    #[error("mixed dimensions {0} and {1}")]
    MixedDimension(String, String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A closed, beta-normal proposition: the logical form of a sentence.
pub type Formula = Term;

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn rd(s: &str) -> Term {
        read_term(s, &UnitTable::default()).unwrap()
    }

    fn e_d_t() -> SemType {
        SemType::curried([SemType::Entity, SemType::Degree(Sort::measure("length"))], SemType::Prop)
    }

    #[test]
    fn type_check_examples() {
        let env = BTreeMap::new();
        assert_eq!(type_check(&entity("john"), &env).unwrap(), SemType::Entity);
        let t = app(cnst("tall", e_d_t()), entity("john"));
        assert_eq!(
            type_check(&t, &env).unwrap(),
            SemType::fun(SemType::Degree(Sort::measure("length")), SemType::Prop)
        );
        let bad = app(entity("john"), entity("bob"));
        assert!(matches!(type_check(&bad, &env), Err(LogicError::TypeMismatch { .. })));
        let free = var("x", SemType::Entity);
        assert!(matches!(type_check(&free, &env), Err(LogicError::UnboundVariable(_))));
    }

    #[test]
    fn sort_variables_unify_through_application() {
        let poly = rd("(lambda A:(e -> d:?0 -> t) (exists d:d:?0 (A john d)))");
        let t = app(poly, cnst("tall", e_d_t()));
        let (resolved, ty) = resolve_sorts(&beta_reduce(&t)).unwrap();
        assert_eq!(ty, SemType::Prop);
        assert!(alpha_eq(&resolved, &rd("(exists d:d:length (tall john d))")));
    }

    #[test]
    fn beta_reduce_examples() {
        let id = app(lam("x", SemType::Entity, var("x", SemType::Entity)), entity("john"));
        assert_eq!(beta_reduce(&id), entity("john"));
        let inner = lam(
            "x",
            SemType::Entity,
            app(lam("y", SemType::Entity, var("y", SemType::Entity)), var("x", SemType::Entity)),
        );
        assert!(alpha_eq(&beta_reduce(&inner), &lam("x", SemType::Entity, var("x", SemType::Entity))));
    }

    #[test]
    fn beta_reduce_root_step_of_john_is_taller_than_bob() {
        // subject: λF1 F2.(F1(j) ∧ F2(j)); predicate: λQ.∃δ1.Q(λw.⊤, λx.(tall(x,δ1) ∧ ⊤ ∧ ⊤ ∧ ¬tall(b,δ1)))
        let subject = rd("(lambda F1:(e -> t) (lambda F2:(e -> t) (and (F1 j) (F2 j))))");
        let vp = rd(
            "(lambda Q:((e -> t) -> (e -> t) -> t) (exists d1:d:length \
             (Q (lambda w:e true) (lambda x:e (and (tall x d1) (and true (and true (not (tall b d1)))))))))",
        );
        let root = beta_reduce(&app(vp, subject));
        let expected = rd(
            "(exists d1:d:length (and true (and (tall j d1) (and true (and true (not (tall b d1)))))))",
        );
        assert!(alpha_eq(&root, &expected), "{root}");
        assert!(alpha_eq(
            &simplify(&root),
            &rd("(exists d:d:length (and (tall j d) (not (tall b d))))")
        ));
    }

    #[test]
    fn substitution_avoids_capture() {
        // (λx.λy.x) y  must not capture the free y
        let t = app(
            lam("x", SemType::Entity, lam("y", SemType::Entity, var("x", SemType::Entity))),
            var("y", SemType::Entity),
        );
        let r = beta_reduce(&t);
        match &r {
            Term::Abs(b, _, body) => {
                assert_ne!(b, "y");
                assert_eq!(**body, var("y", SemType::Entity));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn simplify_examples() {
        let atom = rd("(tall j d)");
        assert_eq!(simplify(&atom), atom);
        assert_eq!(simplify(&and(Term::Top, Term::Top)), Term::Top);
        assert_eq!(simplify(&not(Term::Top)), Term::Bot);
        let nn = not(not(rd("(p a)")));
        assert_eq!(simplify(&nn), nn);
    }

    #[test]
    fn alpha_eq_examples() {
        assert!(alpha_eq(
            &rd("(exists d:d:length (and (tall j d) (not (tall b d))))"),
            &rd("(exists d9:d:length (and (tall j d9) (not (tall b d9))))")
        ));
        assert!(!alpha_eq(
            &rd("(exists d:d:length (tall j d))"),
            &rd("(exists d:d:length (tall b d))")
        ));
        assert!(alpha_eq(
            &lam("x", SemType::Entity, var("x", SemType::Entity)),
            &lam("y", SemType::Entity, var("y", SemType::Entity))
        ));
    }

    #[test]
    fn normalize_units_examples() {
        let table = UnitTable::default();
        assert_eq!(normalize_units(&rd("4feet"), &table).unwrap(), rd("1219.2mm"));
        assert_eq!(normalize_units(&rd("2inches"), &table).unwrap(), rd("50.8mm"));
        assert_eq!(normalize_units(&int(3), &table).unwrap(), int(3));
        assert_eq!(normalize_units(&rd("(measure cm 170)"), &table).unwrap(), rd("1700mm"));
        let unknown = Term::Arith(Arith::Rat {
            value: Rational::from_integer(2.into()),
            unit: Some(Unit::new("furlong", "length")),
        });
        assert!(matches!(normalize_units(&unknown, &table), Err(LogicError::UnknownUnit(_))));
        let mut t2 = UnitTable::default();
        t2.add("g", "weight", Rational::from_integer(1.into()), &[]);
        let mixed = sum(rd("2cm"), read_term("3g", &t2).unwrap());
        assert!(matches!(normalize_units(&mixed, &t2), Err(LogicError::MixedDimension(..))));
    }

    #[test]
    fn canonical_text_round_trips() {
        for s in [
            "(exists d:d:length (and (tall john d) (> d (theta tall length U))))",
            "(forall d:d:length (imp (tall harry (- d 50.8mm)) (tall mary d)))",
            "(lambda F:(e -> t) (F john))",
            "(exists x:e (and (have mary x) (and (dog x) (many x (theta many count x)))))",
            "(not (exists x:e (exists d:d:count (and (boy x) (and (many x d) (< 5 d))))))",
            "(lambda n:d:count (measure inch n))",
            "(app:(e -> e) john)",
        ] {
            let t = rd(s);
            assert_eq!(print_term(&t), s);
        }
    }
}
