mod common;

#[test]
fn beta_reduction() {
    common::beta_suite(false).unwrap();
}

#[test]
fn simplify_preserves_truth() {
    common::simplify_suite(false).unwrap();
}

#[test]
fn parse_yield_and_soundness() {
    common::parse_suite(false).unwrap();
}

#[test]
fn combine_answers_algebra() {
    common::combine_suite(false).unwrap();
}

#[test]
fn axioms_are_satisfiable() {
    common::axiom_suite(false).unwrap();
}

#[test]
fn text_round_trip() {
    common::text_round_trip_suite(false).unwrap();
}
