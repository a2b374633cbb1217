use super::term::{and_all, Term};
use super::units::fold_constants;

/// Removes the `⊤` placeholders left by composition and tidies the result.
///
/// Rewrites, bottom-up to a fixpoint: `⊤` units and `⊥` zeros of `∧`/`∨`, `¬⊤ → ⊥`,
/// `¬⊥ → ⊤`, negated order comparisons to the complementary comparison, trivial
/// implications, vacuous quantifiers, and literal arithmetic. Conjunctions are
/// re-associated to the right. Double negation is kept.
pub fn simplify(f: &Term) -> Term {
    let mut cur = f.clone();
    loop {
        let next = step(&cur);
        if next == cur {
            return next;
        }
        cur = next;
    }
}

fn conjuncts(t: Term, out: &mut Vec<Term>) {
    match t {
        Term::And(a, b) => {
            conjuncts(*a, out);
            conjuncts(*b, out);
        }
        Term::Top => {}
        other => out.push(other),
    }
}

fn disjuncts(t: Term, out: &mut Vec<Term>) {
    match t {
        Term::Or(a, b) => {
            disjuncts(*a, out);
            disjuncts(*b, out);
        }
        Term::Bot => {}
        other => out.push(other),
    }
}

fn step(t: &Term) -> Term {
    let t = t.map_children(&mut step);
    match t {
        Term::And(..) => {
            let mut cs = Vec::new();
            conjuncts(t, &mut cs);
            if cs.iter().any(|c| matches!(c, Term::Bot)) {
                Term::Bot
            } else {
                and_all(cs)
            }
        }
        Term::Or(..) => {
            let mut ds = Vec::new();
            disjuncts(t, &mut ds);
            if ds.iter().any(|c| matches!(c, Term::Top)) {
                return Term::Top;
            }
            let mut it = ds.into_iter().rev();
            match it.next() {
                None => Term::Bot,
                Some(last) => it.fold(last, |acc, d| Term::Or(Box::new(d), Box::new(acc))),
            }
        }
        Term::Not(a) => match *a {
            Term::Top => Term::Bot,
            Term::Bot => Term::Top,
            Term::Cmp(r, x, y) => match r.negated() {
                Some(nr) => Term::Cmp(nr, x, y),
                None => Term::Not(Box::new(Term::Cmp(r, x, y))),
            },
            other => Term::Not(Box::new(other)),
        },
        Term::Imp(a, b) => match (*a, *b) {
            (Term::Top, b) => b,
            (Term::Bot, _) | (_, Term::Top) => Term::Top,
            (a, b) => Term::Imp(Box::new(a), Box::new(b)),
        },
        Term::Exists(ref x, _, ref body) | Term::Forall(ref x, _, ref body)
            if !body.free_vars().contains(x) =>
        {
            (**body).clone()
        }
        Term::Arith(_) => fold_constants(&t),
        other => other,
    }
}
