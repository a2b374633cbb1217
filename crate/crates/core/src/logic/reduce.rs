use super::term::Term;

/// Beta-normal form by leftmost-outermost reduction with capture-avoiding substitution.
///
/// Terminates on simply-typed input.
pub fn beta_reduce(term: &Term) -> Term {
    match term {
        Term::App(f, a) => {
            let f = beta_reduce(f);
            match f {
                Term::Abs(x, _, body) => beta_reduce(&body.subst(&x, a)),
                f => Term::App(Box::new(f), Box::new(beta_reduce(a))),
            }
        }
        _ => term.map_children(&mut beta_reduce),
    }
}

pub fn is_beta_normal(term: &Term) -> bool {
    match term {
        Term::App(f, _) if matches!(**f, Term::Abs(..)) => false,
        _ => term.children().into_iter().all(is_beta_normal),
    }
}
