use super::term::{Arith, Term};

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    eq(a, b, &mut Vec::new())
}

fn eq<'a>(a: &'a Term, b: &'a Term, bound: &mut Vec<(&'a str, &'a str)>) -> bool {
    match (a, b) {
        (Term::Var(x, tx), Term::Var(y, ty)) => {
            let lx = bound.iter().rposition(|(l, _)| *l == x.as_str());
            let ly = bound.iter().rposition(|(_, r)| *r == y.as_str());
            match (lx, ly) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y && tx == ty,
                _ => false,
            }
        }
        (Term::Const(x, tx), Term::Const(y, ty)) => x == y && tx == ty,
        (Term::Abs(x, tx, bx), Term::Abs(y, ty, by))
        | (Term::Exists(x, tx, bx), Term::Exists(y, ty, by))
        | (Term::Forall(x, tx, bx), Term::Forall(y, ty, by)) => {
            if tx != ty {
                return false;
            }
            bound.push((x, y));
            let r = eq(bx, by, bound);
            bound.pop();
            r
        }
        (Term::App(f1, a1), Term::App(f2, a2))
        | (Term::And(f1, a1), Term::And(f2, a2))
        | (Term::Or(f1, a1), Term::Or(f2, a2))
        | (Term::Imp(f1, a1), Term::Imp(f2, a2)) => eq(f1, f2, bound) && eq(a1, a2, bound),
        (Term::Cmp(r1, a1, b1), Term::Cmp(r2, a2, b2)) => {
            r1 == r2 && eq(a1, a2, bound) && eq(b1, b2, bound)
        }
        (Term::Not(x), Term::Not(y)) => eq(x, y, bound),
        (Term::Top, Term::Top) | (Term::Bot, Term::Bot) => true,
        (Term::Arith(x), Term::Arith(y)) => match (x, y) {
            (Arith::Int(m), Arith::Int(n)) => m == n,
            (Arith::Rat { value: v1, unit: u1 }, Arith::Rat { value: v2, unit: u2 }) => {
                v1 == v2 && u1 == u2
            }
            (
                Arith::Threshold {
                    adjective: a1,
                    class: c1,
                    sort: s1,
                },
                Arith::Threshold {
                    adjective: a2,
                    class: c2,
                    sort: s2,
                },
            ) => a1 == a2 && s1 == s2 && eq(c1, c2, bound),
            (Arith::Sum(a1, b1), Arith::Sum(a2, b2)) | (Arith::Diff(a1, b1), Arith::Diff(a2, b2)) => {
                eq(a1, a2, bound) && eq(b1, b2, bound)
            }
            (
                Arith::Scaled {
                    amount: a1,
                    unit: u1,
                },
                Arith::Scaled {
                    amount: a2,
                    unit: u2,
                },
            ) => u1 == u2 && eq(a1, a2, bound),
            _ => false,
        },
        _ => false,
    }
}
