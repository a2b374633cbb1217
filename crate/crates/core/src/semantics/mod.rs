//! Template assignment and compositional construction of logical forms.

pub mod templates;

use crate::axioms::LexicalKb;
use crate::grammar::{Base, Category, DerivTree, Dir, Rule};
use crate::logic::{
    and, app, beta_reduce, exists, lam, normalize_units, not, resolve_sorts, simplify, Formula,
    LogicError, SemType, Sort, Term, TypeChecker,
};

pub use templates::{Fill, TemplateTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("no template for `{token}` ({key}, {category})")]
    NoTemplate {
        token: String,
        key: String,
        category: String,
    },
    #[error("template `{key}`: {msg}")]
    BadTemplate { key: String, msg: String },
    #[error("template file line {line}: {msg}")]
    TemplateFile { line: usize, msg: String },
    #[error("type error composing {node}: {msg}")]
    CompositionTypeError { node: String, msg: String },
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("{0}")]
    Io(String),
}

/// Everything composition needs besides the tree.
#[derive(Clone, Debug)]
pub struct SemContext {
    pub templates: TemplateTable,
    pub kb: LexicalKb,
}

impl Default for SemContext {
    fn default() -> Self {
        SemContext {
            templates: TemplateTable::standard(),
            kb: LexicalKb::standard(),
        }
    }
}

/// A derivation whose leaves carry their lexical terms, in leaf order.
#[derive(Clone, Debug)]
pub struct Annotated {
    pub tree: DerivTree,
    pub leaf_terms: Vec<Term>,
}

const SORT_STRIDE: u32 = 64;

fn gq() -> SemType {
    let p = SemType::fun(SemType::Entity, SemType::Prop);
    SemType::curried([p.clone(), p], SemType::Prop)
}

/// Semantic type of a category. Degree positions of adjective phrases get sort `?0`.
pub fn category_type(cat: &Category) -> SemType {
    let d = SemType::Degree(Sort::Var(0));
    let p = SemType::fun(SemType::Entity, SemType::Prop);
    let a = SemType::curried([SemType::Entity, d.clone()], SemType::Prop);
    let c = SemType::curried([d.clone(), d.clone()], SemType::Prop);
    let th = SemType::fun(SemType::Entity, d.clone());
    let sh = SemType::curried([d.clone(), d.clone()], d.clone());
    let std = SemType::curried([a.clone(), c.clone(), d.clone()], SemType::Prop);
    let shape = SemType::curried([a, c, th, sh.clone(), sh, std.clone(), gq()], SemType::Prop);
    let adj = SemType::curried([shape.clone(), shape, std, gq()], SemType::Prop);
    match cat {
        Category::Atom { base, feature } => match (base, feature.as_deref()) {
            (Base::S, _) => SemType::Prop,
            (Base::NP | Base::PP, _) => gq(),
            (Base::N, Some("num")) => SemType::Degree(Sort::Count),
            (Base::N, Some("msr")) => d,
            (Base::N, _) => p,
        },
        Category::Slash { result, dir: Dir::Bwd, arg }
            if result.is_atom(Base::S) && result.feature() == Some("adj") && arg.is_atom(Base::NP) =>
        {
            adj
        }
        Category::Slash { result, arg, .. } => SemType::fun(category_type(arg), category_type(result)),
    }
}

fn fill_for(token: &str, key_lemma: Option<&str>, kb: &LexicalKb) -> Fill {
    let base = key_lemma.map(str::to_string).unwrap_or_else(|| token.to_lowercase());
    Fill {
        scale: kb.scale(&base).to_string(),
        dim: kb.dimension(&base).map(str::to_string),
        base,
    }
}

/// Attaches a closed lexical term to every leaf.
pub fn assign(tree: &DerivTree, ctx: &SemContext) -> Result<Annotated, SemanticsError> {
    let mut leaf_terms = Vec::new();
    for (i, leaf) in tree.leaves().into_iter().enumerate() {
        let cat = leaf_category(tree, i).expect("leaf index in range");
        let fill = fill_for(&leaf.token, leaf.key.lemma.as_deref(), &ctx.kb);
        let term = ctx
            .templates
            .instantiate(&leaf.key.name, &cat, &fill, &ctx.kb.units, (i as u32 + 1) * SORT_STRIDE)?
            .ok_or_else(|| SemanticsError::NoTemplate {
                token: leaf.token.clone(),
                key: leaf.key.to_string(),
                category: cat.to_string(),
            })?;
        leaf_terms.push(term);
    }
    Ok(Annotated {
        tree: tree.clone(),
        leaf_terms,
    })
}

fn leaf_category(tree: &DerivTree, index: usize) -> Option<Category> {
    fn go(t: &DerivTree, index: usize, seen: &mut usize) -> Option<Category> {
        if t.leaf.is_some() {
            let hit = *seen == index;
            *seen += 1;
            return hit.then(|| t.cat.clone());
        }
        t.children.iter().find_map(|c| go(c, index, seen))
    }
    go(tree, index, &mut 0)
}

fn infer(term: &Term, node: &DerivTree) -> Result<SemType, SemanticsError> {
    let mut tc = TypeChecker::for_term(term);
    let ty = tc
        .infer(term, &mut Vec::new())
        .map_err(|e| SemanticsError::CompositionTypeError {
            node: format!("{} [{}]", node.cat, node.rule.label()),
            msg: e.to_string(),
        })?;
    Ok(tc.resolve(&ty))
}

fn fresh_var(term: &Term, base: &str) -> String {
    let mut names = std::collections::BTreeSet::new();
    term.all_var_names(&mut names);
    crate::logic::fresh_name(base, &names)
}

/// Type-driven lexical raise: entities become `λF1 F2. F1(j) ∧ F2(j)`, properties
/// become indefinites.
fn lex_raise(child: Term, ty: &SemType) -> Option<Term> {
    let p = SemType::fun(SemType::Entity, SemType::Prop);
    let f1 = Term::Var("F1".into(), p.clone());
    let f2 = Term::Var("F2".into(), p.clone());
    let body = match ty {
        SemType::Entity => and(app(f1, child.clone()), app(f2, child)),
        t if *t == p => {
            let x = fresh_var(&child, "x");
            let xv = Term::Var(x.clone(), SemType::Entity);
            exists(
                &x,
                SemType::Entity,
                and(app(child, xv.clone()), and(app(f1, xv.clone()), app(f2, xv))),
            )
        }
        _ => return None,
    };
    Some(lam("F1", p.clone(), lam("F2", p, body)))
}

fn build(t: &DerivTree, terms: &mut std::slice::Iter<'_, Term>) -> Result<Term, SemanticsError> {
    if t.leaf.is_some() {
        return Ok(terms.next().expect("one term per leaf").clone());
    }
    let kids: Vec<Term> = t
        .children
        .iter()
        .map(|c| build(c, terms))
        .collect::<Result<_, _>>()?;
    let term = match (t.rule, kids.as_slice()) {
        (Rule::FwdApp, [l, r]) => app(l.clone(), r.clone()),
        (Rule::BwdApp, [l, r]) => app(r.clone(), l.clone()),
        (Rule::FwdComp, [l, r]) | (Rule::BwdComp, [r, l]) => {
            // f ∘ g, with g applied first
            let (f, g) = (l.clone(), r.clone());
            let gty = infer(&g, t)?;
            let SemType::Fun(arg, _) = gty else {
                return Err(SemanticsError::CompositionTypeError {
                    node: t.cat.to_string(),
                    msg: format!("cannot compose with a term of type {gty}"),
                });
            };
            let x = fresh_var(&app(f.clone(), g.clone()), "z");
            lam(&x, (*arg).clone(), app(f, app(g, Term::Var(x.clone(), (*arg).clone()))))
        }
        (Rule::LexRaise, [c]) => {
            let ty = infer(c, t)?;
            lex_raise(c.clone(), &ty).ok_or_else(|| SemanticsError::CompositionTypeError {
                node: t.cat.to_string(),
                msg: format!("cannot raise a term of type {ty}"),
            })?
        }
        (Rule::UnaryFeature, [c]) => c.clone(),
        _ => {
            return Err(SemanticsError::CompositionTypeError {
                node: t.cat.to_string(),
                msg: "malformed node".into(),
            })
        }
    };
    infer(&term, t)?;
    Ok(term)
}

fn default_sorts(t: &Term) -> Term {
    t.map_types(&mut |ty| {
        ty.map_sorts(&mut |s| match s {
            Sort::Var(_) => Sort::measure("generic"),
            other => other.clone(),
        })
    })
}

/// Applies the leaf terms along the derivation, then beta-reduces, normalizes units and
/// simplifies. The result is a closed proposition.
pub fn compose(annotated: &Annotated, ctx: &SemContext) -> Result<Formula, SemanticsError> {
    let tree = &annotated.tree;
    let raw = build(tree, &mut annotated.leaf_terms.iter())?;
    let (typed, ty) = resolve_sorts(&raw).map_err(|e| SemanticsError::CompositionTypeError {
        node: tree.cat.to_string(),
        msg: e.to_string(),
    })?;
    if ty != SemType::Prop {
        return Err(SemanticsError::CompositionTypeError {
            node: tree.cat.to_string(),
            msg: format!("sentence denotes {ty}, not t"),
        });
    }
    let reduced = default_sorts(&beta_reduce(&typed));
    let normal = normalize_units(&reduced, &ctx.kb.units)?;
    let f = simplify(&normal);
    if !f.is_closed() {
        return Err(SemanticsError::CompositionTypeError {
            node: tree.cat.to_string(),
            msg: "logical form has free variables".into(),
        });
    }
    Ok(f)
}

/// Sentential negation of a logical form.
pub fn negate_sentence(f: &Formula) -> Formula {
    simplify(&not(f.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse, tokenize, Lexicon};
    use crate::logic::{alpha_eq, print_term, read_term};
    use crate::transform::{apply_all, merge_multiword, RuleSet};

    fn lf(sentence: &str) -> Formula {
        let rules = RuleSet::standard();
        let ctx = SemContext::default();
        let toks = merge_multiword(&tokenize(sentence), &rules);
        let trees = parse(&toks, &Lexicon::fragment()).unwrap();
        assert!(!trees.is_empty(), "no parse for {sentence}");
        let t = apply_all(&trees[0], &rules).unwrap();
        compose(&assign(&t, &ctx).unwrap(), &ctx).unwrap()
    }

    fn expect(sentence: &str, want: &str) {
        let got = lf(sentence);
        let want = read_term(want, &crate::logic::UnitTable::default()).unwrap();
        assert!(alpha_eq(&got, &want), "{sentence}\n got  {}\n want {}", print_term(&got), print_term(&want));
    }

    #[test]
    fn table_one() {
        expect("John is tall.", "(exists d:d:length (and (tall john d) (> d (theta tall length U))))");
        expect("John is taller than Bob.", "(exists d:d:length (and (tall john d) (not (tall bob d))))");
        expect(
            "Ann has more children than Bob.",
            "(exists d:d:count (and (exists x:e (and (child x) (have ann x) (many x d))) \
             (not (exists x:e (and (child x) (have bob x) (many x d))))))",
        );
        expect("John is as tall as Bob.", "(forall d:d:length (imp (tall bob d) (tall john d)))");
        expect(
            "Mary is 2 inches taller than Harry.",
            "(forall d:d:length (imp (tall harry (- d 50.8mm)) (tall mary d)))",
        );
        expect(
            "John ate 3 more cookies than Bob.",
            "(forall d:d:count (imp (exists x:e (and (cookie x) (eat bob x) (many x (- d 3)))) \
             (exists x:e (and (cookie x) (eat john x) (many x d)))))",
        );
    }

    #[test]
    fn table_two() {
        expect(
            "Mary has many dogs.",
            "(exists x:e (and (have mary x) (dog x) (many x (theta many count x))))",
        );
        expect("Ann read two books.", "(exists x:e (and (read ann x) (book x) (many x 2)))");
        expect(
            "Most apples are red.",
            "(exists d:d:count (and (exists x:e (and (apple x) (red x) (many x d))) \
             (not (exists x:e (and (apple x) (not (red x)) (many x d))))))",
        );
        expect(
            "No more than five boys ran.",
            "(not (exists x:e (exists d:d:count (and (boy x) (many x d) (< 5 d) (run x)))))",
        );
    }

    #[test]
    fn measure_phrases() {
        expect("John is 5 feet tall.", "(tall john 1524mm)");
        expect("Bob is 170 cm tall.", "(tall bob 1700mm)");
        expect("John is taller than 6 feet.", "(exists d:d:length (and (tall john d) (> d 1828.8mm)))");
        expect("John is more than 4 feet tall.", "(exists d:d:length (and (tall john d) (> d 1219.2mm)))");
        expect("Bob is shorter than 5 feet.", "(exists d:d:length (and (short bob d) (>= 1524mm d)))");
    }

    #[test]
    fn negation() {
        expect("Bob is not taller than John.", "(not (exists d:d:length (and (tall bob d) (not (tall john d)))))");
        expect("John is not tall.", "(not (exists d:d:length (and (tall john d) (> d (theta tall length U)))))");
        let f = lf("John is taller than Bob.");
        let twice = negate_sentence(&negate_sentence(&f));
        assert!(alpha_eq(&twice, &not(not(f.clone()))));
        expect(
            "Mickey is a small animal.",
            "(and (animal mickey) (exists d:d:size (and (small mickey d) (<= d (theta large size U)))))",
        );
    }

    #[test]
    fn leaf_terms() {
        let ctx = SemContext::default();
        let john = DerivTree::leaf("John", "N".parse().unwrap(), crate::grammar::SemKey::new("name", Some("john")));
        let a = assign(&john, &ctx).unwrap();
        assert_eq!(a.leaf_terms, [crate::logic::entity("john")]);
        let odd = DerivTree::leaf("zork", "N/N".parse().unwrap(), crate::grammar::SemKey::new("zork", None));
        assert!(matches!(assign(&odd, &ctx), Err(SemanticsError::NoTemplate { .. })));
    }

    #[test]
    fn lexicon_templates_match_categories() {
        let ctx = SemContext::default();
        let lex = include_str!("../../data/lexicon.tsv");
        let mut checked = 0;
        for line in lex.lines().filter(|l| !l.trim().is_empty() && (!l.starts_with('#') || l.starts_with("#NUM"))) {
            let cols: Vec<&str> = line.split('\t').collect();
            let cat: Category = cols[1].parse().unwrap();
            let key = crate::grammar::SemKey::parse(cols[2]);
            let token = if cols[0] == "#NUM" { "7" } else { cols[0] };
            let lemma = key.lemma.clone().or_else(|| (cols[0] == "#NUM").then(|| "7".to_string()));
            let leaf = DerivTree::leaf(token, cat.clone(), crate::grammar::SemKey { name: key.name.clone(), lemma });
            let a = assign(&leaf, &ctx).unwrap_or_else(|e| panic!("{line}: {e}"));
            let term = &a.leaf_terms[0];
            assert!(term.is_closed(), "{line}");
            let mut tc = TypeChecker::for_term(term);
            let ty = tc.infer(term, &mut Vec::new()).unwrap_or_else(|e| panic!("{line}: {e}"));
            let mut want = category_type(&cat);
            want = want.map_sorts(&mut |_| tc.fresh_sort());
            let name_ok = key.name == "name" && ty == SemType::Entity;
            assert!(name_ok || tc.unify(&ty, &want).is_ok(), "{line}: {ty} vs {want}");
            checked += 1;
        }
        assert!(checked > 200);
    }
}
