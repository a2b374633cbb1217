use std::fmt;

use super::category::{Base, Category};
use super::lexicon::SemKey;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Lexical,
    FwdApp,
    BwdApp,
    FwdComp,
    BwdComp,
    /// Unary `N => NP`.
    LexRaise,
    /// Unary change of features only.
    UnaryFeature,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::Lexical => "lex",
            Rule::FwdApp => ">",
            Rule::BwdApp => "<",
            Rule::FwdComp => ">B",
            Rule::BwdComp => "<B",
            Rule::LexRaise => "lex-raise",
            Rule::UnaryFeature => "feat",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Leaf {
    pub token: String,
    pub key: SemKey,
    /// Empty categories inserted by tree transformation have no surface token.
    pub empty: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerivTree {
    pub cat: Category,
    pub rule: Rule,
    pub children: Vec<DerivTree>,
    pub leaf: Option<Leaf>,
}

impl DerivTree {
    pub fn leaf(token: &str, cat: Category, key: SemKey) -> Self {
        DerivTree {
            cat,
            rule: Rule::Lexical,
            children: Vec::new(),
            leaf: Some(Leaf {
                token: token.to_string(),
                key,
                empty: false,
            }),
        }
    }

    pub fn empty_leaf(name: &str, cat: Category) -> Self {
        DerivTree {
            cat,
            rule: Rule::Lexical,
            children: Vec::new(),
            leaf: Some(Leaf {
                token: name.to_string(),
                key: SemKey::new(name, None),
                empty: true,
            }),
        }
    }

    pub fn node(cat: Category, rule: Rule, children: Vec<DerivTree>) -> Self {
        DerivTree {
            cat,
            rule,
            children,
            leaf: None,
        }
    }

    /// Content tokens, left to right; empty categories are skipped.
    pub fn yield_tokens(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk_leaves(&mut |l| {
            if !l.empty {
                out.push(l.token.clone());
            }
        });
        out
    }

    pub fn walk_leaves(&self, f: &mut impl FnMut(&Leaf)) {
        match &self.leaf {
            Some(l) => f(l),
            None => {
                for c in &self.children {
                    c.walk_leaves(f);
                }
            }
        }
    }

    pub fn leaves(&self) -> Vec<&Leaf> {
        fn go<'a>(t: &'a DerivTree, out: &mut Vec<&'a Leaf>) {
            match &t.leaf {
                Some(l) => out.push(l),
                None => t.children.iter().for_each(|c| go(c, out)),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn count_rules(&self, pred: &impl Fn(Rule) -> bool) -> usize {
        usize::from(pred(self.rule)) + self.children.iter().map(|c| c.count_rules(pred)).sum::<usize>()
    }

    /// Number of binary nodes whose left (resp. right) child is itself binary.
    pub fn branching(&self) -> (usize, usize) {
        let mut l = 0;
        let mut r = 0;
        if self.children.len() == 2 {
            if self.children[0].children.len() == 2 {
                l += 1;
            }
            if self.children[1].children.len() == 2 {
                r += 1;
            }
        }
        for c in &self.children {
            let (cl, cr) = c.branching();
            l += cl;
            r += cr;
        }
        (l, r)
    }

    /// Bracketed rendering, stable across runs; used for ordering and golden output.
    pub fn bracketed(&self) -> String {
        match &self.leaf {
            Some(l) if l.empty => format!("({}:{})", l.token, self.cat),
            Some(l) => format!("{}:{}", l.token, self.cat),
            None => {
                let inner: Vec<String> = self.children.iter().map(|c| c.bracketed()).collect();
                format!("[{} {} {}]", self.rule.label(), self.cat, inner.join(" "))
            }
        }
    }

    fn render(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        match &self.leaf {
            Some(l) => {
                let tok = if l.empty { format!("({})", l.token) } else { l.token.clone() };
                out.push_str(&format!("{pad}{tok} := {}\n", self.cat));
            }
            None => {
                out.push_str(&format!("{pad}{} [{}]\n", self.cat, self.rule.label()));
                for c in &self.children {
                    c.render(depth + 1, out);
                }
            }
        }
    }
}

impl fmt::Display for DerivTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        write!(f, "{s}")
    }
}

/// Category a node of this rule would have over the given children.
pub fn derive(rule: Rule, kids: &[DerivTree]) -> Option<Category> {
    match (rule, kids) {
        (Rule::FwdApp, [l, r]) => l.cat.forward_apply(&r.cat),
        (Rule::BwdApp, [l, r]) => r.cat.backward_apply(&l.cat),
        (Rule::FwdComp, [l, r]) => Category::forward_compose(&l.cat, &r.cat),
        (Rule::BwdComp, [l, r]) => Category::backward_compose(&l.cat, &r.cat),
        (Rule::LexRaise, [c]) if c.cat.is_atom(Base::N) => Some(Category::atom(Base::NP, None)),
        _ => None,
    }
}

/// Re-derives every internal node from its children; true iff all nodes agree with their rule.
pub fn check_derivation(tree: &DerivTree) -> bool {
    let kids = &tree.children;
    let ok_here = match tree.rule {
        Rule::Lexical => kids.is_empty() && tree.leaf.is_some(),
        _ if tree.leaf.is_some() => false,
        Rule::FwdApp => {
            kids.len() == 2 && kids[0].cat.forward_apply(&kids[1].cat).as_ref() == Some(&tree.cat)
        }
        Rule::BwdApp => {
            kids.len() == 2 && kids[1].cat.backward_apply(&kids[0].cat).as_ref() == Some(&tree.cat)
        }
        Rule::FwdComp => {
            kids.len() == 2
                && Category::forward_compose(&kids[0].cat, &kids[1].cat).as_ref() == Some(&tree.cat)
        }
        Rule::BwdComp => {
            kids.len() == 2
                && Category::backward_compose(&kids[0].cat, &kids[1].cat).as_ref() == Some(&tree.cat)
        }
        Rule::LexRaise => {
            kids.len() == 1
                && kids[0].cat.is_atom(Base::N)
                && matches!(kids[0].cat.feature(), None | Some("adj"))
                && tree.cat == Category::atom(Base::NP, None)
        }
        Rule::UnaryFeature => {
            kids.len() == 1
                && kids[0].cat != tree.cat
                && kids[0].cat.strip_features() == tree.cat.strip_features()
        }
    };
    ok_here && kids.iter().all(check_derivation)
}
