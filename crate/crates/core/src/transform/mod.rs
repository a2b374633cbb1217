//! Derivation-tree rewriting: multiword merging, feature refinement and empty-category
//! insertion.

use std::path::Path;

use crate::grammar::{derive, Category, DerivTree, Rule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("rule file line {line}: {msg}")]
    RuleFormat { line: usize, msg: String },
    #[error("rewriting did not reach a fixpoint after {0} passes")]
    RewriteLoop(usize),
    #[error("{0}")]
    Io(String),
}

pub const MAX_PASSES: usize = 100;

/// The three empty categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmptyName {
    Dgr,
    Eqt,
    Pos,
}

impl EmptyName {
    pub fn as_str(self) -> &'static str {
        match self {
            EmptyName::Dgr => "dgr",
            EmptyName::Eqt => "eqt",
            EmptyName::Pos => "pos",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "dgr" => Some(EmptyName::Dgr),
            "eqt" => Some(EmptyName::Eqt),
            "pos" => Some(EmptyName::Pos),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyCategory {
    pub name: EmptyName,
    pub category: Category,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Context {
    Bare,
    Under(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Tokens(Vec<String>),
    Leaf { cat: Category, keys: Vec<String> },
    AdjPhrase { keys: Vec<String>, context: Context },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Merge(String),
    Relabel(Category),
    Insert(EmptyCategory),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: String,
    pub pattern: Pattern,
    pub action: Action,
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    rules: Vec<RewriteRule>,
}

fn keys_of(field: &str) -> Option<Vec<String>> {
    field
        .strip_prefix("key=")
        .map(|ks| ks.split(',').map(str::to_string).collect())
}

fn parse_pattern(text: &str) -> Result<Pattern, String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    match words.as_slice() {
        ["tokens", rest @ ..] if !rest.is_empty() => {
            Ok(Pattern::Tokens(rest.iter().map(|w| w.to_lowercase()).collect()))
        }
        ["leaf", cat, keys] => Ok(Pattern::Leaf {
            cat: cat.parse().map_err(|e| format!("{e}"))?,
            keys: keys_of(keys).ok_or("expected key=...")?,
        }),
        ["adjphrase", keys, ctx] => {
            let context = match *ctx {
                "bare" => Context::Bare,
                c => Context::Under(c.strip_prefix("under=").ok_or("expected bare or under=KEY")?.to_string()),
            };
            Ok(Pattern::AdjPhrase {
                keys: keys_of(keys).ok_or("expected key=...")?,
                context,
            })
        }
        _ => Err(format!("unrecognized pattern `{text}`")),
    }
}

fn parse_action(text: &str) -> Result<Action, String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    match words.as_slice() {
        ["merge", tok] => Ok(Action::Merge(tok.to_string())),
        ["relabel", cat] => Ok(Action::Relabel(cat.parse().map_err(|e| format!("{e}"))?)),
        ["insert", name, cat] => Ok(Action::Insert(EmptyCategory {
            name: EmptyName::parse(name).ok_or_else(|| format!("unknown empty category `{name}`"))?,
            category: cat.parse().map_err(|e| format!("{e}"))?,
        })),
        _ => Err(format!("unrecognized action `{text}`")),
    }
}

impl RuleSet {
    pub fn parse(text: &str) -> Result<Self, TransformError> {
        let mut rules = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |msg: String| TransformError::RuleFormat { line: n + 1, msg };
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(err(format!("expected 3 tab-separated columns, found {}", cols.len())));
            }
            let pattern = parse_pattern(cols[1]).map_err(err)?;
            let action = parse_action(cols[2]).map_err(err)?;
            let ok = matches!(
                (&pattern, &action),
                (Pattern::Tokens(_), Action::Merge(_))
                    | (Pattern::Leaf { .. }, Action::Relabel(_))
                    | (Pattern::AdjPhrase { .. }, Action::Insert(_))
            );
            if !ok {
                return Err(err("pattern and action kinds do not match".into()));
            }
            rules.push(RewriteRule {
                name: cols[0].to_string(),
                pattern,
                action,
            });
        }
        rules.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(RuleSet { rules })
    }

    pub fn load(path: &Path) -> Result<Self, TransformError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TransformError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The rule set shipped with the crate.
    pub fn standard() -> Self {
        Self::parse(include_str!("../../data/rules.tsv")).expect("bundled rules are well-formed")
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }
}

/// Replaces declared multiword spans by single hyphenated tokens, longest match first.
pub fn merge_multiword(tokens: &[String], rules: &RuleSet) -> Vec<String> {
    let mut spans: Vec<(&Vec<String>, &String)> = rules
        .rules
        .iter()
        .filter_map(|r| match (&r.pattern, &r.action) {
            (Pattern::Tokens(ws), Action::Merge(t)) => Some((ws, t)),
            _ => None,
        })
        .collect();
    spans.sort_by_key(|s| std::cmp::Reverse(s.0.len()));
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    'outer: while i < tokens.len() {
        for (ws, merged) in &spans {
            let end = i + ws.len();
            if end <= tokens.len() && tokens[i..end].iter().zip(ws.iter()).all(|(t, w)| t.to_lowercase() == *w) {
                out.push((*merged).clone());
                i = end;
                continue 'outer;
            }
        }
        out.push(tokens[i].clone());
        i += 1;
    }
    out
}

fn recompute(tree: &mut DerivTree) {
    for c in &mut tree.children {
        recompute(c);
    }
    if tree.rule != Rule::Lexical && tree.rule != Rule::UnaryFeature {
        if let Some(c) = derive(tree.rule, &tree.children) {
            tree.cat = c;
        }
    }
}

fn relabel_leaves(tree: &mut DerivTree, cat: &Category, keys: &[String], to: &Category) -> bool {
    let mut changed = false;
    if let Some(l) = &tree.leaf {
        if tree.cat == *cat && keys.contains(&l.key.name) && tree.cat != *to {
            tree.cat = to.clone();
            changed = true;
        }
    }
    for c in &mut tree.children {
        changed |= relabel_leaves(c, cat, keys, to);
    }
    changed
}

/// Relabels nominal adjective leaves per the relabel rules and recomputes their ancestors.
pub fn refeature(tree: &DerivTree, rules: &RuleSet) -> DerivTree {
    let mut t = tree.clone();
    let mut changed = false;
    for r in &rules.rules {
        if let (Pattern::Leaf { cat, keys }, Action::Relabel(to)) = (&r.pattern, &r.action) {
            changed |= relabel_leaves(&mut t, cat, keys, to);
        }
    }
    if changed {
        recompute(&mut t);
    }
    t
}

fn node_at<'a>(tree: &'a DerivTree, path: &[usize]) -> &'a DerivTree {
    path.iter().fold(tree, |t, &i| &t.children[i])
}

fn node_at_mut<'a>(tree: &'a mut DerivTree, path: &[usize]) -> &'a mut DerivTree {
    path.iter().fold(tree, |t, &i| &mut t.children[i])
}

fn leaf_paths(tree: &DerivTree, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if tree.leaf.is_some() {
        out.push(prefix.clone());
    }
    for (i, c) in tree.children.iter().enumerate() {
        prefix.push(i);
        leaf_paths(c, prefix, out);
        prefix.pop();
    }
}

fn adj_phrase() -> Category {
    "S[adj]\\NP".parse().expect("static category")
}

fn is_modifier(cat: &Category) -> bool {
    let ap = adj_phrase();
    *cat == Category::fwd(ap.clone(), ap)
}

fn is_postmodifier(cat: &Category) -> bool {
    let ap = adj_phrase();
    *cat == Category::bwd(ap.clone(), ap)
}

/// Climbs from an adjective leaf through postmodifiers (than/as phrases, elliptical
/// copulas) and reports the phrase path with its modifier context. `None` means the
/// phrase is the argument of a complex modifier.
fn phrase_context(tree: &DerivTree, leaf: &[usize]) -> (Vec<usize>, Option<Context>) {
    let mut p = leaf.to_vec();
    while let Some((&last, parent_path)) = p.split_last() {
        let parent = node_at(tree, parent_path);
        if parent.rule == Rule::BwdApp && last == 0 && is_postmodifier(&parent.children[1].cat) {
            p.pop();
        } else {
            break;
        }
    }
    if let Some((&last, parent_path)) = p.split_last() {
        let parent = node_at(tree, parent_path);
        if parent.rule == Rule::FwdApp && last == 1 && is_modifier(&parent.children[0].cat) {
            let ctx = parent.children[0]
                .leaf
                .as_ref()
                .map(|l| Context::Under(l.key.name.clone()));
            return (p, ctx);
        }
    }
    (p, Some(Context::Bare))
}

fn first_insertion(tree: &DerivTree, rules: &RuleSet) -> Option<(Vec<usize>, EmptyCategory)> {
    let mut leaves = Vec::new();
    leaf_paths(tree, &mut Vec::new(), &mut leaves);
    for path in leaves {
        let leaf = node_at(tree, &path).leaf.as_ref().expect("leaf path");
        if leaf.empty {
            continue;
        }
        let (phrase, ctx) = phrase_context(tree, &path);
        let Some(ctx) = ctx else { continue };
        for r in &rules.rules {
            if let (Pattern::AdjPhrase { keys, context }, Action::Insert(ec)) = (&r.pattern, &r.action) {
                if keys.contains(&leaf.key.name) && *context == ctx {
                    return Some((phrase, ec.clone()));
                }
            }
        }
    }
    None
}

/// Inserts dgr, eqt or pos above every adjective phrase whose degree position is open.
pub fn insert_empty(tree: &DerivTree, rules: &RuleSet) -> DerivTree {
    let mut t = tree.clone();
    // each content leaf opens at most one degree position
    for _ in 0..tree.yield_tokens().len() {
        let Some((path, ec)) = first_insertion(&t, rules) else {
            break;
        };
        let slot = node_at_mut(&mut t, &path);
        let Some(cat) = ec.category.forward_apply(&slot.cat) else {
            break;
        };
        let old = std::mem::replace(slot, DerivTree::empty_leaf("", Category::atom(crate::grammar::Base::S, None)));
        *slot = DerivTree::node(cat, Rule::FwdApp, vec![DerivTree::empty_leaf(ec.name.as_str(), ec.category), old]);
    }
    t
}

/// Refeature then insert, repeated to a fixpoint.
pub fn apply_all(tree: &DerivTree, rules: &RuleSet) -> Result<DerivTree, TransformError> {
    let mut t = tree.clone();
    for _ in 0..MAX_PASSES {
        let next = insert_empty(&refeature(&t, rules), rules);
        if next == t {
            return Ok(t);
        }
        t = next;
    }
    Err(TransformError::RewriteLoop(MAX_PASSES))
}
