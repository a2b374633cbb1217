use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::category::{Base, Category};
use super::deriv::{DerivTree, Rule};
use super::lexicon::Lexicon;
use super::GrammarError;

/// Tie-break preference between otherwise equally ranked derivations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Left,
    Right,
}

const CELL_CAP: usize = 64;

type RankKey = (usize, usize, usize, String);

fn rank_key(t: &DerivTree, strategy: Strategy) -> RankKey {
    let unary = t.count_rules(&|r| matches!(r, Rule::LexRaise | Rule::UnaryFeature));
    let comp = t.count_rules(&|r| matches!(r, Rule::FwdComp | Rule::BwdComp));
    let (l, r) = t.branching();
    // fewer branchings on the dispreferred side first
    let side = match strategy {
        Strategy::Left => r,
        Strategy::Right => l,
    };
    (unary, comp, side, t.bracketed())
}

fn combine(l: &DerivTree, r: &DerivTree, out: &mut Vec<DerivTree>) {
    let mut push = |cat: Category, rule: Rule| {
        out.push(DerivTree::node(cat, rule, vec![l.clone(), r.clone()]));
    };
    if let Some(c) = l.cat.forward_apply(&r.cat) {
        push(c, Rule::FwdApp);
    }
    if let Some(c) = r.cat.backward_apply(&l.cat) {
        push(c, Rule::BwdApp);
    }
    if let Some(c) = Category::forward_compose(&l.cat, &r.cat) {
        push(c, Rule::FwdComp);
    }
    if let Some(c) = Category::backward_compose(&l.cat, &r.cat) {
        push(c, Rule::BwdComp);
    }
}

fn add_unary(cell: &mut Vec<DerivTree>) {
    let n = Category::atom(Base::N, None);
    let raised: Vec<DerivTree> = cell
        .iter()
        .filter(|t| t.cat == n)
        .map(|t| DerivTree::node(Category::atom(Base::NP, None), Rule::LexRaise, vec![t.clone()]))
        .collect();
    cell.extend(raised);
}

fn finish_cell(cell: Vec<DerivTree>, strategy: Strategy) -> Vec<DerivTree> {
    let mut seen = HashSet::new();
    let mut keyed: Vec<(RankKey, DerivTree)> = cell
        .into_iter()
        .filter(|t| seen.insert(t.bracketed()))
        .map(|t| (rank_key(&t, strategy), t))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.truncate(CELL_CAP);
    keyed.into_iter().map(|(_, t)| t).collect()
}

/// Chart parse with the default ranking.
pub fn parse(tokens: &[String], lexicon: &Lexicon) -> Result<Vec<DerivTree>, GrammarError> {
    parse_with(tokens, lexicon, Strategy::Left)
}

/// All `S[dcl]` derivations for the tokens, best first under the given strategy.
pub fn parse_with(
    tokens: &[String],
    lexicon: &Lexicon,
    strategy: Strategy,
) -> Result<Vec<DerivTree>, GrammarError> {
    let n = tokens.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    // chart[i][len - 1] spans tokens i..i+len
    let mut chart: Vec<Vec<Vec<DerivTree>>> = vec![vec![Vec::new(); n]; n];
    for (i, tok) in tokens.iter().enumerate() {
        let entries = lexicon.lookup(tok);
        if entries.is_empty() {
            return Err(GrammarError::LexiconMiss(tok.clone()));
        }
        let mut cell: Vec<DerivTree> = entries
            .into_iter()
            .map(|e| DerivTree::leaf(tok, e.category, e.key))
            .collect();
        add_unary(&mut cell);
        chart[i][0] = finish_cell(cell, strategy);
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let mut cell = Vec::new();
            for split in 1..len {
                let (left, right) = (&chart[i][split - 1], &chart[i + split][len - split - 1]);
                for l in left {
                    for r in right {
                        combine(l, r, &mut cell);
                    }
                }
            }
            add_unary(&mut cell);
            chart[i][len - 1] = finish_cell(cell, strategy);
        }
    }
    let root = Category::atom(Base::S, Some("dcl"));
    Ok(chart[0][n - 1]
        .iter()
        .filter(|t| t.cat == root)
        .cloned()
        .collect())
}
