use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::grammar::Strategy;
use crate::prover::{Answer, Attempt};

use super::{combine_answers, Gold, PipelineOutcome, Problem, SentenceArtifacts, Stage};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyOutcome {
    pub strategy: Strategy,
    pub answer: Answer,
    pub stage: Stage,
    pub entailment: Attempt,
    pub contradiction: Attempt,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemReport {
    pub id: String,
    pub tags: Vec<String>,
    pub gold: Gold,
    pub answer: Answer,
    /// `None` for unlabeled problems.
    pub correct: Option<bool>,
    pub stage: Stage,
    pub strategies: Vec<StrategyOutcome>,
    pub sentences: Vec<SentenceArtifacts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tff: Option<String>,
    pub wall_ms: u64,
}

impl ProblemReport {
    pub fn new(p: &Problem, outcomes: Vec<(Strategy, PipelineOutcome)>, wall_ms: u64) -> Self {
        let answer = outcomes
            .iter()
            .map(|(_, o)| o.verdict.answer)
            .reduce(combine_answers)
            .unwrap_or(Answer::Unknown);
        let stage = outcomes.iter().map(|(_, o)| o.stage).max().unwrap_or(Stage::Parse);
        let best = outcomes.iter().find(|(_, o)| o.stage == stage).map(|(_, o)| o);
        ProblemReport {
            id: p.id.clone(),
            tags: p.tags.clone(),
            gold: p.gold,
            answer,
            correct: p.gold.answer().map(|g| g == answer),
            stage,
            strategies: outcomes
                .iter()
                .map(|(s, o)| StrategyOutcome {
                    strategy: *s,
                    answer: o.verdict.answer,
                    stage: o.stage,
                    entailment: o.verdict.entailment,
                    contradiction: o.verdict.contradiction,
                    error: o.error.clone(),
                })
                .collect(),
            sentences: best.map(|o| o.sentences.clone()).unwrap_or_default(),
            tff: best.and_then(|o| o.tff.clone()),
            wall_ms,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TagStats {
    pub problems: usize,
    pub labeled: usize,
    pub correct: usize,
    pub accuracy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub problems: usize,
    pub labeled: usize,
    pub correct: usize,
    pub accuracy: Option<f64>,
    pub per_tag: BTreeMap<String, TagStats>,
    /// gold label -> system answer -> count
    pub confusion: BTreeMap<String, BTreeMap<String, usize>>,
    pub majority_label: Option<Answer>,
    pub majority_accuracy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problems: Vec<ProblemReport>,
    pub summary: Summary,
}

fn ratio(a: usize, b: usize) -> Option<f64> {
    (b > 0).then(|| a as f64 / b as f64)
}

/// Most frequent gold label among labeled problems and the accuracy of always answering it.
/// Ties prefer yes, then no, then unknown.
pub fn majority_baseline(golds: &[Gold]) -> Option<(Answer, f64)> {
    let labeled: Vec<Answer> = golds.iter().filter_map(|g| g.answer()).collect();
    let count = |a: Answer| labeled.iter().filter(|&&x| x == a).count();
    let best = [Answer::Yes, Answer::No, Answer::Unknown]
        .into_iter()
        .max_by_key(|&a| (count(a), std::cmp::Reverse(a)))?;
    ratio(count(best), labeled.len()).map(|acc| (best, acc))
}

impl RunReport {
    pub fn new(problems: Vec<ProblemReport>) -> Self {
        let mut per_tag: BTreeMap<String, TagStats> = BTreeMap::new();
        let mut confusion: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
        for p in &problems {
            for t in &p.tags {
                let s = per_tag.entry(t.clone()).or_default();
                s.problems += 1;
                if let Some(c) = p.correct {
                    s.labeled += 1;
                    s.correct += c as usize;
                }
            }
            if let Some(g) = p.gold.answer() {
                *confusion
                    .entry(g.to_string())
                    .or_default()
                    .entry(p.answer.to_string())
                    .or_default() += 1;
            }
        }
        for s in per_tag.values_mut() {
            s.accuracy = ratio(s.correct, s.labeled);
        }
        let labeled = problems.iter().filter(|p| p.correct.is_some()).count();
        let correct = problems.iter().filter(|p| p.correct == Some(true)).count();
        let golds: Vec<Gold> = problems.iter().map(|p| p.gold).collect();
        let majority = majority_baseline(&golds);
        RunReport {
            summary: Summary {
                problems: problems.len(),
                labeled,
                correct,
                accuracy: ratio(correct, labeled),
                per_tag,
                confusion,
                majority_label: majority.map(|m| m.0),
                majority_accuracy: majority.map(|m| m.1),
            },
            problems,
        }
    }

    /// One JSON object per problem, then the summary. Without timing the output is
    /// byte-identical across runs with the same configuration.
    pub fn jsonl(&self, timing: bool) -> String {
        let mut out = String::new();
        for p in &self.problems {
            let mut p = p.clone();
            if !timing {
                p.wall_ms = 0;
            }
            out.push_str(&serde_json::to_string(&p).expect("serializable"));
            out.push('\n');
        }
        let summary = serde_json::json!({ "summary": self.summary });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }

    pub fn table(&self) -> String {
        let fmt_acc = |a: Option<f64>| a.map_or("-".to_string(), |x| format!("{x:.2}"));
        let mut out = String::new();
        let _ = writeln!(out, "{:<24} {:<8} {:<8} {:<7} {:<6}", "problem", "gold", "answer", "ok", "stage");
        for p in &self.problems {
            let gold = match p.gold.answer() {
                Some(a) => a.to_string(),
                None => "-".into(),
            };
            let ok = match p.correct {
                Some(true) => "yes",
                Some(false) => "NO",
                None => "-",
            };
            let stage = serde_json::to_value(p.stage).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
            let _ = writeln!(out, "{:<24} {:<8} {:<8} {:<7} {:<6}", p.id, gold, p.answer, ok, stage);
        }
        let s = &self.summary;
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<12} {:>8} {:>8} {:>8} {:>8}", "tag", "problems", "labeled", "correct", "accuracy");
        for (t, st) in &s.per_tag {
            let _ = writeln!(
                out,
                "{:<12} {:>8} {:>8} {:>8} {:>8}",
                t,
                st.problems,
                st.labeled,
                st.correct,
                fmt_acc(st.accuracy)
            );
        }
        let _ = writeln!(
            out,
            "{:<12} {:>8} {:>8} {:>8} {:>8}",
            "all",
            s.problems,
            s.labeled,
            s.correct,
            fmt_acc(s.accuracy)
        );
        let _ = writeln!(
            out,
            "majority baseline: {} ({})",
            fmt_acc(s.majority_accuracy),
            s.majority_label.map_or("-".to_string(), |a| a.to_string())
        );
        out
    }
}
