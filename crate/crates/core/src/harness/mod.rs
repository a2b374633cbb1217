//! Problem ingestion, the per-problem pipeline, answer aggregation and evaluation reports.

mod ingest;
mod report;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::{parse_with, tokenize, DerivTree, Lexicon, Strategy};
use crate::logic::{print_term, Formula};
use crate::prover::{
    axioms_for, decide_with, emit_tff, Answer, Attempt, Backend, Budget, Cached, ExternalProver, Internal,
    ProofCache, ProofTask, Verdict,
};
use crate::semantics::{assign, compose, SemContext};
use crate::transform::{apply_all, merge_multiword, RuleSet};

pub use ingest::{ingest_fracas, ingest_jsonl, parse_fracas, parse_jsonl};
pub use report::{majority_baseline, ProblemReport, RunReport, StrategyOutcome, Summary, TagStats};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("{0}")]
    Io(String),
    #[error("configuration: {0}")]
    Config(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gold {
    Yes,
    No,
    Unknown,
    Unlabeled,
}

impl Gold {
    pub fn answer(self) -> Option<Answer> {
        match self {
            Gold::Yes => Some(Answer::Yes),
            Gold::No => Some(Answer::No),
            Gold::Unknown => Some(Answer::Unknown),
            Gold::Unlabeled => None,
        }
    }

    pub fn parse(s: &str) -> Option<Gold> {
        match s.trim().to_ascii_lowercase().as_str() {
            "yes" | "entailment" => Some(Gold::Yes),
            "no" | "contradiction" => Some(Gold::No),
            "unknown" | "neutral" => Some(Gold::Unknown),
            "undef" | "unlabeled" | "" => Some(Gold::Unlabeled),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub id: String,
    pub premises: Vec<String>,
    pub hypothesis: String,
    pub gold: Gold,
    #[serde(default)]
    pub tags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProverChoice {
    Internal,
    External(ExternalProver),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyChoice {
    Left,
    Right,
    Both,
}

impl StrategyChoice {
    pub fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyChoice::Left => vec![Strategy::Left],
            StrategyChoice::Right => vec![Strategy::Right],
            StrategyChoice::Both => vec![Strategy::Left, Strategy::Right],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub lexicon: Lexicon,
    pub rules: RuleSet,
    pub sem: SemContext,
    pub budget: Budget,
    pub prover: ProverChoice,
    pub strategy: StrategyChoice,
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            lexicon: Lexicon::fragment(),
            rules: RuleSet::standard(),
            sem: SemContext::default(),
            budget: Budget::default(),
            prover: ProverChoice::Internal,
            strategy: StrategyChoice::Both,
            workers: 1,
        }
    }
}

/// Furthest pipeline stage a problem reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Parse,
    Sem,
    Prove,
    Done,
}

/// A sentence's chosen derivation and logical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceArtifacts {
    pub sentence: String,
    pub tree: Option<String>,
    pub lf: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOutcome {
    pub verdict: Verdict,
    pub stage: Stage,
    pub error: Option<String>,
    pub sentences: Vec<SentenceArtifacts>,
    /// The entailment task as TFF, when every sentence got a logical form.
    pub tff: Option<String>,
}

/// A sentence's derivation (after rewriting) and logical form under one parse strategy.
/// Derivations are tried in rank order until one composes.
pub fn analyze(sentence: &str, config: &Config, strategy: Strategy) -> Result<(DerivTree, Formula), (Stage, String)> {
    let tokens = merge_multiword(&tokenize(sentence), &config.rules);
    let trees = parse_with(&tokens, &config.lexicon, strategy).map_err(|e| (Stage::Parse, e.to_string()))?;
    if trees.is_empty() {
        return Err((Stage::Parse, format!("no derivation for {sentence:?}")));
    }
    let mut first_err = None;
    for t in &trees {
        let attempt = apply_all(t, &config.rules)
            .map_err(|e| e.to_string())
            .and_then(|t| {
                let a = assign(&t, &config.sem).map_err(|e| e.to_string())?;
                let f = compose(&a, &config.sem).map_err(|e| e.to_string())?;
                Ok((t, f))
            });
        match attempt {
            Ok(r) => return Ok(r),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err((Stage::Sem, first_err.unwrap_or_default()))
}

fn unknown() -> Verdict {
    Verdict {
        answer: Answer::Unknown,
        entailment: Attempt::Skipped,
        contradiction: Attempt::Skipped,
    }
}

fn run_inner(problem: &Problem, config: &Config, strategy: Strategy, cache: &ProofCache) -> PipelineOutcome {
    let mut sentences = Vec::new();
    let mut lfs = Vec::new();
    let mut failure: Option<(Stage, String)> = None;
    for s in problem.premises.iter().chain(std::iter::once(&problem.hypothesis)) {
        match analyze(s, config, strategy) {
            Ok((tree, lf)) => {
                sentences.push(SentenceArtifacts {
                    sentence: s.clone(),
                    tree: Some(tree.bracketed()),
                    lf: Some(print_term(&lf)),
                });
                lfs.push(lf);
            }
            Err((stage, msg)) => {
                sentences.push(SentenceArtifacts {
                    sentence: s.clone(),
                    tree: None,
                    lf: None,
                });
                if failure.as_ref().is_none_or(|(st, _)| stage < *st) {
                    failure = Some((stage, format!("{s:?}: {msg}")));
                }
            }
        }
    }
    if let Some((stage, msg)) = failure {
        return PipelineOutcome {
            verdict: unknown(),
            stage,
            error: Some(msg),
            sentences,
            tff: None,
        };
    }
    let hypothesis = lfs.pop().expect("hypothesis analyzed");
    let tff = axioms_for(lfs.iter().chain([&hypothesis]), &config.sem.kb)
        .ok()
        .and_then(|ax| ProofTask::new(ax, lfs.clone(), hypothesis.clone(), config.budget).ok())
        .map(|t| emit_tff(&t));
    let result = match &config.prover {
        ProverChoice::Internal => decide_with(
            &Cached {
                inner: Internal,
                cache,
            },
            &lfs,
            &hypothesis,
            &config.sem.kb,
            config.budget,
        ),
        ProverChoice::External(p) => decide_with(p as &dyn Backend, &lfs, &hypothesis, &config.sem.kb, config.budget),
    };
    match result {
        Ok(verdict) => PipelineOutcome {
            verdict,
            stage: Stage::Done,
            error: None,
            sentences,
            tff,
        },
        Err(e) => PipelineOutcome {
            verdict: unknown(),
            stage: Stage::Prove,
            error: Some(e.to_string()),
            sentences,
            tff,
        },
    }
}

/// Runs one problem end to end under one parse strategy. Failures at any stage give
/// `unknown` with the stage and message recorded; nothing escapes.
pub fn run_pipeline(problem: &Problem, config: &Config, strategy: Strategy) -> PipelineOutcome {
    run_pipeline_cached(problem, config, strategy, &ProofCache::new())
}

pub fn run_pipeline_cached(problem: &Problem, config: &Config, strategy: Strategy, cache: &ProofCache) -> PipelineOutcome {
    catch_unwind(AssertUnwindSafe(|| run_inner(problem, config, strategy, cache))).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "internal error".into());
        PipelineOutcome {
            verdict: unknown(),
            stage: Stage::Parse,
            error: Some(format!("internal error: {msg}")),
            sentences: vec![],
            tff: None,
        }
    })
}

/// Aggregates the answers obtained under two parse strategies: agreement stands,
/// a definite answer beats unknown, and yes against no gives unknown.
pub fn combine_answers(a: Answer, b: Answer) -> Answer {
    match (a, b) {
        (x, y) if x == y => x,
        (Answer::Unknown, x) | (x, Answer::Unknown) => x,
        _ => Answer::Unknown,
    }
}

/// Runs every problem under the configured strategies on `config.workers` threads.
pub fn evaluate(problems: &[Problem], config: &Config) -> RunReport {
    use rayon::prelude::*;
    let cache = ProofCache::new();
    let run_one = |p: &Problem| -> ProblemReport {
        let start = Instant::now();
        let outcomes: Vec<(Strategy, PipelineOutcome)> = config
            .strategy
            .strategies()
            .into_iter()
            .map(|s| (s, run_pipeline_cached(p, config, s, &cache)))
            .collect();
        ProblemReport::new(p, outcomes, start.elapsed().as_millis() as u64)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .expect("thread pool");
    let reports: Vec<ProblemReport> = pool.install(|| problems.par_iter().map(run_one).collect());
    RunReport::new(reports)
}

#[cfg(test)]
mod tests;
