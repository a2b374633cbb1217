use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use comparative_nli::axioms::LexicalKb;
use comparative_nli::grammar::{parse_with, tokenize, Lexicon};
use comparative_nli::harness::{
    analyze, evaluate, ingest_fracas, ingest_jsonl, Config, ProverChoice, StrategyChoice,
};
use comparative_nli::logic::{pretty, print_term};
use comparative_nli::prover::{Budget, ExternalProver};
use comparative_nli::semantics::{SemContext, TemplateTable};
use comparative_nli::transform::{apply_all, merge_multiword};

#[derive(Parser)]
#[command(name = "cnli", version, about = "Natural language inference with comparatives and degree semantics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true, value_enum, default_value = "internal")]
    prover: ProverKind,
    /// External prover command; `{file}` and `{timeout}` are substituted.
    #[arg(long, global = true)]
    prover_cmd: Option<String>,
    #[arg(long, global = true, default_value_t = 10_000)]
    timeout_ms: u64,
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    templates: Option<PathBuf>,
    #[arg(long, global = true)]
    kb: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "both")]
    strategy: StrategyArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProverKind {
    Internal,
    External,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Tree,
    Lf,
    Tff,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    FracasXml,
}

#[derive(Subcommand)]
enum Command {
    /// Print the derivations of a sentence.
    Parse { sentence: String },
    /// Print the logical form of a sentence.
    Sem { sentence: String },
    /// Decide the problems of a JSON-lines file.
    Prove { problems: PathBuf },
    /// Evaluate a dataset and print a summary table.
    Eval {
        dataset: PathBuf,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
        /// Write the JSON-lines report here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn config(opts: &Opts) -> Result<Config, String> {
    let lexicon = match &opts.lexicon {
        Some(p) => Lexicon::load(p).map_err(|e| e.to_string())?,
        None => Lexicon::fragment(),
    };
    let templates = match &opts.templates {
        Some(p) => TemplateTable::load(p).map_err(|e| e.to_string())?,
        None => TemplateTable::standard(),
    };
    let kb = match &opts.kb {
        Some(p) => LexicalKb::load(p).map_err(|e| e.to_string())?,
        None => LexicalKb::standard(),
    };
    let prover = match opts.prover {
        ProverKind::Internal => ProverChoice::Internal,
        ProverKind::External => ProverChoice::External(ExternalProver {
            command: opts
                .prover_cmd
                .clone()
                .ok_or("--prover external needs --prover-cmd")?,
        }),
    };
    Ok(Config {
        lexicon,
        rules: comparative_nli::transform::RuleSet::standard(),
        sem: SemContext { templates, kb },
        budget: Budget {
            timeout_ms: opts.timeout_ms,
            depth: opts.depth,
        },
        prover,
        strategy: match opts.strategy {
            StrategyArg::Left => StrategyChoice::Left,
            StrategyArg::Right => StrategyChoice::Right,
            StrategyArg::Both => StrategyChoice::Both,
        },
        workers: opts.workers,
    })
}

fn load_problems(path: &Path, format: Format) -> Result<Vec<comparative_nli::harness::Problem>, String> {
    match format {
        Format::Jsonl => ingest_jsonl(path),
        Format::FracasXml => ingest_fracas(path),
    }
    .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<(), String> {
    let cfg = config(&cli.opts)?;
    match cli.command {
        Command::Parse { sentence } => {
            let tokens = merge_multiword(&tokenize(&sentence), &cfg.rules);
            for s in cfg.strategy.strategies() {
                match parse_with(&tokens, &cfg.lexicon, s) {
                    Ok(trees) if trees.is_empty() => println!("{s:?}: no derivation"),
                    Ok(trees) => {
                        for t in trees.iter().take(1) {
                            let t = apply_all(t, &cfg.rules).map_err(|e| e.to_string())?;
                            println!("{s:?}: {}", t.bracketed());
                        }
                    }
                    Err(e) => println!("{s:?}: {e}"),
                }
            }
        }
        Command::Sem { sentence } => {
            for s in cfg.strategy.strategies() {
                match analyze(&sentence, &cfg, s) {
                    Ok((tree, lf)) => {
                        if cli.opts.emit == Some(Emit::Tree) {
                            println!("{s:?}: {}", tree.bracketed());
                        }
                        println!("{s:?}: {}", print_term(&lf));
                        println!("  {}", pretty(&lf));
                    }
                    Err((stage, msg)) => println!("{s:?}: failed at {stage:?}: {msg}"),
                }
            }
        }
        Command::Prove { problems } => {
            let problems = load_problems(&problems, Format::Jsonl)?;
            let report = evaluate(&problems, &cfg);
            for p in &report.problems {
                println!("{}: {}", p.id, p.answer);
                match cli.opts.emit {
                    Some(Emit::Tree) => p.sentences.iter().for_each(|s| println!("  {}", s.tree.as_deref().unwrap_or("-"))),
                    Some(Emit::Lf) => p.sentences.iter().for_each(|s| println!("  {}", s.lf.as_deref().unwrap_or("-"))),
                    Some(Emit::Tff) => print!("{}", p.tff.as_deref().unwrap_or("")),
                    None => {}
                }
            }
        }
        Command::Eval { dataset, format, output } => {
            let problems = load_problems(&dataset, format)?;
            let report = evaluate(&problems, &cfg);
            print!("{}", report.table());
            if let Some(out) = output {
                std::fs::write(&out, report.jsonl(true)).map_err(|e| format!("{}: {e}", out.display()))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
