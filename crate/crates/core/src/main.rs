use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use synconn::calculus::{ConnectiveSpec, Side};
use synconn::classify::classify;
use synconn::cut::check_main_cut_step;
use synconn::doi::{check_doi, DoiError, DoiMode};
use synconn::dsl::{builtin_corpus, parse_spec, Format, ParseError};
use synconn::fuzz::{run_fuzz, FuzzConfig};
use synconn::generator::{GenBounds, GenError, MutationKind};
use synconn::reflection::check_reflection;
use synconn::report::{
    analyze, classification_json, classification_text, cut_json, cut_text, doi_json, doi_text, equation_json,
    equation_text, summarize, AnalysisReport, AnalyzeOptions,
};

#[derive(Parser)]
#[command(name = "synconn", version, about = "Analyze sequent-calculus rules of n-ary connectives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check and the equivalence test on the connectives of a file.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        doi: DoiFlags,
        #[arg(long)]
        verbose: bool,
    },
    /// Analyze the built-in corpus and compare with its expected verdicts.
    Corpus {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Deducibility of identicals only.
    CheckDoi {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        doi: DoiFlags,
        #[arg(long)]
        verbose: bool,
    },
    /// Principal cut reduction for every right/left rule pair.
    CheckCut {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        verbose: bool,
    },
    /// Solve both definitional equations.
    DeriveReflection {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        verbose: bool,
    },
    /// Synthetic-connective classification.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Check the equivalence over generated connectives and their mutants.
    Fuzz {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = GenBounds::default().max_arity)]
        max_arity: usize,
        #[arg(long, default_value_t = GenBounds::default().max_branches)]
        max_branches: usize,
        #[arg(long, default_value_t = GenBounds::default().max_group)]
        max_group: usize,
        #[arg(long, value_enum, default_value = "all")]
        mutate: MutateArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Args)]
struct Input {
    /// Rule file.
    file: PathBuf,
    /// Only this connective of the file.
    #[arg(long)]
    connective: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct DoiFlags {
    #[arg(long, value_enum, default_value = "two-phase")]
    doi_mode: DoiMode,
    /// Depth bound for the bounded search.
    #[arg(long)]
    max_depth: Option<usize>,
}

impl DoiFlags {
    fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions { doi_mode: self.doi_mode, max_depth: self.max_depth }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MutateArg {
    All,
    None,
    Context,
    Multiform,
    Mismatch,
    Drop,
}

impl MutateArg {
    fn kinds(self) -> Vec<MutationKind> {
        match self {
            MutateArg::All => MutationKind::ALL.to_vec(),
            MutateArg::None => Vec::new(),
            MutateArg::Context => vec![MutationKind::ContextChange],
            MutateArg::Multiform => vec![MutationKind::MultiFormation],
            MutateArg::Mismatch => vec![MutationKind::SideMismatch],
            MutateArg::Drop => vec![MutationKind::DropRule],
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: no connective named {name}")]
    UnknownConnective { path: String, name: String },
    #[error("{0}: defines no connectives")]
    Empty(String),
    #[error(transparent)]
    Doi(#[from] DoiError),
    #[error(transparent)]
    Bounds(#[from] GenError),
}

/// Exit status: 0 consistent, 1 a violation was found.
type Outcome = Result<bool, CliError>;

fn load(input: &Input) -> Result<Vec<ConnectiveSpec>, CliError> {
    let path = input.file.display().to_string();
    let text = std::fs::read_to_string(&input.file).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let specs = parse_spec(&text).map_err(|source| CliError::Parse { path: path.clone(), source })?;
    let specs: Vec<ConnectiveSpec> = match &input.connective {
        Some(name) => {
            let found: Vec<ConnectiveSpec> = specs.into_iter().filter(|s| &s.name == name).collect();
            if found.is_empty() {
                return Err(CliError::UnknownConnective { path, name: name.clone() });
            }
            found
        }
        None => specs,
    };
    if specs.is_empty() {
        return Err(CliError::Empty(display_name(&input.file)));
    }
    Ok(specs)
}

fn display_name(p: &Path) -> String {
    p.display().to_string()
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

/// One object for a single connective, an array otherwise.
fn one_or_many(values: Vec<Value>) -> Value {
    if values.len() == 1 {
        values.into_iter().next().expect("one value")
    } else {
        Value::Array(values)
    }
}

fn run_analyze(input: &Input, flags: &DoiFlags, verbose: bool) -> Outcome {
    let specs = load(input)?;
    let mut reports = Vec::new();
    for s in &specs {
        reports.push(analyze(s, flags.options())?);
    }
    let summary = summarize(reports.iter().map(|r| (r.spec.name.as_str(), r)));
    match input.format {
        Format::Json => print_json(&one_or_many(reports.iter().map(AnalysisReport::to_json).collect())),
        Format::Text => {
            let texts: Vec<String> = reports.iter().map(|r| r.render_text(verbose)).collect();
            print!("{}", texts.join("\n"));
            if reports.len() > 1 || !summary.is_clean() {
                println!();
                print!("{}", summary.render_text());
            }
        }
    }
    Ok(summary.is_clean())
}

fn run_corpus(format: Format) -> Outcome {
    let corpus = builtin_corpus();
    let specs: Vec<ConnectiveSpec> = corpus.iter().map(|e| e.spec.clone()).collect();
    let reports = synconn::report::analyze_all(&specs);
    let summary = summarize(reports.iter().map(|r| (r.spec.name.as_str(), r)));
    let mut all_match = true;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (e, r) in corpus.iter().zip(&reports) {
        let v = r.verdicts();
        let actual = json!({
            "doi": v.doi,
            "main_cut": v.main_cut,
            "left_solvable": r.reflection.left.solvable,
            "right_solvable": r.reflection.right.solvable,
            "reflection": v.reflection,
            "synthetic": v.synthetic,
            "scheme": r.classification.scheme.map(|s| s.to_string()),
        });
        let x = e.expected;
        let expected = json!({
            "doi": x.doi,
            "main_cut": x.main_cut,
            "left_solvable": x.left_solvable,
            "right_solvable": x.right_solvable,
            "reflection": x.reflection,
            "synthetic": x.synthetic,
            "scheme": x.scheme.map(|s| s.to_string()),
        });
        let matches = actual == expected;
        all_match &= matches;
        let mark = |b: bool| if b { "yes" } else { "no" };
        rows.push(format!(
            "{:<15} {:>4} {:>4} {:>5} {:>5} {:>10} {:>9} {:>6}  {}",
            e.spec.name,
            mark(v.doi),
            mark(v.main_cut),
            mark(r.reflection.left.solvable),
            mark(r.reflection.right.solvable),
            mark(v.reflection),
            mark(v.synthetic),
            r.classification.scheme.map_or("-".to_string(), |s| s.to_string()),
            if matches { "as expected" } else { "UNEXPECTED" }
        ));
        entries.push(json!({"connective": e.spec.name, "expected": expected, "actual": actual, "matches": matches}));
    }
    match format {
        Format::Text => {
            println!("{:<15} {:>4} {:>4} {:>5} {:>5} {:>10} {:>9} {:>6}", "connective", "doi", "cut", "left", "right", "reflection", "synthetic", "scheme");
            for r in rows {
                println!("{r}");
            }
            println!();
            print!("{}", summary.render_text());
        }
        Format::Json => print_json(&json!({"entries": entries, "summary": summary.to_json()})),
    }
    Ok(all_match && summary.is_clean())
}

fn run_check_doi(input: &Input, flags: &DoiFlags, verbose: bool) -> Outcome {
    let specs = load(input)?;
    let mut values = Vec::new();
    for s in &specs {
        let r = check_doi(s, flags.doi_mode, flags.max_depth)?;
        match input.format {
            Format::Text => print!("{}: {}", s.name, doi_text(&r, verbose)),
            Format::Json => values.push(json!({"connective": s.name, "doi": doi_json(&r)})),
        }
    }
    if input.format == Format::Json {
        print_json(&one_or_many(values));
    }
    Ok(true)
}

fn run_check_cut(input: &Input, verbose: bool) -> Outcome {
    let specs = load(input)?;
    let mut values = Vec::new();
    for s in &specs {
        let r = check_main_cut_step(s);
        match input.format {
            Format::Text => print!("{}: {}", s.name, cut_text(&r, verbose)),
            Format::Json => values.push(json!({"connective": s.name, "main_cut": cut_json(&r)})),
        }
    }
    if input.format == Format::Json {
        print_json(&one_or_many(values));
    }
    Ok(true)
}

fn run_derive_reflection(input: &Input, verbose: bool) -> Outcome {
    let specs = load(input)?;
    let mut values = Vec::new();
    for s in &specs {
        let v = check_reflection(s);
        match input.format {
            Format::Text => {
                println!("{}:", s.name);
                for side in [Side::Left, Side::Right] {
                    print!("{}", equation_text(v.side(side), verbose));
                }
                match v.witness_side {
                    Some(side) => println!("reflection: satisfied by the {side} equation"),
                    None => println!("reflection: not satisfied"),
                }
            }
            Format::Json => values.push(json!({
                "connective": s.name,
                "equations": [equation_json(&v.left), equation_json(&v.right)],
                "reflection": {"satisfied": v.satisfied, "witness_side": v.witness_side.map(|s| s.as_str())},
            })),
        }
    }
    if input.format == Format::Json {
        print_json(&one_or_many(values));
    }
    Ok(true)
}

fn run_classify(input: &Input) -> Outcome {
    let specs = load(input)?;
    let mut values = Vec::new();
    for s in &specs {
        let c = classify(s);
        match input.format {
            Format::Text => print!("{}: {}", s.name, classification_text(&c)),
            Format::Json => values.push(json!({"connective": s.name, "classification": classification_json(&c)})),
        }
    }
    if input.format == Format::Json {
        print_json(&one_or_many(values));
    }
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Analyze { input, doi, verbose } => run_analyze(&input, &doi, verbose),
        Command::Corpus { format } => run_corpus(format),
        Command::CheckDoi { input, doi, verbose } => run_check_doi(&input, &doi, verbose),
        Command::CheckCut { input, verbose } => run_check_cut(&input, verbose),
        Command::DeriveReflection { input, verbose } => run_derive_reflection(&input, verbose),
        Command::Classify { input } => run_classify(&input),
        Command::Fuzz { count, seed, max_arity, max_branches, max_group, mutate, format } => {
            let bounds = GenBounds { max_arity, max_branches, max_group };
            bounds.validate()?;
            let run = run_fuzz(&FuzzConfig { count, seed, bounds, mutations: mutate.kinds() });
            match format {
                Format::Text => print!("{}", run.render_text()),
                Format::Json => print_json(&run.to_json()),
            }
            Ok(run.summary.is_clean())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
