use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use inquiry_core::calculus::{
    cocardinality_valuation, probability_bivaluation, random_covaluation, relevance_bivaluation, verify_all,
    verify_bivaluation, BiValuationFile, LatticeKind, MeasureSpec, VerificationSummary, RANDOM_MAX_WEIGHT,
};
use inquiry_core::{
    boolean_lattice, enumerate_questions, DiagramFormat, Error, FiniteLattice, HypothesisSpace, ProbabilityMeasure,
    Question, QuestionLattice, Rational,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const EXIT_VIOLATIONS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

/// Question lattices, probability and relevance over a finite set of atoms.
#[derive(Debug, Parser)]
#[command(name = "inquiry", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List questions in canonical form, largest answer sets first.
    Enumerate {
        #[command(flatten)]
        space: SpaceArgs,
        /// Only questions answered by every atom.
        #[arg(long)]
        real: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Meet, join or compare two question expressions.
    Query {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(value_enum)]
        op: QueryOp,
        left: String,
        right: String,
    },
    /// Run the rule checkers and report violations.
    Check(CheckArgs),
    /// Write a probability or relevance table as JSON.
    Bivaluation(BivaluationArgs),
    /// Render a Hasse diagram.
    Export {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum)]
        which: Which,
        /// Only questions answered by every atom.
        #[arg(long)]
        real: bool,
        #[arg(long, value_enum, default_value_t = DiagramArg::Dot)]
        format: DiagramArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SpaceArgs {
    /// Comma separated single-letter atom names.
    #[arg(long, value_delimiter = ',', required = true)]
    atoms: Vec<String>,
    /// Permit enumeration over six atoms.
    #[arg(long)]
    allow_six: bool,
}

impl SpaceArgs {
    fn space(&self) -> Result<HypothesisSpace, Failure> {
        Ok(HypothesisSpace::new(&self.atoms)?)
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Atom names; required unless a table is given.
    #[arg(long, value_delimiter = ',', required_unless_present = "bivaluation", conflicts_with = "bivaluation")]
    atoms: Vec<String>,
    /// `uniform`, `random` or a JSON file of atom weights.
    #[arg(long, default_value = "uniform")]
    measure: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random draws; only used with `--measure random`.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Check a table file instead of generated measures.
    #[arg(long)]
    bivaluation: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Violations listed per failing suite in the text report.
    #[arg(long, default_value_t = 10)]
    detail: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BivaluationArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    atoms: Vec<String>,
    #[arg(long, value_enum)]
    lattice: Which,
    /// `uniform`, `random` or a JSON file of atom weights (statements only).
    #[arg(long, default_value = "uniform")]
    measure: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shift the entry for element X in context T.
    #[arg(long, num_args = 2, value_names = ["X", "T"])]
    perturb: Option<Vec<String>>,
    /// Shift applied by `--perturb`, as `p/q` or an integer.
    #[arg(long, default_value = "1/100")]
    delta: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DiagramArg {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Statements,
    Questions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QueryOp {
    Meet,
    Join,
    Leq,
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if e.is_capacity() { EXIT_CAPACITY } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct EnumeratedQuestion {
    canonical: String,
    terms: Vec<String>,
    answers: Vec<String>,
}

#[derive(Serialize)]
struct Enumeration {
    count: usize,
    questions: Vec<EnumeratedQuestion>,
}

fn cmd_enumerate(args: &SpaceArgs, real: bool, format: Format) -> Result<String, Failure> {
    let space = args.space()?;
    match format {
        Format::Dot => {
            let ql = QuestionLattice::new(&space, real, args.allow_six)?;
            Ok(ql.lattice().export(DiagramFormat::Dot))
        }
        Format::Text => {
            let questions = enumerate_questions(&space, real, args.allow_six)?;
            let mut out: String = questions.iter().map(|q| format!("{q}\n")).collect();
            out.push_str(&format!("count: {}\n", questions.len()));
            Ok(out)
        }
        Format::Json => {
            let questions = enumerate_questions(&space, real, args.allow_six)?;
            let doc = Enumeration {
                count: questions.len(),
                questions: questions
                    .iter()
                    .map(|q| {
                        let json = q.to_json();
                        EnumeratedQuestion { canonical: q.canonical_form(), terms: json.terms, answers: json.answers }
                    })
                    .collect(),
            };
            let mut text = serde_json::to_string_pretty(&doc).expect("enumeration serializes");
            text.push('\n');
            Ok(text)
        }
    }
}

fn cmd_query(args: &SpaceArgs, op: QueryOp, left: &str, right: &str) -> Result<String, Failure> {
    let space = args.space()?;
    let a = Question::parse(&space, left)?;
    let b = Question::parse(&space, right)?;
    Ok(match op {
        QueryOp::Meet => format!("{}\n", a.meet(b)?),
        QueryOp::Join => format!("{}\n", a.join(b)?),
        QueryOp::Leq => format!("{}\n", a.answers_question(b)?),
    })
}

fn render(summary: &VerificationSummary, format: ReportFormat, detail: usize) -> String {
    match format {
        ReportFormat::Text => summary.render_table(detail),
        ReportFormat::Json => summary.to_json(),
    }
}

fn measure_spec(space: &HypothesisSpace, measure: &str, seed: u64, trials: u64) -> Result<MeasureSpec, Failure> {
    Ok(match measure {
        "uniform" => MeasureSpec::Uniform,
        "random" => MeasureSpec::Random { seed, trials: trials as usize },
        path => MeasureSpec::Weights(ProbabilityMeasure::from_json(space, &read_file(Path::new(path))?)?),
    })
}

fn cmd_check(args: &CheckArgs) -> Result<bool, Failure> {
    let summary = match &args.bivaluation {
        Some(path) => verify_bivaluation(&BiValuationFile::parse(&read_file(path)?)?.load()?),
        None => {
            let space = HypothesisSpace::new(&args.atoms)?;
            verify_all(&space, &measure_spec(&space, &args.measure, args.seed, args.trials)?)?
        }
    };
    emit(&render(&summary, args.format, args.detail), args.output.as_deref())?;
    Ok(summary.is_clean())
}

fn parse_rational(text: &str) -> Result<Rational, Failure> {
    let bad = || Failure::usage(format!("invalid rational `{text}`"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
        None => (text.trim().parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn cmd_bivaluation(args: &BivaluationArgs) -> Result<(), Failure> {
    let space = HypothesisSpace::new(&args.atoms)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (table, lattice, kind): (_, FiniteLattice, _) = match args.lattice {
        Which::Statements => {
            let sl = boolean_lattice(&space);
            let m = match args.measure.as_str() {
                "uniform" => ProbabilityMeasure::uniform(&space),
                "random" => ProbabilityMeasure::random(&space, &mut rng, RANDOM_MAX_WEIGHT),
                path => ProbabilityMeasure::from_json(&space, &read_file(Path::new(path))?)?,
            };
            (probability_bivaluation(&m, &sl), sl.lattice().clone(), LatticeKind::Statements)
        }
        Which::Questions => {
            let ql = QuestionLattice::new(&space, true, false)?;
            let u = match args.measure.as_str() {
                "uniform" => cocardinality_valuation(&ql),
                "random" => random_covaluation(&ql, &mut rng, RANDOM_MAX_WEIGHT),
                other => {
                    return Err(Failure::usage(format!("question tables take `uniform` or `random`, not `{other}`")))
                }
            };
            (relevance_bivaluation(&u, ql.lattice()), ql.lattice().clone(), LatticeKind::Questions)
        }
    };
    let table = match &args.perturb {
        Some(pair) => {
            let resolve = |label: &str| -> Result<usize, Failure> {
                let canonical = match kind {
                    LatticeKind::Statements => space.parse_statement(label)?.to_string(),
                    LatticeKind::Questions => Question::parse(&space, label)?.to_string(),
                };
                lattice.index_of(&canonical).ok_or_else(|| Failure::usage(format!("`{label}` is not in the lattice")))
            };
            let (x, t) = (resolve(&pair[0])?, resolve(&pair[1])?);
            table
                .perturbed(x, t, parse_rational(&args.delta)?)
                .ok_or_else(|| Failure::usage(format!("entry ({} | {}) is undefined", pair[0], pair[1])))?
        }
        None => table,
    };
    emit(&BiValuationFile::from_table(&table, kind, &space).to_json(), args.output.as_deref())
}

fn cmd_export(
    args: &SpaceArgs,
    which: Which,
    real: bool,
    format: DiagramArg,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let space = args.space()?;
    let format = match format {
        DiagramArg::Dot => DiagramFormat::Dot,
        DiagramArg::Json => DiagramFormat::Json,
    };
    let text = match which {
        Which::Statements => boolean_lattice(&space).lattice().export(format),
        Which::Questions => QuestionLattice::new(&space, real, args.allow_six)?.lattice().export(format),
    };
    emit(&text, output)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Enumerate { space, real, format } => {
            print!("{}", cmd_enumerate(&space, real, format)?);
            Ok(true)
        }
        Command::Query { space, op, left, right } => {
            print!("{}", cmd_query(&space, op, &left, &right)?);
            Ok(true)
        }
        Command::Check(args) => cmd_check(&args),
        Command::Bivaluation(args) => cmd_bivaluation(&args).map(|_| true),
        Command::Export { space, which, real, format, output } => {
            cmd_export(&space, which, real, format, output.as_deref()).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VIOLATIONS),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
