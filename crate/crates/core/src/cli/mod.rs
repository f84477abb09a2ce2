//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure (including a solve with no ok
//! solution), 2 parse or argument error, 3 positive-dimensional ideal, 4 I/O,
//! 5 specialization failure, 6 support mismatch, 7 corrupt template.

pub mod system;

pub use system::{SystemError, SystemFile};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::coefficients::FieldDescriptor;
use crate::corpus::{generate, CorpusInstance, CorpusName};
use crate::groebner::GroebnerError;
use crate::polynomials::{parse_polynomial, MonomialOrder, PolyError, Polynomial, Ring};
use crate::solver::{template_solve, RecoveryOptions, SolveOptions, SolverError};
use crate::template::{build_template, EliminationTemplate, RowRecipe, Strategy, TemplateError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("no solution passed the residual test")]
    NoSolutions,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::System(_) | CliError::Usage(_) | CliError::Poly(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Template(e) | CliError::Solver(SolverError::Template(e)) => template_code(e),
            CliError::Solver(SolverError::SpecializationFailure(_)) => 5,
            CliError::Solver(SolverError::SupportMismatch { .. }) => 6,
            CliError::Solver(SolverError::Poly(PolyError::Parse { .. })) => 2,
            CliError::Solver(_) | CliError::NoSolutions => 1,
        }
    }
}

fn template_code(e: &TemplateError) -> i32 {
    match e {
        TemplateError::Groebner(GroebnerError::PositiveDimensional(_)) => 3,
        TemplateError::CorruptTemplate(_) | TemplateError::FormatVersionMismatch { .. } => 7,
        TemplateError::Poly(PolyError::Parse { .. }) => 2,
        _ => 1,
    }
}

#[derive(Debug, Parser)]
#[command(name = "elimtemplates", version, about = "Build elimination templates and solve polynomial systems with them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a template from a system file or a corpus problem.
    Generate(GenerateArgs),
    /// Solve an instance with a stored template.
    Solve(SolveArgs),
    /// Describe a stored template.
    Inspect(InspectArgs),
    /// Compare strategies on a corpus problem.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// System file.
    #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
    pub system: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<CorpusName>,
    /// Action form; defaults to the file's `action` line, else a seeded random linear form.
    #[arg(long)]
    pub action: Option<String>,
    #[arg(long, default_value = "default")]
    pub strategy: Strategy,
    #[arg(long)]
    pub order: Option<MonomialOrder>,
    /// Construction field: `q` or `fp:<prime>`.
    #[arg(long)]
    pub field: Option<FieldDescriptor>,
    #[arg(long, env = "ET_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub template: PathBuf,
    #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
    pub system: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<CorpusName>,
    #[arg(long, env = "ET_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = RecoveryOptions::default().tol_res)]
    pub tol_res: f64,
    #[arg(long, default_value_t = RecoveryOptions::default().tol_inf)]
    pub tol_inf: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub template: PathBuf,
    /// Also print the matrix in three-block form, reducible identity block included.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub corpus: CorpusName,
    #[arg(long, value_delimiter = ',', default_value = "default,larsson,greedy")]
    pub strategies: Vec<Strategy>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, env = "ET_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub csv: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_template(path: &Path) -> Result<EliminationTemplate, CliError> {
    Ok(EliminationTemplate::from_json(&read(path)?)?)
}

/// Corpus instance with its ring moved to `order` and `field`.
fn corpus_instance(name: CorpusName, seed: u64, order: Option<MonomialOrder>, field: FieldDescriptor) -> Result<CorpusInstance, CliError> {
    let inst = generate(name, seed);
    let Some(order) = order.filter(|o| o != inst.ring.order()) else {
        return Ok(inst.over(field)?);
    };
    let ring = Ring::new(inst.ring.variables(), inst.ring.field(), order)?;
    let move_to = |p: &Polynomial| Polynomial::from_terms(&ring, p.terms().to_vec());
    let moved = CorpusInstance {
        name,
        generators: inst.generators.iter().map(move_to).collect(),
        action: move_to(&inst.action),
        ground_truth: inst.ground_truth.clone(),
        ring: ring.clone(),
    };
    Ok(moved.over(field)?)
}

fn dims(t: &EliminationTemplate) -> String {
    format!("{} x {}", t.nrows(), t.ncols())
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut String) -> Result<EliminationTemplate, CliError> {
    let (ring, generators, default_action) = match (&args.system, args.corpus) {
        (Some(path), _) => {
            let sys = SystemFile::parse(&read(path)?, args.order.clone(), args.field)?;
            let action = sys.action_or_random(args.seed);
            (sys.ring, sys.generators, action)
        }
        (None, Some(name)) => {
            let field = args.field.unwrap_or(name.construction_field());
            let inst = corpus_instance(name, args.seed, args.order.clone(), field)?;
            (inst.ring, inst.generators, inst.action)
        }
        (None, None) => return Err(CliError::Usage("give a system file or --corpus".into())),
    };
    let action = match &args.action {
        Some(src) => parse_polynomial(src, &ring)?,
        None => default_action,
    };
    let t = build_template(&generators, &action, args.strategy)?;
    std::fs::write(&args.output, t.to_json()).map_err(|source| CliError::Io { path: args.output.clone(), source })?;
    let (gr, gc) = t.generator_block();
    writeln!(out, "template {}  d = {}  generator block {gr} x {gc}", dims(&t), t.dimension()).unwrap();
    Ok(t)
}

pub fn cmd_solve(args: &SolveArgs, out: &mut String, err: &mut String) -> Result<(), CliError> {
    let t = load_template(&args.template)?;
    let (generators, action, truth) = match (&args.system, args.corpus) {
        (Some(path), _) => {
            let sys = SystemFile::parse_instance(&read(path)?, t.ring.order())?;
            (sys.generators, sys.action, None)
        }
        (None, Some(name)) => {
            let inst = corpus_instance(name, args.seed, Some(t.ring.order().clone()), FieldDescriptor::Rational)?;
            (inst.generators, None, inst.ground_truth)
        }
        (None, None) => return Err(CliError::Usage("give --system or --corpus".into())),
    };
    let opts = SolveOptions { recovery: RecoveryOptions { tol_res: args.tol_res, tol_inf: args.tol_inf, ..RecoveryOptions::default() } };
    let sols = template_solve(&t, &generators, action.as_ref(), &opts)?;
    if args.json {
        out.push_str(&sols.to_json());
        out.push('\n');
    } else {
        out.push_str(&sols.to_text(t.ring.variables()));
    }
    if let Some(truth) = truth {
        let best = sols
            .ok()
            .map(|s| s.coords.iter().zip(&truth).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min);
        writeln!(err, "ground truth distance {best:.3e}").unwrap();
    }
    if sols.any_clustered() {
        writeln!(err, "warning: clustered eigenvalues, eigenvectors may be unreliable").unwrap();
    }
    if sols.ok_count() == 0 {
        return Err(CliError::NoSolutions);
    }
    Ok(())
}

pub fn cmd_inspect(args: &InspectArgs, out: &mut String) -> Result<(), CliError> {
    let t = load_template(&args.template)?;
    let ring = &t.ring;
    writeln!(out, "ring        {} ({}, {})", ring.variables().join(" "), ring.order().name(), ring.field()).unwrap();
    writeln!(out, "strategy    {}{}", t.strategy, if t.capped { " (iteration cap reached)" } else { "" }).unwrap();
    writeln!(out, "action      {}", t.action).unwrap();
    writeln!(out, "d           {}", t.dimension()).unwrap();
    let basis: Vec<String> = t.basis.monomials.iter().map(|m| ring.format_monomial(m)).collect();
    writeln!(out, "basis       {}", basis.join(" ")).unwrap();
    let per: Vec<String> = t.shifts.per_generator.iter().map(|s| s.len().to_string()).collect();
    writeln!(out, "shifts      {} ({})", t.shifts.total(), per.join(" ")).unwrap();
    writeln!(out, "excessive   {}", t.partition.excessive.len()).unwrap();
    writeln!(out, "matrix      {}", dims(&t)).unwrap();
    let (gr, gc) = t.generator_block();
    writeln!(out, "generators  {gr} x {gc}").unwrap();
    if args.full {
        let cols = t.columns();
        let ne = t.partition.excessive.len();
        let mut header: Vec<String> = cols[..ne].iter().map(|m| ring.format_monomial(m)).collect();
        header.extend(t.basis.monomials.iter().map(|m| format!("s*{}", ring.format_monomial(m))));
        header.extend(basis.iter().cloned());
        writeln!(out, "\n{}", header.join("\t")).unwrap();
        for (recipe, row) in t.rows.iter().zip(t.full_matrix()) {
            let label = match recipe {
                RowRecipe::Shift { gen, shift } => format!("{}*f{gen}", ring.format_monomial(shift)),
                RowRecipe::Action { index } => format!("(s-f)*{}", basis[*index]),
            };
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(out, "{label}\t{}", cells.join("\t")).unwrap();
        }
    }
    Ok(())
}

fn median(mut xs: Vec<Duration>) -> Duration {
    if xs.is_empty() {
        return Duration::ZERO;
    }
    xs.sort();
    xs[xs.len() / 2]
}

pub fn cmd_bench(args: &BenchArgs, out: &mut String) -> Result<(), CliError> {
    if args.strategies.is_empty() {
        return Err(CliError::Usage("no strategies given".into()));
    }
    let name = args.corpus;
    let construction = corpus_instance(name, args.seed, None, name.construction_field())?;
    let trials: Vec<CorpusInstance> =
        (1..=args.trials as u64).map(|k| generate(name, args.seed.wrapping_add(k))).collect();
    let sep = if args.csv { "," } else { "\t" };
    let header = ["strategy", "rows", "cols", "d", "build_ms", "solve_ms", "mean_residual", "failures"];
    writeln!(out, "{}", header.join(sep)).unwrap();
    for &strategy in &args.strategies {
        let start = Instant::now();
        let t = build_template(&construction.generators, &construction.action, strategy)?;
        let build = start.elapsed();
        let mut times = Vec::with_capacity(trials.len());
        let mut residuals = Vec::new();
        let mut failures = 0;
        for inst in &trials {
            let start = Instant::now();
            let res = template_solve(&t, &inst.generators, None, &SolveOptions::default());
            times.push(start.elapsed());
            match res {
                Ok(s) if s.ok_count() == t.dimension() => {
                    residuals.extend(s.ok().filter_map(|s| s.residual));
                }
                _ => failures += 1,
            }
        }
        let mean = if residuals.is_empty() { f64::NAN } else { residuals.iter().sum::<f64>() / residuals.len() as f64 };
        let cells = [
            strategy.to_string(),
            t.nrows().to_string(),
            t.ncols().to_string(),
            t.dimension().to_string(),
            format!("{:.1}", build.as_secs_f64() * 1e3),
            format!("{:.3}", median(times).as_secs_f64() * 1e3),
            format!("{mean:.2e}"),
            failures.to_string(),
        ];
        writeln!(out, "{}", cells.join(sep)).unwrap();
    }
    Ok(())
}

/// Run one parsed command, returning the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let mut out = String::new();
    let mut err = String::new();
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a, &mut out).map(|_| ()),
        Command::Solve(a) => cmd_solve(a, &mut out, &mut err),
        Command::Inspect(a) => cmd_inspect(a, &mut out),
        Command::Bench(a) => cmd_bench(a, &mut out),
    };
    print!("{out}");
    eprint!("{err}");
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> ! {
    let cli = Cli::parse();
    std::process::exit(run(&cli))
}
