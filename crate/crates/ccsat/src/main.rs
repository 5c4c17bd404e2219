//! Command-line frontend: encode, generate, compile, solve, verify, bench.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ccsat::bench::{emit_csv, format_summary, run_plan, summarize, BenchPlan};
use ccsat::compile::{compile_basic, compile_bc, compile_uc, CompiledCnf, DEFAULT_BUDGET};
use ccsat::encode::{
    encode_coloring, encode_latin, encode_vertex_cover, gen_latin_instance,
    gen_planted_color_graph, gen_planted_cover_graph,
};
use ccsat::io::{
    parse_ccnf, parse_col_graph, parse_dimacs, parse_latin, parse_model, write_ccnf,
    write_col_graph, write_dimacs, write_latin, write_model,
};
use ccsat::solve::{solve, solve_cnf, Outcome, SolveResult, SolverConfig, SolverKind};
use ccsat::theory::Theory;

#[derive(Parser)]
#[command(
    name = "ccsat",
    version,
    about = "Local-search satisfiability for propositional theories with cardinality atoms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a CCNF theory into plain DIMACS CNF.
    Compile(CompileArgs),
    /// Run a local-search solver on a CCNF or DIMACS instance.
    ///
    /// Exit code 10 means a model was found, 20 means unknown.
    Solve(SolveArgs),
    /// Encode a problem instance as a CCNF theory.
    Encode(EncodeArgs),
    /// Generate a planted (satisfiable by construction) instance.
    Gen(GenArgs),
    /// Check a model file against a CCNF theory.
    Verify(VerifyArgs),
    /// Run instance families x solvers x noise values, emitting a CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CompileMethod {
    Basic,
    Uc,
    Bc,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long, value_enum)]
    method: CompileMethod,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Clause budget for the subset expansion.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Vb,
    Df,
    Wsat,
}

impl From<SolverArg> for SolverKind {
    fn from(s: SolverArg) -> SolverKind {
        match s {
            SolverArg::Vb => SolverKind::VirtualBreak,
            SolverArg::Df => SolverKind::DoubleFlip,
            SolverArg::Wsat => SolverKind::WsatCnf,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    solver: SolverArg,
    /// CCNF theory or DIMACS CNF (detected from the header).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    tries: u32,
    #[arg(long, default_value_t = 100_000)]
    flips: u64,
    /// Probability of a random walk move; 1-noise picks the minimum
    /// break-count atom.
    #[arg(long, default_value_t = 0.4)]
    noise: f64,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    timeout_s: Option<u64>,
    /// Write the model (or UNKNOWN) to this file as well as stdout.
    #[arg(long)]
    model_out: Option<PathBuf>,
    /// Double flip: let the companion choice minimize the joint breakage of
    /// both flips instead of the companion's alone.
    #[arg(long)]
    df_joint_breakcount: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Color,
    Vc,
    Latin,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(value_enum)]
    problem: Problem,
    /// Graph (.col) or latin instance file.
    #[arg(long)]
    input: PathBuf,
    /// Colors for `color`, cover size for `vc`; unused for `latin`.
    #[arg(short)]
    k: Option<u32>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    problem: Problem,
    /// Vertices for graphs, order for latin squares.
    #[arg(long, short = 'n')]
    size: u32,
    /// Colors (color), hidden cover size (vc), givens (latin).
    #[arg(long)]
    param: u32,
    /// Edges to sample; graphs only.
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    theory: PathBuf,
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance files or directories (directories take every *.ccnf inside).
    #[arg(long, num_args = 1.., required = true)]
    instances: Vec<PathBuf>,
    /// Comma-separated subset of vb,df,wsat.
    #[arg(long, value_delimiter = ',', default_values_t = vec![SolverArg::Vb, SolverArg::Df], value_enum)]
    solvers: Vec<SolverArg>,
    /// Comma-separated noise values.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.2, 0.3, 0.4])]
    noise: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    tries: u32,
    #[arg(long, default_value_t = 100_000)]
    flips: u64,
    #[arg(long, default_value_t = 120)]
    timeout_s: u64,
    #[arg(long, default_value_t = 1)]
    reps: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Concurrent cells; 1 keeps timings clean.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compile(args) => cmd_compile(args),
        Command::Solve(args) => return cmd_solve(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => return cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_theory(path: &Path) -> Result<Theory> {
    let text = read(path)?;
    let theory = parse_ccnf(&text).with_context(|| format!("parsing {}", path.display()))?;
    for lint in theory.lint() {
        eprintln!("warning: {lint}");
    }
    Ok(theory)
}

fn cmd_compile(args: CompileArgs) -> Result<()> {
    let theory = load_theory(&args.input)?;
    let compiled: CompiledCnf = match args.method {
        CompileMethod::Basic => compile_basic(&theory, args.budget)?,
        CompileMethod::Uc => compile_uc(&theory),
        CompileMethod::Bc => compile_bc(&theory),
    };
    eprintln!(
        "compiled: {} atoms ({} auxiliary), {} clauses, {} literals",
        compiled.num_atoms,
        compiled.stats.aux_atoms,
        compiled.stats.clauses,
        compiled.stats.literals
    );
    write(&args.output, &write_dimacs(&compiled))
}

fn cmd_solve(args: SolveArgs) -> ExitCode {
    match run_solve(&args) {
        Ok(result) => {
            let text = write_model(result.model.as_ref());
            print!("{text}");
            if let Some(path) = &args.model_out {
                if let Err(e) = write(path, &text) {
                    eprintln!("error: {e:#}");
                    return ExitCode::FAILURE;
                }
            }
            eprintln!(
                "c tries={} flips={} time_ms={}",
                result.tries_used,
                result.flips_used,
                result.elapsed.as_millis()
            );
            match result.outcome {
                Outcome::ModelFound => ExitCode::from(10),
                Outcome::Unknown => ExitCode::from(20),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run_solve(args: &SolveArgs) -> Result<SolveResult> {
    let text = read(&args.input)?;
    let cfg = SolverConfig {
        solver: SolverKind::from(args.solver),
        max_tries: args.tries,
        max_flips: args.flips,
        noise: args.noise,
        seed: args.seed,
        timeout: args.timeout_s.map(Duration::from_secs),
        df_joint_breakcount: args.df_joint_breakcount,
    };
    // sniff the header to pick the format
    let is_cnf = text
        .lines()
        .find(|l| l.trim_start().starts_with('p'))
        .is_some_and(|l| l.split_whitespace().nth(1) == Some("cnf"));
    if is_cnf {
        let cnf =
            parse_dimacs(&text).with_context(|| format!("parsing {}", args.input.display()))?;
        Ok(solve_cnf(&cnf, &cfg)?)
    } else {
        let theory =
            parse_ccnf(&text).with_context(|| format!("parsing {}", args.input.display()))?;
        for lint in theory.lint() {
            eprintln!("warning: {lint}");
        }
        Ok(solve(&theory, &cfg)?)
    }
}

fn cmd_encode(args: EncodeArgs) -> Result<()> {
    let text = read(&args.input)?;
    let theory = match args.problem {
        Problem::Color => {
            let k = args.k.context("color encoding needs -k <colors>")?;
            encode_coloring(&parse_col_graph(&text)?, k)
        }
        Problem::Vc => {
            let k = args.k.context("vertex-cover encoding needs -k <size>")?;
            encode_vertex_cover(&parse_col_graph(&text)?, k)
        }
        Problem::Latin => encode_latin(&parse_latin(&text)?),
    };
    write(&args.output, &write_ccnf(&theory))
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let text = match args.problem {
        Problem::Color => {
            let edges = args.edges.context("graph generation needs --edges")?;
            let (g, _) = gen_planted_color_graph(args.size, args.param, edges, args.seed)?;
            write_col_graph(&g)
        }
        Problem::Vc => {
            let edges = args.edges.context("graph generation needs --edges")?;
            let (g, _) = gen_planted_cover_graph(args.size, args.param, edges, args.seed)?;
            write_col_graph(&g)
        }
        Problem::Latin => {
            let (inst, _) = gen_latin_instance(args.size, args.param as usize, args.seed)?;
            write_latin(&inst)
        }
    };
    write(&args.output, &text)
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let run = || -> Result<bool> {
        let theory = load_theory(&args.theory)?;
        let model_text = read(&args.model)?;
        let Some(values) = parse_model(&model_text)? else {
            bail!("model file reports UNKNOWN, nothing to verify");
        };
        let sigma = values
            .to_assignment(theory.num_atoms())
            .map_err(|e| anyhow::anyhow!(e))?;
        Ok(theory.eval(&sigma))
    };
    match run() {
        Ok(true) => {
            println!("VALID");
            ExitCode::SUCCESS
        }
        Ok(false) => {
            println!("INVALID");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let mut instances = Vec::new();
    for path in &args.instances {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(path)
                .with_context(|| format!("listing {}", path.display()))?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|x| x == "ccnf"))
                .collect();
            found.sort();
            instances.extend(found);
        } else {
            instances.push(path.clone());
        }
    }
    if instances.is_empty() {
        bail!("no instances found");
    }

    let plan = BenchPlan {
        instances,
        solvers: args.solvers.iter().map(|&s| SolverKind::from(s)).collect(),
        noise: args.noise.clone(),
        max_tries: args.tries,
        max_flips: args.flips,
        timeout: Duration::from_secs(args.timeout_s),
        reps: args.reps,
        seed: args.seed,
        workers: args.workers,
    };
    let records = run_plan(&plan);
    write(&args.out, &emit_csv(&records))?;
    print!("{}", format_summary(&summarize(&records)));
    Ok(())
}
