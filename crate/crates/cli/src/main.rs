use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use canon_cli::{
    describe_discrepancy, run_break, run_count, run_emit_dimacs, run_job, run_reduce, run_verify, BreakRequest, CliError,
    Config, CounterChoice, RunStatus, CSV_HEADER,
};
use canon_core::axiom::{load_theory, CLASSES};
use canon_core::oracle::{enumerate_models, iso_classes, EnumerationMode};
use canon_core::symmetry::{gen_graph_theory, summarize_graph_theory, Graph, OrderKind, Vectorization};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "canon", version, about = "Canonizing sets and complete symmetry breaks for finite algebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// External DIMACS SAT solver, run as `<cmd> <file>`.
    #[arg(long, global = true, env = "CANON_SAT_CMD")]
    sat_cmd: Option<String>,
    /// External projected model counter, run as `<cmd> <file>`.
    #[arg(long, global = true, env = "CANON_COUNTER_CMD")]
    counter_cmd: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget in seconds per computation (0 disables it).
    #[arg(long, global = true, default_value_t = 600)]
    timeout: u64,
    /// Directory for breaks, DIMACS files and reports.
    #[arg(long, global = true, default_value = "canon-out")]
    out_dir: PathBuf,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Row,
    #[value(alias = "diagonal")]
    Diag,
    Concentric,
}

impl From<Order> for OrderKind {
    fn from(o: Order) -> OrderKind {
        match o {
            Order::Row => OrderKind::Row,
            Order::Diag => OrderKind::Diagonal,
            Order::Concentric => OrderKind::Concentric,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CounterArg {
    Auto,
    Builtin,
    External,
}

impl From<CounterArg> for CounterChoice {
    fn from(c: CounterArg) -> CounterChoice {
        match c {
            CounterArg::Auto => CounterChoice::Auto,
            CounterArg::Builtin => CounterChoice::Builtin,
            CounterArg::External => CounterChoice::External,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Backtracking,
    Exhaustive,
}

#[derive(Args, Clone)]
struct BreakArgs {
    /// Bundled class id or name, or a path to an `.alg` file.
    #[arg(long)]
    class: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "diag")]
    order: Order,
    /// Start from all transpositions.
    #[arg(long)]
    seed_transpositions: bool,
    /// Remove redundant permutations afterwards.
    #[arg(long)]
    reduce: bool,
    #[arg(long)]
    max_iterations: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a canonizing set.
    Break {
        #[command(flatten)]
        args: BreakArgs,
        /// Output file instead of the content-addressed default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Remove redundant permutations from a break file.
    Reduce {
        #[arg(long = "break")]
        break_file: PathBuf,
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count the models left by a break.
    Count {
        #[arg(long = "break")]
        break_file: PathBuf,
        #[arg(long)]
        class: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        counter: CounterArg,
    },
    /// Check a break against brute force.
    Verify {
        #[arg(long = "break")]
        break_file: PathBuf,
        #[arg(long)]
        class: Option<String>,
    },
    /// List models and isomorphism classes by brute force.
    Enumerate {
        #[arg(long)]
        class: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "backtracking")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "diag")]
        order: Order,
        /// Print one lex-leader per isomorphism class.
        #[arg(long)]
        leaders: bool,
    },
    /// List bundled classes.
    Classes,
    /// Turn a graph edge list into a theory.
    Graph {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the theory (and break) as projected DIMACS.
    EmitDimacs {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_enum, default_value = "diag")]
        order: Order,
        #[arg(long = "break")]
        break_file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Break, reduce and count a batch of classes and sizes.
    Report {
        /// Comma-separated class ids.
        #[arg(long, value_delimiter = ',', required = true)]
        classes: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value = "diag")]
        order: Order,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        no_reduce: bool,
        #[arg(long, value_enum, default_value = "auto")]
        counter: CounterArg,
    },
}

fn config(g: &Global) -> Config {
    Config {
        sat_cmd: g.sat_cmd.clone(),
        counter_cmd: g.counter_cmd.clone(),
        seed: g.seed,
        timeout: (g.timeout > 0).then(|| Duration::from_secs(g.timeout)),
        out_dir: g.out_dir.clone(),
    }
}

fn request(args: &BreakArgs, out: Option<PathBuf>) -> BreakRequest {
    BreakRequest {
        class: args.class.clone(),
        n: args.n,
        order: args.order.into(),
        seed_transpositions: args.seed_transpositions,
        reduce: args.reduce,
        max_iterations: args.max_iterations,
        out,
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config(&cli.global);
    match cli.command {
        Command::Break { args, out } => {
            let outcome = run_break(&cfg, &request(&args, out))?;
            let cs = &outcome.set;
            println!("class={} n={} ordering={} status={} reduced={}", cs.class, cs.n, cs.ordering, cs.status, cs.reduced);
            println!("break_size={} iterations={}", cs.perms.len(), cs.stats.iterations);
            for p in &cs.perms {
                println!("  {p}");
            }
            println!("written {}", outcome.path.display());
            if !cs.is_complete() {
                return Err(CliError::Resource("limit reached; set is incomplete".into()));
            }
        }
        Command::Reduce { break_file, class, out } => {
            let cs = run_reduce(&cfg, class.as_deref(), &break_file, out.as_deref())?;
            println!("break_size={}", cs.perms.len());
        }
        Command::Count { break_file, class, counter } => {
            let r = run_count(&cfg, class.as_deref(), &break_file, counter.into())?;
            println!("{CSV_HEADER}\n{}", r.csv_row());
            r.append_to(&cfg.out_dir).map_err(|e| CliError::Failure(e.to_string()))?;
        }
        Command::Verify { break_file, class } => {
            let verdict = run_verify(class.as_deref(), &break_file)?;
            match describe_discrepancy(&verdict) {
                None => println!("pass: {} models checked", verdict.models_checked),
                Some(text) => {
                    println!("fail\n{text}");
                    return Err(CliError::Verification("set is not canonizing".into()));
                }
            }
        }
        Command::Enumerate { class, n, mode, order, leaders } => {
            let ax = load_theory(&class)?;
            let mode = match mode {
                Mode::Backtracking => EnumerationMode::Backtracking,
                Mode::Exhaustive => EnumerationMode::Exhaustive,
            };
            let models = enumerate_models(&ax, n, mode)?;
            let report = iso_classes(&models, &Vectorization::new(order.into(), n))?;
            println!("models={} classes={}", report.total_models, report.class_count);
            if leaders {
                for l in &report.leaders {
                    println!("{}", l.to_text());
                }
            }
        }
        Command::Classes => {
            for c in CLASSES {
                println!("{:<9} {:<18} {}", c.id, c.name, c.description);
            }
        }
        Command::Graph { file, out } => {
            let text = std::fs::read_to_string(&file).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            let g = Graph::parse(&text).map_err(|e| CliError::Usage(e.to_string()))?;
            let theory = gen_graph_theory(&g).to_string();
            let s = summarize_graph_theory(&g);
            match out {
                Some(path) => canon_cli::write_file(&path, theory.as_bytes())?,
                None => print!("{theory}"),
            }
            eprintln!(
                "constants={} edge_disequations={} non_edge_equations={} domain_size={}",
                s.constants, s.edge_disequations, s.non_edge_equations, s.domain_size
            );
        }
        Command::EmitDimacs { class, n, order, break_file, out } => {
            if break_file.is_none() && n == 0 {
                return Err(CliError::Usage("give --n or --break".into()));
            }
            let path = run_emit_dimacs(&cfg, &class, n, order.into(), break_file.as_deref(), out.as_deref())?;
            println!("written {}", path.display());
        }
        Command::Report { classes, sizes, order, jobs, no_reduce, counter } => {
            let reqs: Vec<BreakRequest> = classes
                .iter()
                .flat_map(|c| sizes.iter().map(move |&n| (c.clone(), n)))
                .map(|(class, n)| BreakRequest {
                    class,
                    n,
                    order: order.into(),
                    seed_transpositions: false,
                    reduce: !no_reduce,
                    max_iterations: None,
                    out: None,
                })
                .collect();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| CliError::Failure(e.to_string()))?;
            let reports: Vec<_> = pool.install(|| reqs.par_iter().map(|r| run_job(&cfg, r, counter.into())).collect());
            println!("{CSV_HEADER}");
            for r in &reports {
                println!("{}", r.csv_row());
                if let Some(m) = &r.message {
                    eprintln!("{} n={}: {m}", r.class, r.n);
                }
            }
            if reports.iter().any(|r| r.status == RunStatus::Error) {
                return Err(CliError::Failure("some jobs failed".into()));
            }
            if reports.iter().any(|r| r.status == RunStatus::Incomplete) {
                return Err(CliError::Resource("some jobs hit a limit".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
