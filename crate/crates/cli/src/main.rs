mod play;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gcol_core::engine::{solve, GameSpec, Move, Player, Starter};
use gcol_core::harness::{self, Params, Report, SUITES};
use gcol_core::ordering::{coloring_number, smallest_last_ordering};
use gcol_core::strategy::optimal_strategy;
use gcol_core::transfer::{transfer_optimal, TransferError};
use gcol_core::{parse_edge_list, parse_family_expr, sigma_gcol, Graph, Ordering};

/// Exact solver and verification tool for the graph ordering game.
#[derive(Debug, Parser)]
#[command(name = "gcol", version)]
struct Cli {
    /// Seed for sampled verification cases.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print only the essential result lines.
    #[arg(long, global = true)]
    quiet: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the ordering game on a graph.
    Solve(SolveArgs),
    /// Print the (non-game) coloring number.
    Col(GraphArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Trace the strategy transfer from G to G - x.
    Transfer(TransferArgs),
    /// Play interactively against optimal play.
    Play(PlayArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    /// Family expression if the argument contains `(` or looks like `K4`,
    /// otherwise an edge-list file path.
    Auto,
    Family,
    Edges,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Family expression (e.g. "join(K3,E2)") or edge-list file path.
    graph: String,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum First {
    Alice,
    Bob,
    /// Alice after an even-length preorder, Bob after an odd one.
    Auto,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Comma-separated vertices already ordered.
    #[arg(long, default_value = "")]
    preorder: String,
    #[arg(long, value_enum, default_value_t = First::Auto)]
    first: First,
    #[arg(long, default_value_t = 0)]
    alice_passes: u8,
    #[arg(long, default_value_t = 0)]
    bob_passes: u8,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// monotonicity, skipping, section3, construction, c5, transfer or all.
    suite: String,
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    /// Number of sampled graphs beyond the exhaustive sizes.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write one JSON record per case to this file.
    #[arg(long, value_name = "PATH")]
    records: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Adversary {
    /// Bob plays optimally in the smaller graph.
    Optimal,
    /// Every Bob line is explored.
    Exhaustive,
}

#[derive(Debug, Args)]
struct TransferArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Vertex x removed from G.
    #[arg(long)]
    remove: usize,
    #[arg(long, default_value = "")]
    preorder: String,
    #[arg(long, value_enum, default_value_t = Adversary::Optimal)]
    adversary: Adversary,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    Alice,
    Bob,
}

#[derive(Debug, Args)]
struct PlayArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// The side you play; the program plays the other optimally.
    #[arg(long = "as", value_enum, default_value_t = Side::Alice)]
    side: Side,
    #[arg(long, default_value = "")]
    preorder: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(
            fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    let code = match &cli.command {
        Command::Solve(a) => cmd_solve(a, cli.quiet, &mut out)?,
        Command::Col(a) => cmd_col(a, cli.quiet, &mut out)?,
        Command::Verify(a) => cmd_verify(a, cli.seed, cli.quiet, &mut out)?,
        Command::Transfer(a) => cmd_transfer(a, cli.quiet, &mut out)?,
        Command::Play(a) => {
            let g = load_graph(&a.graph)?;
            let preorder = parse_vertices(&a.preorder, &g)?;
            let human = match a.side {
                Side::Alice => Player::Alice,
                Side::Bob => Player::Bob,
            };
            play::run(g, preorder, human, &mut io::stdin().lock(), &mut out)?
        }
    };
    out.flush()?;
    Ok(code)
}

fn looks_like_family(src: &str) -> bool {
    if src.contains('(') {
        return true;
    }
    let mut chars = src.chars();
    matches!(chars.next(), Some('K' | 'E' | 'C' | 'P'))
        && !chars.as_str().is_empty()
        && chars.all(|c| c.is_ascii_digit())
}

fn load_graph(args: &GraphArgs) -> Result<Graph> {
    let family = match args.format {
        Format::Auto => looks_like_family(&args.graph),
        Format::Family => true,
        Format::Edges => false,
    };
    if family {
        return parse_family_expr(&args.graph).map_err(|e| anyhow!("{}: {e}", args.graph));
    }
    let path = Path::new(&args.graph);
    let text = fs::read_to_string(path).with_context(|| format!("cannot read graph file {}", path.display()))?;
    parse_edge_list(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn parse_vertices(text: &str, g: &Graph) -> Result<Ordering> {
    let mut seq = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        seq.push(item.parse::<usize>().with_context(|| format!("bad vertex {item:?} in preorder"))?);
    }
    Ordering::for_graph(seq, g).context("invalid preorder")
}

fn value_name(preorder: &Ordering, first: First) -> &'static str {
    let default = if preorder.len().is_multiple_of(2) { Player::Alice } else { Player::Bob };
    let chosen = match first {
        First::Alice => Player::Alice,
        First::Bob => Player::Bob,
        First::Auto => default,
    };
    match (preorder.is_empty(), chosen == default, chosen) {
        (true, true, _) => "gcol",
        (true, false, _) => "gcol_B",
        (false, true, _) => "sigma-gcol",
        (false, false, Player::Alice) => "sigma-gcol_A",
        (false, false, Player::Bob) => "sigma-gcol_B",
    }
}

fn cmd_solve(a: &SolveArgs, quiet: bool, out: &mut dyn Write) -> Result<u8> {
    let g = load_graph(&a.graph)?;
    let preorder = parse_vertices(&a.preorder, &g)?;
    let starter = match a.first {
        First::Alice => Starter::Alice,
        First::Bob => Starter::Bob,
        First::Auto => Starter::ByParity,
    };
    let name = value_name(&preorder, a.first);
    let spec = GameSpec::new(g, preorder)?.with_starter(starter).with_passes(a.alice_passes, a.bob_passes);
    let result = solve(&spec);
    writeln!(out, "{name} = {}", result.value)?;
    if quiet {
        return Ok(0);
    }
    if spec.has_passes() {
        writeln!(out, "passes: alice={} bob={}", spec.alice_passes(), spec.bob_passes())?;
    }
    match result.best_move {
        Some(Move::Vertex(v)) => writeln!(out, "best move: {v} ({})", spec.first_mover())?,
        Some(Move::Pass) => writeln!(out, "best move: PASS ({})", spec.first_mover())?,
        None => writeln!(out, "best move: none (game already finished)")?,
    }
    writeln!(out, "nodes: {}", result.nodes)?;
    writeln!(out, "memo entries: {}", result.memo_entries)?;
    Ok(0)
}

fn cmd_col(a: &GraphArgs, quiet: bool, out: &mut dyn Write) -> Result<u8> {
    let g = load_graph(a)?;
    writeln!(out, "col = {}", coloring_number(&g))?;
    if !quiet {
        writeln!(out, "smallest-last ordering: {}", smallest_last_ordering(&g))?;
    }
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, seed: u64, quiet: bool, out: &mut dyn Write) -> Result<u8> {
    let names: Vec<&str> = match a.suite.as_str() {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => bail!("unknown suite {s:?}; expected one of {} or all", SUITES.join(", ")),
    };
    if a.max_n < 2 {
        bail!("--max-n must be at least 2");
    }
    let threads = match a.jobs {
        Some(0) => bail!("--jobs must be positive"),
        Some(j) => j,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let params = Params { max_n: a.max_n, samples: a.samples, seed };
    let reports: Vec<Report> = pool.install(|| {
        names.iter().map(|n| harness::run_suite(n, params).expect("known suite")).collect()
    });
    for (i, r) in reports.iter().enumerate() {
        if quiet {
            writeln!(out, "{}: {}", r.suite, if r.passed() { "PASS" } else { "FAIL" })?;
        } else {
            if i > 0 {
                writeln!(out)?;
            }
            write!(out, "{}", r.to_text())?;
        }
    }
    if let Some(path) = &a.records {
        let body: String = reports.iter().map(Report::to_jsonl).collect();
        fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(if reports.iter().all(Report::passed) { 0 } else { 1 })
}

fn cmd_transfer(a: &TransferArgs, quiet: bool, out: &mut dyn Write) -> Result<u8> {
    let g = load_graph(&a.graph)?;
    let preorder = parse_vertices(&a.preorder, &g)?;
    if a.remove >= g.vertex_count() {
        bail!("--remove {} is not a vertex of a {}-vertex graph", a.remove, g.vertex_count());
    }
    let bound = sigma_gcol(&g, &preorder)?;
    let strategy = transfer_optimal(&g, &preorder, a.remove)?;
    let t = strategy.transfer();
    if !quiet {
        let labels: Vec<String> =
            (0..t.h().vertex_count()).map(|i| format!("{i}->{}", t.remap().old_index(i))).collect();
        writeln!(out, "removed x = {}; H vertex -> G vertex: {}", a.remove, labels.join(" "))?;
        writeln!(out, "trace vertices use G labels")?;
    }
    let is_violation = |e: &TransferError| {
        matches!(
            e,
            TransferError::InvariantViolated { .. }
                | TransferError::RepeatBeforeOption { .. }
                | TransferError::AssumptionFailed { .. }
        )
    };
    let (worst, trace) = match a.adversary {
        Adversary::Optimal => {
            let bob = optimal_strategy(t.h_spec(), Player::Bob)?;
            match t.run_against(&bob) {
                Ok((trace, score)) => (score, trace),
                Err(e) if is_violation(&e) => {
                    writeln!(out, "violation: {e}")?;
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Adversary::Exhaustive => match t.audit_exhaustive() {
            Ok(audit) => {
                if !quiet {
                    writeln!(out, "bob lines: {}", audit.lines)?;
                    writeln!(out, "invariant checkpoints: {}", audit.checkpoints)?;
                    writeln!(
                        out,
                        "branches: follow={} illegal-option={} last-vertex={}",
                        audit.follow_branches, audit.illegal_options, audit.last_vertex_branches
                    )?;
                    writeln!(out, "illegal repeats: {}", audit.illegal_repeats)?;
                    writeln!(
                        out,
                        "endings: before-interpret={} after-alice={}",
                        audit.ended_before_interpret, audit.ended_after_alice
                    )?;
                    writeln!(out, "worst line:")?;
                }
                (audit.max_score, audit.worst_line)
            }
            Err(e) if is_violation(&e) => {
                writeln!(out, "violation: {e}")?;
                return Ok(1);
            }
            Err(e) => return Err(e.into()),
        },
    };
    if !quiet {
        for (i, rec) in trace.iter().enumerate() {
            writeln!(out, "turn {}: {rec}", i + 1)?;
        }
    }
    let label = if matches!(a.adversary, Adversary::Exhaustive) { "max score" } else { "score" };
    writeln!(out, "{label} = {worst}")?;
    writeln!(out, "bound = {bound}")?;
    writeln!(out, "within bound: {}", if worst <= bound { "yes" } else { "no" })?;
    Ok(if worst <= bound { 0 } else { 1 })
}
