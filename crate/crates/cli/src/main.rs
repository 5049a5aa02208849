//! `hedet`: build, solve and verify from the command line.
//!
//! Exit codes: 0 success or PASS, 1 verification failed, 2 usage or input
//! error, 3 a required verdict ran out of budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;

use hedet_core::constructions::{self, gamma_power, lex_product, omega_tuples, tensor_product};
use hedet_core::counterexample::verify::ChiGStatus;
use hedet_core::counterexample::{
    build_counterexample, check_certificate, emit_certificate, verify_counterexample, Certificate,
    CounterexampleParams, SelectorReading, Status, Variant, VerifyOptions,
};
use hedet_core::dimacs;
use hedet_core::solver::{chromatic_number, find_coloring, find_homomorphism, ChromaticNumber, SearchBudget, Verdict};
use hedet_core::widecolor::{
    adjunction_check, check_wide, wide_violation, zero_position_coloring, WideColoring, WideCondition, WideViolation,
};
use hedet_core::{Error, Graph};

mod output;

const EXIT_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hedet", version, about = "Graph constructions, exact colouring and counterexample verification")]
struct Cli {
    /// Node budget for exact searches.
    #[arg(long, global = true, default_value_t = 100_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_nodes: u64,

    /// Wall-clock budget for exact searches, in seconds.
    #[arg(long, global = true, default_value_t = 600, value_parser = clap::value_parser!(u64).range(1..))]
    budget_secs: u64,

    /// Worker threads for data-parallel sections.
    #[arg(long, global = true, env = "HEDET_THREADS")]
    threads: Option<usize>,

    /// Increase log verbosity (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a graph and write it as DIMACS.
    Construct {
        #[command(subcommand)]
        family: ConstructCmd,
    },
    /// Decide whether a graph has a proper colouring with the given colours.
    Color {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colors: usize,
    },
    /// Decide whether a homomorphism source -> target exists.
    Hom {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Chromatic number by successive decisions over a range.
    Chromatic {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        lo: usize,
        /// Defaults to the vertex count.
        #[arg(long)]
        hi: Option<usize>,
    },
    /// Check the wide-colouring conditions.
    WideCheck(WideCheckArgs),
    /// Compare both sides of the walk-power / tuple-construction adjunction.
    AdjunctionTest {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        /// Odd walk length.
        #[arg(long)]
        d: usize,
    },
    /// Build a counterexample pipeline and export H.
    Build {
        #[arg(value_enum)]
        variant: VariantArg,
        /// DIMACS output for H.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// JSON side table of H's function labels.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// DOT output for H.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReadingArg::ClassQ)]
        reading: ReadingArg,
    },
    /// Run a verification pipeline or re-check a certificate.
    Verify {
        #[command(subcommand)]
        target: VerifyCmd,
    },
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    /// Tuple construction over the complete graph on n vertices, half-width d.
    Omega {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: OutArgs,
        /// JSON side table of vertex tuples.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Kneser graph on the k-subsets of a c-set.
    Kneser {
        #[arg(long)]
        c: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Complete graph on n vertices.
    Complete {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Cycle on n vertices.
    Cycle {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Walk power: edges join endpoints of walks of length exactly d.
    Power {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lexicographic product of two DIMACS graphs.
    Lex {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Tensor product of two DIMACS graphs.
    Tensor {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug)]
struct OutArgs {
    /// DIMACS output path; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WideCheckArgs {
    /// Graph in DIMACS; requires --coloring.
    #[arg(long, requires = "coloring", conflicts_with = "omega")]
    graph: Option<PathBuf>,
    /// Wide colouring as JSON.
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Use the tuple construction `--omega N D` with its zero-position colouring.
    #[arg(long, num_args = 2, value_names = ["N", "D"])]
    omega: Option<Vec<usize>>,
    /// Second factor of the class pairing for --omega.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Condition to check (1-4); all four when absent.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    condition: Option<u8>,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    Counterexample {
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Write a certificate here on PASS.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReadingArg::ClassQ)]
        reading: ReadingArg,
        /// Also search for a c-colouring of G with this node budget.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        chi_g_nodes: Option<u64>,
        /// Time budget for the G search, in seconds.
        #[arg(long, requires = "chi_g_nodes", value_parser = clap::value_parser!(u64).range(1..))]
        chi_g_secs: Option<u64>,
    },
    Certificate {
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    #[value(name = "c7")]
    C7,
    #[value(name = "c5_refined")]
    C5Refined,
    #[value(name = "c5_wide")]
    C5Wide,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::C7 => Variant::C7,
            VariantArg::C5Refined => Variant::C5Refined,
            VariantArg::C5Wide => Variant::C5Wide,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReadingArg {
    ClassQ,
    ClassOne,
}

impl From<ReadingArg> for SelectorReading {
    fn from(r: ReadingArg) -> SelectorReading {
        match r {
            ReadingArg::ClassQ => SelectorReading::ClassQ,
            ReadingArg::ClassOne => SelectorReading::ClassOne,
        }
    }
}

struct Ctx {
    budget: SearchBudget,
    json: bool,
}

impl Ctx {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value)?);
        } else {
            println!("{}", text());
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    info!("{} worker threads", rayon::current_num_threads());
    let ctx = Ctx {
        budget: SearchBudget {
            max_nodes: cli.budget_nodes,
            max_secs: Some(cli.budget_secs),
            clique_precolor: true,
        },
        json: cli.json,
    };
    match run(&ctx, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::BudgetExhausted(_))));
            ExitCode::from(if budget { EXIT_BUDGET } else { EXIT_INPUT })
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    dimacs::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(ctx: &Ctx, command: Command) -> Result<u8> {
    match command {
        Command::Construct { family } => construct(ctx, family),
        Command::Color { graph, colors } => {
            let g = read_graph(&graph)?;
            let out = find_coloring(&g, colors, &ctx.budget);
            let code = if matches!(out.verdict, Verdict::Exhausted) { EXIT_BUDGET } else { 0 };
            ctx.emit(&out, || match &out.verdict {
                Verdict::Found(c) => format!("coloring found ({} nodes)\n{}", out.nodes, output::join(&c.map)),
                Verdict::Infeasible => format!("no coloring with {colors} colors ({} nodes)", out.nodes),
                Verdict::Exhausted => format!("budget exhausted after {} nodes", out.nodes),
            })?;
            Ok(code)
        }
        Command::Hom { source, target } => {
            let g = read_graph(&source)?;
            let h = read_graph(&target)?;
            let out = find_homomorphism(&g, &h, &ctx.budget);
            let code = if matches!(out.verdict, Verdict::Exhausted) { EXIT_BUDGET } else { 0 };
            ctx.emit(&out, || match &out.verdict {
                Verdict::Found(m) => format!("homomorphism found ({} nodes)\n{}", out.nodes, output::join(&m.map)),
                Verdict::Infeasible => format!("no homomorphism ({} nodes)", out.nodes),
                Verdict::Exhausted => format!("budget exhausted after {} nodes", out.nodes),
            })?;
            Ok(code)
        }
        Command::Chromatic { graph, lo, hi } => {
            let g = read_graph(&graph)?;
            let hi = hi.unwrap_or(g.n().max(lo));
            let report = chromatic_number(&g, lo, hi, &ctx.budget)?;
            let code = if report.result == ChromaticNumber::Unknown { EXIT_BUDGET } else { 0 };
            ctx.emit(&report, || match report.result {
                ChromaticNumber::Value(k) => format!("chromatic number {k}"),
                ChromaticNumber::AboveRange(h) => format!("chromatic number > {h}"),
                ChromaticNumber::Unknown => "unknown: budget exhausted".into(),
                ChromaticNumber::Infinite => "graph has a loop: no proper colouring".into(),
            })?;
            Ok(code)
        }
        Command::WideCheck(args) => wide_check(ctx, args),
        Command::AdjunctionTest { g, h, d } => {
            let g = read_graph(&g)?;
            let h = read_graph(&h)?;
            let check = adjunction_check(&g, &h, d, &ctx.budget)?;
            ctx.emit(&check, || {
                format!(
                    "power -> target: {:?}; source -> adjoint ({} vertices): {:?}; {}",
                    check.power_to_target,
                    check.adjoint_vertices,
                    check.source_to_adjoint,
                    if check.holds() { "agree" } else { "DISAGREE" }
                )
            })?;
            Ok(if check.holds() { 0 } else { EXIT_FAILED })
        }
        Command::Build {
            variant,
            output: out,
            labels,
            dot,
            reading,
        } => {
            let params = CounterexampleParams::for_variant(variant.into());
            let cx = build_counterexample(&params, reading.into())?;
            if let Some(p) = &out {
                write_text(p, &dimacs::emit(&cx.h))?;
            }
            if let Some(p) = &labels {
                let names: Vec<String> = cx.functions.iter().map(|f| f.label.to_string()).collect();
                write_text(p, &serde_json::to_string_pretty(&names)?)?;
            }
            if let Some(p) = &dot {
                write_text(p, &output::dot(&cx.h, &cx.functions))?;
            }
            let summary = output::BuildSummary::new(&cx);
            ctx.emit(&summary, || summary.text())?;
            Ok(0)
        }
        Command::Verify { target } => verify(ctx, target),
    }
}

fn construct(ctx: &Ctx, family: ConstructCmd) -> Result<u8> {
    let (g, out, tuples) = match family {
        ConstructCmd::Omega { n, d, out, labels } => {
            let o = omega_tuples(n, d)?;
            let tuples = labels.map(|p| (p, o.tuples.clone()));
            (o.graph, out, tuples)
        }
        ConstructCmd::Kneser { c, k, out } => (constructions::kneser(c, k)?, out, None),
        ConstructCmd::Complete { n, out } => (constructions::complete(n)?, out, None),
        ConstructCmd::Cycle { n, out } => (constructions::cycle(n)?, out, None),
        ConstructCmd::Power { graph, d, out } => (gamma_power(&read_graph(&graph)?, d)?, out, None),
        ConstructCmd::Lex { g, h, out } => (lex_product(&read_graph(&g)?, &read_graph(&h)?), out, None),
        ConstructCmd::Tensor { g, h, out } => (tensor_product(&read_graph(&g)?, &read_graph(&h)?), out, None),
    };
    if let Some((path, tuples)) = tuples {
        write_text(&path, &serde_json::to_string(&tuples)?)?;
    }
    let text = dimacs::emit(&g);
    let summary = output::GraphSummary {
        vertices: g.n(),
        edges: g.edge_count(),
        hash: g.hash(),
        output: out.output.as_ref().map(|p| p.display().to_string()),
        dimacs: None,
    };
    match &out.output {
        Some(p) => {
            write_text(p, &text)?;
            info!("wrote {} vertices, {} edges to {}", g.n(), g.edge_count(), p.display());
            ctx.emit(&summary, || summary.text())?;
        }
        None if ctx.json => {
            let summary = output::GraphSummary {
                dimacs: Some(text),
                ..summary
            };
            ctx.emit(&summary, String::new)?;
        }
        None => print!("{text}"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct WideCheckOutput {
    conditions: Vec<(WideCondition, bool)>,
    violation: Option<WideViolation>,
}

fn wide_check(ctx: &Ctx, args: WideCheckArgs) -> Result<u8> {
    let (g, gamma) = match (&args.graph, &args.omega) {
        (Some(path), None) => {
            let g = read_graph(path)?;
            let coloring = args.coloring.as_ref().expect("clap enforces --coloring");
            let text = fs::read_to_string(coloring).with_context(|| format!("reading {}", coloring.display()))?;
            let gamma: WideColoring = serde_json::from_str(&text).context("parsing wide colouring")?;
            (g, gamma)
        }
        (None, Some(nd)) => {
            let o = omega_tuples(nd[0], nd[1])?;
            if nd[0] % args.k != 0 {
                bail!("--k {} does not divide {}", args.k, nd[0]);
            }
            let gamma = match zero_position_coloring(&o, nd[0] / args.k, args.k) {
                Ok(g) => g,
                Err(Error::NotWide(msg)) => bail!("zero-position colouring is not wide: {msg}"),
                Err(e) => return Err(e.into()),
            };
            (o.graph, gamma)
        }
        _ => bail!("give either --graph with --coloring, or --omega N D"),
    };
    let which: Vec<WideCondition> = match args.condition {
        Some(i) => vec![WideCondition::from_number(i).expect("range checked by clap")],
        None => (1..=4).filter_map(WideCondition::from_number).collect(),
    };
    let mut conditions = Vec::new();
    for c in which {
        conditions.push((c, check_wide(&g, &gamma, c)?));
    }
    let result = WideCheckOutput {
        violation: wide_violation(&g, &gamma)?,
        conditions,
    };
    ctx.emit(&result, || {
        let mut lines: Vec<String> = result.conditions.iter().map(|(c, ok)| format!("{c:?}: {ok}")).collect();
        if let Some(v) = &result.violation {
            lines.push(format!("class {:?} has edge {:?} inside its walk neighbourhood", v.class, v.edge));
        }
        lines.join("\n")
    })?;
    Ok(0)
}

fn verify(ctx: &Ctx, target: VerifyCmd) -> Result<u8> {
    match target {
        VerifyCmd::Counterexample {
            variant,
            cert,
            reading,
            chi_g_nodes,
            chi_g_secs,
        } => {
            let options = VerifyOptions {
                budget: ctx.budget,
                chi_g_budget: chi_g_nodes.map(|n| SearchBudget {
                    max_nodes: n,
                    max_secs: chi_g_secs,
                    clique_precolor: true,
                }),
                reading: reading.into(),
            };
            let params = CounterexampleParams::for_variant(variant.into());
            let v = verify_counterexample(&params, &options);
            let r = &v.report;
            if let (Some(path), Status::Pass) = (&cert, r.status) {
                let c = emit_certificate(&v)?;
                write_text(path, &c.to_json()?)?;
                info!("certificate written to {}", path.display());
            }
            ctx.emit(r, || output::report_text(r, cert.as_deref()))?;
            Ok(match r.status {
                Status::Pass => 0,
                Status::Failed => EXIT_FAILED,
                Status::Inconclusive => EXIT_BUDGET,
            })
        }
        VerifyCmd::Certificate { cert } => {
            let text = fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
            let c = Certificate::from_json(&text).context("parsing certificate")?;
            let check = check_certificate(&c);
            ctx.emit(&check, || {
                let mut lines: Vec<String> = check
                    .findings
                    .iter()
                    .map(|f| format!("[{}] {}: {}", if f.ok { "ok" } else { "FAIL" }, f.name, f.detail))
                    .collect();
                if c.verdicts.chi_g.status == ChiGStatus::NotMachineChecked {
                    lines.push(format!("note: {}", c.verdicts.chi_g.note));
                }
                lines.push(if check.ok { "certificate OK".into() } else { "certificate REJECTED".into() });
                lines.join("\n")
            })?;
            Ok(if check.ok { 0 } else { EXIT_FAILED })
        }
    }
}
