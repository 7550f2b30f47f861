mod corpus;
mod svg;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use knotq::braid::BraidWord;
use knotq::invariant::{run_pipeline, run_pipeline_braid, PipelineOptions, DEFAULT_GROUP_CAP};
use knotq::moves::{fuzz, mirror, FuzzStatus};
use std::path::PathBuf;
use std::process::ExitCode;

/// Quadratic-form knot invariant from long diagrams: torsion of the double
/// cyclic cover, the orbit-reduced minv set, and the Gauss sum.
#[derive(Parser)]
#[command(name = "knotq", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the invariant of one knot.
    Compute(ComputeArgs),
    /// Run a corpus file and compare against expected values.
    Corpus(CorpusArgs),
    /// Fuzz presentation invariance through random Markov moves.
    Fuzz(FuzzArgs),
    /// Render the decorated diagram as SVG.
    Svg(SvgArgs),
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Braid word letters, e.g. "1 1 1" (needs --strands).
    #[arg(long, allow_hyphen_values = true)]
    braid: Option<String>,
    /// Strand count for --braid.
    #[arg(long)]
    strands: Option<usize>,
    /// Diagram document path (JSON).
    #[arg(long)]
    diagram: Option<PathBuf>,
    /// Substitute eps = 0 instead of 1/2 (experimental; not an invariant).
    #[arg(long, hide = true)]
    epsilon_zero: bool,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus file (JSON list of entries).
    path: PathBuf,
    /// Also run the mirror-antisymmetry conjecture suite.
    #[arg(long)]
    mirror_check: bool,
}

#[derive(Args)]
struct FuzzArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 30)]
    moves: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also check the mirror-antisymmetry conjecture for this knot.
    #[arg(long)]
    mirror_check: bool,
}

#[derive(Args)]
struct SvgArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output file.
    #[arg(long, short)]
    out: PathBuf,
}

fn pipeline_options(input: &InputArgs) -> anyhow::Result<PipelineOptions> {
    let mut opts = PipelineOptions {
        eps_zero: input.epsilon_zero,
        ..Default::default()
    };
    if let Ok(cap) = std::env::var("KNOTQ_GROUP_CAP") {
        opts.group_cap = cap
            .parse()
            .context("KNOTQ_GROUP_CAP must be a positive integer")?;
    } else {
        opts.group_cap = DEFAULT_GROUP_CAP;
    }
    Ok(opts)
}

fn parse_braid(input: &InputArgs) -> anyhow::Result<BraidWord> {
    let text = input.braid.as_ref().expect("caller checked");
    let strands = input
        .strands
        .context("--braid requires --strands")?;
    let mut letters = Vec::new();
    for tok in text.split_whitespace() {
        let l: i32 = tok
            .parse()
            .with_context(|| format!("invalid braid letter `{tok}`"))?;
        letters.push(l);
    }
    Ok(BraidWord::new(strands, letters)?)
}

fn load_input(input: &InputArgs) -> anyhow::Result<knotq::invariant::Pipeline> {
    let opts = pipeline_options(input)?;
    match (&input.braid, &input.diagram) {
        (Some(_), None) => {
            let b = parse_braid(input)?;
            Ok(run_pipeline_braid(&b, &opts)?)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read diagram {}", path.display()))?;
            let spec: knotq::DiagramSpec =
                serde_json::from_str(&text).context("diagram document does not parse")?;
            let d = knotq::parse_diagram(&spec)?;
            Ok(run_pipeline(d, &opts)?)
        }
        _ => bail!("provide exactly one of --braid (with --strands) or --diagram"),
    }
}

fn cmd_compute(args: &ComputeArgs) -> anyhow::Result<i32> {
    let pipeline = load_input(&args.input)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&pipeline.report)?);
    } else {
        print!("{}", pipeline.report.to_text());
    }
    Ok(0)
}

fn cmd_corpus(args: &CorpusArgs) -> anyhow::Result<i32> {
    let entries = corpus::load_corpus(&args.path)?;
    let opts = PipelineOptions::default();
    let mut failures = 0usize;
    for entry in &entries {
        let report = corpus::entry_report(entry, &opts)?;
        let outcome = corpus::check_entry(entry, &report);
        println!(
            "{:12} {}  {}",
            outcome.name,
            if outcome.pass { "pass" } else { "FAIL" },
            outcome.detail
        );
        if !outcome.pass {
            failures += 1;
        }
        if args.mirror_check {
            if let Some(m) = corpus::mirror_check(entry, &report, &opts)? {
                println!(
                    "{:12} {}  {}",
                    format!("{}*", entry.name),
                    if m.pass { "pass" } else { "FAIL" },
                    m.detail
                );
                if !m.pass {
                    failures += 1;
                }
            }
        }
    }
    println!(
        "{} entries, {} failed",
        entries.len(),
        failures
    );
    Ok(if failures == 0 { 0 } else { 1 })
}

fn cmd_fuzz(args: &FuzzArgs) -> anyhow::Result<i32> {
    if args.input.braid.is_none() {
        bail!("fuzz needs a braid input");
    }
    let b = parse_braid(&args.input)?;
    let opts = pipeline_options(&args.input)?;
    let report = fuzz(&b, args.moves, args.trials, args.seed, &opts)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    let mut ok = matches!(report.status, FuzzStatus::Pass);

    if args.mirror_check {
        let base = knotq::invariant::full_report_braid(&b, &opts)?;
        let mirrored = knotq::invariant::full_report_braid(&mirror(&b), &opts)?;
        let negated_minv = base.minv.as_ref().map(|m| {
            let mut n: Vec<i64> = m.iter().map(|x| -x).collect();
            n.sort_unstable();
            n
        });
        let holds = mirrored.minv == negated_minv
            && mirrored.fingerprint == base.fingerprint.negated();
        println!(
            "mirror-check: {}",
            if holds { "pass" } else { "FAIL" }
        );
        ok &= holds;
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_svg(args: &SvgArgs) -> anyhow::Result<i32> {
    let pipeline = load_input(&args.input)?;
    let rendered = svg::render(&pipeline);
    std::fs::write(&args.out, rendered)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    println!("wrote {}", args.out.display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Corpus(args) => cmd_corpus(args),
        Command::Fuzz(args) => cmd_fuzz(args),
        Command::Svg(args) => cmd_svg(args),
    };
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
