use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ars_core::approx::build_approximation;
use ars_core::frontend::analyze::{algebras, frame_of, require_privileged, resolve_weights};
use ars_core::frontend::{analyze, parse_frame, AnalysisFailure, AnalyzeOptions, FrameDocument, StratifyOptions, WeightsSetting};
use ars_core::liealg::{classify_fields, is_solvable, nilpotent_step};
use ars_core::locus::{corank_at, frame_determinant, genericity_codims, stratify_samples, SamplerConfig};
use ars_core::{rational, Error, Rational};

#[derive(Parser)]
#[command(name = "ars", version, about = "Nilpotent and solvable approximations of almost-Riemannian frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and emit the JSON report.
    Analyze(AnalyzeArgs),
    /// Growth vector, weights and privileged check.
    Weights(FrameArgs),
    /// The approximating frame.
    Approx(FrameArgs),
    /// Lie algebra, ideal and classification.
    Liealg(FrameArgs),
    /// Determinant and corank strata.
    Locus(LocusArgs),
    /// Generic corank strata and defect windows in dimension n.
    Codims { n: i64 },
}

#[derive(Args)]
struct FrameArgs {
    file: PathBuf,
    /// `auto` or comma-separated positive integers.
    #[arg(long)]
    weights: Option<String>,
    /// Comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long)]
    max_bracket_depth: Option<usize>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    stratify: bool,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    frame: FrameArgs,
    /// Write the report here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    probe_flows: bool,
    #[command(flatten)]
    sampling: SampleArgs,
}

#[derive(Args)]
struct LocusArgs {
    #[command(flatten)]
    frame: FrameArgs,
    #[command(flatten)]
    sampling: SampleArgs,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::RankConditionFailure { .. } => 3,
        Error::NotPrivileged { .. } => 4,
        Error::DegenerateApproximation => 5,
        _ => 1,
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

fn failure(message: String) -> Failure {
    Failure { code: 1, message }
}

fn parse_weights(text: &str) -> Result<WeightsSetting, Failure> {
    if text.trim() == "auto" {
        return Ok(WeightsSetting::Auto);
    }
    text.split(',')
        .map(|w| w.trim().parse::<u32>().ok().filter(|&w| w > 0))
        .collect::<Option<Vec<_>>>()
        .map(WeightsSetting::Explicit)
        .ok_or_else(|| failure(format!("invalid --weights `{text}`")))
}

fn parse_point(text: &str) -> Result<Vec<Rational>, Failure> {
    text.split(',')
        .map(rational::parse)
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| failure(format!("invalid --point `{text}`")))
}

fn load(path: &Path) -> Result<FrameDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| failure(format!("{}: {e}", path.display())))?;
    parse_frame(&text).map_err(|e| Failure { code: 2, message: format!("{}:{e}", path.display()) })
}

fn options(args: &FrameArgs) -> Result<AnalyzeOptions, Failure> {
    let mut opts = AnalyzeOptions::from_env();
    opts.weights = args.weights.as_deref().map(parse_weights).transpose()?;
    opts.point = args.point.as_deref().map(parse_point).transpose()?;
    opts.max_bracket_depth = args.max_bracket_depth;
    Ok(opts)
}

fn write_report(json: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, json).map_err(|e| failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let doc = load(&args.frame.file)?;
    let mut opts = options(&args.frame)?;
    opts.probe_flows = args.probe_flows;
    if args.sampling.stratify {
        opts.stratify = Some(StratifyOptions { samples: args.sampling.samples, seed: args.sampling.seed });
    }
    match analyze(&doc, &opts) {
        Ok(report) => write_report(&report.to_json(), args.json.as_deref()),
        Err(AnalysisFailure { error, partial }) => {
            if let Some(report) = partial {
                write_report(&report.to_json(), args.json.as_deref())?;
            }
            Err(error.into())
        }
    }
}

fn cmd_weights(args: &FrameArgs) -> Result<(), Failure> {
    let doc = load(&args.file)?;
    let opts = options(args)?;
    let frame = frame_of(&doc, &opts)?;
    let (growth, w, declared) = resolve_weights(&frame, &doc, &opts)?;
    let dims: Vec<String> = growth.dims.iter().map(usize::to_string).collect();
    println!("growth vector: ({})", dims.join(","));
    println!("step: {}", growth.step);
    println!("weights: {w} ({})", if declared { "declared" } else { "auto" });
    let orders = require_privileged(&frame, &w)?;
    let orders: Vec<String> = orders.iter().map(|o| o.map_or("-".into(), |v| v.to_string())).collect();
    println!("coordinate orders: ({})", orders.join(","));
    println!("privileged: yes");
    Ok(())
}

fn cmd_approx(args: &FrameArgs) -> Result<(), Failure> {
    let doc = load(&args.file)?;
    let opts = options(args)?;
    let frame = frame_of(&doc, &opts)?;
    let (_, w, _) = resolve_weights(&frame, &doc, &opts)?;
    require_privileged(&frame, &w)?;
    let a = build_approximation(&frame, &w)?;
    let names = frame.var_names();
    println!("weights: {w}");
    println!("k = {}, m = {}, n = {}", a.k, a.m, a.n());
    for (i, f) in a.fields().iter().enumerate() {
        println!("{:<6} {:<6} {}", doc.fields[a.source[i]].name, format!("{:?}", a.role(i)).to_lowercase(), f.to_text(names));
    }
    println!("transform:");
    for row in &a.transform {
        let row: Vec<String> = row.iter().map(Rational::to_string).collect();
        println!("  [{}]", row.join(", "));
    }
    if a.degenerate {
        return Err(Error::DegenerateApproximation.into());
    }
    Ok(())
}

fn cmd_liealg(args: &FrameArgs) -> Result<(), Failure> {
    let doc = load(&args.file)?;
    let opts = options(args)?;
    let frame = frame_of(&doc, &opts)?;
    let (_, w, _) = resolve_weights(&frame, &doc, &opts)?;
    require_privileged(&frame, &w)?;
    let a = build_approximation(&frame, &w)?;
    if a.degenerate {
        return Err(Error::DegenerateApproximation.into());
    }
    let (l, g) = algebras(&a)?;
    let c = classify_fields(&a, &l, &g)?;
    let names = frame.var_names();
    let step = |s: Option<usize>| s.map_or("not nilpotent".to_string(), |s| s.to_string());
    println!("algebra: dim {}, solvable {}, nilpotent step {}", l.len(), is_solvable(&l), step(nilpotent_step(&l)));
    for b in l.basis() {
        println!("  {}", b.to_text(names));
    }
    println!("ideal: dim {}, nilpotent step {}", g.len(), step(nilpotent_step(&g)));
    for b in g.basis() {
        println!("  {}", b.to_text(names));
    }
    println!("k = {}, l = {}, m = {}", c.k, c.l, c.m);
    for (i, kind) in c.labels.iter().enumerate() {
        println!("  {:<6} {}", doc.fields[a.source[i]].name, format!("{kind:?}").to_lowercase());
    }
    Ok(())
}

fn cmd_locus(args: &LocusArgs) -> Result<(), Failure> {
    let doc = load(&args.frame.file)?;
    let opts = options(&args.frame)?;
    let frame = frame_of(&doc, &opts)?;
    let det = frame_determinant(&frame);
    println!("determinant: {}", det.to_text(frame.var_names()));
    println!("corank at base point: {}", corank_at(&frame, frame.base_point())?);
    if args.sampling.stratify {
        let cfg = SamplerConfig::new(frame.dim(), args.sampling.seed);
        let s = stratify_samples(&frame, &cfg, args.sampling.samples.max(1))?;
        let hist: Vec<String> = s.histogram.iter().map(usize::to_string).collect();
        println!("corank histogram over {} samples: [{}]", s.samples, hist.join(", "));
        for st in &s.strata {
            let est = st.estimated_codim.map_or("unknown".into(), |c| c.to_string());
            println!(
                "  r = {}: {} hits ({} on lines), codim estimate {}, generic codim {}",
                st.r,
                st.hits.len(),
                st.line_hits,
                est,
                st.predicted_codim
            );
        }
        if s.approximate_roots > 0 {
            println!("  {} irrational line roots not classified", s.approximate_roots);
        }
    }
    Ok(())
}

fn cmd_codims(n: i64) -> Result<(), Failure> {
    let table = genericity_codims(n)?;
    println!("{}", serde_json::to_string_pretty(&table).expect("table serializes"));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Weights(a) => cmd_weights(a),
        Command::Approx(a) => cmd_approx(a),
        Command::Liealg(a) => cmd_liealg(a),
        Command::Locus(a) => cmd_locus(a),
        Command::Codims { n } => cmd_codims(*n),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
