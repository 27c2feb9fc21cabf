//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 I/O, 2 usage, 3 conjecture violation,
//! 4 engine disagreement.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use detconj::campaign::{
    export_bfile, run_campaign_with, CampaignConfig, CampaignReport, Evaluator, Mode,
    StandardEvaluator, DEFAULT_PROBABILISTIC_PRIMES,
};
use detconj::explore::{cofactor_profile, principal_minors};
use detconj::{bfile, build_m, CrtMode, Engine, Error, SparseColMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "detconj", version, about = "Exact determinants of the M(d) family")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write M(d) in the sparse text format.
    Gen {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one determinant.
    Det(DetArgs),
    /// Run the campaign over d = 1..=max-d.
    Verify(VerifyArgs),
    /// Run the campaign over an arbitrary range.
    Campaign {
        #[arg(long)]
        min_d: u64,
        #[command(flatten)]
        run: VerifyArgs,
    },
    /// Export cofactors along a row, or the leading principal minors.
    Explore {
        #[arg(long)]
        d: u64,
        /// Row to expand along (default 2d).
        #[arg(long, conflicts_with = "minors")]
        row: Option<usize>,
        #[arg(long)]
        minors: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Median wall times per (d, engine).
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_engine)]
        engines: Vec<Engine>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct DetArgs {
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    d: Option<u64>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value = "bareiss", value_parser = parse_engine)]
    engine: Engine,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = DEFAULT_PROBABILISTIC_PRIMES)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    max_d: u64,
    /// Defaults to certified when bareiss or modular_crt is selected.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = DEFAULT_PROBABILISTIC_PRIMES)]
    k: usize,
    #[arg(
        long,
        value_delimiter = ',',
        value_parser = parse_engine,
        default_value = "modular_crt,structural"
    )]
    engines: Vec<Engine>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a b-file of the determinants here.
    #[arg(long)]
    bfile: Option<PathBuf>,
    /// Print the JSON report on stdout (human text goes to stderr).
    #[arg(long)]
    json: bool,
    /// Keep wall-clock fields in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Certified,
    Probabilistic,
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    s.parse()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, evaluator: &dyn Evaluator, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, evaluator, out, err) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "error: {e:#}");
            code
        }
    }
}

/// Maps a failure to the fixed exit-code table.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    if let Some(lib) = e.downcast_ref::<Error>() {
        return match lib {
            Error::EngineDisagreement { .. } => EXIT_DISAGREEMENT,
            Error::Io(_) | Error::Json(_) | Error::CheckpointCorrupt { .. } => EXIT_IO,
            _ => EXIT_USAGE,
        };
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_IO;
    }
    EXIT_USAGE
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Error::InvalidConfig(msg.into()))
}

fn check_d(d: u64) -> anyhow::Result<()> {
    if d == 0 {
        return Err(Error::InvalidFamilyIndex(d).into());
    }
    Ok(())
}

fn write_machine(path: Option<&Path>, out: &mut dyn Write, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(Error::from)
            .with_context(|| format!("writing {}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::from(e).into()),
    }
}

fn dispatch(
    cmd: Command,
    evaluator: &dyn Evaluator,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    match cmd {
        Command::Gen { d, out: path } => {
            check_d(d)?;
            let m = build_m(d)?;
            write_machine(path.as_deref(), out, &m.to_text())?;
            Ok(EXIT_OK)
        }
        Command::Det(args) => cmd_det(args, out),
        Command::Verify(args) => cmd_campaign(1, args, evaluator, out, err),
        Command::Campaign { min_d, run } => cmd_campaign(min_d, run, evaluator, out, err),
        Command::Explore {
            d,
            row,
            minors,
            out: path,
        } => {
            check_d(d)?;
            let text = if minors {
                let values = principal_minors(d)?;
                bfile::format_bfile((1..).zip(values.iter()))
            } else {
                let row = row.unwrap_or(2 * d as usize);
                cofactor_profile(d, row)?.to_text()
            };
            write_machine(path.as_deref(), out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Bench {
            d,
            engines,
            reps,
            json,
        } => cmd_bench(&d, &engines, reps, json, out),
    }
}

fn crt_mode(mode: Option<ModeArg>, k: usize, seed: u64) -> anyhow::Result<CrtMode> {
    match mode {
        None | Some(ModeArg::Certified) => Ok(CrtMode::Certified),
        Some(ModeArg::Probabilistic) if k == 0 => Err(usage("--k must be at least 1")),
        Some(ModeArg::Probabilistic) => Ok(CrtMode::Probabilistic { k, seed }),
    }
}

fn cmd_det(args: DetArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let m = match (args.d, &args.input) {
        (Some(d), _) => {
            check_d(d)?;
            build_m(d)?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(Error::from)
                .with_context(|| format!("reading {}", path.display()))?;
            SparseColMatrix::from_text(&text)?
        }
        (None, None) => unreachable!("clap requires --d or --in"),
    };
    let mode = crt_mode(args.mode, args.k, args.seed)?;
    let result = StandardEvaluator.evaluate(args.engine, &m, mode)?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string(&result)?)?;
    } else {
        writeln!(out, "{}", result.value)?;
    }
    Ok(EXIT_OK)
}

fn cmd_campaign(
    d_min: u64,
    args: VerifyArgs,
    evaluator: &dyn Evaluator,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    check_d(d_min)?;
    check_d(args.max_d)?;
    let certifying = args
        .engines
        .iter()
        .any(|e| matches!(e, Engine::Bareiss | Engine::ModularCrt));
    let mode = match args.mode {
        Some(ModeArg::Certified) => Mode::Certified,
        None if certifying => Mode::Certified,
        _ => Mode::Probabilistic { k: args.k },
    };
    let cfg = CampaignConfig {
        d_min,
        d_max: args.max_d,
        engines: args.engines.clone(),
        mode,
        parallelism: args.jobs,
        checkpoint_path: args.checkpoint.clone(),
        seed: args.seed,
    };
    let report = run_campaign_with(&cfg, evaluator)?;

    if args.json {
        print_records(err, &report)?;
    } else {
        print_records(out, &report)?;
    }

    if let Some(p) = &args.out {
        report
            .write_json(p, args.timings)
            .with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &args.bfile {
        export_bfile(&report, p).with_context(|| format!("writing {}", p.display()))?;
    }
    if args.json {
        writeln!(out, "{}", report.to_json(args.timings))?;
    }
    Ok(if report.all_pass { EXIT_OK } else { EXIT_VIOLATION })
}

fn print_records(w: &mut dyn Write, report: &CampaignReport) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(w);
    for r in &report.records {
        writeln!(
            w,
            "d={} det={} expected={} {}",
            r.d,
            r.value,
            r.conjectured,
            if r.pass { "pass" } else { "FAIL" }
        )?;
    }
    print_summary(&mut w, report)?;
    w.flush()
}

fn print_summary(w: &mut dyn Write, report: &CampaignReport) -> std::io::Result<()> {
    for f in report.failures() {
        writeln!(
            w,
            "CONJECTURE VIOLATED at d={}: det={} expected={}",
            f.d, f.value, f.conjectured
        )?;
    }
    let engines: Vec<&str> = report.config.engines.iter().map(|e| e.name()).collect();
    writeln!(
        w,
        "{}/{} pass (d={}..{}, engines {}, {:.3}s)",
        report.passed(),
        report.records.len(),
        report.config.d_min,
        report.config.d_max,
        engines.join(","),
        report.total_seconds
    )
}

fn cmd_bench(ds: &[u64], engines: &[Engine], reps: usize, json: bool, out: &mut dyn Write) -> anyhow::Result<i32> {
    if engines.is_empty() {
        return Err(usage("--engines must name at least one engine"));
    }
    if reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    let mut rows = Vec::new();
    for &d in ds {
        check_d(d)?;
        let m = build_m(d)?;
        for &engine in engines {
            let mut times = Vec::with_capacity(reps);
            let mut value = None;
            for _ in 0..reps {
                let start = Instant::now();
                match StandardEvaluator.evaluate(engine, &m, CrtMode::Certified) {
                    Ok(r) => value = Some(r.value),
                    Err(Error::DimensionTooLarge { .. }) => break,
                    Err(e) => return Err(e.into()),
                }
                times.push(start.elapsed().as_secs_f64());
            }
            times.sort_by(f64::total_cmp);
            let median = (!times.is_empty()).then(|| times[times.len() / 2]);
            rows.push((d, engine, median, value));
        }
    }
    if json {
        let v: Vec<serde_json::Value> = rows
            .iter()
            .map(|(d, e, t, v)| {
                serde_json::json!({
                    "d": d,
                    "engine": e,
                    "median_seconds": t,
                    "value": v.as_ref().map(|x| x.to_string()),
                })
            })
            .collect();
        writeln!(out, "{}", serde_json::to_string(&v)?)?;
    } else {
        writeln!(out, "{:>8}  {:<12}  {:>14}  det", "d", "engine", "median_ms")?;
        for (d, e, t, v) in rows {
            let t = t.map_or("skipped".to_string(), |t| format!("{:.3}", t * 1e3));
            let v = v.map_or("-".to_string(), |v| v.to_string());
            writeln!(out, "{:>8}  {:<12}  {:>14}  {}", d, e.name(), t, v)?;
        }
    }
    Ok(EXIT_OK)
}
