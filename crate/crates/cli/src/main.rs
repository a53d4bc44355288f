//! Command-line front end: configure a group, run a computation, emit
//! a JSON or CSV report, and exit nonzero when any checked identity
//! fails.

use anyhow::Context;
use clap::{Parser, ValueEnum};
use glu2::cli::{run, Command, OutputFormat, RunConfig, DEFAULT_BUDGET, DEFAULT_SEED};
use glu2::matgroups::GroupKind;
use glu2::rings::RingFamily;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Gl2,
    Gu2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Mixed,
    Equal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    /// Conjugacy classes with real/strongly-real counts vs the closed forms.
    Census,
    /// Involution count vs the closed form.
    Involutions,
    /// Exact modular character table with indicators and typing.
    Chartab,
    /// Class list with canonical labels.
    Classify,
    /// The full verification battery.
    VerifyAll,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Exact conjugacy, reality and character computations for GL2 and GU2
/// over truncated discrete valuation rings.
#[derive(Parser, Debug)]
#[command(name = "glu2", version, about)]
struct Args {
    /// Group kind.
    #[arg(long, value_enum, default_value = "gl2")]
    kind: KindArg,

    /// Ring family: Z/p^l (mixed) or F_q[t]/t^l (equal).
    #[arg(long, value_enum, default_value = "mixed")]
    family: FamilyArg,

    /// Odd prime p.
    #[arg(long, default_value_t = 3)]
    p: u64,

    /// Residue degree (must be 1 on the command line).
    #[arg(long, default_value_t = 1)]
    f: u32,

    /// Truncation level l >= 1.
    #[arg(long, default_value_t = 1)]
    ell: u32,

    /// What to compute.
    #[arg(long, value_enum, default_value = "census")]
    command: CommandArg,

    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,

    /// Directory for group caches (also via GLU2_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,

    /// Enumeration budget: refuse groups larger than this.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Seed for the character-table splitting.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let cache_dir = args
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("GLU2_CACHE_DIR").map(PathBuf::from));
    let config = RunConfig {
        kind: match args.kind {
            KindArg::Gl2 => GroupKind::Gl2,
            KindArg::Gu2 => GroupKind::Gu2,
        },
        family: match args.family {
            FamilyArg::Mixed => RingFamily::Mixed,
            FamilyArg::Equal => RingFamily::Equal,
        },
        p: args.p,
        f: args.f,
        ell: args.ell,
        command: match args.command {
            CommandArg::Census => Command::Census,
            CommandArg::Involutions => Command::Involutions,
            CommandArg::Chartab => Command::Chartab,
            CommandArg::Classify => Command::Classify,
            CommandArg::VerifyAll => Command::VerifyAll,
        },
        format: match args.format {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        },
        cache_dir,
        budget: args.budget,
        seed: args.seed,
    };

    let started = std::time::Instant::now();
    let report = run(&config).context("run failed")?;
    let elapsed = started.elapsed().as_millis();

    for claim in &report.claims {
        eprintln!(
            "{} {:<52} expected {:>10}  computed {:>10}",
            if claim.pass() { "PASS" } else { "FAIL" },
            claim.id,
            claim.expected,
            claim.computed
        );
    }
    eprintln!("timing: {elapsed} ms");

    let body = report.render();
    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            f.write_all(body.as_bytes())?;
        }
        None => {
            print!("{body}");
        }
    }

    if !report.all_pass() {
        std::process::exit(1);
    }
    Ok(())
}
