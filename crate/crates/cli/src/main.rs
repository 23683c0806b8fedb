//! Command-line driver: solve the wave pattern, dump profiles, run the
//! stability simulation, or execute the acceptance suite.
//!
//! Exit codes: 0 success, 1 failed checks, aborted runs or other errors,
//! 2 when the end states do not admit a rarefaction/contact/rarefaction
//! pattern.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use micropolar::config::RunConfig;
use micropolar::output;
use micropolar::profiles::{CompositeWave, ProfileField};
use micropolar::riemann::solve_pattern;
use micropolar::solver::{run_with, RunHooks};
use micropolar::thermo::Family;
use micropolar::verify::{verify_with, Check};
use micropolar::Error;

#[derive(Parser)]
#[command(
    name = "micropolar",
    version,
    about = "Composite waves of the 1D inviscid micropolar fluid model"
)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory. Falls back to `MICROPOLAR_OUT`, then to
    /// `output.directory` in the config, then to `./micropolar-out`.
    #[arg(long, global = true, value_name = "DIR", env = "MICROPOLAR_OUT")]
    out: Option<PathBuf>,

    /// Config override as a dotted key, e.g. `grid.n=2048`. Repeatable.
    #[arg(long = "override", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the middle states and print the pattern as JSON.
    Riemann,
    /// Evaluate a profile on a (t, x) grid and write it as CSV.
    Profile(ProfileArgs),
    /// Evolve the perturbed composite wave and write snapshots, norms and a summary.
    Simulate,
    /// Run the acceptance checks and write a JSON verdict.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Composite,
    Contact,
    RarefactionMinus,
    RarefactionPlus,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long, value_enum, default_value = "composite")]
    kind: Kind,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 1.0, 10.0])]
    t: Vec<f64>,
    #[arg(long, default_value_t = -50.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 50.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 1001)]
    nx: usize,
    /// Write to stdout instead of `profile.csv` in the output directory.
    #[arg(long)]
    stdout: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated check ids (0 is the pattern check, 1-8 the criteria).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

fn load_config(common: &Common) -> anyhow::Result<RunConfig> {
    let base = match &common.config {
        Some(path) => RunConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => RunConfig::default(),
    };
    let config = base.with_overrides(&common.overrides)?;
    for warning in config.validate()? {
        eprintln!("warning: {warning}");
    }
    Ok(config)
}

fn out_dir(common: &Common, config: &RunConfig) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| config.output.directory.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("micropolar-out"))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn cmd_riemann(config: &RunConfig) -> anyhow::Result<ExitCode> {
    let params = config.gas;
    let pattern = solve_pattern(&params, &config.end_states()?, &config.profiles.pattern())?;
    let (lm, lp) = pattern.middle_speeds(&params)?;
    let cap = config.diagnostics.delta_cap;
    let admissible = pattern.delta <= cap;
    let doc = json!({
        "pattern": pattern,
        "middle_speeds": [lm, lp],
        "delta_cap": cap,
        "admissible": admissible,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(if admissible {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_profile(config: &RunConfig, dir: &Path, args: &ProfileArgs) -> anyhow::Result<ExitCode> {
    if args.nx < 2 || args.x_max.partial_cmp(&args.x_min) != Some(std::cmp::Ordering::Greater) {
        bail!("profile grid needs nx >= 2 and x_max > x_min");
    }
    let params = config.gas;
    let pattern = solve_pattern(&params, &config.end_states()?, &config.profiles.pattern())?;
    let composite = CompositeWave::build(&params, &pattern, &config.profiles.selfsimilar())?;
    let field = match args.kind {
        Kind::Composite => ProfileField::Composite(composite),
        Kind::Contact => ProfileField::Contact(composite.contact().clone()),
        Kind::RarefactionMinus => ProfileField::Rarefaction(composite.rarefaction(Family::Minus).clone()),
        Kind::RarefactionPlus => ProfileField::Rarefaction(composite.rarefaction(Family::Plus).clone()),
    };
    let h = (args.x_max - args.x_min) / (args.nx - 1) as f64;
    let xs: Vec<f64> = (0..args.nx).map(|i| args.x_min + i as f64 * h).collect();
    let csv = output::profile_csv(&field, &args.t, &xs)?;
    if args.stdout {
        print!("{csv}");
    } else {
        let path = write_file(dir, "profile.csv", &csv)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(config: &RunConfig, dir: &Path) -> anyhow::Result<ExitCode> {
    let mut progress = |r: &micropolar::diagnostics::NormReport| {
        eprintln!("t = {:>9.3}  sup = {:.4e}  |omega| = {:.4e}", r.t, r.sup, r.omega.l2);
    };
    let out = run_with(
        config,
        RunHooks {
            on_report: Some(&mut progress),
        },
    )?;
    let written = output::write_run(&out, dir)?;
    eprintln!("wrote {} files to {}", written.len(), dir.display());
    let s = &out.summary;
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "status": s.status,
            "t_reached": s.t_reached,
            "steps": s.steps,
            "initial_sup": s.initial_sup,
            "final_sup": s.final_sup,
            "omega_l2_monotone": s.omega_l2_monotone,
        }))?
    );
    Ok(if s.completed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_verify(config: &RunConfig, dir: &Path, args: &VerifyArgs) -> anyhow::Result<ExitCode> {
    let checks: Vec<Check> = if args.only.is_empty() {
        std::iter::once(Check::Pattern).chain(Check::CRITERIA).collect()
    } else {
        args.only
            .iter()
            .map(|&id| Check::from_id(id).with_context(|| format!("unknown check id {id}")))
            .collect::<anyhow::Result<_>>()?
    };
    let report = verify_with(config, &checks, |r| println!("{r}"));
    let path = write_file(dir, "verify.json", &serde_json::to_string_pretty(&report)?)?;
    let passed = report.checks.iter().filter(|r| r.passed).count();
    println!(
        "{passed}/{} checks passed; details in {}",
        report.checks.len(),
        path.display()
    );
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(&cli.common).and_then(|config| {
        let dir = out_dir(&cli.common, &config);
        match &cli.command {
            Command::Riemann => cmd_riemann(&config),
            Command::Profile(args) => cmd_profile(&config, &dir, args),
            Command::Simulate => cmd_simulate(&config, &dir),
            Command::Verify(args) => cmd_verify(&config, &dir, args),
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::PatternMismatch(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
