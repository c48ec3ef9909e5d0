//! `toric`: analyze iterated torus-invariant blowups of P^3 or P^2, push
//! curve classes through their toric symmetries, and run the full census.
//!
//! Exit codes: 0 on success, 2 on usage or validation errors, 1 on an
//! internal invariant failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use toric::blowup::{build, parse_centers, BlowupSpace};
use toric::census::{dedup, enumerate_configs, scan, Census};
use toric::chow::CurveClass;
use toric::report::{analyze_report, census_report, push_report, raw_census_report, Report};

#[derive(Parser)]
#[command(
    name = "toric",
    about = "Exact intersection theory and symmetry classification for toric blowups of projective space",
    long_about = None,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one blowup space and report its fan, Chow presentation,
    /// divisor ledger, anticanonical class and all toric symmetries.
    Analyze(AnalyzeArgs),
    /// Enumerate all blowup configurations, deduplicate them under
    /// relabeling, and classify the nontrivial symmetries of each orbit.
    Census(CensusArgs),
    /// Push a curve class through a toric symmetry and print the induced
    /// Gromov-Witten / Donaldson-Thomas identity.
    Push(PushArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Comma-separated blowup centers, points first: `p<ijk>` for the fixed
    /// point of rays i,j,k and `l<ij>` for the line of rays i,j (dim 3);
    /// `p<ij>` in dim 2. Empty string for projective space itself.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    centers: String,
    /// Ambient dimension (3 for P^3, 2 for P^2).
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Write the JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Print the JSON report to stdout (default when --json is absent).
    #[arg(long)]
    stdout: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DedupMode {
    On,
    Off,
}

#[derive(Args)]
struct CensusArgs {
    /// Ambient dimension (3 for P^3, 2 for P^2).
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// With `off`, only enumerate and report the raw configuration count.
    #[arg(long, value_enum, default_value_t = DedupMode::On)]
    dedup: DedupMode,
    /// Worker threads for the scan (0 = all cores).
    #[arg(long, default_value_t = 0)]
    parallel: usize,
    /// Write the JSON report to this path instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct PushArgs {
    /// Blowup centers, as in `analyze`.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    centers: String,
    /// Ambient dimension (3 for P^3, 2 for P^2).
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Curve class coordinates `d,a...,b...` in the signed convention
    /// beta = d*h - sum(a*e) - sum(b*f): one coordinate per basis curve,
    /// exceptional coefficients with the minus sign folded in. Example: on
    /// the space `p123,l34,l24`, the fiber class f34 is `0,0,1,0`.
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    /// Index of the symmetry in the canonical order reported by `analyze`.
    #[arg(long)]
    symmetry: usize,
    /// Write the JSON report to this path instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(|| match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Census(args) => cmd_census(&args),
        Command::Push(args) => cmd_push(&args),
    });
    match result {
        Ok(Ok(code)) => code,
        Ok(Err(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
        // a panic is an internal invariant failure; the default hook has
        // already printed its message
        Err(_) => ExitCode::from(1),
    }
}

fn check_dim(dim: usize) -> anyhow::Result<()> {
    anyhow::ensure!(dim == 2 || dim == 3, "--dim must be 2 or 3, got {dim}");
    Ok(())
}

fn build_space(centers: &str, dim: usize) -> anyhow::Result<BlowupSpace> {
    check_dim(dim)?;
    let config = parse_centers(centers, dim).with_context(|| format!("invalid --centers `{centers}`"))?;
    build(&config).context("building blowup space")
}

fn emit(json: String, path: &Option<PathBuf>, force_stdout: bool) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?;
            if force_stdout {
                print!("{json}");
            }
        }
        None => print!("{json}"),
    }
    std::io::stdout().flush().ok();
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> anyhow::Result<ExitCode> {
    let space = build_space(&args.centers, args.dim)?;
    let report = Report::new("analyze", analyze_report(&space));
    emit(report.to_json(), &args.json, args.stdout)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_census(args: &CensusArgs) -> anyhow::Result<ExitCode> {
    check_dim(args.dim)?;
    if args.parallel > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.parallel)
            .build_global()
            .context("configuring worker threads")?;
    }
    let json = match args.dedup {
        DedupMode::Off => {
            let configs = enumerate_configs(args.dim);
            Report::new("census", raw_census_report(args.dim, configs.len())).to_json()
        }
        DedupMode::On => {
            let configs = enumerate_configs(args.dim);
            let orbits = dedup(&configs);
            let records = scan(&orbits);
            let census = Census { rank: args.dim, raw_count: configs.len(), records };
            Report::new("census", census_report(&census)).to_json()
        }
    };
    emit(json, &args.json, false)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_push(args: &PushArgs) -> anyhow::Result<ExitCode> {
    let space = build_space(&args.centers, args.dim)?;
    let coords: Vec<i64> = args
        .beta
        .split(',')
        .map(|t| t.trim().parse::<i64>().with_context(|| format!("bad coordinate `{t}` in --beta")))
        .collect::<anyhow::Result<_>>()?;
    anyhow::ensure!(
        coords.len() == space.basis_dim(),
        "--beta has {} coordinates but the space `{}` has {} basis curves ({})",
        coords.len(),
        space.config.to_token_string(),
        space.basis_dim(),
        space.ledger.curve_basis_names().join(","),
    );
    let syms = space.find_symmetries();
    anyhow::ensure!(
        args.symmetry < syms.len(),
        "--symmetry {} out of range: the space has {} symmetries",
        args.symmetry,
        syms.len()
    );
    let sym = &syms[args.symmetry];
    let beta = CurveClass(coords);
    let image = space.apply_to_curve(sym, &beta);

    let report = Report::new("push", push_report(&space, args.symmetry, &beta, &image));
    emit(report.to_json(), &args.json, false)?;
    // keep the identity statements visible when the JSON goes to a file
    if args.json.is_some() {
        for line in &report.payload.identities {
            println!("{line}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use toric::report::symmetry_report;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn symmetry_report_indices_match_order() {
        let space = build_space("p123,l34,l24", 3).unwrap();
        let syms = space.find_symmetries();
        for (i, s) in syms.iter().enumerate() {
            assert_eq!(symmetry_report(&space, i, s).index, i);
        }
    }
}
