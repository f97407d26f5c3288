use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwalk_cli::commands::{self, SweepConfig};
use qwalk_cli::config::{self, Detectors, Geometry, RunConfig, DEFAULT_STEPS};
use qwalk_cli::{figures, output, validate, CliError};
use qwalk_core::{CaseFamily, CoinParams, InitialState, StepWindow};

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Coined quantum walks on a line with periodic coins"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single walk and write its series, final snapshot and report.
    Run(RunArgs),
    /// Run one case family over a range of N or q.
    Sweep(SweepArgs),
    /// Regenerate every reference figure as CSV and SVG.
    ReproduceFigures {
        #[arg(long, default_value = "figures")]
        out: PathBuf,
    },
    /// Run the invariant checks.
    Validate,
}

#[derive(Args)]
struct WalkArgs {
    /// Number of steps.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// symmetric | asymmetric | custom:a_re,a_im,b_re,b_im
    #[arg(long, default_value = "symmetric", value_parser = config::parse_init)]
    init: InitialState,
    /// Override the no-potential coin with the general coin rho,theta,phi.
    #[arg(long, value_parser = config::parse_coin_params)]
    coin_c0: Option<CoinParams>,
    /// Override the potential coin with the general coin rho,theta,phi.
    #[arg(long, value_parser = config::parse_coin_params)]
    coin_cp: Option<CoinParams>,
    /// Localization window LO:HI (default T/2:T).
    #[arg(long, value_parser = config::parse_window)]
    window: Option<StepWindow>,
    /// Localization threshold on the P₀ ratio to the Hadamard walk.
    #[arg(long, default_value_t = qwalk_core::observables::DEFAULT_LOCALIZATION_RATIO)]
    loc_ratio: f64,
    /// Minimum P₀ for a recurrence peak.
    #[arg(long, default_value_t = qwalk_core::observables::DEFAULT_PEAK_HEIGHT)]
    peak_height: f64,
}

impl WalkArgs {
    fn detectors(&self) -> Detectors {
        Detectors {
            window: self.window,
            loc_ratio: self.loc_ratio,
            peak_height: self.peak_height,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_family)]
    case: Option<CaseFamily>,
    /// Period N for families I and II.
    #[arg(long)]
    period: Option<u32>,
    /// Block length q for family III.
    #[arg(long)]
    q: Option<u32>,
    /// Block pattern such as H1I13 or G<0.5,0,0>3I3.
    #[arg(long, conflicts_with = "case")]
    pattern: Option<String>,
    #[command(flatten)]
    walk: WalkArgs,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_family)]
    case: CaseFamily,
    /// Periods, e.g. 2..14, 2..14(even) or 4,7,10.
    #[arg(long)]
    period: Option<String>,
    /// Block lengths, e.g. 3..19(odd).
    #[arg(long)]
    q: Option<String>,
    #[command(flatten)]
    walk: WalkArgs,
    /// Also write sweep_<case>.csv into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<CaseFamily, String> {
    s.parse()
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let geometry = Geometry::from_flags(args.case, args.period, args.q, args.pattern)?;
    let mut cfg = RunConfig::new(geometry, args.out);
    cfg.steps = args.walk.steps;
    cfg.init = args.walk.init;
    cfg.coin_c0 = args.walk.coin_c0;
    cfg.coin_cp = args.walk.coin_cp;
    cfg.detectors = args.walk.detectors();
    let out = commands::run_case(&cfg)?;
    print!("{}", out.report.render());
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let range = match (args.case.uses_block_length(), args.period, args.q) {
        (false, Some(r), None) | (true, None, Some(r)) => r,
        (false, _, _) => {
            return Err(CliError::Usage(format!(
                "case {} needs --period RANGE",
                args.case
            )))
        }
        (true, _, _) => {
            return Err(CliError::Usage(format!(
                "case {} needs --q RANGE",
                args.case
            )))
        }
    };
    let params = config::parse_param_range(&range).map_err(CliError::Usage)?;
    let mut cfg = SweepConfig::new(args.case, params);
    cfg.steps = args.walk.steps;
    cfg.init = args.walk.init;
    cfg.coin_c0 = args.walk.coin_c0;
    cfg.coin_cp = args.walk.coin_cp;
    cfg.detectors = args.walk.detectors();
    let csv = commands::sweep_csv(&commands::sweep(&cfg)?);
    if let Some(dir) = args.out {
        output::ensure_dir(&dir)?;
        output::write_file(&dir.join(format!("sweep_{}.csv", args.case)), &csv)?;
    }
    print!("{csv}");
    Ok(())
}

fn validate() -> Result<bool, CliError> {
    let checks = validate::run_checks();
    let mut stdout = std::io::stdout().lock();
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(stdout, "{status}  {}: {}", c.name, c.detail);
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args).map(|_| true),
        Command::Sweep(args) => sweep(args).map(|_| true),
        Command::ReproduceFigures { out } => figures::reproduce_figures(&out).map(|files| {
            for f in files {
                println!("{}", f.display());
            }
            true
        }),
        Command::Validate => validate(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
