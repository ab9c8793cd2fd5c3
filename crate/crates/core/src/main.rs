use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eop_lab::exec::configure_threads_from_env;
use eop_lab::report::{run, Command, Format, RunConfig, SystemChoice};
use eop_lab::{Error, Execution};

#[derive(Parser, Debug)]
#[command(name = "eop-lab", version)]
#[command(about = "Exact ladder operators and superintegrable spectra for rationally extended oscillators")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Exceptional orthogonal polynomials y_n and the pseudo-Hermite polynomial
    Eop,
    /// Superpotential, partner potential and the dressing chain
    Potential,
    /// Ladder operators, coefficient table, kernel and chains
    Ladder,
    /// Verify the polynomial Heisenberg algebra identities
    PhaCheck,
    /// Spectrum and degeneracies of a 2D system
    Spectrum,
    /// Finite-dimensional unirreps of the 2D algebra
    Unirreps,
    /// Degeneracy tables
    Tables,
    /// Level diagram with the raising action
    Diagram,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FormatArg {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Args, Debug)]
struct Common {
    /// Even parameter m of the extended oscillator (case 1 and 1D commands)
    #[arg(long, global = true, default_value_t = 2)]
    m: usize,

    /// 2D system: 1 = oscillator x extended, 2 = extended x extended
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    case: u8,

    /// First parameter for case 2 (defaults to --m)
    #[arg(long, global = true)]
    m1: Option<usize>,

    /// Second parameter for case 2 (defaults to --m1)
    #[arg(long, global = true)]
    m2: Option<usize>,

    /// Highest index nu of the 1D tables (default 3(m+1))
    #[arg(long, global = true, allow_negative_numbers = true)]
    nu_max: Option<i64>,

    /// Highest level N of the 2D spectrum
    #[arg(long, global = true, default_value_t = 40, allow_negative_numbers = true)]
    n_max: i64,

    /// Largest unirrep dimension minus one (default from N_max)
    #[arg(long, global = true)]
    p_max: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Write the artifact here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also run the constraint solver and the integral-of-motion check
    #[arg(long, global = true)]
    cross_check: bool,

    /// Run on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,
}

fn config(cli: &Cli) -> RunConfig {
    let c = &cli.common;
    let command = match cli.command {
        Cmd::Eop => Command::Eop,
        Cmd::Potential => Command::Potential,
        Cmd::Ladder => Command::Ladder,
        Cmd::PhaCheck => Command::PhaCheck,
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Unirreps => Command::Unirreps,
        Cmd::Tables => Command::Tables,
        Cmd::Diagram => Command::Diagram,
    };
    let mut cfg = RunConfig::new(command);
    cfg.m = c.m;
    cfg.system = if c.case == 1 {
        SystemChoice::OscillatorPair { m: c.m }
    } else {
        let m1 = c.m1.unwrap_or(c.m);
        SystemChoice::ExtendedPair {
            m1,
            m2: c.m2.unwrap_or(m1),
        }
    };
    cfg.nu_max = c.nu_max;
    cfg.n_max = c.n_max;
    cfg.p_max = c.p_max;
    cfg.format = match c.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Svg => Format::Svg,
    };
    cfg.out_path = c.out.clone();
    cfg.cross_check = c.cross_check;
    cfg.execution = if c.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    cfg
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads_from_env();
    let cfg = config(&cli);

    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e @ Error::Domain(_)) => {
            eprintln!("eop-lab: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("eop-lab: {e}");
            return ExitCode::from(1);
        }
    };

    let written = match &cfg.out_path {
        Some(path) => std::fs::write(path, &outcome.artifact),
        None => std::io::stdout().lock().write_all(&outcome.artifact),
    };
    if let Err(e) = written {
        eprintln!("eop-lab: cannot write output: {e}");
        return ExitCode::from(1);
    }

    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{}", outcome.failure_report(&cfg));
        ExitCode::from(1)
    }
}
