mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use arcnash::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "arcnash", version, about = "Toric Nash-problem and germ-lifting computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Singular faces, minimal elements of S and the essential-divisor count.
    Analyze { cone: PathBuf },
    /// Resolve the cone, optionally avoiding a ray or via continued fractions.
    Resolve(ResolveArgs),
    /// Valuation and orbit of an arc through the torus.
    Arc(ArcArgs),
    /// Lift a curve on a hypersurface to a surface germ through a line.
    Germ(GermArgs),
    /// Equations of the jet scheme.
    Jets {
        #[arg(long)]
        equation: String,
        #[arg(long)]
        order: u32,
    },
    /// Strict transform in one chart of the blowup at the origin.
    Blowup {
        #[arg(long)]
        equation: String,
        /// 1-based coordinate index.
        #[arg(long)]
        chart: usize,
    },
}

#[derive(Args)]
pub struct ResolveArgs {
    cone: PathBuf,
    /// Comma-separated lattice vector whose ray must not appear.
    #[arg(long, conflicts_with = "two_dim_minimal", allow_hyphen_values = true)]
    avoid: Option<String>,
    /// Minimal resolution of a rank-2 cone.
    #[arg(long = "2d-minimal")]
    two_dim_minimal: bool,
}

#[derive(Args)]
pub struct ArcArgs {
    cone: PathBuf,
    /// Components separated by `;`, e.g. `t+t^2;t^2;t^3`.
    #[arg(long, conflicts_with = "monomial", required_unless_present = "monomial", allow_hyphen_values = true)]
    series: Option<String>,
    /// Terms at or above this power of t are unknown.
    #[arg(long, default_value_t = 16)]
    truncation: i64,
    /// Comma-separated exponent vector of a monomial arc.
    #[arg(long, allow_hyphen_values = true)]
    monomial: Option<String>,
    /// Also lift the arc to the resolution of the cone.
    #[arg(long)]
    fan: bool,
}

#[derive(Args)]
pub struct GermArgs {
    #[arg(long)]
    equation: String,
    /// Comma-separated linear forms in s, t.
    #[arg(long, allow_hyphen_values = true)]
    line: String,
    #[arg(long)]
    order: u32,
    /// Extra curve terms per coordinate, separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    curve_tail: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { cone } => commands::analyze(cone),
        Command::Resolve(args) => commands::resolve(args),
        Command::Arc(args) => commands::arc(args),
        Command::Germ(args) => commands::germ(args),
        Command::Jets { equation, order } => commands::jets(equation, *order),
        Command::Blowup { equation, chart } => commands::blowup(equation, *chart),
    };
    let text = match result {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}

/// Errors surfaced by a command.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(arcnash::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Refusal => 3,
                ErrorKind::Internal => 4,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Core(arcnash::Error::EssentialRay(v)) => write!(
                f,
                "essential divisor cannot be avoided: {v} is minimal in S, and the Nash map is bijective"
            ),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<arcnash::Error> for CliError {
    fn from(e: arcnash::Error) -> Self {
        CliError::Core(e)
    }
}
