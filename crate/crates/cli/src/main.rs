mod commands;
mod paper;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use freecurve::constructions::DEFAULT_SEARCH_BUDGET;
use freecurve::hypersurface::DEFAULT_LINES_EXT_CAP;
use freecurve::{Error, ErrorKind};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "freecurve", version, about = "Very free rational curves on cubic hypersurfaces")]
struct Cli {
    #[command(flatten)]
    out: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Print the JSON report instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Replay every explicit computation over characteristics 0, 7, 5, 3 and 2.
    VerifyPaper,
    /// Splitting type of h*T_X for a curve h on a cubic hypersurface.
    Splitting {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        surface: String,
        /// Binary forms in U, V separated by semicolons.
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        /// Expected splitting, e.g. "2,1".
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<String>,
    },
    /// Smoothness of a cubic hypersurface.
    Smooth {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Projective dimension; inferred from the variables when absent.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// The 27 lines of a smooth cubic surface.
    Lines {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        surface: String,
        #[arg(long, default_value_t = DEFAULT_LINES_EXT_CAP)]
        ext_cap: u32,
    },
    /// Eckardt points and two-line points of a smooth cubic surface.
    Eckardt {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        surface: String,
        #[arg(long, default_value_t = DEFAULT_LINES_EXT_CAP)]
        ext_cap: u32,
    },
    /// Search for a nodal tangent section and its very free normalization.
    Construct {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        surface: String,
        /// Tangent sections classified before giving up.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: usize,
    },
    /// Inductive construction of a very free curve on a cubic in Pⁿ.
    Build {
        #[arg(long)]
        field: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Shuffles the hyperplane order.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 500)]
        hyperplane_budget: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        search_budget: usize,
    },
    /// Tangent-section census of the Fermat surface over F_{2^k}.
    Fermat2 {
        #[arg(long)]
        ext: u32,
    },
    /// A point on exactly two of the 15 lines through six plane points.
    Sixpoints {
        #[arg(long)]
        field: String,
        /// Six points "x:y:z" separated by semicolons.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Input => 2,
        ErrorKind::Verification => 1,
        ErrorKind::Budget => 3,
    }
}

fn error_report(command: &str, e: &Error) -> Report {
    let mut r = Report::new(command, None);
    let kind = match e.kind() {
        ErrorKind::Input => "input",
        ErrorKind::Verification => "verification",
        ErrorKind::Budget => "budget",
    };
    r.result = serde_json::json!({ "error": { "kind": kind, "message": e.to_string() } });
    r
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = commands::name(&cli.command);
    let (report, code) = match commands::run(&cli.command) {
        Ok(r) => {
            let code = if r.passed() { 0 } else { 1 };
            (r, code)
        }
        Err(e) => {
            eprintln!("freecurve {name}: {e}");
            (error_report(name, &e), exit_code(e.kind()))
        }
    };
    if let Err(e) = report.emit(cli.out.json, cli.out.out.as_deref()) {
        eprintln!("freecurve: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
