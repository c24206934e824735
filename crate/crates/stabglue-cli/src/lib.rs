//! Command-line front end: argument parsing, file I/O and rendering around the library.

mod commands;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use stabglue::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_IN_REGION: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_UNDECIDABLE: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "stabglue",
    version,
    about = "Glued stability conditions on double covers of curves"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Seed for sampling-based diagnostics.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for floating-point checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize a charge into the glued family, or report why it lies outside.
    Classify {
        #[arg(long)]
        charge: PathBuf,
    },
    /// Build the stability for a charge and an explicit partition such as '0:I0,+:1 2'.
    Build {
        #[arg(long)]
        charge: PathBuf,
        #[arg(long)]
        partition: String,
    },
    /// HN filtration of an object such as '2*Torsion(1,2,zeta)[0]'.
    Hn {
        #[arg(long)]
        object: String,
        #[arg(long)]
        stability: PathBuf,
    },
    /// Local charts and `z` of a stability.
    Theta {
        #[arg(long)]
        stability: PathBuf,
    },
    /// Chamber codes over a grid of the local chart, as CSV.
    Chambers {
        /// Sample the local chart of a ramification point.
        #[arg(long, required = true)]
        local: bool,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Also draw the grid as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Evaluate cells on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Search for a gluing parameter for two finite-length hearts.
    GlueCheck {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Check that a small rotation is glued from the exceptional collection on the double cover.
    ExcP1 {
        #[arg(long)]
        stability: PathBuf,
        /// Rotation parameter in (0, 1), e.g. 1/100.
        #[arg(long)]
        a: String,
    },
    /// Sampled check of the support-property comparison against random charges.
    NumLem {
        #[arg(long)]
        charge: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Evaluate the uniformizing function of the local chart at a point.
    Uniformize {
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, allow_hyphen_values = true)]
        im: f64,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Domain(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Domain(Error::NotInRegion(_)) => EXIT_NOT_IN_REGION,
            Self::Domain(Error::Undecidable(_) | Error::StraddlesWall(_)) => EXIT_UNDECIDABLE,
            Self::Domain(Error::Parse(_)) | Self::Usage(_) | Self::Io(_) => EXIT_USAGE,
            Self::Domain(_) => EXIT_PRECONDITION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Domain(e) => write!(f, "{e}"),
            Self::Usage(m) | Self::Io(m) => f.write_str(m),
        }
    }
}

/// Runs one invocation, writing results to `stdout` and diagnostics to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let outcome = commands::dispatch(&cli);
    if let Some(text) = &outcome.output {
        let written = match &cli.global.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
        };
        if let Err(msg) = written {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    }
    match outcome.error {
        Some(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
        None => EXIT_OK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_kind() {
        let code = |e: Error| CliError::from(e).exit_code();
        assert_eq!(code(Error::NotInRegion(String::new())), EXIT_NOT_IN_REGION);
        assert_eq!(code(Error::PreconditionGenus), EXIT_PRECONDITION);
        assert_eq!(
            code(Error::Hypothesis {
                condition: 1,
                detail: String::new()
            }),
            EXIT_PRECONDITION
        );
        assert_eq!(code(Error::Undecidable(String::new())), EXIT_UNDECIDABLE);
        assert_eq!(code(Error::StraddlesWall(String::new())), EXIT_UNDECIDABLE);
        assert_eq!(code(Error::Parse(String::new())), EXIT_USAGE);
        assert_eq!(CliError::Usage(String::new()).exit_code(), EXIT_USAGE);
    }

    #[test]
    fn global_flags_follow_subcommands() {
        let cli = Cli::try_parse_from([
            "stabglue",
            "uniformize",
            "--re",
            "-1",
            "--im",
            "0",
            "--tol",
            "1e-6",
            "--seed",
            "9",
        ])
        .unwrap();
        assert_eq!(cli.global.seed, 9);
        assert_eq!(cli.global.tol, 1e-6);
        assert!(matches!(cli.command, Command::Uniformize { re, .. } if re == -1.0));
    }
}
