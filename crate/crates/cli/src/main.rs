//! `hilbloc`: runs computer-algebra session files for localized Hilbert
//! schemes of points.
//!
//! Exit codes: 0 success, 1 a verified identity failed, 2 usage or parse
//! error, 3 a resource bound was exceeded.

mod report;
mod run;
mod session;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hilbloc::{Bounds, Engine, Error, GbCache};

use crate::report::Format;
use crate::run::{error_kind, run_session, RunOptions};
use crate::session::parse_session;

#[derive(Parser, Debug)]
#[command(
    name = "hilbloc",
    version,
    about = "Exact algebra for localized Hilbert schemes of points"
)]
struct Cli {
    /// Directory for persisted Gröbner bases (content-addressed, safe to delete).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Disable the Gröbner-basis cache entirely.
    #[arg(long, global = true, conflicts_with = "cache_dir")]
    no_cache: bool,
    /// Maximum total degree of S-polynomials before giving up.
    #[arg(long, global = true, value_name = "DEGREE")]
    bound: Option<u32>,
    /// Seed for randomized checks (`selfcheck`).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Top,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Human,
    Kv,
}

#[derive(Subcommand, Debug)]
enum Top {
    /// Run a session file (`-` reads standard input).
    Run { file: PathBuf },
    /// Run session text given on the command line.
    Exec { text: String },
    /// Any single session command, e.g. `hilbloc --ring F3[x] hilb verify --theorem 5.5 --n 2 --invert x`.
    #[command(external_subcommand)]
    Command(Vec<String>),
}

fn main() -> ExitCode {
    let mut args: Vec<String> = std::env::args().collect();
    // `--ring R` before an inline command becomes the session's ring header
    let ring = take_ring_flag(&mut args);
    let cli = Cli::parse_from(args);
    ExitCode::from(execute(cli, ring))
}

fn take_ring_flag(args: &mut Vec<String>) -> Option<String> {
    let i = args
        .iter()
        .position(|a| a == "--ring" || a.starts_with("--ring="))?;
    let a = args.remove(i);
    match a.strip_prefix("--ring=") {
        Some(v) => Some(v.to_string()),
        None if i < args.len() => Some(args.remove(i)),
        None => None,
    }
}

fn execute(cli: Cli, ring: Option<String>) -> u8 {
    let (text, base_dir) = match &cli.command {
        Top::Run { file } if file.as_os_str() == "-" => {
            let mut text = String::new();
            if let Err(e) = std::io::Read::read_to_string(&mut std::io::stdin(), &mut text) {
                eprintln!("error: cannot read standard input: {e}");
                return 2;
            }
            (text, PathBuf::from("."))
        }
        Top::Run { file } => match std::fs::read_to_string(file) {
            Ok(t) => (t, file.parent().map(Path::to_path_buf).unwrap_or_default()),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", file.display());
                return 2;
            }
        },
        Top::Exec { text } => (text.clone(), PathBuf::from(".")),
        Top::Command(words) => {
            let header = ring
                .as_ref()
                .map(|r| format!("ring {r};\n"))
                .unwrap_or_default();
            (format!("{header}{};", words.join(" ")), PathBuf::from("."))
        }
    };
    let session = match parse_session(&text, &base_dir) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };

    let mut bounds = Bounds::default();
    if let Some(d) = cli.bound {
        bounds.max_degree = d;
    }
    let (cache, cache_mode) = match (&cli.cache_dir, cli.no_cache) {
        (_, true) => (None, "off"),
        (Some(dir), false) => (Some(GbCache::with_dir(dir)), "dir"),
        (None, false) => (Some(GbCache::in_memory()), "memory"),
    };
    let eng = Engine::new(bounds, cache);
    let outcome = run_session(
        &session,
        &eng,
        &RunOptions {
            seed: cli.seed,
            cache_mode,
        },
    );

    let format = match cli.format {
        OutputFormat::Human => Format::Human,
        OutputFormat::Kv => Format::Kv,
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.report.render(format).as_bytes());
    let _ = stdout.flush();
    match outcome.failure {
        None => 0,
        Some((index, e)) => {
            eprintln!("error in command {index}: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match error_kind(e) {
        "verification" => 1,
        "bound" => 3,
        _ => 2,
    }
}
