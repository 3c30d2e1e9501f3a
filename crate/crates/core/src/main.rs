use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use obf_core::cli::commands::{self as cmd, Output, Variant, EXIT_MALFORMED};
use obf_core::cli::generate::GrowConfig;
use obf_core::reduce::Mode;
use obf_core::Rational;

#[derive(Parser)]
#[command(
    name = "obf",
    version,
    about = "Open book foliations: validate, move, reduce and stabilize"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a foliation document; exit 2 lists the violations
    Validate { path: PathBuf },
    /// Valence counts, Euler data and the sphere identities
    Census { path: PathBuf },
    /// Compile a movie document to a foliation
    Compile { path: PathBuf },
    /// Apply one move given as JSON, e.g. '{"move":"exchange","v":3}'
    Apply {
        #[arg(long = "move")]
        mv: String,
        path: PathBuf,
        /// Trace document to append to (created if missing)
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Reduce a sphere by foliation changes and exchange moves
    Reduce {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "split")]
        mode: ModeArg,
        /// Coefficient for a binding, as LABEL=VALUE (repeatable)
        #[arg(long = "fdtc", value_parser = parse_fdtc)]
        fdtc: Vec<(String, Rational)>,
        /// Write the replayable trace here as well
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Stabilize along the arc of a spec document
    Stabilize {
        #[arg(long)]
        spec: PathBuf,
        path: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        variant: VariantArg,
    },
    /// Grow a random decomposing sphere from the split sphere
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        tiles: usize,
        #[arg(long, default_value_t = 2)]
        changes: usize,
        #[arg(long, default_value_t = 0)]
        punctures: u32,
    },
    /// Replay a trace and compare final hashes
    Audit { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Split,
    Composite,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Prime,
    Doubleprime,
    Both,
    Relate,
}

fn parse_fdtc(s: &str) -> Result<(String, Rational), String> {
    let (label, value) = s.split_once('=').ok_or("expected LABEL=VALUE")?;
    let c = value.parse::<Rational>().map_err(|e| e.to_string())?;
    Ok((label.to_string(), c))
}

fn read(path: &Path) -> Result<String, Output> {
    fs::read_to_string(path).map_err(|e| Output {
        code: EXIT_MALFORMED,
        stderr: format!("error: {}: {e}\n", path.display()),
        ..Default::default()
    })
}

fn dispatch(command: Command) -> Result<(Output, Option<PathBuf>), Output> {
    Ok(match command {
        Command::Validate { path } => (cmd::validate_cmd(&read(&path)?), None),
        Command::Census { path } => (cmd::census_cmd(&read(&path)?), None),
        Command::Compile { path } => (cmd::compile_cmd(&read(&path)?), None),
        Command::Apply { mv, path, trace } => {
            let existing = match &trace {
                Some(t) if t.exists() => Some(read(t)?),
                _ => None,
            };
            (
                cmd::apply_cmd(&read(&path)?, &mv, existing.as_deref()),
                trace,
            )
        }
        Command::Reduce {
            path,
            mode,
            fdtc,
            trace,
        } => {
            let mode = match mode {
                ModeArg::Split => Mode::Split,
                ModeArg::Composite => Mode::Composite,
            };
            (cmd::reduce_cmd(&read(&path)?, mode, &fdtc), trace)
        }
        Command::Stabilize {
            spec,
            path,
            variant,
        } => {
            let variant = match variant {
                VariantArg::Prime => Variant::Prime,
                VariantArg::Doubleprime => Variant::Doubleprime,
                VariantArg::Both => Variant::Both,
                VariantArg::Relate => Variant::Relate,
            };
            (
                cmd::stabilize_cmd(&read(&path)?, &read(&spec)?, variant),
                None,
            )
        }
        Command::Generate {
            seed,
            tiles,
            changes,
            punctures,
        } => {
            let cfg = GrowConfig {
                tiles,
                changes_per_step: changes,
                punctures,
                ..Default::default()
            };
            (cmd::generate_cmd(seed, &cfg), None)
        }
        Command::Audit { path } => (cmd::audit_cmd(&read(&path)?), None),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match dispatch(cli.command) {
        Ok((mut out, Some(path))) => {
            if let Some(trace) = out.trace.take() {
                if let Err(e) = fs::write(&path, trace) {
                    out.code = EXIT_MALFORMED;
                    out.stderr
                        .push_str(&format!("error: {}: {e}\n", path.display()));
                }
            }
            out
        }
        Ok((out, None)) => out,
        Err(out) => out,
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
