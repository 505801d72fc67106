//! The `flagstab` command line: parse documents and descriptor DSL, run one
//! verb, and write a deterministic report.
//!
//! Exit codes: 0 every check passed, 1 a check failed (the report carries
//! witnesses), 2 bad input or a violated precondition, 3 an internal
//! invariant breach. Failures print `{"error": code, "message": ...}` on
//! stderr.

pub mod commands;
pub mod dsl;
pub mod input;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use flagstab::{Error, Result};
use serde_json::json;

use commands::*;
use input::Inputs;
use report::{Builder, Report};

#[derive(Parser, Debug)]
#[command(name = "flagstab", version, about = "Exact generalized-flag calculus", disable_help_subcommand = true)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Write run metadata (timing, threads) here; it never enters the report.
    #[arg(long, global = true)]
    pub meta: Option<PathBuf>,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Canonical basis of the span of some vectors.
    Span(SpanArgs),
    /// Perpendicular of a subspace under a pairing.
    Perp(PerpArgs),
    /// Closure (perp of the perp) and isotropy classification.
    Closure(PerpArgs),
    /// Flag properties, or fl(C) of a chain.
    Flag(FlagArgs),
    /// Stabilizer of a flag, by brute force, by formula, or both.
    Stab(StabArgs),
    /// Borel checks for a flag's stabilizer, or the flag of a Borel subalgebra.
    Borel(BorelArgs),
    /// Toral and nilpotent parts of a flag's stabilizer.
    Toral(ToralArgs),
    /// The twin of a maximal closed isotropic flag.
    Twin(TwinArgs),
    /// Certified perp and closure of a described subspace, level by level.
    LimitsVerify(VerifyArgs),
    /// Run the registered checks of a builtin scenario.
    Example(ExampleArgs),
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::Span(_) => "span",
            Verb::Perp(_) => "perp",
            Verb::Closure(_) => "closure",
            Verb::Flag(_) => "flag",
            Verb::Stab(_) => "stab",
            Verb::Borel(_) => "borel",
            Verb::Toral(_) => "toral",
            Verb::Twin(_) => "twin",
            Verb::LimitsVerify(_) => "limits-verify",
            Verb::Example(_) => "example",
        }
    }
}

pub fn execute(verb: &Verb) -> Result<Report> {
    let mut inp = Inputs::new(verb.name());
    let mut b = Builder::new();
    match verb {
        Verb::Span(a) => span(a, &mut inp, &mut b),
        Verb::Perp(a) => perp(a, &mut inp, &mut b),
        Verb::Closure(a) => closure(a, &mut inp, &mut b),
        Verb::Flag(a) => flag(a, &mut inp, &mut b),
        Verb::Stab(a) => stab(a, &mut inp, &mut b),
        Verb::Borel(a) => borel(a, &mut inp, &mut b),
        Verb::Toral(a) => toral(a, &mut inp, &mut b),
        Verb::Twin(a) => twin(a, &mut inp, &mut b),
        Verb::LimitsVerify(a) => limits_verify(a, &mut inp, &mut b),
        Verb::Example(a) => example(a, &mut inp, &mut b),
    }?;
    Ok(b.finish(verb.name(), inp.digest()))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => 3,
        _ => 2,
    }
}

fn report_error(err: &mut dyn Write, code: &str, message: String) {
    let _ = writeln!(err, "{}", json!({"error": code, "message": message}));
}

/// `FLAGSTAB_THREADS`, or 0 for the rayon default.
fn thread_cap() -> Result<usize> {
    match std::env::var("FLAGSTAB_THREADS") {
        Err(_) => Ok(0),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Input(format!("FLAGSTAB_THREADS must be a positive integer, found '{s}'"))),
        },
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.exit_code() == 0 => {
            let _ = write!(out, "{}", e.render());
            return 0;
        }
        Err(e) => {
            report_error(err, "usage_error", e.render().to_string().trim_end().to_string());
            return 2;
        }
    };
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis());
    let clock = Instant::now();
    let result = thread_cap().and_then(|threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
        let report = pool.install(|| execute(&cli.verb))?;
        Ok((report, pool.current_num_threads()))
    });
    let (code, threads) = match result {
        Ok((report, threads)) => {
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Markdown => report.to_markdown(),
            };
            let written = match &cli.output {
                Some(p) => fs::write(p, text).map_err(|e| format!("--output {}: {e}", p.display())),
                None => out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => (if report.passed() { 0 } else { 1 }, threads),
                Err(m) => {
                    report_error(err, "io_error", m);
                    (2, threads)
                }
            }
        }
        Err(e) => {
            report_error(err, e.code(), e.to_string());
            (exit_code(&e), 0)
        }
    };
    if let Some(p) = &cli.meta {
        let meta = json!({
            "tool": "flagstab",
            "version": env!("CARGO_PKG_VERSION"),
            "verb": cli.verb.name(),
            "started_unix_ms": started as u64,
            "elapsed_ms": clock.elapsed().as_millis() as u64,
            "threads": threads,
            "exit_code": code,
        });
        if let Err(e) = fs::write(p, format!("{meta:#}\n")) {
            report_error(err, "io_error", format!("--meta {}: {e}", p.display()));
        }
    }
    let _ = err.flush();
    code
}
