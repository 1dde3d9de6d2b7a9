//! Command-line front end. Each subcommand parses its inputs, calls the
//! library, and hands a [`Payload`] to [`emit`].

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{Format, RunConfig, CONFIG_ENV};
pub use report::{emit, Payload, ReportEnvelope};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "extremal", version, about = "Extremal sequences, lifted matrix families and JSR bounds")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// Config file of `key = value` lines (default: $EXTREMAL_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Decimal digits of working precision.
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    /// Enumeration depth for JSR bounds.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Product budget for JSR enumeration.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Window cap for complexity profiles.
    #[arg(long, global = true)]
    pub window_cap: Option<usize>,
    /// Default growth length.
    #[arg(long, global = true)]
    pub growth_n: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit the bare payload without command echo, config and timestamp.
    #[arg(long, global = true)]
    pub no_envelope: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// High-precision rotation-number constants.
    Constants {
        #[arg(long, default_value = "alpha-star")]
        which: String,
    },
    /// Matrix family construction.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Generate (and optionally analyze) a prefix of a sequence.
    Word {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 64)]
        length: usize,
        /// Add balance, 1-frequency and a recurrence diagnostic.
        #[arg(long)]
        analyze: bool,
        /// Factor length for the recurrence diagnostic.
        #[arg(long, default_value_t = 8)]
        recur: usize,
    },
    /// Windowed subword complexity profile.
    Complexity {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, default_value_t = 1024)]
        initial: usize,
    },
    /// Joint spectral radius bounds and diagnostics.
    #[command(subcommand)]
    Jsr(JsrCmd),
    /// Norm growth along a sequence.
    Growth(GrowthArgs),
    /// Word correspondence for the block lift.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Run the acceptance suite.
    Verify {
        #[arg(long, default_value = "quick")]
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    Build {
        /// btv, kron, jb, example-p2, toy or file.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        alpha: Option<String>,
        /// Comma-separated parameters for kron.
        #[arg(long)]
        alphas: Option<String>,
        /// Family spec lifted by `--kind jb`.
        #[arg(long)]
        inner: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        from: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct GrowthArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub word_spec: String,
    #[arg(long)]
    pub n: Option<u64>,
    /// Reference rate; defaults to the lower JSR bound at the configured depth.
    #[arg(long)]
    pub rho: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum JsrCmd {
    Bounds {
        #[arg(long)]
        family: String,
    },
    Growth(GrowthArgs),
    /// Compare Kronecker-family bounds with the product of component bounds.
    KronCheck {
        #[arg(long)]
        alphas: String,
    },
    Extremality {
        #[arg(long)]
        family: String,
        #[arg(long)]
        word_spec: String,
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum LiftCmd {
    Encode {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        word_spec: String,
        #[arg(long, default_value_t = 64)]
        length: usize,
    },
    Decode {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        word_spec: String,
        #[arg(long, default_value_t = 16)]
        length: usize,
        /// Shift applied before decoding: an integer, or `auto` for the
        /// smallest surviving phase.
        #[arg(long, default_value = "0")]
        shift: String,
        /// Probe length used by `--shift auto`.
        #[arg(long, default_value_t = 256)]
        probe: usize,
    },
    /// Smallest shift keeping the middle block alive.
    Phase {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        word_spec: String,
        #[arg(long, default_value_t = 256)]
        probe: usize,
    },
    Verify {
        #[arg(long)]
        family: String,
        #[arg(long)]
        word: String,
        /// feqt, encode-product or support.
        #[arg(long)]
        check: String,
        /// Start block for `support` (default m - 1).
        #[arg(long)]
        block: Option<usize>,
    },
}

fn resolve_config(g: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut c = RunConfig::default();
    let path = g.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    if let Some(p) = path {
        c.merge_file(&p)?;
    }
    let pos = |name: &str, v: u64| {
        if v == 0 {
            Err(CliError::Usage(format!("--{name} must be positive")))
        } else {
            Ok(())
        }
    };
    if let Some(v) = g.digits {
        pos("digits", v as u64)?;
        c.digits = v;
    }
    if let Some(v) = g.depth {
        pos("depth", v as u64)?;
        c.depth = v;
    }
    if let Some(v) = g.budget {
        pos("budget", v)?;
        c.budget = v;
    }
    if let Some(v) = g.window_cap {
        pos("window-cap", v as u64)?;
        c.window_cap = v;
    }
    if let Some(v) = g.growth_n {
        pos("growth-n", v)?;
        c.growth_n = v;
    }
    if g.format.is_some() {
        c.format = g.format;
    }
    if g.out.is_some() {
        c.out = g.out.clone();
    }
    Ok(c)
}

/// Parses `args` (program name first), runs the command, writes the report,
/// and returns the exit code: 0 success, 1 computational failure or failed
/// check, 2 usage error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let result = resolve_config(&cli.global).and_then(|cfg| {
        let payload = commands::dispatch(&cli.command, &cfg)?;
        let bytes = emit(&payload, cfg.format, cli.global.no_envelope, &echo, &cfg)?;
        match &cfg.out {
            Some(p) => std::fs::write(p, &bytes).map_err(|e| CliError::Compute(format!("{}: {e}", p.display())))?,
            None => stdout.write_all(bytes.as_bytes()).map_err(|e| CliError::Compute(e.to_string()))?,
        }
        Ok(payload.ok)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
