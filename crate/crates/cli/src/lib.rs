//! Command-line front end for `virfusion`.
//!
//! Exit status: 0 on success, 1 when a verification does not reproduce its
//! expected value, 2 on usage errors.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use virfusion::exactlin::{parse_rational, Rational};

pub use config::{Config, Format};
pub use report::Report;

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("expected a rational like 3 or -7/2, got {s:?}"))
}

#[derive(Parser, Debug)]
#[command(name = "virfusion", version, about = "Exact computations for c = 1 Virasoro modules, fusion rules and q-series")]
pub struct Cli {
    /// Output format; overrides the config file.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// `key=value` file with max_level, series_order, format.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Closed,
    Singular,
    Vandermonde,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CharKind {
    Verma,
    Irr,
    Eta,
    Theta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GrowthSeries {
    /// `η · ch V_L`.
    Lattice,
    /// `(1-q)/∏_{n≥2}(1-qⁿ)`.
    Lemma52,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    /// Products `u_1x`, `u_0x` solved from `x_{-1}x = 0`.
    #[value(name = "5.4")]
    Products,
    /// `u`–`x` brackets and the values `(u,u)`, `(x_1y, x_1y)`.
    #[value(name = "5.5")]
    Pairings,
    /// The coefficients `a, b` of `v` and `(y_3v, u)`.
    #[value(name = "5.6")]
    HighestWeight,
    /// `x_i v = 0`.
    #[value(name = "5.7")]
    Annihilation,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gram matrix of the Verma module at one level.
    Gram {
        #[arg(long, value_parser = rational)]
        c: Rational,
        #[arg(long, value_parser = rational)]
        h: Rational,
        /// Defaults to max_level.
        #[arg(long)]
        level: Option<u32>,
    },
    /// Singular vectors at one level.
    Singvec {
        #[arg(long, value_parser = rational)]
        c: Rational,
        #[arg(long, value_parser = rational)]
        h: Rational,
        #[arg(long)]
        level: Option<u32>,
    },
    /// The bimodule generator f_r along one route.
    Bimodule {
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value = "closed")]
        route: Route,
    },
    /// Fusion dimension for L(1,m²) × L(1,n²) → L(1,k²), or with --generic
    /// for L(1,m²) × L(1,n) → L(1,k) with n not a square.
    Fusion {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        generic: bool,
    },
    /// A truncated character or modular-form series.
    Char {
        #[arg(long, value_enum)]
        kind: CharKind,
        #[arg(long, value_parser = rational)]
        h: Option<Rational>,
        /// Central charge of the Verma character.
        #[arg(long, value_parser = rational, default_value = "1")]
        c: Rational,
        /// Power of η.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        power: i64,
        #[arg(long)]
        order: Option<usize>,
    },
    /// The lattice decomposition identity and sl2 tensor rules.
    DecompCheck {
        #[arg(long)]
        order: Option<usize>,
    },
    /// Coefficient growth scan; evidence only.
    Growth {
        #[arg(long, value_enum)]
        series: GrowthSeries,
        #[arg(long, default_value_t = 200)]
        order: usize,
        /// `lo:hi`.
        #[arg(long, default_value = "50:200")]
        window: String,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
    },
    /// Replay the nilpotent-case mode computations.
    VerifySection5 {
        #[arg(long, value_enum, default_value = "all")]
        lemma: Group,
    },
    /// The fusion-rule contradiction for the nilpotent case.
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn usage(msg: String) -> Outcome {
    Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: 2 }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.render_text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: 2 }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: 0 }
            };
        }
    };
    let mut cfg = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(e) => return usage(e.to_string()),
        },
        None => Config::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    match commands::execute(&cli.command, &cfg) {
        Ok(report) => {
            let code = if report.verified() { 0 } else { 1 };
            Outcome { stdout: render(&report, cfg.format), stderr: String::new(), code }
        }
        Err(e) => usage(e),
    }
}
