//! `dmct`: exact-arithmetic calculator and verification harness for the
//! cuspidal-divisor and harmonic-cochain calculus on degree-one levels
//! of the function-field modular tower.
//!
//! Every subcommand prints one canonical report to stdout (JSON by
//! default; CSV and plain text on request) and transient notes (timing,
//! cache status) to stderr. Exit codes: 0 when every record passes,
//! 1 when some check fails, 2 on invalid input.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dmct_core::fq::FqConfig;
use dmct_core::level::{make_level, Level};
use dmct_core::poly::Poly;
use dmct_core::{Error, Result};

use dmct_cli::cache;
use dmct_cli::commands;
use dmct_cli::report::{render, Format, Record, Report};

#[derive(Parser)]
#[command(
    name = "dmct",
    version,
    about = "Cuspidal divisor class groups and harmonic cochains over F_q(T), in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Base field size q (a prime; pass --modulus for prime powers)
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Modulus for an extension field, e.g. "x^2+x+1" for q=4
    #[arg(long)]
    modulus: Option<String>,
    /// Prime polynomial in F_q[T], e.g. "T" or "T^2+T+1"
    #[arg(long, default_value = "T")]
    p: String,
    /// Level exponent r (the level is the r-th power of p)
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// Largest edge exponent sampled checks may reach (at least 4)
    #[arg(long, default_value_t = 8)]
    depth: i64,
    /// Seed for sampled checks
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output format for the report on stdout
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Bypass the result cache entirely
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cusp counts by height and the full canonical list
    Cusps {
        #[command(flatten)]
        common: Common,
    },
    /// Invariant factors, ell-primary parts, and the torsion prediction
    #[command(name = "class-group")]
    ClassGroup {
        #[command(flatten)]
        common: Common,
        /// Primes ell to inspect (repeatable); default: all ell <= 50
        /// coprime to q(q-1)
        #[arg(long = "ell")]
        ell: Vec<u64>,
    },
    /// Degeneracy-map images of height divisors and the pushforward cokernel
    Degeneracy {
        #[command(flatten)]
        common: Common,
        /// Operation: alpha, beta, up, or beta-cokernel
        #[arg(long)]
        op: String,
        /// Height index of the standard divisor to act on
        #[arg(long, default_value_t = 0)]
        delta: u32,
        /// Explicit divisor as a JSON literal (overrides --delta)
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Evaluate a cochain at one edge
    Eval {
        #[command(flatten)]
        common: Common,
        /// Cochain selector: delta:i=<int>, En, or gC'
        #[arg(long)]
        cochain: String,
        /// Edge literal: k=<int>;y=<laurent>;eps=<0|1>
        #[arg(long)]
        edge: String,
    },
    /// Apply a Hecke operator to a cochain at one edge
    Hecke {
        #[command(flatten)]
        common: Common,
        /// Cochain selector: delta:i=<int>, En, or gC'
        #[arg(long)]
        cochain: String,
        /// Operator: U or T:<poly>
        #[arg(long)]
        op: String,
        /// Edge literal: k=<int>;y=<laurent>;eps=<0|1>
        #[arg(long)]
        edge: String,
    },
    /// The Eisenstein element's constants and defining identities
    Eisenstein {
        #[command(flatten)]
        common: Common,
    },
    /// Run the verification catalog
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite to run (or "all")
        #[arg(long, default_value = "all")]
        suite: String,
        /// Tamper a constant so the run must fail (harness self-test)
        #[arg(long)]
        expect_fail: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let started = Instant::now();
    let outcome = dispatch(&cli.cmd);
    match outcome {
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
        Ok((report, notes)) => {
            let format = common_of(&cli.cmd).format.into();
            print!("{}", render(&report, format));
            let _ = std::io::stdout().flush();
            for note in notes {
                eprintln!("note: {note}");
            }
            eprintln!("note: completed in {} ms", started.elapsed().as_millis());
            if report.all_pass {
                0
            } else {
                1
            }
        }
    }
}

fn common_of(cmd: &Cmd) -> &Common {
    match cmd {
        Cmd::Cusps { common } => common,
        Cmd::ClassGroup { common, .. } => common,
        Cmd::Degeneracy { common, .. } => common,
        Cmd::Eval { common, .. } => common,
        Cmd::Hecke { common, .. } => common,
        Cmd::Eisenstein { common } => common,
        Cmd::Verify { common, .. } => common,
    }
}

fn field_of(common: &Common) -> Result<FqConfig> {
    match &common.modulus {
        Some(m) => FqConfig::parse(&format!("q={};modulus={}", common.q, m)),
        None => FqConfig::prime_field(common.q),
    }
}

fn level_of(common: &Common) -> Result<Level> {
    let fq = field_of(common)?;
    let p = Poly::parse(&fq, &common.p)?;
    make_level(&fq, &p, common.r)
}

fn validate(common: &Common) -> Result<()> {
    if common.depth < 4 {
        return Err(Error::OutOfRange(format!(
            "depth {} is below the minimum of 4",
            common.depth
        )));
    }
    Ok(())
}

/// Base config echo: every determinant of the computation, but not the
/// output format (rendering happens after the cache).
fn base_config(common: &Common) -> BTreeMap<String, String> {
    let mut config = BTreeMap::new();
    config.insert("q".to_string(), common.q.to_string());
    if let Some(m) = &common.modulus {
        config.insert("modulus".to_string(), m.clone());
    }
    config.insert("p".to_string(), common.p.clone());
    config.insert("r".to_string(), common.r.to_string());
    config.insert("depth".to_string(), common.depth.to_string());
    config.insert("seed".to_string(), common.seed.to_string());
    config
}

fn dispatch(cmd: &Cmd) -> Result<(Report, Vec<String>)> {
    let common = common_of(cmd);
    validate(common)?;
    let mut config = base_config(common);

    let (name, compute): (&str, Box<dyn FnOnce() -> Result<Vec<Record>>>) = match cmd {
        Cmd::Cusps { common } => {
            let level = level_of(common)?;
            ("cusps", Box::new(move || commands::cusps(&level)))
        }
        Cmd::ClassGroup { common, ell, .. } => {
            let level = level_of(common)?;
            if !ell.is_empty() {
                let list: Vec<String> = ell.iter().map(|e| e.to_string()).collect();
                config.insert("ell".to_string(), list.join(","));
            }
            let ells = ell.clone();
            (
                "class-group",
                Box::new(move || commands::class_group(&level, &ells)),
            )
        }
        Cmd::Degeneracy {
            common,
            op,
            delta,
            divisor,
        } => {
            let level = level_of(common)?;
            config.insert("op".to_string(), op.clone());
            config.insert("delta".to_string(), delta.to_string());
            if let Some(d) = divisor {
                config.insert("divisor".to_string(), d.clone());
            }
            let (op, delta, divisor) = (op.clone(), *delta, divisor.clone());
            (
                "degeneracy",
                Box::new(move || commands::degeneracy(&level, &op, delta, divisor.as_deref())),
            )
        }
        Cmd::Eval {
            common,
            cochain,
            edge,
        } => {
            let level = level_of(common)?;
            config.insert("cochain".to_string(), cochain.clone());
            config.insert("edge".to_string(), edge.clone());
            let (cochain, edge) = (cochain.clone(), edge.clone());
            (
                "eval",
                Box::new(move || commands::eval(&level, &cochain, &edge)),
            )
        }
        Cmd::Hecke {
            common,
            cochain,
            op,
            edge,
        } => {
            let level = level_of(common)?;
            config.insert("cochain".to_string(), cochain.clone());
            config.insert("op".to_string(), op.clone());
            config.insert("edge".to_string(), edge.clone());
            let (cochain, op, edge) = (cochain.clone(), op.clone(), edge.clone());
            (
                "hecke",
                Box::new(move || commands::hecke(&level, &cochain, &op, &edge)),
            )
        }
        Cmd::Eisenstein { common } => {
            let level = level_of(common)?;
            let depth = common.depth;
            (
                "eisenstein",
                Box::new(move || commands::eisenstein(&level, depth)),
            )
        }
        Cmd::Verify {
            common,
            suite,
            expect_fail,
        } => {
            config.insert("suite".to_string(), suite.clone());
            config.insert("expect-fail".to_string(), expect_fail.to_string());
            let (suite, seed, depth, expect_fail) =
                (suite.clone(), common.seed, common.depth, *expect_fail);
            (
                "verify",
                Box::new(move || commands::verify(&suite, seed, depth, expect_fail)),
            )
        }
    };
    config.insert("command".to_string(), name.to_string());

    let mut notes = Vec::new();
    let version = env!("CARGO_PKG_VERSION");
    let key = cache::cache_key(version, name, &config);
    let dir = cache::cache_dir();

    if !common.no_cache {
        match cache::load(&dir, &key, name, &config) {
            cache::Loaded::Hit(report) => {
                notes.push(format!("result served from cache ({})", dir.display()));
                return Ok((report, notes));
            }
            cache::Loaded::Corrupt(warning) => notes.push(format!("warning: {warning}")),
            cache::Loaded::Miss => {}
        }
    }

    let records = compute()?;
    let report = Report::new(name, config, records);
    if !common.no_cache {
        if let Err(warning) = cache::store(&dir, &key, &report) {
            notes.push(format!("warning: {warning}"));
        }
    }
    Ok((report, notes))
}
