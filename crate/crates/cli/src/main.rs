mod commands;
mod config;
mod ns;
mod outcome;

use clap::{Args, Parser, Subcommand};
use config::{FileConfig, Settings};
use ec2part::scan::SignRule;
use outcome::Outcome;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact central L-values of elliptic curves and their quadratic twists,
/// 2-adic checks over twist families, and 2-isogeny descents for
/// Neumann-Setzer curves.
///
/// Exit status: 0 when every checked conclusion holds, 2 when some instance
/// was skipped because a hypothesis failed, 3 when a conclusion failed, 1 on
/// any other error.
#[derive(Parser, Debug)]
#[command(name = "ec2part", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Emit JSON (one record per line for streams).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV where the command supports it.
    #[arg(long, global = true)]
    csv: bool,
    /// Directory for cached modular-symbol data.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Number of L-series terms for numerical checks.
    #[arg(long, global = true, value_name = "N")]
    terms: Option<u64>,
    /// Relative tolerance for numerical checks; enables them where optional.
    #[arg(long, global = true, value_name = "TOL")]
    tol: Option<f64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// TOML file with cache-dir, tol, terms and threads keys.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Model, invariants, torsion, 2-division data and L-value of a curve.
    Info {
        /// Corpus label (e.g. 11a1, 37B) or five coefficients "a1,a2,a3,a4,a6".
        curve: String,
        /// Also list (n, a_n) for n <= N.
        #[arg(long, value_name = "N")]
        an: Option<u64>,
    },
    /// Exact algebraic L-value of a curve or of its twists.
    Lalg {
        curve: String,
        /// Twist parameters (square-free, 1 mod 4).
        #[arg(long = "twist", short = 'm', value_name = "M", allow_hyphen_values = true)]
        twists: Vec<i64>,
        /// Include the modular-symbol sums S', S'' and S.
        #[arg(long)]
        sums: bool,
    },
    /// Odd primes of good reduction satisfying a filter.
    Primes {
        curve: String,
        /// Comma-separated predicates: inert-f, RmodN, inert:D, split:D.
        filter: String,
        bound: u64,
    },
    /// Evaluate a twist family and check the non-vanishing statements.
    Scan(ScanArgs),
    /// Neumann-Setzer curves: descent, bsd, conjecture, aq, denominator,
    /// or --grid. Arguments are key=value, e.g. `ns u=-3 bsd q=7`.
    Ns {
        /// CSV over ranges, e.g. `ns --grid u=-3..13 M=-300..300`.
        #[arg(long)]
        grid: bool,
        #[arg(allow_hyphen_values = true, num_args = 1..)]
        args: Vec<String>,
    },
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    curve: String,
    /// Theorems to check (T1, T1-1, T2, T2-1, T3, T3-1); all when omitted.
    #[arg(long = "theorem", short = 't', value_delimiter = ',')]
    theorems: Vec<String>,
    /// Prime filter, as for `primes`.
    #[arg(long, default_value = "")]
    filter: String,
    /// Largest prime used in the family.
    #[arg(long)]
    bound: u64,
    #[arg(long, default_value_t = 1)]
    min_r: usize,
    #[arg(long, default_value_t = 2)]
    max_r: usize,
    /// auto, positive or negative.
    #[arg(long, default_value = "auto")]
    sign: String,
    /// Upper bound on |M|.
    #[arg(long)]
    max_m: Option<u64>,
    /// Include the modular-symbol sums.
    #[arg(long)]
    sums: bool,
}

impl ScanArgs {
    fn sign_rule(&self) -> Result<SignRule, ec2part::Error> {
        match self.sign.as_str() {
            "auto" => Ok(SignRule::Auto),
            "positive" => Ok(SignRule::Positive),
            "negative" => Ok(SignRule::Negative),
            s => Err(ec2part::Error::InvalidInput(format!("unknown sign rule `{s}`"))),
        }
    }
}

pub struct Ctx {
    pub format: Format,
    pub settings: Settings,
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome, ec2part::Error> {
    let g = &cli.global;
    let file = match &g.config {
        Some(p) => FileConfig::load(p).map_err(ec2part::Error::InvalidInput)?,
        None => FileConfig::default(),
    };
    let flags = FileConfig { cache_dir: g.cache_dir.clone(), tol: g.tol, terms: g.terms, threads: g.threads };
    let settings = Settings::merge(file, flags);
    if let Some(n) = settings.threads {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let format = if g.json {
        Format::Json
    } else if g.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let ctx = Ctx { format, settings };
    match cli.command {
        Command::Info { curve, an } => commands::info(&ctx, &curve, an, out),
        Command::Lalg { curve, twists, sums } => commands::lalg(&ctx, &curve, &twists, sums, out),
        Command::Primes { curve, filter, bound } => commands::primes(&ctx, &curve, &filter, bound, out),
        Command::Scan(args) => commands::scan(&ctx, &args, out),
        Command::Ns { grid, args } => ns::run(&ctx, grid, &args, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(outcome) => {
            let _ = out.flush();
            outcome.code()
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            Outcome::of_error(&e).code()
        }
    }
}
