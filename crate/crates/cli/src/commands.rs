//! Subcommand implementations. Each returns the text to print and an exit code.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commfib_core::{
    analyze, builtin, compare, make_field, Error, FullLieAlgebra, LiePresentation, BUILTINS, DEFAULT_BUDGET,
    DEFAULT_PAIR_BUDGET,
};

use crate::format::{parse_algebra_file, ParseError};
use crate::report::{bound_line, ReportDocument, GENERATOR};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable holding the default enumeration budget.
pub const BUDGET_ENV: &str = "COMMFIB_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "commfib", version, about = "Fibre sizes of commutator word maps on p-groups of exponent p")]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Theorem-side report: rank profile, KV classes, zeta values, fibres, bound.
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Word lengths, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        t: Vec<u32>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        /// Cap on y-enumeration work (default from COMMFIB_BUDGET, else 10^8).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Compare every fibre against brute force in the group; exit 1 on any mismatch.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        t_max: u32,
        /// Cap on pair evaluations (default from COMMFIB_BUDGET, else 10^9).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Exact L1 distance to uniform on G' against its bound; exit 1 if the bound fails.
    Bound {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// List builtin algebras.
    Examples,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Algebra file.
    #[arg(conflicts_with = "builtin", required_unless_present = "builtin")]
    pub file: Option<PathBuf>,
    /// Builtin algebra (see `examples`).
    #[arg(long)]
    pub builtin: Option<String>,
    /// Run over F_{p^k} instead: `p,k`.
    #[arg(long, value_name = "P,K")]
    pub q_override: Option<String>,
    /// Parameter of elliptic9.
    #[arg(long, default_value_t = 1)]
    pub alpha: i64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug)]
pub enum CliError {
    Parse(String, ParseError),
    Io(String),
    Input(String),
    Core(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(path, e) => write!(f, "{path}: {e}"),
            CliError::Io(m) | CliError::Input(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(Error::NonIntegral(_) | Error::NegativeCount(_)) => EXIT_MISMATCH,
            _ => EXIT_INPUT,
        }
    }
}

pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn default_field(name: &str) -> (u64, u32) {
    if name == "elliptic9" {
        (5, 1)
    } else {
        (3, 1)
    }
}

fn parse_override(s: &str) -> Result<(u64, u32), CliError> {
    let bad = || CliError::Input(format!("--q-override expects `p,k`, got `{s}`"));
    let (p, k) = s.split_once(',').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?))
}

/// Loads the algebra named by `source`, applying `--q-override`.
pub fn load(source: &Source) -> Result<FullLieAlgebra, CliError> {
    let over = source.q_override.as_deref().map(parse_override).transpose()?;
    let alg = match (&source.builtin, &source.file) {
        (Some(name), _) => {
            let (p, _) = over.unwrap_or_else(|| default_field(name));
            let base = make_field(p, 1, None)?;
            builtin(name, &base, Some(source.alpha))?
        }
        (None, Some(path)) => {
            let shown = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{shown}: {e}")))?;
            parse_algebra_file(&text).map_err(|e| CliError::Parse(shown, e))?
        }
        (None, None) => return Err(CliError::Input("give an algebra file or --builtin".into())),
    };
    match over {
        Some((p, k)) => {
            if p != alg.field().p() as u64 {
                return Err(CliError::Input(format!(
                    "--q-override p={p} differs from the file's characteristic {}",
                    alg.field().p()
                )));
            }
            let target = if k == alg.field().k() { alg.field().clone() } else { make_field(p, k, None)? };
            Ok(alg.base_extend(&target)?)
        }
        None => Ok(alg),
    }
}

/// Explicit flag, then the environment variable, then `fallback`.
pub fn resolve_budget(flag: Option<u64>, fallback: u64) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Input(format!("{BUDGET_ENV}={v} is not an integer"))),
        Err(_) => Ok(fallback),
    }
}

fn presentation(alg: &FullLieAlgebra) -> Result<LiePresentation, CliError> {
    alg.validate()?;
    Ok(alg.reduce()?)
}

fn render(doc: &ReportDocument, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => doc.to_table(),
        OutputFormat::Json => doc.to_json(),
    }
}

pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Analyze { source, t, format, budget } => {
            let alg = load(source)?;
            let pres = presentation(&alg)?;
            let mut ts = t.clone();
            ts.sort_unstable();
            ts.dedup();
            let rep = analyze(&pres, &ts, resolve_budget(*budget, DEFAULT_BUDGET)?)?;
            let doc = ReportDocument::build(&alg, &pres, &rep, None);
            Ok(Outcome { stdout: render(&doc, *format), code: EXIT_OK })
        }
        Command::Verify { source, t_max, budget, format } => {
            let alg = load(source)?;
            let pres = presentation(&alg)?;
            if *t_max == 0 {
                return Err(CliError::Input("--t-max must be positive".into()));
            }
            let cmp = compare(&alg, *t_max, resolve_budget(*budget, DEFAULT_PAIR_BUDGET)?)?;
            let doc = ReportDocument::build(&alg, &pres, &cmp.theorem, Some(&cmp));
            let code = if cmp.is_clean() { EXIT_OK } else { EXIT_MISMATCH };
            Ok(Outcome { stdout: render(&doc, *format), code })
        }
        Command::Bound { source, t, budget } => {
            let alg = load(source)?;
            let pres = presentation(&alg)?;
            let rep = analyze(&pres, &[*t], resolve_budget(*budget, DEFAULT_BUDGET)?)?;
            let doc = ReportDocument::build(&alg, &pres, &rep, None);
            let fb = &doc.fibres[0];
            let stdout = format!(
                "{GENERATOR}\nt = {} (zeta at s = {})\n{}\n",
                fb.t,
                fb.s,
                bound_line(&fb.bound_squared, &fb.l1_distance, fb.bound_holds).trim_start()
            );
            Ok(Outcome { stdout, code: if fb.bound_holds { EXIT_OK } else { EXIT_MISMATCH } })
        }
        Command::Examples => {
            let mut stdout = format!("{GENERATOR}\n");
            for (name, desc) in BUILTINS {
                let (p, k) = default_field(name);
                let extra = if *name == "elliptic9" { " --alpha (default 1)" } else { "" };
                stdout.push_str(&format!("{name:<11} default F_{p}^{k}{extra}\n    {desc}\n"));
            }
            Ok(Outcome { stdout, code: EXIT_OK })
        }
    }
}
