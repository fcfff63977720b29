//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
//! 3 size budget or timeout exceeded, 4 a cross-check or reduction check
//! that came out false.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::decomp::{dilworth, gallai_tree, intrinsic_width, width};
use crate::error::Error;
use crate::generate::{random_permutation, random_poset};
use crate::lecount::{
    count_automorphisms_dim2, count_le_bruteforce, count_le_downset_dp, count_linear_extensions, ExtensionCount,
    DEFAULT_ORACLE_BUDGET,
};
use crate::occur::{count_occurrences_with, enumerate_occurrences, CountOptions};
use crate::par::Strategy;
use crate::poset::{OccurrenceFlavor, Permutation, Poset};
use crate::sat::{build_gadget, format_pair, parse_dimacs, verify_reduction, Method};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "posetpat", version, about = "Poset pattern occurrence, linear extensions, decomposition")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Count linear extensions.
    Le {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = LeMethod::Auto)]
        method: LeMethod,
        /// Also count by a second method and fail on disagreement.
        #[arg(long)]
        check: bool,
    },
    /// Count or list occurrences of one poset in another.
    Occur {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        text: PathBuf,
        /// Read the pattern as a permutation σ and use D(σ).
        #[arg(long)]
        perm_pattern: bool,
        #[arg(long)]
        perm_text: bool,
        #[arg(long)]
        induced: bool,
        #[arg(long)]
        injective: bool,
        #[arg(long)]
        unlabeled: bool,
        /// Print one map per line instead of the count.
        #[arg(long)]
        enumerate: bool,
    },
    /// Count automorphisms of D(σ); takes the permutation or a file holding it.
    Auts { perm: String },
    /// Print the modular decomposition.
    Decomp { file: PathBuf },
    Width { file: PathBuf },
    /// Largest width of a prime quotient.
    Iwidth { file: PathBuf },
    /// Print a minimum chain cover, one chain per line.
    Chains { file: PathBuf },
    /// Write the pattern and text permutations built from a 3-CNF.
    SatReduce {
        cnf: PathBuf,
        #[arg(long)]
        pattern_out: PathBuf,
        #[arg(long)]
        text_out: PathBuf,
    },
    /// Compare the match count of the reduction with the model count.
    SatVerify {
        cnf: PathBuf,
        #[arg(long, value_enum, default_value_t = SatMethod::Backtrack)]
        method: SatMethod,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Print a seeded random instance.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    Poset { n: usize, p: f64, seed: u64 },
    Perm { n: usize, seed: u64 },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum LeMethod {
    Auto,
    Downset,
    Recurse,
    Brute,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SatMethod {
    Backtrack,
    Structured,
}

/// A failure with its exit code and message.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeLimit { .. } | Error::MemoryBudget { .. } | Error::Timeout(_) => EXIT_BUDGET,
            Error::Constraint(_) => EXIT_CHECK,
            _ => EXIT_INPUT,
        };
        Failure(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn read_poset(path: &Path, as_perm: bool) -> Result<Poset, Failure> {
    let text = read(path)?;
    let p = if as_perm {
        Poset::from_permutation(&Permutation::parse(&text)?)
    } else {
        Poset::parse(&text)?
    };
    Ok(p)
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Cmd::Le { file, method, check } => {
            let p = read_poset(&file, false)?;
            let count = match method {
                LeMethod::Auto | LeMethod::Recurse => count_linear_extensions(&p)?,
                LeMethod::Downset => count_le_downset_dp(&p)?,
                LeMethod::Brute => count_le_bruteforce(&p)?,
            };
            if check {
                let (name, other) = cross_check(&p, method)?;
                if other != count {
                    return Err(Failure(
                        EXIT_CHECK,
                        format!("{method:?} gives {count} but {name} gives {other}"),
                    ));
                }
            }
            writeln!(out, "{count}")?;
        }
        Cmd::Occur {
            pattern,
            text,
            perm_pattern,
            perm_text,
            induced,
            injective,
            unlabeled,
            enumerate,
        } => {
            let p = read_poset(&pattern, perm_pattern)?;
            let q = read_poset(&text, perm_text)?;
            let flavor = OccurrenceFlavor::new(induced, injective, unlabeled);
            if enumerate {
                for map in enumerate_occurrences(&p, &q, flavor)? {
                    writeln!(out, "{map}")?;
                }
            } else {
                let opts = CountOptions {
                    strategy: Strategy::Sequential,
                    timeout: None,
                };
                writeln!(out, "{}", count_occurrences_with(&p, &q, flavor, &opts)?)?;
            }
        }
        Cmd::Auts { perm } => {
            let path = Path::new(&perm);
            let text = if path.is_file() { read(path)? } else { perm };
            let sigma = Permutation::parse(&text)?;
            writeln!(out, "{}", count_automorphisms_dim2(&sigma))?;
        }
        Cmd::Decomp { file } => {
            let p = read_poset(&file, false)?;
            writeln!(out, "{}", gallai_tree(&p))?;
        }
        Cmd::Width { file } => writeln!(out, "{}", width(&read_poset(&file, false)?))?,
        Cmd::Iwidth { file } => writeln!(out, "{}", intrinsic_width(&read_poset(&file, false)?))?,
        Cmd::Chains { file } => write!(out, "{}", dilworth(&read_poset(&file, false)?))?,
        Cmd::SatReduce {
            cnf,
            pattern_out,
            text_out,
        } => {
            let g = build_gadget(&parse_dimacs(&read(&cnf)?)?)?;
            std::fs::write(&pattern_out, format!("{}\n", g.pattern))?;
            std::fs::write(&text_out, format!("{}\n", g.text))?;
        }
        Cmd::SatVerify { cnf, method, timeout } => {
            let f = parse_dimacs(&read(&cnf)?)?;
            let timeout = match timeout {
                Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
                Some(s) => return Err(Failure(EXIT_USAGE, format!("invalid timeout {s}"))),
                None => None,
            };
            let method = match method {
                SatMethod::Backtrack => Method::Backtrack,
                SatMethod::Structured => Method::Structured,
            };
            let report = verify_reduction(&f, method, timeout)?;
            writeln!(out, "{report}")?;
            for (r, s) in &report.pairs {
                writeln!(out, "{}", format_pair(r, s))?;
            }
            if !report.passed() {
                return Err(Failure(EXIT_CHECK, "match count differs from model count".into()));
            }
        }
        Cmd::Gen(GenCmd::Poset { n, p, seed }) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Failure(EXIT_USAGE, format!("edge probability {p} outside [0, 1]")));
            }
            write!(out, "{}", random_poset(n, p, seed))?;
        }
        Cmd::Gen(GenCmd::Perm { n, seed }) => writeln!(out, "{}", random_permutation(n, seed))?,
    }
    Ok(())
}

/// Second opinion for `le --check`: brute force when small enough,
/// otherwise whichever fast method was not asked for.
fn cross_check(p: &Poset, method: LeMethod) -> Result<(&'static str, ExtensionCount), Failure> {
    let pick = if p.len() <= DEFAULT_ORACLE_BUDGET && method != LeMethod::Brute {
        ("brute", count_le_bruteforce(p)?)
    } else if method == LeMethod::Downset {
        ("recurse", count_linear_extensions(p)?)
    } else {
        ("downset", count_le_downset_dp(p)?)
    };
    Ok(pick)
}
