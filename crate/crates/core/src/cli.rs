//! Command-line surface.
//!
//! Exit codes: 0 on success (for `verify`, the range is free of
//! counterexamples), 1 when a counterexample is found, 2 on usage or range
//! errors.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::census::{self, CensusReport};
use crate::error::CensusError;
use crate::chains::{self, ChainIter};
use crate::polyseq::{self, Family};
use crate::report::{self, Format};
use crate::unity::{self, ASetResult};

pub const EXIT_OK: u8 = 0;
pub const EXIT_COUNTEREXAMPLE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "ASIZE_WORKERS";

/// Largest n accepted by the brute-force engine.
pub const BRUTE_MAX: u64 = 1_000_000_000;
/// Largest n accepted by the chain-scan engine.
pub const CHAIN_MAX: u64 = 100_000_000_000_000;

#[derive(Debug, Parser)]
#[command(name = "asize", version, about = "Explore A(n) = {1 <= a < n : n | a^2-1, a | n^2-1}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Brute,
    Fast,
    Chain,
    /// Run all three engines and check they agree.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    G,
    F,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::G => Family::G,
            FamilyArg::F => Family::F,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute A(n).
    An {
        n: u64,
        #[arg(long, value_enum, default_value = "fast")]
        method: MethodArg,
        #[arg(long)]
        json: bool,
    },
    /// Square roots of 1 modulo n and the bounds on |A(n)|.
    Roots {
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Members of chain k.
    Chain {
        k: u64,
        /// Emit members not exceeding this value.
        #[arg(long, conflicts_with = "count", required_unless_present = "count")]
        limit: Option<u64>,
        /// Emit this many members (exact, unbounded size).
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Descend from a in A(n) to the pair (1, z).
    Descend {
        a: BigUint,
        n: BigUint,
        #[arg(long)]
        json: bool,
    },
    /// Coefficients or values of G_i / F_i.
    Poly {
        #[arg(value_enum)]
        family: FamilyArg,
        index: usize,
        /// Evaluate at this point instead of printing coefficients.
        #[arg(long)]
        at: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Check that no value up to --max lies in two chains.
    Verify(VerifyArgs),
    /// Average size of A(n) over n <= --max and its bounds.
    Stats {
        #[arg(long = "max")]
        x: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "max")]
    pub x: u64,
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Write the member list as CSV.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    /// Write the JSON report to a file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
    /// Use the member list from this CSV instead of enumerating chains.
    #[arg(long, hide = true)]
    pub inject_members: Option<PathBuf>,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

/// Big integers go out as JSON numbers up to 2⁵³ and as strings above.
fn big_json(v: &BigUint) -> Value {
    match u64::try_from(v) {
        Ok(small) if (small as u128) <= report::JSON_SAFE_MAX => json!(small),
        _ => json!(v.to_string()),
    }
}

fn u64_json(v: u64) -> Value {
    big_json(&BigUint::from(v))
}

fn print_json(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json value"))
}

fn aset_json(r: &ASetResult) -> Value {
    json!({
        "n": u64_json(r.n),
        "elements": r.elements.iter().map(|&a| u64_json(a)).collect::<Vec<_>>(),
        "size": r.len(),
        "method": r.method.to_string(),
    })
}

fn cmd_an(n: u64, method: MethodArg, as_json: bool, out: &mut dyn Write) -> CmdResult {
    if n < 2 {
        return Err(Failure(format!("n must be at least 2, got {n}")));
    }
    let brute = |n| {
        if n > BRUTE_MAX {
            return Err(Failure(format!("brute force is limited to n <= {BRUTE_MAX}")));
        }
        Ok(unity::aset_brute(n)?)
    };
    let chain = |n| {
        if n > CHAIN_MAX {
            return Err(Failure(format!("the chain engine is limited to n <= {CHAIN_MAX}")));
        }
        Ok(chains::aset_chain(n)?)
    };
    let result = match method {
        MethodArg::Brute => brute(n)?,
        MethodArg::Fast => unity::aset_fast(n)?,
        MethodArg::Chain => chain(n)?,
        MethodArg::All => {
            let fast = unity::aset_fast(n)?;
            let others = [brute(n)?, chain(n)?];
            for other in &others {
                if other.elements != fast.elements {
                    return Err(Failure(format!(
                        "engines disagree: fast {:?}, {} {:?}",
                        fast.elements, other.method, other.elements
                    )));
                }
            }
            fast
        }
    };
    if as_json {
        print_json(out, &aset_json(&result))?;
    } else {
        writeln!(out, "{result}")?;
    }
    Ok(if result.len() > 3 { EXIT_COUNTEREXAMPLE } else { EXIT_OK })
}

fn cmd_roots(n: u64, as_json: bool, out: &mut dyn Write) -> CmdResult {
    let roots = unity::sqrt_units(n)?;
    let bound = unity::aset_upper_bound(n)?;
    let fact = unity::factorize(n);
    if as_json {
        print_json(
            out,
            &json!({
                "n": u64_json(n),
                "factors": fact.factors.iter().map(|&(p, e)| json!([u64_json(p), e])).collect::<Vec<_>>(),
                "roots": roots.iter().map(|&a| u64_json(a)).collect::<Vec<_>>(),
                "root_count": bound.root_count,
                "literal_root_count": bound.literal_root_count,
                "divisor_count_n2m1": bound.divisor_count,
                "bound": bound.bound,
                "literal_bound": bound.literal_bound,
            }),
        )?;
        return Ok(EXIT_OK);
    }
    let list: Vec<String> = roots.iter().map(ToString::to_string).collect();
    writeln!(out, "n = {n}, w(n) = {}", fact.omega())?;
    writeln!(out, "square roots of 1 mod n: {{{}}}", list.join(", "))?;
    writeln!(out, "root count: {} (closed form 2^w: {})", bound.root_count, bound.literal_root_count)?;
    writeln!(out, "sigma0(n^2-1): {}", bound.divisor_count)?;
    writeln!(out, "bound on |A(n)|: {} (closed form: {})", bound.bound, bound.literal_bound)?;
    Ok(EXIT_OK)
}

fn cmd_chain(k: u64, limit: Option<u64>, count: Option<usize>, as_json: bool, out: &mut dyn Write) -> CmdResult {
    let members: Vec<(u32, BigUint)> = match (limit, count) {
        (Some(limit), _) => ChainIter::new(k, limit)?.map(|s| (s.coord.i, BigUint::from(s.value))).collect(),
        (None, Some(count)) => chains::chain_prefix(k, count)?.into_iter().map(|(c, v)| (c.i, v)).collect(),
        (None, None) => return Err(Failure("one of --limit or --count is required".into())),
    };
    if as_json {
        let rows: Vec<Value> = members.iter().map(|(i, v)| json!({"k": u64_json(k), "i": i, "value": big_json(v)})).collect();
        print_json(out, &Value::Array(rows))?;
    } else {
        for (i, v) in &members {
            writeln!(out, "G_{i}({k}) = {v}")?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_descend(a: BigUint, n: BigUint, as_json: bool, out: &mut dyn Write) -> CmdResult {
    let trace = chains::descend(a, n)?;
    if as_json {
        print_json(
            out,
            &json!({
                "z": u64_json(trace.z),
                "path": trace.steps.iter().map(|(r, a)| json!([big_json(r), big_json(a)])).collect::<Vec<_>>(),
                "k": u64_json(trace.coord.k),
                "i": trace.coord.i,
            }),
        )?;
    } else {
        writeln!(out, "{trace}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_poly(family: Family, index: usize, at: Option<u64>, as_json: bool, out: &mut dyn Write) -> CmdResult {
    let name = match family {
        Family::G => "G",
        Family::F => "F",
    };
    match at {
        Some(k) => {
            let v = polyseq::eval(family, index, k)?;
            if as_json {
                print_json(out, &json!({"family": name, "index": index, "at": u64_json(k), "value": big_json(&v)}))?;
            } else {
                writeln!(out, "{name}_{index}({k}) = {v}")?;
            }
        }
        None => {
            let p = polyseq::coeffs(family, index);
            if as_json {
                let coeffs: Vec<String> = p.coeffs().iter().map(ToString::to_string).collect();
                print_json(out, &json!({"family": name, "index": index, "degree": p.degree(), "coeffs": coeffs}))?;
            } else {
                writeln!(out, "{name}_{index}(x) = {p}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let workers = args.workers.unwrap_or_else(default_workers);
    let (report, members): (CensusReport, Vec<census::ChainMember>) = match &args.inject_members {
        Some(path) => {
            if args.x < 8 {
                return Err(CensusError::TooSmall(args.x).into());
            }
            let mut members = report::read_members_csv(File::open(path)?)?;
            if let Some(m) = members.iter().find(|m| m.value > args.x) {
                return Err(Failure(format!("injected member {} exceeds --max {}", m.value, args.x)));
            }
            let chains = census::max_generator(args.x) - 2;
            let start = std::time::Instant::now();
            let mut report = census::build_report(args.x, chains, &mut members, Default::default());
            report.elapsed = start.elapsed();
            (report, members)
        }
        None => census::run_census(args.x, workers)?,
    };
    if let Some(path) = &args.dump {
        let mut w = BufWriter::new(File::create(path)?);
        report::write_members_csv(&members, &mut w)?;
        w.flush()?;
    }
    if let Some(path) = &args.report {
        std::fs::write(path, report::to_json(&report) + "\n")?;
    }
    let format = if args.json { Format::Json } else { Format::Table };
    report::emit_report(&report, &members, format, &mut *out)?;
    if report.conjecture_holds() {
        Ok(EXIT_OK)
    } else {
        for d in &report.duplicates {
            let coords: Vec<String> = d.coords.iter().map(ToString::to_string).collect();
            writeln!(err, "counterexample: n = {} lies in chains {}", d.value, coords.join(", "))?;
        }
        Ok(EXIT_COUNTEREXAMPLE)
    }
}

fn cmd_stats(x: u64, as_json: bool, out: &mut dyn Write) -> CmdResult {
    let r = census::verify_conjecture(x, default_workers())?;
    let avg = r.average();
    if as_json {
        print_json(
            out,
            &json!({
                "x": u64_json(x),
                "t_x": u64_json(r.t_x),
                "members_total": u64_json(r.members_total),
                "histogram": r.histogram,
                "average_b": {"num": big_json(&BigUint::from(*avg.b.numer())), "den": big_json(&BigUint::from(*avg.b.denom()))},
                "average_b_f64": avg.b_f64(),
                "b_bound": avg.b_bound,
                "t_x_bound": avg.t_x_bound,
                "b_within_bound": avg.b_within_bound,
                "t_x_within_bound": avg.t_x_within_bound,
            }),
        )?;
    } else {
        writeln!(out, "x = {x}")?;
        writeln!(out, "T_x = {} (bound {:.3})", r.t_x, avg.t_x_bound)?;
        writeln!(out, "B = {} ~ {:.9} (bound {:.9})", avg.b, avg.b_f64(), avg.b_bound)?;
        for (size, count) in &r.histogram {
            writeln!(out, "T_{size}(x) = {count}")?;
        }
        let verdict = if avg.holds() { "bounds hold" } else { "BOUND VIOLATED" };
        writeln!(out, "RESULT: {verdict}")?;
    }
    Ok(if r.conjecture_holds() { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
}

/// Executes a parsed command; diagnostics go to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::An { n, method, json } => cmd_an(n, method, json, out),
        Command::Roots { n, json } => cmd_roots(n, json, out),
        Command::Chain { k, limit, count, json } => cmd_chain(k, limit, count, json, out),
        Command::Descend { a, n, json } => cmd_descend(a, n, json, out),
        Command::Poly { family, index, at, json } => cmd_poly(family.into(), index, at, json, out),
        Command::Verify(args) => cmd_verify(args, out, err),
        Command::Stats { x, json } => cmd_stats(x, json, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

/// Parses `args` (including the program name) and runs; usage errors exit 2.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            code
        }
    }
}
