//! Command-line front end. Every command prints JSON lines (or `key = value`
//! text with `--format text`); each object carries the configuration it was
//! produced under.
//!
//! Exit codes: 0 on success, 1 on domain errors (printed as JSON with an
//! `error` field), 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bitcore::{pair_encode, BitString};
use crate::cache::{enumeration, estimate_from_entries, mass_from_entries, CacheKey, EnumCache, CACHE_DIR_ENV};
use crate::complexity::{self, Budgets, ComplexityEstimate};
use crate::config::{Config, DEFAULT_SEED};
use crate::experiments;
use crate::kraft::kraft_code;
use crate::prng::{bernoulli, splitmix};
use crate::randomness::{self, DimensionEstimator, SelectionRule, DEFAULT_TAIL_START};
use crate::semimeasure::{self, LscSequence};
use crate::toyvm::{self, Coins, MachineMode, RunBudget, MACHINE_VERSION};

pub const SEED_ENV: &str = "AIT_SEED";

/// Largest description length answered from a cached enumeration; larger
/// budgets always use the targeted search.
pub const CACHE_MAX_LEN: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "ait", about = "Algorithmic information toolkit over the TBF-1 toy machine")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Directory for cached enumerations (also AIT_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for randomized commands (also AIT_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run or enumerate TBF-1 descriptions.
    #[command(subcommand)]
    Vm(VmCmd),
    /// Bounded complexity queries.
    #[command(subcommand)]
    Kc(KcCmd),
    /// Kraft–Chaitin allocation.
    #[command(subcommand)]
    Kraft(KraftCmd),
    /// Halting probabilities and a priori lower bounds.
    #[command(subcommand)]
    Prob(ProbCmd),
    /// Selection rules, dimension and entropy estimates.
    #[command(subcommand)]
    Rand(RandCmd),
    /// Incompressibility experiments.
    #[command(subcommand)]
    Exp(ExpCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Plain,
    Prefix,
    Coin,
}

impl From<ModeArg> for MachineMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Plain => MachineMode::Plain,
            ModeArg::Prefix => MachineMode::Prefix,
            ModeArg::Coin => MachineMode::Coin,
        }
    }
}

fn bits_arg(s: &str) -> Result<BitString, String> {
    BitString::parse(s).map_err(|e| e.to_string())
}

/// A bit string, or a file holding one (whitespace ignored).
fn bits_or_file(s: &str) -> Result<BitString, String> {
    if let Ok(b) = BitString::parse(s) {
        return Ok(b);
    }
    let text = std::fs::read_to_string(s).map_err(|e| format!("{s:?} is neither a bit string nor a readable file: {e}"))?;
    let clean: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    BitString::parse(&clean).map_err(|e| format!("{s}: {e}"))
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[arg(long)]
    max_len: usize,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
}

impl BudgetArgs {
    fn budgets(&self) -> Budgets {
        Budgets::new(self.max_len, self.max_steps)
    }
}

#[derive(Subcommand, Debug)]
enum VmCmd {
    /// Run one description.
    Run {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_parser = bits_arg)]
        desc: BitString,
        #[arg(long, value_parser = bits_arg)]
        cond: Option<BitString>,
        #[arg(long, value_parser = bits_arg)]
        coins: Option<BitString>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_steps: u64,
    },
    /// Every halting description within the budgets, one line each.
    Enumerate {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_parser = bits_arg)]
        cond: Option<BitString>,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
}

#[derive(Subcommand, Debug)]
enum KcCmd {
    /// Shortest plain description length.
    Exact {
        #[arg(long, value_parser = bits_arg)]
        x: BitString,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Conditional complexity given --y.
    Cond {
        #[arg(long, value_parser = bits_arg)]
        x: BitString,
        #[arg(long, value_parser = bits_arg)]
        y: BitString,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Prefix complexity.
    Prefix {
        #[arg(long, value_parser = bits_arg)]
        x: BitString,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Complexity of the encoded pair (x, y).
    Pair {
        #[arg(long, value_parser = bits_arg)]
        x: BitString,
        #[arg(long, value_parser = bits_arg)]
        y: BitString,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// The time-bounded approximation k(x, t).
    Approx {
        #[arg(long, value_parser = bits_arg)]
        x: BitString,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// KT codelength upper bound.
    Kt {
        #[arg(long, value_parser = bits_or_file)]
        x: BitString,
    },
}

#[derive(Subcommand, Debug)]
enum KraftCmd {
    /// Assign prefix-free codewords to requested lengths.
    Alloc {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        requests: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum ProbCmd {
    /// Bounds on the halting probability.
    Halt {
        #[arg(long, value_parser = bits_arg)]
        code: BitString,
        #[arg(long)]
        depth: u64,
    },
    /// Bounds on the output distribution.
    Dist {
        #[arg(long, value_parser = bits_arg)]
        code: BitString,
        #[arg(long)]
        depth: u64,
    },
    /// Run the coin machine against a lower-semicomputable p.
    Lsc {
        /// Non-decreasing rationals such as 1/2,5/8.
        #[arg(long, value_delimiter = ',', required = true)]
        terms: Vec<String>,
        #[arg(long)]
        depth: usize,
    },
    /// Lower bound on the a priori probability of x.
    Apriori {
        #[arg(long, value_parser = bits_arg)]
        x: BitString,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Coding-theorem gaps for every output within the budgets.
    Gaps {
        #[command(flatten)]
        budgets: BudgetArgs,
    },
}

#[derive(Subcommand, Debug)]
enum RandCmd {
    /// Apply a selection rule to a sequence.
    Select {
        #[arg(long)]
        rule: String,
        #[arg(long, value_parser = bits_or_file)]
        input: BitString,
    },
    /// Measure of inputs whose selection starts with x.
    Preimage {
        #[arg(long)]
        rule: String,
        #[arg(long, value_parser = bits_arg)]
        x: BitString,
        #[arg(long)]
        depth: usize,
    },
    /// Compression-based dimension estimate.
    Dim {
        /// bernoulli:<p>:<seed> or file:<path>
        #[arg(long)]
        source: String,
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_TAIL_START)]
        tail_start: usize,
    },
    /// Complexity of a block against its empirical entropy.
    EntropyBound {
        #[arg(long, value_parser = bits_or_file)]
        input: BitString,
    },
}

#[derive(Args, Debug)]
struct ExpArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum ExpCmd {
    /// GF(2) rank of random n x n matrices.
    Rank(ExpArgs),
    /// Connectivity of random graphs on n vertices.
    Graph(ExpArgs),
    /// Largest transitive subtournament.
    Tournament(ExpArgs),
    /// Heapsort sift-down work on random permutations.
    Heapsort(ExpArgs),
    /// --n gives the smallest n; runs n, 2n, 4n.
    TmDup(ExpArgs),
    /// --n is the block length, --trials the number of cases.
    Multihead(ExpArgs),
}

enum Failure {
    Usage(String),
    Domain(Value),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn domain(kind: &str, detail: Value) -> Failure {
    let mut m = Map::new();
    m.insert("error".into(), json!(kind));
    if let Value::Object(d) = detail {
        m.extend(d);
    }
    Failure::Domain(Value::Object(m))
}

struct Ctx {
    format: Format,
    cache: Option<EnumCache>,
    seed: u64,
    config: Config,
}

impl Ctx {
    fn finish(&self, v: impl Serialize) -> Value {
        let mut v = serde_json::to_value(v).expect("reports serialize");
        if let Value::Object(m) = &mut v {
            m.insert("config".into(), serde_json::to_value(&self.config).expect("config serializes"));
        }
        v
    }
}

fn render(format: Format, v: &Value) -> String {
    match (format, v) {
        (Format::Text, Value::Object(m)) => m
            .iter()
            .filter(|(k, _)| *k != "config")
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k} = {s}"),
                other => format!("{k} = {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        _ => v.to_string(),
    }
}

/// Parses `argv` (program name first), runs the command and writes its
/// output. Returns the process exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return if code == 0 { 0 } else { 2 };
        }
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => match std::env::var(SEED_ENV) {
            Ok(s) => match s.parse() {
                Ok(v) => v,
                Err(_) => {
                    let _ = writeln!(err, "error: {SEED_ENV}={s:?} is not an unsigned integer");
                    return 2;
                }
            },
            Err(_) => DEFAULT_SEED,
        },
    };
    let cache_dir = cli.cache_dir.clone().or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from));
    let cache = match cache_dir {
        Some(d) => match EnumCache::new(&d) {
            Ok(c) => Some(c),
            Err(e) => {
                let _ = writeln!(err, "error: cache directory {}: {e}", d.display());
                return 2;
            }
        },
        None => None,
    };
    let ctx = Ctx {
        format: cli.format,
        cache,
        seed,
        config: Config::default(),
    };
    let (lines, code) = match execute(&ctx, cli.command) {
        Ok(lines) => (lines, 0),
        Err(Failure::Domain(v)) => (vec![ctx.finish(v)], 1),
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    for v in lines {
        if writeln!(out, "{}", render(ctx.format, &v)).is_err() {
            return 1;
        }
    }
    code
}

fn execute(ctx: &Ctx, cmd: Command) -> Result<Vec<Value>, Failure> {
    match cmd {
        Command::Vm(c) => vm(ctx, c),
        Command::Kc(c) => kc(ctx, c),
        Command::Kraft(c) => kraft(ctx, c),
        Command::Prob(c) => prob(ctx, c),
        Command::Rand(c) => rand(ctx, c),
        Command::Exp(c) => exp(ctx, c),
    }
}

fn vm(ctx: &Ctx, cmd: VmCmd) -> Result<Vec<Value>, Failure> {
    match cmd {
        VmCmd::Run { mode, desc, cond, coins, max_steps } => {
            let mode = MachineMode::from(mode);
            if coins.is_some() && mode != MachineMode::Coin {
                return Err(usage("--coins only applies to --mode coin"));
            }
            let cond = cond.unwrap_or_default();
            let coin_src = match &coins {
                Some(c) => Coins::Bits(c),
                None => Coins::None,
            };
            let outcome = toyvm::run(&desc, mode, &cond, coin_src, RunBudget::new(max_steps));
            let mut v = serde_json::to_value(&outcome).expect("outcome serializes");
            v["mode"] = json!(mode);
            v["max_steps"] = json!(max_steps);
            v["machine_version"] = json!(MACHINE_VERSION);
            Ok(vec![ctx.finish(v)])
        }
        VmCmd::Enumerate { mode, cond, budgets } => {
            let key = CacheKey::new(mode.into(), &cond.unwrap_or_default(), budgets.budgets());
            Ok(enumeration(ctx.cache.as_ref(), &key)
                .into_iter()
                .map(|e| {
                    let mut v = serde_json::to_value(e).expect("entry serializes");
                    v["budgets"] = json!(budgets.budgets());
                    v["machine_version"] = json!(MACHINE_VERSION);
                    ctx.finish(v)
                })
                .collect())
        }
    }
}

/// Bounded search, answered from the cached enumeration for small budgets
/// when a cache is configured.
fn bounded(ctx: &Ctx, mode: MachineMode, x: &BitString, cond: &BitString, b: Budgets) -> ComplexityEstimate {
    match &ctx.cache {
        Some(c) if b.max_len <= CACHE_MAX_LEN => {
            let entries = enumeration(Some(c), &CacheKey::new(mode, cond, b));
            estimate_from_entries(x, &entries, b)
        }
        _ => match mode {
            MachineMode::Prefix => complexity::k_prefix(x, b),
            _ => complexity::c_plain(x, b, cond),
        },
    }
}

fn kc(ctx: &Ctx, cmd: KcCmd) -> Result<Vec<Value>, Failure> {
    let none = BitString::new();
    let est = match cmd {
        KcCmd::Exact { x, budgets } => bounded(ctx, MachineMode::Plain, &x, &none, budgets.budgets()),
        KcCmd::Cond { x, y, budgets } => bounded(ctx, MachineMode::Plain, &x, &y, budgets.budgets()),
        KcCmd::Prefix { x, budgets } => bounded(ctx, MachineMode::Prefix, &x, &none, budgets.budgets()),
        KcCmd::Pair { x, y, budgets } => {
            let mut v = serde_json::to_value(bounded(ctx, MachineMode::Plain, &pair_encode(&x, &y), &none, budgets.budgets()))
                .expect("estimate serializes");
            v["pair_encoding"] = json!(pair_encode(&x, &y));
            return Ok(vec![ctx.finish(v)]);
        }
        KcCmd::Approx { x, steps, max_len } => {
            let max_len = max_len.unwrap_or(x.len() + toyvm::LITERAL_OVERHEAD);
            let value = complexity::k_approx(&x, steps, max_len);
            return Ok(vec![ctx.finish(json!({
                "value": value,
                "kind": "approximation",
                "steps": steps,
                "max_len": max_len,
                "machine_version": MACHINE_VERSION,
            }))]);
        }
        KcCmd::Kt { x } => complexity::kt_estimate(&x),
    };
    Ok(vec![ctx.finish(est)])
}

fn kraft(ctx: &Ctx, cmd: KraftCmd) -> Result<Vec<Value>, Failure> {
    let KraftCmd::Alloc { requests } = cmd;
    match kraft_code(&requests) {
        Ok(codewords) => Ok(vec![ctx.finish(json!({ "codewords": codewords }))]),
        Err(e) => Err(domain("overflow", json!({ "index": e.index, "granted": e.granted }))),
    }
}

fn rational(s: &str) -> Result<BigRational, Failure> {
    if let Ok(q) = BigRational::from_str(s.trim()) {
        return Ok(q);
    }
    // Decimal form such as 0.625.
    let s = s.trim();
    let (int, frac) = s.split_once('.').ok_or_else(|| usage(format!("{s:?} is not a rational")))?;
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(&digits).map_err(|_| usage(format!("{s:?} is not a rational")))?;
    Ok(BigRational::new(num, BigInt::from(10).pow(frac.len() as u32)))
}

fn prob(ctx: &Ctx, cmd: ProbCmd) -> Result<Vec<Value>, Failure> {
    let sm_err = |e: semimeasure::SemimeasureError| domain("invalid", json!({ "reason": e.to_string() }));
    match cmd {
        ProbCmd::Halt { code, depth } => {
            let b = semimeasure::halting_bounds(&code, depth).map_err(sm_err)?;
            Ok(vec![ctx.finish(json!({ "bounds": b, "machine_version": MACHINE_VERSION }))])
        }
        ProbCmd::Dist { code, depth } => Ok(vec![ctx.finish(semimeasure::output_distribution(&code, depth).map_err(sm_err)?)]),
        ProbCmd::Lsc { terms, depth } => {
            let qs = terms.iter().map(|t| rational(t)).collect::<Result<Vec<_>, _>>()?;
            let p = LscSequence::from_terms(qs).map_err(sm_err)?;
            let b = semimeasure::lsc_halting_bounds(&p, depth);
            Ok(vec![ctx.finish(json!({ "bounds": b, "terms": terms }))])
        }
        ProbCmd::Apriori { x, budgets } => {
            let b = budgets.budgets();
            let m = match &ctx.cache {
                Some(c) if b.max_len <= CACHE_MAX_LEN => {
                    mass_from_entries(&x, &enumeration(Some(c), &CacheKey::new(MachineMode::Prefix, &BitString::new(), b)))
                }
                _ => semimeasure::apriori_lower(&x, b),
            };
            Ok(vec![ctx.finish(json!({
                "x": x,
                "lower": m,
                "budgets": b,
                "machine_version": MACHINE_VERSION,
            }))])
        }
        ProbCmd::Gaps { budgets } => {
            let b = budgets.budgets();
            let gaps = semimeasure::coding_gaps(b);
            let histogram = semimeasure::gap_histogram(&gaps);
            let mut lines: Vec<Value> = gaps.iter().map(|g| ctx.finish(g)).collect();
            lines.push(ctx.finish(json!({
                "histogram": histogram,
                "outputs": gaps.len(),
                "all_hold": gaps.iter().all(|g| g.holds),
                "budgets": b,
                "machine_version": MACHINE_VERSION,
            })));
            Ok(lines)
        }
    }
}

fn parse_rule(s: &str) -> Result<SelectionRule, Failure> {
    const PROGRAM_STEPS: u64 = 1024;
    let bad = |e: String| usage(format!("rule {s:?}: {e}"));
    match s {
        "even" => Ok(SelectionRule::EvenPositions),
        "after-zeros" => Ok(SelectionRule::AfterZeros),
        _ => {
            if let Some(w) = s.strip_prefix("pattern:") {
                Ok(SelectionRule::AfterPattern { w: bits_arg(w).map_err(bad)? })
            } else if let Some(code) = s.strip_prefix("prog:") {
                Ok(SelectionRule::Program {
                    code: bits_arg(code).map_err(bad)?,
                    step_budget: PROGRAM_STEPS,
                })
            } else {
                Err(usage(format!("unknown rule {s:?}; expected even, after-zeros, pattern:<bits> or prog:<bits>")))
            }
        }
    }
}

fn rand(ctx: &Ctx, cmd: RandCmd) -> Result<Vec<Value>, Failure> {
    match cmd {
        RandCmd::Select { rule, input } => {
            let r = parse_rule(&rule)?;
            let selected = randomness::select(&r, &input);
            Ok(vec![ctx.finish(json!({ "rule": r, "input_len": input.len(), "selected": selected }))])
        }
        RandCmd::Preimage { rule, x, depth } => {
            let r = parse_rule(&rule)?;
            if depth < x.len() {
                return Err(domain("bad_depth", json!({ "reason": "depth must be at least |x|" })));
            }
            let b = randomness::preimage_measure(&r, &x, depth);
            Ok(vec![ctx.finish(json!({ "rule": r, "x": x, "bounds": b, "cylinder": crate::bitcore::Dyadic::pow2_neg(x.len() as u32) }))])
        }
        RandCmd::Dim { source, lengths, tail_start } => {
            let max = lengths.iter().copied().max().unwrap_or(0);
            let mut stream: Box<dyn FnMut() -> bool> = if let Some(rest) = source.strip_prefix("bernoulli:") {
                let (p, seed) = match rest.split_once(':') {
                    Some((p, s)) => (p, s.parse::<u64>().map_err(|_| usage(format!("bad seed in {source:?}")))?),
                    None => (rest, ctx.seed),
                };
                let p: f64 = p.parse().map_err(|_| usage(format!("bad probability in {source:?}")))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(usage("probability must lie in [0, 1]"));
                }
                let mut rng = splitmix(seed);
                Box::new(move || bernoulli(&mut rng, p))
            } else if let Some(path) = source.strip_prefix("file:") {
                let bits = bits_or_file(path).map_err(usage)?;
                if bits.len() < max {
                    return Err(domain("short_input", json!({ "have": bits.len(), "need": max })));
                }
                let mut it = bits.iter().collect::<Vec<_>>().into_iter();
                Box::new(move || it.next().unwrap_or(false))
            } else {
                return Err(usage("--source must be bernoulli:<p>:<seed> or file:<path>"));
            };
            let est = randomness::dimension_estimate(&mut stream, &lengths, DimensionEstimator::Kt, tail_start)
                .map_err(|e| domain("dimension", json!({ "reason": e.to_string() })))?;
            Ok(vec![ctx.finish(json!({ "source": source, "estimate": est }))])
        }
        RandCmd::EntropyBound { input } => {
            if input.is_empty() {
                return Err(domain("empty_input", json!({})));
            }
            Ok(vec![ctx.finish(randomness::entropy_bound_report(&input))])
        }
    }
}

fn exp(ctx: &Ctx, cmd: ExpCmd) -> Result<Vec<Value>, Failure> {
    let seed = ctx.seed;
    let report = match cmd {
        ExpCmd::Rank(a) => {
            let n = a.n.unwrap_or(64);
            if n < 2 {
                return Err(usage("--n must be at least 2"));
            }
            experiments::rank_experiment(n, a.trials.unwrap_or(200), seed)
        }
        ExpCmd::Graph(a) => {
            let n = a.n.unwrap_or(64);
            if n < 2 {
                return Err(usage("--n must be at least 2"));
            }
            experiments::connectivity_experiment(n, a.trials.unwrap_or(200), seed)
        }
        ExpCmd::Tournament(a) => {
            let n = a.n.unwrap_or(15);
            if !(1..=16).contains(&n) {
                return Err(usage("--n must lie in 1..=16 for the exact search"));
            }
            experiments::tournament_experiment(n, a.trials.unwrap_or(200), seed)
        }
        ExpCmd::Heapsort(a) => experiments::heapsort_experiment(a.n.unwrap_or(1 << 14), a.trials.unwrap_or(50), seed),
        ExpCmd::TmDup(a) => {
            let n = a.n.unwrap_or(64);
            experiments::tm_duplication_experiment(&[n, 2 * n, 4 * n], seed)
        }
        ExpCmd::Multihead(a) => experiments::multihead_experiment(a.trials.unwrap_or(1000), a.n.unwrap_or(8), seed),
    };
    Ok(vec![ctx.finish(report)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("ait").chain(args.iter().copied());
        let code = dispatch(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn json_line(s: &str) -> Value {
        serde_json::from_str(s.lines().next().expect("one line")).unwrap()
    }

    #[test]
    fn kc_exact_example() {
        let (code, out, _) = call(&["kc", "exact", "--x", "0", "--max-len", "8", "--max-steps", "64"]);
        assert_eq!(code, 0);
        let v = json_line(&out);
        assert_eq!(v["value"], 7);
        assert_eq!(v["machine_version"], "TBF-1");
        assert_eq!(v["config"]["pair_constant"], 40);
        assert_eq!(v["config"]["heapsort_constant"], 6.0);
        assert_eq!(v["config"]["kt_header_bits"], 8);
        assert_eq!(v["config"]["entropy_bound_constant"], 16.0);
        assert_eq!(v["config"]["tail_start"], 1024);
    }

    #[test]
    fn kraft_overflow_example() {
        let (code, out, _) = call(&["kraft", "alloc", "--requests", "1,1,1"]);
        assert_eq!(code, 1);
        let v = json_line(&out);
        assert_eq!(v["error"], "overflow");
        assert_eq!(v["index"], 2);
        let (code, out, _) = call(&["kraft", "alloc", "--requests", "1,2,3,3"]);
        assert_eq!(code, 0);
        assert_eq!(json_line(&out)["codewords"], json!(["0", "10", "110", "111"]));
    }

    #[test]
    fn vm_run_example() {
        let (code, out, _) = call(&["vm", "run", "--mode", "plain", "--desc", "1111", "--max-steps", "10"]);
        assert_eq!(code, 0);
        let v = json_line(&out);
        assert_eq!((v["outcome"].clone(), v["output"].clone(), v["steps"].clone()), (json!("halted"), json!(""), json!(1)));
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = call(&["kc", "exact", "--x", "0", "--max-len", "8"]);
        assert_eq!(code, 2);
        assert!(err.contains("--max-steps"), "{err}");
        assert_eq!(call(&["kc", "exact", "--x", "012", "--max-len", "8", "--max-steps", "1"]).0, 2);
        assert_eq!(call(&["nope"]).0, 2);
        assert_eq!(call(&["rand", "select", "--rule", "odd", "--input", "0101"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn text_format() {
        let (code, out, _) = call(&["--format", "text", "kraft", "alloc", "--requests", "1,1"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"codewords = ["0","1"]"#);
    }

    #[test]
    fn selection_examples() {
        let (_, out, _) = call(&["rand", "select", "--rule", "even", "--input", "00100100"]);
        assert_eq!(json_line(&out)["selected"], "0100");
        let (_, out, _) = call(&["rand", "select", "--rule", "after-zeros", "--input", "00101100"]);
        assert_eq!(json_line(&out)["selected"], "0110");
    }

    #[test]
    fn prob_commands() {
        let (code, out, _) = call(&["prob", "lsc", "--terms", "5/8", "--depth", "20"]);
        assert_eq!(code, 0);
        let v = json_line(&out);
        assert!(v["bounds"]["lower"].is_object());
        let (code, out, _) = call(&["prob", "lsc", "--terms", "0.5,0.625", "--depth", "4"]);
        assert_eq!(code, 0, "{out}");
        let (code, out, _) = call(&["prob", "lsc", "--terms", "3/4,1/2", "--depth", "4"]);
        assert_eq!(code, 1);
        assert_eq!(json_line(&out)["error"], "invalid");
        let (code, out, _) = call(&["prob", "apriori", "--x", "", "--max-len", "4", "--max-steps", "10"]);
        assert_eq!(code, 0);
        assert_eq!(json_line(&out)["lower"], json!({ "num": 1, "exp": 3 }));
    }

    #[test]
    fn cache_is_transparent() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        for args in [
            vec!["kc", "exact", "--x", "01", "--max-len", "12", "--max-steps", "64"],
            vec!["kc", "prefix", "--x", "1", "--max-len", "12", "--max-steps", "64"],
            vec!["kc", "cond", "--x", "0", "--y", "0", "--max-len", "12", "--max-steps", "64"],
            vec!["prob", "apriori", "--x", "0", "--max-len", "10", "--max-steps", "32"],
        ] {
            let plain = call(&args);
            let mut with = vec!["--cache-dir", d];
            with.extend(&args);
            let cold = call(&with);
            let warm = call(&with);
            assert_eq!(plain, cold);
            assert_eq!(cold, warm);
        }
        assert!(std::fs::read_dir(d).unwrap().count() >= 3);
    }

    #[test]
    fn experiment_report() {
        let (code, out, _) = call(&["exp", "graph", "--n", "8", "--trials", "50", "--seed", "3"]);
        assert_eq!(code, 0);
        let v = json_line(&out);
        assert_eq!(v["name"], "graph");
        assert_eq!(v["seed"], 3);
        assert_eq!(v["metrics"]["connected"], 48.0);
        assert_eq!(v["config"]["prng"], "SplitMix64");
    }
}
