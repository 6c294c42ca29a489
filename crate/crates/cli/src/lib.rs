//! Command-line front end: argument handling, dispatch and JSON/DOT rendering.
//!
//! [`run`] does all the work and returns the exit code with the text destined
//! for stdout and stderr, so the binary is a thin wrapper and tests can drive
//! the CLI in-process.

pub mod parse;

use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use ppcount::fpcount::{fp_point_count, fp_smooth_count};
use ppcount::oracle::{brute_count, brute_count_unchecked, DEFAULT_ORACLE_CEILING};
use ppcount::{
    count_points, poincare_prefix, CountConfig, Error, PrimePowerCtx, RootFinder, RootMethod,
    SeparatedCurve, SingularLocus,
};
use serde_json::{json, Value};

pub use parse::{parse_poly, ParseError, PolyExpr};

pub const SCHEMA: &str = "ppcount/1";

#[derive(Debug, Parser)]
#[command(name = "ppcount", version, about = "Exact root counts of g(x1) + h(x2) over Z/p^k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count roots in (Z/p^k)^2.
    Count(CountArgs),
    /// Count and compare against the brute-force oracle.
    Verify {
        #[command(flatten)]
        args: CountArgs,
        /// Run the oracle even above its size ceiling.
        #[arg(long)]
        force_naive: bool,
    },
    /// Print the recursion tree.
    Tree {
        #[command(flatten)]
        args: CountArgs,
        #[arg(long, value_enum, default_value_t = TreeFormat::Json)]
        format: TreeFormat,
    },
    /// Poincaré series prefix N_{p,j} / p^{2j} for j = 0..=kmax.
    Poincare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kmax: u32,
    },
    /// Hensel lifts of a root mod p^j to roots mod p^{j+1}.
    Lift {
        #[command(flatten)]
        common: Common,
        /// Root mod p^j as `a,b`.
        #[arg(long)]
        point: String,
        #[arg(long = "from-k")]
        from_k: u32,
    },
    /// Point count over F_p.
    FpCount {
        #[command(flatten)]
        common: Common,
    },
    /// Singular locus of the reduction mod p.
    Singular {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeFormat {
    Json,
    Dot,
}

#[derive(Debug, Args)]
struct Common {
    /// Polynomial such as "x2^2 - x1^3 - x1 - 1".
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Prime modulus base.
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Root finding: brute, cz or auto.
    #[arg(long, default_value = "auto", value_parser = RootMethod::from_str)]
    method: RootMethod,
    #[arg(long, default_value_t = 1_000_000)]
    node_budget: usize,
    #[arg(long, env = "PPCOUNT_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: u32,
}

/// Exit status plus captured output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    User(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else {
            Failure::User(e.to_string())
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::User(e.to_string())
    }
}

impl Common {
    fn config(&self) -> CountConfig {
        CountConfig {
            method: self.method,
            node_budget: self.node_budget,
            threads: self.threads,
            ..CountConfig::default()
        }
    }

    fn curve(&self, k: u32) -> Result<(PolyExpr, SeparatedCurve), Failure> {
        let expr = parse_poly(&self.poly)?;
        let ctx = PrimePowerCtx::new(self.p, k)?;
        let curve = expr.to_curve(&ctx);
        Ok((expr, curve))
    }

    fn header(&self, command: &str, expr: &PolyExpr) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(command));
        m.insert("poly".into(), json!(expr.to_string()));
        m.insert("p".into(), json!(self.p));
        m
    }
}

fn stats_json(r: &ppcount::CountResult) -> Value {
    serde_json::to_value(&r.stats).expect("stats serialize")
}

fn render(map: serde_json::Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json");
    s.push('\n');
    s
}

fn parse_point(text: &str) -> Result<(BigUint, BigUint), Failure> {
    let bad = || Failure::User(format!("--point expects `a,b` with non-negative integers, got `{text}`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a = a.trim().parse::<BigUint>().map_err(|_| bad())?;
    let b = b.trim().parse::<BigUint>().map_err(|_| bad())?;
    Ok((a, b))
}

fn locus_json(locus: &SingularLocus) -> Value {
    match locus {
        SingularLocus::IsolatedPoints(v) => json!({"kind": "isolated_points", "points": v}),
        SingularLocus::VerticalLines(v) => json!({"kind": "vertical_lines", "x1": v}),
        SingularLocus::HorizontalLines(v) => json!({"kind": "horizontal_lines", "x2": v}),
        SingularLocus::AllCurvePoints => json!({"kind": "all_curve_points"}),
    }
}

fn dispatch(cli: Cli) -> Result<(i32, String), Failure> {
    match cli.command {
        Command::Count(args) => {
            let (expr, curve) = args.common.curve(args.k)?;
            let r = count_points(&curve, &args.common.config(), args.common.seed)?;
            let mut m = args.common.header("count", &expr);
            m.insert("k".into(), json!(args.k));
            m.insert("seed".into(), json!(r.seed));
            m.insert("N".into(), json!(r.n.to_string()));
            m.insert("stats".into(), stats_json(&r));
            Ok((0, render(m)))
        }
        Command::Verify { args, force_naive } => {
            let (expr, curve) = args.common.curve(args.k)?;
            let r = count_points(&curve, &args.common.config(), args.common.seed)?;
            let oracle = if force_naive {
                brute_count_unchecked(&curve)?
            } else {
                brute_count(&curve, DEFAULT_ORACLE_CEILING)?
            };
            let matched = oracle == r.n;
            let mut m = args.common.header("verify", &expr);
            m.insert("k".into(), json!(args.k));
            m.insert("seed".into(), json!(r.seed));
            m.insert("N".into(), json!(r.n.to_string()));
            m.insert("oracle".into(), json!(oracle.to_string()));
            m.insert("match".into(), json!(matched));
            Ok((if matched { 0 } else { 2 }, render(m)))
        }
        Command::Tree { args, format } => {
            let (expr, curve) = args.common.curve(args.k)?;
            let r = count_points(&curve, &args.common.config(), args.common.seed)?;
            match format {
                TreeFormat::Dot => Ok((0, r.tree.to_dot())),
                TreeFormat::Json => {
                    let mut m = args.common.header("tree", &expr);
                    m.insert("k".into(), json!(args.k));
                    m.insert("seed".into(), json!(r.seed));
                    m.insert("N".into(), json!(r.n.to_string()));
                    m.insert(
                        "tree".into(),
                        serde_json::to_value(r.tree.export()).expect("tree serialize"),
                    );
                    Ok((0, render(m)))
                }
            }
        }
        Command::Poincare { common, kmax } => {
            let (expr, curve) = common.curve(kmax.max(1))?;
            let prefix = poincare_prefix(&curve, kmax, &common.config(), common.seed)?;
            let mut m = common.header("poincare", &expr);
            m.insert("kmax".into(), json!(kmax));
            m.insert("terms".into(), json!(prefix.term_strings()));
            Ok((0, render(m)))
        }
        Command::Lift {
            common,
            point,
            from_k,
        } => {
            let (a, b) = parse_point(&point)?;
            let (expr, curve) = common.curve(from_k + 1)?;
            let lifts = curve.hensel_lifts((&a, &b), from_k)?;
            let pairs: Vec<[String; 2]> = lifts
                .lifts
                .iter()
                .map(|(x, y)| [x.to_string(), y.to_string()])
                .collect();
            let mut m = common.header("lift", &expr);
            m.insert("from_k".into(), json!(from_k));
            m.insert("point".into(), json!([lifts.base.0.to_string(), lifts.base.1.to_string()]));
            m.insert("lifts".into(), json!(pairs));
            Ok((0, render(m)))
        }
        Command::FpCount { common } => {
            let (expr, curve) = common.curve(1)?;
            let total = fp_point_count(&curve)?;
            let mut rf = RootFinder::new(common.method, common.seed);
            let mut m = common.header("fp-count", &expr);
            m.insert("count".into(), json!(total.to_string()));
            // a constant reduction has no points and no singular locus
            if let Ok(locus) = curve.singular_locus(&mut rf) {
                let smooth = fp_smooth_count(&curve, &locus)?;
                m.insert("smooth".into(), json!(smooth.to_string()));
                m.insert("singular".into(), json!((total - smooth).to_string()));
            }
            Ok((0, render(m)))
        }
        Command::Singular { common } => {
            let (expr, curve) = common.curve(1)?;
            let mut rf = RootFinder::new(common.method, common.seed);
            let locus = curve.singular_locus(&mut rf)?;
            let mut m = common.header("singular", &expr);
            m.insert("locus".into(), locus_json(&locus));
            Ok((0, render(m)))
        }
    }
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(cli) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::User(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Resource(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}
