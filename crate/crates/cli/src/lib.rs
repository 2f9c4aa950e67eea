//! Command-line front end. [`run`] does all the work and returns what the
//! binary should print, so tests can drive it directly.

pub mod json;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use neutrocalc::calc::{
    antiderivative_nn, derivative_classify, derivative_nn, derivative_thick, integral_interpretations, integrate_setbounds,
    integrate_with_check, IntegralConfig, NnPoly, Rule,
};
use neutrocalc::contin::{classify_at, ivt_cover, ivt_find};
use neutrocalc::funcmodel::eval;
use neutrocalc::limits::{branch_limits, directional_limit, full_limit, mereo_limit, LimitConfig, LimitOutcome, Side};
use neutrocalc::realset::{eta_metric, fmt_num, mu_norm};
use neutrocalc::textparse::{parse_defs, parse_set, parse_value, render};
use neutrocalc::{Error, FuncSpec, RealSet};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "neutrocalc", version, about = "Calculus of set-valued and indeterminate functions")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Definitions file in the function language; `#` starts a comment
    #[arg(long, global = true, value_name = "PATH")]
    defs: Option<PathBuf>,
    /// Print one JSON record instead of text
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, value_name = "R")]
    tol: Option<f64>,
    #[arg(long, global = true, value_name = "R")]
    h0: Option<f64>,
    #[arg(long, global = true, value_name = "R")]
    ratio: Option<f64>,
    #[arg(long = "max-steps", global = true, value_name = "N")]
    max_steps: Option<usize>,
    #[arg(long, global = true, value_name = "R")]
    blowup: Option<f64>,
    /// Riemann subdivisions
    #[arg(long, global = true, value_name = "N")]
    n: Option<usize>,
    #[arg(long, global = true, value_enum)]
    rule: Option<RuleArg>,
    /// Grid size for intermediate-value searches
    #[arg(long, global = true, value_name = "N", default_value_t = neutrocalc::contin::DEFAULT_GRID)]
    grid: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RuleArg {
    Left,
    Mid,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default)]
enum SideArg {
    Left,
    Right,
    #[default]
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a function at a number, set, indeterminacy number or `or` value
    Eval {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        at: String,
    },
    /// One-sided or two-sided limit
    Limit {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        at: String,
        #[arg(long, value_enum, default_value_t)]
        side: SideArg,
    },
    /// Intersection of the one-sided limits
    MereoLimit {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        at: String,
    },
    /// Continuity class at a point
    Classify {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        at: String,
    },
    /// Envelope derivative, or the derivative class at `--at`
    Diff {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        at: Option<String>,
    },
    /// Derivative of a polynomial with indeterminate coefficients
    DiffNn {
        #[arg(long = "fn")]
        func: String,
    },
    /// Antiderivative of a polynomial with indeterminate coefficients
    Antideriv {
        #[arg(long = "fn")]
        func: String,
    },
    /// Definite integral over [a,b]
    Integrate {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Definite integral between set-valued bounds
    IntegrateSet {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Leftmost c in [a,b] with k in f(c)
    Ivt {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        k: String,
    },
    /// Points whose values cover [k1,k2]
    IvtCover {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        k1: String,
        #[arg(long)]
        k2: String,
    },
    /// Partial distance between two sets
    Metric { a: String, b: String },
    /// Norm of a set
    Norm { set: String },
    /// Parse the definitions file and print every function
    ParseCheck,
}

/// What the binary prints, and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A failure before or during a command, already classified.
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(_) | Error::InvalidConfig(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

/// Result of one command: the text line, the JSON result and notes.
struct Record {
    kind: &'static str,
    text: String,
    result: Value,
    diagnostics: Vec<String>,
}

impl Record {
    fn new(kind: &'static str, text: impl Into<String>, result: Value) -> Record {
        Record { kind, text: text.into(), result, diagnostics: Vec::new() }
    }

    fn note(mut self, d: impl Into<String>) -> Record {
        self.diagnostics.push(d.into());
        self
    }
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let input = args.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    let kind = kind_of(&cli.cmd);
    match execute(&cli) {
        Ok(rec) => emit(&cli, &input, rec),
        Err(Failure::Usage(msg)) => Output { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Domain(e)) => {
            let msg = e.to_string();
            if cli.opts.json {
                let rec = json!({ "kind": kind, "input": input, "result": Value::Null, "diagnostics": [format!("error: {msg}")] });
                Output { code: EXIT_DOMAIN, stdout: format!("{rec}\n"), stderr: String::new() }
            } else {
                Output { code: EXIT_DOMAIN, stdout: String::new(), stderr: format!("error: {msg}\n") }
            }
        }
    }
}

fn emit(cli: &Cli, input: &str, rec: Record) -> Output {
    if cli.opts.json {
        let out = json!({ "kind": rec.kind, "input": input, "result": rec.result, "diagnostics": rec.diagnostics });
        return Output { code: EXIT_OK, stdout: format!("{out}\n"), stderr: String::new() };
    }
    let stderr: String = rec.diagnostics.iter().map(|d| format!("note: {d}\n")).collect();
    Output { code: EXIT_OK, stdout: format!("{}\n", rec.text), stderr }
}

fn kind_of(cmd: &Command) -> &'static str {
    match cmd {
        Command::Eval { .. } => "eval",
        Command::Limit { .. } => "limit",
        Command::MereoLimit { .. } => "mereo-limit",
        Command::Classify { .. } => "classify",
        Command::Diff { .. } => "diff",
        Command::DiffNn { .. } => "diff-nn",
        Command::Antideriv { .. } => "antideriv",
        Command::Integrate { .. } => "integrate",
        Command::IntegrateSet { .. } => "integrate-set",
        Command::Ivt { .. } => "ivt",
        Command::IvtCover { .. } => "ivt-cover",
        Command::Metric { .. } => "metric",
        Command::Norm { .. } => "norm",
        Command::ParseCheck => "parse-check",
    }
}

fn limit_config(o: &GlobalOpts) -> Result<LimitConfig, Failure> {
    let d = LimitConfig::default();
    let cfg = LimitConfig {
        h0: o.h0.unwrap_or(d.h0),
        ratio: o.ratio.unwrap_or(d.ratio),
        tol: o.tol.unwrap_or(d.tol),
        max_steps: o.max_steps.unwrap_or(d.max_steps),
        blowup_threshold: o.blowup.unwrap_or(d.blowup_threshold),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn integral_config(o: &GlobalOpts) -> Result<IntegralConfig, Failure> {
    let d = IntegralConfig::default();
    let rule = match o.rule {
        Some(RuleArg::Left) => Rule::LeftEndpoint,
        Some(RuleArg::Mid) => Rule::Midpoint,
        None => d.rule,
    };
    let cfg = IntegralConfig { n: o.n.unwrap_or(d.n), rule };
    cfg.validate()?;
    Ok(cfg)
}

fn load_defs(o: &GlobalOpts) -> Result<Vec<(String, FuncSpec)>, Failure> {
    let path = o.defs.as_ref().ok_or_else(|| Failure::Usage("this command needs --defs PATH".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_defs(&text)?)
}

fn lookup(o: &GlobalOpts, name: &str) -> Result<FuncSpec, Failure> {
    load_defs(o)?
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, s)| s)
        .ok_or_else(|| Failure::Usage(format!("no function named `{name}` in the definitions file")))
}

/// A real number, written as a literal or a constant expression.
fn real(text: &str, what: &str) -> Result<f64, Failure> {
    if let Ok(x) = text.trim().parse::<f64>() {
        return Ok(x);
    }
    parse_value(text)?
        .as_set()
        .and_then(RealSet::as_point)
        .ok_or_else(|| Failure::Usage(format!("{what} must be a real number, got `{text}`")))
}

fn set(text: &str) -> Result<RealSet, Failure> {
    Ok(parse_set(text)?)
}

fn limit_record(kind: &'static str, o: &LimitOutcome) -> Record {
    Record::new(kind, o.to_string(), json::limit(o))
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn execute(cli: &Cli) -> Result<Record, Failure> {
    let o = &cli.opts;
    Ok(match &cli.cmd {
        Command::Eval { func, at } => {
            let f = lookup(o, func)?;
            let arg = parse_value(at)?;
            let v = eval(&f, &arg)?;
            Record::new("eval", render(&v), json::value(&v))
        }
        Command::Limit { func, at, side } => {
            let f = lookup(o, func)?;
            let c = real(at, "--at")?;
            let cfg = limit_config(o)?;
            let sides: &[Side] = match side {
                SideArg::Left => &[Side::Left],
                SideArg::Right => &[Side::Right],
                SideArg::Both => &[Side::Left, Side::Right],
            };
            let outcome = match side {
                SideArg::Left => directional_limit(&f, c, Side::Left, &cfg)?,
                SideArg::Right => directional_limit(&f, c, Side::Right, &cfg)?,
                SideArg::Both => full_limit(&f, c, &cfg)?,
            };
            let mut rec = limit_record("limit", &outcome);
            // alternatives: report every branch so a disagreement is visible
            for &s in sides {
                let per = branch_limits(&f, c, s, &cfg)?;
                if per.len() > 1 {
                    for (i, b) in per.iter().enumerate() {
                        rec = rec.note(format!("branch {} {}: {b}", i + 1, side_name(s)));
                    }
                }
            }
            if matches!(side, SideArg::Both) && matches!(outcome, LimitOutcome::DoesNotExist(_)) {
                for &s in sides {
                    let one = directional_limit(&f, c, s, &cfg)?;
                    rec = rec.note(format!("{} limit: {one}", side_name(s)));
                }
            }
            rec
        }
        Command::MereoLimit { func, at } => {
            let f = lookup(o, func)?;
            let cfg = limit_config(o)?;
            limit_record("mereo-limit", &mereo_limit(&f, real(at, "--at")?, &cfg)?)
        }
        Command::Classify { func, at } => {
            let f = lookup(o, func)?;
            let cfg = limit_config(o)?;
            let class = classify_at(&f, real(at, "--at")?, &cfg)?;
            Record::new("classify", class.to_string(), json::continuity(&class))
        }
        Command::Diff { func, at } => {
            let f = lookup(o, func)?;
            match at {
                Some(at) => {
                    let d = derivative_classify(&f, real(at, "--at")?)?;
                    Record::new("diff", d.to_string(), json::deriv_class(&d))
                }
                None => {
                    let d = derivative_thick(&f)?;
                    Record::new("diff", d.to_string(), json!({ "derivative": d.to_string() }))
                }
            }
        }
        Command::DiffNn { func } => {
            let d = derivative_nn(&lookup(o, func)?)?;
            let FuncSpec::NNExpr(e) = &d else { unreachable!("derivative_nn returns a polynomial") };
            let p = NnPoly::from_expr(e)?;
            Record::new("diff-nn", p.to_string(), json!({ "derivative": p.to_string(), "coefficients": json::nn_poly(&p) }))
        }
        Command::Antideriv { func } => {
            let a = antiderivative_nn(&lookup(o, func)?)?;
            let result = json!({
                "antiderivative": a.to_string(),
                "coefficients": json::nn_poly(&a.poly),
                "constant": a.constant,
            });
            Record::new("antideriv", a.to_string(), result)
        }
        Command::Integrate { func, a, b } => {
            let f = lookup(o, func)?;
            let cfg = integral_config(o)?;
            let r = integrate_with_check(&f, real(a, "--a")?, real(b, "--b")?, &cfg)?;
            let (lo, hi) = (r.value.inf().unwrap_or(0.0), r.value.sup().unwrap_or(0.0));
            let i = integral_interpretations(lo, hi);
            let result = json!({
                "value": json::realset(&r.value),
                "interpretations": { "min": i.min, "mid": i.mid, "max": i.max },
                "error_estimate": r.error_estimate,
            });
            Record::new("integrate", r.value.to_string(), result)
                .note(format!("with n/2 subdivisions: {}", r.coarse))
                .note(format!("error estimate {}", fmt_num(r.error_estimate)))
        }
        Command::IntegrateSet { func, a, b } => {
            let f = lookup(o, func)?;
            let cfg = integral_config(o)?;
            let v = integrate_setbounds(&f, &set(a)?, &set(b)?, &cfg)?;
            Record::new("integrate-set", v.to_string(), json!({ "value": json::realset(&v) }))
        }
        Command::Ivt { func, a, b, k } => {
            let f = lookup(o, func)?;
            let c = ivt_find(&f, real(a, "--a")?, real(b, "--b")?, real(k, "--k")?, o.grid)?;
            let v = eval(&f, &neutrocalc::NeutroValue::point(c))?;
            Record::new("ivt", fmt_num(c), json!({ "c": json::num(c), "value": json::value(&v) }))
                .note(format!("f({}) = {}", fmt_num(c), render(&v)))
        }
        Command::IvtCover { func, a, b, k1, k2 } => {
            let f = lookup(o, func)?;
            let (k1, k2) = (real(k1, "--k1")?, real(k2, "--k2")?);
            let cs = ivt_cover(&f, real(a, "--a")?, real(b, "--b")?, k1, k2, o.grid)?;
            let mut rec = Record::new(
                "ivt-cover",
                cs.iter().map(|&c| fmt_num(c)).collect::<Vec<_>>().join(", "),
                json!({ "points": cs.iter().map(|&c| json::num(c)).collect::<Vec<_>>() }),
            );
            for &c in &cs {
                rec = rec.note(format!("f({}) = {}", fmt_num(c), render(&eval(&f, &neutrocalc::NeutroValue::point(c))?)));
            }
            rec
        }
        Command::Metric { a, b } => {
            let d = eta_metric(&set(a)?, &set(b)?)?;
            Record::new("metric", fmt_num(d), json!({ "eta": json::num(d) }))
        }
        Command::Norm { set: s } => {
            let m = mu_norm(&set(s)?)?;
            Record::new("norm", fmt_num(m), json!({ "mu": json::num(m) }))
        }
        Command::ParseCheck => {
            let defs = load_defs(o)?;
            let lines: Vec<String> = defs.iter().map(|(n, s)| format!("{n}(x) = {s}")).collect();
            let funcs: Vec<Value> = defs.iter().map(|(n, s)| json!({ "name": n, "definition": s.to_string() })).collect();
            Record::new("parse-check", lines.join("\n"), json!({ "functions": funcs }))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors() {
        assert_eq!(run(["neutrocalc", "frobnicate"]).code, EXIT_USAGE);
        assert_eq!(run(["neutrocalc", "eval", "--fn", "f", "--at", "1"]).code, EXIT_USAGE);
        let help = run(["neutrocalc", "--help"]);
        assert_eq!(help.code, EXIT_OK);
        assert!(help.stdout.contains("mereo-limit"));
    }

    #[test]
    fn set_commands() {
        let m = run(["neutrocalc", "metric", "{3,4,5,7}", "{3,7}"]);
        assert_eq!((m.code, m.stdout.as_str()), (EXIT_OK, "0\n"));
        let n = run(["neutrocalc", "norm", "[-5,2)"]);
        assert_eq!(n.stdout, "5\n");
        assert_eq!(run(["neutrocalc", "norm", "[1,"]).code, EXIT_USAGE);
    }

    #[test]
    fn real_arguments() {
        assert_eq!(real("-3", "x").ok(), Some(-3.0));
        assert_eq!(real("1/4", "x").ok(), Some(0.25));
        assert!(real("[1,2]", "x").is_err());
    }
}
