use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use engelcf::batch::{verify_batch_with_jobs, CaseReport, VerifyCase};
use engelcf::{
    cf_even_normalize, cf_expand, digits_of_sum, irr_exponents, parse_zspec, predicted_cf, Cf,
    EngelState, Error, Rational, SeedConfig, DEFAULT_DIGIT_BUDGET,
};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "engelcf",
    version,
    about = "Engel-type series and their interlaced continued fractions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print one JSON record instead of text lines.
    #[arg(long, global = true)]
    json: bool,

    /// Refuse to build any term longer than this many decimal digits.
    #[arg(long, global = true, value_name = "DIGITS", default_value_t = DEFAULT_DIGIT_BUDGET)]
    max_digits: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical and even-normalized continued fractions of the seed.
    Expand {
        /// Seed as P/Q or P.
        #[arg(long, allow_hyphen_values = true)]
        pq: String,
    },
    /// Table of n, z_n, y_(n-1), x_n.
    Generate(RunArgs),
    /// Check every identity for n = 1..N. Repeat --pq/--z to verify a batch.
    Verify(VerifyArgs),
    /// Certified leading digits of the infinite sum.
    Digits(DigitsArgs),
    /// Predicted continued fraction of S_N, one coefficient per line.
    Cfseries(RunArgs),
    /// Empirical approximation exponents of the partial sums.
    Kappa(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Seed as P/Q or P.
    #[arg(long, allow_hyphen_values = true)]
    pq: String,
    /// z-rule over n and x, e.g. "n", "x^2+1".
    #[arg(long)]
    z: String,
    /// Number of terms N.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    terms: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required = true, allow_hyphen_values = true)]
    pq: Vec<String>,
    /// One rule for every seed, or one per seed.
    #[arg(long, required = true)]
    z: Vec<String>,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    terms: u64,
    /// Worker threads for a batch.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct DigitsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pq: String,
    #[arg(long)]
    z: String,
    /// Fractional digits to certify.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    digits: u64,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => 2,
            Error::NonPositiveZ { .. } => 3,
            Error::DigitBudgetExceeded { .. } => 4,
            Error::InsufficientTerms { .. } => 5,
            Error::InvalidCf(_) | Error::IndexOutOfRange { .. } => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// What a command produced: text lines, JSON fields, and whether every check passed.
#[derive(Default)]
struct Output {
    lines: Vec<String>,
    fields: Map<String, Value>,
    violated: bool,
}

impl Output {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.to_string(), value);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut out = Output::default();
    let result = run(&cli, &mut out);
    let elapsed = start.elapsed();

    let (code, error) = match result {
        Ok(()) if out.violated => (1, Some("identity violation".to_string())),
        Ok(()) => (0, None),
        Err(f) => (f.code, Some(f.message)),
    };

    if cli.json {
        let mut record = Map::new();
        record.insert("command".into(), json!(command_name(&cli.command)));
        record.insert("config".into(), config_echo(&cli));
        record.extend(out.fields);
        record.insert("timing_ms".into(), json!(elapsed.as_secs_f64() * 1000.0));
        record.insert("exit_code".into(), json!(code));
        record.insert("error".into(), json!(error));
        println!("{}", Value::Object(record));
    } else {
        for l in &out.lines {
            println!("{l}");
        }
        if let Some(msg) = error {
            eprintln!("error: {msg}");
        }
    }
    ExitCode::from(code)
}

fn run(cli: &Cli, out: &mut Output) -> Result<(), Failure> {
    let budget = cli.max_digits;
    match &cli.command {
        Command::Expand { pq } => cmd_expand(&parse_seed(pq)?, out),
        Command::Generate(a) => cmd_generate(&generate(a, budget)?, out),
        Command::Verify(a) => cmd_verify(a, budget, out),
        Command::Digits(a) => {
            cmd_digits(parse_config(&a.pq, &a.z)?, a.digits as usize, budget, out)
        }
        Command::Cfseries(a) => cmd_cfseries(&generate(a, budget)?, out),
        Command::Kappa(a) => cmd_kappa(a, budget, out),
    }
}

fn cmd_expand(seed: &Rational, out: &mut Output) -> Result<(), Failure> {
    let canonical = cf_expand(seed);
    let even = cf_even_normalize(&canonical);
    out.line(format!("canonical {canonical}"));
    out.line(format!("even {even}"));
    out.set(
        "cf",
        json!({ "canonical": coeffs(&canonical), "even": coeffs(&even) }),
    );
    Ok(())
}

fn cmd_generate(state: &EngelState, out: &mut Output) -> Result<(), Failure> {
    out.line("n z_n y_(n-1) x_n");
    for n in 1..=state.len() {
        let z = state.z(n).map_or("-".to_string(), |z| z.to_string());
        let y = state.y(n - 1).expect("n - 1 < len");
        let x = state.x(n).expect("n <= len");
        out.line(format!("{n} {z} {y} {x}"));
    }
    out.set("sequences", sequences(state));
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, budget: u64, out: &mut Output) -> Result<(), Failure> {
    let rules: Vec<&String> = match (a.pq.len(), a.z.len()) {
        (_, 1) => vec![&a.z[0]; a.pq.len()],
        (p, z) if p == z => a.z.iter().collect(),
        (p, z) => {
            return Err(Failure {
                code: 2,
                message: format!("{p} seeds but {z} rules: give one rule, or one per seed"),
            })
        }
    };
    let cases =
        a.pq.iter()
            .zip(&rules)
            .map(|(pq, z)| {
                Ok(VerifyCase {
                    config: parse_config(pq, z)?,
                    terms: a.terms as usize,
                })
            })
            .collect::<Result<Vec<_>, Failure>>()?;

    let batch = cases.len() > 1;
    let mut records = Vec::new();
    let mut first_error = None;
    for ((case, pq), result) in cases
        .iter()
        .zip(&a.pq)
        .zip(verify_batch_with_jobs(&cases, budget, a.jobs))
    {
        let label = format!("{pq} {}", case.config.zrule);
        if batch {
            out.line(format!("case {label}"));
        }
        match result {
            Ok(report) => {
                out.violated |= !report.passed();
                let checks = report_lines(&report, out);
                records.push(json!({ "pq": pq, "z": case.config.zrule.to_string(), "checks": checks, "passed": report.passed() }));
            }
            Err(e) => {
                if batch {
                    out.line(format!("error {e}"));
                }
                records.push(
                    json!({ "pq": pq, "z": case.config.zrule.to_string(), "error": e.to_string() }),
                );
                first_error.get_or_insert(e);
            }
        }
    }

    if batch {
        out.set("cases", Value::Array(records));
    } else if let Some(Value::Object(mut only)) = records.pop() {
        if let Some(checks) = only.remove("checks") {
            out.set("checks", checks);
        }
    }
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn report_lines(report: &CaseReport, out: &mut Output) -> Map<String, Value> {
    let mut checks = Map::new();
    let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
    for t in &report.theorem {
        let name = format!("theorem n={}", t.n);
        match t.first_failure() {
            None => out.line(format!("{name} pass")),
            Some(v) => out.line(format!("{name} FAIL {v}")),
        }
        checks.insert(name, json!(t.passed()));
    }
    let recurrence = report.recurrence.is_none();
    match report.recurrence {
        None => out.line("recurrence pass"),
        Some(n) => out.line(format!("recurrence FAIL at n={n}")),
    }
    checks.insert("recurrence".into(), json!(recurrence));
    for &(n, ok) in &report.growth {
        let name = format!("growth n={n}");
        out.line(format!("{name} {}", verdict(ok)));
        checks.insert(name, json!(ok));
    }
    out.line(format!("determinant {}", verdict(report.base_determinant)));
    checks.insert("determinant".into(), json!(report.base_determinant));
    checks
}

fn cmd_digits(cfg: SeedConfig, d: usize, budget: u64, out: &mut Output) -> Result<(), Failure> {
    let certified = digits_of_sum(cfg, d, budget)?;
    out.line(certified.decimal.to_string());
    out.line(format!("n {}", certified.n));
    out.line(format!("tail_exponent {}", certified.tail_exponent));
    out.set(
        "digits",
        json!({
            "value": certified.decimal.to_string(),
            "n": certified.n,
            "tail_exponent": certified.tail_exponent,
        }),
    );
    Ok(())
}

fn cmd_cfseries(state: &EngelState, out: &mut Output) -> Result<(), Failure> {
    let predicted = predicted_cf(state, state.len())?;
    for (i, a) in predicted.cf.coeffs().iter().enumerate() {
        out.line(format!("a_{i} {a}"));
    }
    out.set("sequences", sequences(state));
    out.set("cf", json!(coeffs(&predicted.cf)));
    Ok(())
}

fn cmd_kappa(a: &RunArgs, budget: u64, out: &mut Output) -> Result<(), Failure> {
    if a.terms < 5 {
        return Err(Error::InsufficientTerms {
            required: 5,
            available: a.terms as usize,
        }
        .into());
    }
    let state = generate(a, budget)?;
    let rows = irr_exponents(&state, state.len())?;
    out.line("n q_digits kappa");
    let mut table = Vec::new();
    for r in &rows {
        out.line(format!("{} {} {}", r.n, r.q_digits, r.kappa_display()));
        table.push(json!({ "n": r.n, "q_digits": r.q_digits, "kappa": r.kappa_display() }));
    }
    out.set("sequences", sequences(&state));
    out.set("kappa", Value::Array(table));
    Ok(())
}

fn parse_seed(pq: &str) -> Result<Rational, Failure> {
    pq.parse().map_err(|e| Failure {
        code: 2,
        message: format!("invalid --pq {pq:?}: {e}"),
    })
}

fn parse_config(pq: &str, z: &str) -> Result<SeedConfig, Failure> {
    let seed = parse_seed(pq)?;
    let rule = parse_zspec(z).map_err(|e| Failure {
        code: 2,
        message: format!("invalid --z {z:?}: {e}"),
    })?;
    Ok(SeedConfig::new(seed, rule))
}

fn generate(a: &RunArgs, budget: u64) -> Result<EngelState, Failure> {
    let cfg = parse_config(&a.pq, &a.z)?;
    Ok(EngelState::generate(cfg, a.terms as usize, budget)?)
}

fn coeffs(cf: &Cf) -> Vec<String> {
    cf.coeffs().iter().map(ToString::to_string).collect()
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn sequences(state: &EngelState) -> Value {
    let mut ys = vec![state.y0().to_string()];
    ys.extend(strings(state.ys()));
    json!({ "x": strings(state.xs()), "y": ys, "z": strings(state.zs()) })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Expand { .. } => "expand",
        Command::Generate(_) => "generate",
        Command::Verify(_) => "verify",
        Command::Digits(_) => "digits",
        Command::Cfseries(_) => "cfseries",
        Command::Kappa(_) => "kappa",
    }
}

fn config_echo(cli: &Cli) -> Value {
    let mut c = json!({ "max_digits": cli.max_digits });
    let extra = match &cli.command {
        Command::Expand { pq } => json!({ "pq": pq }),
        Command::Generate(a) | Command::Cfseries(a) | Command::Kappa(a) => {
            json!({ "pq": a.pq, "z": a.z, "terms": a.terms })
        }
        Command::Verify(a) => json!({ "pq": a.pq, "z": a.z, "terms": a.terms, "jobs": a.jobs }),
        Command::Digits(a) => json!({ "pq": a.pq, "z": a.z, "digits": a.digits }),
    };
    if let (Value::Object(c), Value::Object(extra)) = (&mut c, extra) {
        c.extend(extra);
    }
    c
}
