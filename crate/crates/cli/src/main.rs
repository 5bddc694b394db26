//! `cubiccount`: solution counts of diagonal cubic equations over finite fields.
//!
//! Every invocation prints one record on stdout (JSON by default, CSV with
//! `--format csv`). Exit codes: 0 success, 1 verification mismatch, 2 invalid input.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use cubiccount_core::characters::{
    character_for, cubic_period_check, gauss_cube_residual, hasse_davenport_check, jacobi_chichi,
    weighted_cube_check,
};
use cubiccount_core::closed_forms::{
    count_a, count_b, count_m, count_n, series_a, series_b, CountResult, FaultInjection,
};
use cubiccount_core::field::format_coeffs;
use cubiccount_core::oracle::{brute_a, brute_b, brute_m, brute_n, EnumerationBudget};
use cubiccount_core::verify::{sweep, SweepConfig};
use cubiccount_core::{solve_cd, CdPair, EisensteinInteger, Error, FieldConfig, FieldElement};

#[derive(Parser, Debug)]
#[command(name = "cubiccount", version, about = "Count solutions of diagonal cubic equations over F_q")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Formula {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "M")]
    M,
    #[value(name = "N")]
    N,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Monic irreducible modulus, constant term first (e.g. `1,0,1` for u²+1).
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe the field F_{p^k}.
    Field(FieldArgs),
    /// Solve 4q = c² + 27d² with the sign of d fixed by z.
    Cd {
        #[command(flatten)]
        field: FieldArgs,
        /// Element, coefficients constant term first.
        #[arg(long)]
        z: String,
    },
    /// Count solutions with a closed form.
    Count {
        #[arg(long, value_enum)]
        formula: Formula,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        a1: Option<String>,
        #[arg(long)]
        a2: Option<String>,
        #[arg(long)]
        a3: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Also enumerate by brute force; exit 1 on mismatch.
        #[arg(long)]
        check: bool,
        /// Largest q^{#variables} the brute-force check may visit.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Coefficients of the generating function of A_n(z) or B_n(z).
    Series {
        #[arg(long, value_enum)]
        formula: Formula,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        z: String,
        /// Last term to print.
        #[arg(long)]
        terms: usize,
        /// First term to print (defaults to 1 for A, 0 for B).
        #[arg(long)]
        start: Option<usize>,
    },
    /// Compare every closed form with brute force on all fields q ≤ max-q, q ≡ 1 (mod 3).
    Verify {
        #[arg(long, default_value_t = 64)]
        max_q: u64,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 50)]
        triples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add this to c in every closed form (harness self-test).
        #[arg(long, default_value_t = 0, hide = true, allow_hyphen_values = true)]
        inject_c_offset: i64,
    },
    /// Gauss and Jacobi sums for the class of a non-cubic z.
    Sums {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        z: String,
    },
}

/// Failure modes of a command, mapped onto exit codes.
enum Failure {
    Invalid(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

struct Output {
    field: Option<Value>,
    inputs: Value,
    result: Value,
    /// Set when the record was produced but a check inside it failed.
    mismatch: Option<String>,
    table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

impl Output {
    fn new(field: Option<Value>, inputs: Value, result: Value) -> Self {
        Self { field, inputs, result, mismatch: None, table: None }
    }
}

const MAX_SAFE_INT: u64 = (1 << 53) - 1;

fn uint(v: u64) -> Value {
    if v <= MAX_SAFE_INT {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

fn int(v: i64) -> Value {
    if v.unsigned_abs() <= MAX_SAFE_INT {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

fn big(v: &BigUint) -> Value {
    json!(v.to_string())
}

fn build_field(args: &FieldArgs) -> Result<FieldConfig, Failure> {
    Ok(match &args.modulus {
        Some(m) => FieldConfig::with_modulus(args.p, args.k, cubiccount_core::field::parse_coeffs(m)?)?,
        None => FieldConfig::new(args.p, args.k)?,
    })
}

fn field_json(ctx: &FieldConfig) -> Value {
    json!({
        "p": uint(ctx.p()),
        "k": ctx.k(),
        "q": uint(ctx.q()),
        "modulus": format_coeffs(ctx.modulus()),
    })
}

fn element(ctx: &FieldConfig, flag: &str, text: Option<&String>) -> Result<FieldElement, Failure> {
    let text = text.ok_or_else(|| Failure::Invalid(format!("--{flag} is required")))?;
    Ok(ctx.parse_element(text)?)
}

fn cd_json(cd: &CdPair) -> Value {
    json!({
        "c": int(cd.c),
        "d": cd.d.map(int),
        "d_abs": uint(cd.d_abs),
        "branch": cd.branch.to_string(),
    })
}

fn eisenstein_json(e: &EisensteinInteger) -> Value {
    json!({ "a": int(e.a), "b": int(e.b), "text": e.to_string() })
}

fn count_json(r: &CountResult) -> Value {
    json!({
        "count": big(&r.count),
        "branch": r.branch.as_str(),
        "cd": r.cd.as_ref().map(cd_json),
    })
}

fn cmd_field(args: &FieldArgs) -> Result<Output, Failure> {
    let ctx = build_field(args)?;
    let result = json!({
        "q_mod_3": ctx.q() % 3,
        "p_mod_3": ctx.p() % 3,
    });
    Ok(Output::new(Some(field_json(&ctx)), json!({}), result))
}

fn cmd_cd(args: &FieldArgs, z: &str) -> Result<Output, Failure> {
    let ctx = build_field(args)?;
    let zel = ctx.parse_element(z)?;
    let cd = solve_cd(&ctx, &zel)?;
    let class = ctx.cube_class(&zel)?;
    let mut result = cd_json(&cd);
    if cd.d.is_none() {
        result["d_status"] = json!("undefined (z cubic)");
    }
    result["cube_class"] = json!({
        "value": class.value.map(uint),
        "power": class.power.to_string(),
        "class": class.class_tag.to_string(),
    });
    Ok(Output::new(Some(field_json(&ctx)), json!({ "z": zel.to_string() }), result))
}

#[allow(clippy::too_many_arguments)]
fn cmd_count(
    formula: Formula,
    args: &FieldArgs,
    z: Option<&String>,
    a: [Option<&String>; 3],
    n: Option<usize>,
    check: bool,
    budget: u64,
) -> Result<Output, Failure> {
    let ctx = build_field(args)?;
    let budget = EnumerationBudget { max_points: budget };
    let need_n = || n.ok_or_else(|| Failure::Invalid("--n is required".into()));
    let (inputs, result, oracle) = match formula {
        Formula::A | Formula::B => {
            let zel = element(&ctx, "z", z)?;
            let n = need_n()?;
            let inputs = json!({ "z": zel.to_string(), "n": n });
            if formula == Formula::A {
                let r = count_a(&ctx, &zel, n)?;
                let oracle = check.then(|| brute_a(&ctx, &zel, n, budget)).transpose()?;
                (inputs, r, oracle)
            } else {
                let r = count_b(&ctx, &zel, n)?;
                let oracle = check.then(|| brute_b(&ctx, &zel, n, budget)).transpose()?;
                (inputs, r, oracle)
            }
        }
        Formula::M | Formula::N => {
            let a1 = element(&ctx, "a1", a[0])?;
            let a2 = element(&ctx, "a2", a[1])?;
            let a3 = element(&ctx, "a3", a[2])?;
            let inputs = json!({ "a1": a1.to_string(), "a2": a2.to_string(), "a3": a3.to_string() });
            if formula == Formula::M {
                let r = count_m(&ctx, &a1, &a2, &a3)?;
                let oracle = check.then(|| brute_m(&ctx, &a1, &a2, &a3, budget)).transpose()?;
                (inputs, r, oracle)
            } else {
                let r = count_n(&ctx, &a1, &a2, &a3)?;
                let oracle = check.then(|| brute_n(&ctx, &a1, &a2, &a3, budget)).transpose()?;
                (inputs, r, oracle)
            }
        }
    };
    let mut payload = count_json(&result);
    let mut mismatch = None;
    if let Some(o) = oracle {
        let matched = result.count == BigUint::from(o);
        payload["oracle"] = json!(o.to_string());
        payload["match"] = json!(matched);
        if !matched {
            mismatch = Some(format!("formula {} but brute force {o}", result.count));
        }
    }
    let mut out = Output::new(Some(field_json(&ctx)), inputs, payload);
    out.mismatch = mismatch;
    Ok(out)
}

fn cmd_series(
    formula: Formula,
    args: &FieldArgs,
    z: &str,
    terms: usize,
    start: Option<usize>,
) -> Result<Output, Failure> {
    let ctx = build_field(args)?;
    let zel = ctx.parse_element(z)?;
    let series = match formula {
        Formula::A => series_a(&ctx, &zel)?,
        Formula::B => series_b(&ctx, &zel)?,
        _ => return Err(Failure::Invalid("series supports --formula A or B".into())),
    };
    let first = series.first_term();
    let start = start.unwrap_or(first);
    if start < first || start > terms {
        return Err(Failure::Invalid(format!("need {first} <= start <= terms, got start {start}")));
    }
    let values = series.terms(terms)?;
    let branch = series.branch.as_str();
    let rows: Vec<(usize, &BigUint)> = (first..=terms).zip(&values).filter(|(n, _)| *n >= start).collect();
    let numerator: Vec<String> =
        series.correction().numerator_twice().iter().map(|v| v.to_string()).collect();
    let (r2, r3) = series.correction().recurrence();
    let result = json!({
        "branch": branch,
        "cd": series.cd.as_ref().map(cd_json),
        "numerator_twice": numerator,
        "recurrence": [r2.to_string(), r3.to_string()],
        "terms": rows.iter().map(|(n, v)| json!({ "n": n, "count": big(v) })).collect::<Vec<_>>(),
    });
    let inputs = json!({
        "formula": format!("{formula:?}"),
        "z": zel.to_string(),
        "start": start,
        "terms": terms,
    });
    let mut out = Output::new(Some(field_json(&ctx)), inputs, result);
    out.table = Some((
        vec!["n", "count", "branch"],
        rows.iter().map(|(n, v)| vec![n.to_string(), v.to_string(), branch.to_string()]).collect(),
    ));
    Ok(out)
}

fn cmd_verify(cfg: SweepConfig) -> Result<Output, Failure> {
    let reports = sweep(&cfg)?;
    let total_checks: usize = reports.iter().map(|r| r.checks).sum();
    let failures: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failures.iter().map(move |f| format!("{}: {f}", r.describe_field())))
        .collect();
    let fields: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "p": uint(r.p),
                "k": r.k,
                "q": uint(r.q),
                "modulus": format_coeffs(&r.modulus),
                "checks": r.checks,
                "failures": r.failures.iter().map(|f| json!({
                    "check": f.check,
                    "inputs": f.inputs,
                    "formula": f.formula,
                    "reference": f.reference,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let inputs = json!({
        "max_q": uint(cfg.max_q),
        "n_max": cfg.n_max,
        "triples": cfg.triples,
        "seed": uint(cfg.seed),
        "inject_c_offset": int(cfg.fault.c_offset),
    });
    let result = json!({
        "fields_checked": reports.len(),
        "total_checks": total_checks,
        "total_failures": failures.len(),
        "passed": failures.is_empty(),
        "fields": fields,
    });
    let mut out = Output::new(None, inputs, result);
    if !failures.is_empty() {
        out.mismatch = Some(failures.join("\n"));
    }
    out.table = Some((
        vec!["p", "k", "q", "checks", "failures"],
        reports
            .iter()
            .map(|r| {
                vec![r.p.to_string(), r.k.to_string(), r.q.to_string(), r.checks.to_string(), r.failures.len().to_string()]
            })
            .collect(),
    ));
    Ok(out)
}

fn cmd_sums(args: &FieldArgs, z: &str) -> Result<Output, Failure> {
    let ctx = build_field(args)?;
    let zel = ctx.parse_element(z)?;
    let chi = character_for(&ctx, &zel)?;
    let periods = cubic_period_check(&ctx, &zel)?;
    let jac = jacobi_chichi(&ctx, &chi)?;
    let cd = solve_cd(&ctx, &zel)?;
    let predicted = EisensteinInteger::from_cd(cd.c, cd.signed_d()?)
        .ok_or_else(|| Failure::Mismatch("c + 3d is odd".into()))?;
    let weighted = weighted_cube_check(&ctx, &zel)?;
    let result = json!({
        "cd": cd_json(&cd),
        "cubic": period_cubic(ctx.q(), cd.c),
        "S": { "1": periods.s[0], "z": periods.s[1], "z2": periods.s[2] },
        "cubic_residuals": periods.residuals,
        "S_sum": periods.sum,
        "jacobi": eisenstein_json(&jac),
        "jacobi_predicted": eisenstein_json(&predicted),
        "jacobi_norm": jac.norm().to_string(),
        "gauss_cube_residual": gauss_cube_residual(&ctx, &chi)?,
        "hasse_davenport_residual": hasse_davenport_check(&ctx)?,
        "weighted_cube": { "lhs": weighted.lhs, "rhs": weighted.rhs.to_string(), "residual": weighted.residual() },
    });
    let mut out = Output::new(Some(field_json(&ctx)), json!({ "z": zel.to_string() }), result);
    if jac != predicted {
        out.mismatch = Some(format!("J(χ, χ) = {jac} but (c, d) predicts {predicted}"));
    }
    Ok(out)
}

fn period_cubic(q: u64, c: i64) -> String {
    let constant = q as i128 * c as i128;
    let sign = if constant < 0 { '+' } else { '-' };
    format!("x^3 - {}x {sign} {}", 3 * q as i128, constant.abs())
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), joined.join(";")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn render(format: Format, command: &[String], out: &Output, elapsed_ms: f64) -> String {
    match format {
        Format::Json => {
            let mut record = Map::new();
            record.insert("command".into(), json!(command));
            if let Some(f) = &out.field {
                record.insert("field".into(), f.clone());
            }
            record.insert("inputs".into(), out.inputs.clone());
            if let Some(branch) = out.result.get("branch") {
                record.insert("branch".into(), branch.clone());
            }
            record.insert("result".into(), out.result.clone());
            record.insert("elapsed_ms".into(), json!(elapsed_ms));
            serde_json::to_string_pretty(&Value::Object(record)).expect("serializable") + "\n"
        }
        Format::Csv => match &out.table {
            Some((header, rows)) => to_csv(header, rows.iter().cloned()),
            None => {
                let mut pairs = Vec::new();
                if let Some(f) = &out.field {
                    flatten("field", f, &mut pairs);
                }
                flatten("inputs", &out.inputs, &mut pairs);
                flatten("result", &out.result, &mut pairs);
                to_csv(&["key", "value"], pairs.into_iter().map(|(k, v)| vec![k, v]))
            }
        },
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("CUBICCOUNT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let command: Vec<String> = std::env::args().skip(1).collect();
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Field(args) => cmd_field(args),
        Command::Cd { field, z } => cmd_cd(field, z),
        Command::Count { formula, field, z, a1, a2, a3, n, check, budget } => cmd_count(
            *formula,
            field,
            z.as_ref(),
            [a1.as_ref(), a2.as_ref(), a3.as_ref()],
            *n,
            *check,
            *budget,
        ),
        Command::Series { formula, field, z, terms, start } => cmd_series(*formula, field, z, *terms, *start),
        Command::Verify { max_q, n_max, triples, seed, inject_c_offset } => cmd_verify(SweepConfig {
            max_q: *max_q,
            n_max: *n_max,
            triples: *triples,
            seed: *seed,
            fault: FaultInjection { c_offset: *inject_c_offset },
            budget: EnumerationBudget::default(),
        }),
        Command::Sums { field, z } => cmd_sums(field, z),
    };
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe downstream is not our failure
            let _ = write!(stdout, "{}", render(cli.format, &command, &out, elapsed_ms));
            match &out.mismatch {
                Some(msg) => {
                    eprintln!("mismatch:\n{msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_integers_become_strings() {
        assert_eq!(uint(MAX_SAFE_INT), json!(MAX_SAFE_INT));
        assert_eq!(uint(MAX_SAFE_INT + 1), json!("9007199254740992"));
        assert_eq!(int(-5), json!(-5));
        assert_eq!(int(i64::MIN), json!(i64::MIN.to_string()));
    }

    #[test]
    fn cubic_signs() {
        assert_eq!(period_cubic(7, 1), "x^3 - 21x - 7");
        assert_eq!(period_cubic(4, -4), "x^3 - 12x + 16");
    }

    #[test]
    fn flatten_nested() {
        let mut out = Vec::new();
        flatten("r", &json!({ "a": { "b": 1 }, "v": [1, 2], "n": null, "t": [{ "x": "y" }] }), &mut out);
        let expect = [("r.a.b", "1"), ("r.n", ""), ("r.t.0.x", "y"), ("r.v", "1;2")];
        assert_eq!(out, expect.map(|(k, v)| (k.to_string(), v.to_string())));
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(to_csv(&["k", "v"], [vec!["m".into(), "1,0,1".into()]]), "k,v\nm,\"1,0,1\"\n");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
