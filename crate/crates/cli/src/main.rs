use std::fs;
use std::io::{self, Write};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mgstirling::distributions::{central_closed, raw_moments};
use mgstirling::identities::{run_battery, test_set};
use mgstirling::io::{matrix_strings, parse_chain, parse_distribution};
use mgstirling::moments::moment;
use mgstirling::msn::{msn_direct, MsnTable};
use mgstirling::msn1::{msn1, msn1_matrix, scaled_msn_matrix};
use mgstirling::scalar::{binom, binom_gen, factorial, pow, Scalar};
use mgstirling::series::{binomial_gf_value, egf_coeffs, ogf_coeffs};
use mgstirling::sim::{exact_moment, simulate, uniform_start, SimConfig, MAX_MOMENT};
use mgstirling::{format_rational, parse_rational, Error, Matrix, Method, Rational, Variable};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "mgstirling",
    version,
    about = "Moment-generating Stirling numbers and Markov passage-time moments"
)]
struct Cli {
    /// Output format; `csv` is accepted by `table` only.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Ogf,
    Egf,
    Bgf,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// b(i, j, k), the MSN of the second kind.
    Msn {
        i: usize,
        j: usize,
        #[arg(allow_hyphen_values = true, value_parser = rational_arg)]
        k: Rational,
    },
    /// c(i, j, k), the MSN of the first kind.
    Msn1 {
        i: usize,
        j: usize,
        #[arg(allow_hyphen_values = true, value_parser = rational_arg)]
        k: Rational,
    },
    /// Triangle b(i, j, k) for 0 <= j <= i <= i_max.
    Table {
        i_max: usize,
        #[arg(allow_hyphen_values = true, value_parser = rational_arg)]
        k: Rational,
    },
    /// Product of the scaled second-kind and first-kind matrices.
    Invcheck {
        i_max: usize,
        #[arg(allow_hyphen_values = true, value_parser = rational_arg)]
        k1: Rational,
        #[arg(allow_hyphen_values = true, value_parser = rational_arg)]
        k2: Rational,
    },
    /// Compare generating function coefficients with the MSN table.
    GfCheck {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long, default_value_t = 6)]
        jmax: usize,
        /// Comma-separated rationals; defaults to the standard test set.
        #[arg(long, allow_hyphen_values = true, value_parser = rational_list)]
        kset: Option<RationalList>,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Run the full identity battery.
    IdentitySuite {
        #[arg(long, default_value_t = 12)]
        imax: usize,
    },
    /// Moment matrix of a passage or recurrence time.
    Markov {
        #[arg(long)]
        chain: String,
        #[arg(long, value_parser = variable_arg)]
        var: Variable,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = method_arg, default_value = "convolved")]
        method: Method,
    },
    /// Raw or central moments of a distribution, m = 0..M.
    Dist {
        /// Distribution JSON, or a path to a file holding it.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        central: bool,
    },
    /// Monte Carlo estimates of moments 1..4 against exact values.
    Simulate {
        #[arg(long)]
        chain: String,
        #[arg(long, value_parser = variable_arg)]
        var: Variable,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated start distribution; uniform when omitted.
        #[arg(long, value_parser = rational_list)]
        start: Option<RationalList>,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: usize,
    },
}

#[derive(Clone)]
struct RationalList(Vec<Rational>);

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn rational_list(s: &str) -> Result<RationalList, String> {
    s.split(',')
        .map(|t| rational_arg(t.trim()))
        .collect::<Result<_, _>>()
        .map(RationalList)
}

fn variable_arg(s: &str) -> Result<Variable, String> {
    s.parse::<Variable>().map_err(|e| e.to_string())
}

fn method_arg(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Precondition(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_precondition() {
            Failure::Precondition(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

struct Output {
    inputs: Value,
    result: Value,
    text: String,
    /// False when a check ran to completion and found a mismatch.
    verdict: bool,
}

fn fr(r: &Rational) -> String {
    format_rational(r)
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(fr).collect()
}

fn matrix_text(m: &Matrix<Rational>) -> String {
    matrix_strings(m)
        .iter()
        .map(|r| r.join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn read_arg(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn table(i_max: usize, k: &Rational, format: Format) -> Output {
    let t = MsnTable::new(i_max, k.clone());
    let rows: Vec<Vec<String>> = t.rows().iter().map(|r| strings(r)).collect();
    let text = if format == Format::Csv {
        let mut lines = vec!["i,j,value".to_string()];
        for (i, r) in rows.iter().enumerate() {
            lines.extend(r.iter().enumerate().map(|(j, v)| format!("{i},{j},{v}")));
        }
        lines.join("\n")
    } else {
        rows.iter()
            .map(|r| r.join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    };
    Output {
        inputs: json!({"i_max": i_max, "k": fr(k)}),
        result: json!(rows),
        text,
        verdict: true,
    }
}

fn invcheck(i_max: usize, k1: &Rational, k2: &Rational) -> Result<Output, Failure> {
    let product = &scaled_msn_matrix(i_max, k1) * &msn1_matrix(i_max, k2);
    let d = k1.clone() - k2.clone();
    let mut expected = Matrix::zeros(i_max + 1, i_max + 1);
    for i in 0..=i_max {
        for j in 0..=i {
            expected[(i, j)] = Rational::from_bigint(&binom(i as i64, j as i64)) * pow(&d, i - j);
        }
    }
    let ok = product == expected;
    Ok(Output {
        inputs: json!({"i_max": i_max, "k1": fr(k1), "k2": fr(k2)}),
        result: json!({"product": matrix_strings(&product), "pass": ok}),
        text: format!("{}\n{}", matrix_text(&product), verdict(ok)),
        verdict: ok,
    })
}

struct GfRow {
    name: &'static str,
    k: Rational,
    cases: usize,
    failures: usize,
}

fn gf_check(which: Which, jmax: usize, kset: &[Rational], order: usize) -> Result<Output, Failure> {
    let mut rows = Vec::new();
    let run_ogf = matches!(which, Which::Ogf | Which::All);
    let run_egf = matches!(which, Which::Egf | Which::All);
    let run_bgf = matches!(which, Which::Bgf | Which::All);
    if which == Which::Egf && kset.iter().all(|k| k.to_bigint_exact().is_none()) {
        return Err(Failure::Precondition(
            "the exponential generating function needs at least one integer k".into(),
        ));
    }
    for k in kset {
        let t = MsnTable::new(order.max(jmax), k.clone());
        if run_ogf {
            let mut row = GfRow {
                name: "ordinary",
                k: k.clone(),
                cases: 0,
                failures: 0,
            };
            for j in 0..=jmax {
                let s = ogf_coeffs(j, k, order);
                for i in 0..=order {
                    row.cases += 1;
                    row.failures += usize::from(s.coeff(i) != t.get(i, j));
                }
            }
            rows.push(row);
        }
        if run_egf && k.to_bigint_exact().is_some() {
            let mut row = GfRow {
                name: "exponential",
                k: k.clone(),
                cases: 0,
                failures: 0,
            };
            for j in 0..=jmax {
                let s = egf_coeffs(j, k, order)?;
                for i in 0..=order {
                    let scaled = s.coeff(i) * Rational::from_bigint(&factorial(i));
                    row.cases += 1;
                    row.failures += usize::from(scaled != t.get(i, j));
                }
            }
            rows.push(row);
        }
        if run_bgf {
            let mut row = GfRow {
                name: "binomial",
                k: k.clone(),
                cases: 0,
                failures: 0,
            };
            let points =
                ["1/2", "1", "2", "-2/5", "7"].map(|p| parse_rational(p).expect("literal"));
            for x in &points {
                for i in 0..=order {
                    let sum = (0..=i).fold(Rational::from_i64(0), |acc, j| {
                        acc + t.get(i, j) * binom_gen(x, j)
                    });
                    let closed = pow(&(x.clone() + k.clone()), i);
                    row.cases += 1;
                    row.failures +=
                        usize::from(sum != closed || binomial_gf_value(i, k, x) != closed);
                }
            }
            rows.push(row);
        }
    }
    let ok = rows.iter().all(|r| r.failures == 0);
    let text = rows
        .iter()
        .map(|r| {
            format!(
                "{}  {:<12} k={:<6} cases={}",
                verdict(r.failures == 0),
                r.name,
                fr(&r.k),
                r.cases
            )
        })
        .chain(std::iter::once(if ok {
            "ALL PASS".to_string()
        } else {
            "FAILURES".to_string()
        }))
        .collect::<Vec<_>>()
        .join("\n");
    let result: Vec<Value> = rows
        .iter()
        .map(|r| json!({"gf": r.name, "k": fr(&r.k), "cases": r.cases, "failures": r.failures, "pass": r.failures == 0}))
        .collect();
    let which_label = match which {
        Which::Ogf => "ogf",
        Which::Egf => "egf",
        Which::Bgf => "bgf",
        Which::All => "all",
    };
    Ok(Output {
        inputs: json!({"which": which_label, "jmax": jmax, "kset": strings(kset), "order": order}),
        result: json!(result),
        text,
        verdict: ok,
    })
}

fn identity_suite(imax: usize) -> Output {
    let results = run_battery(imax);
    let failed = results.iter().filter(|r| !r.passed()).count();
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut lines: Vec<String> = results
        .iter()
        .map(|r| {
            let mut line = format!(
                "{}  {:<width$}  {:>7}  {}",
                verdict(r.passed()),
                r.name,
                r.cases,
                r.formula
            );
            if let Some(f) = &r.first_failure {
                line.push_str(&format!("  [first failure: {f}]"));
            }
            line
        })
        .collect();
    lines.push(if failed == 0 {
        "ALL PASS".to_string()
    } else {
        format!("{failed} FAILED")
    });
    let result: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "formula": r.formula,
                "cases": r.cases,
                "failures": r.failures,
                "pass": r.passed(),
                "first_failure": r.first_failure,
            })
        })
        .collect();
    Output {
        inputs: json!({"imax": imax}),
        result: json!({"identities": result, "all_pass": failed == 0}),
        text: lines.join("\n"),
        verdict: failed == 0,
    }
}

fn markov(
    chain: &str,
    var: Variable,
    k: usize,
    m: usize,
    method: Method,
) -> Result<Output, Failure> {
    let c = parse_chain(&read_arg(chain)?)?;
    let r = moment(&c, var, k, m, method)?;
    Ok(Output {
        inputs: json!({"chain": chain, "var": var.label(), "k": k, "m": m, "method": method.label()}),
        result: json!(matrix_strings(&r.value)),
        text: matrix_text(&r.value),
        verdict: true,
    })
}

fn dist(spec: &str, m: usize, central: bool) -> Result<Output, Failure> {
    let d = parse_distribution(&read_arg(spec)?)?;
    let values = if central {
        (0..=m)
            .map(|i| central_closed(&d, i))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        raw_moments(&d, m)?
    };
    let text = values
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{i} {}", fr(v)))
        .collect::<Vec<_>>()
        .join("\n");
    let spec_value: Value = serde_json::from_str(&read_arg(spec)?).unwrap_or(Value::Null);
    Ok(Output {
        inputs: json!({"spec": spec_value, "m": m, "central": central}),
        result: json!(strings(&values)),
        text,
        verdict: true,
    })
}

#[allow(clippy::too_many_arguments)]
fn simulate_cmd(
    chain: &str,
    var: Variable,
    k: usize,
    reps: usize,
    seed: u64,
    start: Option<&[Rational]>,
    max_steps: usize,
) -> Result<Output, Failure> {
    let c = parse_chain(&read_arg(chain)?)?;
    let start = start
        .map(<[Rational]>::to_vec)
        .unwrap_or_else(|| uniform_start(&c, var));
    let cfg = SimConfig {
        chain: c,
        start: start.clone(),
        variable: var,
        k,
        replications: reps,
        seed,
        max_steps,
    };
    let report = simulate(&cfg)?;
    let mut rows = Vec::new();
    let mut lines = vec![format!(
        "replications={} completed={} truncated={}",
        report.replications, report.completed, report.truncated
    )];
    for e in &report.estimates {
        let exact = exact_moment(&cfg, e.m)?;
        let z = if e.std_error > 0.0 {
            (e.mean - exact.to_f64()) / e.std_error
        } else {
            0.0
        };
        lines.push(format!(
            "m={} estimate={:.6} se={:.6} exact={} z={:.3}",
            e.m,
            e.mean,
            e.std_error,
            fr(&exact),
            z
        ));
        rows.push(json!({"m": e.m, "estimate": e.mean, "std_error": e.std_error, "exact": fr(&exact), "z": z}));
    }
    debug_assert_eq!(rows.len(), MAX_MOMENT);
    Ok(Output {
        inputs: json!({
            "chain": chain, "var": var.label(), "k": k, "reps": reps, "seed": seed,
            "start": strings(&start), "max_steps": max_steps,
        }),
        result: json!({
            "replications": report.replications,
            "completed": report.completed,
            "truncated": report.truncated,
            "moments": rows,
        }),
        text: lines.join("\n"),
        verdict: true,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Msn { .. } => "msn",
        Command::Msn1 { .. } => "msn1",
        Command::Table { .. } => "table",
        Command::Invcheck { .. } => "invcheck",
        Command::GfCheck { .. } => "gf-check",
        Command::IdentitySuite { .. } => "identity-suite",
        Command::Markov { .. } => "markov",
        Command::Dist { .. } => "dist",
        Command::Simulate { .. } => "simulate",
    }
}

fn dispatch(cmd: &Command, format: Format) -> Result<Output, Failure> {
    if format == Format::Csv && !matches!(cmd, Command::Table { .. }) {
        return Err(Failure::Usage(
            "--format csv is only supported by table".into(),
        ));
    }
    match cmd {
        Command::Msn { i, j, k } => {
            let v = msn_direct(*i, *j, k);
            Ok(Output {
                inputs: json!({"i": i, "j": j, "k": fr(k)}),
                result: json!(fr(&v)),
                text: fr(&v),
                verdict: true,
            })
        }
        Command::Msn1 { i, j, k } => {
            let v = msn1(*i, *j, k);
            Ok(Output {
                inputs: json!({"i": i, "j": j, "k": fr(k)}),
                result: json!(fr(&v)),
                text: fr(&v),
                verdict: true,
            })
        }
        Command::Table { i_max, k } => Ok(table(*i_max, k, format)),
        Command::Invcheck { i_max, k1, k2 } => invcheck(*i_max, k1, k2),
        Command::GfCheck {
            which,
            jmax,
            kset,
            order,
        } => {
            let ks = kset.as_ref().map(|l| l.0.clone()).unwrap_or_else(test_set);
            gf_check(*which, *jmax, &ks, *order)
        }
        Command::IdentitySuite { imax } => Ok(identity_suite(*imax)),
        Command::Markov {
            chain,
            var,
            k,
            m,
            method,
        } => markov(chain, *var, *k, *m, *method),
        Command::Dist { spec, m, central } => dist(spec, *m, *central),
        Command::Simulate {
            chain,
            var,
            k,
            reps,
            seed,
            start,
            max_steps,
        } => simulate_cmd(
            chain,
            *var,
            *k,
            *reps,
            *seed,
            start.as_ref().map(|l| l.0.as_slice()),
            *max_steps,
        ),
    }
}

/// Writes a line to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| dispatch(&cli.command, cli.format)))
        .unwrap_or_else(|e| {
            let message = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal error".into());
            Err(Failure::Internal(message))
        });
    let json_out = cli.format == Format::Json;
    match outcome {
        Ok(out) => {
            let status = if out.verdict { "ok" } else { "error" };
            if json_out {
                let envelope = json!({
                    "command": name,
                    "inputs": out.inputs,
                    "result": out.result,
                    "status": status,
                    "message": if out.verdict { Value::Null } else { json!("check failed") },
                });
                emit(&serde_json::to_string_pretty(&envelope).expect("json"));
            } else {
                emit(&out.text);
            }
            if out.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            let (status, code, message) = match f {
                Failure::Usage(m) => ("error", 2, m),
                Failure::Precondition(m) => ("precondition-failed", 3, m),
                Failure::Internal(m) => ("error", 1, m),
            };
            if json_out {
                let envelope = json!({
                    "command": name,
                    "inputs": Value::Null,
                    "result": Value::Null,
                    "status": status,
                    "message": message,
                });
                emit(&serde_json::to_string_pretty(&envelope).expect("json"));
            } else {
                eprintln!("mgstirling {name}: {message}");
            }
            ExitCode::from(code)
        }
    }
}
