use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use lambda_ext::odes::{OdeFamily, OdeSpec};
use lambda_ext::param_poly::ParamPoly;
use lambda_ext::rational::{decimal_approx, fmt_rational, parse_rational, q, qi};
use lambda_ext::series::Series;
use lambda_ext::solver::{solve_family, SeedAnsatz, SolverError};
use lambda_ext::verify::arith::{gb_check, gb_fixed};
use lambda_ext::verify::lab::{family_def, Lab, VerifyError};
use lambda_ext::verify::registry::{
    all_checks, parse_manifest, resolve_series, run_check, run_suite, Resolved, SuiteReport, DEFAULT_SUITE,
};
use lambda_ext::verify::{CheckReport, GBReport, Status, SCHEMA_VERSION};
use lambda_ext::Rational;

#[derive(Parser)]
#[command(name = "lambda-ext", version, about = "Exact lambda-extension series, solver families and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Append k-digit decimal approximations (text output only).
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a closed form, printed reference or solver family.
    Series {
        id: String,
        #[arg(long, default_value_t = 10, value_parser = parse_order)]
        order: usize,
        /// Specialize the parameter: `VALUE` or `NAME=VALUE`.
        #[arg(long)]
        param: Option<String>,
    },
    /// Solve an ODE order by order from a seed.
    Solve {
        /// EQNMODD, NONLINEAREQ, FOURFACT or DIAG_PVI.
        ode: String,
        #[arg(long = "M")]
        m: Option<i64>,
        #[arg(long = "N")]
        n: i64,
        #[arg(long, default_value_t = 10, value_parser = parse_order)]
        order: usize,
        /// A family name whose seed to use, or `normalized` (the default).
        #[arg(long, default_value = "normalized")]
        seed: String,
    },
    /// Run one check.
    Check {
        id: String,
        #[arg(long, value_parser = parse_order)]
        order: Option<usize>,
    },
    /// Run a suite manifest (the full battery by default).
    Suite {
        /// Manifest file: one `check_id [order]` per line.
        manifest: Option<String>,
        /// List check ids, categories and default orders instead of running.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Integrality of a specialized family after `t -> N t`.
    Gb {
        id: String,
        #[arg(long)]
        param: String,
        #[arg(long, default_value_t = 25, value_parser = parse_order)]
        order: usize,
        /// Check this rescale factor instead of searching.
        #[arg(long)]
        rescale: Option<u64>,
        /// Largest factor the search may return.
        #[arg(long, default_value_t = 1 << 20)]
        max_rescale: u64,
    },
}

fn parse_order(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("order must be an integer >= 1, got {s:?}")),
    }
}

enum Failure {
    Unknown(String),
    Computation(String),
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Failure {
        if e.is_unknown_id() {
            Failure::Unknown(e.to_string())
        } else {
            Failure::Computation(e.to_string())
        }
    }
}

fn rational_arg(s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure::Computation(format!("bad rational {s:?}: {e}")))
}

fn approx_poly(p: &ParamPoly, k: usize) -> String {
    let name = p.tag().map(|t| t.name()).unwrap_or("p");
    let mut parts = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c == &qi(0) {
            continue;
        }
        let d = decimal_approx(c, k);
        parts.push(match i {
            0 => d,
            1 => format!("{d}*{name}"),
            _ => format!("{d}*{name}^{i}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn print_series(s: &Series<ParamPoly>, output: Output, decimal: Option<usize>) {
    match output {
        Output::Text => {
            for (line, c) in s.text_lines().iter().zip(s.coeffs()) {
                match decimal {
                    Some(k) => println!("{line}    [approx {}]", approx_poly(c, k)),
                    None => println!("{line}"),
                }
            }
        }
        Output::Json => println!("{}", serde_json::to_string_pretty(&s.to_json_param()).expect("serializable")),
        Output::Csv => {
            println!("n,coefficient");
            for (n, c) in s.coeffs().iter().enumerate() {
                println!("{n},{}", c.to_text());
            }
        }
    }
}

fn specialize_arg(s: Series<ParamPoly>, param: Option<&str>) -> Result<Series<ParamPoly>, Failure> {
    let Some(p) = param else { return Ok(s) };
    let value = match p.split_once('=') {
        Some((name, v)) => {
            let tag = s.param().or_else(|| s.coeffs().iter().find_map(|c| c.tag()));
            if let Some(t) = tag {
                if t.name() != name {
                    return Err(Failure::Computation(format!("series parameter is {}, not {name}", t.name())));
                }
            }
            v
        }
        None => p,
    };
    Ok(Series::from_rational_series(&s.specialize(&rational_arg(value)?)))
}

fn cmd_series(lab: &Lab, cli: &Cli, id: &str, order: usize, param: Option<&str>) -> Result<bool, Failure> {
    match resolve_series(lab, id, order)? {
        Resolved::Param(s) => print_series(&specialize_arg(s.truncate(order), param)?, cli.output, cli.decimal),
        Resolved::Closed(f) => {
            if cli.output == Output::Text {
                println!("# t^({}) (1-t)^({}) times", fmt_rational(&f.a), fmt_rational(&f.b));
            }
            print_series(&Series::from_rational_series(&f.body), cli.output, cli.decimal);
        }
    }
    Ok(true)
}

fn cmd_solve(lab: &Lab, cli: &Cli, ode: &str, m: Option<i64>, n: i64, order: usize, seed: &str) -> Result<bool, Failure> {
    let family = OdeFamily::from_name(ode).ok_or_else(|| Failure::Unknown(format!("unknown ODE family `{ode}`")))?;
    let spec = OdeSpec::from_parts(family, m, n).map_err(|e| Failure::Computation(e.to_string()))?;
    let ansatz = if seed == "normalized" {
        SeedAnsatz::new(0, qi(1), qi(0), qi(0), q(-1, 4)).map_err(|e| Failure::Computation(e.to_string()))?
    } else {
        lab.seed(family_def(seed)?)?
    };
    let fam = solve_family(&spec, &ansatz, order).map_err(|e| match e {
        SolverError::Branches { order, roots } => Failure::Computation(format!(
            "branch choice at n={order}: {}",
            roots.iter().map(|r| r.to_text()).collect::<Vec<_>>().join(", ")
        )),
        e => Failure::Computation(e.to_string()),
    })?;
    match cli.output {
        Output::Json => {
            let j = json!({
                "schema_version": SCHEMA_VERSION,
                "ode": spec.to_string(),
                "degeneracy_orders": fam.degeneracy_orders,
                "series": fam.series().to_json_param(),
            });
            println!("{}", serde_json::to_string_pretty(&j).expect("serializable"));
        }
        _ => {
            if cli.output == Output::Text {
                println!("# {spec} family, seed {seed}");
            }
            print_series(&fam.series(), cli.output, cli.decimal);
            if cli.output == Output::Text {
                for n in &fam.degeneracy_orders {
                    println!("degeneracy at n={n} (free parameter {})", fam.parameter.name());
                }
            }
        }
    }
    Ok(true)
}

fn print_reports(suite: &SuiteReport, output: Output) {
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(suite).expect("serializable")),
        Output::Csv => {
            println!("check_id,status,checked_order,mismatch_order");
            for r in &suite.reports {
                let m = r.first_mismatch.as_ref().map(|m| m.order.to_string()).unwrap_or_default();
                println!("{},{},{},{m}", r.check_id, r.status.name(), r.checked_order);
            }
        }
        Output::Text => {
            for r in &suite.reports {
                println!("{}", r.summary_line());
            }
        }
    }
}

fn is_computation_error(r: &CheckReport) -> bool {
    r.status == Status::Inconclusive && r.notes.starts_with("computation error")
}

fn cmd_check(lab: &Lab, cli: &Cli, id: &str, order: Option<usize>) -> Result<bool, Failure> {
    let r = run_check(lab, id, order)?;
    let passed = r.passed();
    print_reports(&SuiteReport { schema_version: SCHEMA_VERSION, reports: vec![r] }, cli.output);
    Ok(passed)
}

fn cmd_suite(lab: &Lab, cli: &Cli, manifest: Option<&str>, list: bool, threads: usize) -> Result<bool, Failure> {
    if list {
        for (id, cat, order) in all_checks() {
            println!("{id} {} {order}", cat.name());
        }
        return Ok(true);
    }
    let text = match manifest {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Computation(format!("{path}: {e}")))?,
        None => DEFAULT_SUITE.to_string(),
    };
    let suite = run_suite(lab, &parse_manifest(&text)?, threads)?;
    print_reports(&suite, cli.output);
    if cli.output == Output::Text {
        println!(
            "{} checks: {} pass, {} fail, {} inconclusive",
            suite.reports.len(),
            suite.count(Status::Pass),
            suite.count(Status::Fail),
            suite.count(Status::Inconclusive)
        );
    }
    if let Some(r) = suite.reports.iter().find(|r| is_computation_error(r)) {
        return Err(Failure::Computation(format!("{}: {}", r.check_id, r.notes)));
    }
    Ok(suite.all_passed())
}

fn print_gb(r: &GBReport, output: Output) {
    match output {
        Output::Json => {
            let j = json!({ "schema_version": SCHEMA_VERSION, "report": r });
            println!("{}", serde_json::to_string_pretty(&j).expect("serializable"));
        }
        Output::Csv => {
            println!("n,coefficient");
            for (n, c) in r.coefficients.iter().enumerate() {
                println!("{n},{c}");
            }
        }
        Output::Text => {
            for (n, c) in r.coefficients.iter().enumerate() {
                println!("t^{n} : {c}");
            }
            println!("{}", r.summary_line());
        }
    }
}

fn cmd_gb(lab: &Lab, cli: &Cli, id: &str, param: &str, order: usize, rescale: Option<u64>, max: u64) -> Result<bool, Failure> {
    let value = rational_arg(param)?;
    let s = match resolve_series(lab, id, order)? {
        Resolved::Param(s) => s,
        Resolved::Closed(_) => return Err(Failure::Computation(format!("{id} is not a plain power series"))),
    };
    let r = match rescale {
        Some(n) if n >= 1 => gb_fixed(&s, &value, n, order),
        Some(_) => return Err(Failure::Computation("rescale factor must be positive".into())),
        None => gb_check(&s, &value, max, order),
    };
    print_gb(&r, cli.output);
    Ok(r.all_integer)
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let lab = Lab::global()?;
    match &cli.command {
        Command::Series { id, order, param } => cmd_series(lab, cli, id, *order, param.as_deref()),
        Command::Solve { ode, m, n, order, seed } => cmd_solve(lab, cli, ode, *m, *n, *order, seed),
        Command::Check { id, order } => cmd_check(lab, cli, id, *order),
        Command::Suite { manifest, list, threads } => cmd_suite(lab, cli, manifest.as_deref(), *list, *threads),
        Command::Gb { id, param, order, rescale, max_rescale } => cmd_gb(lab, cli, id, param, *order, *rescale, *max_rescale),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Unknown(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
