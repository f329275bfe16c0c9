//! `reeblock`: verification driver and table exporter.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on a usage error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reeblock_core::constants;
use reeblock_core::gf3field::FieldSpec;
use reeblock_core::gtable::{
    render_center, representatives, GConfig, GData, GEngine, GKind, ProductExpectations,
};
use reeblock_core::ntable::{self, NCharTable};
use reeblock_core::reegroup::ClassPartition;
use reeblock_core::verify::{self, Config};
use reeblock_core::Error;

#[derive(Parser)]
#[command(
    name = "reeblock",
    version,
    about = "Centres of principal 3-blocks of small Ree groups and their Sylow normalisers"
)]
struct Cli {
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Common {
    /// Field parameter: q = 3^(2k+1).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,

    /// Sign choice for the normaliser character table.
    #[arg(long, default_value = "-1", allow_hyphen_values = true, value_parser = parse_epsilon)]
    epsilon: i8,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Allow element enumeration of the normaliser for k > 1.
    #[arg(long)]
    allow_big: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum What {
    ChartabN,
    NConstants,
    GProducts,
    ClassCensus,
}

#[derive(Subcommand)]
enum Command {
    /// Class census, character table, oracle equivalence, law suites and
    /// the Loewy length of Z(F_3 N).
    VerifyNormaliser(Common),
    /// Class-sum products of G, the Loewy length of Z(F_3 G e0) and the
    /// comparison with the normaliser.
    VerifyRee(Common),
    /// Both pipelines.
    VerifyAll(Common),
    /// Write a table to stdout.
    Export {
        #[arg(long, value_enum)]
        what: What,
        #[command(flatten)]
        common: Common,
        /// Name the recurring products (alpha, beta, gamma_i, delta_i, mu, nu).
        #[arg(long)]
        legend: bool,
    },
}

fn parse_epsilon(s: &str) -> Result<i8, String> {
    match s {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("epsilon must be 1 or -1, got {s}")),
    }
}

fn config(c: &Common) -> Config {
    Config {
        k: c.k,
        epsilon: c.epsilon,
        allow_big: c.allow_big,
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::FieldTooSmall { .. } | Error::ResourceLimit(_) | Error::UnknownLabel(_)
    )
}

fn checks_csv(report: &Value) -> String {
    let mut out = String::from("check,passed,skipped\n");
    let mut push = |checks: &Value, prefix: &str| {
        for c in checks.as_array().into_iter().flatten() {
            out.push_str(&format!(
                "{prefix}{},{},{}\n",
                c["name"].as_str().unwrap_or(""),
                c["passed"],
                c.get("skipped").and_then(Value::as_bool).unwrap_or(false)
            ));
        }
    };
    if let Some(checks) = report.get("checks") {
        push(checks, "");
    } else {
        push(&report["normaliser"]["checks"], "normaliser/");
        push(&report["ree"]["checks"], "ree/");
    }
    out
}

fn emit(format: Format, value: &Value, csv: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).unwrap()),
        Format::Csv => print!("{}", csv()),
    }
}

fn run_verify(c: &Common, value: Value, passed: bool) -> ExitCode {
    emit(c.format, &value, || checks_csv(&value));
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn export(what: What, c: &Common, legend: bool) -> reeblock_core::Result<()> {
    let field = FieldSpec::new(c.k)?;
    match what {
        What::ChartabN => {
            let t = NCharTable::build(&field, c.epsilon)?;
            emit(c.format, &t.to_json(), || t.to_csv());
        }
        What::NConstants => {
            if c.k > 1 && !c.allow_big {
                return Err(Error::ResourceLimit(
                    "the full normaliser tensor for k > 1 needs --allow-big".into(),
                ));
            }
            let t = NCharTable::build(&field, c.epsilon)?;
            let p = constants::burnside_tensor(&t)?;
            let value = json!({
                "k": c.k,
                "epsilon": c.epsilon,
                "labels": p.labels().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "index": "values[(x*n + y)*n + z] = a(x,y,z)",
                "values": (0..p.dim().pow(3)).map(|i| {
                    let n = p.dim();
                    p.get_idx(i / (n * n), (i / n) % n, i % n)
                }).collect::<Vec<_>>(),
            });
            emit(c.format, &value, || p.to_csv());
        }
        What::GProducts => {
            let engine = GEngine::new(GData::build(c.k, GConfig::default())?)?;
            let value = verify::g_products_json(&engine, legend)?;
            emit(c.format, &value, || {
                let d = engine.data();
                let exp = ProductExpectations::new(&engine).ok();
                let mut out = String::from(if legend {
                    "x,y,product,legend\n"
                } else {
                    "x,y,product\n"
                });
                for x in GKind::ALL {
                    for y in GKind::ALL {
                        let (a, b) = representatives(d, x, y);
                        let v = engine.product_mod3(a, b).unwrap_or_default();
                        out.push_str(&format!("{a},{b},\"{}\"", render_center(d, &v)));
                        if legend {
                            let name = exp
                                .as_ref()
                                .map(|e| e.expected(a, b))
                                .filter(|(_, want)| *want == v)
                                .map(|(n, _)| n)
                                .unwrap_or_else(|| "?".into());
                            out.push_str(&format!(",{name}"));
                        }
                        out.push('\n');
                    }
                }
                out
            });
        }
        What::ClassCensus => {
            let mut p = ClassPartition::enumerate(&field, c.allow_big)?;
            let t = NCharTable::build(&field, c.epsilon)?;
            // keep the representative-based names if no labeling fits
            let _ = ntable::align_labels(&t, &mut p);
            let value = json!({
                "k": c.k,
                "classes": p.classes().iter().map(|ci| json!({
                    "label": ci.label.to_string(),
                    "size": ci.size,
                    "element_order": ci.element_order,
                    "centralizer_order": ci.centralizer_order,
                    "defect": ci.defect,
                    "representative": ci.representative_text,
                })).collect::<Vec<_>>(),
            });
            emit(c.format, &value, || p.to_csv());
        }
    }
    Ok(())
}

fn fail(e: Error) -> ExitCode {
    println!("{}", json!({ "error": e.to_string(), "passed": false }));
    ExitCode::from(if is_usage(&e) { 2 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
        {
            eprintln!("could not configure {j} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match &cli.command {
        Command::VerifyNormaliser(c) => match verify::verify_normaliser(&config(c)) {
            Ok(r) => run_verify(c, serde_json::to_value(&r).unwrap(), r.passed),
            Err(e) => fail(e),
        },
        Command::VerifyRee(c) => match verify::verify_ree(&config(c)) {
            Ok(r) => run_verify(c, serde_json::to_value(&r).unwrap(), r.passed),
            Err(e) => fail(e),
        },
        Command::VerifyAll(c) => match verify::verify_all(&config(c)) {
            Ok(r) => run_verify(c, serde_json::to_value(&r).unwrap(), r.passed),
            Err(e) => fail(e),
        },
        Command::Export {
            what,
            common,
            legend,
        } => match export(*what, common, *legend) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
    }
}
