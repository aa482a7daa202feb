//! Command-line front end: builds recurrence tables, runs the measurement
//! harnesses, and writes CSV or JSON reports.
//!
//! Exit codes: 0 success, 1 verification failed, 2 invalid argument,
//! 3 convergence failure, 4 non-finite function value, 5 io error,
//! 70 internal error. `FREUD_APPROX_THREADS` caps worker threads.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use freud_approx::error::{Error, Result};
use freud_approx::expansion::{self, Expansion};
use freud_approx::functions::FunctionSpec;
use freud_approx::orthopoly::{
    closed_form_recurrence, stieltjes_recurrence, FreudWeight, RecurrenceTable,
};
use freud_approx::{alpha2, diagnostics, functions, report};

#[derive(Debug, Parser)]
#[command(
    name = "freud-approx",
    about = "Orthonormal polynomials and approximation diagnostics for exp(-2|x|^alpha) weights",
    version,
    after_help = "Exit codes: 0 ok, 1 verification failed, 2 invalid argument, \
                  3 convergence failure, 4 invalid function value, 5 io error, 70 internal.\n\
                  FREUD_APPROX_THREADS caps parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Closed,
    Stieltjes,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the three-term recurrence table b_1..b_N.
    Recurrence {
        #[arg(long)]
        alpha: f64,
        /// Number of coefficients.
        #[arg(long, visible_alias = "N")]
        n: usize,
        /// closed: alpha=2 closed form; stieltjes: discretized procedure;
        /// auto at alpha=2 computes both and prints their max deviation.
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Stabilization tolerance of the stieltjes refinement.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fourier coefficients a_n and distances d(f, Pi_{n-1}).
    Coeffs {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        function: String,
        #[arg(long, visible_alias = "N")]
        n: usize,
        /// Base node count; defaults to max(2(N+1), 200).
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Distances by both formulas: subtraction and ascending tail.
    Distance {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        function: String,
        #[arg(long, visible_alias = "N")]
        n: usize,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seminorm table q_k = sup_n n^k d(f, Pi_{n-1}).
    Seminorms {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        function: String,
        #[arg(long, visible_alias = "N")]
        n: usize,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Markov table: derivative norms r_n and normalized ratios rho_n.
    Markov {
        #[arg(long)]
        alpha: f64,
        /// Inclusive degree range, e.g. 1..50.
        #[arg(long, value_parser = parse_range)]
        n: (usize, usize),
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Jackson rate table t_n = n^{r(1/alpha-1)} d(f, Pi_n).
    Jackson {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        function: String,
        /// Derivative order r >= 1.
        #[arg(long)]
        r: usize,
        /// Inclusive degree range, e.g. 1..40.
        #[arg(long, value_parser = parse_range)]
        n: (usize, usize),
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Coefficient-decay classification: rapid / not_rapid / inconclusive.
    Classify {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        function: String,
        /// Refined truncation N2; the coarse level is N2/2.
        #[arg(long, visible_alias = "N")]
        n: usize,
        #[arg(long, default_value_t = 6)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify the alpha=2 coefficient correspondence for one function.
    Alpha2Verify {
        #[arg(long)]
        function: String,
        #[arg(long, visible_alias = "N")]
        n: usize,
        /// Max allowed |a_n - hermite_n|; exceeding it exits with code 1.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run every bundled verification check and emit one JSON document.
    Report {
        /// Seed for the perturbation-based spot checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List the built-in function corpus with tags and alpha compatibility.
    Functions {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s}"))?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad lower bound {lo}"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad upper bound {hi}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

fn check_alpha(alpha: f64) -> Result<()> {
    FreudWeight::new(alpha).map(|_| ())
}

fn find_function(name: &str) -> Result<FunctionSpec> {
    functions::by_name(name).ok_or_else(|| {
        Error::invalid(format!(
            "unknown function {name}; run `freud-approx functions` for the corpus"
        ))
    })
}

fn write_out(output: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

/// Recurrence table sized for an expansion of degree n at the given base
/// node count: the doubling check of the coefficient quadrature needs a
/// Jacobi matrix twice the base rule.
fn table_for(alpha: f64, n: usize, nodes: Option<usize>) -> Result<(RecurrenceTable, usize)> {
    let m = nodes.unwrap_or_else(|| expansion::default_node_count(n));
    if m < n + 1 {
        return Err(Error::invalid(format!(
            "--nodes {m} cannot resolve degree {n}; need at least N + 1"
        )));
    }
    let len = 2 * m;
    let table = if alpha == 2.0 {
        closed_form_recurrence(2.0, len)?
    } else {
        stieltjes_recurrence(&FreudWeight::new(alpha)?, len, 1e-10)?
    };
    Ok((table, m))
}

fn expansion_for(
    alpha: f64,
    function: &str,
    n: usize,
    nodes: Option<usize>,
) -> Result<(RecurrenceTable, FunctionSpec, Expansion)> {
    let f = find_function(function)?;
    let (table, m) = table_for(alpha, n, nodes)?;
    let exp = expansion::fourier_coefficients(&f, &table, n, m)?;
    Ok((table, f, exp))
}

fn expansion_json(exp: &Expansion) -> serde_json::Value {
    let d = exp.distances();
    serde_json::json!({
        "schema_version": report::SCHEMA_VERSION,
        "alpha": exp.alpha(),
        "f_norm_sq": exp.f_norm_sq(),
        "coeffs": exp.coeffs(),
        "distances": d.iter().map(|x| x.value).collect::<Vec<_>>(),
        "floored": d.iter().map(|x| x.floored).collect::<Vec<_>>(),
        "distance_convention": "d[n] = distance to Pi_(n-1)",
        "quad_meta": exp.quad_meta(),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Recurrence {
            alpha,
            n,
            method,
            tol,
            format,
            output,
        } => {
            check_alpha(alpha)?;
            let table = match (method, alpha == 2.0) {
                (Method::Closed, true) => closed_form_recurrence(2.0, n)?,
                (Method::Closed, false) => {
                    return Err(Error::invalid(
                        "--method closed is only available at alpha = 2",
                    ))
                }
                (Method::Stieltjes, _) | (Method::Auto, false) => {
                    match stieltjes_recurrence(&FreudWeight::new(alpha)?, n, tol) {
                        Ok(t) => t,
                        // A table that failed to stabilize is still written,
                        // marked, so the caller can inspect how far it got.
                        Err(Error::ConvergenceFailure {
                            context,
                            delta,
                            last,
                            previous,
                        }) => {
                            let mut buf = Vec::new();
                            writeln!(buf, "# convergence-failure,{}", context)?;
                            writeln!(buf, "# last_delta,{delta:.3e}")?;
                            writeln!(buf, "n,b_n")?;
                            for (i, b) in last.iter().enumerate() {
                                writeln!(buf, "{},{}", i + 1, fmt17(*b))?;
                            }
                            write_out(output.as_ref(), &buf)?;
                            return Err(Error::ConvergenceFailure {
                                context,
                                delta,
                                last,
                                previous,
                            });
                        }
                        Err(e) => return Err(e),
                    }
                }
                (Method::Auto, true) => {
                    let closed = closed_form_recurrence(2.0, n)?;
                    let st = stieltjes_recurrence(&FreudWeight::new(alpha)?, n, tol)?;
                    let dev = closed
                        .b()
                        .iter()
                        .zip(st.b())
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    eprintln!("closed form vs stieltjes: max |b_n| deviation = {dev:.3e}");
                    closed
                }
            };
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    table.to_csv(&mut buf)?;
                    buf
                }
                Format::Json => table.to_json().into_bytes(),
            };
            write_out(output.as_ref(), &bytes)
        }
        Command::Coeffs {
            alpha,
            function,
            n,
            nodes,
            format,
            output,
        } => {
            check_alpha(alpha)?;
            let (_, _, exp) = expansion_for(alpha, &function, n, nodes)?;
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    exp.to_csv(&mut buf)?;
                    buf
                }
                Format::Json => serde_json::to_vec_pretty(&expansion_json(&exp))
                    .expect("report serializes"),
            };
            write_out(output.as_ref(), &bytes)
        }
        Command::Distance {
            alpha,
            function,
            n,
            nodes,
            format,
            output,
        } => {
            check_alpha(alpha)?;
            let (_, _, exp) = expansion_for(alpha, &function, n, nodes)?;
            let mut rows = Vec::new();
            for k in 0..=n + 1 {
                let sub = exp.distance(k)?;
                let tail = exp.distance_tail(k)?;
                rows.push((k, sub, tail));
            }
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    writeln!(buf, "# d_n is the distance to Pi_(n-1)")?;
                    writeln!(buf, "n,d_subtraction,d_tail,floored")?;
                    for (k, sub, tail) in rows {
                        writeln!(
                            buf,
                            "{},{},{},{}",
                            k,
                            fmt17(sub.value),
                            fmt17(tail.value),
                            sub.floored
                        )?;
                    }
                    buf
                }
                Format::Json => {
                    let v = serde_json::json!({
                        "schema_version": report::SCHEMA_VERSION,
                        "alpha": alpha,
                        "distance_convention": "d[n] = distance to Pi_(n-1)",
                        "rows": rows.iter().map(|(k, s, t)| serde_json::json!({
                            "n": k, "subtraction": s.value, "tail": t.value,
                            "floored": s.floored,
                        })).collect::<Vec<_>>(),
                    });
                    serde_json::to_vec_pretty(&v).expect("report serializes")
                }
            };
            write_out(output.as_ref(), &bytes)
        }
        Command::Seminorms {
            alpha,
            function,
            n,
            k_max,
            nodes,
            format,
            output,
        } => {
            check_alpha(alpha)?;
            let (_, _, exp) = expansion_for(alpha, &function, n, nodes)?;
            let table = expansion::seminorms(&exp, k_max);
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    table.to_csv(&mut buf)?;
                    buf
                }
                Format::Json => serde_json::to_vec_pretty(&serde_json::json!({
                    "schema_version": report::SCHEMA_VERSION,
                    "alpha": alpha,
                    "expansion": expansion_json(&exp),
                    "seminorms": table,
                }))
                .expect("report serializes"),
            };
            write_out(output.as_ref(), &bytes)
        }
        Command::Markov {
            alpha,
            n: (lo, hi),
            format,
            output,
        } => {
            check_alpha(alpha)?;
            let (table, _) = table_for(alpha, hi, Some(hi + 1))?;
            let rule = table.gauss_freud(hi + 1)?;
            let rep = diagnostics::markov_table(&table, &rule, lo..=hi)?;
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    rep.to_csv(&mut buf)?;
                    buf
                }
                Format::Json => serde_json::to_vec_pretty(&serde_json::json!({
                    "schema_version": report::SCHEMA_VERSION,
                    "markov": rep,
                    "log_slope": rep.log_slope(lo.max(10), hi),
                }))
                .expect("report serializes"),
            };
            write_out(output.as_ref(), &bytes)
        }
        Command::Jackson {
            alpha,
            function,
            r,
            n: (lo, hi),
            format,
            output,
        } => {
            check_alpha(alpha)?;
            let f = find_function(&function)?;
            let (table, _) = table_for(alpha, hi + 1, None)?;
            let rep = diagnostics::jackson_table(&f, &table, r, lo..=hi)?;
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    rep.to_csv(&mut buf)?;
                    buf
                }
                Format::Json => serde_json::to_vec_pretty(&serde_json::json!({
                    "schema_version": report::SCHEMA_VERSION,
                    "jackson": rep,
                    "argmax": rep.argmax(),
                }))
                .expect("report serializes"),
            };
            write_out(output.as_ref(), &bytes)
        }
        Command::Classify {
            alpha,
            function,
            n,
            k_max,
            format,
            output,
        } => {
            check_alpha(alpha)?;
            if n < 2 {
                return Err(Error::invalid("classification needs N >= 2"));
            }
            let f = find_function(&function)?;
            let (table, _) = table_for(alpha, n, None)?;
            let coarse = expansion::fourier_coefficients(
                &f,
                &table,
                n / 2,
                expansion::default_node_count(n / 2),
            )?;
            let refined =
                expansion::fourier_coefficients(&f, &table, n, expansion::default_node_count(n))?;
            let rep = diagnostics::classify_rapid(&coarse, &refined, k_max)?;
            eprintln!("verdict: {}", rep.verdict);
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    rep.to_csv(&mut buf)?;
                    buf
                }
                Format::Json => serde_json::to_vec_pretty(&serde_json::json!({
                    "schema_version": report::SCHEMA_VERSION,
                    "classification": rep,
                }))
                .expect("report serializes"),
            };
            write_out(output.as_ref(), &bytes)
        }
        Command::Alpha2Verify {
            function,
            n,
            tol,
            format,
            output,
        } => {
            let f = find_function(&function)?;
            let rep = alpha2::coefficient_correspondence(&f, n)?;
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    rep.to_csv(&mut buf)?;
                    buf
                }
                Format::Json => serde_json::to_vec_pretty(&serde_json::json!({
                    "schema_version": report::SCHEMA_VERSION,
                    "correspondence": rep,
                }))
                .expect("report serializes"),
            };
            write_out(output.as_ref(), &bytes)?;
            if rep.max_diff > tol {
                eprintln!(
                    "verification failed: max |a_n - hermite_n| = {:.3e} > {tol:.3e}",
                    rep.max_diff
                );
                std::process::exit(1);
            }
            Ok(())
        }
        Command::Report { seed, output } => {
            let doc = report::bundled_report(seed)?;
            for check in doc["checks"].as_array().into_iter().flatten() {
                eprintln!(
                    "criterion {:>2} [{}]: {}",
                    check["id"],
                    if check["passed"].as_bool() == Some(true) {
                        "PASS"
                    } else {
                        "FAIL"
                    },
                    check["name"].as_str().unwrap_or("")
                );
            }
            let bytes = serde_json::to_vec_pretty(&doc).expect("report serializes");
            write_out(output.as_ref(), &bytes)
        }
        Command::Functions { format, output } => {
            let corpus = functions::corpus();
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    writeln!(buf, "name,tags,alpha_compat,max_derivative_order")?;
                    for f in &corpus {
                        let tags: Vec<String> = f.tags().iter().map(|t| t.to_string()).collect();
                        writeln!(
                            buf,
                            "{},{},{},{}",
                            f.name(),
                            tags.join("|"),
                            f.compat(),
                            f.max_order()
                                .map(|m| m.to_string())
                                .unwrap_or_else(|| "unbounded".into())
                        )?;
                    }
                    buf
                }
                Format::Json => {
                    let v: Vec<_> = corpus
                        .iter()
                        .map(|f| {
                            serde_json::json!({
                                "name": f.name(),
                                "tags": f.tags(),
                                "alpha_compat": f.compat(),
                                "max_derivative_order": f.max_order(),
                            })
                        })
                        .collect();
                    serde_json::to_vec_pretty(&serde_json::json!({
                        "schema_version": report::SCHEMA_VERSION,
                        "functions": v,
                    }))
                    .expect("report serializes")
                }
            };
            write_out(output.as_ref(), &bytes)
        }
    }
}

/// 17 significant digits: enough for a bit-exact decimal round-trip.
fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
