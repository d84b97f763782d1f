//! gcrit: bracket the critical coupling of an attractive central potential.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on numeric failures,
//! 3 when a table reproduction does not match the reference values.

use clap::{Parser, Subcommand, ValueEnum};
use gcrit_cli::records::{ResultRecord, CSV_HEADER};
use gcrit_cli::{tables, CliError, MethodChoice, PotentialSelector, RunRequest};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "gcrit",
    version,
    about = "Convergent two-sided bounds on the critical coupling g_c of attractive central potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for machine consumption.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Override the quadrature relative tolerance (also: GCRIT_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run bound sequences and closed-form limits for one potential.
    Bounds {
        /// Potential: sw | exp | pe | file:PATH
        #[arg(long)]
        potential: String,
        /// Angular momentum channel.
        #[arg(long, default_value_t = 0)]
        ell: u32,
        /// Comma-separated methods from power,kellogg,kolomy,alpha,omega,
        /// glaser,calogero1,calogero2,variational,rayleigh,chadan.
        #[arg(long)]
        method: String,
        /// Iteration depth for the sequence methods.
        #[arg(long, default_value_t = 4)]
        iters: usize,
    },
    /// Recompute one of the reference tables (1-5) and check every cell.
    Reproduce {
        #[arg(long)]
        table: u32,
    },
    /// Shooting determination of the exact critical coupling.
    Oracle {
        /// Potential: sw | exp | pe | file:PATH
        #[arg(long)]
        potential: String,
        /// Angular momentum channel.
        #[arg(long, default_value_t = 0)]
        ell: u32,
    },
}

fn main() -> ExitCode {
    // die quietly when the output pipe closes (e.g. `gcrit ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap handles --help/--version as "errors" with successful exit
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let env_tol = std::env::var("GCRIT_TOL").ok();
    let scheme = gcrit_cli::scheme_from(cli.tol, env_tol.as_deref())?;

    match cli.command {
        Command::Bounds {
            potential,
            ell,
            method,
            iters,
        } => {
            if iters < 1 {
                return Err(CliError::BadTolerance(format!(
                    "--iters {iters} (must be >= 1)"
                )));
            }
            let request = RunRequest {
                potential: potential.parse()?,
                ell,
                methods: MethodChoice::parse_list(&method)?,
                n_max: iters,
                scheme,
            };
            let outcome = gcrit_cli::run_bounds(&request)?;
            let mut records = outcome.records.clone();
            for (pair, kind) in [
                (&outcome.bracket_lower, gcrit_cli::records::BoundType::Lower),
                (&outcome.bracket_upper, gcrit_cli::records::BoundType::Upper),
            ] {
                if let Some((value, source)) = pair {
                    records.push(ResultRecord {
                        potential: request.potential.tag(),
                        ell,
                        method: format!("bracket:{source}"),
                        n: None,
                        value: *value,
                        bound_type: kind,
                        provenance: gcrit_cli::records::Provenance::Sequence,
                    });
                }
            }
            emit_records(&records, cli.format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Reproduce { table } => {
            let report = tables::reproduce(table, &scheme)?;
            match cli.format {
                OutputFormat::Text => print!("{}", report.render_text()),
                OutputFormat::Csv => {
                    println!("table,potential,ell,column,printed,computed,tolerance,status");
                    for c in &report.cells {
                        println!(
                            "{},{},{},{},{},{:.12e},{:.1e},{}",
                            c.table,
                            c.potential,
                            c.ell,
                            c.column,
                            c.printed,
                            c.computed,
                            c.tolerance,
                            if c.pass { "pass" } else { "fail" }
                        );
                    }
                }
                OutputFormat::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report.cells).expect("serializable")
                    );
                }
            }
            if report.all_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
        Command::Oracle { potential, ell } => {
            let selector: PotentialSelector = potential.parse()?;
            let outcome = gcrit_cli::run_oracle(&selector, ell, &scheme)?;
            match cli.format {
                OutputFormat::Text => {
                    println!("{}", outcome.record.text_line());
                    if let Some((closed, diff)) = outcome.closed_form {
                        println!(
                            "{:<12} l={} {:<12} n=  - {closed:>14.8} exact (closed_form)",
                            outcome.record.potential, ell, "closed-form"
                        );
                        println!("difference shooting - closed form: {diff:+.3e}");
                    }
                }
                OutputFormat::Csv | OutputFormat::Json => {
                    let mut records = vec![outcome.record.clone()];
                    if let Some((closed, _)) = outcome.closed_form {
                        records.push(ResultRecord {
                            potential: outcome.record.potential.clone(),
                            ell,
                            method: "closed_form".into(),
                            n: None,
                            value: closed,
                            bound_type: gcrit_cli::records::BoundType::Exact,
                            provenance: gcrit_cli::records::Provenance::ClosedForm,
                        });
                    }
                    emit_records(&records, cli.format);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit_records(records: &[ResultRecord], format: OutputFormat) {
    match format {
        OutputFormat::Text => {
            for r in records {
                println!("{}", r.text_line());
            }
        }
        OutputFormat::Csv => {
            println!("{CSV_HEADER}");
            for r in records {
                println!("{}", r.csv_line());
            }
        }
        OutputFormat::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(records).expect("serializable")
            );
        }
    }
}
