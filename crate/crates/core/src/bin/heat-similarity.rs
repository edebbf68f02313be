use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use heat_similarity::experiments::{batch_exit_code, run_all, run_file};
use heat_similarity::{oracle, InitialDatum};

#[derive(Parser)]
#[command(
    name = "heat-similarity",
    version,
    about = "Similarity-profile experiments for the heat equation and graph curvature flow"
)]
struct Cli {
    /// Directory for output files; overrides `out_dir` in configs.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Absolute quadrature tolerance; overrides `abs_tol` in configs.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Reserved. Nothing here is random, so setting it is an error.
    #[arg(long, global = true)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the catalog of initial data with their metadata.
    ListData,
    /// Run one experiment config.
    Run { config: PathBuf },
    /// Run every `*.cfg` file of a directory.
    RunAll { dir: PathBuf },
    /// Evaluate a slow reference integral: profile_f, kernel_g, or heat_mass.
    Oracle { function: String, arg: f64 },
}

fn fail(code: u8, reason: impl std::fmt::Display) -> ExitCode {
    eprintln!("error exit={code}: {reason}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                return fail(2, e.to_string().lines().next().unwrap_or("bad arguments"));
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    if cli.seedless {
        return fail(
            2,
            "--seedless is reserved: the experiments use no randomness",
        );
    }
    let out_dir = cli.out_dir.as_deref();
    match cli.command {
        Command::ListData => {
            println!("id,sup_norm,sup_left,sup_right,decay_class,smooth,oscillates_at_zero");
            for d in InitialDatum::catalog() {
                let m = d.metadata();
                println!(
                    "{},{},{},{},{:?},{},{}",
                    d.id(),
                    m.sup_norm,
                    m.sup_left,
                    m.sup_right,
                    m.decay_class,
                    m.smooth,
                    m.oscillates_at_zero
                );
            }
            ExitCode::SUCCESS
        }
        Command::Run { config } => match run_file(&config, out_dir, cli.tol) {
            Ok(out) => {
                for a in &out.manifest.assertions {
                    println!(
                        "{} {}: {}",
                        if a.passed { "PASS" } else { "FAIL" },
                        a.name,
                        a.detail
                    );
                }
                for p in &out.files {
                    println!("wrote {}", p.display());
                }
                ExitCode::from(out.exit_code() as u8)
            }
            Err(e) => fail(e.exit_code() as u8, e),
        },
        Command::RunAll { dir } => match run_all(&dir, out_dir, cli.tol) {
            Ok(results) => {
                for (path, r) in &results {
                    match r {
                        Ok(o) => println!(
                            "{} {}",
                            if o.passed() { "PASS" } else { "FAIL" },
                            path.display()
                        ),
                        Err(e) => println!("ERROR exit={} {}: {e}", e.exit_code(), path.display()),
                    }
                }
                ExitCode::from(batch_exit_code(&results) as u8)
            }
            Err(e) => fail(e.exit_code() as u8, e),
        },
        Command::Oracle { function, arg } => {
            let v = match function.as_str() {
                "profile_f" => oracle::profile_f(arg),
                "kernel_g" => oracle::kernel_g(arg),
                "heat_mass" if arg > 0.0 => oracle::heat_mass(arg),
                "heat_mass" => return fail(2, format!("heat_mass needs t > 0, got {arg}")),
                other => {
                    return fail(
                        2,
                        format!("unknown oracle '{other}' (profile_f, kernel_g, heat_mass)"),
                    )
                }
            };
            println!("{v:.17e}");
            ExitCode::SUCCESS
        }
    }
}
