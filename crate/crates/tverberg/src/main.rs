use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use tverberg::bench::{sweep, write_csv, BenchConfig};
use tverberg::format::{emit_instance, parse_instance, parse_partition, InstanceFile};
use tverberg::generate::{gen_random_instance, gen_tight, Family, Profile};
use tverberg::report::{self, RunReport};
use tverberg_core::{BruteForceBudget, SolverOptions};

/// Colorful matroidal Tverberg partitions.
///
/// Exit codes: 0 partition found / success, 1 error, 2 preconditions not
/// met, 3 no partition exists (or the given parts are not one).
#[derive(Parser)]
#[command(version, about, long_about)]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver for the instance's mode.
    Solve {
        file: PathBuf,
        /// Skip the solver's internal consistency checks.
        #[arg(long)]
        no_checks: bool,
    },
    /// Check a partition file against an instance.
    Verify { file: PathBuf, partition: PathBuf },
    /// Exhaustive search.
    Brute {
        file: PathBuf,
        /// Maximum number of labelings to visit.
        #[arg(long, default_value_t = BruteForceBudget::default().max_assignments)]
        budget: u64,
    },
    /// Emit the instance with r-1 copies of each basis element.
    GenTight {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        r: usize,
    },
    /// Emit a seeded random instance.
    GenRandom {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Profile::General)]
        profile: Profile,
    },
    /// Sweep generated instances and print CSV.
    Bench {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "uniform")]
        families: Vec<Family>,
        #[arg(long, value_delimiter = ',', default_value = "3")]
        ranks: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        rs: Vec<usize>,
        /// Entries beyond the minimum length.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        extra: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Deterministic round-robin uniform instances instead of random ones.
        #[arg(long)]
        round_robin: bool,
    },
}

fn read_instance(path: &Path) -> anyhow::Result<InstanceFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print(report: &RunReport, json: bool) -> u8 {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{report}");
    }
    report.exit_code()
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let code = match cli.command {
        Command::Solve { file, no_checks } => {
            let mut options = SolverOptions::default();
            if no_checks {
                options.check_invariants = false;
            }
            print(&report::solve(&read_instance(&file)?, options), cli.json)
        }
        Command::Verify { file, partition } => {
            let inst = read_instance(&file)?;
            let text = fs::read_to_string(&partition).with_context(|| format!("reading {}", partition.display()))?;
            let parts = parse_partition(&text).with_context(|| format!("parsing {}", partition.display()))?;
            print(&report::verify(&inst, &parts), cli.json)
        }
        Command::Brute { file, budget } => {
            let budget = BruteForceBudget {
                max_assignments: budget,
                ..BruteForceBudget::default()
            };
            print(&report::brute(&read_instance(&file)?, &budget), cli.json)
        }
        Command::GenTight { family, rank, r } => {
            print!("{}", emit_instance(&gen_tight(family, rank, r)?));
            0
        }
        Command::GenRandom {
            family,
            rank,
            r,
            length,
            seed,
            profile,
        } => {
            print!("{}", emit_instance(&gen_random_instance(family, rank, r, length, seed, profile)?));
            0
        }
        Command::Bench {
            families,
            ranks,
            rs,
            extra,
            seed,
            workers,
            round_robin,
        } => {
            let rows = sweep(&BenchConfig {
                families,
                ranks,
                rs,
                extra_lengths: extra,
                seed,
                workers,
                round_robin,
            })?;
            write_csv(&rows, std::io::stdout().lock())?;
            0
        }
    };
    Ok(code)
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
