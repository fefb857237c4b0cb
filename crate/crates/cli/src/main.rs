use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rmcensus_core::census::{emit_report, run_census, write_report, CensusOptions, ReportFormat};
use rmcensus_core::{build_group, derive_params, Error, FamilyTag};

#[derive(Parser)]
#[command(
    name = "rmcensus",
    version,
    about = "Census of orientably-regular maps with 10p^2 automorphisms"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the constants derived from a prime.
    Params {
        #[arg(short)]
        p: u64,
    },
    /// Run the full classification for a prime.
    Census {
        #[arg(short)]
        p: u64,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated family tags, e.g. G1,HatG1.
        #[arg(long, value_delimiter = ',')]
        families: Option<Vec<String>>,
        #[arg(long)]
        threads: Option<usize>,
        /// Include per-stage wall-clock times.
        #[arg(long)]
        timing: bool,
    },
    /// Run the census and exit nonzero if any check fails.
    Verify {
        #[arg(short)]
        p: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Describe one group.
    Group {
        #[arg(short)]
        p: u64,
        #[arg(long)]
        family: String,
        #[arg(long)]
        order_census: bool,
        #[arg(long)]
        center: bool,
    },
}

enum Failure {
    Verification(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPrime(_)
            | Error::UnknownFamily(_)
            | Error::InadmissibleFamily { .. }
            | Error::MissingConstant { .. }
            | Error::OverBudget { .. }
            | Error::Io { .. } => Failure::Input(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

fn set_threads(n: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    Ok(())
}

fn parse_families(list: Option<Vec<String>>) -> Result<Option<Vec<FamilyTag>>, Failure> {
    list.map(|v| {
        v.iter()
            .map(|s| s.trim().parse::<FamilyTag>().map_err(Failure::from))
            .collect()
    })
    .transpose()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Params { p } => {
            let params = derive_params(p)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&params).map_err(Error::from)?
            );
        }
        Cmd::Census {
            p,
            format,
            out,
            families,
            threads,
            timing,
        } => {
            set_threads(threads)?;
            let format: ReportFormat = format
                .parse()
                .map_err(|e: Error| Failure::Input(e.to_string()))?;
            let opts = CensusOptions {
                families: parse_families(families)?,
                record_timing: timing,
            };
            let report = run_census(p, &opts)?;
            match out {
                Some(path) => write_report(&report, format, &path)?,
                None => print!("{}", emit_report(&report, format)?),
            }
        }
        Cmd::Verify { p, threads } => {
            set_threads(threads)?;
            let report = run_census(p, &CensusOptions::default())?;
            report.revalidate()?;
            let failing = report.failing();
            if !failing.is_empty() {
                let lines: Vec<String> = failing
                    .iter()
                    .map(|c| format!("{}: expected {}, actual {}", c.name, c.expected, c.actual))
                    .collect();
                return Err(Failure::Verification(lines.join("\n")));
            }
            println!("p = {p}: all {} checks pass", report.theorem_checks.len());
        }
        Cmd::Group {
            p,
            family,
            order_census,
            center,
        } => {
            let params = derive_params(p)?;
            let tag: FamilyTag = family.parse()?;
            let g = build_group(&params, tag)?;
            println!("{tag} at p = {p}: order {}", g.group_order());
            let gens: Vec<String> = g.generators().iter().map(|x| g.word(x)).collect();
            println!("generators: {}", gens.join(", "));
            if order_census {
                for (order, count) in g.order_census() {
                    println!("order {order}: {count}");
                }
            }
            if center {
                let z: Vec<String> = g.center().iter().map(|x| g.word(x)).collect();
                println!("center ({}): {}", z.len(), z.join(", "));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed:\n{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
