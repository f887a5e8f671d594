use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use esscoh::group::{catalog, load_group_file, lookup, GroupTable};
use esscoh::report::cm_report;
use esscoh::resolution::default_maxdeg;
use esscoh::verify::{verify_group, GroupVerification, DEFAULT_SEED};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "esscoh",
    version,
    about = "Degreewise checks of essential-ideal freeness for small 2-groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "ESSCOH_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,

    /// Seed for the randomized checks.
    #[arg(long, global = true, env = "ESSCOH_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Directory for cached resolutions.
    #[arg(long, global = true, env = "ESSCOH_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true, env = "ESSCOH_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the report for one group.
    Compute {
        /// Catalog name or path to a group description file.
        #[arg(long, env = "ESSCOH_GROUP")]
        group: String,
        /// Top cohomological degree (default depends on the group order).
        #[arg(long, env = "ESSCOH_MAXDEG", value_parser = clap::value_parser!(u64).range(1..))]
        maxdeg: Option<u64>,
        /// Write the JSON report here.
        #[arg(long, env = "ESSCOH_OUT")]
        out: Option<PathBuf>,
    },
    /// Run every invariant suite over the catalog.
    Verify {
        /// Verify a single group instead of the catalog.
        #[arg(long, env = "ESSCOH_GROUP")]
        group: Option<String>,
        /// Only catalog groups of at most this order.
        #[arg(long)]
        max_order: Option<usize>,
        /// Override the per-order degree caps.
        #[arg(long, env = "ESSCOH_MAXDEG", value_parser = clap::value_parser!(u64).range(1..))]
        maxdeg: Option<u64>,
        /// Write the per-group results as JSON here.
        #[arg(long, env = "ESSCOH_OUT")]
        out: Option<PathBuf>,
    },
    /// List the built-in groups.
    Catalog {
        /// Only groups of this order.
        #[arg(long)]
        order: Option<usize>,
    },
}

/// Errors that mean the engine disagrees with itself map to exit 2.
fn exit_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<esscoh::Error>() {
        Some(esscoh::Error::Integrity(_)) => 2,
        _ => 1,
    }
}

fn load(source: &str) -> anyhow::Result<GroupTable> {
    let path = Path::new(source);
    let looks_like_file = source.ends_with(".json") || source.contains(std::path::MAIN_SEPARATOR) || path.exists();
    if looks_like_file {
        load_group_file(path).with_context(|| format!("loading group file {source}"))
    } else {
        Ok(lookup(source)?)
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) -> anyhow::Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn compute(cli: &Cli, group: &str, maxdeg: Option<u64>, out: Option<&Path>) -> anyhow::Result<u8> {
    let g = load(group)?;
    let maxdeg = maxdeg.map_or_else(|| default_maxdeg(g.order()), |m| m as usize);
    let report = cm_report(Arc::new(g), maxdeg, cli.cache_dir.as_deref())?;
    if let Some(path) = out {
        write_file(path, &report.to_json())?;
    }
    match cli.format {
        Format::Json if out.is_none() => emit(&report.to_json())?,
        Format::Json => {}
        Format::Text => emit(&format!("{}  elapsed: {:.2?}\n", report.to_text(), report.elapsed))?,
    }
    if report.is_violation() {
        eprintln!("error: {} disagrees with the theorem or an invariant", report.group);
        return Ok(2);
    }
    Ok(0)
}

fn verify(
    cli: &Cli,
    group: Option<&str>,
    max_order: Option<usize>,
    maxdeg: Option<u64>,
    out: Option<&Path>,
) -> anyhow::Result<u8> {
    let groups: Vec<GroupTable> = match group {
        Some(source) => vec![load(source)?],
        None => catalog()
            .into_iter()
            .map(|e| e.group)
            .filter(|g| max_order.is_none_or(|m| g.order() <= m))
            .collect(),
    };
    let start = Instant::now();
    let results: Vec<GroupVerification> = groups
        .into_par_iter()
        .map(|g| {
            let cap = maxdeg.map_or_else(|| default_maxdeg(g.order()), |m| m as usize);
            verify_group(Arc::new(g), cap, cli.seed, cli.cache_dir.as_deref())
        })
        .collect();
    let failures: Vec<_> = results.iter().flat_map(|r| &r.failures).collect();
    if let Some(path) = out {
        write_file(path, &(serde_json::to_string_pretty(&results)? + "\n"))?;
    }
    match cli.format {
        Format::Json if out.is_none() => emit(&(serde_json::to_string_pretty(&results)? + "\n"))?,
        Format::Json => {}
        Format::Text => {
            let mut text = String::new();
            for r in &results {
                let status = if r.passed() { "ok" } else { "FAIL" };
                text += &format!(
                    "{status:4} {:10} maxdeg {:2}  {} checks\n",
                    r.group, r.maxdeg, r.checks_run
                );
            }
            text += &format!(
                "{} groups, {} checks, {} failures in {:.2?}\n",
                results.len(),
                results.iter().map(|r| r.checks_run).sum::<usize>(),
                failures.len(),
                start.elapsed()
            );
            emit(&text)?;
        }
    }
    for f in &failures {
        let degree = f.degree.map_or_else(|| "-".to_string(), |n| n.to_string());
        eprintln!(
            "FAILED group {} degree {degree} check {:?}: {}",
            f.group, f.check, f.detail
        );
    }
    Ok(if failures.is_empty() { 0 } else { 2 })
}

#[derive(Serialize)]
struct CatalogRow {
    name: &'static str,
    order: usize,
    centre_rank: usize,
    hypothesis_excluded: bool,
    default_maxdeg: usize,
}

fn list_catalog(cli: &Cli, order: Option<usize>) -> anyhow::Result<u8> {
    let rows: Vec<CatalogRow> = catalog()
        .into_iter()
        .filter(|e| order.is_none_or(|o| e.group.order() == o))
        .map(|e| {
            let g = &e.group;
            CatalogRow {
                name: e.name,
                order: g.order(),
                centre_rank: g.elementary_rank(&g.omega1_centre()),
                hypothesis_excluded: g.has_rank2_direct_factor(),
                default_maxdeg: default_maxdeg(g.order()),
            }
        })
        .collect();
    match cli.format {
        Format::Json => emit(&(serde_json::to_string_pretty(&rows)? + "\n"))?,
        Format::Text => {
            let mut text = format!("{:10} {:>5} {:>11} {:>8}\n", "name", "order", "centre rank", "excluded");
            for r in &rows {
                text += &format!(
                    "{:10} {:>5} {:>11} {:>8}\n",
                    r.name, r.order, r.centre_rank, r.hypothesis_excluded
                );
            }
            emit(&text)?;
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match &cli.command {
        Command::Compute { group, maxdeg, out } => compute(cli, group, *maxdeg, out.as_deref()),
        Command::Verify {
            group,
            max_order,
            maxdeg,
            out,
        } => verify(cli, group.as_deref(), *max_order, *maxdeg, out.as_deref()),
        Command::Catalog { order } => list_catalog(cli, *order),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_for(&err))
        }
    }
}
