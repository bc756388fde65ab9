//! `bench` — generate or ingest datasets, run the sorters, verify, report.
//!
//! Subcommands mirror the experiments the library is built around:
//! `run` for a single dataset, `sweep-zipf` for the duplicate-robustness
//! sweep, `sweep-size` for the scalability sweep and `file` for raw binary
//! key files. Exit code is non-zero if any verification fails.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use learned_sort::datagen::{DatasetSpec, Family};
use learned_sort::harness::{
    run_benchmark_source, write_csv, Algorithm, BenchSource, BenchmarkRecord, KeyType,
};
use learned_sort::SortConfig;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "bench", about = "LearnedSort 2.0 benchmark harness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Algorithms to run, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![
        "learned_sort2".to_string(), "std_sort".to_string(), "lsd_radix".to_string()
    ])]
    algos: Vec<String>,

    /// Timed repeats per algorithm; the best run is reported.
    #[arg(long, default_value_t = 5)]
    repeats: usize,

    /// Write results to this CSV file as well as stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmark one synthetic dataset.
    Run {
        /// Dataset family: uniform, normal, lognormal, chi_square,
        /// exponential, zipf, mix_gauss, root_dups, two_dups.
        #[arg(long)]
        family: String,
        /// Number of keys (scientific notation accepted, e.g. 1e7).
        #[arg(long, value_parser = parse_size)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Family parameter overrides, e.g. --param sigma=2 --param mu=1.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Key representation to benchmark.
        #[arg(long, default_value = "f64")]
        key_type: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Duplicate-robustness sweep: Zipf datasets of increasing skew plus a
    /// standard-normal reference at the same size.
    SweepZipf {
        #[arg(long, value_parser = parse_size)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.6, 0.7, 0.8, 0.9, 0.99])]
        skews: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Scalability sweep: one family at increasing input sizes.
    SweepSize {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', value_parser = parse_size, default_values_t = vec![1_000_000usize, 10_000_000, 100_000_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Benchmark keys from a raw binary file (little-endian 64-bit values).
    File {
        #[arg(long)]
        path: PathBuf,
        /// How to interpret the 64-bit values: f64 or u64.
        #[arg(long = "type", default_value = "f64")]
        key_type: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn parse_size(s: &str) -> Result<usize, String> {
    if let Ok(v) = s.parse::<usize>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("invalid size `{s}`"))?;
    if v < 0.0 || v.fract() != 0.0 || v > 2f64.powi(53) {
        return Err(format!("size `{s}` is not a non-negative integer"));
    }
    Ok(v as usize)
}

fn parse_family(name: &str, params: &[String]) -> Result<Family> {
    let mut family = Family::from_name(name)?;
    for p in params {
        let (key, value) = p
            .split_once('=')
            .with_context(|| format!("parameter `{p}` is not KEY=VALUE"))?;
        let value: f64 = value
            .parse()
            .with_context(|| format!("parameter `{p}` has a non-numeric value"))?;
        family.set_param(key.trim(), value)?;
    }
    Ok(family)
}

fn parse_algos(names: &[String]) -> Result<Vec<Algorithm>> {
    names
        .iter()
        .map(|s| s.parse::<Algorithm>().map_err(Into::into))
        .collect()
}

fn main() {
    match run() {
        Ok(all_verified) => {
            if !all_verified {
                eprintln!("error: at least one run failed verification");
                std::process::exit(1);
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    let config = SortConfig::default();
    let (records, common) = match cli.command {
        Command::Run {
            family,
            n,
            seed,
            params,
            key_type,
            common,
        } => {
            let family = parse_family(&family, &params)?;
            let key_type: KeyType = key_type.parse()?;
            let source = BenchSource::Synthetic {
                spec: DatasetSpec::new(family, n, seed),
                key_type,
            };
            let records =
                run_benchmark_source(&source, &parse_algos(&common.algos)?, common.repeats, &config)?;
            (records, common)
        }
        Command::SweepZipf {
            n,
            skews,
            seed,
            common,
        } => {
            let algos = parse_algos(&common.algos)?;
            let mut records = Vec::new();
            // Reference line: the same size with no duplicates.
            let normal = BenchSource::Synthetic {
                spec: DatasetSpec::new(Family::from_name("normal")?, n, seed),
                key_type: KeyType::F64,
            };
            records.extend(run_benchmark_source(&normal, &algos, common.repeats, &config)?);
            for &skew in &skews {
                if !(skew > 0.0) {
                    bail!("zipf skew must be > 0, got {skew}");
                }
                let source = BenchSource::Synthetic {
                    spec: DatasetSpec::new(Family::Zipf { skew }, n, seed),
                    key_type: KeyType::F64,
                };
                records.extend(run_benchmark_source(&source, &algos, common.repeats, &config)?);
            }
            (records, common)
        }
        Command::SweepSize {
            family,
            sizes,
            seed,
            params,
            common,
        } => {
            let family = parse_family(&family, &params)?;
            let algos = parse_algos(&common.algos)?;
            let mut records = Vec::new();
            for &n in &sizes {
                let source = BenchSource::Synthetic {
                    spec: DatasetSpec::new(family.clone(), n, seed),
                    key_type: KeyType::F64,
                };
                records.extend(run_benchmark_source(&source, &algos, common.repeats, &config)?);
            }
            (records, common)
        }
        Command::File {
            path,
            key_type,
            common,
        } => {
            let key_type: KeyType = key_type.parse()?;
            let source = BenchSource::File { path, key_type };
            let records =
                run_benchmark_source(&source, &parse_algos(&common.algos)?, common.repeats, &config)?;
            (records, common)
        }
    };

    print_table(&records);
    if let Some(path) = &common.csv {
        write_csv(&records, path)?;
        eprintln!("wrote {} records to {}", records.len(), path.display());
    }
    Ok(records.iter().all(BenchmarkRecord::verified))
}

fn print_table(records: &[BenchmarkRecord]) {
    println!(
        "{:<14} {:<28} {:>12} {:>6} {:>9} {:>14} {:>12} {:>7} {:>7}",
        "algorithm", "dataset", "n", "seed", "dup", "elapsed_ms", "Mkeys/s", "sorted", "perm"
    );
    for r in records {
        println!(
            "{:<14} {:<28} {:>12} {:>6} {:>9.4} {:>14.3} {:>12.2} {:>7} {:>7}",
            r.algorithm.name(),
            r.dataset,
            r.n,
            r.seed,
            r.dup_ratio,
            r.elapsed_ns as f64 / 1e6,
            r.rate_keys_per_sec / 1e6,
            r.sorted_ok,
            r.permutation_ok
        );
    }
}
