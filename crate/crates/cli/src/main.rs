//! Command line front end: generate datasets, run detection, verify against
//! the brute-force oracle, run the benchmark suite.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use prox_core::baseline::brute_force_detect;
use prox_core::bench::{run_suite, BenchDataset};
use prox_core::dataset::{
    family_for_size, generate_to_file, read_dataset, write_report, DatasetSpec, Family,
    CANONICAL_SIZES,
};
use prox_core::grid::build_index;
use prox_core::{QueryConfig3, Scheme};

#[derive(Parser)]
#[command(name = "prox", about = "Proximity detection for 3D point sets", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    /// Cell side = X / sqrt(3); faithful to the original construction but
    /// can miss pairs spanning non-adjacent cells at radius 1.
    DiagonalPaper,
    /// Cell side = X; always agrees with the brute-force oracle.
    SideExact,
}

impl From<SchemeArg> for Scheme {
    fn from(arg: SchemeArg) -> Scheme {
        match arg {
            SchemeArg::DiagonalPaper => Scheme::DiagonalPaper,
            SchemeArg::SideExact => Scheme::SideExact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Dense,
    Sparse,
}

impl From<FamilyArg> for Family {
    fn from(arg: FamilyArg) -> Family {
        match arg {
            FamilyArg::Dense => Family::Dense,
            FamilyArg::Sparse => Family::Sparse,
        }
    }
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("threshold must be positive".to_string())
    }
}

#[derive(Args)]
struct QueryArgs {
    /// Input dataset file (one "x y z" line per point, '#' comments)
    #[arg(long)]
    input: PathBuf,
    /// Distance threshold X in meters
    #[arg(long, default_value = "100", value_parser = parse_threshold)]
    threshold: f64,
    /// Chebyshev probe radius in cells (2 closes the diagonal-paper gap)
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    radius: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded uniform dataset
    Generate {
        /// Number of points
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// dense: 1000 m box; sparse: 20000 m box (8000x the volume)
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect all points closer than the threshold to another point
    Detect {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum, default_value = "diagonal-paper")]
        scheme: SchemeArg,
        /// Report file ("id x y z" per flagged point); stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Partition cells across worker threads (same output contract)
        #[arg(long)]
        parallel: bool,
    },
    /// Compare a scheme against the brute-force oracle; exit 0 iff equal
    Verify {
        #[command(flatten)]
        query: QueryArgs,
        /// side-exact is the trustworthy setting; diagonal-paper exposes the
        /// known radius-1 false negatives
        #[arg(long, value_enum, default_value = "side-exact")]
        scheme: SchemeArg,
    },
    /// Run the benchmark suite and write a CSV
    Bench {
        /// Dataset sizes (sizes starting "15" use the sparse family)
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        sizes: Option<Vec<u64>>,
        /// Override the per-size family mapping with a fixed list
        #[arg(long, value_enum, value_delimiter = ',', num_args = 1..)]
        families: Option<Vec<FamilyArg>>,
        #[arg(long, value_enum, value_delimiter = ',', num_args = 1..,
              default_values = ["diagonal-paper", "side-exact"])]
        modes: Vec<SchemeArg>,
        #[arg(long, default_value = "100", value_parser = parse_threshold)]
        threshold: f64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(3..))]
        repeats: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "bench.csv")]
        out: PathBuf,
        #[arg(long)]
        parallel: bool,
    },
}

fn build_config(query: &QueryArgs, scheme: SchemeArg) -> prox_core::Result<QueryConfig3> {
    QueryConfig3::new(query.threshold)?
        .with_scheme(scheme.into())
        .with_probe_radius(query.radius)
}

fn cmd_generate(n: u64, family: Family, seed: u64, out: PathBuf) -> prox_core::Result<()> {
    let spec = DatasetSpec::new(n as usize, family, seed);
    let points = generate_to_file(&spec, &out)?;
    println!("{} ({} points)", out.display(), points.len());
    Ok(())
}

fn cmd_detect(
    query: QueryArgs,
    scheme: SchemeArg,
    out: Option<PathBuf>,
    parallel: bool,
) -> prox_core::Result<()> {
    let cfg = build_config(&query, scheme)?;
    let points = read_dataset(&query.input)?;
    let hash = build_index(&points, &cfg)?;
    let report = if parallel {
        hash.detect_parallel(&cfg)
    } else {
        hash.detect(&cfg)
    };
    match &out {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            write_report(std::io::BufWriter::new(file), &points, report.flagged_ids())?;
        }
        None => {
            let stdout = std::io::stdout();
            write_report(stdout.lock(), &points, report.flagged_ids())?;
        }
    }
    eprintln!(
        "flagged {} of {} points (examined {}, cells probed {})",
        report.flagged_ids().len(),
        points.len(),
        report.points_examined,
        report.cells_probed
    );
    Ok(())
}

fn cmd_verify(query: QueryArgs, scheme: SchemeArg) -> prox_core::Result<bool> {
    let cfg = build_config(&query, scheme)?;
    let points = read_dataset(&query.input)?;
    let hash = build_index(&points, &cfg)?;
    let got = hash.detect(&cfg);
    let oracle = brute_force_detect(&points, &cfg);

    let got_ids = got.flagged_ids();
    let oracle_ids = oracle.flagged_ids();
    let missing: Vec<u64> = oracle_ids
        .iter()
        .filter(|id| got_ids.binary_search(id).is_err())
        .copied()
        .collect();
    let extra: Vec<u64> = got_ids
        .iter()
        .filter(|id| oracle_ids.binary_search(id).is_err())
        .copied()
        .collect();
    let diff = missing.len() + extra.len();

    println!(
        "scheme={} flagged={} oracle={} symmetric_difference={}",
        cfg.scheme.name(),
        got_ids.len(),
        oracle_ids.len(),
        diff
    );
    if diff > 0 {
        let sample: Vec<u64> = missing.iter().chain(&extra).take(10).copied().collect();
        println!("sample differing ids: {sample:?}");
    }
    Ok(diff == 0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    sizes: Option<Vec<u64>>,
    families: Option<Vec<FamilyArg>>,
    modes: Vec<SchemeArg>,
    threshold: f64,
    repeats: u64,
    seed: u64,
    out: PathBuf,
    parallel: bool,
) -> prox_core::Result<()> {
    let sizes: Vec<usize> = sizes
        .map(|v| v.iter().map(|&n| n as usize).collect())
        .unwrap_or_else(|| CANONICAL_SIZES.to_vec());
    let mut datasets = Vec::new();
    for &n in &sizes {
        match &families {
            // default: the "15"-prefix sizes are sparse, the rest dense
            None => datasets.push(BenchDataset::Generated(DatasetSpec::new(
                n,
                family_for_size(n),
                seed,
            ))),
            Some(fams) => {
                for &fam in fams {
                    datasets.push(BenchDataset::Generated(DatasetSpec::new(
                        n,
                        fam.into(),
                        seed,
                    )));
                }
            }
        }
    }
    let modes: Vec<Scheme> = modes.into_iter().map(Scheme::from).collect();
    run_suite(&datasets, threshold, &modes, repeats as usize, &out, parallel)?;
    println!("{}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate { n, family, seed, out } => {
            cmd_generate(n, family.into(), seed, out).map(|()| true)
        }
        Command::Detect { query, scheme, out, parallel } => {
            cmd_detect(query, scheme, out, parallel).map(|()| true)
        }
        Command::Verify { query, scheme } => cmd_verify(query, scheme),
        Command::Bench { sizes, families, modes, threshold, repeats, seed, out, parallel } => {
            cmd_bench(sizes, families, modes, threshold, repeats, seed, out, parallel)
                .map(|()| true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            let _ = writeln!(std::io::stderr(), "error: {err}");
            ExitCode::FAILURE
        }
    }
}
