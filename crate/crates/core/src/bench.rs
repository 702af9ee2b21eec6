//! Wall-clock and memory measurement for the build and detect phases,
//! reported as CSV.
//!
//! Timings are reported, never asserted against reference hardware. The
//! hardware-independent observables are the `examined` and `cells_probed`
//! counters carried on the detection report.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::dataset::{self, DatasetSpec};
use crate::error::{Error, Result};
use crate::geom::{Point, QueryConfig, Scheme};
use crate::grid::build_index;

pub const CSV_HEADER: &str =
    "dataset_label,n,mode,phase,mem_mib,mean_ms,max_ms,min_ms,repeats,examined";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Build,
    Detect,
}

impl Phase {
    pub fn name(&self) -> &'static str {
        match self {
            Phase::Build => "BUILD",
            Phase::Detect => "DETECT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingStats {
    pub mean_ms: f64,
    pub max_ms: f64,
    pub min_ms: f64,
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub dataset_label: String,
    pub n: usize,
    pub mode: String,
    pub phase: Phase,
    /// Process-level peak resident memory; absent when the platform offers
    /// no resident-set probe. Not comparable across processes.
    pub mem_mib: Option<f64>,
    pub timing: TimingStats,
    pub repeats: usize,
    pub examined: u64,
}

impl BenchRecord {
    pub fn csv_line(&self) -> String {
        let mem = self
            .mem_mib
            .map(|m| format!("{m:.1}"))
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{:.3},{:.3},{:.3},{},{}",
            self.dataset_label,
            self.n,
            self.mode,
            self.phase.name(),
            mem,
            self.timing.mean_ms,
            self.timing.max_ms,
            self.timing.min_ms,
            self.repeats,
            self.examined
        )
    }
}

/// Wall-clock statistics over `repeats` executions. The first execution is
/// included; there is no warm-up pass.
pub fn time_phase<F: FnMut()>(mut action: F, repeats: usize) -> Result<TimingStats> {
    if repeats < 3 {
        return Err(Error::Config(format!("repeats must be >= 3, got {repeats}")));
    }
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        action();
        samples.push(start.elapsed().as_secs_f64() * 1e3);
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let max = samples.iter().cloned().fold(f64::MIN, f64::max);
    let min = samples.iter().cloned().fold(f64::MAX, f64::min);
    Ok(TimingStats {
        mean_ms: mean,
        max_ms: max,
        min_ms: min,
    })
}

/// Peak resident set of this process in MiB, from /proc/self/status VmHWM.
/// None when unavailable; never a guess.
pub fn peak_memory_mib() -> Option<f64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    for line in status.lines() {
        if let Some(rest) = line.strip_prefix("VmHWM:") {
            let kib: f64 = rest.trim().trim_end_matches("kB").trim().parse().ok()?;
            return Some(kib / 1024.0);
        }
    }
    None
}

/// Runs an action and reports the process peak memory afterwards.
pub fn measure_peak_memory<F: FnOnce()>(action: F) -> Option<f64> {
    action();
    peak_memory_mib()
}

/// A dataset to benchmark: generated from a spec, or loaded from a file.
#[derive(Debug, Clone)]
pub enum BenchDataset {
    Generated(DatasetSpec),
    File(PathBuf),
}

impl BenchDataset {
    pub fn label(&self) -> String {
        match self {
            BenchDataset::Generated(spec) => format!("{}-{}", spec.family_label, spec.n),
            BenchDataset::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        }
    }

    pub fn load(&self) -> Result<Vec<Point<f64>>> {
        match self {
            BenchDataset::Generated(spec) => Ok(dataset::generate(spec)),
            BenchDataset::File(path) => dataset::read_dataset(path),
        }
    }
}

/// Benchmarks every (dataset, mode) combination over both phases and writes
/// the CSV. Row order is (dataset, mode, phase); the `parallel` flag routes
/// detection through the concurrent path, which must not change flagged ids.
pub fn run_suite(
    datasets: &[BenchDataset],
    threshold: f64,
    modes: &[Scheme],
    repeats: usize,
    out_path: &Path,
    parallel: bool,
) -> Result<Vec<BenchRecord>> {
    if repeats < 3 {
        return Err(Error::Config(format!("repeats must be >= 3, got {repeats}")));
    }
    let mut records = Vec::new();
    for ds in datasets {
        let label = ds.label();
        let points = ds.load()?;
        for &mode in modes {
            let cfg = QueryConfig::new(threshold)?.with_scheme(mode);

            let build_timing = time_phase(
                || {
                    let _ = build_index(&points, &cfg).unwrap();
                },
                repeats,
            )?;
            records.push(BenchRecord {
                dataset_label: label.clone(),
                n: points.len(),
                mode: mode.name().to_string(),
                phase: Phase::Build,
                mem_mib: peak_memory_mib(),
                timing: build_timing,
                repeats,
                examined: 0,
            });

            let hash = build_index(&points, &cfg)?;
            let mut examined = 0;
            let detect_timing = time_phase(
                || {
                    let report = if parallel {
                        hash.detect_parallel(&cfg)
                    } else {
                        hash.detect(&cfg)
                    };
                    examined = report.points_examined;
                },
                repeats,
            )?;
            records.push(BenchRecord {
                dataset_label: label.clone(),
                n: points.len(),
                mode: mode.name().to_string(),
                phase: Phase::Detect,
                mem_mib: peak_memory_mib(),
                timing: detect_timing,
                repeats,
                examined,
            });
        }
    }
    write_csv(&records, out_path)?;
    Ok(records)
}

pub fn write_csv(records: &[BenchRecord], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for rec in records {
        writeln!(w, "{}", rec.csv_line())?;
    }
    w.flush()?;
    Ok(())
}
