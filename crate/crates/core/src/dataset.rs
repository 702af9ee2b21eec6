//! Deterministic dataset generation and plain-text file I/O.
//!
//! File format: one point per line, three reals separated by single spaces,
//! LF line endings. Lines starting with '#' are comments; the generator
//! records its spec and seed there. Ids are line ordinals among non-comment
//! lines.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::Point;

/// Recorded in file headers so datasets are reproducible.
pub const GENERATOR_NAME: &str = "chacha8";

pub const DENSE_BOX_SIDE: f64 = 1_000.0;
/// 20x the dense side: volume ratio 20^3 = 8000.
pub const SPARSE_BOX_SIDE: f64 = 20_000.0;

/// The two dataset families: same point count, very different densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Dense,
    Sparse,
}

impl Family {
    pub fn box_side(&self) -> f64 {
        match self {
            Family::Dense => DENSE_BOX_SIDE,
            Family::Sparse => SPARSE_BOX_SIDE,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Dense => "dense",
            Family::Sparse => "sparse",
        }
    }
}

/// Benchmark convention: sizes whose decimal rendering starts with "15"
/// belong to the sparse family, the rest to the dense family.
pub fn family_for_size(n: usize) -> Family {
    if n.to_string().starts_with("15") {
        Family::Sparse
    } else {
        Family::Dense
    }
}

/// Canonical benchmark sizes.
pub const CANONICAL_SIZES: [usize; 4] = [1_500, 100_000, 150_000, 1_000_000];

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub n: usize,
    pub box_side: f64,
    pub seed: u64,
    pub family_label: String,
}

impl DatasetSpec {
    pub fn new(n: usize, family: Family, seed: u64) -> Self {
        Self {
            n,
            box_side: family.box_side(),
            seed,
            family_label: family.name().to_string(),
        }
    }

    pub fn header_lines(&self) -> Vec<String> {
        vec![
            format!(
                "# dataset family={} n={} box_side={} seed={} generator={}",
                self.family_label, self.n, self.box_side, self.seed, GENERATOR_NAME
            ),
            "# columns: x y z (meters); id = line ordinal among data lines".to_string(),
        ]
    }
}

/// Generates n points with ids 0..n-1, coordinates uniform i.i.d. in
/// [0, box_side]^3. Same spec, same sequence.
pub fn generate(spec: &DatasetSpec) -> Vec<Point<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.n as u64)
        .map(|id| Point {
            id,
            x: rng.gen_range(0.0..=spec.box_side),
            y: rng.gen_range(0.0..=spec.box_side),
            z: rng.gen_range(0.0..=spec.box_side),
        })
        .collect()
}

/// Writes points one per line, preceded by the given '#' header lines.
pub fn write_dataset(path: &Path, points: &[Point<f64>], header: &[String]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for line in header {
        writeln!(w, "{line}")?;
    }
    for p in points {
        writeln!(w, "{} {} {}", p.x, p.y, p.z)?;
    }
    w.flush()?;
    Ok(())
}

/// Generates and writes a dataset in one step, header included.
pub fn generate_to_file(spec: &DatasetSpec, path: &Path) -> Result<Vec<Point<f64>>> {
    let points = generate(spec);
    write_dataset(path, &points, &spec.header_lines())?;
    Ok(points)
}

/// Reads a dataset file; ids are assigned as ordinals over data lines.
pub fn read_dataset(path: &Path) -> Result<Vec<Point<f64>>> {
    if !path.exists() {
        return Err(Error::MissingDataset(path.display().to_string()));
    }
    let reader = BufReader::new(File::open(path)?);
    let mut points = Vec::new();
    let mut next_id = 0u64;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let mut coords = [0.0f64; 3];
        for (slot, field) in coords.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("not a number: {field:?}"),
            })?;
        }
        let point =
            Point::new(next_id, coords[0], coords[1], coords[2]).map_err(|_| Error::Parse {
                line: lineno,
                message: "non-finite coordinate".to_string(),
            })?;
        points.push(point);
        next_id += 1;
    }
    Ok(points)
}

/// Writes a detection report: one "id x y z" line per flagged point, ids
/// ascending.
pub fn write_report<W: Write>(
    mut w: W,
    points: &[Point<f64>],
    flagged_ids: &[u64],
) -> Result<()> {
    let by_id: std::collections::HashMap<u64, &Point<f64>> =
        points.iter().map(|p| (p.id, p)).collect();
    for id in flagged_ids {
        let p = by_id
            .get(id)
            .ok_or_else(|| Error::Config(format!("flagged id {id} not in dataset")))?;
        writeln!(w, "{} {} {} {}", p.id, p.x, p.y, p.z)?;
    }
    Ok(())
}
