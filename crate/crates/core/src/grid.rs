//! Lazy cube grid keyed by integer triples.
//!
//! Space is split into cubes of side `cell_side`; a cube is only created when
//! a point lands in it. Keys are integer triples, not concatenated digit
//! strings: componentwise equality means two distinct cells can never share a
//! key, which is what actually delivers the collision-free-table guarantee.

use std::collections::HashSet;
use std::hash::{BuildHasherDefault, Hasher};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

/// Point ids are line ordinals, i.e. dense integers, so the identity is a
/// perfectly distributed hash and keeps set probes sequential instead of
/// scattering them across the table.
#[derive(Default)]
pub(crate) struct IdHasher(u64);

impl Hasher for IdHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ u64::from(b);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = v;
    }
}

type IdSet = HashSet<u64, BuildHasherDefault<IdHasher>>;

use crate::error::{Error, Result};
use crate::geom::{within_threshold, CollisionReport, Point, QueryConfig, Scheme};
use crate::scalar::Scalar;

/// Integer triple addressing one cube of space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

impl CellKey {
    pub fn new(i: i64, j: i64, k: i64) -> Self {
        Self { i, j, k }
    }

    pub fn offset(&self, di: i64, dj: i64, dk: i64) -> Self {
        Self::new(self.i + di, self.j + dj, self.k + dk)
    }
}

impl std::fmt::Display for CellKey {
    /// Debug rendering only; the map key is the triple itself.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.i, self.j, self.k)
    }
}

/// Maps a point to its cell. Mathematical floor (toward -inf), so negative
/// coordinates get negative indices and every cell spans [i*s, (i+1)*s).
pub fn cell_key<S: Scalar>(p: &Point<S>, cell_side: S) -> CellKey {
    debug_assert!(cell_side > S::zero());
    let idx = |v: S| {
        (v / cell_side)
            .floor()
            .to_i64()
            .expect("cell index out of i64 range")
    };
    CellKey::new(idx(p.x), idx(p.y), idx(p.z))
}

/// The (2r+1)^3 - 1 keys with Chebyshev distance in [1, r] from `key`,
/// excluding `key` itself, in lexicographic (di, dj, dk) order.
pub fn neighbor_keys(key: CellKey, radius: u32) -> Vec<CellKey> {
    assert!(radius >= 1, "probe radius must be >= 1");
    let r = radius as i64;
    let mut out = Vec::with_capacity(((2 * r + 1).pow(3) - 1) as usize);
    for di in -r..=r {
        for dj in -r..=r {
            for dk in -r..=r {
                if di == 0 && dj == 0 && dk == 0 {
                    continue;
                }
                out.push(key.offset(di, dj, dk));
            }
        }
    }
    out
}

/// Map from cell key to the points in that cube, plus the side length.
///
/// Per-cell collections are an unordered multiset contract; detection never
/// depends on intra-cell order.
#[derive(Debug, Clone)]
pub struct SpatialHash<S> {
    cell_side: S,
    cells: FxHashMap<CellKey, Vec<Point<S>>>,
    ids: IdSet,
    point_count: usize,
}

impl<S: Scalar> SpatialHash<S> {
    pub fn new(cell_side: S) -> Self {
        assert!(cell_side > S::zero(), "cell side must be positive");
        Self {
            cell_side,
            cells: FxHashMap::default(),
            ids: IdSet::default(),
            point_count: 0,
        }
    }

    pub fn cell_side(&self) -> S {
        self.cell_side
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn occupied_cells(&self) -> usize {
        self.cells.len()
    }

    /// Fraction of occupied cells holding exactly one point.
    pub fn single_occupancy_fraction(&self) -> f64 {
        if self.cells.is_empty() {
            return 0.0;
        }
        let singles = self.cells.values().filter(|pts| pts.len() == 1).count();
        singles as f64 / self.cells.len() as f64
    }

    pub fn cell(&self, key: &CellKey) -> Option<&[Point<S>]> {
        self.cells.get(key).map(Vec::as_slice)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&CellKey, &[Point<S>])> {
        self.cells.iter().map(|(k, v)| (k, v.as_slice()))
    }

    /// Inserts a point into its cell, creating the cell lazily.
    pub fn insert(&mut self, p: Point<S>) -> Result<()> {
        if !self.ids.insert(p.id) {
            return Err(Error::DuplicateId(p.id));
        }
        let key = cell_key(&p, self.cell_side);
        self.cells.entry(key).or_default().push(p);
        self.point_count += 1;
        Ok(())
    }

    /// Probes the neighborhood of a point that sits alone in its cell and
    /// returns the ids at risk: {p.id} plus every in-threshold neighbor, or
    /// the empty set when none exists. Counters record the probe cost.
    pub fn find_for_single_point(
        &self,
        p: &Point<S>,
        cfg: &QueryConfig<S>,
    ) -> Result<CollisionReport> {
        let key = cell_key(p, self.cell_side);
        let occupancy = self
            .cells
            .get(&key)
            .map(|pts| pts.len())
            .unwrap_or(0);
        if occupancy != 1 || !self.ids.contains(&p.id) {
            return Err(Error::NotAlone {
                id: p.id,
                occupancy,
            });
        }
        let mut report = CollisionReport::new();
        self.probe_lone(p, key, cfg, &mut report);
        report.normalize();
        Ok(report)
    }

    fn probe_lone(
        &self,
        p: &Point<S>,
        key: CellKey,
        cfg: &QueryConfig<S>,
        report: &mut CollisionReport,
    ) {
        let mut hit = false;
        for nk in neighbor_keys(key, cfg.probe_radius) {
            report.cells_probed += 1;
            let Some(pts) = self.cells.get(&nk) else {
                continue;
            };
            for q in pts {
                report.points_examined += 1;
                if within_threshold(p, q, cfg) {
                    hit = true;
                    report.push_unsorted(q.id);
                }
            }
        }
        if hit {
            report.push_unsorted(p.id);
        }
    }

    /// True when some distinct point in the cell or its neighborhood is
    /// within the threshold of `p`. Early-exits on the first hit.
    fn has_close_neighbor(
        &self,
        p: &Point<S>,
        key: CellKey,
        cfg: &QueryConfig<S>,
        report: &mut CollisionReport,
    ) -> bool {
        report.cells_probed += 1;
        if let Some(pts) = self.cells.get(&key) {
            for q in pts {
                if q.id == p.id {
                    continue;
                }
                report.points_examined += 1;
                if within_threshold(p, q, cfg) {
                    return true;
                }
            }
        }
        for nk in neighbor_keys(key, cfg.probe_radius) {
            report.cells_probed += 1;
            let Some(pts) = self.cells.get(&nk) else {
                continue;
            };
            for q in pts {
                report.points_examined += 1;
                if within_threshold(p, q, cfg) {
                    return true;
                }
            }
        }
        false
    }

    fn detect_cells(&self, keys: &[CellKey], cfg: &QueryConfig<S>) -> CollisionReport {
        let mut report = CollisionReport::new();
        for key in keys {
            let pts = &self.cells[key];
            match cfg.scheme {
                Scheme::DiagonalPaper => {
                    if pts.len() >= 2 {
                        // Cube diagonal equals X: every same-cell pair is
                        // within X under non-strict comparison, so the whole
                        // cell is flagged without a distance computation.
                        for p in pts {
                            report.push_unsorted(p.id);
                        }
                    } else {
                        self.probe_lone(&pts[0], *key, cfg, &mut report);
                    }
                }
                Scheme::SideExact => {
                    for p in pts {
                        if self.has_close_neighbor(p, *key, cfg, &mut report) {
                            report.push_unsorted(p.id);
                        }
                    }
                }
            }
        }
        report.normalize();
        report
    }

    fn sorted_keys(&self) -> Vec<CellKey> {
        let mut keys: Vec<CellKey> = self.cells.keys().copied().collect();
        keys.sort_unstable();
        keys
    }

    /// Runs whole-set collision detection under the configured scheme.
    ///
    /// Cells are visited in sorted key order, so counters are deterministic
    /// for a fixed input file.
    pub fn detect(&self, cfg: &QueryConfig<S>) -> CollisionReport {
        self.detect_cells(&self.sorted_keys(), cfg)
    }

    /// Same contract as `detect`, with cells partitioned across workers and
    /// partial reports folded with `merge_results`. The flagged id set is
    /// schedule-independent.
    pub fn detect_parallel(&self, cfg: &QueryConfig<S>) -> CollisionReport {
        let keys = self.sorted_keys();
        if keys.is_empty() {
            return CollisionReport::new();
        }
        let chunk = (keys.len() / (rayon::current_num_threads() * 4)).max(1);
        keys.par_chunks(chunk)
            .map(|part| self.detect_cells(part, cfg))
            .reduce(CollisionReport::new, merge_results)
    }
}

/// Builds the hash over all points with the side length taken from the
/// configured scheme.
pub fn build_index<S: Scalar>(
    points: &[Point<S>],
    cfg: &QueryConfig<S>,
) -> Result<SpatialHash<S>> {
    let side = cfg.cell_side();
    let mut hash = SpatialHash::new(side);
    hash.ids.reserve(points.len());

    // Two passes: count occupancy first so every cell vector is allocated at
    // its exact final size, then fill through dense slot indices. One hash
    // probe per point instead of two, and no reallocation churn on
    // million-point builds.
    let mut slots: FxHashMap<CellKey, u32> = FxHashMap::default();
    let mut point_slots = Vec::with_capacity(points.len());
    let mut counts: Vec<usize> = Vec::new();
    for p in points {
        if !hash.ids.insert(p.id) {
            return Err(Error::DuplicateId(p.id));
        }
        let key = cell_key(p, side);
        let slot = *slots.entry(key).or_insert_with(|| {
            counts.push(0);
            (counts.len() - 1) as u32
        });
        counts[slot as usize] += 1;
        point_slots.push(slot);
    }
    let mut buckets: Vec<Vec<Point<S>>> = counts
        .iter()
        .map(|&c| Vec::with_capacity(c))
        .collect();
    for (p, slot) in points.iter().zip(point_slots) {
        buckets[slot as usize].push(*p);
    }
    hash.cells.reserve(slots.len());
    for (key, slot) in slots {
        hash.cells
            .insert(key, std::mem::take(&mut buckets[slot as usize]));
    }
    hash.point_count = points.len();
    Ok(hash)
}

/// Sorted deduplicated union of two partial reports; counters are summed.
pub fn merge_results(acc: CollisionReport, part: CollisionReport) -> CollisionReport {
    acc.merge(part)
}
