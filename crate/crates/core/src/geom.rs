//! Core domain types: identified 3D points, threshold queries, collision reports.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An identified position in 3D space, coordinates in meters.
///
/// Ids are dataset line ordinals and must be unique within one dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<S> {
    pub id: u64,
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> Point<S> {
    /// Builds a point, rejecting non-finite coordinates.
    pub fn new(id: u64, x: S, y: S, z: S) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::Config(format!(
                "point {id} has non-finite coordinates ({x}, {y}, {z})"
            )));
        }
        Ok(Self { id, x, y, z })
    }

    pub fn distance_sq(&self, other: &Self) -> S {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }
}

/// Euclidean distance in meters.
pub fn distance<S: Scalar>(a: &Point<S>, b: &Point<S>) -> S {
    a.distance_sq(b).sqrt()
}

/// Cell-sizing scheme for the spatial hash.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Cell side = X / sqrt(3): the cube's space diagonal equals the
    /// threshold. Faithful to the original construction, but pairs spanning
    /// non-adjacent cells can be missed at probe radius 1.
    DiagonalPaper,
    /// Cell side = X: any pair within the threshold lies in the same cell or
    /// one of the 26 adjacent cells, so radius-1 probing is complete.
    SideExact,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::DiagonalPaper => "diagonal-paper",
            Scheme::SideExact => "side-exact",
        }
    }
}

/// Threshold query parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryConfig<S> {
    pub threshold_x: S,
    pub scheme: Scheme,
    /// Chebyshev radius (in cells) of the neighbor probe. Radius 1 is the
    /// 26-cell neighborhood; radius 2 adds the next layer (124 cells).
    pub probe_radius: u32,
    /// true: "closer than" is strict (< X). false: <= X.
    pub strict: bool,
}

impl<S: Scalar> QueryConfig<S> {
    pub fn new(threshold_x: S) -> Result<Self> {
        if !(threshold_x.is_finite() && threshold_x > S::zero()) {
            return Err(Error::Config(format!(
                "threshold must be positive and finite, got {threshold_x}"
            )));
        }
        Ok(Self {
            threshold_x,
            scheme: Scheme::DiagonalPaper,
            probe_radius: 1,
            strict: true,
        })
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_probe_radius(mut self, radius: u32) -> Result<Self> {
        if radius < 1 {
            return Err(Error::Config("probe radius must be >= 1".into()));
        }
        self.probe_radius = radius;
        Ok(self)
    }

    pub fn with_strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    /// Cell side length under the configured scheme.
    pub fn cell_side(&self) -> S {
        match self.scheme {
            Scheme::DiagonalPaper => self.threshold_x / S::sqrt_3(),
            Scheme::SideExact => self.threshold_x,
        }
    }
}

/// True when a and b are closer than the threshold (strict or not per cfg).
pub fn within_threshold<S: Scalar>(a: &Point<S>, b: &Point<S>, cfg: &QueryConfig<S>) -> bool {
    let d2 = a.distance_sq(b);
    let t2 = cfg.threshold_x * cfg.threshold_x;
    if cfg.strict {
        d2 < t2
    } else {
        d2 <= t2
    }
}

/// The deduplicated, ascending set of point ids at risk, with audit counters.
///
/// The counters are the hardware-independent observable for probe cost:
/// `points_examined` counts distance comparisons, `cells_probed` counts cell
/// lookups during neighbor probes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CollisionReport {
    flagged_ids: Vec<u64>,
    pub points_examined: u64,
    pub cells_probed: u64,
}

impl CollisionReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a report from an arbitrary id collection; sorts and dedups.
    pub fn from_ids(mut ids: Vec<u64>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self {
            flagged_ids: ids,
            points_examined: 0,
            cells_probed: 0,
        }
    }

    pub fn flagged_ids(&self) -> &[u64] {
        &self.flagged_ids
    }

    pub fn flag(&mut self, id: u64) {
        match self.flagged_ids.binary_search(&id) {
            Ok(_) => {}
            Err(pos) => self.flagged_ids.insert(pos, id),
        }
    }

    /// Appends without maintaining order; callers pair this with
    /// `normalize` once the batch is complete.
    pub(crate) fn push_unsorted(&mut self, id: u64) {
        self.flagged_ids.push(id);
    }

    pub(crate) fn normalize(&mut self) {
        self.flagged_ids.sort_unstable();
        self.flagged_ids.dedup();
    }

    /// Sorted deduplicated union of the id sets; counters are summed.
    /// Associative and commutative on the id set.
    pub fn merge(mut self, other: CollisionReport) -> CollisionReport {
        self.flagged_ids.extend(other.flagged_ids);
        self.flagged_ids.sort_unstable();
        self.flagged_ids.dedup();
        self.points_examined += other.points_examined;
        self.cells_probed += other.cells_probed;
        self
    }
}
