//! Ground-truth oracle and the KD-tree baseline.
//!
//! The oracle is a plain all-pairs scan sharing only `within_threshold` with
//! the grid path, so it stays a genuine cross-check. The KD-tree is the
//! rejected first approach, kept for comparative benchmarks.

use crate::geom::{within_threshold, CollisionReport, Point, QueryConfig};
use crate::scalar::Scalar;

/// O(n^2) all-pairs detection; treated as ground truth for set equality.
pub fn brute_force_detect<S: Scalar>(
    points: &[Point<S>],
    cfg: &QueryConfig<S>,
) -> CollisionReport {
    let mut report = CollisionReport::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            report.points_examined += 1;
            if within_threshold(a, b, cfg) {
                report.flag(a.id);
                report.flag(b.id);
            }
        }
    }
    report
}

struct KdNode<S> {
    point: Point<S>,
    axis: usize,
    left: Option<Box<KdNode<S>>>,
    right: Option<Box<KdNode<S>>>,
}

/// Median-split binary spatial partition, axis cycling x -> y -> z.
pub struct KdTree<S> {
    root: Option<Box<KdNode<S>>>,
    len: usize,
}

fn coord<S: Scalar>(p: &Point<S>, axis: usize) -> S {
    match axis {
        0 => p.x,
        1 => p.y,
        _ => p.z,
    }
}

fn build_node<S: Scalar>(points: &mut [Point<S>], depth: usize) -> Option<Box<KdNode<S>>> {
    if points.is_empty() {
        return None;
    }
    let axis = depth % 3;
    // Stable tie-break by id keeps the build deterministic.
    points.sort_by(|a, b| {
        coord(a, axis)
            .partial_cmp(&coord(b, axis))
            .unwrap()
            .then(a.id.cmp(&b.id))
    });
    let mid = points.len() / 2;
    let (left, rest) = points.split_at_mut(mid);
    let (pivot, right) = rest.split_at_mut(1);
    Some(Box::new(KdNode {
        point: pivot[0],
        axis,
        left: build_node(left, depth + 1),
        right: build_node(right, depth + 1),
    }))
}

/// Builds a balanced median-split tree; depth is O(log n).
pub fn kd_build<S: Scalar>(points: &[Point<S>]) -> KdTree<S> {
    let mut pts = points.to_vec();
    KdTree {
        root: build_node(&mut pts, 0),
        len: points.len(),
    }
}

impl<S: Scalar> KdTree<S> {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn depth(&self) -> usize {
        fn go<S>(node: &Option<Box<KdNode<S>>>) -> usize {
            match node {
                None => 0,
                Some(n) => 1 + go(&n.left).max(go(&n.right)),
            }
        }
        go(&self.root)
    }

    pub fn root_point(&self) -> Option<&Point<S>> {
        self.root.as_deref().map(|n| &n.point)
    }

    /// True when some point other than `p` (by id) is within the threshold.
    /// Subtrees farther than X on the split axis are pruned.
    fn has_neighbor_within(&self, p: &Point<S>, cfg: &QueryConfig<S>) -> bool {
        let mut stack = Vec::new();
        if let Some(root) = &self.root {
            stack.push(root);
        }
        while let Some(node) = stack.pop() {
            if node.point.id != p.id && within_threshold(p, &node.point, cfg) {
                return true;
            }
            let delta = coord(p, node.axis) - coord(&node.point, node.axis);
            // delta <= 0: the near side is the left subtree, and the right
            // subtree survives only if the axis gap is within X.
            let (near, far) = if delta <= S::zero() {
                (&node.left, &node.right)
            } else {
                (&node.right, &node.left)
            };
            if let Some(n) = near {
                stack.push(n);
            }
            if delta.abs() <= cfg.threshold_x {
                if let Some(n) = far {
                    stack.push(n);
                }
            }
        }
        false
    }
}

/// Per-point fixed-radius tree search; same id-set contract as the oracle.
pub fn kd_detect<S: Scalar>(
    tree: &KdTree<S>,
    points: &[Point<S>],
    cfg: &QueryConfig<S>,
) -> CollisionReport {
    let mut report = CollisionReport::new();
    for p in points {
        if tree.has_neighbor_within(p, cfg) {
            report.flag(p.id);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Scheme;

    fn p(id: u64, x: f64, y: f64, z: f64) -> Point<f64> {
        Point::new(id, x, y, z).unwrap()
    }

    fn cfg(threshold: f64) -> QueryConfig<f64> {
        QueryConfig::new(threshold).unwrap()
    }

    #[test]
    fn brute_single_point() {
        assert!(brute_force_detect(&[p(0, 1.0, 2.0, 3.0)], &cfg(100.0))
            .flagged_ids()
            .is_empty());
    }

    #[test]
    fn brute_close_pair() {
        let pts = vec![p(0, 0.0, 0.0, 0.0), p(1, 30.0, 40.0, 0.0)];
        assert_eq!(brute_force_detect(&pts, &cfg(100.0)).flagged_ids(), &[0, 1]);
    }

    #[test]
    fn brute_equilateral_triangle() {
        let tri = |side: f64| {
            vec![
                p(0, 0.0, 0.0, 0.0),
                p(1, side, 0.0, 0.0),
                p(2, side / 2.0, side * 3f64.sqrt() / 2.0, 0.0),
            ]
        };
        assert!(brute_force_detect(&tri(120.0), &cfg(100.0)).flagged_ids().is_empty());
        assert_eq!(brute_force_detect(&tri(90.0), &cfg(100.0)).flagged_ids(), &[0, 1, 2]);
    }

    #[test]
    fn kd_build_empty() {
        let t = kd_build::<f64>(&[]);
        assert!(t.is_empty());
        assert_eq!(t.depth(), 0);
    }

    #[test]
    fn kd_root_is_median_by_x() {
        let pts: Vec<_> = [50.0, 10.0, 70.0, 30.0, 20.0, 60.0, 40.0]
            .iter()
            .enumerate()
            .map(|(i, &x)| p(i as u64, x, 0.0, 0.0))
            .collect();
        // sorted x: 10 20 30 40 50 60 70 -> median (4th) is 40
        let t = kd_build(&pts);
        assert_eq!(t.root_point().unwrap().x, 40.0);
    }

    #[test]
    fn kd_detect_far_pair() {
        let pts = vec![p(0, 0.0, 0.0, 0.0), p(1, 200.0, 0.0, 0.0)];
        let t = kd_build(&pts);
        assert!(kd_detect(&t, &pts, &cfg(100.0)).flagged_ids().is_empty());
    }

    #[test]
    fn kd_detect_matches_oracle_dense() {
        // 500 pseudo-random points in a 200 m box, X = 100.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let pts: Vec<_> = (0..500)
            .map(|i| p(i, next() * 200.0, next() * 200.0, next() * 200.0))
            .collect();
        let c = cfg(100.0).with_scheme(Scheme::SideExact);
        let t = kd_build(&pts);
        assert_eq!(
            kd_detect(&t, &pts, &c).flagged_ids(),
            brute_force_detect(&pts, &c).flagged_ids()
        );
    }

    #[test]
    fn kd_depth_is_logarithmic() {
        let mut state = 42u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let n = 100_000;
        let pts: Vec<_> = (0..n)
            .map(|i| p(i, next() * 1e4, next() * 1e4, next() * 1e4))
            .collect();
        let t = kd_build(&pts);
        let bound = 2 * (n as f64).log2().ceil() as usize;
        assert!(t.depth() <= bound, "depth {} > bound {}", t.depth(), bound);
    }
}
