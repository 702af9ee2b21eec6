//! Property tests: oracle agreement and structural invariants on random
//! instances.

use proptest::prelude::*;

use prox_core::baseline::{brute_force_detect, kd_build, kd_detect};
use prox_core::geom::{distance, within_threshold, CollisionReport};
use prox_core::grid::{build_index, cell_key};
use prox_core::{Point3, QueryConfig3, Scheme};

fn points_strategy(max_len: usize, extent: f64) -> impl Strategy<Value = Vec<Point3>> {
    prop::collection::vec(
        (-extent..extent, -extent..extent, -extent..extent),
        0..max_len,
    )
    .prop_map(|coords| {
        coords
            .into_iter()
            .enumerate()
            .map(|(id, (x, y, z))| Point3::new(id as u64, x, y, z).unwrap())
            .collect()
    })
}

proptest! {
    #[test]
    fn distance_symmetry_and_triangle(
        a in (-1e4..1e4f64, -1e4..1e4f64, -1e4..1e4f64),
        b in (-1e4..1e4f64, -1e4..1e4f64, -1e4..1e4f64),
        c in (-1e4..1e4f64, -1e4..1e4f64, -1e4..1e4f64),
    ) {
        let pa = Point3::new(0, a.0, a.1, a.2).unwrap();
        let pb = Point3::new(1, b.0, b.1, b.2).unwrap();
        let pc = Point3::new(2, c.0, c.1, c.2).unwrap();
        prop_assert_eq!(distance(&pa, &pb), distance(&pb, &pa));
        let lhs = distance(&pa, &pc);
        let rhs = distance(&pa, &pb) + distance(&pb, &pc);
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn within_threshold_symmetric(
        a in (-500.0..500.0f64, -500.0..500.0f64, -500.0..500.0f64),
        b in (-500.0..500.0f64, -500.0..500.0f64, -500.0..500.0f64),
        strict in any::<bool>(),
    ) {
        let pa = Point3::new(0, a.0, a.1, a.2).unwrap();
        let pb = Point3::new(1, b.0, b.1, b.2).unwrap();
        let cfg = QueryConfig3::new(100.0).unwrap().with_strict(strict);
        prop_assert_eq!(within_threshold(&pa, &pb, &cfg), within_threshold(&pb, &pa, &cfg));
    }

    #[test]
    fn side_exact_equals_oracle_and_kd(pts in points_strategy(120, 400.0)) {
        let cfg = QueryConfig3::new(100.0).unwrap().with_scheme(Scheme::SideExact);
        let oracle = brute_force_detect(&pts, &cfg);
        let hash = build_index(&pts, &cfg).unwrap();
        let grid = hash.detect(&cfg);
        prop_assert_eq!(grid.flagged_ids(), oracle.flagged_ids());
        let tree = kd_build(&pts);
        let kd = kd_detect(&tree, &pts, &cfg);
        prop_assert_eq!(kd.flagged_ids(), oracle.flagged_ids());
    }

    #[test]
    fn diagonal_weak_soundness(pts in points_strategy(100, 400.0)) {
        // every id the diagonal scheme flags is within X of some other point
        // under non-strict comparison
        let cfg = QueryConfig3::new(100.0).unwrap();
        let hash = build_index(&pts, &cfg).unwrap();
        let flagged = hash.detect(&cfg);
        let oracle = brute_force_detect(&pts, &cfg.with_strict(false));
        for id in flagged.flagged_ids() {
            prop_assert!(oracle.flagged_ids().binary_search(id).is_ok());
        }
    }

    #[test]
    fn diagonal_radius_monotone(pts in points_strategy(80, 400.0)) {
        let base = QueryConfig3::new(100.0).unwrap();
        let hash = build_index(&pts, &base).unwrap();
        let mut prev: Option<CollisionReport> = None;
        for radius in 1..=3u32 {
            let cfg = base.with_probe_radius(radius).unwrap();
            let cur = hash.detect(&cfg);
            if let Some(prev) = &prev {
                for id in prev.flagged_ids() {
                    prop_assert!(cur.flagged_ids().binary_search(id).is_ok());
                }
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn flagged_set_is_permutation_invariant(
        pts in points_strategy(80, 400.0),
        seed in any::<u64>(),
    ) {
        let mut shuffled = pts.clone();
        // Fisher-Yates with a splitmix-style step
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            shuffled.swap(i, j);
        }
        for scheme in [Scheme::DiagonalPaper, Scheme::SideExact] {
            let cfg = QueryConfig3::new(100.0).unwrap().with_scheme(scheme);
            let a = build_index(&pts, &cfg).unwrap().detect(&cfg);
            let b = build_index(&shuffled, &cfg).unwrap().detect(&cfg);
            prop_assert_eq!(a.flagged_ids(), b.flagged_ids());
        }
    }

    #[test]
    fn side_exact_translation_invariant(
        pts in points_strategy(60, 300.0),
        shift in (-5e3..5e3f64, -5e3..5e3f64, -5e3..5e3f64),
    ) {
        let cfg = QueryConfig3::new(100.0).unwrap().with_scheme(Scheme::SideExact);
        let moved: Vec<Point3> = pts
            .iter()
            .map(|p| Point3::new(p.id, p.x + shift.0, p.y + shift.1, p.z + shift.2).unwrap())
            .collect();
        let a = build_index(&pts, &cfg).unwrap().detect(&cfg);
        let b = build_index(&moved, &cfg).unwrap().detect(&cfg);
        prop_assert_eq!(a.flagged_ids(), b.flagged_ids());
    }

    #[test]
    fn parallel_detect_matches_sequential(pts in points_strategy(100, 400.0)) {
        for scheme in [Scheme::DiagonalPaper, Scheme::SideExact] {
            let cfg = QueryConfig3::new(100.0).unwrap().with_scheme(scheme);
            let hash = build_index(&pts, &cfg).unwrap();
            let seq = hash.detect(&cfg);
            let par = hash.detect_parallel(&cfg);
            prop_assert_eq!(seq.flagged_ids(), par.flagged_ids());
        }
    }

    #[test]
    fn membership_consistency_after_fuzzed_build(pts in points_strategy(150, 2000.0)) {
        let cfg = QueryConfig3::new(100.0).unwrap();
        let hash = build_index(&pts, &cfg).unwrap();
        prop_assert!(hash.occupied_cells() <= hash.point_count());
        let mut total = 0;
        for (key, cell_pts) in hash.cells() {
            for p in cell_pts {
                prop_assert_eq!(cell_key(p, hash.cell_side()), *key);
            }
            total += cell_pts.len();
        }
        prop_assert_eq!(total, hash.point_count());
    }

    #[test]
    fn merge_is_associative_and_commutative(
        a in prop::collection::vec(0u64..50, 0..20),
        b in prop::collection::vec(0u64..50, 0..20),
        c in prop::collection::vec(0u64..50, 0..20),
    ) {
        let (ra, rb, rc) = (
            CollisionReport::from_ids(a),
            CollisionReport::from_ids(b),
            CollisionReport::from_ids(c),
        );
        let left = ra.clone().merge(rb.clone()).merge(rc.clone());
        let right = ra.clone().merge(rb.clone().merge(rc));
        prop_assert_eq!(left.flagged_ids(), right.flagged_ids());
        let ab = ra.clone().merge(rb.clone());
        let ba = rb.merge(ra);
        prop_assert_eq!(ab.flagged_ids(), ba.flagged_ids());
    }

    #[test]
    fn brute_force_translation_invariant(
        pts in points_strategy(60, 300.0),
        shift in (-5e3..5e3f64, -5e3..5e3f64, -5e3..5e3f64),
    ) {
        let cfg = QueryConfig3::new(100.0).unwrap();
        let moved: Vec<Point3> = pts
            .iter()
            .map(|p| Point3::new(p.id, p.x + shift.0, p.y + shift.1, p.z + shift.2).unwrap())
            .collect();
        let orig = brute_force_detect(&pts, &cfg);
        let trans = brute_force_detect(&moved, &cfg);
        prop_assert_eq!(orig.flagged_ids(), trans.flagged_ids());
    }
}
