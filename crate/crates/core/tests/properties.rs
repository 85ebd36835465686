mod common;

use std::collections::HashSet;

use fracube::approx::{build_grid, parse_pbm, render_pbm, Budget};
use fracube::bounds::bounds_report;
use fracube::cli::dihedral_images;
use fracube::gd::{gd_dimension, path_cells, spectral_radius, verify_decomposition, MWGraph};
use fracube::model::{affine_rank, compose_level, is_latin, reduce_full_rank, DigitSet};
use fracube::topology::{
    hata_connected, label_components, piece_intersects, scan_level, TrivialPointVerdict,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use common::*;

fn runner(cases: u32) -> TestRunner {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed().to_le_bytes());
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &bytes),
    )
}

/// Nonempty digit sets with `n ≤ max_n`, `d ≤ max_d`, `n^d ≤ 27`.
fn digitsets(max_n: u64, max_d: usize) -> impl Strategy<Value = DigitSet> {
    (2..=max_n, 1..=max_d)
        .prop_filter("grid too large", |(n, d)| n.pow(*d as u32) <= 27)
        .prop_flat_map(|(n, d)| {
            let total = n.pow(d as u32) as usize;
            proptest::collection::vec(any::<bool>(), total)
                .prop_filter("empty", |mask| mask.iter().any(|&b| b))
                .prop_map(move |mask| {
                    let digits = all_vectors(n, d)
                        .into_iter()
                        .zip(mask)
                        .filter(|(_, keep)| *keep)
                        .map(|(v, _)| v)
                        .collect();
                    DigitSet::new(n, d, digits).unwrap()
                })
        })
}

fn squares(max_n: u64) -> impl Strategy<Value = DigitSet> {
    digitsets(max_n, 2).prop_filter("planar", |d| d.dim() == 2)
}

fn levels_for(digits: &DigitSet) -> u32 {
    match digits.base().pow(digits.dim() as u32) {
        0..=9 => 3,
        _ => 2,
    }
}

#[test]
fn composed_digits_match_word_expansion() {
    runner(64)
        .run(&digitsets(4, 3), |digits| {
            for k in 1..=levels_for(&digits) {
                let composed = compose_level(&digits, k).unwrap();
                prop_assert_eq!(composed.len(), digits.len().pow(k));
                prop_assert_eq!(composed.base(), digits.base().pow(k));
                let as_set: HashSet<Vec<u64>> = composed.to_vecs().into_iter().collect();
                prop_assert_eq!(&as_set, &word_cells(&digits, k));

                let grid = build_grid(&digits, k, &Budget::default()).unwrap();
                let occupied: HashSet<Vec<u64>> =
                    grid.occupied_indices().map(|i| grid.coords_of(i)).collect();
                prop_assert_eq!(occupied, as_set);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn approximations_are_self_similar() {
    runner(48)
        .run(&digitsets(4, 2), |digits| {
            let n = digits.base();
            let k = levels_for(&digits) - 1;
            let small = build_grid(&digits, k, &Budget::default()).unwrap();
            let big = build_grid(&digits, k + 1, &Budget::default()).unwrap();
            let m = small.side();
            for index in 0..big.cell_count() {
                let cell = big.coords_of(index);
                let top: Vec<u64> = cell.iter().map(|c| c / m).collect();
                let rest: Vec<u64> = cell.iter().map(|c| c % m).collect();
                prop_assert_eq!(big.is_set(index), digits.contains(&top) && small.contains(&rest));
            }
            prop_assert_eq!(big.side(), n * m);
            Ok(())
        })
        .unwrap();
}

#[test]
fn reduction_preserves_digits() {
    runner(96)
        .run(&digitsets(4, 3), |digits| {
            let r = reduce_full_rank(&digits);
            prop_assert_eq!(r.reduced.len(), digits.len());
            prop_assert_eq!(r.reduced.dim(), r.rank.max(1));
            prop_assert_eq!(r.is_singleton(), digits.len() == 1);
            if !r.is_singleton() {
                prop_assert_eq!(affine_rank(&r.reduced), r.rank);
            }
            let mut restored: Vec<Vec<u64>> = r.reduced.to_vecs();
            for step in r.steps.iter().rev() {
                restored = restored
                    .iter()
                    .map(|p| step.restore(p, digits.base()).expect("restorable"))
                    .collect();
            }
            restored.sort();
            prop_assert_eq!(restored, digits.to_vecs());
            Ok(())
        })
        .unwrap();
}

#[test]
fn latin_property_is_dihedral_invariant() {
    runner(128)
        .run(&squares(5), |digits| {
            let latin = is_latin(&digits).unwrap();
            for image in dihedral_images(&digits.to_vecs(), digits.base()) {
                let image = DigitSet::new(digits.base(), 2, image).unwrap();
                prop_assert_eq!(is_latin(&image).unwrap(), latin);
                prop_assert_eq!(affine_rank(&image), affine_rank(&digits));
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn pbm_round_trip() {
    runner(48)
        .run(&digitsets(4, 2), |digits| {
            let k = levels_for(&digits);
            let grid = build_grid(&digits, k, &Budget::default()).unwrap();
            let bitmap = parse_pbm(&render_pbm(&grid, &[]).unwrap()).unwrap();
            let m = grid.side() as usize;
            prop_assert_eq!(bitmap.width, m);
            prop_assert_eq!(bitmap.ones() as u64, grid.occupied_count());
            for x in 0..m {
                for y in 0..bitmap.height {
                    let cell: Vec<u64> = if digits.dim() == 1 {
                        vec![x as u64]
                    } else {
                        vec![x as u64, (m - 1 - y) as u64]
                    };
                    prop_assert_eq!(bitmap.get(x, y), grid.contains(&cell));
                }
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn labeling_matches_flood_fill() {
    runner(96)
        .run(&digitsets(4, 3), |digits| {
            for k in 1..=levels_for(&digits) {
                let grid = build_grid(&digits, k, &Budget::default()).unwrap();
                let labeling = label_components(&grid);
                let oracle = bfs_partition(&word_cells(&digits, k));
                prop_assert_eq!(labeling_partition(&labeling), oracle.clone());
                let islands = islands_of(&oracle, grid.side()).len();
                prop_assert_eq!(labeling.island_ids().count(), islands);
                // component ids follow the smallest cell index
                let firsts: Vec<u64> = (0..labeling.component_count() as u32)
                    .map(|id| labeling.cells_of(id)[0])
                    .collect();
                prop_assert!(firsts.windows(2).all(|w| w[0] < w[1]));
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn islands_persist_to_finer_levels() {
    runner(96)
        .run(&squares(4), |digits| {
            let mut seen = false;
            for k in 1..=3 {
                let islands = scan_level(&digits, k, &Budget::default()).unwrap().islands;
                prop_assert!(!seen || islands > 0, "island vanished at level {}", k);
                seen |= islands > 0;
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn intersection_is_symmetric_under_reflection() {
    let offsets: Vec<Vec<i64>> = (0..9).map(|i| vec![i % 3 - 1, i / 3 - 1]).collect();
    runner(96)
        .run(&squares(5), |digits| {
            for v in &offsets {
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                prop_assert_eq!(piece_intersects(&digits, v), piece_intersects(&digits, &neg));
            }
            prop_assert!(piece_intersects(&digits, &[0, 0]));
            Ok(())
        })
        .unwrap();
}

#[test]
fn intersections_agree_with_fine_grids() {
    // E ∩ (E + v) ≠ ∅ forces the level-k approximations to touch
    runner(64)
        .run(&squares(3), |digits| {
            let k = 3;
            let cells = word_cells(&digits, k);
            let m = digits.base().pow(k) as i64;
            for i in 0..9i64 {
                let v = [i % 3 - 1, i / 3 - 1];
                if v == [0, 0] || !piece_intersects(&digits, &v) {
                    continue;
                }
                let touches = cells.iter().any(|c| {
                    cells
                        .iter()
                        .any(|e| (0..2).all(|a| (c[a] as i64 + v[a] * m - e[a] as i64).abs() <= 1))
                });
                prop_assert!(touches, "offset {:?}", v);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn connected_attractors_have_connected_approximations() {
    runner(96)
        .run(&digitsets(4, 2), |digits| {
            if hata_connected(&digits) {
                for k in 1..=levels_for(&digits) {
                    prop_assert_eq!(scan_level(&digits, k, &Budget::default()).unwrap().components, 1);
                }
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn bound_chain_is_ordered() {
    runner(64)
        .run(&squares(4), |digits| {
            let report = bounds_report(&digits, 3, None, &Budget::default()).unwrap();
            let dim_h = report.dim_h.value;
            prop_assert!(report.th_upper <= report.ic_upper);
            prop_assert!(report.ic_upper <= dim_h);
            prop_assert!(report.ic_upper >= 0.0);
            let island = report.levels.iter().any(|l| l.islands > 0);
            prop_assert_eq!(report.strict_drop, island);
            if island {
                prop_assert!(report.ic_upper < dim_h - 1e-12);
                let has_point = matches!(report.verdict, TrivialPointVerdict::HasTrivialPoint { .. });
                prop_assert!(has_point);
            }
            Ok(())
        })
        .unwrap();
}

fn graph_from(base: u64, matrix: &[Vec<usize>]) -> MWGraph {
    let names: Vec<String> = (0..matrix.len()).map(|i| format!("v{i}")).collect();
    let digits = all_vectors(base, 2);
    let mut edges = Vec::new();
    for (i, row) in matrix.iter().enumerate() {
        let mut next = 0;
        for (j, &c) in row.iter().enumerate() {
            for _ in 0..c {
                let d = digits[next].iter().map(|&x| x as i64).collect();
                edges.push((names[i].clone(), names[j].clone(), d));
                next += 1;
            }
        }
    }
    MWGraph::new(base, 2, names, edges).unwrap()
}

fn count_matrices() -> impl Strategy<Value = Vec<Vec<usize>>> {
    (1usize..=3).prop_flat_map(|k| {
        proptest::collection::vec(proptest::collection::vec(0usize..=3, k), k)
            .prop_filter("needs an edge", |m| m.iter().any(|r| r.iter().sum::<usize>() > 0))
    })
}

#[test]
fn dimension_grows_with_edges() {
    runner(64)
        .run(
            &(
                count_matrices(),
                any::<prop::sample::Index>(),
                any::<prop::sample::Index>(),
            ),
            |(m, i, j)| {
                let k = m.len();
                let before = gd_dimension(&graph_from(4, &m));
                let mut more = m.clone();
                more[i.index(k)][j.index(k)] += 1;
                let after = gd_dimension(&graph_from(4, &more));
                if let Ok(before) = before {
                    // adding an edge never removes a cycle
                    let after = after.unwrap();
                    prop_assert!(after.hi >= before.lo);
                    prop_assert!(before.lo <= before.value && before.value <= before.hi);
                }
                Ok(())
            },
        )
        .unwrap();
}

#[test]
fn path_cells_bounded_by_path_count() {
    runner(48)
        .run(&count_matrices(), |m| {
            let g = graph_from(4, &m);
            let a = g.count_matrix();
            let k = a.len();
            // paths of length ℓ from node 0: row 0 of A^ℓ
            let mut row: Vec<i64> = (0..k).map(|j| i64::from(j == 0)).collect();
            for level in 1..=3 {
                row = (0..k).map(|j| (0..k).map(|i| row[i] * a[i][j]).sum()).collect();
                let paths: i64 = row.iter().sum();
                let cells = path_cells(&g, "v0", level, &Budget::default()).unwrap();
                prop_assert!(cells.len() as i64 <= paths);
                let unique: HashSet<&Vec<u64>> = cells.iter().collect();
                prop_assert_eq!(unique.len(), cells.len());
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn verification_ignores_node_and_edge_order() {
    let digits = set(3, 2, &[&[0, 0], &[0, 1], &[0, 2], &[2, 0], &[2, 2]]);
    let edges: Vec<(String, String, Vec<i64>)> = vec![
        ("Y".into(), "Y".into(), vec![0, 0]),
        ("Y".into(), "Y".into(), vec![0, 1]),
        ("Y".into(), "Y".into(), vec![0, 2]),
        ("X".into(), "Y".into(), vec![2, 0]),
        ("X".into(), "X".into(), vec![2, 2]),
    ];
    let reference = verify_decomposition(
        &digits,
        &MWGraph::new(3, 2, vec!["Y".into(), "X".into()], edges.clone()).unwrap(),
        "Y",
        &[0, 0],
        3,
        &Budget::default(),
    )
    .unwrap();
    runner(24)
        .run(
            &(Just(edges).prop_shuffle(), any::<bool>()),
            |(shuffled, swap)| {
                let nodes: Vec<String> = if swap {
                    vec!["X".into(), "Y".into()]
                } else {
                    vec!["Y".into(), "X".into()]
                };
                let g = MWGraph::new(3, 2, nodes, shuffled).unwrap();
                let v = verify_decomposition(&digits, &g, "Y", &[0, 0], 3, &Budget::default()).unwrap();
                prop_assert_eq!(&v, &reference);
                Ok(())
            },
        )
        .unwrap();
}

#[test]
fn spectral_enclosures_contain_exact_root() {
    let strategy =
        (2usize..=4).prop_flat_map(|k| proptest::collection::vec(proptest::collection::vec(0i64..=6, k), k));
    runner(64)
        .run(&strategy, |m| {
            if !is_irreducible(&m) {
                return Ok(());
            }
            let e = spectral_radius(&m).unwrap();
            let max_row = m.iter().map(|r| r.iter().sum::<i64>()).max().unwrap();
            let (lo, hi) = largest_root(&char_poly(&m), 0, max_row + 1, 70);
            prop_assert!(
                rational_from_f64(e.lo) <= lo && hi <= rational_from_f64(e.hi),
                "{:?} {:?}",
                m,
                e
            );
            prop_assert!(e.width() <= 1e-12 * e.hi + f64::EPSILON);
            Ok(())
        })
        .unwrap();
}

#[test]
fn survey_records_match_enumeration() {
    use fracube::cli::{candidate_count, run_survey, SurveyParams, DEFAULT_CAP};
    for (n, d, cells) in [(2u64, 2usize, 2usize), (3, 1, 2), (2, 3, 3), (3, 2, 3)] {
        let params = SurveyParams {
            base: n,
            dim: d,
            cells,
            k_max: 2,
            mod_symmetry: false,
            cap: DEFAULT_CAP,
            budget: Budget::default(),
            jobs: Some(2),
        };
        let mut keys = Vec::new();
        run_survey(&params, &HashSet::new(), |r| {
            keys.push(r.digits.clone());
            Ok(())
        })
        .unwrap();
        assert_eq!(keys.len() as u128, candidate_count(n, d, cells));
        assert!(keys.windows(2).all(|w| w[0] < w[1]));

        let mut sym = params.clone();
        sym.mod_symmetry = true;
        let mut total = 0;
        run_survey(&sym, &HashSet::new(), |r| {
            total += r.class_size;
            Ok(())
        })
        .unwrap();
        assert_eq!(total, keys.len(), "class sizes sum to all sets for n={n} d={d}");
    }
}
