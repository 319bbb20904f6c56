mod common;

use std::collections::BTreeMap;

use common::*;
use pgcompare::insight::{
    laplacian_score, memberships_from_costs, objective_score, random_baseline, significance,
    sq_distance, Clusterer, Clustering, FuzzyCMedoids, Role, ThreePartition,
};
use pgcompare::validation::{percentile_scale_all, validate_indicators, Mode, ValidationConfig};
use pgcompare::DenseMatrix;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(prop::collection::vec(0.01f64..1.0, cols), rows)
        .prop_map(|r| DenseMatrix::from_rows(&r))
}

fn partition(n: usize) -> impl Strategy<Value = ThreePartition> {
    prop::collection::vec(0u8..3, n).prop_filter_map("needs compare and group", move |codes| {
        let roles = codes
            .into_iter()
            .map(|c| match c {
                0 => Role::Compare,
                1 => Role::Group,
                _ => Role::Unused,
            })
            .collect();
        ThreePartition::new(roles).ok()
    })
}

/// Assignment of `rows` rows to `k` clusters with at least two rows each.
fn assignment(rows: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..k, rows).prop_map(move |mut a| {
        for (c, slot) in (0..k).flat_map(|c| [c, c]).zip(0..) {
            a[slot] = c;
        }
        a
    })
}

fn clustering(assignment: Vec<usize>, k: usize) -> Clustering {
    let medoids = (0..k)
        .map(|c| assignment.iter().position(|&a| a == c).unwrap())
        .collect();
    Clustering {
        k,
        assignment,
        medoids,
        memberships: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn objective_matches_pair_sum(m in matrix(12, 4), p in partition(4), a in assignment(12, 3)) {
        let c = clustering(a, 3);
        let got = objective_score(&m, &p, &c).unwrap();
        let want = objective_ref(&m, &p.compare(), &p.group(), &c.clusters());
        prop_assert!(rel_eq(got, want, 1e-9) || (got - want).abs() < 1e-12);
    }

    #[test]
    fn objective_ignores_cluster_labels_and_row_order(
        m in matrix(10, 3),
        p in partition(3),
        a in assignment(10, 2),
        perm in Just((0..10).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let base = objective_score(&m, &p, &clustering(a.clone(), 2)).unwrap();
        let relabelled: Vec<usize> = a.iter().map(|&c| 1 - c).collect();
        let swapped = objective_score(&m, &p, &clustering(relabelled, 2)).unwrap();
        prop_assert!(rel_eq(base, swapped, 1e-12) || (base - swapped).abs() < 1e-12);

        let rows: Vec<Vec<f64>> = perm.iter().map(|&r| m.row(r).to_vec()).collect();
        let moved: Vec<usize> = perm.iter().map(|&r| a[r]).collect();
        let permuted = objective_score(&DenseMatrix::from_rows(&rows), &p, &clustering(moved, 2)).unwrap();
        prop_assert!(rel_eq(base, permuted, 1e-9) || (base - permuted).abs() < 1e-12);
    }

    #[test]
    fn pair_measures_behave_like_distances(
        a in prop::collection::vec(0.0f64..1.0, 5),
        b in prop::collection::vec(0.0f64..1.0, 5),
        idx in prop::collection::btree_set(0usize..5, 1..5),
    ) {
        let idx: Vec<usize> = idx.into_iter().collect();
        for f in [significance, sq_distance] {
            prop_assert!(f(&a, &b, &idx) >= 0.0);
            prop_assert_eq!(f(&a, &b, &idx), f(&b, &a, &idx));
            prop_assert_eq!(f(&a, &a, &idx), 0.0);
            let equal_on_idx = idx.iter().all(|&i| a[i] == b[i]);
            prop_assert_eq!(f(&a, &b, &idx) == 0.0, equal_on_idx);
        }
        let manual: f64 = idx.iter().map(|&i| (a[i] - b[i]).abs()).sum();
        prop_assert!((significance(&a, &b, &idx) - manual).abs() < 1e-12);
    }

    #[test]
    fn memberships_are_distributions_and_scale_free(
        costs in prop::collection::vec(prop::collection::vec(1e-6f64..50.0, 3), 1..20),
        factor in 1e-3f64..1e3,
    ) {
        let u = memberships_from_costs(&costs, 2.0);
        let scaled: Vec<Vec<f64>> = costs.iter().map(|r| r.iter().map(|x| x * factor).collect()).collect();
        let v = memberships_from_costs(&scaled, 2.0);
        for (ru, rv) in u.iter().zip(&v) {
            prop_assert!(ru.iter().all(|&x| x >= 0.0));
            prop_assert!((ru.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            for (x, y) in ru.iter().zip(rv) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn clusterer_output_satisfies_its_invariants(m in matrix(24, 4), p in partition(4), k in 1usize..5, seed in 0u64..1000) {
        let c = FuzzyCMedoids::default().cluster(&m, &p, k, seed).unwrap();
        prop_assert!(c.k <= k);
        let sizes: Vec<usize> = c.clusters().iter().map(Vec::len).collect();
        prop_assert!(sizes.iter().all(|&s| s >= 2), "sizes {:?}", sizes);
        let u = c.memberships.as_ref().unwrap();
        for row in u {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
        prop_assert_eq!(&c, &FuzzyCMedoids::default().cluster(&m, &p, k, seed).unwrap());
    }

    #[test]
    fn laplacian_matches_dense_products(m in matrix(7, 3), k in 1usize..4) {
        for col in 0..3 {
            let want = dense_laplacian(&m, col, k);
            let got = laplacian_score(&m, col, k).unwrap();
            prop_assert!(rel_eq(got, want, 1e-9), "{} vs {}", got, want);
        }
    }

    #[test]
    fn percentile_scaling_stays_in_unit_interval(v in prop::collection::vec(-1e6f64..1e6, 1..80)) {
        let s = percentile_scale_all(&v);
        prop_assert!(s.iter().all(|&x| x > 0.0 && x <= 1.0));
        let top = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (x, y) in v.iter().zip(&s) {
            if *x == top {
                prop_assert_eq!(*y, 1.0);
            }
        }
    }
}

fn dense_laplacian(m: &DenseMatrix, col: usize, k: usize) -> f64 {
    let n = m.n_rows();
    let dist = |a: usize, b: usize| -> f64 {
        (0..m.n_cols())
            .map(|c| (m.get(a, c) - m.get(b, c)).powi(2))
            .sum()
    };
    let mut adj = vec![vec![0.0f64; n]; n];
    for a in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&b| b != a).collect();
        others.sort_by(|&x, &y| dist(a, x).partial_cmp(&dist(a, y)).unwrap().then(x.cmp(&y)));
        for &b in &others[..k] {
            adj[a][b] = 1.0;
            adj[b][a] = 1.0;
        }
    }
    let x = m.column(col);
    let deg: Vec<f64> = adj.iter().map(|r| r.iter().sum()).collect();
    let mut num = 0.0;
    let mut den = 0.0;
    for a in 0..n {
        den += deg[a] * x[a] * x[a];
        for b in 0..n {
            let l = if a == b { deg[a] } else { 0.0 } - adj[a][b];
            num += x[a] * l * x[b];
        }
    }
    num / den
}

#[test]
fn random_baseline_is_uniform_over_feasible_partitions() {
    let n = 3;
    let m = toy_matrix(8, n, 2, 2, 5);
    let feasible: Vec<ThreePartition> = (0..27)
        .filter_map(|c| ThreePartition::from_code(n, c))
        .collect();
    assert_eq!(feasible.len(), 27 - 2 * 8 + 1);

    // A clusterer that does no work keeps the draw cheap.
    struct Halves;
    impl Clusterer for Halves {
        fn cluster(
            &self,
            m: &DenseMatrix,
            _: &ThreePartition,
            _: usize,
            _: u64,
        ) -> pgcompare::Result<Clustering> {
            let rows = m.n_rows();
            Ok(Clustering {
                k: 2,
                assignment: (0..rows).map(|r| (r >= rows / 2) as usize).collect(),
                medoids: vec![0, rows / 2],
                memberships: None,
            })
        }
    }

    let draws = 1200;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut per_role = vec![[0usize; 3]; n];
    for seed in 0..draws {
        let r = random_baseline(&m, 2, &Halves, seed).unwrap();
        *counts.entry(r.partition.to_string()).or_default() += 1;
        for (i, role) in r.partition.roles().iter().enumerate() {
            per_role[i][*role as usize] += 1;
        }
    }
    assert_eq!(counts.len(), feasible.len());
    let expected = draws as f64 / feasible.len() as f64;
    let chi2: f64 = counts
        .values()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    // 11 degrees of freedom; the 99.9% quantile is about 31.3.
    assert!(chi2 < 31.3, "chi-square {chi2}");

    // Per-indicator role frequencies match the counts over the feasible set.
    for (i, counts) in per_role.iter().enumerate() {
        for (r, role) in [Role::Compare, Role::Group, Role::Unused]
            .into_iter()
            .enumerate()
        {
            let share = feasible.iter().filter(|p| p.role(i) == role).count() as f64
                / feasible.len() as f64;
            let seen = counts[r] as f64 / draws as f64;
            assert!(
                (seen - share).abs() < 0.06,
                "indicator {i} {role:?}: {seen} vs {share}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lazy_and_eager_agree_on_random_thresholds(
        seed in 1u64..4,
        gamma in 0.0f64..1.0,
        corr in 0.3f64..1.0,
        alpha in 0.0f64..0.1,
        discard in prop::sample::subsequence(vec!["identifier", "rank", "load", "cost", "tag"], 0..4),
        max_len in 1usize..4,
    ) {
        let g = small_synth(seed);
        let s = pgcompare::graph::compute_cardinalities(&g, &pgcompare::graph::infer_graph_type(&g)).unwrap();
        let cfg = ValidationConfig {
            alpha_ratio: alpha,
            gamma_ratio: gamma,
            corr_threshold: corr,
            discard_props: discard.into_iter().map(String::from).collect(),
            max_len,
            ..ValidationConfig::default()
        };
        let lazy = validate_indicators(&g, &s, "HUB", &cfg, Mode::Lazy);
        let eager = validate_indicators(&g, &s, "HUB", &cfg, Mode::Eager);
        match (lazy, eager) {
            (Ok(l), Ok(e)) => {
                prop_assert_eq!(l.matrix, e.matrix);
                prop_assert!(e.stats.evaluated.len() <= l.stats.evaluated.len());
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            _ => prop_assert!(false, "one mode failed"),
        }
    }
}
