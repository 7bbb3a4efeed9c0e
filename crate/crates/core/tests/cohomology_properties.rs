use proptest::prelude::*;
use ratimm_core::bundle::{framed_bundle_model, stiefel_model, ManifoldModel};
use ratimm_core::mapping::{em_mapping_space, sphere_map_null_model};
use ratimm_core::series::{em_series, series_product, PoincareSeries};
use ratimm_core::tensor::tensor;
use ratimm_core::{cohomology, cohomology_dense, BettiTable, Cdga, FiniteCdga, FreeCdga};

/// A small pool of algebras, free and finite, with and without differential.
fn pool(i: usize) -> Cdga {
    match i % 8 {
        0 => FiniteCdga::sphere(2, "a").unwrap().into(),
        1 => FiniteCdga::sphere(3, "b").unwrap().into(),
        2 => FiniteCdga::truncated_polynomial("c", 2, 2).unwrap().into(),
        3 => FreeCdga::from_exprs("S2", &[("e", 2), ("x", 3)], &[("x", "e^2")]).unwrap().into(),
        4 => FreeCdga::from_exprs("S5", &[("y", 5)], &[]).unwrap().into(),
        5 => FreeCdga::from_exprs("pair", &[("z", 3), ("w", 4)], &[("z", "w")]).unwrap().into(),
        6 => FreeCdga::from_exprs("CP1xS3", &[("u", 2), ("v", 3), ("t", 3)], &[("v", "u^2")]).unwrap().into(),
        _ => {
            let s = FiniteCdga::sphere(2, "p").unwrap();
            s.tensor(&FiniteCdga::sphere(4, "q").unwrap()).into()
        }
    }
}

fn finite_pool(i: usize) -> FiniteCdga {
    match i % 5 {
        0 => FiniteCdga::sphere(3, "a").unwrap(),
        1 => FiniteCdga::truncated_polynomial("c", 2, 3).unwrap(),
        2 => FiniteCdga::sphere(2, "a").unwrap().tensor(&FiniteCdga::sphere(3, "b").unwrap()),
        3 => {
            let mut b = FiniteCdga::builder("acyclic");
            b.element("z", 3).unwrap();
            b.element("w", 4).unwrap();
            b.differential_expr("z", "w").unwrap();
            b.build().unwrap()
        }
        _ => FiniteCdga::truncated_polynomial("c", 4, 2).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kunneth(i in 0usize..8, j in 0usize..8) {
        let (a, b) = (pool(i), pool(j));
        let n = 12;
        let t = tensor(&a, &b).unwrap();
        prop_assert_eq!(cohomology(&t.cdga, n), cohomology(&a, n).convolve(&cohomology(&b, n)));
    }

    #[test]
    fn euler_characteristic_of_finite_algebras(i in 0usize..5, j in 0usize..5) {
        let a = finite_pool(i).tensor(&finite_pool(j));
        let top = a.top_degree() + 1;
        let chi_chain: i64 = (0..=top).map(|n| {
            let d = a.basis_in_degree(n).len() as i64;
            if n % 2 == 0 { d } else { -d }
        }).sum();
        prop_assert_eq!(cohomology(&Cdga::from(a), top).euler_characteristic(), chi_chain);
    }

    #[test]
    fn cohomology_ignores_generator_order(perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        let gens = [("e", 2), ("x", 3), ("y", 5), ("z", 4)];
        let diffs = [("x", "e^2"), ("y", "z*e")];
        let ordered: Vec<(&str, u32)> = perm.iter().map(|&i| gens[i]).collect();
        let a = FreeCdga::from_exprs("a", &gens, &diffs).unwrap();
        let b = FreeCdga::from_exprs("b", &ordered, &diffs).unwrap();
        prop_assert_eq!(cohomology(a.as_cdga(), 14), cohomology(b.as_cdga(), 14));
    }

    #[test]
    fn sparse_and_dense_agree(i in 0usize..8, j in 0usize..8) {
        let t = tensor(&pool(i), &pool(j)).unwrap();
        prop_assert_eq!(cohomology(&t.cdga, 10), cohomology_dense(&t.cdga, 10));
    }

    #[test]
    fn em_factor_counts(dims in prop::collection::vec(0usize..3, 1..8), n in 1u32..10) {
        let mut dims = dims;
        dims[0] = 1;
        dims.resize(n as usize + 1, 0);
        let betti = BettiTable::new(n, dims.clone());
        let factors = em_mapping_space(&betti, n).unwrap();
        let expected_count = (1..=n).filter(|&q| dims[(n - q) as usize] > 0).count();
        let expected_rank: usize = (1..=n).map(|q| dims[(n - q) as usize]).sum();
        prop_assert_eq!(factors.len(), expected_count);
        prop_assert_eq!(factors.iter().map(|f| f.coefficient_dim).sum::<usize>(), expected_rank);
    }

    #[test]
    fn series_product_commutes_and_associates(
        fs in prop::collection::vec((1u32..7, 1usize..3), 1..5),
        seed in any::<u64>(),
    ) {
        let n = 30;
        let series: Vec<PoincareSeries> = fs.iter().map(|&(d, m)| em_series(d, m, n)).collect();
        let forward = series.iter().fold(PoincareSeries::one(n), |a, s| series_product(&a, s));
        let mut shuffled = series.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        shuffled.reverse();
        let backward = shuffled.iter().fold(PoincareSeries::one(n), |a, s| series_product(s, &a));
        prop_assert_eq!(forward, backward);
    }
}

#[test]
fn stiefel_degrees_for_odd_k() {
    for m in 1..=7u32 {
        for k in [3u32, 5, 7] {
            let (s, l) = (k / 2, m / 2);
            let mut expected: Vec<u32> = (s + 1..=l + s).map(|i| 4 * i - 1).collect();
            if m % 2 == 1 {
                expected.push(m + k - 1);
            }
            let mut got: Vec<u32> =
                stiefel_model(m, k).unwrap().generators().generators().iter().map(|g| g.degree).collect();
            got.sort();
            expected.sort();
            assert_eq!(got, expected, "m={m} k={k}");
        }
    }
}

#[test]
fn models_square_to_zero() {
    for m in 2..=7u32 {
        let manifold = ManifoldModel::sphere(m).unwrap();
        for k in 2..=7u32 {
            assert!(stiefel_model(m, k).unwrap().check_d_squared(24).is_empty());
            assert!(framed_bundle_model(&manifold, k).unwrap().check_d_squared(24).is_empty());
        }
    }
}

#[test]
fn null_model_of_a_point_is_the_sphere() {
    for k in [2u32, 4, 6] {
        let model = sphere_map_null_model(&FiniteCdga::unit(), k).unwrap();
        let degrees: Vec<u32> = model.generators().generators().iter().map(|g| g.degree).collect();
        assert_eq!(degrees, vec![k, 2 * k - 1]);
        assert_eq!(cohomology(model.as_cdga(), 4 * k).support(), vec![0, k]);
    }
}
