use proptest::prelude::*;
use ratimm::format::{CdgaKind, CdgaSpec, ManifoldSpec};
use ratimm::report::{to_json, ImmersionReport, MapSphereReport};
use ratimm::samples;
use ratimm_core::immersion::immersion_components;
use ratimm_core::mapping::map_into_sphere;
use ratimm_core::cohomology;

fn spec() -> impl Strategy<Value = CdgaSpec> {
    let names = prop::collection::btree_set("[a-z][a-z0-9_']{0,4}", 1..6);
    (any::<bool>(), "\\PC{0,12}", names, prop::collection::vec(1u32..12, 6), prop::collection::vec(any::<bool>(), 6))
        .prop_flat_map(|(free, label, names, degrees, has_d)| {
            let names: Vec<String> = names.into_iter().collect();
            let n = names.len();
            let exprs = prop::collection::vec("[a-z0-9^*+ /'-]{1,10}", n);
            let products = if free {
                Just(Vec::new()).boxed()
            } else {
                prop::collection::vec((0..n, 0..n, "[a-z0-9^*+ ]{1,8}"), 0..4).boxed()
            };
            (Just((free, label, names, degrees, has_d)), exprs, products)
        })
        .prop_map(|((free, label, names, degrees, has_d), exprs, products)| {
            let generators: Vec<(String, u32)> = names.iter().cloned().zip(degrees).collect();
            let differential =
                names.iter().zip(exprs).zip(has_d).filter(|(_, d)| *d).map(|((g, e), _)| (g.clone(), e)).collect();
            let products = products
                .into_iter()
                .map(|(i, j, e)| (names[i.min(j)].clone(), names[i.max(j)].clone(), e))
                .collect();
            CdgaSpec {
                kind: if free { CdgaKind::Free } else { CdgaKind::Finite },
                label,
                generators,
                differential,
                products,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cdga_text_round_trips(s in spec()) {
        let text = s.to_toml();
        let parsed = CdgaSpec::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &s);
        prop_assert_eq!(parsed.to_toml(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn immersion_json_round_trips(i in 0usize..14, k in 2u32..8, n in 4u32..16) {
        let m = &samples::sweep_bases()[i];
        let report = ImmersionReport::new(m, k, n, &immersion_components(m, k, n).unwrap()).unwrap();
        let json = to_json(&report);
        let back: ImmersionReport = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &report);
        prop_assert_eq!(to_json(&back), json);
    }
}

#[test]
fn sample_manifolds_round_trip_through_files() {
    let mut all = samples::sweep_bases();
    all.extend(samples::sweep_with_pontryagin());
    for m in all {
        let text = ManifoldSpec::from_manifold(&m).to_toml();
        let (spec, loaded) = ManifoldSpec::load(&text).unwrap();
        assert_eq!(spec.to_toml(), text);
        assert_eq!(loaded.model().betti(), m.model().betti(), "{}", m.name());
        assert_eq!(loaded.pontryagin(), m.pontryagin(), "{}", m.name());
    }
}

#[test]
fn map_sphere_json_round_trips() {
    for name in ["S^2", "S^3", "CP^2"] {
        let m = samples::sweep_bases().into_iter().find(|m| m.name() == name).unwrap();
        for k in [2, 3, 4] {
            let d = map_into_sphere(m.model(), k).unwrap();
            let betti = d.model.as_ref().map(|a| cohomology(a.as_cdga(), 12));
            let r = MapSphereReport::new(&m, k, 12, &d, betti.as_ref());
            let back: MapSphereReport = serde_json::from_str(&to_json(&r)).unwrap();
            assert_eq!(back, r);
        }
    }
}
