use pinchip_core::layout::nominal_pin;
use pinchip_core::materials::{CatalogFile, MaterialCatalog, DEFAULT_CATALOG_TOML, REQUIRED_MATERIALS};
use pinchip_core::thermal::example_via_path;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn catalog() -> MaterialCatalog {
    let file: CatalogFile = toml::from_str(DEFAULT_CATALOG_TOML).unwrap();
    MaterialCatalog::from_file(file).unwrap()
}

#[test]
fn defaults_reference_only_catalog_materials() {
    let cat = catalog();
    assert!(cat.missing(REQUIRED_MATERIALS).is_empty());
    nominal_pin().check_materials(&cat).unwrap();
    assert!(cat.contains(&example_via_path().material));
    for name in ["STYCAST-1266", "PTFE", "polyimide", "Sn-Pb", "In", "SUS-304"] {
        assert!(cat.contains(name), "{name}");
    }
}

#[test]
fn lookup_after_insert_round_trips() {
    let source = catalog();
    let mut rebuilt = MaterialCatalog::new();
    for m in source.iter() {
        rebuilt.insert(m.clone()).unwrap();
    }
    for m in source.iter() {
        assert_eq!(rebuilt.lookup(&m.name).unwrap(), m);
    }
    assert_eq!(rebuilt.len(), source.len());
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 500,
        rng_seed: RngSeed::Fixed(0xca7),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn interpolation_monotone_where_nodes_are(name_idx in 0usize..4, u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let cat = catalog();
        let m = cat.lookup(["SUS-304", "Nb-Ti", "OFHC-Cu", "polyimide"][name_idx]).unwrap();
        let table = &m.thermal_conductivity_table;
        for w in table.windows(2) {
            let (t0, k0) = w[0];
            let (t1, k1) = w[1];
            let (a, b) = (t0 + (t1 - t0) * u.min(v), t0 + (t1 - t0) * u.max(v));
            let (ka, kb) = (m.interpolate_conductivity(a).unwrap(), m.interpolate_conductivity(b).unwrap());
            if k1 >= k0 {
                prop_assert!(kb >= ka * (1.0 - 1e-12));
            } else {
                prop_assert!(kb <= ka * (1.0 + 1e-12));
            }
            prop_assert!(ka >= k0.min(k1) * (1.0 - 1e-12) && ka <= k0.max(k1) * (1.0 + 1e-12));
        }
    }
}
