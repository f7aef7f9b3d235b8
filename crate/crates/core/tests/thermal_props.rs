use pinchip_core::materials::{CatalogFile, MaterialCatalog, DEFAULT_CATALOG_TOML};
use pinchip_core::thermal::{
    conduction_load, conduction_load_with_tolerance, conductivity_integral, controller_budget, disc_area,
    example_via_path, stage_report, ConductionPath, ControllerLoad, ControllerTech, HeatPath, Stage, StageModel,
    ThermalArchitecture,
};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn catalog() -> MaterialCatalog {
    let file: CatalogFile = toml::from_str(DEFAULT_CATALOG_TOML).unwrap();
    MaterialCatalog::from_file(file).unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x7e4),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Fixed-step composite Simpson over the catalog interpolant.
fn simpson(material: &str, a: f64, b: f64) -> f64 {
    let cat = catalog();
    let m = cat.lookup(material).unwrap();
    let n = 200_000;
    let h = (b - a) / n as f64;
    let k = |t: f64| m.interpolate_conductivity(t.clamp(a, b)).unwrap();
    let mut sum = k(a) + k(b);
    for i in 1..n {
        sum += k(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

#[test]
fn integral_matches_simpson_oracle() {
    let cat = catalog();
    for (name, a, b) in [("SUS-304", 4.0, 300.0), ("Nb-Ti", 0.01, 3.0), ("OFHC-Cu", 0.1, 77.0)] {
        let got = conductivity_integral(cat.lookup(name).unwrap(), a, b, 1e-6).unwrap();
        let oracle = simpson(name, a, b);
        let rel = ((got - oracle) / oracle).abs();
        assert!(rel < 5e-3, "{name} {a}-{b} K: {got} vs {oracle} ({rel})");
    }
}

#[test]
fn zero_gradient_is_exactly_zero() {
    let cat = catalog();
    for name in ["SUS-304", "Nb-Ti", "OFHC-Cu", "polyimide"] {
        assert_eq!(
            conductivity_integral(cat.lookup(name).unwrap(), 2.0, 2.0, 1e-6).unwrap(),
            0.0
        );
    }
    let mut p = example_via_path();
    p.t_hot = p.t_cold;
    assert_eq!(conduction_load(&p, &cat).unwrap().watts, 0.0);
}

#[test]
fn example_via_load_recomputes_from_inputs() {
    let cat = catalog();
    let p = example_via_path();
    let integral = conductivity_integral(cat.lookup("Nb-Ti").unwrap(), 0.01, 3.0, 1e-6).unwrap();
    // W = count · m² / m · W/m
    let expected = 160_000.0 * (std::f64::consts::PI * 20e-6 * 20e-6 / 4.0) / 3e-3 * integral;
    let got = conduction_load(&p, &cat).unwrap().watts;
    assert!((got - expected).abs() <= 1e-12 * expected);
    assert!(got > 1e-3 && got < 1e-1, "order of magnitude off: {got}");
}

#[test]
fn controller_budget_units() {
    let stage = Stage::new("3K", 3.0, 1.0);
    for (tech, watts) in [
        (ControllerTech::sfq(), 1e-2),
        (ControllerTech::cryo_cmos(), 1.0),
        (ControllerTech::target(), 1e-4),
    ] {
        let b = controller_budget(100_000, &tech, &stage).unwrap();
        assert!((b.total - watts).abs() <= 1e-12 * watts);
        assert!((b.margin - 1.0 / watts).abs() <= 1e-9 / watts);
    }
}

fn path(t_hot: f64, area: f64, length: f64, count: u64) -> ConductionPath {
    ConductionPath {
        material: "SUS-304".into(),
        cross_section_area: area,
        length,
        t_hot,
        t_cold: 0.1,
        count,
        transmission: 1.0,
        residual_resistivity: None,
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn load_monotone(t in 0.2..250.0f64, d in 1e-6..1e-3f64, l in 1e-3..0.5f64, n in 1u64..1000, bump in 1.01..1.2f64) {
        let cat = catalog();
        let q = |p: ConductionPath| conduction_load(&p, &cat).unwrap().watts;
        let base = q(path(t, disc_area(d), l, n));
        prop_assert!(q(path(t * bump, disc_area(d), l, n)) > base);
        prop_assert!(q(path(t, disc_area(d) * bump, l, n)) > base);
        prop_assert!(q(path(t, disc_area(d), l, n + 1)) > base);
        prop_assert!(q(path(t, disc_area(d), l * bump, n)) < base);
    }

    #[test]
    fn halving_tolerance_stays_within_tolerance(t in 0.2..300.0f64, tol in 1e-8..1e-3f64) {
        let cat = catalog();
        let p = path(t, 1e-8, 0.01, 1);
        let a = conduction_load_with_tolerance(&p, &cat, tol).unwrap().watts;
        let b = conduction_load_with_tolerance(&p, &cat, tol / 2.0).unwrap().watts;
        prop_assert!(((a - b) / b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn more_cooling_never_breaks_feasibility(power in 1e-6..2.0f64, extra in 1.0..100.0f64, qubits in 1u64..1_000_000) {
        let cat = catalog();
        let arch = ThermalArchitecture {
            controllers: vec![ControllerLoad { stage: "s".into(), qubits, tech: ControllerTech::sfq() }],
            paths: vec![HeatPath { stage: "s".into(), path: ConductionPath { t_cold: 3.0, ..path(50.0, 1e-9, 0.1, 10) } }],
        };
        let feasible = |p: f64| {
            let stages = StageModel::new(vec![Stage::new("s", 3.0, p)]).unwrap();
            stage_report(&arch, &stages, &cat).unwrap().all_feasible()
        };
        if feasible(power) {
            prop_assert!(feasible(power * extra));
        }
    }
}
