use std::f64::consts::PI;

use pinchip_core::math::ellip_k;
use pinchip_core::tlines::{
    coax_impedance, coax_outer_for_impedance, cpw_effective_permittivity, cpw_impedance, mixed_permittivity, CoaxSpec,
    CoupledCpwSpec, CpwSpec,
};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x7117e5),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn coax(d: f64, ratio: f64, er: f64) -> f64 {
    coax_impedance(&CoaxSpec {
        inner_diameter: d,
        outer_diameter: d * ratio,
        relative_permittivity: er,
    })
    .unwrap()
}

fn cpw(w: f64, s: f64, er: f64, cover: Option<f64>) -> f64 {
    cpw_impedance(&CpwSpec {
        trace_width: w,
        gap: s,
        relative_permittivity: er,
        cover_height: cover,
    })
    .unwrap()
}

/// Composite Simpson on the complete elliptic integral's defining integral.
fn ellip_k_quadrature(k: f64) -> f64 {
    let n = 20_000;
    let h = (PI / 2.0) / n as f64;
    let f = |t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt();
    let mut sum = f(0.0) + f(PI / 2.0);
    for i in 1..n {
        sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

#[test]
fn k_of_zero_is_half_pi() {
    assert!((ellip_k(0.0) - PI / 2.0).abs() < 1e-12);
}

#[test]
fn published_coax_pairs() {
    assert!((coax(100e-6, 2.0, 3.0) - 24.0).abs() < 0.5);
    assert!((coax(200e-6, 1.5, 3.0) - 14.0).abs() < 0.5);
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn coax_round_trip(d in 10e-6..1e-3f64, ratio in 1.01..20.0f64, er in 1.0..12.0f64) {
        let z = coax(d, ratio, er);
        let back = coax_outer_for_impedance(d, z, er).unwrap();
        let rel = (back - d * ratio).abs() / (d * ratio);
        prop_assert!(rel < 1e-10, "relative error {rel}");
    }

    #[test]
    fn coax_monotone(d in 10e-6..1e-3f64, ratio in 1.01..10.0f64, bump in 1.001..2.0f64, er in 1.0..12.0f64) {
        prop_assert!(coax(d, ratio * bump, er) > coax(d, ratio, er));
        prop_assert!(coax(d, ratio, er * bump) < coax(d, ratio, er));
    }

    #[test]
    fn cpw_monotone(
        w in 5e-6..500e-6f64,
        s_over_w in 0.02..5.0f64,
        bump in 1.01..2.0f64,
        er in 1.0..12.0f64,
        cover in prop::option::of(20e-6..2e-3f64),
    ) {
        let z = cpw(w, w * s_over_w, er, cover);
        prop_assert!(cpw(w, w * s_over_w * bump, er, cover) > z);
        prop_assert!(cpw(w, w * s_over_w, er * bump, cover) < z);
    }

    #[test]
    fn cpw_effective_permittivity_bounded(w in 5e-6..500e-6f64, s in 5e-6..500e-6f64, er in 1.0..12.0f64,
                                          cover in prop::option::of(20e-6..2e-3f64)) {
        let spec = CpwSpec { trace_width: w, gap: s, relative_permittivity: er, cover_height: cover };
        let eeff = cpw_effective_permittivity(&spec).unwrap();
        prop_assert!(eeff >= 1.0 - 1e-12 && eeff <= er + 1e-12);
        if cover.is_none() {
            prop_assert!((eeff - (1.0 + er) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coupled_modes_bracket(w in 5e-6..200e-6f64, s in 5e-6..200e-6f64, sep in 5e-6..500e-6f64, er in 1.0..12.0f64) {
        let m = CoupledCpwSpec { trace_width: w, gap: s, separation: sep, relative_permittivity: er, cover_height: None }
            .mode_impedances()
            .unwrap();
        prop_assert!(m.even > m.odd);
        let k = m.coupling_coefficient();
        prop_assert!(k > 0.0 && k < 1.0);
    }

    #[test]
    fn elliptic_k_matches_quadrature(k in 0.0..0.999f64) {
        let oracle = ellip_k_quadrature(k);
        prop_assert!(((ellip_k(k) - oracle) / oracle).abs() < 1e-9);
    }

    #[test]
    fn single_component_mix_is_identity(er in 1.0..12.0f64, vol in 1e-12..1.0f64) {
        prop_assert!((mixed_permittivity(&[(er, vol)]).unwrap() - er).abs() < 1e-12 * er);
    }
}
