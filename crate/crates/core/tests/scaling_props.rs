use pinchip_core::scaling::{
    lateral_crossover_length, lateral_scaling_report, vertical_scaling_report, Access, LimitingFactor, QubitArraySpec,
    ScalingError, WiringArchitecture,
};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5ca1e),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn lateral(p_q: f64, side: f64, p_w: f64) -> pinchip_core::scaling::ScalingReport {
    lateral_scaling_report(
        &QubitArraySpec {
            qubit_pitch: p_q,
            chip_side: side,
        },
        &WiringArchitecture::lateral(p_w),
    )
    .unwrap()
}

/// Locates the chip side where qubit and wire counts meet by bisecting on
/// the sign of `(ℓ/p_q)² − 4ℓ/p_w`, without using the closed form.
fn bisect_crossover(p_q: f64, p_w: f64) -> f64 {
    let g = |l: f64| (l / p_q).powi(2) - 4.0 * l / p_w;
    let (mut lo, mut hi) = (p_q * 1e-3, p_q);
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn counts_agree_at_crossover(p_q in 50e-6..5e-3f64, frac in 0.002..1.0f64) {
        let p_w = p_q * frac;
        let l = lateral_crossover_length(p_q, p_w);
        let r = lateral(p_q, l, p_w);
        let residual = ((r.qubits_exact - r.wires_exact) / r.wires_exact).abs();
        prop_assert!(residual < 1e-12, "residual {residual}");
    }

    #[test]
    fn crossover_matches_bisection(p_q in 50e-6..5e-3f64, frac in 0.002..1.0f64) {
        let p_w = p_q * frac;
        let closed = lateral_crossover_length(p_q, p_w);
        let oracle = bisect_crossover(p_q, p_w);
        prop_assert!(((closed - oracle) / oracle).abs() < 1e-12);
    }

    #[test]
    fn limiting_factor_flips_at_crossover(p_q in 50e-6..5e-3f64, frac in 0.002..1.0f64, k in 1.001..10.0f64) {
        let p_w = p_q * frac;
        let l = lateral_crossover_length(p_q, p_w);
        prop_assert_eq!(lateral(p_q, l * k, p_w).limiting_factor, LimitingFactor::WireCount);
        if l / k >= p_q {
            prop_assert_eq!(lateral(p_q, l / k, p_w).limiting_factor, LimitingFactor::QubitSize);
        }
    }

    #[test]
    fn integers_are_floors(p_q in 50e-6..5e-3f64, ratio in 1.0..2000.0f64, frac in 0.002..1.0f64) {
        let r = lateral(p_q, p_q * ratio, p_q * frac);
        prop_assert_eq!(r.qubits, r.qubits_exact.floor() as u64);
        prop_assert_eq!(r.wires, r.wires_exact.floor() as u64);
        prop_assert_eq!(r.qubits_per_side, (ratio * (1.0 + 1e-12)).floor() as u64);
    }

    #[test]
    fn qubits_monotone(p_q in 50e-6..5e-3f64, ratio in 1.0..1000.0f64, grow in 1.0..3.0f64) {
        let p_w = p_q / 10.0;
        let small = lateral(p_q, p_q * ratio, p_w);
        let larger_chip = lateral(p_q, p_q * ratio * grow, p_w);
        prop_assert!(larger_chip.qubits >= small.qubits);
        let coarser = lateral(p_q * grow.min(ratio), p_q * ratio, p_w);
        prop_assert!(coarser.qubits <= small.qubits);
    }

    #[test]
    fn lateral_wires_linear_vertical_quadratic(p_q in 100e-6..2e-3f64, ratio in 1.0..400.0f64) {
        let arr = |side| QubitArraySpec { qubit_pitch: p_q, chip_side: side };
        let p_w = p_q / 2.0;
        let side = p_q * ratio;
        let lat1 = lateral_scaling_report(&arr(side), &WiringArchitecture::lateral(p_w)).unwrap();
        let lat2 = lateral_scaling_report(&arr(2.0 * side), &WiringArchitecture::lateral(p_w)).unwrap();
        prop_assert!((lat2.wires_exact / lat1.wires_exact - 2.0).abs() < 1e-9);
        let v1 = vertical_scaling_report(&arr(side), &WiringArchitecture::vertical(p_w)).unwrap();
        let v2 = vertical_scaling_report(&arr(2.0 * side), &WiringArchitecture::vertical(p_w)).unwrap();
        prop_assert!((v2.wires_exact / v1.wires_exact - 4.0).abs() < 1e-9);
    }

    #[test]
    fn vertical_never_wire_limited(p_q in 50e-6..5e-3f64, ratio in 1.0..1000.0f64, frac in 0.01..3.0f64) {
        let spec = QubitArraySpec { qubit_pitch: p_q, chip_side: p_q * ratio };
        match vertical_scaling_report(&spec, &WiringArchitecture::vertical(p_q * frac)) {
            Ok(r) => {
                prop_assert_eq!(r.access, Access::Vertical);
                prop_assert_eq!(r.limiting_factor, LimitingFactor::QubitSize);
                prop_assert!(frac <= 1.0);
            }
            Err(e) => {
                let pitch_violation = matches!(e, ScalingError::PitchConditionViolated { .. });
                prop_assert!(pitch_violation);
                prop_assert!(frac > 1.0);
            }
        }
    }
}
