use pinchip::units::{parse_any, Dimension, LengthDim, PowerDim};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 1000,
        rng_seed: RngSeed::Fixed(0x0417),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn suffixed_values_scale_to_si(v in 1e-3..1e4f64, which in 0usize..7, space in any::<bool>()) {
        let (suffix, factor) = LengthDim::UNITS[which];
        let text = format!("{v}{}{suffix}", if space { " " } else { "" });
        let (si, dim, si_suffix) = parse_any(&text).unwrap();
        prop_assert_eq!(dim, "length");
        prop_assert_eq!(si_suffix, "m");
        prop_assert!(((si - v * factor) / (v * factor)).abs() < 1e-15);
    }

    #[test]
    fn si_rendering_round_trips(v in 1e-12..1e3f64) {
        let (back, _, _) = parse_any(&format!("{v}{}", PowerDim::SI)).unwrap();
        prop_assert_eq!(back, v);
    }
}
