use std::f64::consts::{FRAC_PI_8, SQRT_2};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use timeflow_core::bell::{
    hv_chsh, hv_correlation, local_bound_sweep, mc_chsh, ChshSetting,
};
use timeflow_core::polarizer::{random_cosine_profile, TransmissionProfile};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn correlation_depends_on_difference(seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0, d in -4.0f64..4.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_cosine_profile(&mut rng, 8, 512).unwrap();
        let e0 = hv_correlation(&p, a, b).value;
        let e1 = hv_correlation(&p, a + d, b + d).value;
        prop_assert!((e0 - e1).abs() < 1e-10);
        prop_assert!(e0.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn smooth_profiles_obey_the_bound(seed in any::<u64>(), modes in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_cosine_profile(&mut rng, modes, 512).unwrap();
        prop_assert!(hv_chsh(&p, &ChshSetting::canonical()).s.abs() <= 2.0 + 1e-8);
    }
}

#[test]
fn sweep_over_thousand_profiles() {
    let r = local_bound_sweep(1000, 8, 42).unwrap();
    assert_eq!(r.n_step_profiles, 250);
    assert!(r.max_abs_s <= 2.0 + 1e-8, "{}", r.max_abs_s);
    // step strategies reach the classical bound for suitable thresholds
    assert!(r.max_abs_s > 1.0);
}

#[test]
fn single_belinfante_profile() {
    let p = TransmissionProfile::belinfante(512).unwrap();
    let r = hv_chsh(&p, &ChshSetting::canonical());
    assert!((r.s - SQRT_2).abs() < 1e-12);
    assert!(r.correlations.iter().all(|c| c.std_error == 0.0));
}

#[test]
fn step_profile_reaches_but_does_not_exceed_two() {
    // transmit on half the period: E(a,b) = 1 - 4|a-b|/pi for |a-b| <= pi/2
    let samples = (0..512).map(|j| if j < 256 { 1.0 } else { 0.0 }).collect();
    let p = TransmissionProfile::from_samples(samples).unwrap();
    let e = hv_correlation(&p, 0.0, FRAC_PI_8).value;
    assert!((e - 0.5).abs() < 1e-12);
    let s = hv_chsh(&p, &ChshSetting::canonical()).s;
    assert!((s - 2.0).abs() < 1e-12);
}

#[test]
fn monte_carlo_consistency_over_seeds() {
    let p = TransmissionProfile::belinfante(512).unwrap();
    let exact = hv_correlation(&p, 0.0, FRAC_PI_8).value;
    let inside = (0..30)
        .filter(|&seed| {
            let e = timeflow_core::bell::mc_simulate(&p, 0.0, FRAC_PI_8, 100_000, seed).unwrap();
            (e.value - exact).abs() <= 3.0 * e.std_error
        })
        .count();
    assert!(inside >= 28, "{inside} of 30");
}

#[test]
fn monte_carlo_chsh_is_reproducible() {
    let p = TransmissionProfile::belinfante(512).unwrap();
    let a = mc_chsh(&p, &ChshSetting::canonical(), 10_000, 9).unwrap();
    let b = mc_chsh(&p, &ChshSetting::canonical(), 10_000, 9).unwrap();
    assert_eq!(a, b);
    assert!(a.correlations.iter().all(|c| c.n_events == 10_000));
}
