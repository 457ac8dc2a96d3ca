use std::collections::BTreeMap;

use dpc_core::encoder_sim::{
    analytical_deficiency, baseline_utility, generate_scenario, median_thresholds, propagate, Condition, PlantedScenario,
    RecipeParams,
};
use dpc_core::numerics::{argmax, mean, PsiMode};

fn scenario(condition: Condition, seed: u64) -> PlantedScenario {
    generate_scenario(6, 32, condition, 3, seed, &RecipeParams::default()).unwrap()
}

#[test]
fn construction_is_sound_for_every_condition() {
    for condition in Condition::ALL {
        for seed in 0..200 {
            let sc = scenario(condition, seed);
            let f = &sc.factors;
            let d = analytical_deficiency(f, median_thresholds(f), PsiMode::Hard, 1.0).unwrap();
            assert_eq!(argmax(&d), 3, "{condition:?} seed {seed}: {d:?}");
            assert!(d[3] > 0.0);
            assert_eq!(sc.header.planted_bottleneck, 4);
            assert!((dpc_core::numerics::norm(&sc.target) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn degradation_lowers_mean_coverage_for_each_seed() {
    for seed in 0..200 {
        let clean = mean(&scenario(Condition::Clean, seed).factors.coverage);
        let occ = mean(&scenario(Condition::OcclusionLike, seed).factors.coverage);
        let blur = mean(&scenario(Condition::NoiseBlurLike, seed).factors.coverage);
        assert!(clean > occ, "seed {seed}: {clean} vs occlusion {occ}");
        assert!(clean > blur, "seed {seed}: {clean} vs noise_blur {blur}");
    }
}

#[test]
fn seed_seven_occlusion_coverage_is_below_clean() {
    let clean = mean(&scenario(Condition::Clean, 7).factors.coverage);
    let occ = mean(&scenario(Condition::OcclusionLike, 7).factors.coverage);
    assert!(occ < clean);
}

#[test]
fn scenario_is_a_function_of_seed_and_config() {
    for condition in Condition::ALL {
        let a = scenario(condition, 7);
        let b = scenario(condition, 7);
        assert_eq!(a, b);
        assert_eq!(baseline_utility(&a).to_bits(), baseline_utility(&b).to_bits());
        assert_ne!(a.bundle, scenario(condition, 8).bundle);
    }
}

#[test]
fn json_round_trip_is_bit_exact() {
    for condition in Condition::ALL {
        for seed in [0, 7, 123] {
            let sc = scenario(condition, seed);
            let text = sc.to_json().unwrap();
            let back = PlantedScenario::from_json(&text).unwrap();
            assert_eq!(back, sc);
            assert_eq!(back.to_json().unwrap(), text);
            for (x, y) in sc.bundle.audio.iter().flatten().zip(back.bundle.audio.iter().flatten()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
            assert_eq!(baseline_utility(&back).to_bits(), baseline_utility(&sc).to_bits());
        }
    }
}

#[test]
fn tampered_json_is_rejected() {
    let sc = scenario(Condition::Clean, 7);
    let mut v: serde_json::Value = serde_json::from_str(&sc.to_json().unwrap()).unwrap();
    v["header"]["planted_bottleneck"] = 9.into();
    assert!(PlantedScenario::from_json(&v.to_string()).is_err());
    let mut v: serde_json::Value = serde_json::from_str(&sc.to_json().unwrap()).unwrap();
    v["schema_version"] = 2.into();
    assert!(PlantedScenario::from_json(&v.to_string()).is_err());
}

#[test]
fn invalid_planted_index_is_an_error() {
    assert!(generate_scenario(6, 32, Condition::Clean, 6, 0, &RecipeParams::default()).is_err());
    assert!(generate_scenario(6, 4, Condition::Clean, 2, 0, &RecipeParams::default()).is_err());
}

#[test]
fn utility_stays_in_unit_interval_under_large_overrides() {
    let sc = scenario(Condition::Clean, 3);
    for l in 0..6 {
        for s in [-1e6, -1.0, 0.0, 1e-9, 1e6] {
            let (_, u) = propagate(&sc, &BTreeMap::from([(l, vec![s; 32])])).unwrap();
            assert!((-1.0..=1.0).contains(&u), "stage {l} scale {s}: {u}");
        }
    }
}
