use dpc_core::assessment::{assess, route, AssessmentConfig, ProjectionInit, RoutingMode};
use dpc_core::completion::{complete, CompletionInit, CompletionParams, CorrectionMode};
use dpc_core::encoder_sim::{generate_scenario, Condition, RecipeParams, StageBundle};
use dpc_core::numerics::{argmax, SeededRng};
use proptest::prelude::*;

fn bundle(condition: Condition, seed: u64) -> StageBundle {
    generate_scenario(6, 32, condition, 3, seed, &RecipeParams::default()).unwrap().bundle
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn shuffled_prefix(n: usize, rng: &mut SeededRng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n - 1).collect();
    for i in (1..p.len()).rev() {
        let j = rng.index(i + 1);
        p.swap(i, j);
    }
    p.push(n - 1);
    p
}

fn check_equivariance(b: &StageBundle, perm: &[usize], cfg: &AssessmentConfig) {
    let base = assess(b, cfg).unwrap().report;
    let moved = assess(&b.permuted(perm), cfg).unwrap().report;
    let pick = |v: &[f64]| perm.iter().map(|&i| v[i]).collect::<Vec<_>>();
    assert!(close(&moved.cues.agreement, &pick(&base.cues.agreement), 1e-12));
    assert!(close(&moved.cues.anchoring, &pick(&base.cues.anchoring), 1e-12));
    assert!(close(&moved.cues.coverage, &pick(&base.cues.coverage), 1e-12));
    assert!(close(&moved.d_hat, &pick(&base.d_hat), 1e-12));
    assert!(close(moved.omega(), &pick(base.omega()), 1e-12));
    assert_eq!(perm[moved.selected()], base.selected());
}

#[test]
fn stage_permutation_with_final_fixed_permutes_every_output() {
    let mut rng = SeededRng::new(5);
    for condition in Condition::ALL {
        for seed in 0..10 {
            let b = bundle(condition, seed);
            let perm = shuffled_prefix(6, &mut rng);
            check_equivariance(&b, &perm, &AssessmentConfig::default());
            let cfg = AssessmentConfig { projections: ProjectionInit::SeededOrthogonal, ..AssessmentConfig::default() };
            check_equivariance(&b, &perm, &cfg);
        }
    }
}

#[test]
fn hard_routing_is_the_zero_temperature_limit_of_soft_routing() {
    for seed in 0..50 {
        let r = assess(&bundle(Condition::Clean, seed), &AssessmentConfig::default()).unwrap().report;
        let soft = route(&r.d_hat, 1e-4, RoutingMode::Soft).unwrap();
        let hard = route(&r.d_hat, 1e-4, RoutingMode::Hard).unwrap();
        assert_eq!(argmax(&soft.weights), hard.selected);
        assert!(soft.weights[hard.selected] >= 1.0 - 1e-6 || r.routing.tie);
        assert_eq!(hard.weights.iter().filter(|w| **w == 1.0).count(), 1);
    }
}

#[test]
fn correction_under_one_hot_routing_uses_the_routed_state_exactly() {
    let b = bundle(Condition::OcclusionLike, 2);
    let cfg = AssessmentConfig { routing: RoutingMode::Hard, ..AssessmentConfig::default() };
    let a = assess(&b, &cfg).unwrap();
    let p = CompletionParams::build(CompletionInit::SupportPreserving, 32, 0);
    let r = complete(a.report.omega(), &a.states, &b, &p, CorrectionMode::Gated).unwrap();
    let l = a.report.selected();
    assert!(a.states[l].iter().zip(&r.z_bn).all(|(x, y)| x.to_bits() == y.to_bits()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routing_weights_form_a_distribution(seed in 0u64..5_000, tau in 1e-3f64..5.0, hard in any::<bool>()) {
        let mode = if hard { RoutingMode::Hard } else { RoutingMode::Soft };
        let cfg = AssessmentConfig { tau_s: tau, routing: mode, ..AssessmentConfig::default() };
        let r = assess(&bundle(Condition::NoiseBlurLike, seed), &cfg).unwrap().report;
        let s: f64 = r.omega().iter().sum();
        prop_assert!((s - 1.0).abs() <= 1e-12);
        prop_assert!(r.omega().iter().all(|w| *w >= 0.0));
        prop_assert!(r.d_hat.iter().all(|d| *d >= 0.0 && d.is_finite()));
    }

    #[test]
    fn permutation_equivariance_holds_for_random_prefix_orders(seed in 0u64..5_000, pseed in 0u64..1_000) {
        let perm = shuffled_prefix(6, &mut SeededRng::new(pseed));
        check_equivariance(&bundle(Condition::Clean, seed), &perm, &AssessmentConfig::default());
    }

    #[test]
    fn gated_correction_stays_bounded(seed in 0u64..5_000, init in 0usize..3) {
        let init = [CompletionInit::SupportPreserving, CompletionInit::SeededOrthogonal, CompletionInit::Zero][init];
        let b = bundle(Condition::Clean, seed);
        let a = assess(&b, &AssessmentConfig::default()).unwrap();
        let p = CompletionParams::build(init, 32, seed);
        let r = complete(a.report.omega(), &a.states, &b, &p, CorrectionMode::Gated).unwrap();
        let g = r.g_bn.unwrap();
        prop_assert!(r.q_bn.iter().all(|q| q.abs() <= 1.0));
        prop_assert!(g.iter().all(|x| (0.0..=1.0).contains(x)));
        for i in 0..32 {
            prop_assert!((r.z_tilde[i] - r.z_bn[i]).abs() <= 1.0);
        }
    }
}
