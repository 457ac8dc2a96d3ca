//! Synthetic stage-wise audio-visual encoder with a planted bottleneck.
//!
//! A scenario holds per-stage audio/visual features, the recurrent chain that
//! turns them into a final summary, a hidden target direction `t`, and the
//! ground-truth readiness factors the features were built to exhibit.
//!
//! Stage indices are zero-based in this API; serialized headers and the CLI
//! use one-based stage numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::numerics::{self, add, axpy, cos, dot, scale, unit, Matrix, PsiMode, SeededRng};

pub const SCENARIO_SCHEMA_VERSION: u32 = 1;

const FEATURE_STREAM: u64 = 0;
const DEGRADATION_STREAM: u64 = 1;
const CHAIN_STREAM: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Clean,
    OcclusionLike,
    NoiseBlurLike,
}

impl Condition {
    pub const ALL: [Condition; 3] = [Condition::Clean, Condition::OcclusionLike, Condition::NoiseBlurLike];

    pub fn label(self) -> &'static str {
        match self {
            Condition::Clean => "clean",
            Condition::OcclusionLike => "occlusion_like",
            Condition::NoiseBlurLike => "noise_blur_like",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "clean" => Ok(Condition::Clean),
            "occlusion_like" => Ok(Condition::OcclusionLike),
            "noise_blur_like" => Ok(Condition::NoiseBlurLike),
            other => Err(Error::Config(format!("unknown condition '{other}'"))),
        }
    }
}

/// Knobs of the generation recipe. Defaults are the documented recipe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecipeParams {
    /// Correlation between the audio and visual support coefficients of a stage.
    pub modality_correlation: f64,
    /// Spread of per-stage support coefficients around the shared direction.
    pub stage_diversity: f64,
    pub feature_noise: f64,
    /// Factor applied to the supported component at the planted stage.
    pub attenuation: f64,
    /// Scale of the input map carrying the planted stage state into the chain.
    pub influence_scale: f64,
    /// Share of the planted unsupported component carried into the final-stage
    /// audio and visual features.
    pub final_carry_audio: f64,
    pub final_carry_visual: f64,
    pub chain_gain: f64,
    pub chain_jitter: f64,
    pub input_gain: f64,
    pub summary_feature_weight: f64,
    pub summary_state_weight: f64,
    pub mask_fraction: f64,
    pub blur_noise_ratio: f64,
}

impl Default for RecipeParams {
    fn default() -> Self {
        Self {
            modality_correlation: 0.6,
            stage_diversity: 0.3,
            feature_noise: 0.03,
            attenuation: 0.3,
            influence_scale: 2.0,
            final_carry_audio: 1.2,
            final_carry_visual: 0.3,
            chain_gain: 0.9,
            chain_jitter: 0.1,
            input_gain: 0.4,
            summary_feature_weight: 0.3,
            summary_state_weight: 0.5,
            mask_fraction: 0.4,
            blur_noise_ratio: 0.25,
        }
    }
}

impl RecipeParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.modality_correlation,
            self.stage_diversity,
            self.feature_noise,
            self.attenuation,
            self.influence_scale,
            self.final_carry_audio,
            self.final_carry_visual,
            self.chain_gain,
            self.chain_jitter,
            self.input_gain,
            self.summary_feature_weight,
            self.summary_state_weight,
            self.mask_fraction,
            self.blur_noise_ratio,
        ];
        if !numerics::all_finite(&finite) {
            return Err(Error::Config("recipe parameters must be finite".into()));
        }
        if !(-1.0..=1.0).contains(&self.modality_correlation) {
            return Err(Error::Config("modality_correlation must lie in [-1, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.mask_fraction) {
            return Err(Error::Config("mask_fraction must lie in [0, 1]".into()));
        }
        if self.stage_diversity < 0.0 || self.feature_noise < 0.0 || self.blur_noise_ratio < 0.0 {
            return Err(Error::Config("diversity, noise and blur ratio must be non-negative".into()));
        }
        if self.influence_scale <= 0.0 {
            return Err(Error::Config("influence_scale must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageBundle {
    pub audio: Vec<Vec<f64>>,
    pub visual: Vec<Vec<f64>>,
}

impl StageBundle {
    pub fn new(audio: Vec<Vec<f64>>, visual: Vec<Vec<f64>>) -> Result<Self> {
        let b = Self { audio, visual };
        b.validate()?;
        Ok(b)
    }

    pub fn num_stages(&self) -> usize {
        self.audio.len()
    }

    pub fn feature_dim(&self) -> usize {
        self.audio.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<()> {
        if self.audio.is_empty() || self.audio.len() != self.visual.len() {
            return contract(format!(
                "bundle needs matching non-empty stage lists, got {} audio and {} visual",
                self.audio.len(),
                self.visual.len()
            ));
        }
        let d = self.feature_dim();
        if d == 0 {
            return contract("bundle feature_dim must be positive");
        }
        for v in self.audio.iter().chain(&self.visual) {
            if v.len() != d {
                return contract(format!("bundle vector of dim {} where {d} expected", v.len()));
            }
            if !numerics::all_finite(v) {
                return contract("bundle contains a non-finite entry");
            }
        }
        Ok(())
    }

    /// Same bundle with stages reordered so that new stage `i` is old stage `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            audio: perm.iter().map(|&i| self.audio[i].clone()).collect(),
            visual: perm.iter().map(|&i| self.visual[i].clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedFactors {
    pub agreement: Vec<f64>,
    pub influence: Vec<f64>,
    pub coverage: Vec<f64>,
}

/// Recurrent chain `h_1 = tanh(k_1 U x_1)`, `h_{l+1} = tanh(W_l h_l + k_{l+1} U x_{l+1})`,
/// summary `f = w (a_N + v_N) + S h_N`, where `x_l = (a_l + v_l) / 2` is the
/// stage state and `k_l` its input scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub transitions: Vec<Matrix>,
    pub input: Matrix,
    pub input_scales: Vec<f64>,
    pub summary_feature_weight: f64,
    pub summary_state: Matrix,
}

impl Chain {
    /// Spectral norm of the map carrying each stage state into the chain.
    pub fn outgoing_norms(&self) -> Vec<f64> {
        let u = self.input.spectral_norm();
        self.input_scales.iter().map(|k| k * u).collect()
    }

    fn inject(&self, l: usize, x: &[f64]) -> Vec<f64> {
        scale(&self.input.mul_vec(x), self.input_scales[l])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioHeader {
    #[serde(rename = "N")]
    pub num_stages: usize,
    pub d: usize,
    pub condition: Condition,
    pub seed: u64,
    /// One-based.
    pub planted_bottleneck: usize,
    pub draw: Draw,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedScenario {
    pub schema_version: u32,
    pub header: ScenarioHeader,
    pub recipe: RecipeParams,
    pub bundle: StageBundle,
    pub factors: PlantedFactors,
    pub chain: Chain,
    pub target: Vec<f64>,
}

impl PlantedScenario {
    pub fn num_stages(&self) -> usize {
        self.header.num_stages
    }

    pub fn feature_dim(&self) -> usize {
        self.header.d
    }

    /// Zero-based planted stage.
    pub fn planted(&self) -> usize {
        self.header.planted_bottleneck - 1
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sc: Self = serde_json::from_str(s)?;
        if sc.schema_version != SCENARIO_SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported scenario schema_version {}", sc.schema_version)));
        }
        sc.bundle.validate()?;
        let (n, d) = (sc.header.num_stages, sc.header.d);
        if sc.bundle.num_stages() != n || sc.bundle.feature_dim() != d || sc.target.len() != d {
            return contract("scenario header disagrees with stored arrays");
        }
        if sc.header.planted_bottleneck == 0 || sc.header.planted_bottleneck > n {
            return contract("planted_bottleneck out of range");
        }
        if sc.chain.transitions.len() + 1 != n || sc.chain.input_scales.len() != n {
            return contract("chain must have N-1 transitions and N input scales");
        }
        Ok(sc)
    }
}

/// Stage state `x_l = (a_l + v_l) / 2` used by the chain.
pub fn chain_stage_states(bundle: &StageBundle) -> Vec<Vec<f64>> {
    bundle.audio.iter().zip(&bundle.visual).map(|(a, v)| scale(&add(a, v), 0.5)).collect()
}

fn support_projection(basis: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for b in basis {
        axpy(dot(b, x), b, &mut out);
    }
    out
}

fn jittered_identity(d: usize, gain: f64, jitter: f64, rng: &mut SeededRng) -> Matrix {
    let s = jitter / (d as f64).sqrt();
    let noise = rng.normal_vec(d * d);
    Matrix::from_fn(d, d, |i, j| gain * ((if i == j { 1.0 } else { 0.0 }) + s * noise[i * d + j]))
}

/// Feature and degradation draws tried before generation gives up.
pub const MAX_FEATURE_DRAWS: u32 = 8;
pub const MAX_DEGRADATION_DRAWS: u32 = 16;

/// Which redraw of the seeded streams produced a scenario.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Draw {
    pub features: u32,
    pub degradation: u32,
}

/// Build a scenario whose analytical deficiency peaks at the planted stage.
/// Features are redrawn deterministically until the clean scenario satisfies
/// this; for a degraded condition the degradation noise is then redrawn until
/// the degraded scenario satisfies it too and has lower mean coverage than
/// the clean one. `planted` is zero-based.
pub fn generate_scenario(
    num_stages: usize,
    feature_dim: usize,
    condition: Condition,
    planted: usize,
    seed: u64,
    recipe: &RecipeParams,
) -> Result<PlantedScenario> {
    let build = |condition, draw| build_scenario(num_stages, feature_dim, condition, planted, seed, draw, recipe);
    let mut last = None;
    for features in 0..MAX_FEATURE_DRAWS {
        let clean = build(Condition::Clean, Draw { features, degradation: 0 })?;
        let peak = deficiency_peak(&clean.factors)?;
        if peak != Some(planted) {
            last = peak;
            continue;
        }
        if condition == Condition::Clean {
            return Ok(clean);
        }
        let clean_coverage = numerics::mean(&clean.factors.coverage);
        for degradation in 0..MAX_DEGRADATION_DRAWS {
            let sc = build(condition, Draw { features, degradation })?;
            let peak = deficiency_peak(&sc.factors)?;
            if peak == Some(planted) && numerics::mean(&sc.factors.coverage) < clean_coverage {
                return Ok(sc);
            }
            last = peak;
        }
    }
    let found = last.map_or("no positive deficiency".to_string(), |l| format!("a peak at stage {}", l + 1));
    contract(format!("seed {seed}: no draw plants stage {}; last draw gave {found}", planted + 1))
}

/// Stage of the hard-psi deficiency peak under median thresholds, if positive.
fn deficiency_peak(f: &PlantedFactors) -> Result<Option<usize>> {
    let d = analytical_deficiency(f, median_thresholds(f), PsiMode::Hard, 1.0)?;
    let l = numerics::argmax(&d);
    Ok((d[l] > 0.0).then_some(l))
}

/// Scenario construction without the deficiency check.
pub fn build_scenario(
    num_stages: usize,
    feature_dim: usize,
    condition: Condition,
    planted: usize,
    seed: u64,
    draw: Draw,
    recipe: &RecipeParams,
) -> Result<PlantedScenario> {
    if num_stages < 2 {
        return contract(format!("num_stages must be >= 2, got {num_stages}"));
    }
    if feature_dim < 8 || feature_dim % 2 != 0 {
        return contract(format!("feature_dim must be even and >= 8, got {feature_dim}"));
    }
    if planted >= num_stages {
        return contract(format!("planted stage {} outside 1..={num_stages}", planted + 1));
    }
    recipe.validate()?;
    let (n, d) = (num_stages, feature_dim);
    let r = d / 2;

    let mut rng = SeededRng::with_stream(seed, FEATURE_STREAM + 16 * u64::from(draw.features));
    let q = Matrix::seeded_orthogonal(d, d, &mut rng);
    let columns: Vec<Vec<f64>> = (0..d).map(|j| (0..d).map(|i| q.get(i, j)).collect()).collect();
    let (basis, complement) = columns.split_at(r);
    let embed = |coeffs: &[f64], vecs: &[Vec<f64>]| {
        let mut out = vec![0.0; d];
        for (c, b) in coeffs.iter().zip(vecs) {
            axpy(*c, b, &mut out);
        }
        out
    };

    let shared = unit(&rng.normal_vec(r));
    let target = embed(&shared, basis);
    let unsupported = embed(&unit(&rng.normal_vec(d - r)), complement);
    let rs = (r as f64).sqrt();
    let rho = recipe.modality_correlation;

    let mut audio = Vec::with_capacity(n);
    let mut visual = Vec::with_capacity(n);
    for l in 0..n {
        let jitter = rng.normal_vec(r);
        let s = unit(&add(&shared, &scale(&jitter, recipe.stage_diversity / rs)));
        let mix = rng.normal_vec(r);
        let sv = unit(&add(&scale(&s, rho), &scale(&mix, (1.0 - rho * rho).sqrt() / rs)));
        let mut a = embed(&s, basis);
        axpy(recipe.feature_noise, &rng.normal_vec(d), &mut a);
        let mut v = embed(&sv, basis);
        axpy(recipe.feature_noise, &rng.normal_vec(d), &mut v);
        if l == planted {
            for x in [&mut a, &mut v] {
                let p = support_projection(basis, x);
                axpy(-(1.0 - recipe.attenuation), &p, x);
                axpy(1.0, &unsupported, x);
            }
        }
        audio.push(a);
        visual.push(v);
    }
    if planted + 1 < n {
        axpy(recipe.final_carry_audio, &unsupported, &mut audio[n - 1]);
        axpy(recipe.final_carry_visual, &unsupported, &mut visual[n - 1]);
    }

    let mut crng = SeededRng::with_stream(seed, CHAIN_STREAM);
    let transitions: Vec<Matrix> =
        (0..n - 1).map(|_| jittered_identity(d, recipe.chain_gain, recipe.chain_jitter, &mut crng)).collect();
    let input = jittered_identity(d, recipe.input_gain, recipe.chain_jitter, &mut crng);
    let mut input_scales = vec![1.0; n];
    input_scales[planted] = recipe.influence_scale;
    let chain = Chain {
        transitions,
        input,
        input_scales,
        summary_feature_weight: recipe.summary_feature_weight,
        summary_state: Matrix::identity(d).scaled(recipe.summary_state_weight),
    };

    let mut drng = SeededRng::with_stream(seed, DEGRADATION_STREAM + 16 * u64::from(draw.degradation));
    degrade(&mut visual, condition, recipe, &mut drng);

    let bundle = StageBundle::new(audio, visual)?;
    let factors = planted_factors(&bundle, &chain, basis);
    Ok(PlantedScenario {
        schema_version: SCENARIO_SCHEMA_VERSION,
        header: ScenarioHeader { num_stages: n, d, condition, seed, planted_bottleneck: planted + 1, draw },
        recipe: recipe.clone(),
        bundle,
        factors,
        chain,
        target,
    })
}

fn degrade(visual: &mut [Vec<f64>], condition: Condition, recipe: &RecipeParams, rng: &mut SeededRng) {
    match condition {
        Condition::Clean => {}
        Condition::OcclusionLike => {
            for v in visual.iter_mut() {
                let d = v.len();
                let width = (recipe.mask_fraction * d as f64).round() as usize;
                let start = rng.index(d - width + 1);
                v[start..start + width].iter_mut().for_each(|x| *x = 0.0);
            }
        }
        Condition::NoiseBlurLike => {
            for v in visual.iter_mut() {
                let sd = (recipe.blur_noise_ratio * numerics::std_dev(v).powi(2)).sqrt();
                let noisy: Vec<f64> = v.iter().map(|x| x + sd * rng.normal()).collect();
                *v = moving_average3(&noisy);
            }
        }
    }
}

/// Three-tap moving average with edge replication.
pub fn moving_average3(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let left = x[i.saturating_sub(1)];
            let right = x[(i + 1).min(n - 1)];
            (left + x[i] + right) / 3.0
        })
        .collect()
}

fn planted_factors(bundle: &StageBundle, chain: &Chain, basis: &[Vec<f64>]) -> PlantedFactors {
    let agreement = bundle.audio.iter().zip(&bundle.visual).map(|(a, v)| cos(a, v)).collect();
    let norms = chain.outgoing_norms();
    let avg = numerics::mean(&norms);
    let influence = norms.iter().map(|s| s / avg).collect();
    let coverage = chain_stage_states(bundle).iter().map(|x| cos(x, &support_projection(basis, x))).collect();
    PlantedFactors { agreement, influence, coverage }
}

/// Per-factor medians across stages, used as construction-time thresholds.
pub fn median_thresholds(f: &PlantedFactors) -> (f64, f64, f64) {
    (median(&f.agreement), median(&f.influence), median(&f.coverage))
}

fn median(x: &[f64]) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// `D_l = psi(A_l - tau_A) psi(P_l - tau_P) psi(tau_C - C_l)`.
pub fn analytical_deficiency(
    f: &PlantedFactors,
    thresholds: (f64, f64, f64),
    mode: PsiMode,
    beta: f64,
) -> Result<Vec<f64>> {
    let (ta, tp, tc) = thresholds;
    let n = f.agreement.len();
    if f.influence.len() != n || f.coverage.len() != n {
        return contract("factor vectors differ in length");
    }
    (0..n)
        .map(|l| {
            let a = numerics::smooth_positive_part(f.agreement[l] - ta, beta, mode)?;
            let p = numerics::smooth_positive_part(f.influence[l] - tp, beta, mode)?;
            let c = numerics::smooth_positive_part(tc - f.coverage[l], beta, mode)?;
            Ok(a * p * c)
        })
        .collect()
}

/// Run the chain with optional stage-state overrides (zero-based keys) and
/// return the final summary and the utility `cos(f, t)`.
pub fn propagate(sc: &PlantedScenario, overrides: &BTreeMap<usize, Vec<f64>>) -> Result<(Vec<f64>, f64)> {
    let (n, d) = (sc.num_stages(), sc.feature_dim());
    for (l, v) in overrides {
        if *l >= n {
            return contract(format!("override at stage {} outside 1..={n}", l + 1));
        }
        if v.len() != d {
            return contract(format!("override at stage {} has dim {} instead of {d}", l + 1, v.len()));
        }
    }
    let states = chain_stage_states(&sc.bundle);
    let state = |l: usize| overrides.get(&l).unwrap_or(&states[l]);
    let ch = &sc.chain;
    let mut h: Vec<f64> = ch.inject(0, state(0)).iter().map(|x| x.tanh()).collect();
    for l in 0..n - 1 {
        let pre = add(&ch.transitions[l].mul_vec(&h), &ch.inject(l + 1, state(l + 1)));
        h = pre.iter().map(|x| x.tanh()).collect();
    }
    let mut f = scale(&add(&sc.bundle.audio[n - 1], &sc.bundle.visual[n - 1]), ch.summary_feature_weight);
    axpy(1.0, &ch.summary_state.mul_vec(&h), &mut f);
    let u = cos(&f, &sc.target);
    Ok((f, u))
}

pub fn baseline_utility(sc: &PlantedScenario) -> f64 {
    propagate(sc, &BTreeMap::new()).map(|(_, u)| u).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scenario(condition: Condition, seed: u64) -> PlantedScenario {
        generate_scenario(6, 32, condition, 3, seed, &RecipeParams::default()).unwrap()
    }

    #[test]
    fn deficiency_examples() {
        let f = PlantedFactors { agreement: vec![0.7], influence: vec![1.5], coverage: vec![0.2] };
        let d = analytical_deficiency(&f, (0.5, 1.0, 0.5), PsiMode::Hard, 1.0).unwrap();
        assert!((d[0] - 0.2 * 0.5 * 0.3).abs() < 1e-12);
        let covered = PlantedFactors { agreement: vec![5.0], influence: vec![5.0], coverage: vec![0.6] };
        assert_eq!(analytical_deficiency(&covered, (0.0, 0.0, 0.5), PsiMode::Hard, 1.0).unwrap()[0], 0.0);
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(scenario(Condition::Clean, 7), scenario(Condition::Clean, 7));
        assert_ne!(scenario(Condition::Clean, 7).bundle, scenario(Condition::Clean, 8).bundle);
    }

    #[test]
    fn degradation_leaves_audio_and_chain_alone() {
        let c = scenario(Condition::Clean, 7);
        let o = scenario(Condition::OcclusionLike, 7);
        assert_eq!(c.bundle.audio, o.bundle.audio);
        assert_eq!(c.chain, o.chain);
        assert_eq!(c.target, o.target);
        assert_ne!(c.bundle.visual, o.bundle.visual);
    }

    #[test]
    fn occlusion_zeroes_a_contiguous_slice() {
        let o = scenario(Condition::OcclusionLike, 9);
        for v in &o.bundle.visual {
            let zeros: Vec<usize> = v.iter().enumerate().filter(|(_, x)| **x == 0.0).map(|(i, _)| i).collect();
            assert_eq!(zeros.len(), 13);
            assert_eq!(zeros.last().unwrap() - zeros[0], 12);
        }
    }

    #[test]
    fn moving_average_replicates_edges() {
        assert_eq!(moving_average3(&[3.0, 0.0, 0.0, 6.0]), vec![2.0, 1.0, 2.0, 4.0]);
    }

    #[test]
    fn target_is_unit_and_influence_peaks_at_planted() {
        let sc = scenario(Condition::Clean, 7);
        assert!((numerics::norm(&sc.target) - 1.0).abs() < 1e-12);
        assert_eq!(numerics::argmax(&sc.factors.influence), sc.planted());
        assert_eq!(numerics::argmax(&sc.factors.agreement), sc.planted());
    }

    #[test]
    fn identity_override_reproduces_baseline() {
        let sc = scenario(Condition::Clean, 7);
        let states = chain_stage_states(&sc.bundle);
        let all: BTreeMap<usize, Vec<f64>> = states.into_iter().enumerate().collect();
        assert_eq!(propagate(&sc, &all).unwrap(), propagate(&sc, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn override_errors() {
        let sc = scenario(Condition::Clean, 7);
        let bad: BTreeMap<usize, Vec<f64>> = [(6, vec![0.0; 32])].into();
        assert!(propagate(&sc, &bad).is_err());
        let short: BTreeMap<usize, Vec<f64>> = [(1, vec![0.0; 3])].into();
        assert!(propagate(&sc, &short).is_err());
        assert!(generate_scenario(6, 32, Condition::Clean, 6, 1, &RecipeParams::default()).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let sc = scenario(Condition::NoiseBlurLike, 21);
        let back = PlantedScenario::from_json(&sc.to_json().unwrap()).unwrap();
        assert_eq!(back, sc);
        assert_eq!(back.to_json().unwrap(), sc.to_json().unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn utility_is_bounded(seed in 0u64..10_000, l in 0usize..6, s in -5.0f64..5.0) {
            let sc = scenario(Condition::Clean, seed);
            let ov: BTreeMap<usize, Vec<f64>> = [(l, vec![s; 32])].into();
            let (_, u) = propagate(&sc, &ov).unwrap();
            prop_assert!((-1.0..=1.0).contains(&u));
        }
    }
}
