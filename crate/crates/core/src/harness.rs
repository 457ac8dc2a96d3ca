//! Intervention experiments on planted scenarios.
//!
//! Stage indices are zero-based here.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::assessment::{self, one_hot, Assessment, AssessmentConfig};
use crate::completion::{self, CompletionInit, CompletionParams, CorrectionMode, CorrectionResult};
use crate::encoder_sim::{self, chain_stage_states, Condition, PlantedScenario, RecipeParams};
use crate::error::{contract, Error, Result};
use crate::numerics::{self, matched_energy_perturb, SeededRng};

const TARGET_STREAM: u64 = 30;
const PERTURB_STREAM: u64 = 31;
const CRITERION_STREAM: u64 = 32;
const PROP1_STREAM: u64 = 33;

/// Everything an experiment needs besides the seeds it iterates over.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub stages: usize,
    pub dim: usize,
    /// One-based.
    pub planted: usize,
    pub recipe: RecipeParams,
    pub assessment: AssessmentConfig,
    pub completion: CompletionInit,
    pub completion_seed: u64,
    pub eps: f64,
    pub eps0: f64,
    /// One-based depth used by the fixed-depth criterion.
    pub fixed_depth: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            stages: 6,
            dim: 32,
            planted: 4,
            recipe: RecipeParams::default(),
            assessment: AssessmentConfig::default(),
            completion: CompletionInit::SupportPreserving,
            completion_seed: 0,
            eps: 0.1,
            eps0: 1e-6,
            fixed_depth: 3,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.stages < 2 {
            return Err(Error::Config("stages must be >= 2".into()));
        }
        if self.dim < 8 || self.dim % 2 != 0 {
            return Err(Error::Config("dim must be even and >= 8".into()));
        }
        if self.planted == 0 || self.planted > self.stages {
            return Err(Error::Config(format!("planted must lie in 1..={}", self.stages)));
        }
        if self.fixed_depth == 0 || self.fixed_depth > self.stages {
            return Err(Error::Config(format!("fixed_depth must lie in 1..={}", self.stages)));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) || !(self.eps0 > 0.0) {
            return Err(Error::Config("eps must be >= 0 and eps0 > 0".into()));
        }
        self.recipe.validate()?;
        self.assessment.validate()
    }

    pub fn scenario(&self, condition: Condition, seed: u64) -> Result<PlantedScenario> {
        encoder_sim::generate_scenario(self.stages, self.dim, condition, self.planted - 1, seed, &self.recipe)
    }

    pub fn completion_params(&self) -> CompletionParams {
        CompletionParams::build(self.completion, self.dim, self.completion_seed)
    }
}

/// A scenario with its assessment and completion parameters.
pub struct Trial {
    pub scenario: PlantedScenario,
    pub assessment: Assessment,
    pub params: CompletionParams,
    /// Chain stage states, the objects that interventions replace.
    pub states: Vec<Vec<f64>>,
    pub baseline: f64,
}

impl Trial {
    pub fn new(scenario: PlantedScenario, cfg: &AssessmentConfig, params: CompletionParams) -> Result<Self> {
        let assessment = assessment::assess(&scenario.bundle, cfg)?;
        let states = chain_stage_states(&scenario.bundle);
        let (_, baseline) = encoder_sim::propagate(&scenario, &BTreeMap::new())?;
        Ok(Self { scenario, assessment, params, states, baseline })
    }

    pub fn from_config(cfg: &ExperimentConfig, condition: Condition, seed: u64) -> Result<Self> {
        Self::new(cfg.scenario(condition, seed)?, &cfg.assessment, cfg.completion_params())
    }

    pub fn selected(&self) -> usize {
        self.assessment.report.selected()
    }

    fn check_stage(&self, l: usize) -> Result<()> {
        let n = self.states.len();
        if l >= n {
            return contract(format!("stage {} outside 1..={n}", l + 1));
        }
        Ok(())
    }

    fn utility_with(&self, l: usize, z: Vec<f64>) -> Result<f64> {
        Ok(encoder_sim::propagate(&self.scenario, &BTreeMap::from([(l, z)]))?.1)
    }

    /// Completion applied at stage `l` to state `z`.
    pub fn complete_at(&self, l: usize, z: &[f64], mode: CorrectionMode) -> Result<CorrectionResult> {
        let w = one_hot(self.states.len(), l);
        completion::complete_state(z, &w, &self.scenario.bundle, &self.params, mode)
    }

    pub fn perturb(&self, l: usize, eps: f64, eps0: f64, rng: &mut SeededRng) -> Result<Vec<f64>> {
        self.check_stage(l)?;
        matched_energy_perturb(&self.states[l], eps, eps0, rng)
    }

    /// One perturbation shared by the drop and the recovery.
    pub fn intervene(&self, l: usize, eps: f64, eps0: f64, rng: &mut SeededRng) -> Result<InterventionTrial> {
        let perturbed = self.perturb(l, eps, eps0, rng)?;
        let u_perturbed = self.utility_with(l, perturbed.clone())?;
        let corrected = self.complete_at(l, &perturbed, CorrectionMode::Gated)?;
        let u_completed = self.utility_with(l, corrected.z_tilde)?;
        Ok(InterventionTrial {
            baseline: self.baseline,
            perturbed: u_perturbed,
            completed: u_completed,
            drop: self.baseline - u_perturbed,
            recovery: u_completed - u_perturbed,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterventionTrial {
    pub baseline: f64,
    pub perturbed: f64,
    pub completed: f64,
    pub drop: f64,
    pub recovery: f64,
}

pub fn measure_drop(trial: &Trial, l: usize, eps: f64, eps0: f64, rng: &mut SeededRng) -> Result<f64> {
    if eps < 0.0 {
        return contract("eps must be non-negative");
    }
    let perturbed = trial.perturb(l, eps, eps0, rng)?;
    Ok(trial.baseline - trial.utility_with(l, perturbed)?)
}

pub fn measure_recovery(trial: &Trial, l: usize, eps: f64, eps0: f64, rng: &mut SeededRng) -> Result<f64> {
    if eps < 0.0 {
        return contract("eps must be non-negative");
    }
    Ok(trial.intervene(l, eps, eps0, rng)?.recovery)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Selected,
    Adjacent,
    Random,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::Selected, Target::Adjacent, Target::Random];

    pub fn label(self) -> &'static str {
        match self {
            Target::Selected => "selected",
            Target::Adjacent => "adjacent",
            Target::Random => "random",
        }
    }
}

/// The next stage when it exists, otherwise the previous one.
pub fn adjacent_stage(selected: usize, n: usize) -> usize {
    if selected + 1 < n {
        selected + 1
    } else {
        selected - 1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(x: &[f64]) -> Self {
        Self { mean: numerics::mean(x), std: numerics::std_dev(x) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterventionOutcome {
    pub target: Target,
    pub trials: usize,
    pub drop: Summary,
    pub recovery: Summary,
    pub drops: Vec<f64>,
    pub recoveries: Vec<f64>,
    /// One-based stage hit in each trial.
    pub stages: Vec<usize>,
}

/// Selected, adjacent and random targets, one scenario per seed and one
/// perturbation draw per scenario shared by the three targets.
pub fn counterfactual(cfg: &ExperimentConfig, condition: Condition, seeds: &[u64]) -> Result<Vec<InterventionOutcome>> {
    cfg.validate()?;
    if seeds.is_empty() {
        return contract("counterfactual needs at least one seed");
    }
    let mut acc: BTreeMap<Target, (Vec<f64>, Vec<f64>, Vec<usize>)> = BTreeMap::new();
    for &seed in seeds {
        let trial = Trial::from_config(cfg, condition, seed)?;
        let n = cfg.stages;
        let sel = trial.selected();
        let mut trng = SeededRng::with_stream(seed, TARGET_STREAM);
        let others: Vec<usize> = (0..n).filter(|j| *j != sel).collect();
        let random = others[trng.index(others.len())];
        for (target, l) in [(Target::Selected, sel), (Target::Adjacent, adjacent_stage(sel, n)), (Target::Random, random)] {
            let mut prng = SeededRng::with_stream(seed, PERTURB_STREAM);
            let t = trial.intervene(l, cfg.eps, cfg.eps0, &mut prng)?;
            let e = acc.entry(target).or_default();
            e.0.push(t.drop);
            e.1.push(t.recovery);
            e.2.push(l + 1);
        }
    }
    Ok(acc
        .into_iter()
        .map(|(target, (drops, recoveries, stages))| InterventionOutcome {
            target,
            trials: drops.len(),
            drop: Summary::of(&drops),
            recovery: Summary::of(&recoveries),
            drops,
            recoveries,
            stages,
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "k", rename_all = "snake_case")]
pub enum CriterionKind {
    FullReadiness,
    AgreementOnly,
    PropagationOnly,
    SupportDeficitOnly,
    /// Stage whose support attention is most concentrated (one minus the
    /// normalized attention entropy).
    AttentionResponse,
    /// One-based depth.
    FixedDepth(usize),
    Random,
}

impl CriterionKind {
    pub fn all(fixed_depth: usize) -> Vec<CriterionKind> {
        vec![
            CriterionKind::FullReadiness,
            CriterionKind::AgreementOnly,
            CriterionKind::PropagationOnly,
            CriterionKind::SupportDeficitOnly,
            CriterionKind::AttentionResponse,
            CriterionKind::FixedDepth(fixed_depth),
            CriterionKind::Random,
        ]
    }

    pub fn label(self) -> String {
        match self {
            CriterionKind::FullReadiness => "full_readiness".into(),
            CriterionKind::AgreementOnly => "agreement_only".into(),
            CriterionKind::PropagationOnly => "propagation_only".into(),
            CriterionKind::SupportDeficitOnly => "support_deficit_only".into(),
            CriterionKind::AttentionResponse => "attention_response".into(),
            CriterionKind::FixedDepth(k) => format!("fixed_depth_{k}"),
            CriterionKind::Random => "random".into(),
        }
    }

    /// Zero-based stage chosen for `trial`; `rng` is used by the random criterion only.
    pub fn select(self, trial: &Trial, rng: &mut SeededRng) -> Result<usize> {
        let r = &trial.assessment.report;
        let n = r.cues.len();
        Ok(match self {
            CriterionKind::FullReadiness => r.selected(),
            CriterionKind::AgreementOnly => numerics::argmax(&r.cues.agreement),
            CriterionKind::PropagationOnly => numerics::argmax(&r.cues.anchoring),
            CriterionKind::SupportDeficitOnly => {
                numerics::argmax(&r.cues.coverage.iter().map(|c| -c).collect::<Vec<_>>())
            }
            CriterionKind::AttentionResponse => {
                let a = &trial.assessment;
                let scores = a
                    .states
                    .iter()
                    .map(|z| a.memory.attention_concentration(z, r.config.tau_h))
                    .collect::<Result<Vec<_>>>()?;
                numerics::argmax(&scores)
            }
            CriterionKind::FixedDepth(k) => {
                if k == 0 || k > n {
                    return contract(format!("fixed depth {k} outside 1..={n}"));
                }
                k - 1
            }
            CriterionKind::Random => rng.index(n),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionRow {
    pub criterion: CriterionKind,
    pub label: String,
    pub scenarios: usize,
    pub utility: Summary,
    /// Fraction of scenarios in which the chosen stage was the planted one.
    pub planted_hit_rate: f64,
    pub utilities: Vec<f64>,
}

/// Perturb at the chosen stage, complete there and record the final utility.
/// Perturbation draws are shared across criteria within a scenario.
pub fn compare_criteria(
    cfg: &ExperimentConfig,
    scenarios: &[(Condition, u64)],
    criteria: &[CriterionKind],
) -> Result<Vec<CriterionRow>> {
    cfg.validate()?;
    if criteria.is_empty() {
        return contract("criteria list is empty");
    }
    if scenarios.is_empty() {
        return contract("criteria comparison needs at least one scenario");
    }
    let mut utilities = vec![Vec::with_capacity(scenarios.len()); criteria.len()];
    let mut hits = vec![0usize; criteria.len()];
    for &(condition, seed) in scenarios {
        let trial = Trial::from_config(cfg, condition, seed)?;
        for (i, c) in criteria.iter().enumerate() {
            let mut crng = SeededRng::with_stream(seed, CRITERION_STREAM);
            let l = c.select(&trial, &mut crng)?;
            let mut prng = SeededRng::with_stream(seed, PERTURB_STREAM);
            utilities[i].push(trial.intervene(l, cfg.eps, cfg.eps0, &mut prng)?.completed);
            hits[i] += usize::from(l == trial.scenario.planted());
        }
    }
    Ok(criteria
        .iter()
        .zip(utilities)
        .zip(hits)
        .map(|((c, u), h)| CriterionRow {
            criterion: *c,
            label: c.label(),
            scenarios: u.len(),
            utility: Summary::of(&u),
            planted_hit_rate: h as f64 / scenarios.len() as f64,
            utilities: u,
        })
        .collect())
}

/// Conditions assigned round-robin to consecutive seeds.
pub fn mixed_scenarios(seeds: &[u64]) -> Vec<(Condition, u64)> {
    seeds.iter().enumerate().map(|(i, s)| (Condition::ALL[i % 3], *s)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEntry {
    pub seed: u64,
    pub a_hat: Vec<f64>,
    pub p_hat: Vec<f64>,
    pub c_hat: Vec<f64>,
    pub d_hat: Vec<f64>,
    /// One-based.
    pub selected: usize,
    pub c_before: f64,
    pub c_after: f64,
    pub d_before: f64,
    pub d_after: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub condition: Condition,
    pub entries: Vec<TrajectoryEntry>,
    /// Count of selections per stage.
    pub histogram: Vec<usize>,
}

impl TrajectoryRecord {
    pub fn num_stages(&self) -> usize {
        self.histogram.len()
    }

    fn column_mean(&self, pick: impl Fn(&TrajectoryEntry) -> &Vec<f64>) -> Vec<f64> {
        let n = self.num_stages();
        let m = self.entries.len() as f64;
        (0..n).map(|l| self.entries.iter().map(|e| pick(e)[l]).sum::<f64>() / m).collect()
    }

    /// Stage-wise mean maps of A, P, C and D.
    pub fn maps(&self) -> [Vec<f64>; 4] {
        [
            self.column_mean(|e| &e.a_hat),
            self.column_mean(|e| &e.p_hat),
            self.column_mean(|e| &e.c_hat),
            self.column_mean(|e| &e.d_hat),
        ]
    }

    pub fn mean_coverage(&self) -> f64 {
        numerics::mean(&self.column_mean(|e| &e.c_hat))
    }

    /// Shannon entropy (nats) of the selected-stage histogram.
    pub fn entropy(&self) -> f64 {
        let total: usize = self.histogram.iter().sum();
        self.histogram
            .iter()
            .filter(|c| **c > 0)
            .map(|c| {
                let p = *c as f64 / total as f64;
                -p * p.ln()
            })
            .fold(0.0, |acc, h| acc + h)
    }

    pub fn before_after(&self) -> (f64, f64, f64, f64) {
        let m = |f: fn(&TrajectoryEntry) -> f64| numerics::mean(&self.entries.iter().map(f).collect::<Vec<_>>());
        (m(|e| e.c_before), m(|e| e.c_after), m(|e| e.d_before), m(|e| e.d_after))
    }
}

/// Assess every seed under `condition`, then correct the selected stage with
/// the gated completion and re-evaluate its cues under the original statistics.
pub fn record_trajectory(cfg: &ExperimentConfig, condition: Condition, seeds: &[u64]) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    if seeds.is_empty() {
        return contract("trajectory needs at least one seed");
    }
    let mut histogram = vec![0; cfg.stages];
    let mut entries = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let trial = Trial::from_config(cfg, condition, seed)?;
        let a = &trial.assessment;
        let r = &a.report;
        let l = r.selected();
        histogram[l] += 1;
        let z = &a.states[l];
        let corrected = trial.complete_at(l, z, CorrectionMode::Gated)?;
        let (c_after, d_after) = r.deficiency_at(l, &corrected.z_tilde, &a.ff, &a.memory, &a.projections)?;
        entries.push(TrajectoryEntry {
            seed,
            a_hat: r.cues.agreement.clone(),
            p_hat: r.cues.anchoring.clone(),
            c_hat: r.cues.coverage.clone(),
            d_hat: r.d_hat.clone(),
            selected: l + 1,
            c_before: r.cues.coverage[l],
            c_after,
            d_before: r.d_hat[l],
            d_after,
        });
    }
    Ok(TrajectoryRecord { condition, entries, histogram })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    Uniform,
    /// `+eps` on the runner-up and `-eps` on the leader.
    Adversarial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop1Row {
    pub eps: f64,
    pub noise: NoiseModel,
    pub trials: usize,
    pub wide_trials: usize,
    pub wide_preserved: usize,
    pub narrow_trials: usize,
    pub narrow_preserved: usize,
}

impl Prop1Row {
    /// Pass rate on the `m > 2 eps` stratum; 1 when the stratum is empty.
    pub fn wide_pass_rate(&self) -> f64 {
        rate(self.wide_preserved, self.wide_trials)
    }

    pub fn narrow_pass_rate(&self) -> f64 {
        rate(self.narrow_preserved, self.narrow_trials)
    }
}

fn rate(k: usize, n: usize) -> f64 {
    if n == 0 {
        1.0
    } else {
        k as f64 / n as f64
    }
}

/// Does bounded noise preserve the argmax of `d`?
pub fn argmax_preserved(d: &[f64], noise: &[f64]) -> bool {
    let noisy: Vec<f64> = d.iter().zip(noise).map(|(x, e)| x + e).collect();
    numerics::argmax(&noisy) == numerics::argmax(d)
}

/// Largest minus second largest entry.
pub fn margin(d: &[f64]) -> f64 {
    let mut s = d.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    if s.len() < 2 {
        f64::INFINITY
    } else {
        s[0] - s[1]
    }
}

/// Random deficiency vectors with a unique maximum, perturbed by noise bounded by `eps`.
pub fn verify_prop1(trials: usize, eps: f64, stages: usize, noise: NoiseModel, seed: u64) -> Result<Prop1Row> {
    if !(eps >= 0.0) || stages < 2 {
        return contract("prop1 needs eps >= 0 and at least two stages");
    }
    let mut rng = SeededRng::with_stream(seed, PROP1_STREAM);
    let mut row = Prop1Row { eps, noise, trials, wide_trials: 0, wide_preserved: 0, narrow_trials: 0, narrow_preserved: 0 };
    let mut done = 0;
    while done < trials {
        let d: Vec<f64> = (0..stages).map(|_| rng.uniform()).collect();
        let m = margin(&d);
        if !(m > 0.0) {
            continue;
        }
        done += 1;
        let e: Vec<f64> = match noise {
            NoiseModel::Uniform => (0..stages).map(|_| rng.uniform_range(-eps, eps)).collect(),
            NoiseModel::Adversarial => {
                let lead = numerics::argmax(&d);
                let mut rest = d.clone();
                rest[lead] = f64::NEG_INFINITY;
                let runner = numerics::argmax(&rest);
                (0..stages).map(|i| if i == lead { -eps } else if i == runner { eps } else { 0.0 }).collect()
            }
        };
        let ok = argmax_preserved(&d, &e);
        if m > 2.0 * eps {
            row.wide_trials += 1;
            row.wide_preserved += usize::from(ok);
        } else {
            row.narrow_trials += 1;
            row.narrow_preserved += usize::from(ok);
        }
    }
    Ok(row)
}

pub const PROP2_LAMBDAS: [f64; 7] = [1.0 / 64.0, 1.0 / 32.0, 1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0, 1.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop2Record {
    pub condition: Condition,
    pub seed: u64,
    /// One-based.
    pub stage: usize,
    pub derivative: f64,
    pub best_lambda: f64,
    pub c_before: f64,
    pub c_after: f64,
    pub d_before: f64,
    pub d_after: f64,
    /// `psi(A) psi(P)` before and after, statistics fixed.
    pub ap_before: f64,
    pub ap_after: f64,
}

impl Prop2Record {
    pub fn coverage_improved(&self) -> bool {
        self.c_after > self.c_before
    }

    pub fn deficiency_decreased(&self) -> bool {
        self.d_after < self.d_before
    }

    pub fn ap_increased(&self) -> bool {
        self.ap_after > self.ap_before
    }
}

pub const PROP2_STEP: f64 = 1e-4;

/// Scalar-mode correction along the refined support at the selected stage.
pub fn verify_prop2(cfg: &ExperimentConfig, scenarios: &[(Condition, u64)]) -> Result<Vec<Prop2Record>> {
    cfg.validate()?;
    scenarios
        .iter()
        .map(|&(condition, seed)| {
            let trial = Trial::from_config(cfg, condition, seed)?;
            prop2_record(&trial, condition, seed)
        })
        .collect()
}

pub fn prop2_record(trial: &Trial, condition: Condition, seed: u64) -> Result<Prop2Record> {
    let a = &trial.assessment;
    let r = &a.report;
    let cfg = &r.config;
    let l = r.selected();
    let z = &a.states[l];
    let q = trial.complete_at(l, z, CorrectionMode::Scalar(0.0))?.q_bn;
    let coverage = |lambda: f64| {
        let mut x = z.clone();
        numerics::axpy(lambda, &q, &mut x);
        a.memory.coverage(&x, &a.projections, cfg.tau_h)
    };
    let derivative = (coverage(PROP2_STEP)? - coverage(-PROP2_STEP)?) / (2.0 * PROP2_STEP);
    let c_before = r.cues.coverage[l];
    let mut best = (0.0, f64::NEG_INFINITY);
    for lambda in PROP2_LAMBDAS {
        let c = coverage(lambda)?;
        if c > best.1 {
            best = (lambda, c);
        }
    }
    let zt = trial.complete_at(l, z, CorrectionMode::Scalar(best.0))?.z_tilde;
    let (c_after, d_after) = r.deficiency_at(l, &zt, &a.ff, &a.memory, &a.projections)?;
    let ap = |zz: &[f64]| -> Result<f64> {
        let p = numerics::cos(&a.projections.pp.mul_vec(zz), &a.projections.pp.mul_vec(&a.ff));
        let m = cfg.normalization;
        let xa = r.stats.agreement.apply(r.cues.agreement[l], m) - cfg.tau_a;
        let xp = r.stats.anchoring.apply(p, m) - cfg.tau_p;
        Ok(numerics::smooth_positive_part(xa, cfg.beta_s, cfg.psi_mode)?
            * numerics::smooth_positive_part(xp, cfg.beta_s, cfg.psi_mode)?)
    };
    Ok(Prop2Record {
        condition,
        seed,
        stage: l + 1,
        derivative,
        best_lambda: best.0,
        c_before,
        c_after,
        d_before: r.d_hat[l],
        d_after,
        ap_before: ap(z)?,
        ap_after: ap(&zt)?,
    })
}
