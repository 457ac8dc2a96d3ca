//! Readiness assessment: stage states, cues, deficiency surrogate and routing.
//!
//! Stage indices are zero-based here.

use serde::{Deserialize, Serialize};

use crate::encoder_sim::StageBundle;
use crate::error::{contract, Error, Result};
use crate::numerics::{self, cos, Matrix, PsiMode, SeededRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionInit {
    IdentityLike,
    SeededOrthogonal,
}

/// Untrained projections. `pz` and `pf` map `2d -> d`; the rest are `d x d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSet {
    pub init: ProjectionInit,
    pub pz: Matrix,
    pub pf: Matrix,
    pub pa: Matrix,
    pub pv: Matrix,
    pub pp: Matrix,
    pub pc: Matrix,
}

impl ProjectionSet {
    /// `pz = pf = [I I] / 2`, all others identity.
    pub fn identity_like(d: usize) -> Self {
        let avg = Matrix::stacked_identity(d, 2, 0.5);
        let id = Matrix::identity(d);
        Self {
            init: ProjectionInit::IdentityLike,
            pz: avg.clone(),
            pf: avg,
            pa: id.clone(),
            pv: id.clone(),
            pp: id.clone(),
            pc: id,
        }
    }

    /// Every projection has orthonormal rows, drawn from one seeded stream.
    pub fn seeded_orthogonal(d: usize, seed: u64) -> Self {
        let mut rng = SeededRng::with_stream(seed, 10);
        Self {
            init: ProjectionInit::SeededOrthogonal,
            pz: Matrix::seeded_orthogonal(d, 2 * d, &mut rng),
            pf: Matrix::seeded_orthogonal(d, 2 * d, &mut rng),
            pa: Matrix::seeded_orthogonal(d, d, &mut rng),
            pv: Matrix::seeded_orthogonal(d, d, &mut rng),
            pp: Matrix::seeded_orthogonal(d, d, &mut rng),
            pc: Matrix::seeded_orthogonal(d, d, &mut rng),
        }
    }

    pub fn build(init: ProjectionInit, d: usize, seed: u64) -> Self {
        match init {
            ProjectionInit::IdentityLike => Self::identity_like(d),
            ProjectionInit::SeededOrthogonal => Self::seeded_orthogonal(d, seed),
        }
    }

    pub fn feature_dim(&self) -> usize {
        self.pa.cols()
    }

    pub fn check(&self, d: usize) -> Result<()> {
        let square = [&self.pa, &self.pv, &self.pp, &self.pc];
        let wide = [&self.pz, &self.pf];
        if square.iter().any(|m| m.rows() != d || m.cols() != d)
            || wide.iter().any(|m| m.rows() != d || m.cols() != 2 * d)
        {
            return contract(format!("projection shapes do not match feature_dim {d}"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    PerScenarioZscore,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutingMode {
    Soft,
    Hard,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AssessmentConfig {
    pub tau_a: f64,
    pub tau_p: f64,
    pub tau_c: f64,
    pub beta_s: f64,
    pub tau_s: f64,
    pub psi_mode: PsiMode,
    pub normalization: Normalization,
    /// Temperature of the support aggregation behind the coverage cue.
    pub tau_h: f64,
    pub routing: RoutingMode,
    pub projections: ProjectionInit,
    pub projection_seed: u64,
}

impl Default for AssessmentConfig {
    fn default() -> Self {
        Self {
            tau_a: 0.0,
            tau_p: 0.0,
            tau_c: 0.0,
            beta_s: 10.0,
            tau_s: 0.5,
            psi_mode: PsiMode::Smooth,
            normalization: Normalization::PerScenarioZscore,
            tau_h: 0.5,
            routing: RoutingMode::Soft,
            projections: ProjectionInit::IdentityLike,
            projection_seed: 0,
        }
    }
}

impl AssessmentConfig {
    pub fn validate(&self) -> Result<()> {
        let vals = [self.tau_a, self.tau_p, self.tau_c, self.tau_s, self.tau_h];
        if !numerics::all_finite(&vals) {
            return Err(Error::Config("thresholds and temperatures must be finite".into()));
        }
        if self.tau_s <= 0.0 || self.tau_h <= 0.0 {
            return Err(Error::Config("tau_s and tau_h must be positive".into()));
        }
        if self.psi_mode == PsiMode::Smooth && !(self.beta_s.is_finite() && self.beta_s > 0.0) {
            return Err(Error::Config("beta_s must be finite and positive in smooth mode".into()));
        }
        Ok(())
    }

    pub fn projection_set(&self, d: usize) -> ProjectionSet {
        ProjectionSet::build(self.projections, d, self.projection_seed)
    }
}

/// `z_l = pz [a_l; v_l]` per stage and `f_f = pf [a_N; v_N]`.
pub fn fuse_states(bundle: &StageBundle, proj: &ProjectionSet) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    bundle.validate()?;
    proj.check(bundle.feature_dim())?;
    let states = bundle
        .audio
        .iter()
        .zip(&bundle.visual)
        .map(|(a, v)| proj.pz.mul_vec(&numerics::concat(a, v)))
        .collect();
    let n = bundle.num_stages();
    let ff = proj.pf.mul_vec(&numerics::concat(&bundle.audio[n - 1], &bundle.visual[n - 1]));
    Ok((states, ff))
}

/// Tempered cosine attention weights of `query` over `keys`.
pub fn cosine_attention(query: &[f64], keys: &[Vec<f64>], tau: f64) -> Result<Vec<f64>> {
    let scores: Vec<f64> = keys.iter().map(|k| cos(query, k)).collect();
    numerics::softmax_temperature(&scores, tau)
}

/// Keys/values of the support aggregation: `pc f` for every stage feature.
#[derive(Clone, Debug)]
pub struct SupportMemory {
    pub audio: Vec<Vec<f64>>,
    pub visual: Vec<Vec<f64>>,
}

impl SupportMemory {
    pub fn new(bundle: &StageBundle, proj: &ProjectionSet) -> Self {
        Self {
            audio: bundle.audio.iter().map(|x| proj.pc.mul_vec(x)).collect(),
            visual: bundle.visual.iter().map(|x| proj.pc.mul_vec(x)).collect(),
        }
    }

    /// Aggregated support `q` at state `z` plus the per-modality attention weights.
    pub fn aggregate(&self, z: &[f64], tau_h: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let wa = cosine_attention(z, &self.audio, tau_h)?;
        let wv = cosine_attention(z, &self.visual, tau_h)?;
        let mut q = vec![0.0; z.len()];
        for (w, x) in wa.iter().zip(&self.audio).chain(wv.iter().zip(&self.visual)) {
            numerics::axpy(0.5 * w, x, &mut q);
        }
        Ok((q, wa, wv))
    }

    /// Coverage cue `cos(pc z, pc q(z))` at an arbitrary state.
    pub fn coverage(&self, z: &[f64], proj: &ProjectionSet, tau_h: f64) -> Result<f64> {
        let (q, _, _) = self.aggregate(z, tau_h)?;
        Ok(cos(&proj.pc.mul_vec(z), &proj.pc.mul_vec(&q)))
    }

    /// Mean over modalities of `1 - H(alpha) / ln N`.
    pub fn attention_concentration(&self, z: &[f64], tau_h: f64) -> Result<f64> {
        let (_, wa, wv) = self.aggregate(z, tau_h)?;
        let n = wa.len();
        if n < 2 {
            return Ok(0.0);
        }
        let h = |w: &[f64]| -w.iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum::<f64>();
        let ln_n = (n as f64).ln();
        Ok(1.0 - 0.5 * (h(&wa) + h(&wv)) / ln_n)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cues {
    pub agreement: Vec<f64>,
    pub anchoring: Vec<f64>,
    pub coverage: Vec<f64>,
}

impl Cues {
    pub fn len(&self) -> usize {
        self.agreement.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agreement.is_empty()
    }

    fn check(&self) -> Result<()> {
        let n = self.agreement.len();
        if n == 0 || self.anchoring.len() != n || self.coverage.len() != n {
            return contract("cue vectors must be non-empty and equally long");
        }
        Ok(())
    }
}

pub fn compute_cues(
    bundle: &StageBundle,
    states: &[Vec<f64>],
    ff: &[f64],
    proj: &ProjectionSet,
    tau_h: f64,
) -> Result<Cues> {
    let n = bundle.num_stages();
    if states.len() != n {
        return contract(format!("{} states for {n} stages", states.len()));
    }
    let memory = SupportMemory::new(bundle, proj);
    let pff = proj.pp.mul_vec(ff);
    let mut cues = Cues { agreement: vec![], anchoring: vec![], coverage: vec![] };
    for l in 0..n {
        let z = &states[l];
        cues.agreement.push(cos(&proj.pa.mul_vec(&bundle.audio[l]), &proj.pv.mul_vec(&bundle.visual[l])));
        cues.anchoring.push(cos(&proj.pp.mul_vec(z), &pff));
        cues.coverage.push(memory.coverage(z, proj, tau_h)?);
    }
    Ok(cues)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CueStats {
    pub mean: f64,
    pub std: f64,
    /// True when the cue was left unnormalized because its spread was zero.
    pub fallback: bool,
}

impl CueStats {
    fn of(x: &[f64], normalization: Normalization) -> Self {
        let (mean, std) = (numerics::mean(x), numerics::std_dev(x));
        let fallback = normalization == Normalization::PerScenarioZscore && std < 1e-12;
        Self { mean, std, fallback }
    }

    pub fn apply(&self, x: f64, normalization: Normalization) -> f64 {
        if normalization == Normalization::None || self.fallback {
            x
        } else {
            (x - self.mean) / self.std
        }
    }

    /// Derivative of `apply` with respect to its input, statistics fixed.
    pub fn slope(&self, normalization: Normalization) -> f64 {
        if normalization == Normalization::None || self.fallback {
            1.0
        } else {
            1.0 / self.std
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationStats {
    pub agreement: CueStats,
    pub anchoring: CueStats,
    pub coverage: CueStats,
}

impl NormalizationStats {
    pub fn of(cues: &Cues, normalization: Normalization) -> Self {
        Self {
            agreement: CueStats::of(&cues.agreement, normalization),
            anchoring: CueStats::of(&cues.anchoring, normalization),
            coverage: CueStats::of(&cues.coverage, normalization),
        }
    }
}

fn psi(x: f64, cfg: &AssessmentConfig) -> Result<f64> {
    numerics::smooth_positive_part(x, cfg.beta_s, cfg.psi_mode)
}

/// Deficiency of one stage from raw cues under fixed statistics.
pub fn stage_deficiency(
    a: f64,
    p: f64,
    c: f64,
    stats: &NormalizationStats,
    cfg: &AssessmentConfig,
) -> Result<f64> {
    let m = cfg.normalization;
    let a = stats.agreement.apply(a, m);
    let p = stats.anchoring.apply(p, m);
    let c = stats.coverage.apply(c, m);
    Ok(psi(a - cfg.tau_a, cfg)? * psi(p - cfg.tau_p, cfg)? * psi(cfg.tau_c - c, cfg)?)
}

pub fn readiness_surrogate(cues: &Cues, cfg: &AssessmentConfig) -> Result<(Vec<f64>, NormalizationStats)> {
    cues.check()?;
    cfg.validate()?;
    let stats = NormalizationStats::of(cues, cfg.normalization);
    let d = (0..cues.len())
        .map(|l| stage_deficiency(cues.agreement[l], cues.anchoring[l], cues.coverage[l], &stats, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok((d, stats))
}

/// Partial derivatives of each stage deficiency with respect to its own raw
/// cues `(A, P, C)`, statistics held fixed. Smooth mode only.
pub fn surrogate_gradient(cues: &Cues, stats: &NormalizationStats, cfg: &AssessmentConfig) -> Result<Vec<[f64; 3]>> {
    cues.check()?;
    if cfg.psi_mode != PsiMode::Smooth {
        return contract("surrogate gradient requires smooth psi");
    }
    let m = cfg.normalization;
    let dpsi = |x: f64| numerics::smooth_positive_part_derivative(x, cfg.beta_s, cfg.psi_mode);
    (0..cues.len())
        .map(|l| {
            let xa = stats.agreement.apply(cues.agreement[l], m) - cfg.tau_a;
            let xp = stats.anchoring.apply(cues.anchoring[l], m) - cfg.tau_p;
            let xc = cfg.tau_c - stats.coverage.apply(cues.coverage[l], m);
            let (pa, pp, pc) = (psi(xa, cfg)?, psi(xp, cfg)?, psi(xc, cfg)?);
            Ok([
                dpsi(xa) * pp * pc * stats.agreement.slope(m),
                pa * dpsi(xp) * pc * stats.anchoring.slope(m),
                -pa * pp * dpsi(xc) * stats.coverage.slope(m),
            ])
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Routing {
    pub weights: Vec<f64>,
    pub selected: usize,
    pub mode: RoutingMode,
    /// Soft weights before any hardening.
    pub soft_weights: Vec<f64>,
    pub tie: bool,
}

pub fn route(d_hat: &[f64], tau_s: f64, mode: RoutingMode) -> Result<Routing> {
    if !(tau_s > 0.0) {
        return contract("tau_s must be positive");
    }
    let soft = numerics::softmax_temperature(d_hat, tau_s)?;
    let selected = numerics::argmax(d_hat);
    let tie = d_hat.iter().enumerate().any(|(i, x)| i != selected && *x == d_hat[selected]);
    let weights = match mode {
        RoutingMode::Soft => soft.clone(),
        RoutingMode::Hard => one_hot(d_hat.len(), selected),
    };
    Ok(Routing { weights, selected, mode, soft_weights: soft, tie })
}

pub fn one_hot(n: usize, k: usize) -> Vec<f64> {
    (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReadinessReport {
    pub cues: Cues,
    pub d_hat: Vec<f64>,
    pub routing: Routing,
    pub stats: NormalizationStats,
    pub config: AssessmentConfig,
}

impl ReadinessReport {
    pub fn selected(&self) -> usize {
        self.routing.selected
    }

    pub fn omega(&self) -> &[f64] {
        &self.routing.weights
    }

    /// CSV with one-based stage numbers.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("stage,A_hat,P_hat,C_hat,D_hat,omega,selected\n");
        for l in 0..self.cues.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                l + 1,
                self.cues.agreement[l],
                self.cues.anchoring[l],
                self.cues.coverage[l],
                self.d_hat[l],
                self.routing.weights[l],
                u8::from(l == self.selected())
            ));
        }
        out
    }

    /// Deficiency of stage `l` when its state is replaced by `z`, using this
    /// report's statistics. Agreement depends on features only and is kept.
    pub fn deficiency_at(
        &self,
        l: usize,
        z: &[f64],
        ff: &[f64],
        memory: &SupportMemory,
        proj: &ProjectionSet,
    ) -> Result<(f64, f64)> {
        let p = cos(&proj.pp.mul_vec(z), &proj.pp.mul_vec(ff));
        let c = memory.coverage(z, proj, self.config.tau_h)?;
        let d = stage_deficiency(self.cues.agreement[l], p, c, &self.stats, &self.config)?;
        Ok((c, d))
    }
}

/// Full assessment of a bundle.
#[derive(Clone, Debug)]
pub struct Assessment {
    pub states: Vec<Vec<f64>>,
    pub ff: Vec<f64>,
    pub projections: ProjectionSet,
    pub memory: SupportMemory,
    pub report: ReadinessReport,
}

pub fn assess(bundle: &StageBundle, cfg: &AssessmentConfig) -> Result<Assessment> {
    cfg.validate()?;
    let proj = cfg.projection_set(bundle.feature_dim());
    let (states, ff) = fuse_states(bundle, &proj)?;
    let cues = compute_cues(bundle, &states, &ff, &proj, cfg.tau_h)?;
    let (d_hat, stats) = readiness_surrogate(&cues, cfg)?;
    let routing = route(&d_hat, cfg.tau_s, cfg.routing)?;
    let memory = SupportMemory::new(bundle, &proj);
    Ok(Assessment {
        states,
        ff,
        projections: proj,
        memory,
        report: ReadinessReport { cues, d_hat, routing, stats, config: cfg.clone() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder_sim::{generate_scenario, Condition, RecipeParams};
    use proptest::prelude::*;

    fn bundle(seed: u64) -> StageBundle {
        generate_scenario(6, 32, Condition::Clean, 3, seed, &RecipeParams::default()).unwrap().bundle
    }

    #[test]
    fn averaging_projection_of_equal_modalities() {
        let a = vec![vec![1.0, 2.0, 3.0, 4.0], vec![0.5, 0.0, -1.0, 2.0]];
        let b = StageBundle::new(a.clone(), a.clone()).unwrap();
        let proj = ProjectionSet::identity_like(4);
        let (states, ff) = fuse_states(&b, &proj).unwrap();
        assert_eq!(states, a);
        assert_eq!(ff, a[1]);
        let cues = compute_cues(&b, &states, &ff, &proj, 0.5).unwrap();
        assert!(cues.agreement.iter().all(|x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn zero_bundle_gives_zero_states() {
        let z = vec![vec![0.0; 4]; 3];
        let b = StageBundle::new(z.clone(), z).unwrap();
        let (states, ff) = fuse_states(&b, &ProjectionSet::seeded_orthogonal(4, 3)).unwrap();
        assert!(states.iter().flatten().chain(&ff).all(|x| *x == 0.0));
    }

    #[test]
    fn single_stage_coverage_uses_lone_average() {
        let b = StageBundle::new(vec![vec![1.0, 0.0, 0.0, 0.0]], vec![vec![0.0, 1.0, 0.0, 0.0]]).unwrap();
        let proj = ProjectionSet::identity_like(4);
        let (states, ff) = fuse_states(&b, &proj).unwrap();
        let cues = compute_cues(&b, &states, &ff, &proj, 0.5).unwrap();
        assert!((cues.coverage[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn seeded_orthogonal_rows() {
        let p = ProjectionSet::seeded_orthogonal(16, 7);
        for m in [&p.pz, &p.pf, &p.pa, &p.pv, &p.pp, &p.pc] {
            assert!(m.orthonormality_error() < 1e-8);
        }
    }

    #[test]
    fn joint_activation_in_hard_mode() {
        let cues = Cues { agreement: vec![0.9, 0.1, 0.5], anchoring: vec![0.9, 0.2, 0.4], coverage: vec![0.9, 0.1, 0.2] };
        let cfg = AssessmentConfig { psi_mode: PsiMode::Hard, ..Default::default() };
        let (d, _) = readiness_surrogate(&cues, &cfg).unwrap();
        assert_eq!(d[0], 0.0);
    }

    #[test]
    fn equal_cues_give_equal_deficiency_and_fallback() {
        let cues = Cues { agreement: vec![0.3; 4], anchoring: vec![0.2; 4], coverage: vec![0.1; 4] };
        let (d, stats) = readiness_surrogate(&cues, &AssessmentConfig::default()).unwrap();
        assert!(d.iter().all(|x| *x == d[0]));
        assert!(stats.agreement.fallback && stats.anchoring.fallback && stats.coverage.fallback);
    }

    #[test]
    fn routing_examples() {
        let r = route(&[0.2; 4], 0.5, RoutingMode::Soft).unwrap();
        assert!(r.weights.iter().all(|w| (w - 0.25).abs() < 1e-15));
        assert_eq!(r.selected, 0);
        assert!(r.tie);
        let r = route(&[0.1, 0.5, 0.2], 1.0, RoutingMode::Soft).unwrap();
        let oracle = [0.2780097911797676, 0.4147418726680695, 0.3072483361521629];
        for (w, o) in r.weights.iter().zip(oracle) {
            assert!((w - o).abs() < 1e-4);
        }
        let r = route(&[0.1, 0.5, 0.2], 1e-4, RoutingMode::Hard).unwrap();
        assert!(r.soft_weights[1] >= 1.0 - 1e-6);
        assert_eq!(r.weights, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn planted_stage_is_selected_with_top_agreement() {
        let a = assess(&bundle(7), &AssessmentConfig::default()).unwrap();
        let r = &a.report;
        assert_eq!(r.selected(), 3);
        assert_eq!(numerics::argmax(&r.cues.agreement), 3);
        assert!(r.cues.coverage[3] < numerics::mean(&r.cues.coverage));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let a = assess(&bundle(11), &AssessmentConfig::default()).unwrap();
        let r = &a.report;
        let grad = surrogate_gradient(&r.cues, &r.stats, &r.config).unwrap();
        for l in 0..r.cues.len() {
            let x = [r.cues.agreement[l], r.cues.anchoring[l], r.cues.coverage[l]];
            let f = |y: &[f64]| stage_deficiency(y[0], y[1], y[2], &r.stats, &r.config).unwrap();
            let err = numerics::finite_difference_check(f, &x, &grad[l], 1e-6).unwrap();
            assert!(err <= 1e-4, "stage {l}: {err}");
        }
    }

    #[test]
    fn report_csv_layout() {
        let a = assess(&bundle(7), &AssessmentConfig::default()).unwrap();
        let csv = a.report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "stage,A_hat,P_hat,C_hat,D_hat,omega,selected");
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("1,"));
    }

    proptest! {
        #[test]
        fn deficiency_is_non_negative(
            a in proptest::collection::vec(-1.0f64..1.0, 2..8),
            seed in 0u64..1000,
            hard in any::<bool>(),
        ) {
            let n = a.len();
            let mut rng = SeededRng::new(seed);
            let cues = Cues {
                agreement: a,
                anchoring: (0..n).map(|_| rng.uniform_range(-1.0, 1.0)).collect(),
                coverage: (0..n).map(|_| rng.uniform_range(-1.0, 1.0)).collect(),
            };
            let cfg = AssessmentConfig { psi_mode: if hard { PsiMode::Hard } else { PsiMode::Smooth }, ..Default::default() };
            let (d, _) = readiness_surrogate(&cues, &cfg).unwrap();
            prop_assert!(d.iter().all(|x| *x >= 0.0));
        }

        #[test]
        fn soft_argmax_matches_hard(d in proptest::collection::vec(0.0f64..3.0, 2..8)) {
            let k = numerics::argmax(&d);
            prop_assume!(d.iter().enumerate().all(|(i, x)| i == k || (d[k] - x) > 1e-3));
            let mut last = 0.0;
            for tau in [1.0, 1e-1, 1e-2, 1e-4] {
                let r = route(&d, tau, RoutingMode::Soft).unwrap();
                prop_assert_eq!(numerics::argmax(&r.weights), k);
                prop_assert!(r.weights[k] >= last - 1e-12);
                last = r.weights[k];
            }
            prop_assert!(last > 1.0 - 1e-6);
        }
    }
}
