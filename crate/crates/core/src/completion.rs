//! Support-aware completion of the bottleneck state.

use serde::{Deserialize, Serialize};

use crate::encoder_sim::StageBundle;
use crate::error::{contract, Error, Result};
use crate::numerics::{self, add, cos, hadamard, logistic, Matrix, SeededRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletionInit {
    /// Orthogonal interaction and gate maps; averaging fusion, identity refine
    /// and identity attention projections.
    SupportPreserving,
    /// Every map seeded orthogonal.
    SeededOrthogonal,
    /// Every map zero, so the refined support vanishes.
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletionParams {
    pub init: CompletionInit,
    pub s_av: Matrix,
    pub s_va: Matrix,
    /// `2d -> d`.
    pub s_cat: Matrix,
    /// `2d -> d`.
    pub gate: Matrix,
    pub refine_weight: Matrix,
    pub refine_bias: Vec<f64>,
    pub key: Matrix,
    pub value: Matrix,
    pub tau_l: f64,
    /// Attention over stages is weighted by `1 - omega_j`, so the routed stage
    /// does not attend to itself.
    pub exclude_routed: bool,
}

impl CompletionParams {
    pub fn build(init: CompletionInit, d: usize, seed: u64) -> Self {
        let mut rng = SeededRng::with_stream(seed, 20);
        let mut orth = |r: usize, c: usize| Matrix::seeded_orthogonal(r, c, &mut rng);
        let (s_av, s_va, gate) = match init {
            CompletionInit::Zero => (Matrix::zeros(d, d), Matrix::zeros(d, d), Matrix::zeros(d, 2 * d)),
            _ => (orth(d, d), orth(d, d), orth(d, 2 * d)),
        };
        let (s_cat, refine_weight, key, value) = match init {
            CompletionInit::SupportPreserving => (
                Matrix::stacked_identity(d, 2, 0.5),
                Matrix::identity(d),
                Matrix::identity(d),
                Matrix::identity(d),
            ),
            CompletionInit::SeededOrthogonal => (orth(d, 2 * d), orth(d, d), orth(d, d), orth(d, d)),
            CompletionInit::Zero => (Matrix::zeros(d, 2 * d), Matrix::zeros(d, d), Matrix::identity(d), Matrix::identity(d)),
        };
        Self {
            init,
            s_av,
            s_va,
            s_cat,
            gate,
            refine_weight,
            refine_bias: vec![0.0; d],
            key,
            value,
            tau_l: 0.5,
            exclude_routed: true,
        }
    }

    pub fn feature_dim(&self) -> usize {
        self.s_av.rows()
    }

    pub fn check(&self, d: usize) -> Result<()> {
        let square = [&self.s_av, &self.s_va, &self.refine_weight, &self.key, &self.value];
        let wide = [&self.s_cat, &self.gate];
        if square.iter().any(|m| m.rows() != d || m.cols() != d)
            || wide.iter().any(|m| m.rows() != d || m.cols() != 2 * d)
            || self.refine_bias.len() != d
        {
            return contract(format!("completion parameter shapes do not match feature_dim {d}"));
        }
        if !(self.tau_l > 0.0) {
            return Err(Error::Config("tau_l must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "lambda", rename_all = "snake_case")]
pub enum CorrectionMode {
    Gated,
    Scalar(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub c_v: Vec<f64>,
    pub c_a: Vec<f64>,
    pub u_a: Vec<f64>,
    pub u_v: Vec<f64>,
    pub q_bn: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionResult {
    pub z_bn: Vec<f64>,
    pub c_v: Vec<f64>,
    pub c_a: Vec<f64>,
    pub u_a: Vec<f64>,
    pub u_v: Vec<f64>,
    pub q_bn: Vec<f64>,
    pub g_bn: Option<Vec<f64>>,
    pub z_tilde: Vec<f64>,
    pub lambda_used: Option<f64>,
    pub mode: CorrectionMode,
}

/// `z_bn = sum_l omega_l z_l`; a one-hot weight returns the selected state exactly.
pub fn bottleneck_state(weights: &[f64], states: &[Vec<f64>]) -> Result<Vec<f64>> {
    if weights.len() != states.len() || states.is_empty() {
        return contract(format!("{} weights for {} states", weights.len(), states.len()));
    }
    if (weights.iter().sum::<f64>() - 1.0).abs() > 1e-6 {
        return contract("routing weights must sum to 1");
    }
    let hot: Vec<usize> = (0..weights.len()).filter(|i| weights[*i] != 0.0).collect();
    if hot.len() == 1 && weights[hot[0]] == 1.0 {
        return Ok(states[hot[0]].clone());
    }
    let mut z = vec![0.0; states[0].len()];
    for (w, s) in weights.iter().zip(states) {
        numerics::axpy(*w, s, &mut z);
    }
    Ok(z)
}

fn layer_attention(z: &[f64], feats: &[Vec<f64>], weights: &[f64], p: &CompletionParams) -> Result<Vec<f64>> {
    let scores: Vec<f64> = feats.iter().map(|f| cos(z, &p.key.mul_vec(f))).collect();
    let mut alpha = numerics::softmax_temperature(&scores, p.tau_l)?;
    if p.exclude_routed {
        let masked: Vec<f64> = alpha.iter().zip(weights).map(|(a, w)| a * (1.0 - w).max(0.0)).collect();
        let total: f64 = masked.iter().sum();
        if total > 1e-12 {
            alpha = masked.iter().map(|x| x / total).collect();
        }
    }
    let mut c = vec![0.0; z.len()];
    for (a, f) in alpha.iter().zip(feats) {
        numerics::axpy(*a, &p.value.mul_vec(f), &mut c);
    }
    Ok(c)
}

fn sigmoid(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| logistic(*v)).collect()
}

/// Layer-aware support, cross-modal interaction and refinement.
/// `weights` are the routing weights that produced `z_bn`.
pub fn aggregate_support(
    z_bn: &[f64],
    weights: &[f64],
    bundle: &StageBundle,
    p: &CompletionParams,
) -> Result<Support> {
    let d = bundle.feature_dim();
    p.check(d)?;
    if z_bn.len() != d || weights.len() != bundle.num_stages() {
        return contract("bottleneck state or weights do not match the bundle");
    }
    let c_v = layer_attention(z_bn, &bundle.visual, weights, p)?;
    let c_a = layer_attention(z_bn, &bundle.audio, weights, p)?;
    let u_a = add(&hadamard(&sigmoid(&p.s_av.mul_vec(&c_v)), &c_a), &c_v);
    let u_v = add(&hadamard(&sigmoid(&p.s_va.mul_vec(&c_a)), &c_v), &c_a);
    let fused = p.s_cat.mul_vec(&numerics::concat(&u_a, &u_v));
    let q_bn = add(&p.refine_weight.mul_vec(&fused), &p.refine_bias).iter().map(|x| x.tanh()).collect();
    Ok(Support { c_v, c_a, u_a, u_v, q_bn })
}

pub fn gated_correction(z_bn: &[f64], support: Support, p: &CompletionParams, mode: CorrectionMode) -> Result<CorrectionResult> {
    if z_bn.len() != support.q_bn.len() {
        return contract("bottleneck state and support differ in dim");
    }
    let q = &support.q_bn;
    let (g_bn, z_tilde, lambda_used) = match mode {
        CorrectionMode::Gated => {
            let g = sigmoid(&p.gate.mul_vec(&numerics::concat(z_bn, q)));
            let zt = add(z_bn, &hadamard(&g, q));
            (Some(g), zt, None)
        }
        CorrectionMode::Scalar(lambda) => {
            if !(0.0..=1.0).contains(&lambda) {
                return contract(format!("lambda must lie in [0, 1], got {lambda}"));
            }
            let mut zt = z_bn.to_vec();
            numerics::axpy(lambda, q, &mut zt);
            (None, zt, Some(lambda))
        }
    };
    Ok(CorrectionResult {
        z_bn: z_bn.to_vec(),
        c_v: support.c_v,
        c_a: support.c_a,
        u_a: support.u_a,
        u_v: support.u_v,
        q_bn: support.q_bn,
        g_bn,
        z_tilde,
        lambda_used,
        mode,
    })
}

/// Route, aggregate support and correct.
pub fn complete(
    weights: &[f64],
    states: &[Vec<f64>],
    bundle: &StageBundle,
    p: &CompletionParams,
    mode: CorrectionMode,
) -> Result<CorrectionResult> {
    let z_bn = bottleneck_state(weights, states)?;
    complete_state(&z_bn, weights, bundle, p, mode)
}

/// Completion of an explicit bottleneck state.
pub fn complete_state(
    z_bn: &[f64],
    weights: &[f64],
    bundle: &StageBundle,
    p: &CompletionParams,
    mode: CorrectionMode,
) -> Result<CorrectionResult> {
    let support = aggregate_support(z_bn, weights, bundle, p)?;
    gated_correction(z_bn, support, p, mode)
}
