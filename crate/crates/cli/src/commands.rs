//! Subcommand bodies.

use std::path::PathBuf;

use dpc_core::assessment::{assess, ReadinessReport};
use dpc_core::completion::{complete, CorrectionResult};
use dpc_core::encoder_sim::PlantedScenario;
use dpc_core::harness::{
    compare_criteria, counterfactual, record_trajectory, verify_prop1, verify_prop2, CriterionKind, NoiseModel,
};
use dpc_core::Result;
use serde::Serialize;
use serde_json::json;

use crate::config::{Experiment, RunConfig};
use crate::heatmap::render_heatmap;
use crate::output::{csv_table, sorted_json, ReportBundle};

fn num(x: f64) -> String {
    format!("{x}")
}

fn load_scenario(cfg: &RunConfig) -> Result<PlantedScenario> {
    match &cfg.scenario {
        Some(path) => PlantedScenario::from_json(&std::fs::read_to_string(path)?),
        None => cfg.experiment_config().scenario(cfg.condition, cfg.seed),
    }
}

pub fn generate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let sc = cfg.experiment_config().scenario(cfg.condition, cfg.seed)?;
    let mut out = ReportBundle::new(&cfg.out)?;
    let mut text = sc.to_json()?;
    text.push('\n');
    out.write("scenario.json", &text)?;
    let summary = json!({ "planted_bottleneck": sc.header.planted_bottleneck, "draw": sc.header.draw });
    out.finish("generate", cfg, &[cfg.seed], summary)
}

fn report_summary(r: &ReadinessReport) -> serde_json::Value {
    json!({ "selected": r.selected() + 1, "tie": r.routing.tie })
}

pub fn assess_cmd(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let sc = load_scenario(cfg)?;
    let a = assess(&sc.bundle, &cfg.assessment)?;
    let mut out = ReportBundle::new(&cfg.out)?;
    out.write("readiness.json", &sorted_json(&a.report)?)?;
    out.write("readiness.csv", &a.report.to_csv())?;
    out.finish("assess", cfg, &[sc.header.seed], report_summary(&a.report))
}

#[derive(Serialize)]
struct CompletionDoc<'a> {
    readiness: &'a ReadinessReport,
    correction: &'a CorrectionResult,
}

pub fn complete_cmd(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let sc = load_scenario(cfg)?;
    let a = assess(&sc.bundle, &cfg.assessment)?;
    let params = cfg.experiment_config().completion_params();
    let r = complete(a.report.omega(), &a.states, &sc.bundle, &params, cfg.correction_mode())?;
    let mut out = ReportBundle::new(&cfg.out)?;
    out.write("correction.json", &sorted_json(&CompletionDoc { readiness: &a.report, correction: &r })?)?;
    out.finish("complete", cfg, &[sc.header.seed], report_summary(&a.report))
}

pub fn intervene(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let seeds = cfg.seeds();
    let outcomes = counterfactual(&cfg.experiment_config(), cfg.condition, &seeds)?;
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            vec![
                o.target.label().to_string(),
                o.trials.to_string(),
                num(o.drop.mean),
                num(o.drop.std),
                num(o.recovery.mean),
                num(o.recovery.std),
            ]
        })
        .collect();
    let header = ["target", "trials", "drop_mean", "drop_std", "recovery_mean", "recovery_std"];
    let mut out = ReportBundle::new(&cfg.out)?;
    out.write("intervention.csv", &csv_table(&header, &rows)?)?;
    let mut trials = Vec::new();
    for o in &outcomes {
        for i in 0..o.trials {
            trials.push(vec![
                seeds[i].to_string(),
                o.target.label().to_string(),
                o.stages[i].to_string(),
                num(o.drops[i]),
                num(o.recoveries[i]),
            ]);
        }
    }
    out.write("intervention_trials.csv", &csv_table(&["seed", "target", "stage", "drop", "recovery"], &trials)?)?;
    out.finish("intervene", cfg, &seeds, json!({}))
}

pub fn criteria(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let seeds = cfg.seeds();
    let scenarios: Vec<_> = seeds.iter().map(|s| (cfg.condition, *s)).collect();
    let kinds = CriterionKind::all(cfg.fixed_depth);
    let rows = compare_criteria(&cfg.experiment_config(), &scenarios, &kinds)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.label.clone(),
                r.scenarios.to_string(),
                num(r.utility.mean),
                num(r.utility.std),
                num(r.planted_hit_rate),
            ]
        })
        .collect();
    let header = ["criterion", "scenarios", "utility_mean", "utility_std", "planted_hit_rate"];
    let mut out = ReportBundle::new(&cfg.out)?;
    out.write("criteria.csv", &csv_table(&header, &table)?)?;
    let note = "attention_response selects the stage with the most concentrated support attention";
    out.finish("criteria", cfg, &seeds, json!({ "attention_response": note }))
}

pub fn trajectory(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let seeds = cfg.seeds();
    let rec = record_trajectory(&cfg.experiment_config(), cfg.condition, &seeds)?;
    let mut rows = Vec::new();
    for e in &rec.entries {
        for l in 0..rec.num_stages() {
            rows.push(vec![
                rec.condition.label().to_string(),
                e.seed.to_string(),
                (l + 1).to_string(),
                num(e.a_hat[l]),
                num(e.p_hat[l]),
                num(e.c_hat[l]),
                num(e.d_hat[l]),
                u8::from(e.selected == l + 1).to_string(),
            ]);
        }
    }
    let header = ["condition", "seed", "stage", "A_hat", "P_hat", "C_hat", "D_hat", "selected"];
    let (c_before, c_after, d_before, d_after) = rec.before_after();
    let summary = json!({
        "histogram": rec.histogram,
        "selection_entropy": rec.entropy(),
        "mean_C_hat": rec.mean_coverage(),
        "C_hat_selected_before": c_before,
        "C_hat_selected_after": c_after,
        "D_hat_selected_before": d_before,
        "D_hat_selected_after": d_after,
    });
    let mut out = ReportBundle::new(&cfg.out)?;
    out.write("trajectory.csv", &csv_table(&header, &rows)?)?;
    out.write("trajectory.json", &sorted_json(&rec)?)?;
    out.write("trajectory.svg", &render_heatmap(&rec)?)?;
    out.finish("trajectory", cfg, &seeds, summary)
}

pub fn verify(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let mut out = ReportBundle::new(&cfg.out)?;
    match cfg.experiment {
        Experiment::Prop1 => {
            let mut rows = Vec::new();
            for noise in [NoiseModel::Uniform, NoiseModel::Adversarial] {
                let r = verify_prop1(cfg.trials, cfg.eps, cfg.stages, noise, cfg.seed)?;
                rows.push(vec![
                    num(r.eps),
                    serde_json::to_value(noise)?.as_str().unwrap_or_default().to_string(),
                    r.trials.to_string(),
                    r.wide_trials.to_string(),
                    num(r.wide_pass_rate()),
                    r.narrow_trials.to_string(),
                    num(r.narrow_pass_rate()),
                ]);
            }
            let header = [
                "eps",
                "noise",
                "trials",
                "wide_margin_trials",
                "wide_margin_pass_rate",
                "narrow_margin_trials",
                "narrow_margin_pass_rate",
            ];
            out.write("prop1.csv", &csv_table(&header, &rows)?)?;
            out.finish("verify", cfg, &[cfg.seed], json!({ "experiment": "prop1" }))
        }
        Experiment::Prop2 => {
            let seeds = cfg.seeds();
            let scenarios: Vec<_> = seeds.iter().map(|s| (cfg.condition, *s)).collect();
            let recs = verify_prop2(&cfg.experiment_config(), &scenarios)?;
            let rows: Vec<Vec<String>> = recs
                .iter()
                .map(|r| {
                    vec![
                        r.seed.to_string(),
                        r.condition.label().to_string(),
                        r.stage.to_string(),
                        num(r.derivative),
                        num(r.best_lambda),
                        num(r.c_before),
                        num(r.c_after),
                        num(r.d_before),
                        num(r.d_after),
                        num(r.ap_before),
                        num(r.ap_after),
                        u8::from(r.coverage_improved()).to_string(),
                        u8::from(r.deficiency_decreased()).to_string(),
                    ]
                })
                .collect();
            let header = [
                "seed",
                "condition",
                "stage",
                "directional_derivative",
                "best_lambda",
                "C_before",
                "C_after",
                "D_before",
                "D_after",
                "AP_before",
                "AP_after",
                "C_improved",
                "D_decreased",
            ];
            out.write("prop2.csv", &csv_table(&header, &rows)?)?;
            out.finish("verify", cfg, &seeds, json!({ "experiment": "prop2" }))
        }
    }
}
