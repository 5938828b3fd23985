//! Sweep orchestration. Every `(value, seed)` realization is independent and
//! runs on the rayon pool; rows come back in `(value, seed, method)` order
//! regardless of thread count.

use std::time::Instant;

use aeris_core::baseline::{af_baseline, passive_baseline};
use aeris_core::pipeline::{plan, AlphaRule, Deployment};
use aeris_core::scenario::generate_scenario;
use aeris_core::units::{db_to_lin, w_to_dbm};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, Method, SweepAxis};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub sweep_value: f64,
    pub seed: u64,
    pub method: Method,
    pub obj_w: Option<f64>,
    pub obj_dbm: Option<f64>,
    pub sum_pm_w: Option<f64>,
    pub p_tot_a_w: Option<f64>,
    pub eta_bits_per_joule: Option<f64>,
    pub feasible_src: Option<bool>,
    pub feasible_ris: Option<bool>,
    pub partitions_l: Option<usize>,
    /// Gain actually applied (the optimum for `active`, unity for `passive`).
    pub alpha_star: Option<f64>,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row {
    fn empty(sweep_value: f64, seed: u64, method: Method) -> Self {
        Self {
            sweep_value,
            seed,
            method,
            obj_w: None,
            obj_dbm: None,
            sum_pm_w: None,
            p_tot_a_w: None,
            eta_bits_per_joule: None,
            feasible_src: None,
            feasible_ris: None,
            partitions_l: None,
            alpha_star: None,
            runtime_ms: 0.0,
            error: None,
        }
    }

    fn failed(sweep_value: f64, seed: u64, method: Method, err: impl ToString) -> Self {
        Self {
            error: Some(err.to_string()),
            ..Self::empty(sweep_value, seed, method)
        }
    }

    fn from_deployment(sweep_value: f64, seed: u64, method: Method, d: &Deployment) -> Self {
        let r = &d.report;
        Self {
            obj_w: Some(r.obj),
            obj_dbm: Some(w_to_dbm(r.obj)),
            sum_pm_w: Some(r.sum_pm),
            p_tot_a_w: Some(r.p_tot_a),
            eta_bits_per_joule: Some(r.eta),
            feasible_src: Some(r.feasible_source),
            feasible_ris: Some(r.feasible_ris),
            partitions_l: Some(d.partition.l),
            alpha_star: Some(d.alpha),
            ..Self::empty(sweep_value, seed, method)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub rows: Vec<Row>,
}

impl SweepResult {
    pub fn rows_for(&self, value: f64, method: Method) -> impl Iterator<Item = &Row> {
        self.rows
            .iter()
            .filter(move |r| r.sweep_value == value && r.method == method)
    }
}

/// Runs the sweep on the ambient rayon pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> SweepResult {
    let jobs: Vec<(f64, u64)> = cfg
        .sweep_values
        .iter()
        .flat_map(|&v| (0..cfg.seeds as u64).map(move |s| (v, cfg.seed_base + s)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(v, seed)| realization(cfg, v, seed))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    SweepResult {
        axis: cfg.sweep_axis,
        rows,
    }
}

/// Runs the sweep on a dedicated pool of `threads` workers (0 = all cores).
pub fn run_experiment_threads(cfg: &ExperimentConfig, threads: usize) -> Result<SweepResult, rayon::ThreadPoolBuildError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(|| run_experiment(cfg)))
}

fn realization(base: &ExperimentConfig, value: f64, seed: u64) -> Vec<Row> {
    let cfg = base.at(value);
    let scn = match generate_scenario(&cfg.scenario(), seed) {
        Ok(s) => s,
        Err(e) => return cfg.methods.iter().map(|&m| Row::failed(value, seed, m, &e)).collect(),
    };
    let ris = cfg.ris();
    let opts = cfg.planner();
    let fixed_alpha = (cfg.sweep_axis == SweepAxis::Alpha).then(|| db_to_lin(value).sqrt());
    cfg.methods
        .iter()
        .map(|&method| {
            let start = cfg.timing.then(Instant::now);
            let mut row = match method {
                Method::Active | Method::Detuned => {
                    let rule = match (method, fixed_alpha) {
                        (Method::Active, None) => AlphaRule::Optimal,
                        (Method::Active, Some(a)) => AlphaRule::Fixed(a),
                        (_, None) => AlphaRule::DetunedDb(cfg.delta0_db),
                        (_, Some(a)) => AlphaRule::Fixed(a * db_to_lin(cfg.delta0_db).sqrt()),
                    };
                    match plan(&scn, &ris, rule, &opts) {
                        Ok(d) => Row::from_deployment(value, seed, method, &d),
                        Err(e) => Row::failed(value, seed, method, e),
                    }
                }
                Method::Passive => match passive_baseline(&scn, &ris, &opts) {
                    Ok(d) => Row::from_deployment(value, seed, method, &d),
                    Err(e) => Row::failed(value, seed, method, e),
                },
                Method::Af => {
                    let distance = (cfg.sweep_axis == SweepAxis::AfDistance).then_some(value);
                    match af_baseline(&scn, &cfg.af(distance), &opts.offsets) {
                        Ok(r) => Row {
                            obj_w: Some(r.obj),
                            obj_dbm: Some(w_to_dbm(r.obj)),
                            sum_pm_w: Some(r.sum_ps),
                            p_tot_a_w: Some(r.sum_pr + r.p_circ),
                            eta_bits_per_joule: Some(r.eta),
                            feasible_src: Some(r.feasible_source),
                            feasible_ris: Some(r.feasible_relay),
                            ..Row::empty(value, seed, method)
                        },
                        Err(e) => Row::failed(value, seed, method, e),
                    }
                }
            };
            if let Some(t) = start {
                row.runtime_ms = t.elapsed().as_secs_f64() * 1e3;
            }
            row
        })
        .collect()
}
