//! End-to-end pipeline and parameter sweeps.
//!
//! `run_pipeline` chains trace generation, dataset construction, predictor
//! training and evaluation, and the energy comparison for one configuration.
//! `run_sweep` repeats it along one axis (`p_event`, `n_total`,
//! `n_monitoring`, `t_data`), retraining per point where the traffic
//! distribution changes and reusing the base predictor statistics for
//! energy-only axes. Sweep points are independent and evaluated in
//! parallel; per-point seeds are `base_seed XOR point_index`, so results
//! are byte-reproducible regardless of scheduling.

use crate::config::RunConfig;
use crate::energy::{
    activation_levels, full_report_with_bma, EnergyReport, RadioParams, ScenarioParams,
};
use crate::error::{Error, Result};
use crate::predictor::{evaluate, init_model, train, EvalReport};
use crate::traffic::{build_dataset, generate_trace, split_dataset};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Salt separating the dataset-split RNG stream from the training stream.
const SPLIT_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Fixed-notation formatting with 10 significant digits; keeps golden CSV
/// files stable across platforms.
pub fn fmt_sig(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0.000000000".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (9 - mag).clamp(0, 17) as usize;
    format!("{v:.decimals$}")
}

/// Everything one pipeline run produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineOutput {
    pub eval: EvalReport,
    pub energy: EnergyReport,
    pub loss_history: Vec<f64>,
}

/// Window count used by the non-predictive BMA baseline: a static
/// provisioning of `margin * p_true` event-capable nodes (the baseline
/// fixes its bitmap windows ahead of time and overprovisions), clamped to
/// the cluster size. `bma_window_prob` in the config replaces the
/// margin-derived probability outright.
fn bma_window(cfg: &RunConfig, scenario: &ScenarioParams, p_true: f64) -> f64 {
    let prob = cfg
        .bma_window_prob
        .unwrap_or((cfg.bma_static_margin * p_true).min(1.0));
    (scenario.event_capable() * prob).clamp(0.0, scenario.event_capable())
}

fn energy_point(
    cfg: &RunConfig,
    radio: &RadioParams,
    scenario: &ScenarioParams,
    eval: &EvalReport,
    p_true: f64,
) -> Result<EnergyReport> {
    let activation = activation_levels(
        scenario,
        p_true,
        eval.p_pred_global,
        eval.p_pred_min,
        eval.p_pred_max,
    )
    .map_err(|e| e.in_stage("energy"))?;
    full_report_with_bma(radio, scenario, &activation, bma_window(cfg, scenario, p_true))
        .map_err(|e| e.in_stage("energy"))
}

/// Generate, split, train, evaluate, and price one configuration.
/// Deterministic per seed set.
pub fn run_pipeline(cfg: &RunConfig) -> Result<PipelineOutput> {
    cfg.validate()?;
    let trace = generate_trace(&cfg.traffic).map_err(|e| e.in_stage("traffic"))?;
    let dataset =
        build_dataset(&trace, cfg.predictor.seq_len).map_err(|e| e.in_stage("traffic"))?;
    let (train_set, test_set) =
        split_dataset(&dataset, cfg.predictor.train_ratio, cfg.train.seed ^ SPLIT_SEED_SALT)
            .map_err(|e| e.in_stage("traffic"))?;

    let model = init_model(
        dataset.input_dim(),
        cfg.predictor.hidden_units,
        dataset.n_nodes,
        cfg.train.seed,
    )
    .map_err(|e| e.in_stage("predictor"))?;
    let (model, loss_history) =
        train(model, &train_set, &cfg.train).map_err(|e| e.in_stage("predictor"))?;
    let eval = evaluate(&model, &test_set).map_err(|e| e.in_stage("predictor"))?;

    let radio = cfg.radio_si();
    let energy = energy_point(cfg, &radio, &cfg.scenario, &eval, eval.p_true_global)?;
    Ok(PipelineOutput {
        eval,
        energy,
        loss_history,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    PEvent,
    NTotal,
    NMonitoring,
    TData,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::PEvent => "p_event",
            SweepAxis::NTotal => "n_total",
            SweepAxis::NMonitoring => "n_monitoring",
            SweepAxis::TData => "t_data",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "p_event" => Ok(SweepAxis::PEvent),
            "n_total" => Ok(SweepAxis::NTotal),
            "n_monitoring" => Ok(SweepAxis::NMonitoring),
            "t_data" => Ok(SweepAxis::TData),
            other => Err(Error::config(
                "sweep.axis",
                format!("unknown axis {other:?} (expected p_event, n_total, n_monitoring, t_data)"),
            )),
        }
    }

    /// The traffic distribution only changes along the event-probability
    /// axis; the other axes are energy-only and reuse the base predictor.
    pub fn default_retrain(self) -> bool {
        matches!(self, SweepAxis::PEvent)
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub retrain_per_point: Option<bool>,
    pub base: RunConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::config("sweep.values", "must be non-empty"));
        }
        if !self.values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::config(
                "sweep.values",
                "must be strictly increasing",
            ));
        }
        self.base.validate()
    }

    pub fn retrain(&self) -> bool {
        self.retrain_per_point.unwrap_or(self.axis.default_retrain())
    }
}

/// The four stock sweeps, mirroring the ranges the evaluation varies:
/// event probability 0.1–0.5, cluster size 20–50, monitoring nodes 1–9,
/// and data-slot duration 15.625–125 ms around the 62.5 ms default.
pub fn default_sweeps(base: &RunConfig) -> Vec<SweepSpec> {
    let grid = |axis, values: &[f64]| SweepSpec {
        axis,
        values: values.to_vec(),
        retrain_per_point: None,
        base: base.clone(),
    };
    vec![
        grid(SweepAxis::PEvent, &[0.1, 0.2, 0.3, 0.4, 0.5]),
        grid(SweepAxis::NTotal, &[20.0, 30.0, 40.0, 50.0]),
        grid(SweepAxis::NMonitoring, &[1.0, 3.0, 5.0, 7.0, 9.0]),
        grid(SweepAxis::TData, &[15.625, 31.25, 62.5, 125.0]),
    ]
}

/// One sweep point: either a full record or a structured error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub energy: Option<EnergyReport>,
    pub eval: Option<EvalReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: String,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn ok_points(&self) -> impl Iterator<Item = (&SweepPoint, &EnergyReport)> {
        self.points
            .iter()
            .filter_map(|p| p.energy.as_ref().map(|e| (p, e)))
    }
}

/// Applies one axis value to a copy of the base config. `t_data` values
/// are in milliseconds, matching the config-file units.
fn apply_axis(cfg: &mut RunConfig, axis: SweepAxis, value: f64) {
    match axis {
        SweepAxis::PEvent => {
            cfg.traffic.p_base = value;
            if cfg.traffic.burst_prob < value {
                cfg.traffic.burst_prob = value;
            }
            cfg.scenario.p_event = value;
        }
        SweepAxis::NTotal => cfg.scenario.n_total = value.round() as usize,
        SweepAxis::NMonitoring => cfg.scenario.n_monitoring = value.round() as usize,
        SweepAxis::TData => cfg.radio.t_data_ms = value,
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let retrain = spec.retrain();

    let points: Vec<SweepPoint> = if retrain {
        spec.values
            .par_iter()
            .enumerate()
            .map(|(idx, &value)| {
                let mut cfg = spec.base.clone();
                apply_axis(&mut cfg, spec.axis, value);
                cfg.traffic.seed = spec.base.traffic.seed ^ idx as u64;
                cfg.train.seed = spec.base.train.seed ^ idx as u64;
                match run_pipeline(&cfg) {
                    Ok(out) => SweepPoint {
                        value,
                        energy: Some(out.energy),
                        eval: Some(out.eval),
                        error: None,
                    },
                    Err(e) => SweepPoint {
                        value,
                        energy: None,
                        eval: None,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    } else {
        // One base run; each point re-prices the energy model only.
        let base_out = run_pipeline(&spec.base)?;
        spec.values
            .iter()
            .map(|&value| {
                let mut cfg = spec.base.clone();
                apply_axis(&mut cfg, spec.axis, value);
                let p_true = match spec.axis {
                    SweepAxis::PEvent => value,
                    _ => base_out.eval.p_true_global,
                };
                let radio = cfg.radio_si();
                match energy_point(&cfg, &radio, &cfg.scenario, &base_out.eval, p_true) {
                    Ok(report) => SweepPoint {
                        value,
                        energy: Some(report),
                        eval: Some(base_out.eval.clone()),
                        error: None,
                    },
                    Err(e) => SweepPoint {
                        value,
                        energy: None,
                        eval: None,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    };

    Ok(SweepResult {
        axis: spec.axis.name().into(),
        points,
    })
}

/// Percentage savings of the three EEI variants against the three
/// baselines: `100 * (E_base - E_eei) / E_base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SavingsSet {
    pub poor_vs_tdma: f64,
    pub poor_vs_eatdma: f64,
    pub poor_vs_bma: f64,
    pub true_vs_tdma: f64,
    pub true_vs_eatdma: f64,
    pub true_vs_bma: f64,
    pub best_vs_tdma: f64,
    pub best_vs_eatdma: f64,
    pub best_vs_bma: f64,
}

fn pct(base: f64, eei: f64) -> f64 {
    100.0 * (base - eei) / base
}

impl SavingsSet {
    pub fn from_report(r: &EnergyReport) -> Self {
        SavingsSet {
            poor_vs_tdma: pct(r.e_tdma, r.e_eei_poor),
            poor_vs_eatdma: pct(r.e_eatdma, r.e_eei_poor),
            poor_vs_bma: pct(r.e_bma, r.e_eei_poor),
            true_vs_tdma: pct(r.e_tdma, r.e_eei_true),
            true_vs_eatdma: pct(r.e_eatdma, r.e_eei_true),
            true_vs_bma: pct(r.e_bma, r.e_eei_true),
            best_vs_tdma: pct(r.e_tdma, r.e_eei_best),
            best_vs_eatdma: pct(r.e_eatdma, r.e_eei_best),
            best_vs_bma: pct(r.e_bma, r.e_eei_best),
        }
    }

    pub fn as_array(&self) -> [f64; 9] {
        [
            self.poor_vs_tdma,
            self.poor_vs_eatdma,
            self.poor_vs_bma,
            self.true_vs_tdma,
            self.true_vs_eatdma,
            self.true_vs_bma,
            self.best_vs_tdma,
            self.best_vs_eatdma,
            self.best_vs_bma,
        ]
    }

    fn from_array(a: [f64; 9]) -> Self {
        SavingsSet {
            poor_vs_tdma: a[0],
            poor_vs_eatdma: a[1],
            poor_vs_bma: a[2],
            true_vs_tdma: a[3],
            true_vs_eatdma: a[4],
            true_vs_bma: a[5],
            best_vs_tdma: a[6],
            best_vs_eatdma: a[7],
            best_vs_bma: a[8],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SavingsRow {
    pub value: f64,
    pub eta_true: f64,
    pub savings: SavingsSet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SavingsSummary {
    pub axis: String,
    pub rows: Vec<SavingsRow>,
    pub median: SavingsSet,
    pub min: SavingsSet,
    pub max: SavingsSet,
    pub errors: Vec<(f64, String)>,
}

pub fn median(values: &mut Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Per-point savings plus median/min/max aggregates across points.
pub fn comparative_summary(sweep: &SweepResult) -> Result<SavingsSummary> {
    let rows: Vec<SavingsRow> = sweep
        .ok_points()
        .map(|(p, e)| SavingsRow {
            value: p.value,
            eta_true: e.eta_true,
            savings: SavingsSet::from_report(e),
        })
        .collect();
    if rows.is_empty() {
        return Err(Error::Empty("sweep has no successful points".into()));
    }
    let mut med = [0.0; 9];
    let mut lo = [0.0; 9];
    let mut hi = [0.0; 9];
    for k in 0..9 {
        let mut col: Vec<f64> = rows.iter().map(|r| r.savings.as_array()[k]).collect();
        lo[k] = col.iter().cloned().fold(f64::INFINITY, f64::min);
        hi[k] = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        med[k] = median(&mut col);
    }
    Ok(SavingsSummary {
        axis: sweep.axis.clone(),
        rows,
        median: SavingsSet::from_array(med),
        min: SavingsSet::from_array(lo),
        max: SavingsSet::from_array(hi),
        errors: sweep
            .points
            .iter()
            .filter_map(|p| p.error.as_ref().map(|e| (p.value, e.clone())))
            .collect(),
    })
}

pub const SWEEP_CSV_HEADER: &str = "axis,value,e_tdma,e_eatdma,e_bma,e_eei_poor,e_eei_true,\
e_eei_best,eta_true,savings_poor_vs_tdma,savings_poor_vs_eatdma,savings_poor_vs_bma,\
savings_true_vs_tdma,savings_true_vs_eatdma,savings_true_vs_bma,savings_best_vs_tdma,\
savings_best_vs_eatdma,savings_best_vs_bma";

/// One CSV row per successful point; errored points are kept out of the
/// CSV and reported in the JSON summary instead.
pub fn write_sweep_csv<W: Write>(sweep: &SweepResult, out: &mut W) -> Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for (point, report) in sweep.ok_points() {
        let s = SavingsSet::from_report(report);
        let mut fields = vec![sweep.axis.clone(), fmt_sig(point.value)];
        for v in [
            report.e_tdma,
            report.e_eatdma,
            report.e_bma,
            report.e_eei_poor,
            report.e_eei_true,
            report.e_eei_best,
            report.eta_true,
        ] {
            fields.push(fmt_sig(v));
        }
        for v in s.as_array() {
            fields.push(fmt_sig(v));
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}
