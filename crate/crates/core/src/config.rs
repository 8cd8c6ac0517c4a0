//! Run configuration: a human-editable TOML file with sections mirroring
//! the module boundaries. Every field is optional; missing values fall
//! back to the CC2420 defaults. Radio fields are written in mW / ms, the
//! units the constants are usually quoted in, and converted to SI at the
//! point of use. The fully resolved config is echoed beside every run's
//! outputs so an experiment can be re-run from its artifacts alone.

use crate::energy::{RadioParams, ScenarioParams};
use crate::error::{Error, Result};
use crate::experiment::{SweepAxis, SweepSpec};
use crate::predictor::TrainConfig;
use crate::traffic::TrafficConfig;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Radio constants in config-file units (mW and ms).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioMilli {
    pub p_tx_mw: f64,
    pub p_rx_mw: f64,
    pub p_idle_mw: f64,
    pub p_energycheck_mw: f64,
    pub t_ctrl_ms: f64,
    pub t_data_ms: f64,
    pub t_chead_ms: f64,
    pub t_echeck_ms: f64,
}

impl Default for RadioMilli {
    fn default() -> Self {
        RadioMilli {
            p_tx_mw: 52.2,
            p_rx_mw: 56.4,
            p_idle_mw: 1.42,
            p_energycheck_mw: 2.0,
            t_ctrl_ms: 1.5625,
            t_data_ms: 62.5,
            t_chead_ms: 1.5625,
            t_echeck_ms: 1.5625,
        }
    }
}

impl RadioMilli {
    pub fn to_si(&self) -> RadioParams {
        RadioParams::from_milli(
            self.p_tx_mw,
            self.p_rx_mw,
            self.p_idle_mw,
            self.p_energycheck_mw,
            self.t_ctrl_ms,
            self.t_data_ms,
            self.t_chead_ms,
            self.t_echeck_ms,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictorSettings {
    pub hidden_units: usize,
    pub seq_len: usize,
    pub train_ratio: f64,
}

impl Default for PredictorSettings {
    fn default() -> Self {
        PredictorSettings {
            hidden_units: 64,
            seq_len: 8,
            train_ratio: 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub axis: String,
    pub values: Vec<f64>,
    pub retrain_per_point: Option<bool>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Master seed; per-module seeds default from it.
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Static overprovisioning factor of the BMA baseline's bitmap window
    /// relative to the true event probability.
    pub bma_static_margin: f64,
    /// Absolute window probability for the BMA baseline; replaces the
    /// margin-derived value when set.
    pub bma_window_prob: Option<f64>,
    pub traffic: TrafficConfig,
    pub radio: RadioMilli,
    pub scenario: ScenarioParams,
    pub predictor: PredictorSettings,
    pub train: TrainConfig,
    pub sweep: Option<SweepConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let seed = 42;
        RunConfig {
            seed,
            output_dir: PathBuf::from("out"),
            bma_static_margin: 1.4,
            bma_window_prob: None,
            traffic: TrafficConfig {
                seed,
                ..TrafficConfig::default()
            },
            radio: RadioMilli::default(),
            scenario: ScenarioParams::default(),
            predictor: PredictorSettings::default(),
            train: TrainConfig {
                seed: seed ^ 0x5eed,
                ..TrainConfig::default()
            },
            sweep: None,
        }
    }
}

impl RunConfig {
    pub fn radio_si(&self) -> RadioParams {
        self.radio.to_si()
    }

    pub fn validate(&self) -> Result<()> {
        self.traffic.validate()?;
        self.radio_si().validate()?;
        self.scenario.validate()?;
        self.train.validate()?;
        if self.predictor.hidden_units == 0 {
            return Err(Error::config("predictor.hidden_units", "must be >= 1"));
        }
        if self.predictor.seq_len == 0 || self.predictor.seq_len >= self.traffic.n_frames {
            return Err(Error::config(
                "predictor.seq_len",
                format!(
                    "seq_len {} must be in [1, n_frames = {})",
                    self.predictor.seq_len, self.traffic.n_frames
                ),
            ));
        }
        if !(self.predictor.train_ratio > 0.0 && self.predictor.train_ratio < 1.0) {
            return Err(Error::config(
                "predictor.train_ratio",
                format!("ratio {} outside (0, 1)", self.predictor.train_ratio),
            ));
        }
        if !(self.bma_static_margin > 0.0) {
            return Err(Error::config("bma_static_margin", "must be > 0"));
        }
        if let Some(p) = self.bma_window_prob {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(
                    "bma_window_prob",
                    format!("probability {p} outside [0, 1]"),
                ));
            }
        }
        if let Some(sweep) = &self.sweep {
            SweepAxis::parse(&sweep.axis)?;
            if sweep.values.is_empty() {
                return Err(Error::config("sweep.values", "must be non-empty"));
            }
        }
        Ok(())
    }

    /// Materializes the sweep section, if present, into a runnable spec.
    pub fn sweep_spec(&self) -> Result<Option<SweepSpec>> {
        match &self.sweep {
            None => Ok(None),
            Some(sweep) => Ok(Some(SweepSpec {
                axis: SweepAxis::parse(&sweep.axis)?,
                values: sweep.values.clone(),
                retrain_per_point: sweep.retrain_per_point,
                base: self.clone(),
            })),
        }
    }

    /// Serializes the resolved configuration back to TOML. Reloading the
    /// echoed text reproduces this config exactly.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

// ---------------------------------------------------------------------
// File-shape structs: everything optional, resolved against defaults.
// ---------------------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrafficFile {
    n_nodes: Option<usize>,
    n_frames: Option<usize>,
    p_base: Option<f64>,
    burst_rate: Option<f64>,
    burst_prob: Option<f64>,
    burst_duration: Option<usize>,
    burst_group_size: Option<usize>,
    flip_noise: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RadioFile {
    p_tx_mw: Option<f64>,
    p_rx_mw: Option<f64>,
    p_idle_mw: Option<f64>,
    p_energycheck_mw: Option<f64>,
    t_ctrl_ms: Option<f64>,
    t_data_ms: Option<f64>,
    t_chead_ms: Option<f64>,
    t_echeck_ms: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    n_total: Option<usize>,
    n_monitoring: Option<usize>,
    n_event: Option<f64>,
    n_frames: Option<usize>,
    p_event: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredictorFile {
    hidden_units: Option<usize>,
    seq_len: Option<usize>,
    train_ratio: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrainFile {
    learning_rate: Option<f64>,
    l2_lambda: Option<f64>,
    epochs: Option<usize>,
    batch_size: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfigFile {
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    bma_static_margin: Option<f64>,
    bma_window_prob: Option<f64>,
    #[serde(default)]
    traffic: Option<TrafficFile>,
    #[serde(default)]
    radio: Option<RadioFile>,
    #[serde(default)]
    scenario: Option<ScenarioFile>,
    #[serde(default)]
    predictor: Option<PredictorFile>,
    #[serde(default)]
    train: Option<TrainFile>,
    #[serde(default)]
    sweep: Option<SweepConfig>,
}

/// Parses configuration text; an empty string yields the full default
/// configuration. Validation errors name the offending field.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let file: RunConfigFile =
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
    let defaults = RunConfig::default();
    let seed = file.seed.unwrap_or(defaults.seed);

    let t = file.traffic.unwrap_or_default();
    let dt = TrafficConfig::default();
    let traffic = TrafficConfig {
        n_nodes: t.n_nodes.unwrap_or(dt.n_nodes),
        n_frames: t.n_frames.unwrap_or(dt.n_frames),
        p_base: t.p_base.unwrap_or(dt.p_base),
        burst_rate: t.burst_rate.unwrap_or(dt.burst_rate),
        burst_prob: t.burst_prob.unwrap_or(dt.burst_prob),
        burst_duration: t.burst_duration.unwrap_or(dt.burst_duration),
        burst_group_size: t.burst_group_size.unwrap_or(dt.burst_group_size),
        flip_noise: t.flip_noise.unwrap_or(dt.flip_noise),
        seed: t.seed.unwrap_or(seed),
    };

    let r = file.radio.unwrap_or_default();
    let dr = RadioMilli::default();
    let radio = RadioMilli {
        p_tx_mw: r.p_tx_mw.unwrap_or(dr.p_tx_mw),
        p_rx_mw: r.p_rx_mw.unwrap_or(dr.p_rx_mw),
        p_idle_mw: r.p_idle_mw.unwrap_or(dr.p_idle_mw),
        p_energycheck_mw: r.p_energycheck_mw.unwrap_or(dr.p_energycheck_mw),
        t_ctrl_ms: r.t_ctrl_ms.unwrap_or(dr.t_ctrl_ms),
        t_data_ms: r.t_data_ms.unwrap_or(dr.t_data_ms),
        t_chead_ms: r.t_chead_ms.unwrap_or(dr.t_chead_ms),
        t_echeck_ms: r.t_echeck_ms.unwrap_or(dr.t_echeck_ms),
    };

    let s = file.scenario.unwrap_or_default();
    let ds = ScenarioParams::default();
    let n_total = s.n_total.unwrap_or(ds.n_total);
    let n_monitoring = s.n_monitoring.unwrap_or(ds.n_monitoring);
    let p_event = s.p_event.unwrap_or(traffic.p_base);
    let default_n_event = if n_total > n_monitoring + 1 {
        ((n_total - n_monitoring - 1) as f64 * p_event).round()
    } else {
        0.0
    };
    let scenario = ScenarioParams {
        n_total,
        n_monitoring,
        n_event: s.n_event.unwrap_or(default_n_event),
        n_frames: s.n_frames.unwrap_or(ds.n_frames),
        p_event,
    };

    let p = file.predictor.unwrap_or_default();
    let dp = PredictorSettings::default();
    let predictor = PredictorSettings {
        hidden_units: p.hidden_units.unwrap_or(dp.hidden_units),
        seq_len: p.seq_len.unwrap_or(dp.seq_len),
        train_ratio: p.train_ratio.unwrap_or(dp.train_ratio),
    };

    let tr = file.train.unwrap_or_default();
    let dtr = TrainConfig::default();
    let train = TrainConfig {
        learning_rate: tr.learning_rate.unwrap_or(dtr.learning_rate),
        l2_lambda: tr.l2_lambda.unwrap_or(dtr.l2_lambda),
        epochs: tr.epochs.unwrap_or(dtr.epochs),
        batch_size: tr.batch_size.unwrap_or(dtr.batch_size),
        seed: tr.seed.unwrap_or(seed ^ 0x5eed),
    };

    let cfg = RunConfig {
        seed,
        output_dir: file.output_dir.unwrap_or(defaults.output_dir),
        bma_static_margin: file.bma_static_margin.unwrap_or(defaults.bma_static_margin),
        bma_window_prob: file.bma_window_prob,
        traffic,
        radio,
        scenario,
        predictor,
        train,
        sweep: file.sweep,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Loads and resolves a config file. A missing `path` is an error; an
/// empty file is the full default configuration.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_fully_defaulted() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.radio.p_tx_mw, 52.2);
        assert_eq!(cfg.radio.t_data_ms, 62.5);
        assert_eq!(cfg.scenario.n_total, 20);
        assert_eq!(cfg.scenario.n_monitoring, 1);
        assert_eq!(cfg.predictor.hidden_units, 64);
        assert_eq!(cfg.predictor.seq_len, 8);
        assert_eq!(cfg.scenario.n_frames, 20);
    }

    #[test]
    fn si_conversion() {
        let cfg = parse_config("").unwrap();
        let radio = cfg.radio_si();
        assert!((radio.p_tx - 0.0522).abs() < 1e-15);
        assert!((radio.t_data - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_probability_names_field() {
        let err = parse_config("[traffic]\np_base = 1.5\nburst_prob = 1.5\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("traffic.p_base"), "{err}");
    }

    #[test]
    fn unknown_key_is_a_parse_error() {
        assert!(parse_config("[traffic]\nnot_a_field = 1\n").is_err());
    }

    #[test]
    fn echo_roundtrip_is_identity() {
        let text = "
seed = 7
bma_static_margin = 1.25

[traffic]
p_base = 0.15
n_frames = 500

[radio]
t_data_ms = 31.25

[train]
epochs = 10

[sweep]
axis = \"p_event\"
values = [0.1, 0.2]
";
        let cfg = parse_config(text).unwrap();
        let echoed = cfg.to_toml();
        let reloaded = parse_config(&echoed).unwrap();
        assert_eq!(cfg, reloaded);
    }

    #[test]
    fn master_seed_propagates_to_modules() {
        let cfg = parse_config("seed = 99").unwrap();
        assert_eq!(cfg.traffic.seed, 99);
        assert_eq!(cfg.train.seed, 99 ^ 0x5eed);
    }

    #[test]
    fn default_n_event_derived_from_p_event() {
        let cfg = parse_config("[scenario]\np_event = 0.2\n").unwrap();
        assert_eq!(cfg.scenario.n_event, (18.0f64 * 0.2).round());
    }

    #[test]
    fn sweep_axis_validated() {
        let err = parse_config("[sweep]\naxis = \"bogus\"\nvalues = [1.0]\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("sweep.axis"), "{err}");
    }
}
