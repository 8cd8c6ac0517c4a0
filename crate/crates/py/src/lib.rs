//! Python bindings: thin wrappers over the core crate. Traces come back
//! as nested lists, pipeline and sweep results as JSON strings so Python
//! callers can `json.loads` them without a schema dependency.

use eei_bma_core::energy::{
    activation_levels, bma_energy, eatdma_energy, eei_bma_energy, tdma_energy, RadioParams,
    ScenarioParams,
};
use eei_bma_core::experiment;
use eei_bma_core::traffic::{self, TrafficConfig};
use eei_bma_core::Error;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn to_py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn radio_from_milli(values: [f64; 8]) -> RadioParams {
    RadioParams::from_milli(
        values[0], values[1], values[2], values[3], values[4], values[5], values[6], values[7],
    )
}

/// Generates an event trace; returns an N x T list of 0/1 ints.
#[pyfunction]
#[pyo3(signature = (n_nodes, n_frames, p_base, burst_rate, burst_prob, burst_duration,
                    burst_group_size, flip_noise, seed))]
#[allow(clippy::too_many_arguments)]
fn generate_trace(
    n_nodes: usize,
    n_frames: usize,
    p_base: f64,
    burst_rate: f64,
    burst_prob: f64,
    burst_duration: usize,
    burst_group_size: usize,
    flip_noise: f64,
    seed: u64,
) -> PyResult<Vec<Vec<u8>>> {
    let trace = traffic::generate_trace(&TrafficConfig {
        n_nodes,
        n_frames,
        p_base,
        burst_rate,
        burst_prob,
        burst_duration,
        burst_group_size,
        flip_noise,
        seed,
    })
    .map_err(to_py_err)?;
    Ok((0..n_nodes).map(|i| trace.row(i).to_vec()).collect())
}

fn scenario(
    n_total: usize,
    n_monitoring: usize,
    n_event: f64,
    n_frames: usize,
) -> ScenarioParams {
    ScenarioParams {
        n_total,
        n_monitoring,
        n_event,
        n_frames,
        p_event: 0.1,
    }
}

/// TDMA total energy in joules. `radio_milli` is the eight radio
/// constants in mW/ms order: Pt, Pr, Pi, Pe, Tc, Td, Tch, Te.
#[pyfunction]
fn tdma_energy_j(
    radio_milli: [f64; 8],
    n_total: usize,
    n_monitoring: usize,
    n_event: f64,
    n_frames: usize,
) -> PyResult<f64> {
    tdma_energy(
        &radio_from_milli(radio_milli),
        &scenario(n_total, n_monitoring, n_event, n_frames),
    )
    .map_err(to_py_err)
}

/// Energy-aware TDMA total energy in joules.
#[pyfunction]
fn eatdma_energy_j(
    radio_milli: [f64; 8],
    n_total: usize,
    n_monitoring: usize,
    n_event: f64,
    n_frames: usize,
) -> PyResult<f64> {
    eatdma_energy(
        &radio_from_milli(radio_milli),
        &scenario(n_total, n_monitoring, n_event, n_frames),
    )
    .map_err(to_py_err)
}

/// Bitmap-assisted MAC total energy in joules for a window of `n_w`.
#[pyfunction]
fn bma_energy_j(
    radio_milli: [f64; 8],
    n_total: usize,
    n_monitoring: usize,
    n_w: f64,
    n_frames: usize,
) -> PyResult<f64> {
    bma_energy(
        &radio_from_milli(radio_milli),
        &scenario(n_total, n_monitoring, 0.0, n_frames),
        n_w,
    )
    .map_err(to_py_err)
}

/// Prediction-scheduled bitmap MAC total energy in joules.
#[pyfunction]
fn eei_bma_energy_j(
    radio_milli: [f64; 8],
    n_total: usize,
    n_monitoring: usize,
    n_active: f64,
    n_frames: usize,
) -> PyResult<f64> {
    eei_bma_energy(
        &radio_from_milli(radio_milli),
        &scenario(n_total, n_monitoring, 0.0, n_frames),
        n_active,
    )
    .map_err(to_py_err)
}

/// Activation counts (n_p, n_t, n_b, n_w) for a cluster and probability
/// estimates.
#[pyfunction]
fn activation_counts(
    n_total: usize,
    n_monitoring: usize,
    p_true: f64,
    p_pred_mean: f64,
    p_pred_min: f64,
    p_pred_max: f64,
) -> PyResult<(f64, f64, f64, f64)> {
    let a = activation_levels(
        &scenario(n_total, n_monitoring, 0.0, 1),
        p_true,
        p_pred_mean,
        p_pred_min,
        p_pred_max,
    )
    .map_err(to_py_err)?;
    Ok((a.n_p, a.n_t, a.n_b, a.n_w))
}

/// Runs the full pipeline from a TOML config string (may be empty for
/// defaults); returns the evaluation, energies, and loss history as JSON.
#[pyfunction]
fn run_pipeline(config_toml: &str) -> PyResult<String> {
    let cfg = eei_bma_core::parse_config(config_toml).map_err(to_py_err)?;
    let out = experiment::run_pipeline(&cfg).map_err(to_py_err)?;
    serde_json::to_string(&out).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Runs the sweep described by the config's `[sweep]` section; returns
/// per-point results plus the savings summary as JSON.
#[pyfunction]
fn run_sweep(config_toml: &str) -> PyResult<String> {
    let cfg = eei_bma_core::parse_config(config_toml).map_err(to_py_err)?;
    let spec = cfg
        .sweep_spec()
        .map_err(to_py_err)?
        .ok_or_else(|| PyValueError::new_err("config has no [sweep] section"))?;
    let sweep = experiment::run_sweep(&spec).map_err(to_py_err)?;
    let summary = experiment::comparative_summary(&sweep).map_err(to_py_err)?;
    serde_json::to_string(&serde_json::json!({ "sweep": sweep, "summary": summary }))
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn eei_bma(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(generate_trace, m)?)?;
    m.add_function(wrap_pyfunction!(tdma_energy_j, m)?)?;
    m.add_function(wrap_pyfunction!(eatdma_energy_j, m)?)?;
    m.add_function(wrap_pyfunction!(bma_energy_j, m)?)?;
    m.add_function(wrap_pyfunction!(eei_bma_energy_j, m)?)?;
    m.add_function(wrap_pyfunction!(activation_counts, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
