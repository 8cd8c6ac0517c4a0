//! Deterministic simulator and analytical evaluator for prediction-assisted
//! duty-cycled MAC protocols in clustered sensor networks.
//!
//! The crate is organized around the stages of one experiment:
//!
//! 1. [`traffic`] generates a correlated binary event trace (baseline
//!    Bernoulli arrivals, temporal burst windows over contiguous node
//!    blocks, bit-flip noise) and turns it into supervised datasets.
//! 2. [`predictor`] trains a one-hidden-layer feed-forward network on
//!    bitmap history and reports per-node probability estimates.
//! 3. [`energy`] evaluates closed-form expected energies for TDMA,
//!    EA-TDMA, BMA and the three EEI-BMA prediction variants.
//! 4. [`experiment`] chains the stages end to end and runs parameter
//!    sweeps, emitting CSV/JSON records.
//! 5. [`config`] loads and resolves the TOML run configuration.
//!
//! Every stochastic operation takes an explicit 64-bit seed and uses
//! ChaCha8 as its generator, so identical inputs produce bit-identical
//! outputs, including across parallel sweep evaluation.

pub mod config;
pub mod energy;
pub mod error;
pub mod experiment;
pub mod predictor;
pub mod traffic;

pub use config::{load_config, parse_config, RunConfig};
pub use energy::{
    activation_levels, bma_energy, eatdma_energy, eei_bma_energy, full_report,
    full_report_with_bma, tdma_energy, ActivationLevels, EnergyReport, RadioParams,
    ScenarioParams,
};
pub use error::{Error, Result};
pub use experiment::{
    comparative_summary, default_sweeps, run_pipeline, run_sweep, PipelineOutput,
    SavingsSummary, SweepAxis, SweepResult, SweepSpec,
};
pub use predictor::{
    bce_loss, evaluate, forward, gradient, init_model, train, EvalReport, PredictorModel,
    TrainConfig,
};
pub use traffic::{build_dataset, generate_trace, split_dataset, Dataset, EventTrace, Sample,
    TrafficConfig};
