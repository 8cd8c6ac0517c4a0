//! Command-line front door: load a TOML config, run the pipeline or a
//! sweep, write CSV/JSON artifacts, or run the built-in invariant checks.

use clap::{Parser, Subcommand};
use eei_bma_core::experiment::{
    comparative_summary, run_pipeline, run_sweep, write_sweep_csv, SweepAxis, SweepSpec,
};
use eei_bma_core::{EnergyReport, Error, RunConfig};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "eei-bma", about = "Cluster MAC-protocol energy evaluator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, clap::Args)]
struct CommonOpts {
    /// TOML configuration file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed (overrides the config's `seed` and derived seeds).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one pipeline: generate, train, evaluate, price.
    Run {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run a parameter sweep and write per-point results plus a summary.
    Sweep {
        #[command(flatten)]
        common: CommonOpts,
        /// Sweep axis: p_event | n_total | n_monitoring | t_data.
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated axis values (t_data in milliseconds).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Run the invariant suite: gradient check, degenerate reductions,
    /// and variant ordering.
    Validate {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn verbosity() -> u8 {
    match std::env::var("EEI_BMA_LOG").as_deref() {
        Ok("debug") => 2,
        Ok("quiet") => 0,
        _ => 1,
    }
}

fn log(level: u8, msg: &str) {
    if verbosity() >= level {
        eprintln!("{msg}");
    }
}

fn load(common: &CommonOpts) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => eei_bma_core::load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
        cfg.traffic.seed = seed;
        cfg.train.seed = seed ^ 0x5eed;
    }
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path)?;
    f.write_all(contents.as_bytes())?;
    log(2, &format!("wrote {}", path.display()));
    Ok(())
}

fn energy_csv(report: &EnergyReport) -> String {
    format!("{}\n{}\n", EnergyReport::CSV_HEADER, report.csv_row())
}

fn cmd_run(common: &CommonOpts) -> Result<(), Error> {
    let cfg = load(common)?;
    let out = run_pipeline(&cfg)?;
    let dir = cfg.output_dir.clone();
    write_file(&dir, "resolved_config.toml", &cfg.to_toml())?;
    write_file(
        &dir,
        "eval_report.json",
        &serde_json::to_string_pretty(&out.eval).expect("report serializes"),
    )?;
    write_file(
        &dir,
        "energy_report.json",
        &serde_json::to_string_pretty(&out.energy).expect("report serializes"),
    )?;
    write_file(&dir, "energy_report.csv", &energy_csv(&out.energy))?;
    log(
        1,
        &format!(
            "p_true {:.4}  p_pred {:.4}  rmse {:.4}",
            out.eval.p_true_global, out.eval.p_pred_global, out.eval.rmse
        ),
    );
    log(
        1,
        &format!(
            "energy [J]: tdma {:.4}  eatdma {:.4}  bma {:.4}  eei(poor/true/best) \
             {:.4}/{:.4}/{:.4}  eta {:.3}",
            out.energy.e_tdma,
            out.energy.e_eatdma,
            out.energy.e_bma,
            out.energy.e_eei_poor,
            out.energy.e_eei_true,
            out.energy.e_eei_best,
            out.energy.eta_true
        ),
    );
    Ok(())
}

fn cmd_sweep(
    common: &CommonOpts,
    axis: &Option<String>,
    values: &Option<Vec<f64>>,
) -> Result<(), Error> {
    let cfg = load(common)?;
    let mut spec = match cfg.sweep_spec()? {
        Some(spec) => spec,
        None => SweepSpec {
            axis: SweepAxis::PEvent,
            values: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            retrain_per_point: None,
            base: cfg.clone(),
        },
    };
    if let Some(axis) = axis {
        spec.axis = SweepAxis::parse(axis)?;
    }
    if let Some(values) = values {
        spec.values = values.clone();
    }
    spec.validate()?;

    let sweep = run_sweep(&spec)?;
    let summary = comparative_summary(&sweep)?;

    let mut buf = Vec::new();
    write_sweep_csv(&sweep, &mut buf)?;
    let csv = String::from_utf8(buf).expect("csv is utf-8");

    let dir = cfg.output_dir.clone();
    write_file(&dir, "resolved_config.toml", &cfg.to_toml())?;
    write_file(&dir, &format!("sweep_{}.csv", sweep.axis), &csv)?;
    write_file(
        &dir,
        &format!("sweep_{}_summary.json", sweep.axis),
        &serde_json::to_string_pretty(&summary).expect("summary serializes"),
    )?;
    log(
        1,
        &format!(
            "axis {}: {} points, {} errors; median savings best vs tdma/eatdma/bma: \
             {:.1}% / {:.1}% / {:.1}%",
            summary.axis,
            summary.rows.len(),
            summary.errors.len(),
            summary.median.best_vs_tdma,
            summary.median.best_vs_eatdma,
            summary.median.best_vs_bma
        ),
    );
    Ok(())
}

fn cmd_validate(common: &CommonOpts) -> Result<(), Error> {
    use eei_bma_core::energy::{
        activation_levels, eatdma_energy, full_report_with_bma, tdma_energy,
    };
    use eei_bma_core::predictor::{bce_loss, gradient, init_model};
    use eei_bma_core::traffic::{build_dataset, generate_trace, TrafficConfig};
    use eei_bma_core::{RadioParams, ScenarioParams};

    let cfg = load(common)?;
    let mut failures = 0;
    let mut check = |name: &str, ok: bool| {
        println!("{name}: {}", if ok { "ok" } else { "FAILED" });
        if !ok {
            failures += 1;
        }
    };

    // Gradient: analytic backprop vs central finite differences over
    // every parameter of a small model on real trace samples.
    let trace = generate_trace(&TrafficConfig {
        n_nodes: 3,
        n_frames: 20,
        p_base: 0.3,
        burst_rate: 0.0,
        burst_prob: 0.3,
        burst_duration: 1,
        burst_group_size: 1,
        flip_noise: 0.0,
        seed: cfg.seed,
    })?;
    let ds = build_dataset(&trace, 2)?;
    let batch = &ds.samples[..4];
    let lambda = 1e-3;
    let step = 1e-5;
    let model = init_model(ds.input_dim(), 5, 3, cfg.seed)?;
    let analytic = gradient(&model, batch, lambda)?;
    let mut max_rel: f64 = 0.0;
    {
        let mut probe = |set: &dyn Fn(&mut eei_bma_core::PredictorModel, f64), g: f64| {
            let mut plus = model.clone();
            set(&mut plus, step);
            let mut minus = model.clone();
            set(&mut minus, -step);
            let fd = (bce_loss(&plus, batch, lambda).unwrap()
                - bce_loss(&minus, batch, lambda).unwrap())
                / (2.0 * step);
            let denom = fd.abs().max(g.abs()).max(1e-8);
            max_rel = max_rel.max((fd - g).abs() / denom);
        };
        for k in 0..model.w1.data.len() {
            probe(&|m, d| m.w1.data[k] += d, analytic.w1.data[k]);
        }
        for k in 0..model.b1.len() {
            probe(&|m, d| m.b1[k] += d, analytic.b1[k]);
        }
        for k in 0..model.w2.data.len() {
            probe(&|m, d| m.w2.data[k] += d, analytic.w2.data[k]);
        }
        for k in 0..model.b2.len() {
            probe(&|m, d| m.b2[k] += d, analytic.b2[k]);
        }
    }
    check("gradient check (rel err <= 1e-4)", max_rel <= 1e-4);

    // Degenerate reduction: no energy-check cost makes EA-TDMA exact TDMA.
    let mut radio = cfg.radio_si();
    radio.p_energycheck = 0.0;
    let scenario = cfg.scenario.clone();
    check(
        "eatdma reduces to tdma when P_e*T_e = 0",
        eatdma_energy(&radio, &scenario)? == tdma_energy(&radio, &scenario)?,
    );

    // Linearity: doubling the frame count doubles BMA/EEI totals.
    let radio = cfg.radio_si();
    let mut doubled = scenario.clone();
    doubled.n_frames *= 2;
    let act = activation_levels(&scenario, 0.1, 0.11, 0.09, 0.13)?;
    let act2 = activation_levels(&doubled, 0.1, 0.11, 0.09, 0.13)?;
    let r1 = full_report_with_bma(&radio, &scenario, &act, act.n_w)?;
    let r2 = full_report_with_bma(&radio, &doubled, &act2, act2.n_w)?;
    check(
        "bma/eei energies linear in frame count",
        (r2.e_bma - 2.0 * r1.e_bma).abs() < 1e-12
            && (r2.e_eei_true - 2.0 * r1.e_eei_true).abs() < 1e-12,
    );

    // Variant ordering under ordered activation levels.
    check(
        "variant ordering best <= true <= poor",
        r1.e_eei_best <= r1.e_eei_true && r1.e_eei_true <= r1.e_eei_poor,
    );

    // Scenario bounds hold for a default full report.
    let scen_default = ScenarioParams::default();
    let radio_default = RadioParams::default();
    let act = activation_levels(&scen_default, 0.1, 0.1, 0.1, 0.1)?;
    let r = full_report_with_bma(&radio_default, &scen_default, &act, act.n_w)?;
    check(
        "energies positive and finite",
        [r.e_tdma, r.e_eatdma, r.e_bma, r.e_eei_poor, r.e_eei_true, r.e_eei_best]
            .iter()
            .all(|e| e.is_finite() && *e > 0.0),
    );

    if failures > 0 {
        return Err(Error::Numeric(format!("{failures} validation check(s) failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { common } => cmd_run(common),
        Command::Sweep {
            common,
            axis,
            values,
        } => cmd_sweep(common, axis, values),
        Command::Validate { common } => cmd_validate(common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::Config { .. } | Error::Parse(_))) => {
            eprintln!("configuration error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
