//! Prints predictor quality and savings statistics for the default
//! configuration: ten seeded pipeline runs plus the four stock sweeps.
//! Used to sanity-check the shipped defaults; not part of the test suite.

use eei_bma_core::experiment::{comparative_summary, default_sweeps, run_pipeline, run_sweep};
use eei_bma_core::RunConfig;
use std::time::Instant;

fn main() {
    let base = RunConfig::default();

    println!("== pipeline over 10 seeds ==");
    for seed in 0..10u64 {
        let mut cfg = base.clone();
        cfg.traffic.seed = 1000 + seed;
        cfg.train.seed = 2000 + seed;
        let t0 = Instant::now();
        match run_pipeline(&cfg) {
            Ok(out) => {
                let e = &out.eval;
                println!(
                    "seed {seed}: rmse={:.4} p_true={:.4} p_pred={:.4} [{:.4},{:.4}] \
                     loss {:.4}->{:.4}  ({:.2?})",
                    e.rmse,
                    e.p_true_global,
                    e.p_pred_global,
                    e.p_pred_min,
                    e.p_pred_max,
                    out.loss_history.first().unwrap(),
                    out.loss_history.last().unwrap(),
                    t0.elapsed()
                );
            }
            Err(err) => println!("seed {seed}: ERROR {err}"),
        }
    }

    println!("\n== default sweeps ==");
    for spec in default_sweeps(&base) {
        let t0 = Instant::now();
        let sweep = run_sweep(&spec).expect("sweep runs");
        let summary = comparative_summary(&sweep).expect("summary");
        println!(
            "axis {} ({:.2?}) medians: best vs tdma {:.1}% eatdma {:.1}% bma {:.1}%",
            summary.axis,
            t0.elapsed(),
            summary.median.best_vs_tdma,
            summary.median.best_vs_eatdma,
            summary.median.best_vs_bma,
        );
        for (p, e) in sweep.ok_points() {
            println!(
                "  value {:>7.3}: tdma {:.4} eatdma {:.4} bma {:.4} | poor {:.4} true {:.4} \
                 best {:.4} | eta {:.3} | poor<tdma {} poor<bma {} | gap {:.3}",
                p.value,
                e.e_tdma,
                e.e_eatdma,
                e.e_bma,
                e.e_eei_poor,
                e.e_eei_true,
                e.e_eei_best,
                e.eta_true,
                e.e_eei_poor < e.e_tdma,
                e.e_eei_poor < e.e_bma,
                (e.e_eei_true - e.e_eei_best) / e.e_eei_true,
            );
        }
        for (v, err) in &summary.errors {
            println!("  value {v}: ERROR {err}");
        }
    }
}
