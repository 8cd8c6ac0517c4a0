//! Stochastic event-trace generation and supervised dataset construction.
//!
//! A trace is an `N x T` binary bitmap: entry `(i, t)` is 1 when node `i`
//! generated an event in frame `t`. Events are baseline Bernoulli draws;
//! burst windows elevate a contiguous block of nodes to `burst_prob` for
//! `burst_duration` consecutive frames, and every bit is independently
//! flipped with probability `flip_noise` afterwards. Overlapping bursts
//! merge: a node is elevated while inside any active window.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficConfig {
    /// Number of nodes in the cluster.
    pub n_nodes: usize,
    /// Number of frames to simulate.
    pub n_frames: usize,
    /// Baseline per-node event probability.
    pub p_base: f64,
    /// Probability per frame that a new burst window starts.
    pub burst_rate: f64,
    /// Per-node event probability inside an active burst window.
    pub burst_prob: f64,
    /// Length of a burst window in frames.
    pub burst_duration: usize,
    /// Size of the contiguous node block participating in a burst.
    pub burst_group_size: usize,
    /// Probability of flipping each bit after the Bernoulli draw.
    pub flip_noise: f64,
    /// Seed for the ChaCha8 generator driving all draws.
    pub seed: u64,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        TrafficConfig {
            n_nodes: 20,
            n_frames: 2000,
            p_base: 0.1,
            burst_rate: 0.03,
            burst_prob: 0.25,
            burst_duration: 4,
            burst_group_size: 4,
            flip_noise: 0.01,
            seed: 42,
        }
    }
}

fn check_prob(field: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(Error::config(
            field,
            format!("probability {value} outside [0, 1]"),
        ));
    }
    Ok(())
}

impl TrafficConfig {
    pub fn validate(&self) -> Result<()> {
        check_prob("traffic.p_base", self.p_base)?;
        check_prob("traffic.burst_rate", self.burst_rate)?;
        check_prob("traffic.burst_prob", self.burst_prob)?;
        check_prob("traffic.flip_noise", self.flip_noise)?;
        if self.p_base > self.burst_prob {
            return Err(Error::config(
                "traffic.burst_prob",
                format!(
                    "burst_prob {} must be >= p_base {}",
                    self.burst_prob, self.p_base
                ),
            ));
        }
        if self.n_nodes == 0 {
            return Err(Error::config("traffic.n_nodes", "must be >= 1"));
        }
        if self.n_frames == 0 {
            return Err(Error::config("traffic.n_frames", "must be >= 1"));
        }
        if self.burst_duration == 0 {
            return Err(Error::config("traffic.burst_duration", "must be >= 1"));
        }
        if self.burst_group_size == 0 || self.burst_group_size > self.n_nodes {
            return Err(Error::config(
                "traffic.burst_group_size",
                format!(
                    "group size {} must be in [1, n_nodes = {}]",
                    self.burst_group_size, self.n_nodes
                ),
            ));
        }
        Ok(())
    }
}

/// Ground-truth binary event bitmap, one row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTrace {
    bits: Vec<u8>,
    pub config: TrafficConfig,
}

impl EventTrace {
    pub fn n_nodes(&self) -> usize {
        self.config.n_nodes
    }

    pub fn n_frames(&self) -> usize {
        self.config.n_frames
    }

    /// Event bit of node `i` at frame `t`.
    pub fn get(&self, node: usize, frame: usize) -> u8 {
        self.bits[node * self.config.n_frames + frame]
    }

    /// All frames of one node.
    pub fn row(&self, node: usize) -> &[u8] {
        let t = self.config.n_frames;
        &self.bits[node * t..(node + 1) * t]
    }

    /// Fraction of ones over the whole bitmap.
    pub fn mean_rate(&self) -> f64 {
        let ones: usize = self.bits.iter().map(|&b| b as usize).sum();
        ones as f64 / self.bits.len() as f64
    }

    /// Mean event rate of a single node.
    pub fn node_mean(&self, node: usize) -> f64 {
        let ones: usize = self.row(node).iter().map(|&b| b as usize).sum();
        ones as f64 / self.config.n_frames as f64
    }

    /// CSV export: header `node_id,f1,...,fT`, one row per node, 0/1 entries.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        write!(out, "node_id")?;
        for t in 1..=self.config.n_frames {
            write!(out, ",f{t}")?;
        }
        writeln!(out)?;
        for i in 0..self.config.n_nodes {
            write!(out, "{i}")?;
            for &b in self.row(i) {
                write!(out, ",{b}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Nodes elevated in the current frame given the active burst windows.
/// Windows are `(end_frame_exclusive, first_node)` pairs.
fn elevated(node: usize, bursts: &[(usize, usize)], group: usize) -> bool {
    bursts
        .iter()
        .any(|&(_, start)| node >= start && node < start + group)
}

/// Draws the full event bitmap. Per frame the draw order is fixed: one
/// burst-start draw (plus a block-placement draw when a burst starts),
/// then per node one event draw and one flip draw, so identical seeds
/// give bit-identical traces.
pub fn generate_trace(config: &TrafficConfig) -> Result<EventTrace> {
    config.validate()?;
    let n = config.n_nodes;
    let t_total = config.n_frames;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut bits = vec![0u8; n * t_total];
    let mut bursts: Vec<(usize, usize)> = Vec::new();

    for t in 0..t_total {
        bursts.retain(|&(end, _)| end > t);
        if rng.gen_bool(config.burst_rate) {
            let start = rng.gen_range(0..=n - config.burst_group_size);
            bursts.push((t + config.burst_duration, start));
        }
        for i in 0..n {
            let p = if elevated(i, &bursts, config.burst_group_size) {
                config.burst_prob
            } else {
                config.p_base
            };
            let mut bit = rng.gen_bool(p);
            if rng.gen_bool(config.flip_noise) {
                bit = !bit;
            }
            bits[i * t_total + t] = bit as u8;
        }
    }

    Ok(EventTrace {
        bits,
        config: config.clone(),
    })
}

/// One supervised pair: flattened `L`-frame history and next-frame targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Length `N*L`, frame-major node-minor: frame `t-L` nodes `0..N`,
    /// then frame `t-L+1`, and so on.
    pub input: Vec<f64>,
    /// Length `N`, the frame-`t` column of the trace.
    pub target: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub seq_len: usize,
    pub n_nodes: usize,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.n_nodes * self.seq_len
    }
}

/// Builds the `T - L` supervised samples of a trace. Sample `k` predicts
/// frame `L + k` from the `L` preceding frames of all nodes.
pub fn build_dataset(trace: &EventTrace, seq_len: usize) -> Result<Dataset> {
    let n = trace.n_nodes();
    let t_total = trace.n_frames();
    if seq_len == 0 {
        return Err(Error::config("seq_len", "must be >= 1"));
    }
    if seq_len >= t_total {
        return Err(Error::config(
            "seq_len",
            format!("seq_len {seq_len} must be < n_frames {t_total}"),
        ));
    }
    let mut samples = Vec::with_capacity(t_total - seq_len);
    for t in seq_len..t_total {
        let mut input = Vec::with_capacity(n * seq_len);
        for f in t - seq_len..t {
            for i in 0..n {
                input.push(trace.get(i, f) as f64);
            }
        }
        let target = (0..n).map(|i| trace.get(i, t) as f64).collect();
        samples.push(Sample { input, target });
    }
    Ok(Dataset {
        samples,
        seq_len,
        n_nodes: n,
    })
}

/// Seeded shuffle-and-split: the first `floor(ratio * len)` shuffled
/// samples become the training set, the remainder the test set.
pub fn split_dataset(dataset: &Dataset, train_ratio: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if dataset.is_empty() {
        return Err(Error::Empty("dataset".into()));
    }
    if !(train_ratio > 0.0 && train_ratio < 1.0) {
        return Err(Error::config(
            "train_ratio",
            format!("ratio {train_ratio} outside (0, 1)"),
        ));
    }
    let mut indices: Vec<usize> = (0..dataset.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let n_train = (train_ratio * dataset.len() as f64).floor() as usize;
    let pick = |idx: &[usize]| Dataset {
        samples: idx.iter().map(|&k| dataset.samples[k].clone()).collect(),
        seq_len: dataset.seq_len,
        n_nodes: dataset.n_nodes,
    };
    Ok((pick(&indices[..n_train]), pick(&indices[n_train..])))
}
