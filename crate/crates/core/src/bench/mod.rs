//! Exact work accounting and the wall-clock comparison of the two
//! generators across network depth.

mod records;

pub use records::{emit_records, read_records, write_records, HEADER as CSV_HEADER};

use std::time::{Duration, Instant};

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fast::{fast_step, init_state};
use crate::kernel::MacCount;
use crate::model::{build_model, receptive_field, Activation, ModelConfig};
use crate::naive::{naive_step, plan_cost, plan_dependencies};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fast,
    Naive,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Fast => "fast",
            Mode::Naive => "naive",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fast" => Ok(Mode::Fast),
            "naive" => Ok(Mode::Naive),
            other => Err(format!("unknown mode `{other}` (expected fast or naive)")),
        }
    }
}

/// Per-step work of one generator, without running it.
///
/// For the naive generator this is the steady-state cost, i.e. once the
/// history is at least one receptive field long.
pub fn count_macs(config: &ModelConfig, mode: Mode) -> Result<MacCount> {
    config.validate()?;
    Ok(match mode {
        Mode::Fast => MacCount {
            multiply_accumulates: (0..config.total_layers()).map(|l| config.node_macs(l)).sum(),
            node_evaluations: config.total_layers() as u64,
        },
        Mode::Naive => {
            let newest = receptive_field(config)? - 1;
            plan_cost(config, &plan_dependencies(config, newest))
        }
    })
}

/// One benchmark row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub mode: Mode,
    pub blocks: usize,
    pub layers: usize,
    pub filter_width: usize,
    pub dilation_base: usize,
    pub channels: usize,
    pub steps: usize,
    pub repeats: usize,
    pub mean_s_per_sample: f64,
    pub std_s_per_sample: f64,
    pub macs_per_step: u64,
    pub node_evals_per_step: u64,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    /// Generated samples per timed run.
    pub steps: usize,
    pub repeats: usize,
    /// Untimed runs before measuring.
    pub warmup: usize,
    /// Abandon a config x mode once its timed runs exceed this much time.
    pub budget: Option<Duration>,
    pub modes: Vec<Mode>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            steps: 64,
            repeats: 100,
            warmup: 3,
            budget: None,
            modes: vec![Mode::Naive, Mode::Fast],
        }
    }
}

/// A config x mode pair abandoned because it ran over the time budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedRun {
    pub config: ModelConfig,
    pub mode: Mode,
    pub completed_repeats: usize,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    /// Sorted by `(layers, mode)`.
    pub records: Vec<TimingRecord>,
    pub skipped: Vec<SkippedRun>,
}

/// The timing grid: `blocks` blocks of `L` layers for each `L` in `layers`,
/// width 2, base 2, `channels` hidden channels, tanh.
pub fn default_grid(
    blocks: usize,
    layers: std::ops::RangeInclusive<usize>,
    channels: usize,
) -> Vec<ModelConfig> {
    layers
        .map(|l| ModelConfig {
            blocks,
            layers_per_block: l,
            filter_width: 2,
            dilation_base: 2,
            hidden_channels: channels,
            activation: Activation::Tanh,
            init_seed: 0x5eed ^ l as u64,
        })
        .collect()
}

/// Mean and population standard deviation.
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Times free-running generation for every config and mode.
///
/// Each run starts from a primer one receptive field long so the naive
/// generator is measured at its steady-state cost; priming is not timed.
/// Both modes produce the same samples. Runs are serial on the calling
/// thread.
pub fn run_benchmark(grid: &[ModelConfig], options: &BenchOptions) -> Result<BenchReport> {
    assert!(options.steps >= 1, "steps must be at least 1");
    assert!(options.repeats >= 1, "repeats must be at least 1");
    let mut report = BenchReport::default();
    for config in grid {
        let model = build_model(*config)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.init_seed.wrapping_add(1));
        let dist = Uniform::new_inclusive(-0.5, 0.5);
        let primer: Vec<f64> = (0..model.receptive_field())
            .map(|_| dist.sample(&mut rng))
            .collect();
        let (&first, warm) = primer.split_last().expect("receptive field is at least 2");

        for &mode in &options.modes {
            let counts = count_macs(config, mode)?;
            let run_once: Box<dyn Fn() -> Duration> = match mode {
                Mode::Fast => {
                    let mut primed = init_state(&model);
                    for &x in warm {
                        fast_step(&mut primed, x, &model)?;
                    }
                    let model = &model;
                    Box::new(move || {
                        let mut state = primed.clone();
                        let start = Instant::now();
                        let mut x = first;
                        for _ in 0..options.steps {
                            x = fast_step(&mut state, x, model).expect("steady state");
                        }
                        let elapsed = start.elapsed();
                        std::hint::black_box(x);
                        elapsed
                    })
                }
                Mode::Naive => {
                    let model = &model;
                    let primer = &primer;
                    Box::new(move || {
                        let mut history = Vec::with_capacity(primer.len() + options.steps);
                        history.extend_from_slice(primer);
                        let start = Instant::now();
                        for _ in 0..options.steps {
                            let (y, _) = naive_step(model, &history);
                            history.push(y);
                        }
                        let elapsed = start.elapsed();
                        std::hint::black_box(&history);
                        elapsed
                    })
                }
            };

            for _ in 0..options.warmup {
                run_once();
            }
            let mut per_sample = Vec::with_capacity(options.repeats);
            let mut spent = Duration::ZERO;
            let mut over_budget = false;
            for _ in 0..options.repeats {
                let elapsed = run_once();
                spent += elapsed;
                per_sample.push(elapsed.as_secs_f64() / options.steps as f64);
                if options.budget.is_some_and(|b| spent > b) && per_sample.len() < options.repeats {
                    over_budget = true;
                    break;
                }
            }
            if over_budget {
                log::warn!(
                    "{mode} L={} over budget after {} repeats, skipped",
                    config.layers_per_block,
                    per_sample.len()
                );
                report.skipped.push(SkippedRun {
                    config: *config,
                    mode,
                    completed_repeats: per_sample.len(),
                });
                continue;
            }
            let (mean, std) = mean_std(&per_sample);
            report.records.push(TimingRecord {
                mode,
                blocks: config.blocks,
                layers: config.layers_per_block,
                filter_width: config.filter_width,
                dilation_base: config.dilation_base,
                channels: config.hidden_channels,
                steps: options.steps,
                repeats: options.repeats,
                mean_s_per_sample: mean,
                std_s_per_sample: std,
                macs_per_step: counts.multiply_accumulates,
                node_evals_per_step: counts.node_evaluations,
            });
        }
    }
    report.records.sort_by_key(|r| (r.layers, r.mode));
    Ok(report)
}

/// `fast / naive` mean time per sample for each depth where both ran.
pub fn speed_ratios(records: &[TimingRecord]) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    for fast in records.iter().filter(|r| r.mode == Mode::Fast) {
        if let Some(naive) = records.iter().find(|r| {
            r.mode == Mode::Naive && r.layers == fast.layers && r.blocks == fast.blocks
        }) {
            out.push((fast.layers, fast.mean_s_per_sample / naive.mean_s_per_sample));
        }
    }
    out
}
