//! Baseline generator: every output sample is recomputed from the raw
//! sample history, with no state carried between steps.
//!
//! For the output at the newest history position, the planner walks the
//! stack top-down collecting the set of time indices each layer must
//! produce (deduplicated within the step), then evaluates those nodes
//! bottom-up. Nodes at negative times are never evaluated; they read as
//! zero vectors, the same convention as the oracle's causal padding.

use crate::kernel::{eval_node, MacCount};
use crate::model::{Model, ModelConfig};

/// Per-layer sorted, deduplicated time indices needed for the output at
/// `newest`. Entry `l` lists the times at which layer `l` must be evaluated.
pub(crate) fn plan_dependencies(config: &ModelConfig, newest: usize) -> Vec<Vec<usize>> {
    let n = config.total_layers();
    let w = config.filter_width;
    let mut plan = vec![Vec::new(); n];
    plan[n - 1].push(newest);
    for l in (1..n).rev() {
        let d = config.dilation(l);
        let mut below: Vec<usize> = plan[l]
            .iter()
            .flat_map(|&s| (0..w).filter_map(move |k| s.checked_sub(k * d)))
            .collect();
        below.sort_unstable();
        below.dedup();
        plan[l - 1] = below;
    }
    plan
}

/// Counters the planner predicts for `plan`, without evaluating anything.
pub(crate) fn plan_cost(config: &ModelConfig, plan: &[Vec<usize>]) -> MacCount {
    plan.iter()
        .enumerate()
        .fold(MacCount::default(), |mut acc, (l, times)| {
            acc.node_evaluations += times.len() as u64;
            acc.multiply_accumulates += times.len() as u64 * config.node_macs(l);
            acc
        })
}

/// Computes the model output whose newest input is the last history sample.
///
/// An empty history behaves like a single zero sample. Returns the output
/// and the exact work done.
pub fn naive_step(model: &Model, history: &[f64]) -> (f64, MacCount) {
    const ZERO: [f64; 1] = [0.0];
    let history = if history.is_empty() { &ZERO[..] } else { history };
    let config = model.config();
    let plan = plan_dependencies(config, history.len() - 1);
    let width = config.filter_width;
    let activation = model.activation();

    let mut counts = MacCount::default();
    let mut below: Vec<f64> = Vec::new();
    let mut below_times: &[usize] = &[];

    for (l, times) in plan.iter().enumerate() {
        let layer = model.layer(l);
        let d = model.dilation(l);
        let (cin, cout) = (layer.in_channels, layer.out_channels);
        let zeros = vec![0.0; cin];
        let mut values = vec![0.0; times.len() * cout];
        for (slot, &s) in times.iter().enumerate() {
            let mut taps: Vec<&[f64]> = Vec::with_capacity(width);
            for k in 0..width {
                let input = match s.checked_sub(k * d) {
                    None => &zeros[..],
                    Some(t) if l == 0 => &history[t..t + 1],
                    Some(t) => {
                        let idx = below_times
                            .binary_search(&t)
                            .expect("dependency plan covers every non-negative tap");
                        &below[idx * cin..(idx + 1) * cin]
                    }
                };
                taps.push(input);
            }
            let macs = eval_node(layer, activation, &taps, &mut values[slot * cout..(slot + 1) * cout]);
            counts.record(macs);
        }
        below = values;
        below_times = times;
    }
    (below[0], counts)
}

/// Free-running generation: the primer seeds the history, then each output
/// is appended and fed back. Returns only the `steps` generated samples.
pub fn naive_generate(model: &Model, primer: &[f64], steps: usize) -> Vec<f64> {
    naive_generate_counted(model, primer, steps).0
}

/// [`naive_generate`] plus the summed counters of every step.
pub fn naive_generate_counted(model: &Model, primer: &[f64], steps: usize) -> (Vec<f64>, MacCount) {
    let mut history = if primer.is_empty() {
        vec![0.0]
    } else {
        primer.to_vec()
    };
    history.reserve(steps);
    let mut total = MacCount::default();
    let mut generated = Vec::with_capacity(steps);
    for _ in 0..steps {
        let (sample, counts) = naive_step(model, &history);
        total += counts;
        generated.push(sample);
        history.push(sample);
    }
    (generated, total)
}
