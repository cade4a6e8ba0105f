//! Cached generator. Each layer owns a FIFO [`ConvQueue`] holding the
//! inputs it consumed over its last `(w - 1) * dilation` steps (the
//! recurrent states). A step is:
//!
//! 1. **pop**: read each layer's past tap inputs from its queue and drop the
//!    oldest entry;
//! 2. **compute**: evaluate the stack once, bottom to top, like one step of
//!    a multi-layer RNN;
//! 3. **push**: append each layer's current input to its queue.
//!
//! Per-sample cost is one node per layer, independent of the step index.

mod queue;

pub use queue::ConvQueue;

use crate::error::{Error, QueueFault, Result};
use crate::kernel::{eval_node, MacCount};
use crate::model::Model;

/// All convolution queues of one generation session.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationState {
    queues: Vec<ConvQueue>,
    step_index: u64,
}

impl GenerationState {
    pub fn queues(&self) -> &[ConvQueue] {
        &self.queues
    }

    /// Samples generated so far.
    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    /// Total number of cached scalars across all queues.
    pub fn cached_scalars(&self) -> usize {
        self.queues.iter().map(|q| q.len() * q.channels()).sum()
    }

    /// True when every queue sits at capacity (the between-steps invariant).
    pub fn is_steady(&self) -> bool {
        self.queues.iter().all(ConvQueue::is_full)
    }
}

/// Past tap inputs read during the pop phase.
///
/// For layer `l` the entry holds `w - 1` vectors, for taps `k = 1..w` in
/// that order, flattened.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrentInputs {
    per_layer: Vec<Vec<f64>>,
}

impl RecurrentInputs {
    pub fn layer(&self, layer: usize) -> &[f64] {
        &self.per_layer[layer]
    }

    /// Input of `layer` seen by tap `k` (`1 <= k < w`).
    pub fn tap(&self, layer: usize, k: usize, channels: usize) -> &[f64] {
        &self.per_layer[layer][(k - 1) * channels..k * channels]
    }

    pub fn num_layers(&self) -> usize {
        self.per_layer.len()
    }
}

/// Result of evaluating the stack once.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput {
    pub output: f64,
    /// `new_states[l]` is the input layer `l` consumed at tap 0 this step.
    pub new_states: Vec<Vec<f64>>,
    pub macs: MacCount,
}

/// Fresh session state: every queue filled to capacity with zeros.
pub fn init_state(model: &Model) -> GenerationState {
    let config = model.config();
    let queues = (0..model.num_layers())
        .map(|l| ConvQueue::zeroed(config.filter_width, config.dilation(l), config.in_channels(l)))
        .collect();
    GenerationState {
        queues,
        step_index: 0,
    }
}

/// Reads every layer's recurrent inputs and removes one entry per queue.
/// Fails without touching any queue if one is not full.
pub fn pop_phase(state: &mut GenerationState) -> Result<RecurrentInputs> {
    if let Some(layer) = state.queues.iter().position(|q| !q.is_full()) {
        return Err(Error::Queue {
            layer,
            fault: QueueFault::PopWithoutPush,
        });
    }
    let per_layer = state
        .queues
        .iter_mut()
        .enumerate()
        .map(|(layer, q)| {
            let mut taps = Vec::with_capacity(q.capacity() / q.dilation() * q.channels());
            q.pop_taps(&mut taps)
                .map_err(|fault| Error::Queue { layer, fault })?;
            Ok(taps)
        })
        .collect::<Result<_>>()?;
    Ok(RecurrentInputs { per_layer })
}

/// Evaluates the stack for one time step from the current input sample and
/// the popped recurrent inputs.
pub fn compute_step(model: &Model, input: f64, rec: &RecurrentInputs) -> Result<StepOutput> {
    let width = model.config().filter_width;
    if rec.num_layers() != model.num_layers() {
        return Err(Error::DimensionMismatch(format!(
            "{} recurrent layers for a {}-layer model",
            rec.num_layers(),
            model.num_layers()
        )));
    }
    let mut macs = MacCount::default();
    let mut new_states = Vec::with_capacity(model.num_layers());
    let mut current = vec![input];
    for (l, layer) in model.layers().iter().enumerate() {
        let cin = layer.in_channels;
        if rec.layer(l).len() != (width - 1) * cin {
            return Err(Error::DimensionMismatch(format!(
                "layer {l} expects {} recurrent values, got {}",
                (width - 1) * cin,
                rec.layer(l).len()
            )));
        }
        let mut out = vec![0.0; layer.out_channels];
        let mut taps: Vec<&[f64]> = Vec::with_capacity(width);
        taps.push(&current);
        taps.extend((1..width).map(|k| rec.tap(l, k, cin)));
        macs.record(eval_node(layer, model.activation(), &taps, &mut out));
        new_states.push(std::mem::replace(&mut current, out));
    }
    Ok(StepOutput {
        output: current[0],
        new_states,
        macs,
    })
}

/// Appends each layer's new recurrent state to its queue. Fails without
/// touching any queue if one is already full or a state has the wrong size.
pub fn push_phase(state: &mut GenerationState, new_states: &[Vec<f64>]) -> Result<()> {
    if new_states.len() != state.queues.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} new states for {} queues",
            new_states.len(),
            state.queues.len()
        )));
    }
    for (layer, (q, s)) in state.queues.iter().zip(new_states).enumerate() {
        if q.is_full() {
            return Err(Error::Queue {
                layer,
                fault: QueueFault::PushWithoutPop,
            });
        }
        if s.len() != q.channels() {
            return Err(Error::DimensionMismatch(format!(
                "layer {layer} state has {} channels, queue holds {}",
                s.len(),
                q.channels()
            )));
        }
    }
    for (q, s) in state.queues.iter_mut().zip(new_states) {
        q.push_back(s).expect("checked above");
    }
    state.step_index += 1;
    Ok(())
}

/// One full pop / compute / push cycle, returning the output and its cost.
pub fn fast_step_counted(
    state: &mut GenerationState,
    input: f64,
    model: &Model,
) -> Result<(f64, MacCount)> {
    let rec = pop_phase(state)?;
    let step = compute_step(model, input, &rec)?;
    push_phase(state, &step.new_states)?;
    Ok((step.output, step.macs))
}

pub fn fast_step(state: &mut GenerationState, input: f64, model: &Model) -> Result<f64> {
    fast_step_counted(state, input, model).map(|(y, _)| y)
}

/// Free-running generation. Primer samples go through the same step
/// machinery; the output at the last primer position is the first generated
/// sample, and every output is fed back as the next input.
///
/// An empty primer behaves like a single zero sample.
pub fn fast_generate(model: &Model, primer: &[f64], steps: usize) -> Vec<f64> {
    fast_generate_counted(model, primer, steps).0
}

/// [`fast_generate`] plus the summed counters of the generated steps
/// (priming steps excluded).
pub fn fast_generate_counted(model: &Model, primer: &[f64], steps: usize) -> (Vec<f64>, MacCount) {
    let mut total = MacCount::default();
    if steps == 0 {
        return (Vec::new(), total);
    }
    let (warm, last) = match primer.split_last() {
        Some((last, warm)) => (warm, *last),
        None => (&[][..], 0.0),
    };
    let mut state = init_state(model);
    for &x in warm {
        fast_step(&mut state, x, model).expect("session state is steady between steps");
    }
    let mut generated = Vec::with_capacity(steps);
    let mut x = last;
    for _ in 0..steps {
        let (y, counts) =
            fast_step_counted(&mut state, x, model).expect("session state is steady between steps");
        total += counts;
        generated.push(y);
        x = y;
    }
    (generated, total)
}

/// Teacher-forced run: feeds `inputs` one by one and collects every output.
pub fn fast_teacher_forced(model: &Model, inputs: &[f64]) -> Vec<f64> {
    let mut state = init_state(model);
    inputs
        .iter()
        .map(|&x| fast_step(&mut state, x, model).expect("session state is steady between steps"))
        .collect()
}
