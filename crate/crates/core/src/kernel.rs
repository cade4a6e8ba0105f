//! The single-node convolution kernel shared by the oracle and both
//! generators. All three paths evaluate a node through [`eval_node`], so
//! their results agree bit for bit in 64-bit arithmetic.

use crate::model::{Activation, LayerWeights};

/// Evaluates one output vector of `layer`:
/// `out = act(sum_k taps[k] . inputs[k] + bias)`.
///
/// `inputs[k]` is the layer input `k * dilation` steps back (a zero vector
/// for times before the start of the sequence). Accumulation order is fixed:
/// taps ascending, then input channels ascending, then bias, then the
/// activation. Returns the number of multiply-accumulates performed.
#[inline]
pub fn eval_node(
    layer: &LayerWeights,
    activation: Activation,
    inputs: &[&[f64]],
    out: &mut [f64],
) -> u64 {
    let cin = layer.in_channels;
    debug_assert_eq!(inputs.len(), layer.taps.len());
    debug_assert_eq!(out.len(), layer.out_channels);
    for (o, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (tap, x) in layer.taps.iter().zip(inputs) {
            let row = &tap[o * cin..(o + 1) * cin];
            for (w, v) in row.iter().zip(x.iter()) {
                acc += w * v;
            }
        }
        acc += layer.bias[o];
        *slot = activation.apply(acc);
    }
    (layer.taps.len() * cin * layer.out_channels) as u64
}

/// Instrumentation counters for one generation step (or a sum of steps).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct MacCount {
    pub multiply_accumulates: u64,
    pub node_evaluations: u64,
}

impl MacCount {
    pub fn record(&mut self, macs: u64) {
        self.multiply_accumulates += macs;
        self.node_evaluations += 1;
    }
}

impl std::ops::AddAssign for MacCount {
    fn add_assign(&mut self, rhs: Self) {
        self.multiply_accumulates += rhs.multiply_accumulates;
        self.node_evaluations += rhs.node_evaluations;
    }
}
