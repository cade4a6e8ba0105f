//! Full-sequence (parallel-in-time) dilated causal convolution. This is the
//! ground truth the two generators are checked against.

use crate::error::{Error, Result};
use crate::kernel::eval_node;
use crate::model::{Activation, LayerWeights, Model};

/// A sequence of equally sized channel vectors, stored time-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSequence {
    channels: usize,
    values: Vec<f64>,
    /// Time index of the first entry.
    pub start_index: i64,
}

impl SampleSequence {
    /// Wraps a time-major buffer of `values.len() / channels` vectors.
    pub fn new(channels: usize, values: Vec<f64>) -> Result<Self> {
        if channels == 0 || !values.len().is_multiple_of(channels) {
            return Err(Error::DimensionMismatch(format!(
                "{} values do not split into {channels}-channel vectors",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sample sequence".into()));
        }
        Ok(Self {
            channels,
            values,
            start_index: 0,
        })
    }

    pub fn scalar(values: &[f64]) -> Result<Self> {
        Self::new(1, values.to_vec())
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.channels
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, t: usize) -> &[f64] {
        &self.values[t * self.channels..(t + 1) * self.channels]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// `output[t] = act(bias + sum_k taps[k] . input[t - k*dilation])`, with
/// inputs before the start of the sequence taken as zero vectors.
pub fn causal_dilated_conv(
    input: &SampleSequence,
    weights: &LayerWeights,
    activation: Activation,
    dilation: usize,
) -> Result<SampleSequence> {
    if input.channels() != weights.in_channels {
        return Err(Error::DimensionMismatch(format!(
            "input has {} channels, layer expects {}",
            input.channels(),
            weights.in_channels
        )));
    }
    let zeros = vec![0.0; weights.in_channels];
    let cout = weights.out_channels;
    let mut out = vec![0.0; input.len() * cout];
    let mut taps: Vec<&[f64]> = Vec::with_capacity(weights.width());
    for t in 0..input.len() {
        taps.clear();
        for k in 0..weights.width() {
            let back = k * dilation;
            taps.push(if back <= t { input.at(t - back) } else { &zeros });
        }
        eval_node(weights, activation, &taps, &mut out[t * cout..(t + 1) * cout]);
    }
    Ok(SampleSequence {
        channels: cout,
        values: out,
        start_index: input.start_index,
    })
}

/// Runs every layer of `model` over the whole input, bottom to top.
pub fn forward_full(model: &Model, input: &SampleSequence) -> Result<SampleSequence> {
    if input.channels() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "model input is scalar, got {} channels",
            input.channels()
        )));
    }
    let mut current = input.clone();
    for (l, layer) in model.layers().iter().enumerate() {
        current = causal_dilated_conv(&current, layer, model.activation(), model.dilation(l))?;
    }
    Ok(current)
}

/// Convenience wrapper over [`forward_full`] for scalar slices.
pub fn forward_full_scalar(model: &Model, input: &[f64]) -> Result<Vec<f64>> {
    Ok(forward_full(model, &SampleSequence::scalar(input)?)?.into_values())
}
