//! Network architecture: hyperparameters, per-layer weights and the seeded
//! construction used everywhere else in the crate.
//!
//! A model is a stack of `blocks * layers_per_block` dilated causal
//! convolution layers. Inside a block, layer `l` uses dilation `r^l`; the
//! schedule restarts at 1 at each block boundary. The bottom layer reads a
//! scalar sample stream and the top layer emits one scalar per step.

mod file;

pub use file::{load_model, read_model, save_model, write_model};

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Linear,
    Tanh,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Linear => x,
            Activation::Tanh => x.tanh(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Activation::Linear => "linear",
            Activation::Tanh => "tanh",
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Activation::Linear),
            "tanh" => Ok(Activation::Tanh),
            other => Err(format!("unknown activation `{other}` (expected linear or tanh)")),
        }
    }
}

/// Architecture hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelConfig {
    pub blocks: usize,
    pub layers_per_block: usize,
    /// Number of taps per filter.
    pub filter_width: usize,
    pub dilation_base: usize,
    pub hidden_channels: usize,
    pub activation: Activation,
    pub init_seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            blocks: 1,
            layers_per_block: 4,
            filter_width: 2,
            dilation_base: 2,
            hidden_channels: 1,
            activation: Activation::Tanh,
            init_seed: 0,
        }
    }
}

impl ModelConfig {
    /// Checks the field constraints. Also rejects configs whose receptive
    /// field would not fit in a `usize`.
    pub fn validate(&self) -> Result<()> {
        if self.blocks == 0 {
            return Err(Error::InvalidConfig("blocks must be positive".into()));
        }
        if self.layers_per_block == 0 {
            return Err(Error::InvalidConfig("layers_per_block must be positive".into()));
        }
        if self.filter_width < 2 {
            return Err(Error::InvalidConfig(format!(
                "filter_width must be at least 2, got {}",
                self.filter_width
            )));
        }
        if self.dilation_base < 2 {
            return Err(Error::InvalidConfig(format!(
                "dilation_base must be at least 2, got {}",
                self.dilation_base
            )));
        }
        if self.hidden_channels == 0 {
            return Err(Error::InvalidConfig("hidden_channels must be positive".into()));
        }
        if checked_receptive_field(self).is_none() {
            return Err(Error::InvalidConfig(
                "receptive field overflows the address space".into(),
            ));
        }
        Ok(())
    }

    pub fn total_layers(&self) -> usize {
        self.blocks * self.layers_per_block
    }

    /// Dilation of layer `layer` (0-indexed over the whole stack).
    pub fn dilation(&self, layer: usize) -> usize {
        let within_block = (layer % self.layers_per_block) as u32;
        self.dilation_base.pow(within_block)
    }

    pub fn dilations(&self) -> Vec<usize> {
        (0..self.total_layers()).map(|l| self.dilation(l)).collect()
    }

    pub fn in_channels(&self, layer: usize) -> usize {
        if layer == 0 {
            1
        } else {
            self.hidden_channels
        }
    }

    pub fn out_channels(&self, layer: usize) -> usize {
        if layer + 1 == self.total_layers() {
            1
        } else {
            self.hidden_channels
        }
    }

    /// FIFO capacity of the queue feeding `layer`: `(w - 1) * dilation`.
    pub fn queue_capacity(&self, layer: usize) -> usize {
        (self.filter_width - 1) * self.dilation(layer)
    }

    pub fn queue_capacities(&self) -> Vec<usize> {
        (0..self.total_layers()).map(|l| self.queue_capacity(l)).collect()
    }

    /// Multiply-accumulates needed to evaluate one node of `layer`.
    pub fn node_macs(&self, layer: usize) -> u64 {
        (self.filter_width * self.in_channels(layer) * self.out_channels(layer)) as u64
    }
}

fn checked_receptive_field(config: &ModelConfig) -> Option<usize> {
    let r = config.dilation_base;
    let span = r.checked_pow(u32::try_from(config.layers_per_block).ok()?)?;
    let per_block = (span - 1) / (r - 1);
    per_block
        .checked_mul(config.filter_width - 1)?
        .checked_mul(config.blocks)?
        .checked_add(1)
}

/// Number of most recent input samples that can influence the current
/// output: `1 + blocks * (w - 1) * (r^L - 1) / (r - 1)`.
pub fn receptive_field(config: &ModelConfig) -> Result<usize> {
    config.validate()?;
    Ok(checked_receptive_field(config).expect("validated"))
}

/// Filter taps and bias for one layer.
///
/// `taps[k]` is the row-major `out_channels x in_channels` matrix applied to
/// the input `k * dilation` steps in the past; `k = 0` is the current time.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerWeights {
    pub in_channels: usize,
    pub out_channels: usize,
    pub taps: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl LayerWeights {
    pub fn zeros(width: usize, in_channels: usize, out_channels: usize) -> Self {
        Self {
            in_channels,
            out_channels,
            taps: vec![vec![0.0; in_channels * out_channels]; width],
            bias: vec![0.0; out_channels],
        }
    }

    pub fn width(&self) -> usize {
        self.taps.len()
    }

    #[inline]
    pub fn tap(&self, k: usize, row: usize, col: usize) -> f64 {
        self.taps[k][row * self.in_channels + col]
    }

    fn check(&self, layer: usize) -> Result<()> {
        let cells = self.in_channels * self.out_channels;
        for (k, tap) in self.taps.iter().enumerate() {
            if tap.len() != cells {
                return Err(Error::DimensionMismatch(format!(
                    "layer {layer} tap {k} has {} entries, expected {}x{}",
                    tap.len(),
                    self.out_channels,
                    self.in_channels
                )));
            }
            if tap.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("layer {layer} tap {k}")));
            }
        }
        if self.bias.len() != self.out_channels {
            return Err(Error::DimensionMismatch(format!(
                "layer {layer} bias has {} entries, expected {}",
                self.bias.len(),
                self.out_channels
            )));
        }
        if self.bias.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("layer {layer} bias")));
        }
        Ok(())
    }
}

/// A validated network: config plus one [`LayerWeights`] per layer, bottom
/// to top. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    config: ModelConfig,
    layers: Vec<LayerWeights>,
}

impl Model {
    /// Assembles a model from explicit weights, checking every shape and
    /// finiteness invariant.
    pub fn new(config: ModelConfig, layers: Vec<LayerWeights>) -> Result<Self> {
        config.validate()?;
        if layers.len() != config.total_layers() {
            return Err(Error::DimensionMismatch(format!(
                "config declares {} layers ({} blocks x {}), found {}",
                config.total_layers(),
                config.blocks,
                config.layers_per_block,
                layers.len()
            )));
        }
        for (l, layer) in layers.iter().enumerate() {
            let (want_in, want_out) = (config.in_channels(l), config.out_channels(l));
            if layer.in_channels != want_in || layer.out_channels != want_out {
                return Err(Error::DimensionMismatch(format!(
                    "layer {l} is {}x{}, expected {want_out}x{want_in}",
                    layer.out_channels, layer.in_channels
                )));
            }
            if layer.width() != config.filter_width {
                return Err(Error::DimensionMismatch(format!(
                    "layer {l} has {} taps, expected {}",
                    layer.width(),
                    config.filter_width
                )));
            }
            layer.check(l)?;
        }
        Ok(Self { config, layers })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn layers(&self) -> &[LayerWeights] {
        &self.layers
    }

    pub fn layer(&self, index: usize) -> &LayerWeights {
        &self.layers[index]
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn activation(&self) -> Activation {
        self.config.activation
    }

    pub fn dilation(&self, layer: usize) -> usize {
        self.config.dilation(layer)
    }

    pub fn receptive_field(&self) -> usize {
        checked_receptive_field(&self.config).expect("validated at construction")
    }

    pub fn into_parts(self) -> (ModelConfig, Vec<LayerWeights>) {
        (self.config, self.layers)
    }
}

/// Builds a model with weights drawn from `U[-0.5, 0.5]` using a ChaCha8
/// stream seeded by `config.init_seed`. Draw order: layer, tap, row, column,
/// then the layer's bias.
pub fn build_model(config: ModelConfig) -> Result<Model> {
    config.validate()?;
    if config.dilation_base < config.filter_width {
        log::warn!(
            "dilation base {} is smaller than filter width {}; taps of adjacent layers overlap \
             and the (w-1)*r^L space bound no longer describes the queues tightly",
            config.dilation_base,
            config.filter_width
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.init_seed);
    let dist = Uniform::new_inclusive(-0.5, 0.5);
    let layers = (0..config.total_layers())
        .map(|l| {
            let (cin, cout) = (config.in_channels(l), config.out_channels(l));
            let taps = (0..config.filter_width)
                .map(|_| (0..cin * cout).map(|_| dist.sample(&mut rng)).collect())
                .collect();
            let bias = (0..cout).map(|_| dist.sample(&mut rng)).collect();
            LayerWeights {
                in_channels: cin,
                out_channels: cout,
                taps,
                bias,
            }
        })
        .collect();
    Model::new(config, layers)
}

/// A model with every tap and bias set to zero.
pub fn zero_model(config: ModelConfig) -> Result<Model> {
    config.validate()?;
    let layers = (0..config.total_layers())
        .map(|l| {
            LayerWeights::zeros(
                config.filter_width,
                config.in_channels(l),
                config.out_channels(l),
            )
        })
        .collect();
    Model::new(config, layers)
}
