//! Streaming generation for stacks of dilated causal convolution layers.
//!
//! Two generators produce the same samples:
//!
//! * [`naive`] recomputes every node the current output depends on from the
//!   raw history, which costs `O(2^L)` node evaluations per sample for a
//!   width-2, base-2 stack of `L` layers;
//! * [`fast`] caches each layer's past inputs in a FIFO queue sized
//!   `(w - 1) * dilation`, so a sample costs one node per layer.
//!
//! [`oracle::forward_full`] is the full-sequence convolution both are checked
//! against. All three evaluate nodes through one kernel with a fixed
//! accumulation order, so they agree bit for bit.
//!
//! ```
//! use dilated_stream::{build_model, fast_generate, naive_generate, ModelConfig};
//!
//! let model = build_model(ModelConfig { layers_per_block: 5, ..ModelConfig::default() }).unwrap();
//! let fast = fast_generate(&model, &[0.5], 32);
//! assert_eq!(fast, naive_generate(&model, &[0.5], 32));
//! ```

pub mod bench;
pub mod cli;
pub mod error;
pub mod fast;
pub mod kernel;
pub mod model;
pub mod naive;
pub mod oracle;
pub mod samples;
pub mod verify;

pub use bench::{count_macs, run_benchmark, BenchOptions, Mode, TimingRecord};
pub use error::{Error, QueueFault, Result};
pub use fast::{
    compute_step, fast_generate, fast_step, fast_teacher_forced, init_state, pop_phase,
    push_phase, ConvQueue, GenerationState, RecurrentInputs,
};
pub use kernel::MacCount;
pub use model::{
    build_model, load_model, receptive_field, save_model, Activation, LayerWeights, Model,
    ModelConfig,
};
pub use naive::{naive_generate, naive_step};
pub use oracle::{causal_dilated_conv, forward_full, SampleSequence};
