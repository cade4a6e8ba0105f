// Runs the full-sequence reference convolution: one layer by hand, then a
// whole stack.
//
// ```text
// cargo run --example oracle_forward
// ```

use dilated_stream::oracle::forward_full_scalar;
use dilated_stream::{
    build_model, causal_dilated_conv, Activation, LayerWeights, ModelConfig, SampleSequence,
};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    // y[t] = x[t] + 0.5 * x[t - 2], zeros before the start.
    let layer = LayerWeights {
        in_channels: 1,
        out_channels: 1,
        taps: vec![vec![1.0], vec![0.5]],
        bias: vec![0.0],
    };
    let x = SampleSequence::scalar(&[1.0, 2.0, 3.0, 4.0, 5.0])?;
    let y = causal_dilated_conv(&x, &layer, Activation::Linear, 2)?;
    println!("x = {:?}", x.values());
    println!("y = {:?}", y.values());
    assert_eq!(y.values(), &[1.0, 2.0, 3.5, 5.0, 6.5]);

    let model = build_model(ModelConfig {
        layers_per_block: 5,
        init_seed: 3,
        ..ModelConfig::default()
    })?;
    let input: Vec<f64> = (0..12).map(|t| (t as f64 * 0.5).sin()).collect();
    let output = forward_full_scalar(&model, &input)?;
    println!("stack of {} layers:", model.num_layers());
    for (t, (a, b)) in input.iter().zip(&output).enumerate() {
        println!("  t={t:>2}  x={a:+.4}  y={b:+.6}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
