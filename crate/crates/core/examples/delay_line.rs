// Hand-set weights that turn a stack into a pure delay of `d` samples.
// The lower layers pass their input through and the top layer, with
// dilation `d`, copies only its delayed tap.
//
// ```text
// cargo run --example delay_line
// ```

use dilated_stream::{
    fast_teacher_forced, naive_step, Activation, LayerWeights, Model, ModelConfig,
};

fn delay_model(d: usize) -> Result<Model, dilated_stream::Error> {
    let layers = d.trailing_zeros() as usize + 1;
    let layer = |taps: [f64; 2]| LayerWeights {
        in_channels: 1,
        out_channels: 1,
        taps: vec![vec![taps[0]], vec![taps[1]]],
        bias: vec![0.0],
    };
    let mut weights = vec![layer([1.0, 0.0]); layers];
    weights[layers - 1] = layer([0.0, 1.0]);
    let config = ModelConfig {
        layers_per_block: layers,
        activation: Activation::Linear,
        ..ModelConfig::default()
    };
    Model::new(config, weights)
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let input: Vec<f64> = (1..=12).map(f64::from).collect();
    println!("input    {input:?}");
    for d in [1, 4, 8] {
        let model = delay_model(d)?;
        let fast = fast_teacher_forced(&model, &input);
        let naive: Vec<f64> = (1..=input.len()).map(|n| naive_step(&model, &input[..n]).0).collect();
        println!("d = {d:<4} {fast:?}");
        assert_eq!(fast, naive);
        for (t, &y) in fast.iter().enumerate() {
            assert_eq!(y, if t >= d { input[t - d] } else { 0.0 });
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
