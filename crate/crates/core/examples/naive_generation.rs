// Generates with the stateless baseline and shows how its per-sample work
// grows with depth.
//
// ```text
// cargo run --release --example naive_generation
// ```

use dilated_stream::naive::naive_generate_counted;
use dilated_stream::{build_model, naive_step, ModelConfig};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let model = build_model(ModelConfig {
        layers_per_block: 6,
        init_seed: 11,
        ..ModelConfig::default()
    })?;
    let (samples, counts) = naive_generate_counted(&model, &[0.3, -0.1], 16);
    println!("16 samples: {samples:.4?}");
    println!(
        "{} node evaluations, {} MACs in total",
        counts.node_evaluations, counts.multiply_accumulates
    );

    // Once the history covers the receptive field, every step costs 2^L - 1 nodes.
    println!("{:>3} {:>8}", "L", "nodes");
    for layers in 1..=10 {
        let model = build_model(ModelConfig {
            layers_per_block: layers,
            ..ModelConfig::default()
        })?;
        let history = vec![0.1; model.receptive_field()];
        let (_, step) = naive_step(&model, &history);
        println!("{layers:>3} {:>8}", step.node_evaluations);
        assert_eq!(step.node_evaluations, (1 << layers) - 1);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
