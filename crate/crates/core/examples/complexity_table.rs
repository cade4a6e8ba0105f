// Prints per-sample work for both generators as the stack gets deeper.
//
// ```text
// cargo run --release --example complexity_table
// ```

use dilated_stream::{count_macs, receptive_field, Mode, ModelConfig};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    println!("one block, w=2, r=2, C=1");
    println!("{:>3} {:>6} {:>12} {:>12}", "L", "field", "naive nodes", "fast nodes");
    for layers in 1..=12 {
        let config = ModelConfig {
            layers_per_block: layers,
            ..ModelConfig::default()
        };
        let naive = count_macs(&config, Mode::Naive)?;
        let fast = count_macs(&config, Mode::Fast)?;
        println!(
            "{layers:>3} {:>6} {:>12} {:>12}",
            receptive_field(&config)?,
            naive.node_evaluations,
            fast.node_evaluations
        );
    }

    println!();
    println!("two blocks, w=2, r=2, C=16 (the timing grid)");
    println!("{:>3} {:>14} {:>14}", "L", "naive MACs", "fast MACs");
    for layers in 1..=10 {
        let config = ModelConfig {
            blocks: 2,
            layers_per_block: layers,
            hidden_channels: 16,
            ..ModelConfig::default()
        };
        let naive = count_macs(&config, Mode::Naive)?;
        let fast = count_macs(&config, Mode::Fast)?;
        println!(
            "{layers:>3} {:>14} {:>14}",
            naive.multiply_accumulates, fast.multiply_accumulates
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
