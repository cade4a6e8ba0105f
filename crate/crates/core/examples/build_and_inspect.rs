// Builds a seeded model, prints its geometry, and round-trips it through
// the JSON model file.
//
// ```text
// cargo run --example build_and_inspect
// ```

use dilated_stream::{build_model, load_model, save_model, Activation, ModelConfig};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let config = ModelConfig {
        blocks: 2,
        layers_per_block: 4,
        filter_width: 2,
        dilation_base: 2,
        hidden_channels: 8,
        activation: Activation::Tanh,
        init_seed: 42,
    };
    let model = build_model(config)?;
    println!("layers:           {}", model.num_layers());
    println!("dilations:        {:?}", config.dilations());
    println!("receptive field:  {}", model.receptive_field());
    println!("queue capacities: {:?}", config.queue_capacities());
    for (l, layer) in model.layers().iter().enumerate() {
        println!(
            "  layer {l}: {} -> {} channels, dilation {}",
            layer.in_channels,
            layer.out_channels,
            model.dilation(l)
        );
    }

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("model.json");
    save_model(&model, &path)?;
    let loaded = load_model(&path)?;
    assert_eq!(loaded, model, "weights survive the file bit for bit");
    println!("saved and reloaded {} bytes", std::fs::metadata(&path)?.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
