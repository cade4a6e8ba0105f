// Drives the cached generator one phase at a time, printing the queues
// between steps, then runs it free.
//
// ```text
// cargo run --example fast_generation
// ```

use dilated_stream::fast::fast_generate_counted;
use dilated_stream::{
    build_model, compute_step, init_state, pop_phase, push_phase, Activation, GenerationState,
    ModelConfig,
};

fn show(state: &GenerationState) {
    for (l, q) in state.queues().iter().enumerate() {
        let entries: Vec<String> = q.iter().map(|v| format!("{:+.3}", v[0])).collect();
        println!("    queue {l} (d={}): [{}]", q.dilation(), entries.join(", "));
    }
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let model = build_model(ModelConfig {
        layers_per_block: 3,
        activation: Activation::Tanh,
        init_seed: 9,
        ..ModelConfig::default()
    })?;
    let mut state = init_state(&model);
    println!("initial state, {} cached scalars", state.cached_scalars());
    show(&state);

    let mut x = 0.5;
    for step in 0..4 {
        let rec = pop_phase(&mut state)?;
        let out = compute_step(&model, x, &rec)?;
        push_phase(&mut state, &out.new_states)?;
        println!("step {step}: input {x:+.4} -> output {:+.4}", out.output);
        show(&state);
        x = out.output;
    }

    // Popping twice in a row is a protocol error and leaves the state alone.
    let before = state.clone();
    pop_phase(&mut state)?;
    let mut popped = state.clone();
    let err = pop_phase(&mut popped).unwrap_err();
    println!("second pop: {err}");
    assert_eq!(popped, state);
    assert_ne!(state, before);

    let (samples, counts) = fast_generate_counted(&model, &[0.5], 1000);
    println!(
        "1000 free-run samples, last {:+.6}, {} MACs per sample",
        samples[999],
        counts.multiply_accumulates / 1000
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
