// Checks fast, naive and full-sequence outputs for bitwise equality over
// the whole equivalence grid.
//
// ```text
// cargo run --release --example equivalence_check
// ```

use dilated_stream::verify::{equivalence_grid, verify_model};
use dilated_stream::build_model;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let grid = equivalence_grid();
    let mut failures = 0;
    for config in &grid {
        let model = build_model(*config)?;
        let report = verify_model(&model, 64, 0.0, 1);
        if !report.passed() {
            failures += 1;
            println!("MISMATCH {config:?}");
            for c in &report.comparisons {
                println!("  {}: max |dev| {:e}", c.name, c.max_abs_deviation);
            }
        }
    }
    println!("{} configs, {} mismatches", grid.len(), failures);
    if failures > 0 {
        return Err(format!("{failures} configs disagree").into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
