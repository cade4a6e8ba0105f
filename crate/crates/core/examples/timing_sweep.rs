// A small timing sweep over depth, written out as CSV. Pass a path to keep
// the file; otherwise it goes to a temporary directory.
//
// ```text
// cargo run --release --example timing_sweep -- sweep.csv
// ```

use dilated_stream::bench::{default_grid, emit_records, read_records, speed_ratios};
use dilated_stream::{run_benchmark, BenchOptions};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let grid = default_grid(2, 1..=6, 4);
    let options = BenchOptions {
        steps: 32,
        repeats: 5,
        warmup: 1,
        ..BenchOptions::default()
    };
    let report = run_benchmark(&grid, &options)?;
    println!("{:>3} {:>6} {:>14} {:>10}", "L", "mode", "s/sample", "MACs");
    for r in &report.records {
        println!(
            "{:>3} {:>6} {:>14.3e} {:>10}",
            r.layers, r.mode, r.mean_s_per_sample, r.macs_per_step
        );
    }
    for (layers, ratio) in speed_ratios(&report.records) {
        println!("L={layers}: fast/naive time ratio {ratio:.3}");
    }

    let dir = tempfile::tempdir()?;
    let path = std::env::args_os()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| dir.path().join("sweep.csv"));
    emit_records(&report.records, &path)?;
    let back = read_records(std::fs::File::open(&path)?)?;
    assert_eq!(back, report.records);
    println!("wrote {} rows to {}", back.len(), path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
