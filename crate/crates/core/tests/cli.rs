use std::path::Path;
use std::process::{Command, Output};

use dilated_stream::bench::{read_records, CSV_HEADER};
use dilated_stream::model::zero_model;
use dilated_stream::{load_model, save_model, Model, ModelConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dilated-stream"))
}

fn run(args: &[&str], paths: &[(&str, &Path)]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    for (flag, path) in paths {
        cmd.arg(flag).arg(path);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn init_small(dir: &Path, name: &str, seed: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let o = run(
        &["init-model", "--layers", "3", "--blocks", "2", "--width", "3", "--channels", "4", "--seed", seed],
        &[("--out", &path)],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn init_model_reports_field_and_queues() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = run(
        &["init-model", "--layers", "4", "--blocks", "1", "--width", "2", "--base", "2", "--channels", "1", "--seed", "7"],
        &[("--out", &out)],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("receptive field: 16"), "{text}");
    assert!(text.contains("queue capacities: 1,2,4,8"), "{text}");
    let model = load_model(&out).unwrap();
    assert_eq!(model.config().init_seed, 7);
}

#[test]
fn init_model_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = init_small(dir.path(), "a.json", "3");
    let b = init_small(dir.path(), "b.json", "3");
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = run(&["init-model", "--width", "1"], &[("--out", &out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(run(&[], &[]).status.code(), Some(2));
    assert_eq!(run(&["generate", "--steps", "3"], &[]).status.code(), Some(2));
    let missing = dir.path().join("nope.json");
    let o = run(&["generate", "--steps", "3"], &[("--model", &missing), ("--out", &out)]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--steps", "3"], &[]);
    assert_eq!(o.status.code(), Some(2), "verify needs --model or --random-grid");
}

#[test]
fn generate_modes_agree_and_inputs_are_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let model = init_small(dir.path(), "m.json", "5");
    let primer = dir.path().join("primer.txt");
    std::fs::write(&primer, "0.25\n-0.5\n0.125\n").unwrap();
    let model_bytes = std::fs::read(&model).unwrap();

    let mut files = Vec::new();
    for mode in ["fast", "naive"] {
        let out = dir.path().join(format!("{mode}.txt"));
        let o = run(
            &["generate", "--steps", "50", "--mode", mode],
            &[("--model", &model), ("--primer", &primer), ("--out", &out)],
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains("steps/s") && err.contains("MACs/step"), "{err}");
        files.push(std::fs::read(out).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(String::from_utf8_lossy(&files[0]).lines().count(), 50);
    assert_eq!(std::fs::read(&model).unwrap(), model_bytes);
    assert_eq!(std::fs::read_to_string(&primer).unwrap(), "0.25\n-0.5\n0.125\n");
}

#[test]
fn generate_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let model = init_small(dir.path(), "m.json", "5");
    let out = dir.path().join("out.txt");
    let o = run(&["generate", "--steps", "0"], &[("--model", &model), ("--out", &out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), b"");

    let zeros = dir.path().join("zero.json");
    save_model(&zero_model(ModelConfig::default()).unwrap(), &zeros).unwrap();
    let o = run(&["generate", "--steps", "5"], &[("--model", &zeros), ("--out", &out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "0.0\n".repeat(5));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0.1\nnot-a-number\n").unwrap();
    let o = run(
        &["generate", "--steps", "5"],
        &[("--model", &model), ("--primer", &bad), ("--out", &out)],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));
}

#[test]
fn verify_random_grid_passes_exactly() {
    let o = run(&["verify", "--random-grid", "--steps", "48"], &[]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("144 model(s)"));
    assert!(!text.contains("MISMATCH"));
    assert!(text.lines().filter(|l| l.contains("max |dev| = 0e0")).count() >= 3 * 144);
}

#[test]
fn verify_single_step() {
    let dir = tempfile::tempdir().unwrap();
    let model = init_small(dir.path(), "m.json", "1");
    let o = run(&["verify", "--steps", "1"], &[("--model", &model)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

/// Generates a reference with one model, then verifies a copy with a single
/// weight nudged against it.
#[test]
fn verify_detects_a_perturbed_weight() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = init_small(dir.path(), "m.json", "8");
    let reference = dir.path().join("ref.txt");
    let signal = dilated_stream::verify::random_signal(32, 1);
    let model = load_model(&model_path).unwrap();
    dilated_stream::samples::write_samples(
        &dilated_stream::fast_generate(&model, &signal[..8], 32),
        &reference,
    )
    .unwrap();

    let o = run(&["verify", "--steps", "32"], &[("--model", &model_path), ("--reference", &reference)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let (config, mut layers) = model.into_parts();
    layers[2].taps[1][3] += 1e-9;
    let perturbed = dir.path().join("p.json");
    save_model(&Model::new(config, layers).unwrap(), &perturbed).unwrap();
    let o = run(&["verify", "--steps", "32"], &[("--model", &perturbed), ("--reference", &reference)]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn bench_single_layer_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let o = run(
        &["bench", "--layers-from", "1", "--layers-to", "1", "--repeats", "3", "--steps", "8"],
        &[("--out", &out)],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    let records = read_records(text.as_bytes()).unwrap();
    assert_eq!(records.len(), 2);
    assert!(records.iter().all(|r| r.blocks == 2 && r.repeats == 3 && r.layers == 1));
    let (a, b) = (records[0].macs_per_step, records[1].macs_per_step);
    assert!(a.max(b) <= 2 * a.min(b), "{a} vs {b}");
    assert!(stdout(&o).contains("fast/naive"));
}

#[test]
fn bench_rejects_inverted_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let o = run(&["bench", "--layers-from", "5", "--layers-to", "2"], &[("--out", &out)]);
    assert_eq!(o.status.code(), Some(2));
}
