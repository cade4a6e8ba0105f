//! Exit criteria. Each test prints one `[PASS]` / `[FAIL]` line; run with
//! `cargo test --release --test acceptance -- --nocapture --test-threads 1`
//! to see them in order.

use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use dilated_stream::bench::{default_grid, read_records, write_records, BenchOptions};
use dilated_stream::fast::{fast_step_counted, fast_teacher_forced};
use dilated_stream::model::{read_model, write_model};
use dilated_stream::verify::{compare, equivalence_grid, random_signal};
use dilated_stream::{
    build_model, causal_dilated_conv, count_macs, fast_generate, fast_step, forward_full,
    init_state, naive_generate, naive_step, pop_phase, push_phase, run_benchmark, Activation,
    Error, LayerWeights, Mode, Model, ModelConfig, QueueFault, SampleSequence,
};

/// Criteria run one at a time so the timing criterion is not disturbed.
static SERIAL: Mutex<()> = Mutex::new(());

/// Runs one criterion under the serial lock and prints its verdict line.
/// The body returns a detail string on success and panics on failure.
fn criterion(id: &str, title: &str, body: impl FnOnce() -> String) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(detail) => println!("[PASS] {id} {title}: {detail}"),
        Err(cause) => {
            let msg = cause
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| cause.downcast_ref::<&str>().copied())
                .unwrap_or("panic");
            println!("[FAIL] {id} {title}: {msg}");
            panic::resume_unwind(cause);
        }
    }
}

/// Nodes the output depends on, found by walking the dependency graph from
/// the output node and collecting distinct `(layer, time)` pairs.
fn brute_force_node_count(config: &ModelConfig, newest: i64) -> u64 {
    let mut seen = HashSet::new();
    let mut stack = vec![(config.total_layers() - 1, newest)];
    while let Some((layer, t)) = stack.pop() {
        if t < 0 || !seen.insert((layer, t)) {
            continue;
        }
        if layer > 0 {
            let d = config.dilation(layer) as i64;
            for k in 0..config.filter_width as i64 {
                stack.push((layer - 1, t - k * d));
            }
        }
    }
    seen.len() as u64
}

#[test]
fn ac1_equivalence_suite() {
    criterion(
        "AC1",
        "fast == full (teacher-forced) and fast == naive (free-run), bit-exact",
        || {
            let start = Instant::now();
            let grid = equivalence_grid();
            assert!(grid.len() >= 50);
            let steps = 64;
            let mut failures = Vec::new();
            for (i, config) in grid.iter().enumerate() {
                let model = build_model(*config).unwrap();
                let inputs = random_signal(steps, 77 + i as u64);
                let oracle = forward_full(&model, &SampleSequence::scalar(&inputs).unwrap())
                    .unwrap()
                    .into_values();
                let teacher = compare("tf", &fast_teacher_forced(&model, &inputs), &oracle, 0.0);
                let primer = &inputs[..4];
                let free = compare(
                    "free",
                    &fast_generate(&model, primer, steps),
                    &naive_generate(&model, primer, steps),
                    0.0,
                );
                if !(teacher.passed && free.passed) {
                    failures.push((i, teacher.max_abs_deviation, free.max_abs_deviation));
                }
            }
            let elapsed = start.elapsed();
            assert!(failures.is_empty(), "mismatching configs: {failures:?}");
            assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
            format!("{} configs, 0 mismatches, {elapsed:.2?}", grid.len())
        },
    );
}

#[test]
fn ac2_complexity_counts() {
    criterion("AC2", "per-step nodes 2^L - 1 (naive) vs L (fast)", || {
        let mut rows = Vec::new();
        for layers in 1..=10usize {
            let config = ModelConfig {
                blocks: 1,
                layers_per_block: layers,
                filter_width: 2,
                dilation_base: 2,
                hidden_channels: 1,
                activation: Activation::Tanh,
                init_seed: layers as u64,
            };
            let model = build_model(config).unwrap();
            let history = random_signal(model.receptive_field() + 3, 5);

            let brute = brute_force_node_count(&config, (history.len() - 1) as i64);
            let counted_naive = count_macs(&config, Mode::Naive).unwrap().node_evaluations;
            let live_naive = naive_step(&model, &history).1.node_evaluations;

            let counted_fast = count_macs(&config, Mode::Fast).unwrap().node_evaluations;
            let mut state = init_state(&model);
            let live_fast: Vec<u64> = history
                .iter()
                .map(|&x| fast_step_counted(&mut state, x, &model).unwrap().1.node_evaluations)
                .collect();

            let want_naive = (1u64 << layers) - 1;
            let want_fast = layers as u64;
            assert_eq!(brute, want_naive, "brute force, L = {layers}");
            assert_eq!(counted_naive, want_naive, "count_macs naive, L = {layers}");
            assert_eq!(live_naive, want_naive, "live naive, L = {layers}");
            assert_eq!(counted_fast, want_fast, "count_macs fast, L = {layers}");
            assert!(live_fast.iter().all(|&n| n == want_fast), "live fast, L = {layers}");
            rows.push(format!("L={layers} {live_naive}/{want_fast}"));
        }
        rows.join(", ")
    });
}

#[test]
fn ac3_space_accounting() {
    criterion(
        "AC3",
        "cached scalars = sum (w-1)*d*in_ch, and 2^L - 1 for one width-2 block",
        || {
            for layers in 1..=10usize {
                let config = ModelConfig {
                    layers_per_block: layers,
                    ..ModelConfig::default()
                };
                let state = init_state(&build_model(config).unwrap());
                assert_eq!(state.cached_scalars(), (1usize << layers) - 1, "L = {layers}");
            }
            let mut checked = 0;
            for blocks in 1..=3 {
                for layers in 1..=5 {
                    for w in [2, 3, 4] {
                        for c in [1, 3] {
                            let config = ModelConfig {
                                blocks,
                                layers_per_block: layers,
                                filter_width: w,
                                dilation_base: 3,
                                hidden_channels: c,
                                ..ModelConfig::default()
                            };
                            let model = build_model(config).unwrap();
                            let want: usize = (0..model.num_layers())
                                .map(|l| (w - 1) * config.dilation(l) * config.in_channels(l))
                                .sum();
                            let mut state = init_state(&model);
                            assert_eq!(state.cached_scalars(), want, "{config:?}");
                            for x in [0.1, 0.2, 0.3] {
                                fast_step(&mut state, x, &model).unwrap();
                            }
                            assert_eq!(state.cached_scalars(), want, "{config:?}");
                            checked += 1;
                        }
                    }
                }
            }
            format!("L = 1..10 plus {checked} mixed configs")
        },
    );
}

#[test]
fn ac4_queue_invariants() {
    criterion(
        "AC4",
        "queues full between steps over 10k steps, bad pop/push rejected",
        || {
            let start = Instant::now();
            let config = ModelConfig {
                blocks: 2,
                layers_per_block: 6,
                hidden_channels: 4,
                init_seed: 4,
                ..ModelConfig::default()
            };
            let model = build_model(config).unwrap();
            let caps = config.queue_capacities();
            let mut state = init_state(&model);
            let mut x = 0.5;
            for step in 0..10_000 {
                x = fast_step(&mut state, x, &model).unwrap();
                for (q, &cap) in state.queues().iter().zip(&caps) {
                    assert_eq!(q.len(), cap, "step {step}");
                }
            }
            assert_eq!(state.step_index(), 10_000);

            let before = state.clone();
            let pushed = push_phase(&mut state, &vec![vec![0.0]; model.num_layers()]);
            assert!(matches!(
                pushed,
                Err(Error::Queue { fault: QueueFault::PushWithoutPop, .. })
            ));
            assert_eq!(state, before, "rejected push must leave the state untouched");
            pop_phase(&mut state).unwrap();
            let mid = state.clone();
            assert!(matches!(
                pop_phase(&mut state),
                Err(Error::Queue { fault: QueueFault::PopWithoutPush, .. })
            ));
            assert_eq!(state, mid, "rejected pop must leave the state untouched");

            let elapsed = start.elapsed();
            assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
            format!("{elapsed:.2?}")
        },
    );
}

fn mean_time(records: &[dilated_stream::TimingRecord], mode: Mode, layers: usize) -> f64 {
    records
        .iter()
        .find(|r| r.mode == mode && r.layers == layers)
        .unwrap_or_else(|| panic!("no {mode} record for L = {layers}"))
        .mean_s_per_sample
}

#[test]
fn ac5_timing_trend() {
    criterion(
        "AC5",
        "fast t(10)/t(5) < 4, naive t(10)/t(5) > 8, fast faster at L = 10",
        || {
            let start = Instant::now();
            let grid = default_grid(2, 1..=10, 16);
            let options = BenchOptions {
                steps: 64,
                repeats: 20,
                warmup: 3,
                ..BenchOptions::default()
            };
            let bench = run_benchmark(&grid, &options).unwrap();
            assert!(bench.skipped.is_empty());
            let r = &bench.records;
            let (fast5, fast10) = (mean_time(r, Mode::Fast, 5), mean_time(r, Mode::Fast, 10));
            let (naive5, naive10) = (mean_time(r, Mode::Naive, 5), mean_time(r, Mode::Naive, 10));
            let elapsed = start.elapsed();
            let detail = format!(
                "fast ratio {:.2}, naive ratio {:.1}, L=10 fast {fast10:.3e} s vs naive {naive10:.3e} s, {elapsed:.1?}",
                fast10 / fast5,
                naive10 / naive5
            );
            assert!(fast10 / fast5 < 4.0, "{detail}");
            assert!(naive10 / naive5 > 8.0, "{detail}");
            assert!(fast10 < naive10, "{detail}");
            assert!(elapsed < Duration::from_secs(300), "{detail}");
            detail
        },
    );
}

/// Single width-2 layer with copy weights: `taps[0] = 0`, `taps[1] = 1`.
fn copy_layer() -> LayerWeights {
    LayerWeights {
        in_channels: 1,
        out_channels: 1,
        taps: vec![vec![0.0], vec![1.0]],
        bias: vec![0.0],
    }
}

/// A stack whose top layer (dilation `d`) copies with lag and whose lower
/// layers pass their input through unchanged.
fn delay_model(d: usize) -> Model {
    let layers = d.trailing_zeros() as usize + 1;
    let config = ModelConfig {
        layers_per_block: layers,
        activation: Activation::Linear,
        ..ModelConfig::default()
    };
    let mut weights: Vec<LayerWeights> = (0..layers)
        .map(|_| LayerWeights {
            taps: vec![vec![1.0], vec![0.0]],
            ..copy_layer()
        })
        .collect();
    weights[layers - 1] = copy_layer();
    Model::new(config, weights).unwrap()
}

#[test]
fn ac6_delay_line_golden() {
    criterion("AC6", "copy weights delay by d exactly, zeros before t = d", || {
        let input = random_signal(100, 6);
        for d in [1usize, 4, 8] {
            let want: Vec<f64> = (0..input.len())
                .map(|t| if t >= d { input[t - d] } else { 0.0 })
                .collect();

            let seq = SampleSequence::scalar(&input).unwrap();
            let conv = causal_dilated_conv(&seq, &copy_layer(), Activation::Linear, d).unwrap();
            assert_eq!(conv.values(), &want[..], "single-layer conv, d = {d}");

            let model = delay_model(d);
            assert_eq!(model.dilation(model.num_layers() - 1), d);
            assert_eq!(fast_teacher_forced(&model, &input), want, "fast, d = {d}");
            let naive: Vec<f64> =
                (1..=input.len()).map(|n| naive_step(&model, &input[..n]).0).collect();
            assert_eq!(naive, want, "naive, d = {d}");
        }
        "d = 1, 4, 8 via the oracle, fast and naive paths".to_owned()
    });
}

#[test]
fn ac7_format_round_trips() {
    criterion(
        "AC7",
        "model file, bench CSV and generate output round-trip exactly",
        || {
            let model = build_model(ModelConfig {
                blocks: 2,
                layers_per_block: 4,
                filter_width: 3,
                hidden_channels: 4,
                init_seed: 99,
                ..ModelConfig::default()
            })
            .unwrap();
            let mut text = Vec::new();
            write_model(&model, &mut text).unwrap();
            let back = read_model(&text[..]).unwrap();
            let bits = |m: &Model| -> Vec<u64> {
                m.layers()
                    .iter()
                    .flat_map(|l| l.taps.iter().flatten().chain(&l.bias).map(|v| v.to_bits()))
                    .collect()
            };
            assert_eq!(back, model);
            assert_eq!(bits(&back), bits(&model));

            let bench = run_benchmark(
                &default_grid(2, 2..=3, 4),
                &BenchOptions {
                    steps: 4,
                    repeats: 3,
                    warmup: 0,
                    ..BenchOptions::default()
                },
            )
            .unwrap();
            let mut csv = Vec::new();
            write_records(&bench.records, &mut csv).unwrap();
            assert_eq!(read_records(&csv[..]).unwrap(), bench.records);

            let dir = tempfile::tempdir().unwrap();
            let model_path = dir.path().join("model.json");
            dilated_stream::save_model(&model, &model_path).unwrap();
            let exe = env!("CARGO_BIN_EXE_dilated-stream");
            let mut outputs = Vec::new();
            for mode in ["fast", "naive"] {
                let out = dir.path().join(format!("{mode}.txt"));
                let run = std::process::Command::new(exe)
                    .args(["generate", "--steps", "200", "--mode", mode, "--model"])
                    .arg(&model_path)
                    .arg("--out")
                    .arg(&out)
                    .output()
                    .unwrap();
                assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
                outputs.push(std::fs::read(out).unwrap());
            }
            assert_eq!(outputs[0], outputs[1]);
            assert_eq!(String::from_utf8_lossy(&outputs[0]).lines().count(), 200);
            format!("{} CSV rows, 200 generated samples identical", bench.records.len())
        },
    );
}
