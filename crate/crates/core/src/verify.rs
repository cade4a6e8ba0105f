//! Cross-checks between the oracle and the two generators.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fast::{fast_generate, fast_teacher_forced};
use crate::model::{Activation, Model, ModelConfig};
use crate::naive::{naive_generate, naive_step};
use crate::oracle::forward_full_scalar;

/// Outcome of comparing two sample sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub name: String,
    pub max_abs_deviation: f64,
    /// Index of the first pair outside tolerance, if any.
    pub first_mismatch: Option<usize>,
    pub passed: bool,
}

/// Elementwise comparison. With `rel_tol == 0` this is exact equality;
/// otherwise a pair passes when `|a - b| <= rel_tol * max(|a|, |b|)`.
/// Sequences of different lengths never pass.
pub fn compare(name: impl Into<String>, a: &[f64], b: &[f64], rel_tol: f64) -> Comparison {
    let mut max_abs = 0.0f64;
    let mut first_mismatch = None;
    for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
        let diff = (x - y).abs();
        max_abs = max_abs.max(diff);
        let ok = x == y || diff <= rel_tol * x.abs().max(y.abs());
        if !ok && first_mismatch.is_none() {
            first_mismatch = Some(i);
        }
    }
    if a.len() != b.len() && first_mismatch.is_none() {
        first_mismatch = Some(a.len().min(b.len()));
    }
    Comparison {
        name: name.into(),
        max_abs_deviation: max_abs,
        first_mismatch,
        passed: first_mismatch.is_none(),
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub config: ModelConfig,
    pub comparisons: Vec<Comparison>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(|c| c.passed)
    }

    pub fn max_abs_deviation(&self) -> f64 {
        self.comparisons
            .iter()
            .map(|c| c.max_abs_deviation)
            .fold(0.0, f64::max)
    }
}

/// Seeded test signal in `[-1, 1]`.
pub fn random_signal(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-1.0, 1.0);
    (0..len).map(|_| dist.sample(&mut rng)).collect()
}

/// Teacher-forced outputs of the naive generator: step `t` sees the true
/// inputs `0..=t`.
pub fn naive_teacher_forced(model: &Model, inputs: &[f64]) -> Vec<f64> {
    (1..=inputs.len())
        .map(|n| naive_step(model, &inputs[..n]).0)
        .collect()
}

/// Runs the three comparisons on `model` over `steps` samples:
/// teacher-forced fast vs oracle, teacher-forced naive vs oracle, and
/// free-run fast vs free-run naive.
pub fn verify_model(model: &Model, steps: usize, rel_tol: f64, seed: u64) -> VerifyReport {
    let inputs = random_signal(steps, seed);
    let oracle = forward_full_scalar(model, &inputs).expect("scalar input matches the model");
    let fast_tf = fast_teacher_forced(model, &inputs);
    let naive_tf = naive_teacher_forced(model, &inputs);

    let primer = &inputs[..inputs.len().min(8)];
    let fast_free = fast_generate(model, primer, steps);
    let naive_free = naive_generate(model, primer, steps);

    VerifyReport {
        config: *model.config(),
        comparisons: vec![
            compare("teacher-forced fast vs full", &fast_tf, &oracle, rel_tol),
            compare("teacher-forced naive vs full", &naive_tf, &oracle, rel_tol),
            compare("free-run fast vs naive", &fast_free, &naive_free, rel_tol),
        ],
    }
}

/// Every combination of blocks 1..=3, L 1..=6, w {2, 3}, C {1, 4} and both
/// activations (144 configs), with distinct seeds.
pub fn equivalence_grid() -> Vec<ModelConfig> {
    let mut grid = Vec::new();
    for blocks in 1..=3 {
        for layers_per_block in 1..=6 {
            for filter_width in [2, 3] {
                for hidden_channels in [1, 4] {
                    for activation in [Activation::Linear, Activation::Tanh] {
                        grid.push(ModelConfig {
                            blocks,
                            layers_per_block,
                            filter_width,
                            dilation_base: 2,
                            hidden_channels,
                            activation,
                            init_seed: 1000 + grid.len() as u64,
                        });
                    }
                }
            }
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_model;

    #[test]
    fn compare_exact_and_relative() {
        assert!(compare("x", &[1.0, 2.0], &[1.0, 2.0], 0.0).passed);
        let off = compare("x", &[1.0, 2.0], &[1.0, 2.0 + 1e-15], 0.0);
        assert!(!off.passed);
        assert_eq!(off.first_mismatch, Some(1));
        assert!(compare("x", &[1.0, 2.0], &[1.0, 2.0 + 1e-15], 1e-12).passed);
        assert!(!compare("x", &[1.0], &[1.0, 2.0], 0.0).passed);
    }

    #[test]
    fn grid_spans_required_ranges() {
        let grid = equivalence_grid();
        assert!(grid.len() >= 50);
        let seeds: std::collections::HashSet<u64> = grid.iter().map(|c| c.init_seed).collect();
        assert_eq!(seeds.len(), grid.len());
    }

    #[test]
    fn seeded_model_verifies_exactly() {
        let model = build_model(ModelConfig {
            blocks: 2,
            layers_per_block: 4,
            filter_width: 3,
            hidden_channels: 4,
            ..ModelConfig::default()
        })
        .unwrap();
        let report = verify_model(&model, 64, 0.0, 9);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.max_abs_deviation(), 0.0);
    }

    #[test]
    fn single_step() {
        let model = build_model(ModelConfig::default()).unwrap();
        assert!(verify_model(&model, 1, 0.0, 1).passed());
    }
}
