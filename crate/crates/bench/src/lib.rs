//! Shared setup for the criterion benches: canned dataset specs at the sizes
//! the micro-benchmarks use.

use learned_sort::datagen::{generate_f64, DatasetSpec, Family};

/// Dataset mix exercised by the benches: one duplicate-free family, one
/// duplicate-heavy family and the skewed Zipf case.
pub fn bench_datasets(n: usize) -> Vec<(String, Vec<f64>)> {
    [
        Family::Normal {
            mean: 0.0,
            std_dev: 1.0,
        },
        Family::TwoDups,
        Family::Zipf { skew: 0.9 },
    ]
    .into_iter()
    .map(|family| {
        let spec = DatasetSpec::new(family, n, 42);
        let label = spec.label();
        let keys = generate_f64(&spec).expect("valid default parameters");
        (label, keys)
    })
    .collect()
}
