//! Diagnostic: find the largest level-1 cell for a dataset and show which
//! values pile into it and what the model predicts around them.

use learned_sort::datagen::{generate_f64, DatasetSpec, Family};
use learned_sort::{draw_sample, train_model, CdfModel, SortConfig};
use std::collections::HashMap;

fn main() {
    let mut args = std::env::args().skip(1);
    let family = args.next().unwrap_or_else(|| "zipf".into());
    let n: usize = args
        .next()
        .map(|s| s.parse::<f64>().unwrap() as usize)
        .unwrap_or(10_000_000);
    let cfg = SortConfig::default();
    let spec = DatasetSpec::new(Family::from_name(&family).unwrap(), n, 1);
    let keys = generate_f64(&spec).unwrap();
    let sample = draw_sample(&keys, cfg.sample_rate, cfg.sample_seed).unwrap();
    let model = train_model(&sample, cfg.leaf_count);

    let f = cfg.fanout;
    let mut cells: HashMap<(usize, usize), usize> = HashMap::new();
    for &x in &keys {
        let cdf: f64 = model.predict_cdf(x);
        let b = ((cdf * f as f64) as usize).min(f - 1);
        let j = (((cdf * (f * f) as f64) as i64) - (b * f) as i64).clamp(0, f as i64 - 1) as usize;
        *cells.entry((b, j)).or_default() += 1;
    }
    let mut by_size: Vec<_> = cells.into_iter().collect();
    by_size.sort_by_key(|&(_, c)| std::cmp::Reverse(c));
    for ((b, j), count) in by_size.iter().take(6) {
        let mut values: HashMap<u64, usize> = HashMap::new();
        for &x in &keys {
            let cdf: f64 = model.predict_cdf(x);
            let bb = ((cdf * f as f64) as usize).min(f - 1);
            let jj =
                (((cdf * (f * f) as f64) as i64) - (bb * f) as i64).clamp(0, f as i64 - 1) as usize;
            if (bb, jj) == (*b, *j) {
                *values.entry(x.to_bits()).or_default() += 1;
            }
        }
        let mut vals: Vec<_> = values.iter().map(|(&bits, &c)| (f64::from_bits(bits), c)).collect();
        vals.sort_by(|a, b| a.0.total_cmp(&b.0));
        println!(
            "cell ({b},{j}): {count} keys, {} distinct values, value range [{:.4}, {:.4}]",
            vals.len(),
            vals.first().unwrap().0,
            vals.last().unwrap().0
        );
        for (v, c) in vals.iter().take(5) {
            println!("   value {v:>12.4} x{c:<8} cdf={:.12}", model.predict_cdf(*v));
        }
    }
    // predictions for the smallest values
    for v in [1.0, 2.0, 3.0, 4.0, 5.0, 10.0, 100.0] {
        println!("predict({v}) = {:.12}", model.predict_cdf(v));
    }
}
