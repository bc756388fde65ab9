//! Prints the per-phase timing breakdown for one sort run; a tuning aid.
//!
//! Usage: cargo run --release -p learned-sort --example phases -- [family] [n]

use learned_sort::datagen::{generate_f64, DatasetSpec, Family};
use learned_sort::{learned_sort, SortConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let family = args.next().unwrap_or_else(|| "uniform".into());
    let n: usize = args
        .next()
        .map(|s| s.parse::<f64>().unwrap() as usize)
        .unwrap_or(10_000_000);

    let spec = DatasetSpec::new(Family::from_name(&family).unwrap(), n, 1);
    let keys = generate_f64(&spec).unwrap();
    for round in 0..3 {
        let mut work = keys.clone();
        let stats = learned_sort(&mut work, &SortConfig::default()).unwrap();
        assert!(work.windows(2).all(|w| w[0] <= w[1]));
        let ns = |d: std::time::Duration| d.as_secs_f64() * 1e9 / n as f64;
        println!(
            "round {round}: total {:>7.1?} | sample {:.2} train {:.2} partition {:.2} refine {:.2} cleanup {:.2} ns/key | skipped {} counting {} maxsub {} disp {}",
            stats.total,
            ns(stats.phases.sample),
            ns(stats.phases.train),
            ns(stats.phases.partition),
            ns(stats.phases.refine),
            ns(stats.phases.cleanup),
            stats.buckets_skipped_homogeneous,
            stats.counting_sort_invocations,
            stats.max_sub_bucket,
            stats.insertion_sort_displacement_max,
        );
    }
}
