//! Decomposes the per-bucket refinement phase into its three parts and
//! times each separately. Tuning aid.

use learned_sort::datagen::{generate_f64, DatasetSpec, Family};
use learned_sort::partition::{defragment, partition_pass, DefragMode, FragmentPool};
use learned_sort::sorter::{counting_sort_bucket, is_homogeneous, CountingScratch};
use learned_sort::{draw_sample, train_model, BucketLevel, SortConfig};
use std::time::Instant;

fn main() {
    let n = 10_000_000usize;
    let family = std::env::args().nth(1).unwrap_or_else(|| "uniform".into());
    let cfg = SortConfig::default();
    let (f, c) = (cfg.fanout, cfg.fragment_capacity);

    let spec = DatasetSpec::new(Family::from_name(&family).unwrap(), n, 1);
    let mut keys = generate_f64(&spec).unwrap();
    let sample = draw_sample(&keys, cfg.sample_rate, cfg.sample_seed).unwrap();
    let model = train_model(&sample, cfg.leaf_count);

    let mut pool = FragmentPool::new(f, c);
    let res0 = partition_pass(&mut keys, &model, BucketLevel::Root, f, c, &mut pool);
    let offsets = defragment(&mut keys, &res0, pool.storage_mut(), DefragMode::Strict).unwrap();
    let sizes = res0.bucket_sizes().to_vec();

    // Pass 1: level-1 partitions only (on copies of each bucket).
    let snapshot = keys.clone();
    let t = Instant::now();
    let mut results = Vec::with_capacity(f);
    for b in 0..f {
        if sizes[b] == 0 || is_homogeneous(&keys[offsets[b]..offsets[b] + sizes[b]]) {
            results.push(None);
            continue;
        }
        let bucket = &mut keys[offsets[b]..offsets[b] + sizes[b]];
        let r = partition_pass(bucket, &model, BucketLevel::Sub { parent: b }, f, c, &mut pool);
        results.push(Some(r));
    }
    let t_l1 = t.elapsed();

    // Pass 2: defragment each bucket.
    let t = Instant::now();
    let mut sub_offsets = Vec::with_capacity(f);
    for b in 0..f {
        match &results[b] {
            None => sub_offsets.push(None),
            Some(r) => {
                let bucket = &mut keys[offsets[b]..offsets[b] + sizes[b]];
                let o = defragment(bucket, r, pool.storage_mut(), DefragMode::Strict).unwrap();
                sub_offsets.push(Some(o));
            }
        }
    }
    let t_defrag = t.elapsed();

    // Pass 3: counting sort each sub-bucket.
    let t = Instant::now();
    let mut scratch = CountingScratch::new();
    let mut calls = 0u64;
    for b in 0..f {
        if let (Some(r), Some(so)) = (&results[b], &sub_offsets[b]) {
            let bucket = &mut keys[offsets[b]..offsets[b] + sizes[b]];
            for (j, &sz) in r.bucket_sizes().iter().enumerate() {
                if sz < 2 {
                    continue;
                }
                let sub = &mut bucket[so[j]..so[j] + sz];
                if !is_homogeneous(sub) {
                    counting_sort_bucket(sub, &model, b, j, f, n, &mut scratch);
                    calls += 1;
                }
            }
        }
    }
    let t_count = t.elapsed();

    let ns = |d: std::time::Duration| d.as_secs_f64() * 1e9 / n as f64;
    println!(
        "L1 partition {:.2} ns/key | defrag {:.2} ns/key | counting {:.2} ns/key ({calls} calls)",
        ns(t_l1),
        ns(t_defrag),
        ns(t_count)
    );
    drop(snapshot);
}
