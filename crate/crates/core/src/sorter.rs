//! The LearnedSort 2.0 pipeline.
//!
//! `learned_sort` trains an eCDF model on a sample of the input, runs a
//! two-level fragmented partition with homogeneity short-circuits, sorts each
//! sub-bucket with a model-based Counting Sort, and finishes with one
//! Insertion Sort pass. Correctness never depends on model quality: the
//! final pass guarantees a sorted permutation of the input for any model.

use crate::key::SortKey;
use crate::model::{draw_sample, train_model, BucketLevel, CdfModel};
use crate::partition::{
    defragment_core, partition_core, DefragMode, DefragWork, FragmentDescriptor, FragmentPool,
};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SortError {
    #[error("unordered key")]
    UnorderedKey,
    #[error("invalid sort configuration: {0}")]
    InvalidConfig(String),
}

/// Tuning knobs for [`learned_sort`].
#[derive(Debug, Clone)]
pub struct SortConfig {
    /// Buckets per partitioning level.
    pub fanout: usize,
    /// Keys per bucket fragment.
    pub fragment_capacity: usize,
    /// Fraction of the input sampled for training.
    pub sample_rate: f64,
    /// Leaf segments in the eCDF model.
    pub leaf_count: usize,
    /// Inputs of this many keys or fewer go straight to the platform
    /// comparison sort; below cache size the model overhead dominates.
    pub fallback_threshold: usize,
    /// Seed for the training-sample draw; fixed so that identical inputs and
    /// configs sort identically.
    pub sample_seed: u64,
}

impl Default for SortConfig {
    fn default() -> Self {
        Self {
            fanout: 1000,
            fragment_capacity: 100,
            sample_rate: 0.01,
            leaf_count: 1000,
            fallback_threshold: 5000,
            sample_seed: 0x5eed_1e52,
        }
    }
}

impl SortConfig {
    pub fn validate(&self) -> Result<(), SortError> {
        if self.fanout < 2 {
            return Err(SortError::InvalidConfig("fanout must be >= 2".into()));
        }
        if self.fragment_capacity < 1 {
            return Err(SortError::InvalidConfig(
                "fragment capacity must be >= 1".into(),
            ));
        }
        if !(self.sample_rate > 0.0 && self.sample_rate <= 1.0) {
            return Err(SortError::InvalidConfig(format!(
                "sample rate must be in (0, 1], got {}",
                self.sample_rate
            )));
        }
        if self.leaf_count < 1 {
            return Err(SortError::InvalidConfig("leaf count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Wall-clock breakdown of one sort call. Phases sum to less than the total;
/// the difference is validation and bookkeeping.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseTimes {
    pub sample: Duration,
    pub train: Duration,
    /// Level-0 partition pass plus its defragmentation.
    pub partition: Duration,
    /// Per-bucket work: level-1 passes, defragmentation, counting sort.
    pub refine: Duration,
    /// Final insertion sort.
    pub cleanup: Duration,
}

impl PhaseTimes {
    pub fn sum(&self) -> Duration {
        self.sample + self.train + self.partition + self.refine + self.cleanup
    }
}

/// Sizes of every auxiliary buffer the pipeline touched, for the spill-free
/// memory accounting: peak auxiliary key storage is
/// `pool_keys + defrag_spare_keys + counting_keys_peak`, and descriptor
/// buffers stay proportional to `N / fragment_capacity`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AuxUsage {
    /// Fragment pool storage: fanout * fragment_capacity keys.
    pub pool_keys: usize,
    /// The one spare fragment buffer each defragmentation call allocates.
    pub defrag_spare_keys: usize,
    /// Largest counting-sort key scratch in use.
    pub counting_keys_peak: usize,
    /// Largest counting-sort histogram (entries, not keys).
    pub histogram_entries_peak: usize,
    /// Longest fragment log produced by a single partition pass.
    pub fragment_log_entries_peak: usize,
}

impl AuxUsage {
    /// Peak concurrent auxiliary key storage in the partitioning data path.
    pub fn key_storage_peak(&self) -> usize {
        self.pool_keys + self.defrag_spare_keys + self.counting_keys_peak
    }
}

/// Observability counters for one sort call.
#[derive(Debug, Clone, Default)]
pub struct SortStats {
    /// Whether a model was trained (false on the small-input fallback path
    /// and under [`sort_with_model`]).
    pub trained: bool,
    /// Homogeneity short-circuits taken on ranges of at least two keys, at
    /// either partitioning level.
    pub buckets_skipped_homogeneous: u64,
    pub counting_sort_invocations: u64,
    /// Largest leftward move the final insertion sort had to make; a model
    /// accuracy diagnostic.
    pub insertion_sort_displacement_max: usize,
    /// Largest level-1 sub-bucket observed.
    pub max_sub_bucket: usize,
    pub phases: PhaseTimes,
    pub total: Duration,
    pub aux: AuxUsage,
}

/// Sorts `keys` in place and returns per-call statistics.
///
/// Inputs at or below `config.fallback_threshold` use the platform
/// comparison sort directly. Float inputs containing NaN are rejected before
/// any mutation.
pub fn learned_sort<K: SortKey>(keys: &mut [K], config: &SortConfig) -> Result<SortStats, SortError> {
    config.validate()?;
    let t0 = Instant::now();
    reject_unordered(keys)?;

    let mut stats = SortStats::default();
    if keys.len() <= 1 || keys.len() <= config.fallback_threshold {
        K::sort_slice(keys);
        stats.total = t0.elapsed();
        return Ok(stats);
    }

    let t = Instant::now();
    let sample = draw_sample(keys, config.sample_rate, config.sample_seed)
        .expect("input is non-empty and the rate was validated");
    stats.phases.sample = t.elapsed();

    let t = Instant::now();
    let model = train_model(&sample, config.leaf_count);
    drop(sample); // the sample is not part of the partitioning working set
    stats.phases.train = t.elapsed();
    stats.trained = true;

    run_pipeline(keys, &model, config, &mut stats);
    stats.total = t0.elapsed();
    Ok(stats)
}

/// Runs the partition/counting/cleanup pipeline with a caller-supplied model.
///
/// This is the model substitution point: tests drive it with exact oracles
/// or deliberately broken models to show that the output is a sorted
/// permutation regardless. No small-input fallback is applied.
pub fn sort_with_model<K: SortKey, M: CdfModel<K>>(
    keys: &mut [K],
    model: &M,
    config: &SortConfig,
) -> Result<SortStats, SortError> {
    config.validate()?;
    let t0 = Instant::now();
    reject_unordered(keys)?;
    let mut stats = SortStats::default();
    if keys.len() > 1 {
        run_pipeline(keys, model, config, &mut stats);
    }
    stats.total = t0.elapsed();
    Ok(stats)
}

fn reject_unordered<K: SortKey>(keys: &[K]) -> Result<(), SortError> {
    if K::HAS_UNORDERED && keys.iter().any(|k| k.is_unordered()) {
        return Err(SortError::UnorderedKey);
    }
    Ok(())
}

fn run_pipeline<K: SortKey, M: CdfModel<K>>(
    keys: &mut [K],
    model: &M,
    config: &SortConfig,
    stats: &mut SortStats,
) {
    let n = keys.len();
    let f = config.fanout;
    let c = config.fragment_capacity;

    let t = Instant::now();
    let mut pool = FragmentPool::new(f, c);
    stats.aux.pool_keys = pool.key_capacity();
    stats.aux.defrag_spare_keys = c;

    let mut log: Vec<FragmentDescriptor> = Vec::new();
    let mut bucket_sizes = vec![0usize; f];
    let mut offsets = Vec::new();
    let mut work = DefragWork::default();

    partition_core(
        keys,
        model,
        BucketLevel::Root,
        f,
        c,
        &mut pool,
        &mut log,
        &mut bucket_sizes,
    );
    note_log(stats, log.len());
    defragment_core(
        keys,
        &log,
        &bucket_sizes,
        c,
        pool.storage_mut(),
        DefragMode::Strict,
        &mut offsets,
        &mut work,
    )
    .expect("partition pass output is internally consistent");
    stats.phases.partition = t.elapsed();

    let t = Instant::now();
    let mut scratch = CountingScratch::new();
    let mut sub_sizes = vec![0usize; f];
    let mut sub_offsets = Vec::new();
    for b in 0..f {
        let size = bucket_sizes[b];
        if size == 0 {
            continue;
        }
        let bucket = &mut keys[offsets[b]..offsets[b] + size];
        if is_homogeneous(bucket) {
            if size >= 2 {
                stats.buckets_skipped_homogeneous += 1;
            }
            continue;
        }
        sub_sizes.iter_mut().for_each(|s| *s = 0);
        partition_core(
            bucket,
            model,
            BucketLevel::Sub { parent: b },
            f,
            c,
            &mut pool,
            &mut log,
            &mut sub_sizes,
        );
        note_log(stats, log.len());
        defragment_core(
            bucket,
            &log,
            &sub_sizes,
            c,
            pool.storage_mut(),
            DefragMode::Strict,
            &mut sub_offsets,
            &mut work,
        )
        .expect("partition pass output is internally consistent");
        for (j, &sub_size) in sub_sizes.iter().enumerate() {
            if sub_size < 2 {
                continue;
            }
            stats.max_sub_bucket = stats.max_sub_bucket.max(sub_size);
            let sub = &mut bucket[sub_offsets[j]..sub_offsets[j] + sub_size];
            if is_homogeneous(sub) {
                stats.buckets_skipped_homogeneous += 1;
            } else {
                counting_sort_bucket(sub, model, b, j, f, n, &mut scratch);
                stats.counting_sort_invocations += 1;
            }
        }
    }
    stats.aux.counting_keys_peak = scratch.keys.len();
    stats.aux.histogram_entries_peak = scratch.hist.len();
    stats.phases.refine = t.elapsed();

    let t = Instant::now();
    stats.insertion_sort_displacement_max = insertion_sort_cleanup(keys);
    stats.phases.cleanup = t.elapsed();
}

fn note_log(stats: &mut SortStats, len: usize) {
    stats.aux.fragment_log_entries_peak = stats.aux.fragment_log_entries_peak.max(len);
}

/// True iff all keys in the range are equal; vacuously true for empty and
/// single-key ranges.
#[inline]
pub fn is_homogeneous<K: SortKey>(range: &[K]) -> bool {
    match range.first() {
        None => true,
        Some(&first) => range[1..].iter().all(|&k| k == first),
    }
}

/// Reusable buffers for [`counting_sort_bucket`]: grown once to the largest
/// sub-bucket and reused across every invocation of one sort call.
#[derive(Debug, Default)]
pub struct CountingScratch<K: SortKey> {
    keys: Vec<K>,
    hist: Vec<u32>,
    pos: Vec<u32>,
}

impl<K: SortKey> CountingScratch<K> {
    pub fn new() -> Self {
        Self {
            keys: Vec::new(),
            hist: Vec::new(),
            pos: Vec::new(),
        }
    }

    fn ensure(&mut self, n: usize) {
        if self.keys.len() < n {
            self.keys.resize(n, K::ZERO);
            self.pos.resize(n, 0);
        }
        if self.hist.len() < n + 1 {
            self.hist.resize(n + 1, 0);
        }
    }
}

/// Model-based Counting Sort of one defragmented sub-bucket.
///
/// Histogram index for key `x` is `floor((cdf(x) - adj) * total_n)` clamped
/// into `[0, n'-1]`, with `adj = (bucket * fanout + sub_bucket) / fanout^2`,
/// the CDF value at which this sub-bucket starts. Running totals are
/// accumulated, keys are placed into scratch by descending counts and copied
/// back; the range ends up a permutation of itself ordered by predicted
/// position, exact up to model error (the final insertion sort settles ties
/// and mispredictions).
pub fn counting_sort_bucket<K: SortKey, M: CdfModel<K>>(
    range: &mut [K],
    model: &M,
    bucket: usize,
    sub_bucket: usize,
    fanout: usize,
    total_n: usize,
    scratch: &mut CountingScratch<K>,
) {
    let n = range.len();
    if n < 2 {
        return;
    }
    debug_assert!(n as u64 <= u32::MAX as u64);
    let f = fanout as f64;
    let adj = (bucket * fanout + sub_bucket) as f64 / (f * f);
    let scale = total_n as f64;
    let max_pos = (n - 1) as i64;

    scratch.ensure(n);
    let hist = &mut scratch.hist[..n + 1];
    hist.fill(0);
    let pos = &mut scratch.pos[..n];

    // Predictions first (batched), histogram second.
    model.fill_positions(range, adj, scale, max_pos, pos);
    for k in 0..n {
        // SAFETY: pos[k] is clamped below n by the fill_positions contract
        // and the min here; the histogram holds n + 1 counters.
        unsafe {
            let p = (*pos.get_unchecked(k) as usize).min(n - 1);
            *pos.get_unchecked_mut(k) = p as u32;
            *hist.get_unchecked_mut(p) += 1;
        }
    }
    let mut acc = 0u32;
    for h in hist[..n].iter_mut() {
        acc += *h;
        *h = acc;
    }
    let out = &mut scratch.keys[..n];
    // Reverse scan: equal predictions keep their scan order, which leaves
    // runs of duplicates untouched for the final insertion pass.
    for k in (0..n).rev() {
        // SAFETY: pos[k] < n; every key decrements the running total of its
        // own position exactly once, so the write index stays in [0, n).
        unsafe {
            let p = *pos.get_unchecked(k) as usize;
            let h = hist.get_unchecked_mut(p);
            *h -= 1;
            *out.get_unchecked_mut(*h as usize) = *range.get_unchecked(k);
        }
    }
    // Short copies dodge the memcpy dispatch overhead; sub-buckets are
    // usually a handful of keys.
    if n <= 32 {
        for k in 0..n {
            // SAFETY: out and range both have length n.
            unsafe {
                *range.get_unchecked_mut(k) = *out.get_unchecked(k);
            }
        }
    } else {
        range.copy_from_slice(out);
    }
}

/// Final touch-up pass: plain insertion sort, which is near-linear on the
/// quasi-sorted output of the pipeline and guarantees total order no matter
/// what the model predicted. Returns the maximum leftward displacement, a
/// diagnostic for model accuracy.
pub fn insertion_sort_cleanup<K: SortKey>(keys: &mut [K]) -> usize {
    let n = keys.len();
    let mut max_disp = 0usize;
    let mut i = 1usize;
    // SAFETY throughout: 1 <= i < n; j walks down from i and every j - 1
    // access is guarded by j > 0.
    while i < n {
        unsafe {
            // Skip the already-ordered run.
            while i < n && *keys.get_unchecked(i) >= *keys.get_unchecked(i - 1) {
                i += 1;
            }
            if i == n {
                break;
            }
            let x = *keys.get_unchecked(i);
            let mut j = i;
            loop {
                *keys.get_unchecked_mut(j) = *keys.get_unchecked(j - 1);
                j -= 1;
                if j == 0 || x >= *keys.get_unchecked(j - 1) {
                    break;
                }
            }
            *keys.get_unchecked_mut(j) = x;
            max_disp = max_disp.max(i - j);
            i += 1;
        }
    }
    max_disp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneity_check() {
        assert!(is_homogeneous(&[7.0, 7.0, 7.0]));
        assert!(!is_homogeneous(&[7.0, 7.0, 8.0]));
        assert!(is_homogeneous::<f64>(&[]));
        assert!(is_homogeneous(&[1u64]));
    }

    #[test]
    fn insertion_sort_examples() {
        let mut a = [1.0, 2.0, 3.0];
        assert_eq!(insertion_sort_cleanup(&mut a), 0);
        assert_eq!(a, [1.0, 2.0, 3.0]);

        let mut b = [2.0, 1.0];
        assert_eq!(insertion_sort_cleanup(&mut b), 1);
        assert_eq!(b, [1.0, 2.0]);

        let mut c: [u64; 0] = [];
        assert_eq!(insertion_sort_cleanup(&mut c), 0);
    }

    #[test]
    fn insertion_sort_handles_arbitrary_disorder() {
        let mut keys: Vec<u64> = (0..500).rev().collect();
        let disp = insertion_sort_cleanup(&mut keys);
        assert_eq!(disp, 499);
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn two_dups_tiny_input_sorts() {
        let mut keys = vec![4u64, 5, 0, 5, 4, 5, 0, 5];
        learned_sort(&mut keys, &SortConfig::default()).unwrap();
        assert_eq!(keys, vec![0, 0, 4, 4, 5, 5, 5, 5]);
    }

    #[test]
    fn empty_input_is_a_noop() {
        let mut keys: Vec<f64> = vec![];
        let stats = learned_sort(&mut keys, &SortConfig::default()).unwrap();
        assert!(!stats.trained);
        assert_eq!(stats.counting_sort_invocations, 0);
        assert_eq!(stats.buckets_skipped_homogeneous, 0);
    }

    #[test]
    fn nan_is_rejected_before_mutation() {
        let mut keys = vec![3.0, f64::NAN, 1.0];
        let err = learned_sort(&mut keys, &SortConfig::default()).unwrap_err();
        assert_eq!(err, SortError::UnorderedKey);
        assert_eq!(keys[0], 3.0);
        assert!(keys[1].is_nan());
        assert_eq!(keys[2], 1.0);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let mut keys = vec![1.0, 2.0];
        let bad = SortConfig {
            fanout: 1,
            ..SortConfig::default()
        };
        assert!(matches!(
            learned_sort(&mut keys, &bad),
            Err(SortError::InvalidConfig(_))
        ));
    }

    /// Sub-bucket counting-sort example: identity model, adj = 0.50 via
    /// bucket 5 of fanout 10, total_n = 100 maps the three keys to
    /// positions 2, 0, 1.
    #[test]
    fn counting_sort_places_by_prediction() {
        struct Identity;
        impl CdfModel<f64> for Identity {
            fn predict_cdf(&self, x: f64) -> f64 {
                x
            }
        }
        let mut sub = [0.52, 0.50, 0.51];
        let mut scratch = CountingScratch::new();
        counting_sort_bucket(&mut sub, &Identity, 5, 0, 10, 100, &mut scratch);
        assert_eq!(sub, [0.50, 0.51, 0.52]);
    }

    #[test]
    fn counting_sort_of_equal_keys_is_identity() {
        struct Identity;
        impl CdfModel<f64> for Identity {
            fn predict_cdf(&self, x: f64) -> f64 {
                x
            }
        }
        let mut sub = [0.25; 8];
        let mut scratch = CountingScratch::new();
        counting_sort_bucket(&mut sub, &Identity, 2, 5, 10, 64, &mut scratch);
        assert_eq!(sub, [0.25; 8]);
    }
}
