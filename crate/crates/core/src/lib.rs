//! LearnedSort 2.0: a distribution sort guided by a learned CDF model.
//!
//! The sorter trains a small two-layer model of the input's empirical CDF on
//! a sample, partitions keys in place through fixed-capacity bucket
//! fragments (no spill storage of any kind), defragments each bucket into a
//! contiguous range, counting-sorts the surviving sub-buckets by model
//! prediction, and finishes with one insertion-sort pass that makes
//! correctness independent of model quality. Buckets of all-equal keys are
//! detected and skipped outright, which is what keeps throughput flat on
//! duplicate-heavy inputs.
//!
//! ```
//! use learned_sort::{learned_sort, SortConfig};
//!
//! let mut keys: Vec<f64> = (0..10_000).map(|i| ((i * 37) % 1000) as f64).collect();
//! let stats = learned_sort(&mut keys, &SortConfig::default()).unwrap();
//! assert!(keys.windows(2).all(|w| w[0] <= w[1]));
//! assert_eq!(stats.counting_sort_invocations, 0); // below the fallback threshold
//! ```
//!
//! The crate also ships the supporting cast used by the benchmark CLI:
//! seeded dataset generators ([`datagen`]), an LSD radix-sort baseline
//! ([`radix`]) and a verifying benchmark harness ([`harness`]).

pub mod datagen;
pub mod harness;
pub mod key;
pub mod model;
pub mod partition;
pub mod radix;
pub mod sorter;

pub use key::SortKey;
pub use model::{
    bucket_from_cdf, draw_sample, train_model, BucketLevel, CdfModel, EcdfModel, ModelError,
    TrainingSample, CDF_CEIL, MAX_SAMPLE, MIN_SAMPLE,
};
pub use partition::{
    defragment, partition_pass, DefragMode, FragmentDescriptor, FragmentPool, PartitionError,
    PartitionResult,
};
pub use sorter::{
    counting_sort_bucket, insertion_sort_cleanup, is_homogeneous, learned_sort, sort_with_model,
    AuxUsage, CountingScratch, PhaseTimes, SortConfig, SortError, SortStats,
};
