//! Fragmented in-place partitioning and bucket defragmentation.
//!
//! One partition pass appends each key to a fixed-capacity fragment owned by
//! its predicted bucket. Full fragments are copied back over the input at a
//! write head that never overtakes the read position, so the pass needs no
//! spill storage of any kind: auxiliary key memory is exactly the fragment
//! pool, independent of input size. Defragmentation then gathers each
//! bucket's scattered fragments into one contiguous sub-range.

use crate::key::SortKey;
use crate::model::{BucketLevel, CdfModel};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("corrupt partition state: {0}")]
    CorruptPartitionState(&'static str),
}

/// Pool of `fragments` buffers, each holding up to `capacity` keys.
///
/// Total key storage is exactly `fragments * capacity`, independent of the
/// input size. The pool is reusable across passes; while it is empty its
/// storage may be borrowed as defragmentation workspace via
/// [`FragmentPool::storage_mut`].
#[derive(Debug)]
pub struct FragmentPool<K: SortKey> {
    storage: Vec<K>,
    fill: Vec<u32>,
    capacity: usize,
}

impl<K: SortKey> FragmentPool<K> {
    pub fn new(fragments: usize, capacity: usize) -> Self {
        assert!(fragments >= 1 && capacity >= 1);
        assert!(capacity <= u32::MAX as usize);
        Self {
            storage: vec![K::ZERO; fragments * capacity],
            fill: vec![0; fragments],
            capacity,
        }
    }

    pub fn fragments(&self) -> usize {
        self.fill.len()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Total auxiliary key storage held by the pool.
    pub fn key_capacity(&self) -> usize {
        self.storage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fill.iter().all(|&f| f == 0)
    }

    /// Borrows the pool storage as scratch space (e.g. for [`defragment`]).
    /// Only meaningful while the pool is empty; fragment contents are
    /// clobbered.
    pub fn storage_mut(&mut self) -> &mut [K] {
        debug_assert!(self.is_empty());
        &mut self.storage
    }
}

/// One logged fragment write: which bucket it belonged to and how many keys
/// it carried. Empty fragments are never logged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FragmentDescriptor {
    pub bucket_id: u32,
    pub size: u32,
}

/// Output of one partition pass: per-bucket key counts plus the ordered
/// fragment write log.
#[derive(Debug, Clone)]
pub struct PartitionResult {
    bucket_sizes: Vec<usize>,
    fragment_log: Vec<FragmentDescriptor>,
    capacity: usize,
}

impl PartitionResult {
    pub fn bucket_sizes(&self) -> &[usize] {
        &self.bucket_sizes
    }

    pub fn fragment_log(&self) -> &[FragmentDescriptor] {
        &self.fragment_log
    }

    /// Fragment capacity the pass ran with; log entries of exactly this size
    /// are full fragments.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Gives up the log and keeps only the bucket sizes.
    pub fn into_bucket_sizes(self) -> Vec<usize> {
        self.bucket_sizes
    }

    #[cfg(test)]
    pub(crate) fn new_raw(
        bucket_sizes: Vec<usize>,
        fragment_log: Vec<FragmentDescriptor>,
        capacity: usize,
    ) -> Self {
        Self {
            bucket_sizes,
            fragment_log,
            capacity,
        }
    }
}

/// One fragmented partition pass over `range`.
///
/// Every key is appended to the fragment of its predicted bucket; a fragment
/// that reaches `capacity` is copied back to the range at the write head,
/// logged, and cleared. After the scan the remaining partial fragments are
/// flushed in ascending bucket order. The multiset of keys is preserved and
/// the pool is left empty.
///
/// Panics if the pool is smaller than `fanout` fragments, has a different
/// capacity, or is not empty. A predicted index outside `[0, fanout)` is a
/// model-contract defect, not a recoverable error.
pub fn partition_pass<K: SortKey, M: CdfModel<K>>(
    range: &mut [K],
    model: &M,
    level: BucketLevel,
    fanout: usize,
    capacity: usize,
    pool: &mut FragmentPool<K>,
) -> PartitionResult {
    let mut bucket_sizes = vec![0usize; fanout];
    let mut log = Vec::new();
    partition_core(
        range,
        model,
        level,
        fanout,
        capacity,
        pool,
        &mut log,
        &mut bucket_sizes,
    );
    PartitionResult {
        bucket_sizes,
        fragment_log: log,
        capacity,
    }
}

/// The partition pass with caller-provided output buffers, so the per-bucket
/// refinement loop does not allocate. `log` is overwritten; `bucket_sizes`
/// must arrive zeroed with length `fanout`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn partition_core<K: SortKey, M: CdfModel<K>>(
    range: &mut [K],
    model: &M,
    level: BucketLevel,
    fanout: usize,
    capacity: usize,
    pool: &mut FragmentPool<K>,
    log: &mut Vec<FragmentDescriptor>,
    bucket_sizes: &mut [usize],
) {
    assert!(!range.is_empty(), "cannot partition an empty range");
    assert!(fanout >= 1 && fanout <= 1 << 20, "fanout out of range");
    assert!(
        pool.fragments() >= fanout,
        "pool has {} fragments, pass needs {}",
        pool.fragments(),
        fanout
    );
    assert_eq!(pool.capacity(), capacity, "pool capacity mismatch");
    assert!(pool.is_empty(), "pool must start empty");
    assert_eq!(bucket_sizes.len(), fanout);
    debug_assert!(bucket_sizes.iter().all(|&s| s == 0));

    let c = capacity;
    let n = range.len();
    log.clear();
    log.reserve(n / c + fanout + 1);
    let mut w = 0usize;

    // The scan runs in two stages per block: predict all bucket indices
    // (independent work the CPU can pipeline or fuse), then do the branchy
    // appends. The block's keys are copied out first because a flush may
    // overwrite positions that were read but not yet appended.
    const BLOCK: usize = 16;
    let mut xs = [K::ZERO; BLOCK];
    let mut buckets = [0usize; BLOCK];
    let mut r = 0usize;
    loop {
        let take = BLOCK.min(n - r);
        if take == 0 {
            break;
        }
        xs[..take].copy_from_slice(&range[r..r + take]);
        model.fill_buckets(&xs[..take], level, fanout, &mut buckets[..take]);
        for t in 0..take {
            let x = xs[t];
            // The min guard keeps the unchecked pool writes in bounds even
            // if a CdfModel implementation breaks its contract.
            let b = buckets[t].min(fanout - 1);
            debug_assert_eq!(b, model.bucket_index(x, level, fanout));
            let slot = b * c;
            // SAFETY: b < fanout <= pool.fragments() and fill < c (a
            // fragment is cleared the moment it reaches capacity), so
            // slot + fill < storage length and b indexes `fill`.
            unsafe {
                let fill = *pool.fill.get_unchecked(b) as usize;
                *pool.storage.get_unchecked_mut(slot + fill) = x;
                if fill + 1 == c {
                    // The write head trails the consumption point: w plus the
                    // pool fill equals the r + t + 1 keys consumed so far and
                    // this fragment holds c of them, hence w + c <= r + t + 1
                    // <= n and the copy stays inside `range`, over keys that
                    // were already consumed. Pool storage and `range` are
                    // disjoint allocations.
                    std::ptr::copy_nonoverlapping(
                        pool.storage.as_ptr().add(slot),
                        range.as_mut_ptr().add(w),
                        c,
                    );
                    w += c;
                    *pool.fill.get_unchecked_mut(b) = 0;
                    log.push(FragmentDescriptor {
                        bucket_id: b as u32,
                        size: c as u32,
                    });
                } else {
                    *pool.fill.get_unchecked_mut(b) = (fill + 1) as u32;
                }
            }
        }
        r += take;
    }

    // Flush the remaining partial fragments in bucket order. Most fragments
    // hold only a few keys on second-level passes, so short copies are done
    // element-wise instead of through memcpy.
    for b in 0..fanout {
        let s = pool.fill[b] as usize;
        if s == 0 {
            continue;
        }
        // SAFETY: w + s <= n (the flushed keys were all consumed from the
        // range) and b * c + s <= storage length.
        unsafe {
            let src = pool.storage.as_ptr().add(b * c);
            let dst = range.as_mut_ptr().add(w);
            debug_assert!(w + s <= n);
            if s <= 16 {
                for t in 0..s {
                    *dst.add(t) = *src.add(t);
                }
            } else {
                std::ptr::copy_nonoverlapping(src, dst, s);
            }
        }
        w += s;
        log.push(FragmentDescriptor {
            bucket_id: b as u32,
            size: s as u32,
        });
        pool.fill[b] = 0;
    }
    debug_assert_eq!(w, n);

    // One log entry per flushed fragment, so the per-bucket key counts are
    // the per-bucket log sums.
    for d in log.iter() {
        bucket_sizes[d.bucket_id as usize] += d.size as usize;
    }
}

/// How [`defragment`] rearranges the range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefragMode {
    /// Bounded auxiliary memory: partial fragments are parked in `scratch`
    /// (needs `fanout * capacity` keys; the idle fragment pool fits exactly),
    /// full fragments are permuted by cycle-following with one spare
    /// fragment buffer, and a right-to-left pass interleaves the partials.
    Strict,
    /// Gathers through a full-size copy of the range. Exists as the
    /// differential-testing oracle for `Strict`; `scratch` is not used.
    Reference,
}

/// Reusable index buffers for [`defragment`], sized by bucket count and
/// fragment count. Entry counts stay proportional to
/// `range_len / capacity + fanout`.
#[derive(Debug, Default)]
pub(crate) struct DefragWork {
    full_count: Vec<u32>,
    group_cell: Vec<u32>,
    partial_len: Vec<u32>,
    dst: Vec<u32>,
    inv: Vec<u32>,
    visited: Vec<bool>,
}

/// Rearranges a partitioned range so each bucket occupies one contiguous
/// sub-range, and returns the bucket start offsets (prefix sums of the
/// bucket sizes).
///
/// Fragments keep their log order within a bucket. Fails with
/// `CorruptPartitionState` if `result` is inconsistent with the range.
pub fn defragment<K: SortKey>(
    range: &mut [K],
    result: &PartitionResult,
    scratch: &mut [K],
    mode: DefragMode,
) -> Result<Vec<usize>, PartitionError> {
    let mut offsets = Vec::new();
    let mut work = DefragWork::default();
    defragment_core(
        range,
        &result.fragment_log,
        &result.bucket_sizes,
        result.capacity,
        scratch,
        mode,
        &mut offsets,
        &mut work,
    )?;
    Ok(offsets)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn defragment_core<K: SortKey>(
    range: &mut [K],
    log: &[FragmentDescriptor],
    bucket_sizes: &[usize],
    capacity: usize,
    scratch: &mut [K],
    mode: DefragMode,
    offsets: &mut Vec<usize>,
    work: &mut DefragWork,
) -> Result<(), PartitionError> {
    let f = bucket_sizes.len();
    let c = capacity;

    // Full fragments are flushed mid-scan and always precede the terminal
    // partials; consistency of the split is validated below.
    let full_cells = log.iter().take_while(|d| d.size as usize == c).count();

    work.full_count.clear();
    work.full_count.resize(f, 0);
    work.partial_len.clear();
    work.partial_len.resize(f, 0);
    let mut logged_total = 0usize;
    for d in &log[..full_cells] {
        let b = d.bucket_id as usize;
        if b >= f {
            return Err(PartitionError::CorruptPartitionState(
                "fragment bucket id out of range",
            ));
        }
        work.full_count[b] += 1;
        logged_total += c;
    }
    for d in &log[full_cells..] {
        let (b, s) = (d.bucket_id as usize, d.size as usize);
        if b >= f {
            return Err(PartitionError::CorruptPartitionState(
                "fragment bucket id out of range",
            ));
        }
        if s == 0 || s >= c {
            return Err(PartitionError::CorruptPartitionState(
                "full fragment after the terminal flush region",
            ));
        }
        if work.partial_len[b] != 0 {
            return Err(PartitionError::CorruptPartitionState(
                "bucket has more than one partial fragment",
            ));
        }
        work.partial_len[b] = s as u32;
        logged_total += s;
    }
    if logged_total != range.len() {
        return Err(PartitionError::CorruptPartitionState(
            "fragment sizes do not sum to the range length",
        ));
    }
    for b in 0..f {
        let by_log = work.full_count[b] as usize * c + work.partial_len[b] as usize;
        if by_log != bucket_sizes[b] {
            return Err(PartitionError::CorruptPartitionState(
                "fragment sizes do not match bucket sizes",
            ));
        }
    }

    offsets.clear();
    offsets.reserve(f);
    let mut acc = 0usize;
    for &s in bucket_sizes {
        offsets.push(acc);
        acc += s;
    }

    match mode {
        DefragMode::Reference => {
            let mut out = vec![K::ZERO; range.len()];
            let mut cursor = offsets.clone();
            let mut src = 0usize;
            for frag in log {
                let (b, s) = (frag.bucket_id as usize, frag.size as usize);
                out[cursor[b]..cursor[b] + s].copy_from_slice(&range[src..src + s]);
                cursor[b] += s;
                src += s;
            }
            range.copy_from_slice(&out);
        }
        DefragMode::Strict => {
            assert!(
                scratch.len() >= f * c,
                "strict defragmentation needs fanout * capacity scratch keys"
            );
            // With no full fragments everything was written by the terminal
            // flush; if that happened in ascending bucket order (as the
            // partition pass does), the range is already bucket-contiguous.
            let already_contiguous = full_cells == 0
                && log.windows(2).all(|w| w[0].bucket_id < w[1].bucket_id);
            if !already_contiguous {
                strict_defragment(
                    range,
                    log,
                    bucket_sizes.len(),
                    c,
                    scratch,
                    offsets,
                    full_cells,
                    work,
                );
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn strict_defragment<K: SortKey>(
    range: &mut [K],
    log: &[FragmentDescriptor],
    f: usize,
    c: usize,
    scratch: &mut [K],
    offsets: &[usize],
    full_cells: usize,
    work: &mut DefragWork,
) {

    // Phase 1: park every partial fragment in its bucket's scratch slot.
    let mut src = full_cells * c;
    for d in &log[full_cells..] {
        let (b, s) = (d.bucket_id as usize, d.size as usize);
        scratch[b * c..b * c + s].copy_from_slice(&range[src..src + s]);
        src += s;
    }

    // Phase 2: permute full fragments into bucket-grouped, cell-aligned
    // order. `dst` maps a source cell to its grouped cell; the inverse map
    // lets each cell be written exactly once per cycle, with a single spare
    // fragment buffer breaking the cycle.
    work.group_cell.clear();
    work.group_cell.reserve(f);
    let mut acc = 0u32;
    for b in 0..f {
        work.group_cell.push(acc);
        acc += work.full_count[b];
    }
    work.dst.clear();
    work.dst.resize(full_cells, 0);
    // Reuse the count array as per-bucket cursors; one increment per full
    // fragment restores the counts by the end of the loop.
    work.full_count.iter_mut().for_each(|s| *s = 0);
    for (j, d) in log[..full_cells].iter().enumerate() {
        let b = d.bucket_id as usize;
        work.dst[j] = work.group_cell[b] + work.full_count[b];
        work.full_count[b] += 1;
    }

    work.inv.clear();
    work.inv.resize(full_cells, 0);
    for (j, &d) in work.dst.iter().enumerate() {
        work.inv[d as usize] = j as u32;
    }

    let mut spare = vec![K::ZERO; c];
    work.visited.clear();
    work.visited.resize(full_cells, false);
    for s in 0..full_cells {
        if work.visited[s] || work.inv[s] as usize == s {
            work.visited[s] = true;
            continue;
        }
        spare.copy_from_slice(&range[s * c..s * c + c]);
        let mut cur = s;
        loop {
            work.visited[cur] = true;
            let from = work.inv[cur] as usize;
            if from == s {
                range[cur * c..cur * c + c].copy_from_slice(&spare);
                break;
            }
            range.copy_within(from * c..from * c + c, cur * c);
            cur = from;
        }
    }

    // Phase 3: right-to-left, slide each bucket's full block to its final
    // offset and append the parked partial. Processing high buckets first
    // means a block only ever moves right into space that is already free.
    for b in (0..f).rev() {
        let fulls = work.full_count[b] as usize * c;
        let grouped_start = work.group_cell[b] as usize * c;
        let final_start = offsets[b];
        debug_assert!(grouped_start <= final_start);
        if fulls > 0 && grouped_start != final_start {
            range.copy_within(grouped_start..grouped_start + fulls, final_start);
        }
        let p = work.partial_len[b] as usize;
        if p > 0 {
            let at = final_start + fulls;
            range[at..at + p].copy_from_slice(&scratch[b * c..b * c + p]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BucketLevel;

    /// Exact-eCDF model over a fixed key set: cdf(x) = |{k < x}| / n.
    struct ExactEcdf {
        sorted: Vec<f64>,
    }

    impl ExactEcdf {
        fn of(keys: &[f64]) -> Self {
            let mut sorted = keys.to_vec();
            sorted.sort_unstable_by(f64::total_cmp);
            Self { sorted }
        }
    }

    impl CdfModel<f64> for ExactEcdf {
        fn predict_cdf(&self, x: f64) -> f64 {
            let rank = self.sorted.partition_point(|&k| k < x);
            rank as f64 / self.sorted.len() as f64
        }
    }

    // Hand trace of the partitioning pass for [5,1,9,2,8,3] with the exact
    // eCDF model, f=2, c=2. Buckets: 5->1, 1->0, 9->1, 2->0, 8->1, 3->0.
    //
    //   read 5: Frag1=[5]
    //   read 1: Frag0=[1]
    //   read 9: Frag1=[5,9] full -> A=[5,9|9,2,8,3], log (1,2)
    //   read 2: Frag0=[1,2] full -> A=[5,9,1,2|8,3], log (0,2)
    //   read 8: Frag1=[8]
    //   read 3: Frag0=[3]
    //   flush bucket 0: A=[5,9,1,2,3|3], log (0,1)
    //   flush bucket 1: A=[5,9,1,2,3,8], log (1,1)
    #[test]
    fn hand_trace_partition_pass() {
        let mut keys = vec![5.0, 1.0, 9.0, 2.0, 8.0, 3.0];
        let model = ExactEcdf::of(&keys);
        let mut pool = FragmentPool::new(2, 2);
        let res = partition_pass(&mut keys, &model, BucketLevel::Root, 2, 2, &mut pool);
        assert_eq!(keys, vec![5.0, 9.0, 1.0, 2.0, 3.0, 8.0]);
        assert_eq!(res.bucket_sizes(), &[3, 3]);
        let log: Vec<(u32, u32)> = res
            .fragment_log()
            .iter()
            .map(|d| (d.bucket_id, d.size))
            .collect();
        assert_eq!(log, vec![(1, 2), (0, 2), (0, 1), (1, 1)]);
        assert!(pool.is_empty());

        // Continuation: defragmenting gathers bucket 0 ([1,2] then [3]) ahead
        // of bucket 1 ([5,9] then [8]).
        let offsets = defragment(&mut keys, &res, pool.storage_mut(), DefragMode::Strict).unwrap();
        assert_eq!(keys, vec![1.0, 2.0, 3.0, 5.0, 9.0, 8.0]);
        assert_eq!(offsets, vec![0, 3]);
    }

    #[test]
    fn equal_keys_collapse_to_one_bucket() {
        let mut keys = vec![4.0; 37];
        let model = ExactEcdf::of(&keys);
        let mut pool = FragmentPool::new(8, 4);
        let res = partition_pass(&mut keys, &model, BucketLevel::Root, 8, 4, &mut pool);
        assert_eq!(res.bucket_sizes().iter().sum::<usize>(), 37);
        assert_eq!(res.bucket_sizes().iter().filter(|&&s| s > 0).count(), 1);
        assert!(keys.iter().all(|&k| k == 4.0));
    }

    #[test]
    fn single_bucket_defragment_is_identity() {
        let mut keys = vec![3.0, 1.0, 2.0];
        let model = ExactEcdf::of(&keys); // fanout 1: everything lands in bucket 0
        let mut pool = FragmentPool::new(1, 2);
        let res = partition_pass(&mut keys, &model, BucketLevel::Root, 1, 2, &mut pool);
        let before = keys.clone();
        let offsets = defragment(&mut keys, &res, pool.storage_mut(), DefragMode::Strict).unwrap();
        assert_eq!(offsets, vec![0]);
        assert_eq!(keys, before);
    }

    #[test]
    fn corrupt_result_is_rejected() {
        let mut keys = vec![1.0, 2.0, 3.0];
        let res = PartitionResult::new_raw(
            vec![2, 2], // sums to 4, range is 3
            vec![FragmentDescriptor {
                bucket_id: 0,
                size: 2,
            }],
            2,
        );
        let mut scratch = vec![0.0; 4];
        let err = defragment(&mut keys, &res, &mut scratch, DefragMode::Reference).unwrap_err();
        assert_eq!(
            err,
            PartitionError::CorruptPartitionState("fragment sizes do not sum to the range length")
        );
    }

    #[test]
    fn duplicate_partials_are_rejected() {
        let mut keys = vec![1.0, 2.0];
        let res = PartitionResult::new_raw(
            vec![2, 0],
            vec![
                FragmentDescriptor {
                    bucket_id: 0,
                    size: 1,
                },
                FragmentDescriptor {
                    bucket_id: 0,
                    size: 1,
                },
            ],
            2,
        );
        let mut scratch = vec![0.0; 4];
        let err = defragment(&mut keys, &res, &mut scratch, DefragMode::Strict).unwrap_err();
        assert_eq!(
            err,
            PartitionError::CorruptPartitionState("bucket has more than one partial fragment")
        );
    }
}
