//! LSD radix sort baseline: 8-bit digits, up to 8 passes over the 64-bit
//! order-preserving key image (identity for `u64`, sign/exponent bit flip
//! for `f64`). Passes whose digit is constant across the input are skipped.

use crate::key::SortKey;

pub fn lsd_radix_sort<K: SortKey>(keys: &mut [K]) {
    let n = keys.len();
    if n <= 1 {
        return;
    }
    assert!(n <= u32::MAX as usize, "radix baseline counts with u32");

    let mut a: Vec<u64> = keys.iter().map(|k| k.to_radix()).collect();
    let mut b = vec![0u64; n];

    // All eight digit histograms in one read pass.
    let mut hist = vec![[0u32; 256]; 8];
    for &v in &a {
        for (d, h) in hist.iter_mut().enumerate() {
            h[((v >> (8 * d)) & 0xFF) as usize] += 1;
        }
    }

    let mut src = &mut a;
    let mut dst = &mut b;
    for (d, h) in hist.iter().enumerate() {
        if h.iter().any(|&c| c as usize == n) {
            continue; // constant digit, nothing to move
        }
        let mut offsets = [0u32; 256];
        let mut acc = 0u32;
        for (o, &c) in offsets.iter_mut().zip(h.iter()) {
            *o = acc;
            acc += c;
        }
        let shift = 8 * d;
        for &v in src.iter() {
            let digit = ((v >> shift) & 0xFF) as usize;
            dst[offsets[digit] as usize] = v;
            offsets[digit] += 1;
        }
        std::mem::swap(&mut src, &mut dst);
    }

    for (k, &v) in keys.iter_mut().zip(src.iter()) {
        *k = K::from_radix(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_u64() {
        let mut keys: Vec<u64> = (0..10_000).map(|i| (i * 2654435761u64) % 77777).collect();
        let mut expect = keys.clone();
        expect.sort_unstable();
        lsd_radix_sort(&mut keys);
        assert_eq!(keys, expect);
    }

    #[test]
    fn sorts_f64_with_negatives() {
        let mut keys: Vec<f64> = (0..5000)
            .map(|i| ((i * 37 % 1000) as f64 - 500.0) * 1.25)
            .collect();
        let mut expect = keys.clone();
        expect.sort_unstable_by(f64::total_cmp);
        lsd_radix_sort(&mut keys);
        assert_eq!(keys, expect);
    }

    #[test]
    fn handles_trivial_inputs() {
        let mut empty: Vec<u64> = vec![];
        lsd_radix_sort(&mut empty);
        let mut one = vec![3.5f64];
        lsd_radix_sort(&mut one);
        assert_eq!(one, vec![3.5]);
    }
}
