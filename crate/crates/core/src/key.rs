//! Key abstraction shared by the model, the partitioner and the baselines.
//!
//! Two instantiations are supported: `f64` and `u64`. Both map into a common
//! 64-bit, order-preserving radix image which the LSD radix baseline and the
//! comparison helpers build on.

use std::cmp::Ordering;

/// A 64-bit sortable key.
///
/// The trait deliberately stays tiny: a float view for the CDF model, a NaN
/// probe and an order-preserving `u64` image. Everything else derives from
/// those.
pub trait SortKey: Copy + PartialOrd + Send + Sync + std::fmt::Debug + 'static {
    /// Filler value for scratch buffers.
    const ZERO: Self;
    /// Whether this type has unordered values (NaN) that must be rejected.
    const HAS_UNORDERED: bool;

    /// Lossy float view used as model input.
    fn as_f64(self) -> f64;

    /// True for values that do not participate in the total order (float NaN).
    fn is_unordered(self) -> bool;

    /// Order-preserving mapping into `u64`: `a <= b` iff
    /// `a.to_radix() <= b.to_radix()` for all ordered values.
    fn to_radix(self) -> u64;

    /// Inverse of [`SortKey::to_radix`].
    fn from_radix(bits: u64) -> Self;

    /// Raw 64-bit representation, used for binary file I/O. Unlike
    /// [`SortKey::to_radix`] this does not reorder anything.
    fn raw_bits(self) -> u64;

    /// Inverse of [`SortKey::raw_bits`].
    fn from_raw_bits(bits: u64) -> Self;

    /// Total order on ordered values; `u64` compares natively, `f64` uses the
    /// IEEE total order (callers must have rejected NaN already).
    #[inline]
    fn total_cmp_keys(&self, other: &Self) -> Ordering {
        self.to_radix().cmp(&other.to_radix())
    }

    /// The platform comparison sort for this key type.
    fn sort_slice(keys: &mut [Self]);
}

impl SortKey for u64 {
    const ZERO: Self = 0;
    const HAS_UNORDERED: bool = false;

    #[inline(always)]
    fn as_f64(self) -> f64 {
        self as f64
    }

    #[inline(always)]
    fn is_unordered(self) -> bool {
        false
    }

    #[inline(always)]
    fn to_radix(self) -> u64 {
        self
    }

    #[inline(always)]
    fn from_radix(bits: u64) -> Self {
        bits
    }

    #[inline(always)]
    fn raw_bits(self) -> u64 {
        self
    }

    #[inline(always)]
    fn from_raw_bits(bits: u64) -> Self {
        bits
    }

    fn sort_slice(keys: &mut [Self]) {
        keys.sort_unstable();
    }
}

impl SortKey for f64 {
    const ZERO: Self = 0.0;
    const HAS_UNORDERED: bool = true;

    #[inline(always)]
    fn as_f64(self) -> f64 {
        self
    }

    #[inline(always)]
    fn is_unordered(self) -> bool {
        self.is_nan()
    }

    // Standard float-flip: negative values get all bits flipped, positive
    // values get the sign bit flipped. Monotone over the IEEE total order.
    #[inline(always)]
    fn to_radix(self) -> u64 {
        let bits = self.to_bits();
        let mask = (((bits as i64) >> 63) as u64) | 0x8000_0000_0000_0000;
        bits ^ mask
    }

    #[inline(always)]
    fn from_radix(bits: u64) -> Self {
        let mask = ((!bits as i64 >> 63) as u64) | 0x8000_0000_0000_0000;
        f64::from_bits(bits ^ mask)
    }

    #[inline(always)]
    fn raw_bits(self) -> u64 {
        self.to_bits()
    }

    #[inline(always)]
    fn from_raw_bits(bits: u64) -> Self {
        f64::from_bits(bits)
    }

    fn sort_slice(keys: &mut [Self]) {
        keys.sort_unstable_by(f64::total_cmp);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radix_image_preserves_order_f64() {
        let vals = [
            f64::NEG_INFINITY,
            -1.0e300,
            -2.5,
            -0.0,
            0.0,
            1.0e-300,
            3.5,
            1.0e300,
            f64::INFINITY,
        ];
        for w in vals.windows(2) {
            assert!(w[0].to_radix() <= w[1].to_radix(), "{:?}", w);
        }
        for &v in &vals {
            assert_eq!(f64::from_radix(v.to_radix()).to_bits(), v.to_bits());
        }
    }

    #[test]
    fn radix_image_roundtrips_u64() {
        for v in [0u64, 1, 42, u64::MAX / 2, u64::MAX] {
            assert_eq!(u64::from_radix(v.to_radix()), v);
        }
    }
}
