//! Segmented radical sieve: bulk computation of rad(n) over an interval
//! without factoring any single integer.

use num_integer::Roots;

use crate::arith::sieve_primes;
use crate::error::{Error, Result};

/// Largest permitted segment length; larger requests must be split by the
/// caller so memory stays bounded.
pub const MAX_SEGMENT: u64 = 1 << 26;

/// Radical table for [lo, hi): entry i holds rad(lo + i).
///
/// Every prime up to sqrt(hi) marks its multiples in the segment,
/// multiplying it into the radical and dividing it out of a residual copy;
/// whatever remains afterwards is a single prime above sqrt(hi) and is
/// multiplied in last.
pub fn sieve_radicals(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo < 1 || hi <= lo || hi - lo > MAX_SEGMENT {
        return Err(Error::SegmentTooLarge { lo, hi });
    }
    let len = (hi - lo) as usize;
    let mut rad = vec![1u64; len];
    let mut rem: Vec<u64> = (lo..hi).collect();
    let root = (hi - 1).sqrt();
    let limit = usize::try_from(root + 1).map_err(|_| Error::SegmentTooLarge { lo, hi })?;
    for &p in &sieve_primes(limit) {
        let p = p as u64;
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            rad[i] *= p;
            while rem[i] % p == 0 {
                rem[i] /= p;
            }
            m += p;
        }
    }
    for i in 0..len {
        if rem[i] > 1 {
            rad[i] *= rem[i];
        }
    }
    Ok(rad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::radical;
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;

    #[test]
    fn small_segment_by_hand() {
        let r = sieve_radicals(2, 10).unwrap();
        assert_eq!(r, vec![2, 3, 2, 5, 6, 7, 2, 3]);
    }

    #[test]
    fn covers_known_values() {
        let r = sieve_radicals(600, 700).unwrap();
        assert_eq!(r[675 - 600], 15);
        assert_eq!(r[676 - 600], 26);
        let r = sieve_radicals(1, 2).unwrap();
        assert_eq!(r, vec![1]);
    }

    #[test]
    fn agrees_with_single_radical() {
        let lo = 99_999_000u64;
        let r = sieve_radicals(lo, lo + 1000).unwrap();
        for (i, &v) in r.iter().enumerate() {
            let n = lo + i as u64;
            let expect = radical(&BigUint::from(n)).unwrap().to_u64().unwrap();
            assert_eq!(v, expect, "rad({n})");
        }
    }

    #[test]
    fn oversized_segment_rejected() {
        assert!(matches!(
            sieve_radicals(1, 2 + MAX_SEGMENT),
            Err(Error::SegmentTooLarge { .. })
        ));
    }
}
