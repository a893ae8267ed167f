//! Bulk enumeration of abc triples (1, c-1, c) below a limit, built on the
//! segmented radical sieve.

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::families::FamilyId;
use crate::parallel::{run_map, Execution};
use crate::survey::sieve::{sieve_radicals, MAX_SEGMENT};

/// Default segment length for scans; small enough to keep several segments
/// in flight per core.
pub const DEFAULT_SEGMENT: u64 = 1 << 22;

/// Where a record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Sieved,
    Ingested,
    Family(FamilyId),
}

/// One verified abc triple with its survey annotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub quality: f64,
    /// (n, l) with c = n^l, l >= 2, n minimal (not itself a perfect power).
    pub power_minus: Option<(u64, u32)>,
    /// (n, l) with c = n^l + 1, l >= 2, n minimal.
    pub power_plus: Option<(u64, u32)>,
    pub provenance: Provenance,
}

impl TripleRecord {
    pub fn has_power_form(&self) -> bool {
        self.power_minus.is_some() || self.power_plus.is_some()
    }
}

/// Minimal-base representation n^l = v with l >= 2, if one exists.
///
/// Exponents are tried from large to small, so the first hit has the
/// maximal l and hence the minimal base n.
pub fn perfect_power_u64(v: u64) -> Option<(u64, u32)> {
    if v < 4 {
        return None;
    }
    let max_l = 63 - v.leading_zeros();
    for l in (2..=max_l).rev() {
        let r = v.nth_root(l);
        if pow_u64(r, l) == Some(v) {
            return Some((r, l));
        }
    }
    None
}

fn pow_u64(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub(crate) fn record_from_c(c: u64, rad_c: u64, rad_c_minus_1: u64) -> TripleRecord {
    let rad_abc = rad_c as u128 * rad_c_minus_1 as u128;
    TripleRecord {
        a: 1,
        b: c - 1,
        c,
        quality: (c as f64).ln() / (rad_abc as f64).ln(),
        power_minus: perfect_power_u64(c),
        power_plus: perfect_power_u64(c - 1),
        provenance: Provenance::Sieved,
    }
}

/// All c < c_limit with rad(c) rad(c-1) < c, ascending, one record each.
pub fn scan_unit_triples(c_limit: u64) -> Vec<TripleRecord> {
    scan_unit_triples_with(c_limit, DEFAULT_SEGMENT, Execution::default())
}

/// Segmented scan with explicit segment length and backend. The output is
/// independent of both knobs; segments overlap by one so rad(c-1) is always
/// at hand.
pub fn scan_unit_triples_with(
    c_limit: u64,
    segment: u64,
    exec: Execution,
) -> Vec<TripleRecord> {
    assert!(segment >= 2 && segment <= MAX_SEGMENT, "bad segment length");
    if c_limit < 4 {
        return Vec::new();
    }
    let mut bounds = Vec::new();
    let mut lo = 3u64;
    while lo < c_limit {
        let hi = (lo + segment).min(c_limit);
        bounds.push((lo, hi));
        lo = hi;
    }
    let per_segment = run_map(exec, bounds, |(lo, hi)| {
        let rad = sieve_radicals(lo - 1, hi).expect("segment within bounds");
        let mut found = Vec::new();
        for c in lo..hi {
            let rc = rad[(c - lo + 1) as usize];
            let rm = rad[(c - lo) as usize];
            if (rc as u128) * (rm as u128) < c as u128 {
                found.push(record_from_c(c, rc, rm));
            }
        }
        found
    });
    per_segment.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::verify_unit;
    use num_bigint::BigUint;

    #[test]
    fn perfect_power_minimal_base() {
        assert_eq!(perfect_power_u64(64), Some((2, 6)));
        assert_eq!(perfect_power_u64(16), Some((2, 4)));
        assert_eq!(perfect_power_u64(2304), Some((48, 2)));
        assert_eq!(perfect_power_u64(675), None);
        assert_eq!(perfect_power_u64(2), None);
        assert_eq!(perfect_power_u64(3u64.pow(11)), Some((3, 11)));
    }

    #[test]
    fn first_fifteen_c_values() {
        let got: Vec<u64> = scan_unit_triples(2305).iter().map(|r| r.c).collect();
        assert_eq!(
            got,
            vec![9, 49, 64, 81, 225, 243, 289, 513, 625, 676, 729, 961, 1025, 1216, 2304]
        );
    }

    #[test]
    fn empty_below_nine() {
        assert!(scan_unit_triples(9).is_empty());
        assert_eq!(scan_unit_triples(10).len(), 1);
    }

    #[test]
    fn matches_per_c_verification() {
        let scanned: Vec<u64> = scan_unit_triples(20_000).iter().map(|r| r.c).collect();
        let brute: Vec<u64> = (2u64..20_000)
            .filter(|&c| verify_unit(&BigUint::from(c)).unwrap().is_abc)
            .collect();
        assert_eq!(scanned, brute);
    }

    #[test]
    fn segmentation_is_invisible() {
        let limit = 300_000;
        let mono = scan_unit_triples_with(limit, MAX_SEGMENT, Execution::Sequential);
        let seg = scan_unit_triples_with(limit, 1 << 12, Execution::Parallel);
        assert_eq!(mono, seg);
    }

    #[test]
    fn record_fields() {
        let records = scan_unit_triples(10);
        let r = &records[0];
        assert_eq!((r.a, r.b, r.c), (1, 8, 9));
        assert!((r.quality - 1.2263).abs() < 1e-4);
        assert_eq!(r.power_minus, Some((3, 2)));
        assert_eq!(r.power_plus, Some((2, 3)));
    }
}
