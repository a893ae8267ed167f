//! abc triples, their verification, and the quality statistic.
//!
//! A triple (a, b, c) of coprime positive integers with a + b = c is an abc
//! triple when rad(abc) < c. The unit form (1, c-1, c) admits three
//! equivalent criteria, all of which are computed and cross-checked here.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, FactorBudget, Factorization};
use crate::error::{Error, Result};

/// A candidate triple (1, c-1, c), keyed by c >= 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitTriple {
    c: BigUint,
}

impl UnitTriple {
    pub fn new(c: BigUint) -> Result<Self> {
        if c < BigUint::from(2u32) {
            return Err(Error::InvalidTriple(format!("c = {c} must be >= 2")));
        }
        Ok(UnitTriple { c })
    }

    pub fn c(&self) -> &BigUint {
        &self.c
    }

    pub fn to_general(&self) -> GeneralTriple {
        GeneralTriple {
            a: BigUint::one(),
            b: &self.c - 1u32,
            c: self.c.clone(),
        }
    }
}

/// A triple of coprime positive integers a + b = c, normalized to a <= b.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralTriple {
    a: BigUint,
    b: BigUint,
    c: BigUint,
}

impl GeneralTriple {
    pub fn new(a: BigUint, b: BigUint, c: BigUint) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidTriple("a and b must be positive".into()));
        }
        if &a + &b != c {
            return Err(Error::InvalidTriple(format!("{a} + {b} != {c}")));
        }
        if !a.gcd(&b).is_one() {
            return Err(Error::InvalidTriple(format!(
                "gcd({a}, {b}) != 1; components must be coprime"
            )));
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Ok(GeneralTriple { a, b, c })
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }
    pub fn b(&self) -> &BigUint {
        &self.b
    }
    pub fn c(&self) -> &BigUint {
        &self.c
    }
}

/// The three Proposition-style criteria for (1, c-1, c), evaluated together.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationEvidence {
    pub is_abc: bool,
    pub rad_c: BigUint,
    pub rad_c_minus_1: BigUint,
    pub cosocle_c: BigUint,
    pub cosocle_c_minus_1: BigUint,
}

/// Verify (1, c-1, c) by all three equivalent criteria and cross-check them:
/// cosocle(c-1) > rad(c), cosocle(c) > rad(c-1), and rad(c(c-1)) < c.
pub fn verify_unit(c: &BigUint) -> Result<VerificationEvidence> {
    verify_unit_with(c, &FactorBudget::default())
}

pub fn verify_unit_with(c: &BigUint, budget: &FactorBudget) -> Result<VerificationEvidence> {
    if c < &BigUint::from(2u32) {
        return Err(Error::InvalidTriple(format!("c = {c} must be >= 2")));
    }
    let fc = factorize(c, budget)?;
    let fm = factorize(&(c - 1u32), budget)?;
    Ok(evidence_from_factorizations(c, &fc, &fm))
}

pub(crate) fn evidence_from_factorizations(
    c: &BigUint,
    fc: &Factorization,
    fc_minus_1: &Factorization,
) -> VerificationEvidence {
    let rad_c = fc.radical();
    let rad_m = fc_minus_1.radical();
    let cos_c = fc.cosocle();
    let cos_m = fc_minus_1.cosocle();
    let crit1 = cos_m > rad_c;
    let crit2 = cos_c > rad_m;
    let crit3 = &rad_c * &rad_m < *c;
    assert_eq!(crit1, crit2, "criteria (i) and (ii) must agree for c = {c}");
    assert_eq!(crit1, crit3, "criteria (i) and (iii) must agree for c = {c}");
    VerificationEvidence {
        is_abc: crit1,
        rad_c,
        rad_c_minus_1: rad_m,
        cosocle_c: cos_c,
        cosocle_c_minus_1: cos_m,
    }
}

/// True iff rad(abc) < c.
pub fn verify_general(t: &GeneralTriple) -> Result<bool> {
    let budget = FactorBudget::default();
    Ok(rad_abc(t, &budget)? < *t.c())
}

fn rad_abc(t: &GeneralTriple, budget: &FactorBudget) -> Result<BigUint> {
    // a, b, c are pairwise coprime, so rad(abc) = rad(a) rad(b) rad(c).
    let ra = factorize(t.a(), budget)?.radical();
    let rb = factorize(t.b(), budget)?.radical();
    let rc = factorize(t.c(), budget)?.radical();
    Ok(ra * rb * rc)
}

/// Natural log of a positive BigUint, stable for values far beyond f64 range.
pub fn ln_big(n: &BigUint) -> f64 {
    if let Some(v) = n.to_f64() {
        if v.is_finite() {
            return v.ln();
        }
    }
    let bits = n.bits();
    let top = (n >> (bits - 64)).to_u64().expect("64 leading bits");
    (top as f64).ln() + ((bits - 64) as f64) * std::f64::consts::LN_2
}

/// quality(a, b, c) = log c / log rad(abc). Exceeds 1 exactly for abc triples.
pub fn quality(t: &GeneralTriple) -> Result<f64> {
    let r = rad_abc(t, &FactorBudget::default())?;
    Ok(ln_big(t.c()) / ln_big(&r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn unit_examples() {
        assert!(verify_unit(&big(9)).unwrap().is_abc);
        assert!(!verify_unit(&big(2)).unwrap().is_abc);
        let c = big(21).pow(12);
        assert!(!verify_unit(&c).unwrap().is_abc);
    }

    #[test]
    fn unit_evidence_fields() {
        let ev = verify_unit(&big(9)).unwrap();
        assert_eq!(ev.rad_c, big(3));
        assert_eq!(ev.cosocle_c_minus_1, big(4));
    }

    #[test]
    fn general_examples() {
        let t = GeneralTriple::new(big(2), big(3u64.pow(10) * 109), big(23u64.pow(5))).unwrap();
        assert!(verify_general(&t).unwrap());
        let t = GeneralTriple::new(big(1), big(2), big(3)).unwrap();
        assert!(!verify_general(&t).unwrap());
        let t = GeneralTriple::new(big(1), big(4374), big(4375)).unwrap();
        assert!(verify_general(&t).unwrap());
    }

    #[test]
    fn invalid_triples_rejected() {
        assert!(GeneralTriple::new(big(1), big(2), big(4)).is_err());
        assert!(GeneralTriple::new(big(2), big(4), big(6)).is_err());
    }

    #[test]
    fn quality_examples() {
        let q = quality(&GeneralTriple::new(big(1), big(8), big(9)).unwrap()).unwrap();
        assert!((q - 1.2263).abs() < 1e-4);
        let q = quality(&GeneralTriple::new(big(1), big(2400), big(2401)).unwrap()).unwrap();
        assert!((q - 1.4557).abs() < 1e-4);
        let t = GeneralTriple::new(big(2), big(3u64.pow(10) * 109), big(23u64.pow(5))).unwrap();
        let q = quality(&t).unwrap();
        assert!((q - 1.6299).abs() < 1e-4);
    }

    #[test]
    fn normalization_swaps_sides() {
        let t = GeneralTriple::new(big(8), big(1), big(9)).unwrap();
        assert_eq!(t.a(), &big(1));
        assert_eq!(t.b(), &big(8));
    }

    #[test]
    fn squarefree_side_is_never_abc() {
        // If c or c-1 is squarefree, its cosocle is 1 and the triple fails.
        for c in [2u64, 3, 6, 7, 11, 15, 35, 77] {
            assert!(!verify_unit(&big(c)).unwrap().is_abc);
        }
    }
}
