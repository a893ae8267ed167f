//! Arbitrary-precision arithmetic kernels: factorization, radical, cosocle,
//! p-adic valuation, multiplicative order, Euler phi, Carmichael lambda.
//!
//! Everything here is a pure function of its inputs; the only shared state is
//! the read-only prime table.

pub mod factor;
pub mod primes;

pub use factor::{
    cyclotomic_value, factorize, factorize_power_minus_one, factorize_power_plus_one,
    factorize_u64, perfect_power, FactorBudget, Factorization,
};
pub use primes::{is_prime, is_prime_u64, sieve_primes, small_primes};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// rad(n): the product of the distinct prime factors of n; rad(1) = 1.
pub fn radical(n: &BigUint) -> Result<BigUint> {
    Ok(factorize(n, &FactorBudget::default())?.radical())
}

/// cosocle(n) = n / rad(n); 1 for every squarefree n.
pub fn cosocle(n: &BigUint) -> Result<BigUint> {
    Ok(factorize(n, &FactorBudget::default())?.cosocle())
}

/// v_p(n): the exponent of the prime p in n. Requires n != 0.
pub fn p_adic_valuation(n: &BigUint, p: &BigUint) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::InvalidTriple("v_p(0) is undefined".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(v);
        }
        m = q;
        v += 1;
    }
}

/// ord_p(n): least t >= 1 with n^t = 1 mod p.
///
/// Computed by factoring p - 1 and stripping prime factors from the group
/// exponent, not by brute stepping.
pub fn multiplicative_order(n: &BigUint, p: &BigUint) -> Result<BigUint> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    if (n % p).is_zero() {
        return Err(Error::NotCoprime {
            n: n.clone(),
            p: p.clone(),
        });
    }
    let group = p - 1u32;
    let f = factorize(&group, &FactorBudget::default())?;
    let mut order = group.clone();
    for (q, e) in f.entries() {
        for _ in 0..*e {
            let candidate = &order / q;
            if n.modpow(&candidate, p).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    debug_assert!(n.modpow(&order, p).is_one());
    Ok(order)
}

/// Euler's totient, from the factorization of n.
pub fn euler_phi(n: &BigUint) -> Result<BigUint> {
    let f = factorize(n, &FactorBudget::default())?;
    let mut acc = BigUint::one();
    for (p, e) in f.entries() {
        acc *= p.pow(*e - 1) * (p - 1u32);
    }
    Ok(acc)
}

/// Carmichael's function: the least universal exponent modulo n.
///
/// lambda(2) = 1, lambda(4) = 2, lambda(2^e) = 2^{e-2} for e >= 3,
/// lambda(p^e) = p^{e-1}(p - 1) for odd p, combined by lcm.
pub fn carmichael_lambda(n: &BigUint) -> Result<BigUint> {
    let f = factorize(n, &FactorBudget::default())?;
    let two = BigUint::from(2u32);
    let mut acc = BigUint::one();
    for (p, e) in f.entries() {
        let part = if *p == two {
            match e {
                1 => BigUint::one(),
                2 => two.clone(),
                _ => two.pow(e - 2),
            }
        } else {
            p.pow(*e - 1) * (p - 1u32)
        };
        acc = acc.lcm(&part);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(&big(75)).unwrap(), big(15));
        assert_eq!(radical(&big(1)).unwrap(), big(1));
        assert_eq!(radical(&big(676)).unwrap(), big(26));
    }

    #[test]
    fn cosocle_examples() {
        assert_eq!(cosocle(&big(32)).unwrap(), big(16));
        for sf in [1u64, 2, 6, 30, 105] {
            assert_eq!(cosocle(&big(sf)).unwrap(), big(1));
        }
    }

    #[test]
    fn cosocle_55_pow_40_minus_1() {
        let n = big(55).pow(40) - 1u32;
        let f = factorize_power_minus_one(&big(55), 40, &FactorBudget::default()).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.cosocle(), big(288));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p_adic_valuation(&big(3024), &big(2)).unwrap(), 4);
        for p in [2u64, 3, 5, 97] {
            assert_eq!(p_adic_valuation(&big(1), &big(p)).unwrap(), 0);
        }
        let n = big(55).pow(40) - 1u32;
        assert_eq!(p_adic_valuation(&n, &big(2)).unwrap(), 6);
        assert!(matches!(
            p_adic_valuation(&big(12), &big(4)),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(&big(16), &big(5)).unwrap(), big(1));
        assert_eq!(multiplicative_order(&big(1), &big(7)).unwrap(), big(1));
        assert_eq!(multiplicative_order(&big(3), &big(5)).unwrap(), big(4));
        assert!(matches!(
            multiplicative_order(&big(10), &big(5)),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(&big(75)).unwrap(), big(40));
        assert_eq!(euler_phi(&big(1)).unwrap(), big(1));
        assert_eq!(euler_phi(&big(55)).unwrap(), big(40));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(carmichael_lambda(&big(32)).unwrap(), big(8));
        assert_eq!(carmichael_lambda(&big(25)).unwrap(), big(20));
        assert_eq!(carmichael_lambda(&big(1)).unwrap(), big(1));
        assert_eq!(carmichael_lambda(&big(2)).unwrap(), big(1));
        assert_eq!(carmichael_lambda(&big(4)).unwrap(), big(2));
    }

    #[test]
    fn lambda_divides_phi() {
        for n in 1u64..=2000 {
            let l = carmichael_lambda(&big(n)).unwrap();
            let p = euler_phi(&big(n)).unwrap();
            assert!((&p % &l).is_zero(), "lambda({n}) must divide phi({n})");
        }
    }
}
