//! Primality testing and the shared small-prime table.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Upper bound of the precomputed prime table.
pub const PRIME_TABLE_LIMIT: u32 = 1 << 20;

static PRIME_TABLE: OnceLock<Vec<u32>> = OnceLock::new();

/// All primes below [`PRIME_TABLE_LIMIT`], built once and read-only thereafter.
pub fn small_primes() -> &'static [u32] {
    PRIME_TABLE.get_or_init(|| sieve_primes(PRIME_TABLE_LIMIT as usize))
}

/// Simple sieve of Eratosthenes, returning the primes below `limit`.
pub fn sieve_primes(limit: usize) -> Vec<u32> {
    if limit < 3 {
        return if limit > 2 { vec![2] } else { vec![] };
    }
    let mut composite = vec![false; limit];
    let mut primes = Vec::new();
    for n in 2..limit {
        if !composite[n] {
            primes.push(n as u32);
            let mut m = n * n;
            while m < limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    primes
}

#[inline]
fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is known to be
/// exact for all n < 3.3 * 10^24, which covers the full u64 range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality check for arbitrary-precision integers.
///
/// Deterministic below 2^64. Above, Miller-Rabin with 64 bases derived
/// deterministically from `n` itself, so reruns are bit-identical; the
/// residual error probability is below 4^-64 = 2^-128.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    for &p in small_primes().iter().take(100) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    // Deterministic base stream: a simple splitmix over a seed folded from n.
    let mut state = 0x9e3779b97f4a7c15u64;
    for byte in n.to_bytes_le() {
        state = state.wrapping_mul(0x100000001b3).wrapping_add(byte as u64);
    }
    let mut next_base = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };

    'round: for _ in 0..64 {
        let a = BigUint::from(next_base() % u64::MAX) % (n - 3u32) + &two;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

use num_integer::Integer;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_starts_correctly() {
        assert_eq!(&small_primes()[..8], &[2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn u64_primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3181));
        assert!(!is_prime_u64(3025));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime_u64(18_446_744_073_709_551_555));
    }

    #[test]
    fn biguint_primality() {
        // 2^89 - 1 is a Mersenne prime; 2^87 - 1 is composite.
        let m89 = (BigUint::from(1u32) << 89) - 1u32;
        let m87 = (BigUint::from(1u32) << 87) - 1u32;
        assert!(is_prime(&m89));
        assert!(!is_prime(&m87));
    }
}
