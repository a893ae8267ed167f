//! Integer factorization: trial division, Brent's cycle variant of Pollard
//! rho, and a structure-aware path for numbers of the form c^k - 1 that
//! splits off cyclotomic factors before any generic work.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::primes::{is_prime, is_prime_u64, small_primes};
use crate::error::{Error, Result};

/// Caps on the work `factorize` may spend before giving up.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorBudget {
    /// Trial-divide by table primes up to this bound.
    pub max_trial_prime: u64,
    /// Brent-rho iterations per splitting attempt.
    pub rho_iteration_cap: u64,
    /// Accept probable primes above the deterministic 64-bit threshold.
    pub allow_probable_prime: bool,
}

impl Default for FactorBudget {
    fn default() -> Self {
        // Sized so every number in the survey tables factors in well under a
        // second; callers chasing larger cofactors raise the rho cap.
        FactorBudget {
            max_trial_prime: 100_000,
            rho_iteration_cap: 1 << 26,
            allow_probable_prime: true,
        }
    }
}

impl FactorBudget {
    pub fn with_rho_cap(cap: u64) -> Self {
        FactorBudget {
            rho_iteration_cap: cap,
            ..Default::default()
        }
    }
}

/// Exact prime factorization: strictly increasing primes with exponents >= 1.
/// The empty factorization represents 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    entries: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { entries: vec![] }
    }

    /// Builds from unordered prime/exponent pairs, merging duplicates.
    /// Every base must be prime.
    pub fn from_parts(parts: impl IntoIterator<Item = (BigUint, u32)>) -> Result<Self> {
        let mut map = std::collections::BTreeMap::new();
        for (p, e) in parts {
            if e == 0 {
                continue;
            }
            if !is_prime(&p) {
                return Err(Error::NotPrime(p));
            }
            *map.entry(p).or_insert(0u32) += e;
        }
        Ok(Factorization {
            entries: map.into_iter().collect(),
        })
    }

    pub fn entries(&self) -> &[(BigUint, u32)] {
        &self.entries
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.entries
            .iter()
            .find(|(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Re-multiplies the entries.
    pub fn value(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &self.entries {
            acc *= p.pow(*e);
        }
        acc
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, _) in &self.entries {
            acc *= p;
        }
        acc
    }

    /// value / radical.
    pub fn cosocle(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &self.entries {
            acc *= p.pow(*e - 1);
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.entries.iter().all(|&(_, e)| e == 1)
    }

    /// All divisors, ascending.
    pub fn divisors_ascending(&self) -> Vec<BigUint> {
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.entries {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..*e {
                    cur *= p;
                    next.push(cur.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }

    fn merge(&mut self, other: Factorization) {
        let mut map: std::collections::BTreeMap<BigUint, u32> =
            self.entries.drain(..).collect();
        for (p, e) in other.entries {
            *map.entry(p).or_insert(0) += e;
        }
        self.entries = map.into_iter().collect();
    }
}

/// Factor a positive integer within the given budget.
pub fn factorize(n: &BigUint, budget: &FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidTriple("cannot factor 0".into()));
    }
    if n.is_one() {
        return Ok(Factorization::one());
    }
    let mut entries: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();

    for &p in small_primes() {
        let p64 = p as u64;
        if p64 > budget.max_trial_prime {
            break;
        }
        if (&rest % p).is_zero() {
            let big_p = BigUint::from(p);
            let mut e = 0u32;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            entries.push((big_p, e));
        }
        if rest.is_one() {
            break;
        }
        // Past the square root of the remainder, the remainder is prime.
        let p_sq = BigUint::from(p64 * p64);
        if !rest.is_one() && p_sq > rest {
            break;
        }
    }

    if !rest.is_one() {
        split_recursive(rest, budget, &mut entries)?;
    }
    Factorization::from_parts(entries)
}

/// Complete factorization of a u64 (no budget; rho always succeeds here).
pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut rest = n;
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            match out.iter_mut().find(|(p, _)| *p == m) {
                Some((_, e)) => *e += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = rho_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out
}

fn split_recursive(
    n: BigUint,
    budget: &FactorBudget,
    entries: &mut Vec<(BigUint, u32)>,
) -> Result<()> {
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(m64) = m.to_u64() {
            for (p, e) in factorize_u64(m64) {
                entries.push((BigUint::from(p), e));
            }
            continue;
        }
        if is_prime(&m) {
            entries.push((m, 1));
            continue;
        }
        // Perfect powers defeat rho; peel them first.
        if let Some((root, e)) = perfect_power(&m) {
            let mut sub = Vec::new();
            split_recursive(root, budget, &mut sub)?;
            for (p, pe) in sub {
                entries.push((p, pe * e));
            }
            continue;
        }
        match rho_big(&m, budget.rho_iteration_cap) {
            Some(d) => {
                let q = &m / &d;
                stack.push(d);
                stack.push(q);
            }
            None => return Err(Error::BudgetExceeded { cofactor: m }),
        }
    }
    Ok(())
}

/// Largest e >= 2 with n = r^e, if any, returning (r, e).
pub fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits();
    if bits < 2 {
        return None;
    }
    for e in (2..=bits as u32).rev() {
        let r = n.nth_root(e);
        if r.pow(e) == *n {
            return Some((r, e));
        }
    }
    None
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Brent's variant of Pollard rho for odd composite u64 inputs.
fn rho_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let step = |x: u64, c: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let mut c = 1u64;
    loop {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = y;
        while d == 1 {
            x = y;
            for _ in 0..r {
                y = step(y, c);
            }
            let mut k = 0u64;
            while k < r && d == 1 {
                ys = y;
                let span = 128.min(r - k);
                for _ in 0..span {
                    y = step(y, c);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                d = gcd_u64(q, n);
                k += span;
            }
            r *= 2;
        }
        if d == n {
            // Backtrack one step at a time.
            d = 1;
            while d == 1 {
                ys = step(ys, c);
                d = gcd_u64(x.abs_diff(ys), n);
            }
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if a == 0 {
        b
    } else {
        gcd_u64(b % a, a)
    }
}

/// Brent rho over BigUint with batched gcds. Returns a nontrivial factor or
/// None once the iteration cap is spent.
fn rho_big(n: &BigUint, cap: u64) -> Option<BigUint> {
    let one = BigUint::one();
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut spent = 0u64;
    for c in 1u32..64 {
        let c_big = BigUint::from(c);
        let step = |x: &BigUint| (x * x + &c_big) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut ys = y.clone();
        let mut q = BigUint::one();
        let mut r: u64 = 1;
        let mut d = BigUint::one();
        while d.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0u64;
            while k < r && d.is_one() {
                ys = y.clone();
                let span = 256.min(r - k);
                for _ in 0..span {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                d = q.gcd(n);
                k += span;
                spent += span;
                if spent > cap {
                    return None;
                }
            }
            r *= 2;
        }
        if d == *n {
            d = BigUint::one();
            while d.is_one() {
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                d = diff.gcd(n);
                spent += 1;
                if spent > cap {
                    return None;
                }
            }
        }
        if d != *n && d > one {
            return Some(d);
        }
    }
    None
}

/// Moebius function over small arguments.
fn moebius(n: u64) -> i32 {
    let mut m = n;
    let mut primes = 0;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if m > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

fn divisors_u64(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Value of the d-th cyclotomic polynomial at c, via the Moebius product
/// Phi_d(c) = prod_{e | d} (c^e - 1)^{mu(d/e)}.
pub fn cyclotomic_value(d: u64, c: &BigUint) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in divisors_u64(d) {
        let term = c.pow(e as u32) - 1u32;
        match moebius(d / e) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    &num / &den
}

/// Factorization of c^k - 1 that first splits the number into cyclotomic
/// pieces Phi_d(c) for d | k. Each piece is small relative to the whole and
/// its prime factors are either divisors of d or congruent to 1 mod d, which
/// the trial stage exploits.
pub fn factorize_power_minus_one(
    c: &BigUint,
    k: u64,
    budget: &FactorBudget,
) -> Result<Factorization> {
    let mut total = Factorization::one();
    for d in divisors_u64(k) {
        let piece = cyclotomic_value(d, c);
        if piece.is_one() {
            continue;
        }
        total.merge(factorize_piece(&piece, d, budget)?);
    }
    Ok(total)
}

/// Factorization of b^k + 1 for odd k, via b^k + 1 = (b^{2k} - 1)/(b^k - 1):
/// the cyclotomic pieces Phi_d(b) with d | 2k and d not dividing k.
pub fn factorize_power_plus_one(
    b: &BigUint,
    k: u64,
    budget: &FactorBudget,
) -> Result<Factorization> {
    let mut total = Factorization::one();
    for d in divisors_u64(2 * k) {
        if k % d == 0 {
            continue;
        }
        let piece = cyclotomic_value(d, b);
        if piece.is_one() {
            continue;
        }
        total.merge(factorize_piece(&piece, d, budget)?);
    }
    Ok(total)
}

fn factorize_piece(piece: &BigUint, d: u64, budget: &FactorBudget) -> Result<Factorization> {
    // Prime factors of Phi_d(c) divide d or are congruent to 1 mod d, so for
    // d > 2 the trial stage can step through the arithmetic progression.
    if d <= 2 || piece.to_u64().is_some() {
        return factorize(piece, budget);
    }
    let mut entries = Vec::new();
    let mut rest = piece.clone();
    for &p in small_primes() {
        if d % p as u64 != 0 {
            continue;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            entries.push((BigUint::from(p), 1));
        }
    }
    let mut q = d + 1;
    while q <= budget.max_trial_prime {
        if is_prime_u64(q) && (&rest % q).is_zero() {
            let bq = BigUint::from(q);
            while (&rest % q).is_zero() {
                rest /= q;
                entries.push((bq.clone(), 1));
            }
        }
        q += d;
    }
    if !rest.is_one() {
        split_recursive(rest, budget, &mut entries)?;
    }
    Factorization::from_parts(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn factor_675() {
        let f = factorize(&big(675), &FactorBudget::default()).unwrap();
        assert_eq!(
            f.entries(),
            &[(big(3), 3), (big(5), 2)],
            "675 = 3^3 * 5^2"
        );
        assert_eq!(f.radical(), big(15));
        assert_eq!(f.cosocle(), big(45));
    }

    #[test]
    fn factor_one_is_empty() {
        let f = factorize(&big(1), &FactorBudget::default()).unwrap();
        assert!(f.entries().is_empty());
        assert_eq!(f.value(), big(1));
        assert_eq!(f.radical(), big(1));
    }

    #[test]
    fn factor_21_pow_12_minus_1() {
        let n = big(21).pow(12) - 1u32;
        let f = factorize(&n, &FactorBudget::default()).unwrap();
        let expected: Vec<(BigUint, u32)> = vec![
            (big(2), 4),
            (big(5), 1),
            (big(11), 1),
            (big(13), 1),
            (big(17), 1),
            (big(61), 1),
            (big(421), 1),
            (big(463), 1),
            (big(3181), 1),
        ];
        assert_eq!(f.entries(), expected.as_slice());
        assert_eq!(f.value(), n);
    }

    #[test]
    fn structure_aware_matches_generic() {
        let c = big(21);
        let f = factorize_power_minus_one(&c, 12, &FactorBudget::default()).unwrap();
        assert_eq!(f.value(), big(21).pow(12) - 1u32);
        let g = factorize(&(big(21).pow(12) - 1u32), &FactorBudget::default()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn plus_side_structure() {
        // 8^5 + 1 = 3^2 * 11 * 331
        let f = factorize_power_plus_one(&big(8), 5, &FactorBudget::default()).unwrap();
        assert_eq!(f.value(), big(32769));
        assert_eq!(f.entries(), &[(big(3), 2), (big(11), 1), (big(331), 1)]);
    }

    #[test]
    fn perfect_power_detection() {
        assert_eq!(perfect_power(&big(2304)), Some((big(48), 2)));
        assert_eq!(perfect_power(&big(729)), Some((big(3), 6)));
        assert_eq!(perfect_power(&big(513)), None);
    }

    #[test]
    fn divisors_are_sorted() {
        let f = factorize(&big(48), &FactorBudget::default()).unwrap();
        let divs = f.divisors_ascending();
        let want: Vec<BigUint> = [1u64, 2, 3, 4, 6, 8, 12, 16, 24, 48]
            .iter()
            .map(|&x| big(x))
            .collect();
        assert_eq!(divs, want);
    }

    #[test]
    fn u64_factorizer_roundtrip() {
        for n in [2u64, 3025, 999_983, 10u64.pow(16) + 61, 675] {
            let f = factorize_u64(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            assert!(f.iter().all(|&(p, _)| is_prime_u64(p)));
        }
    }
}
