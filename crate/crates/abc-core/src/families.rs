//! Certified generators of abc-triple families and the transfer maps.
//!
//! Every emitted triple carries a witness divisor m of the appropriate side
//! (c - 1 or b + 1) with cosocle(m) larger than the radical of the other
//! side. The witness is the divisor constructed in the proof of the family's
//! defining statement, so certificates are checkable without factoring the
//! full side.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::{gcd, Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    carmichael_lambda, cosocle, euler_phi, factorize_u64, is_prime_u64, multiplicative_order,
    radical, small_primes,
};
use crate::error::{Error, Result};
use crate::power::power_valuation;
use crate::triple::{verify_unit, GeneralTriple, UnitTriple};

/// The eleven triple families, identified by their `corX.Y` codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyId {
    /// c = n^{phi(n) k} for odd n, via d = gcd(n-1, phi(n)).
    EulerPhi,
    /// c = n^{phi(n) k}, via d = gcd(n^{phi(n)}-1, phi(n)).
    EulerPhiRefined,
    /// c = n^{lambda(m) k} for coprime m, n with cosocle(m) > rad(n) > 1.
    Carmichael,
    /// c = n^{p(p-1) k} for an odd prime p > rad(n).
    GranvilleTucker,
    /// c = n^{p ord_p(n) k} for an odd prime p > rad(n).
    OrderRefined,
    /// c = n^{(n-1) k} for n odd, or even and non-squarefree.
    OddOrNonSquarefree,
    /// c = n^{(n+1) k} with (n+1)k even.
    NPlusOne,
    /// c = (2^j - 1)^{2k}.
    PowerOfTwoMinusOne,
    /// c = (n^j - 1)^{nk} with nk even.
    GeneralPower,
    /// b = n^{(n+1) k} for n even, k odd; triple (1, b, b+1).
    EvenNPlusOnePlus,
    /// b = (n^j - 1)^{nk} for n odd, k odd; triple (1, b, b+1).
    OddPowerPlus,
}

impl FamilyId {
    pub const ALL: [FamilyId; 11] = [
        FamilyId::EulerPhi,
        FamilyId::EulerPhiRefined,
        FamilyId::Carmichael,
        FamilyId::GranvilleTucker,
        FamilyId::OrderRefined,
        FamilyId::OddOrNonSquarefree,
        FamilyId::NPlusOne,
        FamilyId::PowerOfTwoMinusOne,
        FamilyId::GeneralPower,
        FamilyId::EvenNPlusOnePlus,
        FamilyId::OddPowerPlus,
    ];

    pub fn code(self) -> &'static str {
        match self {
            FamilyId::EulerPhi => "cor3.2",
            FamilyId::EulerPhiRefined => "cor3.3",
            FamilyId::Carmichael => "cor3.4",
            FamilyId::GranvilleTucker => "cor3.5",
            FamilyId::OrderRefined => "cor3.6",
            FamilyId::OddOrNonSquarefree => "cor3.7",
            FamilyId::NPlusOne => "cor3.8",
            FamilyId::PowerOfTwoMinusOne => "cor3.9",
            FamilyId::GeneralPower => "cor3.10",
            FamilyId::EvenNPlusOnePlus => "cor3.11",
            FamilyId::OddPowerPlus => "cor3.12",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.code() == s)
            .ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("unknown family id {s:?}; expected cor3.2 .. cor3.12"),
            })
    }
}

/// Parameter record for a family; the variant must match the family's schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyParams {
    N { n: u64 },
    NP { n: u64, p: u64 },
    MN { m: u64, n: u64 },
    J { j: u32 },
    NJ { n: u64, j: u32 },
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyParams::N { n } => write!(f, "n={n}"),
            FamilyParams::NP { n, p } => write!(f, "n={n},p={p}"),
            FamilyParams::MN { m, n } => write!(f, "m={m},n={n}"),
            FamilyParams::J { j } => write!(f, "j={j}"),
            FamilyParams::NJ { n, j } => write!(f, "n={n},j={j}"),
        }
    }
}

/// Which side of the triple the witness divides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessSide {
    /// m | c - 1 and cosocle(m) > rad(c).
    DividesCMinusOne,
    /// m | b + 1 and cosocle(m) > rad(b).
    DividesBPlusOne,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyCertificate {
    pub family: FamilyId,
    pub params: FamilyParams,
    pub k: u64,
    pub triple: GeneralTriple,
    pub witness_m: BigUint,
    pub witness_side: WitnessSide,
}

impl FamilyCertificate {
    pub fn c(&self) -> &BigUint {
        self.triple.c()
    }
}

fn hypothesis(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(msg()))
    }
}

fn is_squarefree_u64(n: u64) -> bool {
    factorize_u64(n).iter().all(|&(_, e)| e == 1)
}

fn rad_u64(n: u64) -> u64 {
    factorize_u64(n).iter().map(|&(p, _)| p).product()
}

/// The per-k recipe of a family: a base, the exponent for this k, the
/// witness divisor, and the side it divides.
struct Blueprint {
    base: BigUint,
    exponent: u64,
    witness_m: BigUint,
    side: WitnessSide,
}

fn blueprint(family: FamilyId, params: &FamilyParams, k: u64) -> Result<Blueprint> {
    hypothesis(k >= 1, || "k must be a positive integer".into())?;
    let wrong_schema = || {
        Err(Error::HypothesisViolated(format!(
            "parameters {params} do not match the schema of family {family}"
        )))
    };
    match family {
        FamilyId::EulerPhi => {
            let FamilyParams::N { n } = *params else {
                return wrong_schema();
            };
            hypothesis(n > 1 && n % 2 == 1, || format!("n={n} must be odd and > 1"))?;
            let phi = euler_phi(&BigUint::from(n))?.to_u64().expect("phi of u64");
            let d = gcd(n - 1, phi);
            let v2 = |x: u64| x.trailing_zeros() as u64;
            let m = (BigUint::one() << (v2(4 * phi) - 2 * v2(d))) * BigUint::from(d) * d;
            let rad_n = BigUint::from(rad_u64(n));
            hypothesis(cosocle(&m)? > rad_n, || {
                format!("cosocle({m}) must exceed rad({n}) (fails e.g. for n=55)")
            })?;
            Ok(Blueprint {
                base: BigUint::from(n),
                exponent: phi.checked_mul(k).ok_or_else(overflow)?,
                witness_m: m,
                side: WitnessSide::DividesCMinusOne,
            })
        }
        FamilyId::EulerPhiRefined => {
            let FamilyParams::N { n } = *params else {
                return wrong_schema();
            };
            hypothesis(n > 1, || format!("n={n} must be > 1"))?;
            let nb = BigUint::from(n);
            let phi = euler_phi(&nb)?.to_u64().expect("phi of u64");
            // m = prod over primes p | gcd(n^phi - 1, phi) of p^{v_p(n^phi - 1)},
            // with the valuations read off the power structure, never n^phi - 1.
            let mut m = BigUint::one();
            let mut cos_m = BigUint::one();
            for (p, _) in factorize_u64(phi) {
                if n % p == 0 {
                    continue;
                }
                let v = power_valuation(&nb, phi, &BigUint::from(p))?;
                if v >= 1 {
                    m *= BigUint::from(p).pow(v as u32);
                    cos_m *= BigUint::from(p).pow(v as u32 - 1);
                }
            }
            let rad_n = BigUint::from(rad_u64(n));
            hypothesis(cos_m > rad_n, || {
                format!("cosocle({m}) must exceed rad({n}) (fails e.g. for n=55, 57)")
            })?;
            Ok(Blueprint {
                base: nb,
                exponent: phi.checked_mul(k).ok_or_else(overflow)?,
                witness_m: m,
                side: WitnessSide::DividesCMinusOne,
            })
        }
        FamilyId::Carmichael => {
            let FamilyParams::MN { m, n } = *params else {
                return wrong_schema();
            };
            hypothesis(gcd(m, n) == 1, || format!("m={m} and n={n} must be coprime"))?;
            let rad_n = rad_u64(n);
            hypothesis(rad_n > 1, || format!("rad({n}) must exceed 1"))?;
            let mb = BigUint::from(m);
            hypothesis(cosocle(&mb).unwrap() > BigUint::from(rad_n), || {
                format!("cosocle({m}) must exceed rad({n})")
            })?;
            let lambda = carmichael_lambda(&mb)?.to_u64().expect("lambda of u64");
            Ok(Blueprint {
                base: BigUint::from(n),
                exponent: lambda.checked_mul(k).ok_or_else(overflow)?,
                witness_m: mb,
                side: WitnessSide::DividesCMinusOne,
            })
        }
        FamilyId::GranvilleTucker => {
            let FamilyParams::NP { n, p } = *params else {
                return wrong_schema();
            };
            hypothesis(n > 1, || format!("n={n} must be > 1"))?;
            hypothesis(p % 2 == 1 && is_prime_u64(p), || {
                format!("p={p} must be an odd prime")
            })?;
            hypothesis(p > rad_u64(n), || format!("p={p} must exceed rad({n})"))?;
            Ok(Blueprint {
                base: BigUint::from(n),
                exponent: p
                    .checked_mul(p - 1)
                    .and_then(|e| e.checked_mul(k))
                    .ok_or_else(overflow)?,
                witness_m: BigUint::from(p) * p,
                side: WitnessSide::DividesCMinusOne,
            })
        }
        FamilyId::OrderRefined => {
            let FamilyParams::NP { n, p } = *params else {
                return wrong_schema();
            };
            hypothesis(n > 1, || format!("n={n} must be > 1"))?;
            hypothesis(p % 2 == 1 && is_prime_u64(p), || {
                format!("p={p} must be an odd prime")
            })?;
            hypothesis(p > rad_u64(n), || format!("p={p} must exceed rad({n})"))?;
            let ord = multiplicative_order(&BigUint::from(n), &BigUint::from(p))?
                .to_u64()
                .expect("order below p");
            // v_p(n^{p ord k} - 1) = f_p + v_p(p ord k) >= 2, so p^2 divides
            // c - 1 and cosocle(p^2) = p > rad(n).
            Ok(Blueprint {
                base: BigUint::from(n),
                exponent: p
                    .checked_mul(ord)
                    .and_then(|e| e.checked_mul(k))
                    .ok_or_else(overflow)?,
                witness_m: BigUint::from(p) * p,
                side: WitnessSide::DividesCMinusOne,
            })
        }
        FamilyId::OddOrNonSquarefree => {
            let FamilyParams::N { n } = *params else {
                return wrong_schema();
            };
            hypothesis(n > 1 && (n % 2 == 1 || !is_squarefree_u64(n)), || {
                format!("n={n} must be odd, or even and non-squarefree")
            })?;
            Ok(Blueprint {
                base: BigUint::from(n),
                exponent: (n - 1).checked_mul(k).ok_or_else(overflow)?,
                witness_m: pow_checked(&BigUint::from(n), n - 1)? - 1u32,
                side: WitnessSide::DividesCMinusOne,
            })
        }
        FamilyId::NPlusOne => {
            let FamilyParams::N { n } = *params else {
                return wrong_schema();
            };
            hypothesis(n > 1, || format!("n={n} must be > 1"))?;
            hypothesis((n + 1) % 2 == 0 || k % 2 == 0, || {
                format!("(n+1)k must be even; n={n}, k={k}")
            })?;
            let l = if n % 2 == 1 { n + 1 } else { 2 * (n + 1) };
            Ok(Blueprint {
                base: BigUint::from(n),
                exponent: (n + 1).checked_mul(k).ok_or_else(overflow)?,
                witness_m: pow_checked(&BigUint::from(n), l)? - 1u32,
                side: WitnessSide::DividesCMinusOne,
            })
        }
        FamilyId::PowerOfTwoMinusOne => {
            let FamilyParams::J { j } = *params else {
                return wrong_schema();
            };
            hypothesis(j >= 2, || format!("j={j} must be >= 2"))?;
            let base = (BigUint::one() << j) - 1u32;
            Ok(Blueprint {
                witness_m: &base * &base - 1u32,
                base,
                exponent: 2u64.checked_mul(k).ok_or_else(overflow)?,
                side: WitnessSide::DividesCMinusOne,
            })
        }
        FamilyId::GeneralPower => {
            let FamilyParams::NJ { n, j } = *params else {
                return wrong_schema();
            };
            hypothesis(n >= 3 && j >= 1, || format!("need n >= 3 and j >= 1; got n={n}, j={j}"))?;
            hypothesis(n % 2 == 0 || k % 2 == 0, || {
                format!("nk must be even; n={n}, k={k}")
            })?;
            Ok(Blueprint {
                base: BigUint::from(n).pow(j) - 1u32,
                exponent: n.checked_mul(k).ok_or_else(overflow)?,
                witness_m: BigUint::from(n).pow(j + 1),
                side: WitnessSide::DividesCMinusOne,
            })
        }
        FamilyId::EvenNPlusOnePlus => {
            let FamilyParams::N { n } = *params else {
                return wrong_schema();
            };
            hypothesis(n >= 2 && n % 2 == 0, || format!("n={n} must be even"))?;
            hypothesis(k % 2 == 1, || format!("k={k} must be odd"))?;
            Ok(Blueprint {
                base: BigUint::from(n),
                exponent: (n + 1).checked_mul(k).ok_or_else(overflow)?,
                witness_m: pow_checked(&BigUint::from(n), n + 1)? + 1u32,
                side: WitnessSide::DividesBPlusOne,
            })
        }
        FamilyId::OddPowerPlus => {
            let FamilyParams::NJ { n, j } = *params else {
                return wrong_schema();
            };
            hypothesis(n >= 3 && n % 2 == 1 && j >= 1, || {
                format!("need odd n >= 3 and j >= 1; got n={n}, j={j}")
            })?;
            hypothesis(k % 2 == 1, || format!("k={k} must be odd"))?;
            Ok(Blueprint {
                base: BigUint::from(n).pow(j) - 1u32,
                exponent: n.checked_mul(k).ok_or_else(overflow)?,
                witness_m: BigUint::from(n).pow(j + 1),
                side: WitnessSide::DividesBPlusOne,
            })
        }
    }
}

fn overflow() -> Error {
    Error::HypothesisViolated("exponent overflows 64 bits".into())
}

fn pow_checked(base: &BigUint, exp: u64) -> Result<BigUint> {
    let exp = u32::try_from(exp).map_err(|_| overflow())?;
    Ok(base.pow(exp))
}

/// Produce the certified k-th triple of a family.
///
/// Hypotheses are validated eagerly and the first failure is reported; the
/// witness divisor is checked to divide its side before the certificate is
/// returned.
pub fn generate(family: FamilyId, params: &FamilyParams, k: u64) -> Result<FamilyCertificate> {
    let bp = blueprint(family, params, k)?;
    let power = pow_checked(&bp.base, bp.exponent)?;
    let (triple, divided) = match bp.side {
        WitnessSide::DividesCMinusOne => {
            let c_minus_1 = &power - 1u32;
            (
                GeneralTriple::new(BigUint::one(), c_minus_1.clone(), power)?,
                c_minus_1,
            )
        }
        WitnessSide::DividesBPlusOne => {
            let b_plus_1 = &power + 1u32;
            (
                GeneralTriple::new(BigUint::one(), power, b_plus_1.clone())?,
                b_plus_1,
            )
        }
    };
    assert!(
        (&divided % &bp.witness_m).is_zero(),
        "witness {} must divide its side for {family} {params} k={k}",
        bp.witness_m
    );
    Ok(FamilyCertificate {
        family,
        params: *params,
        k,
        triple,
        witness_m: bp.witness_m,
        witness_side: bp.side,
    })
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration below a limit
// ---------------------------------------------------------------------------

/// All n in [2, n_max] whose radical is strictly below `rad_bound`,
/// enumerated by extending squarefree kernels with prime powers.
fn smooth_radical_below(rad_bound: u64, n_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let primes: Vec<u64> = small_primes()
        .iter()
        .map(|&p| p as u64)
        .take_while(|&p| p < rad_bound)
        .collect();
    fn rec(primes: &[u64], start: usize, rad: u64, val: u64, bound: u64, n_max: u64, out: &mut Vec<u64>) {
        if val >= 2 {
            out.push(val);
        }
        for (off, &p) in primes[start..].iter().enumerate() {
            match rad.checked_mul(p) {
                Some(r) if r < bound => {
                    let mut v = match val.checked_mul(p) {
                        Some(v) if v <= n_max => v,
                        _ => break,
                    };
                    loop {
                        rec(primes, start + off + 1, r, v, bound, n_max, out);
                        v = match v.checked_mul(p) {
                            Some(v) if v <= n_max => v,
                            _ => break,
                        };
                    }
                }
                _ => break,
            }
        }
    }
    rec(&primes, 0, 1, 1, rad_bound, n_max, &mut out);
    out.sort_unstable();
    out
}

/// Largest n with n^e < limit, or 0 when there is none.
fn root_below(limit: &BigUint, e: u64) -> u64 {
    if limit <= &BigUint::from(1u32) {
        return 0;
    }
    let e32 = match u32::try_from(e) {
        Ok(v) => v,
        Err(_) => return 1,
    };
    (limit - 1u32).nth_root(e32).to_u64().unwrap_or(u64::MAX)
}

fn push_k_series(
    out: &mut Vec<FamilyCertificate>,
    family: FamilyId,
    params: &FamilyParams,
    limit: &BigUint,
    ks: impl Iterator<Item = u64>,
) {
    for k in ks {
        match generate(family, params, k) {
            Ok(cert) => {
                if cert.c() >= limit {
                    break;
                }
                out.push(cert);
            }
            Err(_) => break,
        }
    }
}

/// The per-k exponent multipliers give every family a finite parameter space
/// below a c limit; enumerate it exhaustively and deduplicate by c.
pub fn enumerate_family(family: FamilyId, c_limit: &BigUint) -> Vec<FamilyCertificate> {
    let mut out: Vec<FamilyCertificate> = Vec::new();
    let bits = c_limit.bits();
    // Necessary condition for base^e < limit: e * floor(log2 base) < bits.
    // Candidates passing it are still checked exactly against the limit.
    let fits = |base: u64, e: u64| -> bool {
        base >= 2 && e >= 1 && e.saturating_mul(63 - base.leading_zeros() as u64) < bits
    };
    match family {
        FamilyId::EulerPhi | FamilyId::EulerPhiRefined => {
            for n in 2u64..=4000 {
                let phi = euler_phi(&BigUint::from(n)).unwrap().to_u64().unwrap();
                if !fits(n, phi) {
                    continue;
                }
                push_k_series(&mut out, family, &FamilyParams::N { n }, c_limit, 1..);
            }
        }
        FamilyId::Carmichael => {
            enumerate_carmichael(&mut out, c_limit);
        }
        FamilyId::GranvilleTucker => {
            for &p in small_primes()
                .iter()
                .skip(1)
                .take_while(|&&p| (p as u64) * (p as u64 - 1) <= bits)
            {
                let p = p as u64;
                let e = p * (p - 1);
                let n_max = root_below(c_limit, e);
                for n in smooth_radical_below(p, n_max) {
                    push_k_series(&mut out, family, &FamilyParams::NP { n, p }, c_limit, 1..);
                }
            }
        }
        FamilyId::OrderRefined => {
            for &p in small_primes().iter().take_while(|&&p| (p as u64) <= bits) {
                let p = p as u64;
                if p < 3 {
                    continue;
                }
                let n_max = root_below(c_limit, p); // ord >= 1
                for n in smooth_radical_below(p, n_max) {
                    push_k_series(&mut out, family, &FamilyParams::NP { n, p }, c_limit, 1..);
                }
            }
        }
        FamilyId::OddOrNonSquarefree => {
            for n in 3u64.. {
                if !fits(n, n - 1) {
                    break;
                }
                push_k_series(&mut out, family, &FamilyParams::N { n }, c_limit, 1..);
            }
        }
        FamilyId::NPlusOne => {
            for n in 2u64.. {
                let min_e = if n % 2 == 1 { n + 1 } else { 2 * (n + 1) };
                if !fits(n, min_e) {
                    break;
                }
                let step = if n % 2 == 1 { 1 } else { 2 };
                push_k_series(
                    &mut out,
                    family,
                    &FamilyParams::N { n },
                    c_limit,
                    (1..).map(move |k| k * step),
                );
            }
        }
        FamilyId::PowerOfTwoMinusOne => {
            for j in 2u32.. {
                let base = (BigUint::one() << j) - 1u32;
                if &(&base * &base) >= c_limit {
                    break;
                }
                push_k_series(&mut out, family, &FamilyParams::J { j }, c_limit, 1..);
            }
        }
        FamilyId::GeneralPower | FamilyId::OddPowerPlus => {
            let plus = family == FamilyId::OddPowerPlus;
            for n in 3u64..=(bits + 1) {
                if plus && n % 2 == 0 {
                    continue;
                }
                let (step, parity_step) = if plus {
                    (1, 2) // k odd: 1, 3, 5, ...
                } else if n % 2 == 0 {
                    (1, 1)
                } else {
                    (2, 2) // nk even forces k even
                };
                for j in 1u32.. {
                    let base = BigUint::from(n).pow(j) - 1u32;
                    let min_e = n * step;
                    if base < BigUint::from(2u32)
                        || !fits(base.to_u64().unwrap_or(u64::MAX), min_e)
                    {
                        if j == 1 {
                            continue;
                        }
                        break;
                    }
                    push_k_series(
                        &mut out,
                        family,
                        &FamilyParams::NJ { n, j },
                        c_limit,
                        (0..).map(move |i| step + i * parity_step),
                    );
                }
            }
        }
        FamilyId::EvenNPlusOnePlus => {
            for n in (2u64..).step_by(2) {
                if !fits(n, n + 1) {
                    break;
                }
                push_k_series(
                    &mut out,
                    family,
                    &FamilyParams::N { n },
                    c_limit,
                    (0..).map(|i| 2 * i + 1),
                );
            }
        }
    }
    out.sort_by(|x, y| x.c().cmp(y.c()));
    out.dedup_by(|x, y| x.c() == y.c());
    out
}

/// For a target exponent e, the richest admissible modulus is
/// m*(e, n) = 2^{v_2(e)+2} (n odd, e even) * prod p^{v_p(e)+1} over odd
/// primes p | e with (p-1) | e and p coprime to n; its Carmichael value
/// divides e, so c = n^e arises from the pair (m*, n).
fn enumerate_carmichael(out: &mut Vec<FamilyCertificate>, c_limit: &BigUint) {
    let family = FamilyId::Carmichael;
    for e in 2..=c_limit.bits() {
        let e_parts = factorize_u64(e);
        // Upper bound of cosocle(m*) over all n: assume every part applies.
        let mut best = BigUint::one();
        for &(p, a) in &e_parts {
            if p == 2 {
                best <<= a + 1;
            } else if e % (p - 1) == 0 {
                best *= BigUint::from(p).pow(a);
            }
        }
        if best <= BigUint::from(2u32) {
            continue;
        }
        let n_max = root_below(c_limit, e);
        if n_max < 2 {
            continue;
        }
        let best64 = best.to_u64().unwrap_or(u64::MAX);
        for n in smooth_radical_below(best64, n_max) {
            let mut m_star = 1u64;
            let mut cos = 1u64;
            for &(p, a) in &e_parts {
                if n % p == 0 {
                    continue;
                }
                if p == 2 {
                    m_star <<= a + 2;
                    cos <<= a + 1;
                } else if e % (p - 1) == 0 {
                    m_star *= p.pow(a + 1);
                    cos *= p.pow(a);
                }
            }
            if m_star == 1 || cos <= rad_u64(n) {
                continue;
            }
            let lambda = carmichael_lambda(&BigUint::from(m_star))
                .unwrap()
                .to_u64()
                .unwrap();
            debug_assert_eq!(e % lambda, 0);
            if let Ok(cert) = generate(family, &FamilyParams::MN { m: m_star, n }, e / lambda) {
                if cert.c() < c_limit {
                    out.push(cert);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Transfer maps
// ---------------------------------------------------------------------------

fn require_abc(c: &BigUint) -> Result<()> {
    if verify_unit(c)?.is_abc {
        Ok(())
    } else {
        Err(Error::NotAbcInput)
    }
}

/// (1, c-1, c) abc implies (1, c^k - 1, c^k) abc.
pub fn transfer_power(c: &BigUint, k: u64) -> Result<UnitTriple> {
    require_abc(c)?;
    UnitTriple::new(pow_checked(c, k)?)
}

/// (1, b, b+1) abc implies (1, b^k, b^k + 1) abc for odd k.
pub fn transfer_odd_power(b: &BigUint, k: u64) -> Result<GeneralTriple> {
    if k % 2 == 0 {
        return Err(Error::EvenExponent);
    }
    require_abc(&(b + 1u32))?;
    let bk = pow_checked(b, k)?;
    GeneralTriple::new(BigUint::one(), bk.clone(), bk + 1u32)
}

/// (1, c-1, c) abc implies (1, c(c-2), (c-1)^2) abc; returns the new c.
pub fn transfer_square(c: &BigUint) -> Result<UnitTriple> {
    require_abc(c)?;
    let cm1 = c - 1u32;
    UnitTriple::new(&cm1 * &cm1)
}

/// (1, c-1, c) abc implies (1, (c-1)^3, c(c^2-3c+3)) abc; returns the new c.
pub fn transfer_cube(c: &BigUint) -> Result<UnitTriple> {
    require_abc(c)?;
    UnitTriple::new(c * (c * c - 3u32 * c + 3u32))
}

fn binomial(n: u64, j: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..j {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Split (a+b)^n after the k-th term: returns the two exact summands
/// a^{n-k} (sum_{j<=k} C(n,j) a^{k-j} b^j) and
/// b^{k+1} (sum_{j<=n-k-1} C(n,j) a^j b^{n-k-1-j}), together with c^n.
pub fn binomial_split_identity(
    a: &BigUint,
    b: &BigUint,
    n: u64,
    k: u64,
) -> Result<(BigUint, BigUint, BigUint)> {
    if k >= n {
        return Err(Error::InvalidTriple(format!("need 0 <= k <= n-1; got k={k}, n={n}")));
    }
    let mut s1 = BigUint::zero();
    for j in 0..=k {
        s1 += binomial(n, j) * a.pow((k - j) as u32) * b.pow(j as u32);
    }
    let t1 = pow_checked(a, n - k)? * s1;
    let mut s2 = BigUint::zero();
    for j in 0..=(n - k - 1) {
        s2 += binomial(n, j) * a.pow(j as u32) * b.pow((n - k - 1 - j) as u32);
    }
    let t2 = pow_checked(b, k + 1)? * s2;
    let cn = pow_checked(&(a + b), n)?;
    assert_eq!(&t1 + &t2, cn, "binomial split must be exact");
    Ok((t1, t2, cn))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn family_codes_round_trip() {
        for id in FamilyId::ALL {
            assert_eq!(id.code().parse::<FamilyId>().unwrap(), id);
        }
        assert!("cor3.13".parse::<FamilyId>().is_err());
    }

    #[test]
    fn smallest_triple_certificate() {
        let cert = generate(FamilyId::OddOrNonSquarefree, &FamilyParams::N { n: 3 }, 1).unwrap();
        assert_eq!(cert.c(), &big(9));
        assert_eq!(cert.witness_m, big(8));
        assert_eq!(cert.witness_side, WitnessSide::DividesCMinusOne);
    }

    #[test]
    fn even_plus_side_certificate() {
        let cert = generate(FamilyId::EvenNPlusOnePlus, &FamilyParams::N { n: 4 }, 1).unwrap();
        assert_eq!(cert.c(), &big(1025));
        assert_eq!(cert.witness_side, WitnessSide::DividesBPlusOne);
    }

    #[test]
    fn euler_phi_example_and_failure() {
        let cert = generate(FamilyId::EulerPhi, &FamilyParams::N { n: 75 }, 1).unwrap();
        assert_eq!(cert.witness_m, big(32));
        assert_eq!(cert.c(), &big(75).pow(40));
        assert!(matches!(
            generate(FamilyId::EulerPhi, &FamilyParams::N { n: 55 }, 1),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn refined_screen_matches_observed_exceptions() {
        let failing: Vec<u64> = (3..=99)
            .step_by(2)
            .filter(|&n| {
                generate(FamilyId::EulerPhiRefined, &FamilyParams::N { n }, 1).is_err()
            })
            .collect();
        assert_eq!(failing, vec![21, 39, 55, 57, 69, 87]);
    }

    #[test]
    fn carmichael_example() {
        let cert = generate(FamilyId::Carmichael, &FamilyParams::MN { m: 32, n: 11 }, 1).unwrap();
        assert_eq!(cert.c(), &big(11).pow(8));
    }

    #[test]
    fn schema_mismatch_is_rejected() {
        assert!(matches!(
            generate(FamilyId::Carmichael, &FamilyParams::N { n: 11 }, 1),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn enumerate_small_families() {
        let limit = big(10).pow(6);
        let c9 = enumerate_family(FamilyId::PowerOfTwoMinusOne, &limit);
        let cs: Vec<u64> = c9.iter().map(|c| c.c().to_u64().unwrap()).collect();
        assert!(cs.contains(&49) && cs.contains(&2401) && cs.contains(&961));
        assert!(cs.windows(2).all(|w| w[0] < w[1]));
        for id in FamilyId::ALL {
            assert!(enumerate_family(id, &big(3)).is_empty());
        }
    }

    #[test]
    fn enumerated_certificates_reverify() {
        let limit = big(10).pow(8);
        for id in FamilyId::ALL {
            for cert in enumerate_family(id, &limit) {
                assert!(
                    verify_unit(cert.c()).unwrap().is_abc,
                    "{id} emitted non-abc c={}",
                    cert.c()
                );
            }
        }
    }

    #[test]
    fn transfer_examples() {
        assert_eq!(transfer_power(&big(9), 2).unwrap().c(), &big(81));
        assert_eq!(transfer_power(&big(9), 1).unwrap().c(), &big(9));
        assert_eq!(transfer_power(&big(49), 2).unwrap().c(), &big(2401));
        assert!(matches!(transfer_power(&big(10), 2), Err(Error::NotAbcInput)));

        let t = transfer_odd_power(&big(8), 3).unwrap();
        assert_eq!((t.b(), t.c()), (&big(512), &big(513)));
        let t = transfer_odd_power(&big(8), 5).unwrap();
        assert_eq!(t.c(), &big(32769));
        assert!(matches!(transfer_odd_power(&big(8), 2), Err(Error::EvenExponent)));

        assert_eq!(transfer_square(&big(49)).unwrap().c(), &big(2304));
        assert_eq!(transfer_cube(&big(2304)).unwrap().c(), &big(12214672128));
        assert_eq!(transfer_cube(&big(9)).unwrap().c(), &big(513));
    }

    #[test]
    fn binomial_split_examples() {
        let (t1, t2, cn) = binomial_split_identity(&big(1), &big(8), 2, 0).unwrap();
        assert_eq!((t1, t2, cn), (big(1), big(80), big(81)));
        let (t1, t2, cn) = binomial_split_identity(&big(3), &big(4), 1, 0).unwrap();
        assert_eq!((t1, t2, cn), (big(3), big(4), big(7)));
        let (t1, t2, cn) = binomial_split_identity(&big(1), &big(48), 2, 1).unwrap();
        assert_eq!(&t1 + &t2, cn);
        assert_eq!(cn, big(49).pow(2));
    }
}
