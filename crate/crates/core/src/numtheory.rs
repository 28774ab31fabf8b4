//! Exponents of `GL(r, 2)` and of the simple groups that could occur as its
//! sections, with the cyclotomic divisibility obstructions bounding them.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExponentFamily {
    GL2,
    SL2,
    Sz,
    PSU3,
}

impl std::str::FromStr for ExponentFamily {
    type Err = NumTheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gl2" => Ok(ExponentFamily::GL2),
            "sl2" => Ok(ExponentFamily::SL2),
            "sz" => Ok(ExponentFamily::Sz),
            "psu3" => Ok(ExponentFamily::PSU3),
            _ => Err(NumTheoryError::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumTheoryError {
    #[error("parameter {param} out of range for {family:?}")]
    OutOfRange { family: ExponentFamily, param: u32 },
    #[error("unknown family {0}")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentFormula {
    pub family: ExponentFamily,
    pub param: u32,
    /// Decimal string; the values outgrow 64 bits.
    #[serde(with = "big_decimal")]
    pub value: BigUint,
    /// True when `value` is only a divisor of the exponent.
    pub divisor_only: bool,
}

mod big_decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom("bad integer"))
    }
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e
}

fn mersenne(e: u32) -> BigUint {
    pow2(e) - 1u32
}

fn mobius(mut n: u32) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// `Phi_d(2) = prod_{e | d} (2^e - 1)^mu(d/e)`.
pub fn phi_at_2(d: u32) -> BigUint {
    assert!(d >= 1);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in divisors(d) {
        match mobius(d / e) {
            1 => num *= mersenne(e),
            -1 => den *= mersenne(e),
            _ => {}
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}

/// `lcm{2^i - 1 : 1 <= i <= r}`.
pub fn lcm_mersenne(r: u32) -> BigUint {
    (1..=r).fold(BigUint::one(), |acc, i| acc.lcm(&mersenne(i)))
}

fn ceil_log2(r: u32) -> u32 {
    32 - (r - 1).leading_zeros()
}

pub fn group_exponent(family: ExponentFamily, param: u32) -> Result<ExponentFormula, NumTheoryError> {
    let min = match family {
        ExponentFamily::GL2 | ExponentFamily::SL2 => 1,
        ExponentFamily::Sz | ExponentFamily::PSU3 => 2,
    };
    if param < min || param > 4096 {
        return Err(NumTheoryError::OutOfRange { family, param });
    }
    let n = param;
    let (value, divisor_only) = match family {
        ExponentFamily::GL2 => (pow2(ceil_log2(n)) * lcm_mersenne(n), false),
        ExponentFamily::SL2 => (BigUint::from(2u32) * mersenne(2 * n), false),
        ExponentFamily::Sz => (BigUint::from(4u32) * mersenne(2 * n - 1) * (pow2(4 * n - 2) + 1u32), false),
        ExponentFamily::PSU3 => (psu_divisor(n), true),
    };
    Ok(ExponentFormula {
        family,
        param,
        value,
        divisor_only,
    })
}

fn psu_divisor(n: u32) -> BigUint {
    let g = (pow2(n) + 1u32).gcd(&BigUint::from(3u32));
    (pow2(2 * n) - pow2(n) + 1u32) / g
}

/// The odd number that must divide `lcm{2^i - 1 : i <= r}` for the family
/// with parameter `n` to occur as a section of `GL(r, 2)`.
pub fn obstruction_modulus(family: ExponentFamily, n: u32) -> BigUint {
    match family {
        ExponentFamily::GL2 => lcm_mersenne(n),
        ExponentFamily::SL2 => mersenne(2 * n),
        ExponentFamily::Sz => pow2(4 * n - 2) + 1u32,
        ExponentFamily::PSU3 => psu_divisor(n),
    }
}

/// Whether `n` exceeds the bound for sections of `GL(r, 2)`:
/// `n <= r/2`, `4n - 2 <= r/2` and `3n <= r/2` respectively.
pub fn violates_bound(family: ExponentFamily, r: u32, n: u32) -> bool {
    match family {
        ExponentFamily::GL2 => n > r,
        ExponentFamily::SL2 => 2 * n > r,
        ExponentFamily::Sz => 8 * n - 4 > r,
        ExponentFamily::PSU3 => 6 * n > r,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub r: u32,
    pub n: u32,
    pub violates_bound: bool,
    pub obstructed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionReport {
    pub family: ExponentFamily,
    pub r_max: u32,
    pub rows: Vec<ScanRow>,
    /// Largest unobstructed `n` for each `r` (0 when none).
    pub largest_unobstructed: Vec<(u32, u32)>,
    /// Pairs violating the bound without being obstructed.
    pub failures: Vec<(u32, u32)>,
}

/// For each `r <= r_max`, scans `n` upward until the modulus exceeds
/// `lcm{2^i - 1 : i <= r}` (after which divisibility is impossible).
pub fn section_bound_verify(family: ExponentFamily, r_max: u32) -> SectionReport {
    let n_min = match family {
        ExponentFamily::Sz | ExponentFamily::PSU3 => 2,
        _ => 1,
    };
    let mut rows = Vec::new();
    let mut largest = Vec::new();
    let mut failures = Vec::new();
    for r in 1..=r_max {
        let l = lcm_mersenne(r);
        let mut best = 0;
        let mut n = n_min;
        loop {
            let modulus = obstruction_modulus(family, n);
            let obstructed = !(&l % &modulus).is_zero();
            let violates = violates_bound(family, r, n);
            if !obstructed {
                best = n;
                if violates {
                    failures.push((r, n));
                }
            }
            rows.push(ScanRow {
                r,
                n,
                violates_bound: violates,
                obstructed,
            });
            if modulus > l && violates {
                break;
            }
            n += 1;
        }
        largest.push((r, best));
    }
    SectionReport {
        family,
        r_max,
        rows,
        largest_unobstructed: largest,
        failures,
    }
}

/// `Phi_(6n)(2) > 2^(phi(6n) - 1)`.
pub fn phi6n_lower_bound_holds(n: u32) -> bool {
    let d = 6 * n;
    phi_at_2(d) * 2u32 > pow2(euler_phi(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_values() {
        assert_eq!(phi_at_2(1), BigUint::from(1u32));
        assert_eq!(phi_at_2(2), BigUint::from(3u32));
        assert_eq!(phi_at_2(6), BigUint::from(3u32));
        let prod = divisors(12).into_iter().fold(BigUint::one(), |a, d| a * phi_at_2(d));
        assert_eq!(prod, BigUint::from(4095u32));
    }

    #[test]
    fn exponents() {
        let v = |f, n| group_exponent(f, n).unwrap().value;
        assert_eq!(v(ExponentFamily::GL2, 3), BigUint::from(84u32));
        assert_eq!(v(ExponentFamily::SL2, 2), BigUint::from(30u32));
        assert_eq!(v(ExponentFamily::Sz, 2), BigUint::from(1820u32));
        assert!(group_exponent(ExponentFamily::Sz, 1).is_err());
    }

    #[test]
    fn sl2_small_ranks() {
        let rep = section_bound_verify(ExponentFamily::SL2, 4);
        let row = |r, n| rep.rows.iter().find(|x| x.r == r && x.n == n).unwrap().clone();
        assert!(row(3, 2).obstructed);
        assert!(!row(4, 2).obstructed);
        assert!(rep.failures.is_empty());
    }
}
