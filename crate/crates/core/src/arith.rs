//! Arbitrary-precision scalars shared by every module.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Non-negative integer.
pub type Nat = BigUint;
/// Signed integer.
pub type Int = BigInt;
/// Canonical (reduced, positive-denominator) rational.
pub type Rat = num_rational::BigRational;

pub fn pow2(e: u64) -> Nat {
    Nat::one() << e
}

pub fn pow_u64(base: u64, e: u64) -> Nat {
    let mut acc = Nat::one();
    let mut sq = Nat::from(base);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

pub fn nat_to_int(n: &Nat) -> Int {
    Int::from_biguint(Sign::Plus, n.clone())
}

pub fn rat_from_nats(num: Nat, den: Nat) -> Rat {
    Rat::new(nat_to_int(&num), nat_to_int(&den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// 2-adic valuation of a rational whose denominator is odd. `None` for zero.
pub fn two_adic_valuation(x: &Rat) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    x.numer().magnitude().trailing_zeros()
}

/// Returns `Some(n)` when `x` is an integer.
pub fn as_integer(x: &Rat) -> Option<Int> {
    x.is_integer().then(|| x.to_integer())
}

/// Residue of `x` modulo `m` in `[0, m)`, for `x` with denominator prime to `m`.
pub fn rat_mod(x: &Rat, m: &Nat) -> Option<Nat> {
    let m_int = nat_to_int(m);
    let den = x.denom().mod_floor(&m_int);
    let inv = mod_inverse(&den, &m_int)?;
    let r = (x.numer().mod_floor(&m_int) * inv).mod_floor(&m_int);
    r.to_biguint()
}

pub fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    let g = a.extended_gcd(m);
    if g.gcd.abs() != Int::one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Parses `"a"` or `"a/b"` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let err = |reason: &str| Error::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = s.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: Int = num.parse().map_err(|_| err("bad numerator"))?;
    let den: Int = den.parse().map_err(|_| err("bad denominator"))?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rat::new(num, den))
}

/// Smallest `c` with `2^c >= n`, for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1);
    if n == 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn sign_of(x: &Rat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
