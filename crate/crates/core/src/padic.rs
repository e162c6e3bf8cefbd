//! Truncated p-adic integers, valuations, and the Lipschitz estimate for
//! `chi_p` at primes where 2 is a primitive root and `p = 2^j + 1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{self, Int, Nat, Rat};
use crate::error::{Error, Result};
use crate::twoadic::{beta_positions, ones_count};

/// `nu_p(x)`; `Infinite` for `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

fn nu_int(p: u64, x: &Int) -> i64 {
    let p = Int::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

pub fn nu_p(p: u64, x: &Rat) -> Valuation {
    assert!(p >= 2, "p must be at least 2");
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(nu_int(p, x.numer()) - nu_int(p, x.denom()))
}

/// `|x|_p = p^(-nu_p(x))`, with `|0|_p = 0`.
pub fn abs_p(p: u64, x: &Rat) -> Rat {
    match nu_p(p, x) {
        Valuation::Infinite => Rat::zero(),
        Valuation::Finite(v) => p_power(p, -v),
    }
}

fn p_power(p: u64, e: i64) -> Rat {
    let mag = arith::nat_to_int(&arith::pow_u64(p, e.unsigned_abs()));
    if e >= 0 {
        Rat::from_integer(mag)
    } else {
        Rat::new(Int::one(), mag)
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || !arith::is_prime(p) {
        return Err(Error::Parameter(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Multiplicative order of 2 modulo `p^k`, found by stripping prime
/// factors from `phi(p^k) = (p-1) p^(k-1)`.
pub fn ord2_mod_pk(p: u64, k: u32) -> Result<Nat> {
    check_odd_prime(p)?;
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    let modulus = arith::pow_u64(p, k as u64);
    let two = Nat::from(2u32);
    let mut order = Nat::from(p - 1) * arith::pow_u64(p, k as u64 - 1);
    let mut factors = arith::prime_factors(p - 1);
    if !factors.contains(&p) {
        factors.push(p);
    }
    for q in factors {
        let q = Nat::from(q);
        while (&order % &q).is_zero() {
            let candidate = &order / &q;
            if two.modpow(&candidate, &modulus).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Whether `p` is an odd prime with 2 a primitive root mod `p` and
/// `p = 2^j + 1`. In practice this is exactly `p` in `{3, 5}`.
pub fn satisfies_order_hypotheses(p: u64) -> bool {
    if check_odd_prime(p).is_err() || !(p - 1).is_power_of_two() {
        return false;
    }
    ord2_mod_pk(p, 1).map(|o| o == Nat::from(p - 1)).unwrap_or(false)
}

fn check_order_hypotheses(p: u64) -> Result<()> {
    if !satisfies_order_hypotheses(p) {
        return Err(Error::Hypothesis(format!(
            "p = {p} must be a prime of the form 2^j + 1 with 2 a primitive root"
        )));
    }
    Ok(())
}

/// Closed form `|2^m - 1|_p = p^(-[m = 0 mod p-1] (nu_p(m) + 1))`.
pub fn abs_p_2m_minus_1(p: u64, m: u64) -> Result<Rat> {
    check_order_hypotheses(p)?;
    if m == 0 {
        return Err(Error::Parameter("m must be at least 1".into()));
    }
    if !m.is_multiple_of(p - 1) {
        return Ok(Rat::one());
    }
    let v = nu_int(p, &Int::from(m));
    Ok(p_power(p, -(v + 1)))
}

/// `|2^d - 1|_p` for `d != 0`, via the closed form on `|d|`.
fn abs_two_pow_minus_one(p: u64, delta: u64) -> Rat {
    if !delta.is_multiple_of(p - 1) {
        Rat::one()
    } else {
        p_power(p, -(nu_int(p, &Int::from(delta)) + 1))
    }
}

/// Upper bound for `|chi_p(s) - chi_p(t)|_p` from pairing the k-th one of
/// `s` with the k-th one of `t`. Requires `#1(s) = #1(t) >= 1`.
pub fn lipschitz_rhs(p: u64, s: &Nat, t: &Nat) -> Result<Rat> {
    check_order_hypotheses(p)?;
    let (bs, bt) = (beta_positions(s), beta_positions(t));
    if bs.len() != bt.len() || bs.is_empty() {
        return Err(Error::UnsupportedPair(format!(
            "#1({s}) = {} and #1({t}) = {} must be equal and positive",
            bs.len(),
            bt.len()
        )));
    }
    let mut best = Rat::zero();
    for (k, (&a, &b)) in bs.iter().zip(&bt).enumerate() {
        if a == b {
            continue;
        }
        // p^(k-1) with 1-based k
        let term = abs_two_pow_minus_one(p, a.abs_diff(b)) * p_power(p, -(k as i64));
        if term > best {
            best = term;
        }
    }
    Ok(best)
}

/// Whether the digit-position congruences `beta_k(s) = beta_k(t)` mod `p-1`
/// and mod `p^(m-k)` hold for `k = 1..m`; these force
/// `chi_p(s) = chi_p(t) mod p^m`.
pub fn congruence_implies(p: u64, m: u32, s: &Nat, t: &Nat) -> Result<bool> {
    check_order_hypotheses(p)?;
    if m == 0 {
        return Err(Error::Parameter("m must be at least 1".into()));
    }
    if ones_count(s) < m as u64 || ones_count(t) < m as u64 {
        return Err(Error::Precondition(format!("both inputs need at least {m} ones")));
    }
    let (bs, bt) = (beta_positions(s), beta_positions(t));
    for k in 1..=m {
        let delta = bs[k as usize - 1].abs_diff(bt[k as usize - 1]);
        if delta % (p - 1) != 0 {
            return Ok(false);
        }
        let modulus = arith::pow_u64(p, (m - k) as u64);
        if !(Nat::from(delta) % modulus).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Residue modulo `p^N`, standing in for an element of `Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicTrunc {
    p: u64,
    precision: u32,
    residue: Nat,
}

impl PadicTrunc {
    pub fn new(p: u64, precision: u32, value: &Int) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) {
            return Err(Error::Parameter(format!("p = {p} must be odd and at least 3")));
        }
        if precision == 0 {
            return Err(Error::Parameter("precision must be positive".into()));
        }
        let m = arith::nat_to_int(&arith::pow_u64(p, precision as u64));
        let residue = value.mod_floor(&m).to_biguint().expect("non-negative");
        Ok(Self {
            p,
            precision,
            residue,
        })
    }

    /// Reduction of a rational whose denominator is prime to `p`.
    pub fn from_rat(p: u64, precision: u32, x: &Rat) -> Result<Self> {
        let probe = Self::new(p, precision, &Int::zero())?;
        let residue = arith::rat_mod(x, &probe.modulus())
            .ok_or_else(|| Error::Parameter(format!("{x} has denominator divisible by {p}")))?;
        Ok(Self { residue, ..probe })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &Nat {
        &self.residue
    }

    pub fn modulus(&self) -> Nat {
        arith::pow_u64(self.p, self.precision as u64)
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % Nat::from(self.p)).is_zero()
    }

    pub fn inverse(&self) -> Option<Self> {
        let m = arith::nat_to_int(&self.modulus());
        let inv = arith::mod_inverse(&arith::nat_to_int(&self.residue), &m)?;
        Some(Self {
            residue: inv.to_biguint().expect("non-negative"),
            ..self.clone()
        })
    }

    pub fn truncate(&self, precision: u32) -> Self {
        let precision = precision.min(self.precision);
        let residue = &self.residue % arith::pow_u64(self.p, precision as u64);
        Self {
            p: self.p,
            precision,
            residue,
        }
    }

    fn combine(&self, other: &Self, f: impl Fn(&Int, &Int) -> Int) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        let precision = self.precision.min(other.precision);
        let (a, b) = (self.truncate(precision), other.truncate(precision));
        let v = f(&arith::nat_to_int(&a.residue), &arith::nat_to_int(&b.residue));
        Self::new(self.p, precision, &v).expect("validated")
    }
}

impl Add for &PadicTrunc {
    type Output = PadicTrunc;
    fn add(self, rhs: Self) -> PadicTrunc {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &PadicTrunc {
    type Output = PadicTrunc;
    fn sub(self, rhs: Self) -> PadicTrunc {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Mul for &PadicTrunc {
    type Output = PadicTrunc;
    fn mul(self, rhs: Self) -> PadicTrunc {
        self.combine(rhs, |a, b| a * b)
    }
}

impl Neg for &PadicTrunc {
    type Output = PadicTrunc;
    fn neg(self) -> PadicTrunc {
        PadicTrunc::new(self.p, self.precision, &-arith::nat_to_int(&self.residue)).expect("validated")
    }
}

impl fmt::Display for PadicTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.p, self.precision)
    }
}
