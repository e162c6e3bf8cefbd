//! Rational 2-adic integers and binary digit combinatorics.
//!
//! A [`TwoAdicRat`] is a rational `a/b` with `b` odd, stored together with
//! its canonical eventually periodic digit expansion (least significant
//! digit first): a minimal preperiod followed by a primitive period
//! repeated forever. Non-negative integers have an empty period.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, Int, Nat, Rat};
use crate::error::{Error, Result};

/// Number of ones in the binary expansion of `t`.
pub fn ones_count(t: &Nat) -> u64 {
    t.count_ones()
}

/// Number of binary digits of `t`; zero for `t = 0`.
pub fn bit_length(t: &Nat) -> u64 {
    t.bits()
}

/// Positions of the ones of `t`, strictly increasing, so that
/// `t = sum 2^positions[k]`.
pub fn beta_positions(t: &Nat) -> Vec<u64> {
    (0..t.bits()).filter(|&i| t.bit(i)).collect()
}

/// Natural number whose binary digits (least significant first) are `word`.
pub fn beta_of_word(word: &DigitWord) -> Nat {
    let mut n = Nat::zero();
    for (i, &b) in word.bits.iter().enumerate() {
        if b {
            n.set_bit(i as u64, true);
        }
    }
    n
}

/// Binary digits of `t`, least significant first, zero-padded to `min_len`.
pub fn word_of_nat(t: &Nat, min_len: usize) -> Result<DigitWord> {
    let needed = (bit_length(t) as usize).max(1);
    if min_len < needed {
        return Err(Error::Length {
            requested: min_len,
            needed,
        });
    }
    let bits = (0..min_len as u64).map(|i| t.bit(i)).collect();
    Ok(DigitWord { bits })
}

/// `B(t) = t / (1 - 2^lambda(t))`, with `B(0) = 0`.
///
/// The digits of `B(t)` are the `lambda(t)` digits of `t` repeated forever.
pub fn b_map(t: &Nat) -> TwoAdicRat {
    if t.is_zero() {
        return TwoAdicRat::zero();
    }
    let lambda = bit_length(t);
    let den = Int::one() - arith::nat_to_int(&arith::pow2(lambda));
    TwoAdicRat::from_rat(Rat::new(arith::nat_to_int(t), den)).expect("1 - 2^lambda is odd")
}

/// Continuous extension of [`b_map`]: `B` on non-negative integers and the
/// identity everywhere else.
pub fn b_extension(z: &TwoAdicRat) -> TwoAdicRat {
    match z.as_nat() {
        Some(t) => b_map(&t),
        None => z.clone(),
    }
}

fn check_kappa(kappa: u32) -> Result<()> {
    if kappa < 2 {
        return Err(Error::Parameter(format!("kappa must be at least 2, got {kappa}")));
    }
    Ok(())
}

fn spread(block: &[bool], kappa: u32) -> Vec<bool> {
    let mut out = Vec::with_capacity(block.len() * kappa as usize);
    for &b in block {
        out.push(b);
        out.extend(std::iter::repeat_n(false, kappa as usize - 1));
    }
    out
}

/// Moves digit `n` of `z` to position `kappa * n`, filling with zeros.
pub fn tau_kappa(kappa: u32, z: &TwoAdicRat) -> Result<TwoAdicRat> {
    check_kappa(kappa)?;
    if let Some(t) = z.as_nat() {
        let mut out = Nat::zero();
        for pos in beta_positions(&t) {
            out.set_bit(pos * kappa as u64, true);
        }
        return Ok(TwoAdicRat::from_nat(&out));
    }
    Ok(TwoAdicRat::from_blocks(
        &spread(&z.preperiod, kappa),
        &spread(&z.period, kappa),
    ))
}

/// Whether every two consecutive ones of `z` are separated by at least
/// `kappa - 1` zeros, i.e. whether `z` lies in the image of `tau_kappa`.
pub fn in_d_kappa(kappa: u32, z: &TwoAdicRat) -> Result<bool> {
    check_kappa(kappa)?;
    // Two copies of the period expose the seam and the wrap-around gap.
    let stream = z.preperiod.iter().chain(z.period.iter()).chain(z.period.iter());
    let mut last: Option<usize> = None;
    for (i, &b) in stream.enumerate() {
        if b {
            if let Some(prev) = last {
                if i - prev < kappa as usize {
                    return Ok(false);
                }
            }
            last = Some(i);
        }
    }
    Ok(true)
}

/// Number of residues `r mod 2^n` whose cylinder `r + 2^n Z_2` meets `D_kappa`.
///
/// A length-`n` prefix extends into `D_kappa` exactly when its own ones are
/// spaced at least `kappa` apart (pad with zeros), which gives
/// `c_n = c_{n-1} + c_{n-kappa}` with `c_m = 1` for `m < 0` and `c_0 = 1`.
pub fn count_d_kappa_prefixes(kappa: u32, n: u64) -> Result<Nat> {
    check_kappa(kappa)?;
    let k = kappa as usize;
    let mut c: Vec<Nat> = Vec::with_capacity(n as usize + 1);
    c.push(Nat::one());
    for m in 1..=n as usize {
        let with_one = if m >= k { c[m - k].clone() } else { Nat::one() };
        let next = &c[m - 1] + with_one;
        c.push(next);
    }
    Ok(c.pop().expect("non-empty"))
}

/// Finite tuple of binary digits `(j_1, ..., j_n)`, `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitWord {
    bits: Vec<bool>,
}

impl DigitWord {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Length {
                requested: 0,
                needed: 1,
            });
        }
        Ok(Self { bits })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Parameter(format!("digit {b} is not 0 or 1")));
        }
        Self::new(bits.iter().map(|&b| b == 1).collect())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![false; len])
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Always false: words have at least one digit.
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn last(&self) -> bool {
        *self.bits.last().expect("non-empty")
    }

    pub fn rotate_left(&self, k: usize) -> Self {
        let mut bits = self.bits.clone();
        let n = bits.len();
        bits.rotate_left(k % n);
        Self { bits }
    }

    pub fn with_trailing_zeros(&self, extra: usize) -> Self {
        let mut bits = self.bits.clone();
        bits.extend(std::iter::repeat_n(false, extra));
        Self { bits }
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for DigitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse {
                    input: s.to_string(),
                    reason: format!("unexpected character {c:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }
}

/// Rational element of `Z_2` (odd denominator) with its digit expansion.
#[derive(Clone, Debug)]
pub struct TwoAdicRat {
    value: Rat,
    preperiod: Vec<bool>,
    period: Vec<bool>,
}

impl TwoAdicRat {
    pub fn new(num: Int, den: Int) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::from_rat(Rat::new(num, den))
    }

    pub fn from_rat(value: Rat) -> Result<Self> {
        if value.denom().is_even() {
            return Err(Error::EvenDenominator(value.denom().to_string()));
        }
        let (preperiod, period) = expand(value.numer(), value.denom());
        Ok(Self {
            value,
            preperiod,
            period,
        })
    }

    pub fn from_int(n: impl Into<Int>) -> Self {
        Self::from_rat(Rat::from_integer(n.into())).expect("integers are 2-adic")
    }

    pub fn from_nat(n: &Nat) -> Self {
        Self::from_int(arith::nat_to_int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    /// The value `P + 2^u * beta(W) / (1 - 2^L)` with digits `pre` followed
    /// by `per` repeated, in canonical form.
    pub fn from_blocks(pre: &[bool], per: &[bool]) -> Self {
        let (preperiod, period) = canonical_blocks(pre, per);
        Self {
            value: block_value(&preperiod, &period),
            preperiod,
            period,
        }
    }

    pub fn value(&self) -> &Rat {
        &self.value
    }

    pub fn numer(&self) -> &Int {
        self.value.numer()
    }

    pub fn denom(&self) -> &Int {
        self.value.denom()
    }

    pub fn preperiod(&self) -> &[bool] {
        &self.preperiod
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn as_nat(&self) -> Option<Nat> {
        if self.value.is_integer() && !self.value.is_negative() {
            self.value.numer().to_biguint()
        } else {
            None
        }
    }

    /// Digit `n` (coefficient of `2^n`).
    pub fn digit(&self, n: u64) -> bool {
        let u = self.preperiod.len() as u64;
        if n < u {
            self.preperiod[n as usize]
        } else if self.period.is_empty() {
            false
        } else {
            self.period[((n - u) % self.period.len() as u64) as usize]
        }
    }

    /// Lazy stream of all digits; infinite.
    pub fn digits(&self) -> impl Iterator<Item = bool> + '_ {
        (0u64..).map(move |n| self.digit(n))
    }

    /// `[z]_{2^n}`: the residue of `z` modulo `2^n` in `[0, 2^n)`.
    pub fn residue(&self, n: u64) -> Nat {
        arith::rat_mod(&self.value, &arith::pow2(n)).expect("odd denominator")
    }

    /// `2z`.
    pub fn double(&self) -> Self {
        Self::from_rat(&self.value * Rat::from_integer(Int::from(2))).expect("odd denominator")
    }

    /// `2z + 1`.
    pub fn double_plus_one(&self) -> Self {
        Self::from_rat(&self.value * Rat::from_integer(Int::from(2)) + Rat::one()).expect("odd denominator")
    }

    /// `"num/den pre=...;per=..."`, for debugging output.
    pub fn annotated(&self) -> String {
        let block = |b: &[bool]| b.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>();
        format!(
            "{} pre={};per={}",
            self.value,
            block(&self.preperiod),
            block(&self.period)
        )
    }
}

impl PartialEq for TwoAdicRat {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for TwoAdicRat {}

impl std::hash::Hash for TwoAdicRat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl fmt::Display for TwoAdicRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FromStr for TwoAdicRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let head = s.split_whitespace().next().unwrap_or("");
        Self::from_rat(arith::parse_rat(head)?)
    }
}

fn block_value(pre: &[bool], per: &[bool]) -> Rat {
    let to_nat = |b: &[bool]| {
        let mut n = Nat::zero();
        for (i, &x) in b.iter().enumerate() {
            if x {
                n.set_bit(i as u64, true);
            }
        }
        arith::nat_to_int(&n)
    };
    let head = Rat::from_integer(to_nat(pre));
    if per.is_empty() {
        return head;
    }
    let shift = arith::nat_to_int(&arith::pow2(pre.len() as u64));
    let tail_den = Int::one() - arith::nat_to_int(&arith::pow2(per.len() as u64));
    head + Rat::new(shift * to_nat(per), tail_den)
}

/// Minimal preperiod and primitive period for the stream `pre (per)^inf`.
fn canonical_blocks(pre: &[bool], per: &[bool]) -> (Vec<bool>, Vec<bool>) {
    let mut pre = pre.to_vec();
    if !per.contains(&true) {
        while pre.last() == Some(&false) {
            pre.pop();
        }
        return (pre, Vec::new());
    }
    let len = per.len();
    let d = (1..=len)
        .find(|&d| len.is_multiple_of(d) && (d..len).all(|i| per[i] == per[i - d]))
        .unwrap_or(len);
    let mut per = per[..d].to_vec();
    while pre.last().is_some() && pre.last() == per.last() {
        pre.pop();
        per.rotate_right(1);
    }
    (pre, per)
}

/// Long division in base 2. The state `a` stands for the tail value `a/den`;
/// equal states mean equal tails, so the first repeated state yields the
/// minimal preperiod and a primitive period.
fn expand(num: &Int, den: &Int) -> (Vec<bool>, Vec<bool>) {
    debug_assert!(den.is_positive() && den.is_odd());
    let mut state = num.clone();
    let mut seen: HashMap<Int, usize> = HashMap::new();
    let mut digits = Vec::new();
    loop {
        if state.is_zero() {
            return (digits, Vec::new());
        }
        if let Some(&start) = seen.get(&state) {
            let period = digits.split_off(start);
            return (digits, period);
        }
        seen.insert(state.clone(), digits.len());
        let d = state.is_odd();
        digits.push(d);
        if d {
            state -= den;
        }
        state /= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    fn q(a: i64, b: i64) -> TwoAdicRat {
        TwoAdicRat::new(Int::from(a), Int::from(b)).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn ones_count_values() {
        assert_eq!(ones_count(&nat(0)), 0);
        assert_eq!(ones_count(&nat(11)), 3);
        assert_eq!(ones_count(&nat(12)), 2);
    }

    #[test]
    fn bit_length_values() {
        assert_eq!(bit_length(&nat(0)), 0);
        assert_eq!(bit_length(&nat(7)), 3);
        assert_eq!(bit_length(&nat(8)), 4);
    }

    #[test]
    fn beta_positions_values() {
        assert!(beta_positions(&nat(0)).is_empty());
        assert_eq!(beta_positions(&nat(10)), vec![1, 3]);
        assert_eq!(beta_positions(&nat(7)), vec![0, 1, 2]);
    }

    #[test]
    fn beta_of_word_values() {
        let w = |b: &[u8]| DigitWord::from_bits(b).unwrap();
        assert_eq!(beta_of_word(&w(&[1])), nat(1));
        assert_eq!(beta_of_word(&w(&[0, 1])), nat(2));
        assert_eq!(beta_of_word(&w(&[1, 0, 1])), nat(5));
    }

    #[test]
    fn word_of_nat_values() {
        assert_eq!(word_of_nat(&nat(5), 3).unwrap().to_string(), "101");
        assert_eq!(word_of_nat(&nat(2), 2).unwrap().to_string(), "01");
        assert_eq!(word_of_nat(&nat(0), 1).unwrap().to_string(), "0");
        assert_eq!(
            word_of_nat(&nat(5), 2),
            Err(Error::Length {
                requested: 2,
                needed: 3
            })
        );
        assert!(word_of_nat(&nat(0), 0).is_err());
    }

    #[test]
    fn digit_word_validation() {
        assert!(DigitWord::new(vec![]).is_err());
        assert!(DigitWord::from_bits(&[1, 2]).is_err());
        assert!("01x".parse::<DigitWord>().is_err());
        assert_eq!("0110".parse::<DigitWord>().unwrap().ones(), 2);
    }

    #[test]
    fn b_map_values() {
        assert_eq!(b_map(&nat(1)), TwoAdicRat::from_int(-1));
        assert_eq!(b_map(&nat(2)), q(-2, 3));
        assert_eq!(b_map(&nat(0)), TwoAdicRat::zero());
        assert_eq!(b_map(&nat(5)), q(-5, 7));
    }

    #[test]
    fn b_extension_values() {
        assert_eq!(b_extension(&q(-1, 3)), q(-1, 3));
        assert_eq!(b_extension(&TwoAdicRat::from_int(5)), q(-5, 7));
        assert_eq!(b_extension(&TwoAdicRat::from_int(-1)), TwoAdicRat::from_int(-1));
    }

    #[test]
    fn tau_kappa_values() {
        assert_eq!(
            tau_kappa(2, &TwoAdicRat::from_int(3)).unwrap(),
            TwoAdicRat::from_int(5)
        );
        assert_eq!(tau_kappa(3, &TwoAdicRat::from_int(-1)).unwrap(), q(-1, 7));
        assert_eq!(tau_kappa(2, &TwoAdicRat::zero()).unwrap(), TwoAdicRat::zero());
        assert!(tau_kappa(1, &TwoAdicRat::zero()).is_err());
    }

    #[test]
    fn in_d_kappa_values() {
        assert!(in_d_kappa(2, &TwoAdicRat::from_int(5)).unwrap());
        assert!(!in_d_kappa(2, &TwoAdicRat::from_int(3)).unwrap());
        assert!(in_d_kappa(3, &q(-1, 7)).unwrap());
        // period "1" wraps onto itself at distance 1
        assert!(!in_d_kappa(2, &TwoAdicRat::from_int(-1)).unwrap());
        // a lone one always qualifies; any two ones closer than kappa do not
        for j in 2..(1u64 << 3) {
            let expected = j.is_power_of_two();
            assert_eq!(
                in_d_kappa(3, &TwoAdicRat::from_nat(&nat(j))).unwrap(),
                expected,
                "j={j}"
            );
        }
    }

    fn brute_count(kappa: u32, n: u32) -> u64 {
        (0u64..1 << n)
            .filter(|&r| (1..kappa).all(|d| r & (r >> d) == 0))
            .count() as u64
    }

    #[test]
    fn d_kappa_counts_match_enumeration() {
        assert_eq!(count_d_kappa_prefixes(2, 1).unwrap(), nat(2));
        assert_eq!(count_d_kappa_prefixes(2, 2).unwrap(), nat(3));
        assert_eq!(count_d_kappa_prefixes(2, 4).unwrap(), nat(8));
        for kappa in 2..=4 {
            for n in 0..=12 {
                assert_eq!(
                    count_d_kappa_prefixes(kappa, n as u64).unwrap(),
                    nat(brute_count(kappa, n)),
                    "kappa={kappa} n={n}"
                );
            }
        }
    }

    #[test]
    fn d_kappa_density_decreases_to_zero() {
        for kappa in 2..=5u32 {
            let mut prev_density = Rat::one();
            let mut prev = Nat::one();
            for n in 1..=64u64 {
                let c = count_d_kappa_prefixes(kappa, n).unwrap();
                let density = arith::rat_from_nats(c.clone(), arith::pow2(n));
                assert!(density <= prev_density);
                if n >= kappa as u64 {
                    assert!(c < &prev * 2u32, "ratio below 2 at n={n}");
                }
                prev_density = density;
                prev = c;
            }
            assert!(prev_density < Rat::new(Int::one(), Int::from(100)));
        }
    }

    #[test]
    fn expansions_are_canonical() {
        let z = q(-1, 3);
        assert!(z.preperiod().is_empty());
        assert_eq!(z.period(), bits("10").as_slice());
        let z = TwoAdicRat::from_int(-1);
        assert_eq!(z.period(), bits("1").as_slice());
        let z = TwoAdicRat::from_int(12);
        assert_eq!(z.preperiod(), bits("0011").as_slice());
        assert!(z.period().is_empty());
        let z = TwoAdicRat::from_int(-4);
        assert_eq!(z.preperiod(), bits("00").as_slice());
        assert_eq!(z.period(), bits("1").as_slice());
        let z = q(1, 3);
        assert_eq!(z.annotated(), "1/3 pre=1;per=10");
        assert!(TwoAdicRat::new(Int::from(1), Int::from(2)).is_err());
    }

    #[test]
    fn digits_and_residues() {
        let z = q(-1, 3);
        let first: Vec<bool> = z.digits().take(5).collect();
        assert_eq!(first, bits("10101"));
        assert_eq!(z.residue(5), nat(0b10101));
        assert_eq!(TwoAdicRat::from_int(-1).residue(8), nat(255));
    }

    #[test]
    fn parse_and_display() {
        let z: TwoAdicRat = "-5/7".parse().unwrap();
        assert_eq!(z, b_map(&nat(5)));
        assert_eq!(z.to_string(), "-5/7");
        assert!("1/4".parse::<TwoAdicRat>().is_err());
    }

    fn small_rational() -> impl Strategy<Value = TwoAdicRat> {
        (-2000i64..2000, 0i64..200).prop_map(|(a, b)| q(a, 2 * b + 1))
    }

    proptest! {
        #[test]
        fn ones_count_functional_equations(t in 0u64..1 << 40, m in 1u32..20, k in 0u64..1 << 20) {
            let k = k % (1 << m);
            let lhs = ones_count(&nat((t << m) + k));
            prop_assert_eq!(lhs, ones_count(&nat(t)) + ones_count(&nat(k)));
            prop_assert_eq!(ones_count(&nat(2 * t)), ones_count(&nat(t)));
            prop_assert_eq!(ones_count(&nat(2 * t + 1)), ones_count(&nat(t)) + 1);
        }

        #[test]
        fn bit_length_functional_equations(t in 1u64..1 << 40, m in 1u32..20, k in 0u64..1 << 20) {
            let k = k % (1 << m);
            prop_assert_eq!(bit_length(&nat((t << m) + k)), bit_length(&nat(t)) + m as u64);
        }

        #[test]
        fn beta_positions_reconstruct(t in 0u64..u64::MAX) {
            let pos = beta_positions(&nat(t));
            prop_assert!(pos.windows(2).all(|w| w[0] < w[1]));
            let sum: u64 = pos.iter().map(|&b| 1u64 << b).sum();
            prop_assert_eq!(sum, t);
        }

        #[test]
        fn beta_ignores_terminal_zeros(raw in prop::collection::vec(any::<bool>(), 1..32), extra in 0usize..=8) {
            let w = DigitWord::new(raw).unwrap();
            prop_assert_eq!(beta_of_word(&w.with_trailing_zeros(extra)), beta_of_word(&w));
        }

        #[test]
        fn word_of_nat_round_trip(t in 0u64..1 << 48, pad in 0usize..8) {
            let t = nat(t);
            let len = (bit_length(&t) as usize).max(1) + pad;
            prop_assert_eq!(beta_of_word(&word_of_nat(&t, len).unwrap()), t);
        }

        #[test]
        fn b_map_is_periodic_word(t in 1u64..1 << 20) {
            let t = nat(t);
            let w = word_of_nat(&t, bit_length(&t) as usize).unwrap();
            prop_assert_eq!(b_map(&t), TwoAdicRat::from_blocks(&[], w.bits()));
        }

        #[test]
        fn blocks_canonicalize_like_long_division(
            pre in prop::collection::vec(any::<bool>(), 0..12),
            per in prop::collection::vec(any::<bool>(), 0..12),
        ) {
            let direct = TwoAdicRat::from_blocks(&pre, &per);
            let divided = TwoAdicRat::from_rat(block_value(&pre, &per)).unwrap();
            prop_assert_eq!(direct.value(), divided.value());
            prop_assert_eq!(direct.preperiod(), divided.preperiod());
            prop_assert_eq!(direct.period(), divided.period());
        }

        #[test]
        fn blocks_reconstruct_value(z in small_rational()) {
            prop_assert_eq!(block_value(z.preperiod(), z.period()), z.value().clone());
            let again = TwoAdicRat::from_blocks(z.preperiod(), z.period());
            prop_assert_eq!(again.preperiod(), z.preperiod());
            prop_assert_eq!(again.period(), z.period());
            for n in 0..20u64 {
                let r = z.residue(n + 1);
                prop_assert_eq!(r.bit(n), z.digit(n));
            }
        }

        #[test]
        fn tau_functional_equations(z in small_rational(), kappa in 2u32..6) {
            let scale = Rat::from_integer(arith::nat_to_int(&arith::pow2(kappa as u64)));
            let tz = tau_kappa(kappa, &z).unwrap();
            let t2z = tau_kappa(kappa, &z.double()).unwrap();
            let t2z1 = tau_kappa(kappa, &z.double_plus_one()).unwrap();
            prop_assert_eq!(t2z.value().clone(), tz.value() * &scale);
            prop_assert_eq!(t2z1.value().clone(), tz.value() * &scale + Rat::one());
            prop_assert!(in_d_kappa(kappa, &tz).unwrap());
        }

        #[test]
        fn tau_is_kappa_holder(x in small_rational(), y in small_rational(), kappa in 2u32..5) {
            prop_assume!(x != y);
            let d = arith::two_adic_valuation(&(x.value() - y.value())).unwrap();
            let tx = tau_kappa(kappa, &x).unwrap();
            let ty = tau_kappa(kappa, &y).unwrap();
            let dt = arith::two_adic_valuation(&(tx.value() - ty.value()));
            prop_assert_eq!(dt, Some(kappa as u64 * d));
        }
    }

    #[test]
    fn tau_is_injective_on_a_grid() {
        let mut seen = std::collections::HashSet::new();
        for a in -60i64..60 {
            for b in [1i64, 3, 5, 7, 9, 15] {
                let z = q(a, b);
                let img = tau_kappa(3, &z).unwrap();
                seen.insert((z, img));
            }
        }
        let images: std::collections::HashSet<_> = seen.iter().map(|(_, i)| i.clone()).collect();
        let inputs: std::collections::HashSet<_> = seen.iter().map(|(z, _)| z.clone()).collect();
        assert_eq!(images.len(), inputs.len());
    }
}
