//! Exact evaluation of `chi_p`.
//!
//! For a digit stream `z` with ones at positions `b_1 < b_2 < ...`,
//! `chi_p(z) = sum_k p^(k-1) / 2^(b_k + 1)`. At naturals this is a finite
//! sum; at rational 2-adic integers the periodic tail is a geometric series
//! whose sum is taken formally (it converges p-adically, and in the reals
//! exactly when the period ratio `p^w / 2^L` is below one).

use num_traits::{One, Zero};

use crate::arith::{self, Int, Nat, Rat};
use crate::error::{Error, Result};
use crate::padic::PadicTrunc;
use crate::twoadic::{beta_positions, bit_length, ones_count, TwoAdicRat};

fn check_p(p: u64) {
    assert!(p >= 3 && p % 2 == 1, "p must be an odd integer >= 3, got {p}");
}

fn int_pow(p: u64, e: u64) -> Int {
    arith::nat_to_int(&arith::pow_u64(p, e))
}

/// `chi_p` at a rational 2-adic integer, plus whether its partial sums also
/// converge in the reals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiValue {
    pub rational: Rat,
    pub is_real_convergent: bool,
}

pub fn chi_of_nat(p: u64, t: &Nat) -> Rat {
    check_p(p);
    if t.is_zero() {
        return Rat::zero();
    }
    let lambda = bit_length(t);
    // common denominator 2^lambda
    let mut num = Int::zero();
    let mut pk = Int::one();
    for b in beta_positions(t) {
        num += &pk << (lambda - 1 - b);
        pk *= p;
    }
    Rat::new(num, arith::nat_to_int(&arith::pow2(lambda)))
}

/// Sum over one block: `(sum_i p^(i-1) / 2^(b_i + 1), number of ones)`.
fn block_sum(p: u64, block: &[bool]) -> (Rat, u64) {
    let len = block.len() as u64;
    let mut num = Int::zero();
    let mut pk = Int::one();
    let mut ones = 0;
    for (b, _) in block.iter().enumerate().filter(|(_, &d)| d) {
        num += &pk << (len - b as u64);
        pk *= p;
        ones += 1;
    }
    let den = arith::nat_to_int(&arith::pow2(len + 1));
    (Rat::new(num, den), ones)
}

pub fn chi_of_rational(p: u64, z: &TwoAdicRat) -> ChiValue {
    check_p(p);
    let (pre_sum, pre_ones) = block_sum(p, z.preperiod());
    if z.period().is_empty() {
        return ChiValue {
            rational: pre_sum,
            is_real_convergent: true,
        };
    }
    let (per_sum, per_ones) = block_sum(p, z.period());
    let u = z.preperiod().len() as u64;
    let len = z.period().len() as u64;
    let shift = Rat::new(int_pow(p, pre_ones), arith::nat_to_int(&arith::pow2(u)));
    let ratio = Rat::new(int_pow(p, per_ones), arith::nat_to_int(&arith::pow2(len)));
    let is_real_convergent = ratio < Rat::one();
    let rational = pre_sum + shift * per_sum / (Rat::one() - ratio);
    ChiValue {
        rational,
        is_real_convergent,
    }
}

/// `chi_p mod p^N` from a finite digit prefix.
///
/// Terms past the `N`-th one carry a factor `p^N`, so the prefix must
/// contain `N` ones unless `complete` marks it as the full expansion of a
/// natural number.
pub fn chi_mod(p: u64, precision: u32, prefix: &[bool], complete: bool) -> Result<PadicTrunc> {
    check_p(p);
    let mut acc = PadicTrunc::new(p, precision, &Int::zero())?;
    let half = PadicTrunc::from_rat(p, precision, &Rat::new(Int::one(), Int::from(2)))?;
    let p_res = PadicTrunc::new(p, precision, &Int::from(p))?;
    let mut pow_half = half.clone();
    let mut pk = PadicTrunc::new(p, precision, &Int::one())?;
    let mut found = 0u32;
    for &d in prefix {
        if found == precision {
            break;
        }
        if d {
            acc = &acc + &(&pk * &pow_half);
            pk = &pk * &p_res;
            found += 1;
        }
        pow_half = &pow_half * &half;
    }
    if found < precision && !complete {
        return Err(Error::Precision(format!(
            "prefix has {found} ones but {precision} are needed"
        )));
    }
    Ok(acc)
}

/// [`chi_mod`] reading digits lazily from `z`.
pub fn chi_mod_of(p: u64, precision: u32, z: &TwoAdicRat) -> Result<PadicTrunc> {
    if let Some(t) = z.as_nat() {
        let digits: Vec<bool> = (0..t.bits()).map(|i| t.bit(i)).collect();
        return chi_mod(p, precision, &digits, true);
    }
    // a non-natural rational has infinitely many ones
    let mut prefix = Vec::new();
    let mut ones = 0;
    for d in z.digits() {
        prefix.push(d);
        ones += d as u32;
        if ones == precision {
            break;
        }
    }
    chi_mod(p, precision, &prefix, false)
}

/// `chi_p(B(t)) = sum_k 2^(lambda - b_k - 1) p^(k-1) / (2^lambda - p^#1)`.
pub fn chi_of_b(p: u64, t: &Nat) -> Rat {
    check_p(p);
    if t.is_zero() {
        return Rat::zero();
    }
    let lambda = bit_length(t);
    let mut num = Int::zero();
    let mut pk = Int::one();
    for b in beta_positions(t) {
        num += &pk << (lambda - b - 1);
        pk *= p;
    }
    let den = arith::nat_to_int(&arith::pow2(lambda)) - pk;
    Rat::new(num, den)
}

/// `r_p(n) = p^#1(n) / 2^lambda(n)`.
pub fn r_p(p: u64, n: &Nat) -> Rat {
    check_p(p);
    Rat::new(
        int_pow(p, ones_count(n)),
        arith::nat_to_int(&arith::pow2(bit_length(n))),
    )
}

/// `(chi_p(t_1), ..., chi_p(t_n))` where `t_k` is `z` truncated just after
/// its k-th one.
pub fn partial_sums_chi(p: u64, z: &TwoAdicRat, n_terms: usize) -> Result<Vec<Rat>> {
    check_p(p);
    let available = z.as_nat().map(|t| ones_count(&t) as usize);
    if let Some(avail) = available {
        if avail < n_terms {
            return Err(Error::Range(format!("{z} has {avail} ones, {n_terms} requested")));
        }
    }
    let mut out = Vec::with_capacity(n_terms);
    let mut acc = Rat::zero();
    let mut pk = Int::one();
    for (b, _) in z.digits().enumerate().filter(|(_, d)| *d).take(n_terms) {
        acc += Rat::new(pk.clone(), arith::nat_to_int(&arith::pow2(b as u64 + 1)));
        pk *= p;
        out.push(acc.clone());
    }
    Ok(out)
}

/// Whether `sum r_p(t_n)` is finite, i.e. whether `chi_p(z)` is doubly
/// convergent. Decided exactly by the period ratio.
pub fn double_convergence_verdict(p: u64, z: &TwoAdicRat) -> bool {
    chi_of_rational(p, z).is_real_convergent
}

/// Distances between successive ones of the periodic part, including the
/// wrap-around from the last one of a period to the first of the next.
pub fn period_gaps(z: &TwoAdicRat) -> Vec<u64> {
    let ones: Vec<u64> = z
        .period()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d)
        .map(|(i, _)| i as u64)
        .collect();
    if ones.is_empty() {
        return Vec::new();
    }
    let len = z.period().len() as u64;
    let mut gaps: Vec<u64> = ones.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(ones[0] + len - ones[ones.len() - 1]);
    gaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twoadic::{b_map, tau_kappa, word_of_nat};
    use proptest::prelude::*;

    fn r(a: i64, b: i64) -> Rat {
        Rat::new(Int::from(a), Int::from(b))
    }

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    fn q(a: i64, b: i64) -> TwoAdicRat {
        TwoAdicRat::new(Int::from(a), Int::from(b)).unwrap()
    }

    /// Independent route: apply the functional equations digit by digit
    /// from the most significant end, `chi(2x) = chi(x)/2`,
    /// `chi(2x+1) = (p chi(x) + 1)/2`.
    fn chi_by_recursion(p: u64, t: u64) -> Rat {
        let mut acc = Rat::zero();
        for i in (0..64 - t.leading_zeros()).rev() {
            acc = if (t >> i) & 1 == 1 {
                (acc * Rat::from_integer(Int::from(p)) + Rat::one()) / Rat::from_integer(Int::from(2))
            } else {
                acc / Rat::from_integer(Int::from(2))
            };
        }
        acc
    }

    #[test]
    fn chi_of_nat_values() {
        assert_eq!(chi_of_nat(3, &nat(3)), r(5, 4));
        assert_eq!(chi_of_nat(5, &nat(6)), r(7, 8));
        assert_eq!(chi_of_nat(7, &nat(0)), r(0, 1));
        for t in 0..2000 {
            assert_eq!(chi_of_nat(3, &nat(t)), chi_by_recursion(3, t));
        }
    }

    #[test]
    fn chi_of_rational_values() {
        let minus_one = TwoAdicRat::from_int(-1);
        assert_eq!(chi_of_rational(3, &minus_one).rational, r(-1, 1));
        for p in [3u64, 5, 7, 9, 11] {
            assert_eq!(chi_of_rational(p, &minus_one).rational, r(1, 2 - p as i64));
        }
        let v = chi_of_rational(3, &q(-1, 3));
        assert_eq!(v.rational, r(2, 1));
        assert!(v.is_real_convergent);
        assert!(!chi_of_rational(3, &minus_one).is_real_convergent);
        let v = chi_of_rational(5, &TwoAdicRat::from_int(6));
        assert_eq!(
            v,
            ChiValue {
                rational: r(7, 8),
                is_real_convergent: true
            }
        );
    }

    #[test]
    fn chi_mod_values() {
        assert_eq!(chi_mod(3, 1, &[true], true).unwrap().residue(), &nat(2));
        assert_eq!(chi_mod(3, 2, &[true, true], true).unwrap().residue(), &nat(8));
        assert!(chi_mod(5, 3, &[false; 7], true).unwrap().residue().is_zero());
        assert!(matches!(
            chi_mod(3, 3, &[true, true], false),
            Err(Error::Precision(_))
        ));
    }

    #[test]
    fn chi_of_b_values() {
        assert_eq!(chi_of_b(3, &nat(5)), r(-7, 1));
        assert_eq!(chi_of_b(3, &nat(6)), r(-5, 1));
        assert_eq!(chi_of_b(5, &nat(4)), r(1, 3));
        assert_eq!(chi_of_b(3, &nat(0)), r(0, 1));
        for n in 1..20 {
            assert_eq!(chi_of_b(7, &nat((1 << n) - 1)), r(1, -5));
        }
    }

    #[test]
    fn r_p_values() {
        assert_eq!(r_p(3, &nat(0)), r(1, 1));
        assert_eq!(r_p(3, &nat(3)), r(9, 4));
        assert_eq!(r_p(3, &nat(4)), r(3, 8));
    }

    #[test]
    fn partial_sum_values() {
        let minus_one = TwoAdicRat::from_int(-1);
        assert_eq!(
            partial_sums_chi(3, &minus_one, 3).unwrap(),
            vec![r(1, 2), r(5, 4), r(19, 8)]
        );
        assert_eq!(partial_sums_chi(3, &q(-1, 3), 2).unwrap(), vec![r(1, 2), r(7, 8)]);
        for b in 0..10u64 {
            let z = TwoAdicRat::from_nat(&nat(1 << b));
            assert_eq!(partial_sums_chi(5, &z, 1).unwrap(), vec![r(1, 1 << (b + 1))]);
        }
        assert!(matches!(
            partial_sums_chi(3, &TwoAdicRat::from_int(5), 3),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn partial_sums_follow_r_p() {
        let z = q(-11, 13);
        let sums = partial_sums_chi(3, &z, 12).unwrap();
        let pos: Vec<u64> = z
            .digits()
            .enumerate()
            .filter(|(_, d)| *d)
            .map(|(i, _)| i as u64)
            .take(12)
            .collect();
        let mut acc = Rat::zero();
        for (k, &b) in pos.iter().enumerate() {
            let tk = z.residue(b + 1);
            acc += r_p(3, &tk);
            assert_eq!(sums[k], &acc / Rat::from_integer(Int::from(3)));
            assert_eq!(sums[k], chi_of_nat(3, &tk));
        }
        assert!(sums.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn double_convergence_values() {
        assert!(!double_convergence_verdict(3, &TwoAdicRat::from_int(-1)));
        assert!(double_convergence_verdict(3, &q(-1, 3)));
        let tau = tau_kappa(3, &TwoAdicRat::from_int(-1)).unwrap();
        assert_eq!(tau, q(-1, 7));
        assert!(double_convergence_verdict(3, &tau));
        assert!(double_convergence_verdict(3, &TwoAdicRat::from_int(99)));
    }

    #[test]
    fn chi_is_injective_per_weight_and_unit_valued() {
        // the last one's position is read off the denominator, so values
        // determine inputs once the number of ones is fixed
        let mut seen = std::collections::HashMap::new();
        for t in 0u64..1 << 16 {
            let c = chi_of_nat(3, &nat(t));
            if t > 0 {
                assert_eq!(crate::padic::nu_p(3, &c), crate::padic::Valuation::Finite(0));
            }
            if let Some(prev) = seen.insert((t.count_ones(), c), t) {
                panic!("chi_3({prev}) = chi_3({t})");
            }
        }
    }

    #[test]
    fn chi_collides_across_weights() {
        assert_eq!(chi_of_nat(3, &nat(17)), r(19, 32));
        assert_eq!(chi_of_nat(3, &nat(28)), r(19, 32));
    }

    #[test]
    fn period_gap_values() {
        assert_eq!(period_gaps(&q(-1, 3)), vec![2]);
        assert_eq!(period_gaps(&TwoAdicRat::from_int(-1)), vec![1]);
        assert!(period_gaps(&TwoAdicRat::from_int(6)).is_empty());
        // -5/7: period 110
        assert_eq!(period_gaps(&b_map(&nat(5))).iter().sum::<u64>(), 3);
    }

    fn rational() -> impl Strategy<Value = TwoAdicRat> {
        (-5000i64..5000, 0i64..400).prop_map(|(a, b)| q(a, 2 * b + 1))
    }

    proptest! {
        #[test]
        fn functional_equations(z in rational(), p in prop::sample::select(vec![3u64, 5, 7, 9])) {
            let c = chi_of_rational(p, &z).rational;
            let two = Rat::from_integer(Int::from(2));
            prop_assert_eq!(chi_of_rational(p, &z.double()).rational, &c / &two);
            prop_assert_eq!(
                chi_of_rational(p, &z.double_plus_one()).rational,
                (&c * Rat::from_integer(Int::from(p)) + Rat::one()) / &two
            );
        }

        #[test]
        fn b_composition_routes_agree(t in 1u64..1 << 16, p in prop::sample::select(vec![3u64, 5])) {
            let t = nat(t);
            let direct = chi_of_b(p, &t);
            prop_assert_eq!(&chi_of_rational(p, &b_map(&t)).rational, &direct);
            prop_assert_eq!(&(chi_of_nat(p, &t) / (Rat::one() - r_p(p, &t))), &direct);
            let w = word_of_nat(&t, bit_length(&t) as usize).unwrap();
            let periodic = TwoAdicRat::from_blocks(&[], w.bits());
            prop_assert_eq!(chi_of_rational(p, &periodic).rational, direct);
        }

        #[test]
        fn chi_mod_matches_reduction(z in rational(), n in 1u32..8) {
            let exact = chi_of_rational(3, &z).rational;
            let expected = PadicTrunc::from_rat(3, n, &exact).unwrap();
            prop_assert_eq!(chi_mod_of(3, n, &z).unwrap(), expected);
        }

        #[test]
        fn gap_criterion(z in rational(), p in prop::sample::select(vec![3u64, 5, 7])) {
            let gaps = period_gaps(&z);
            prop_assume!(!gaps.is_empty());
            let log2p = (p as f64).log2();
            let verdict = double_convergence_verdict(p, &z);
            if gaps.iter().all(|&g| g as f64 > log2p) {
                prop_assert!(verdict);
            }
            if verdict {
                prop_assert!(gaps.iter().any(|&g| g as f64 > log2p));
            }
        }
    }
}
