//! Characters of `Z_2`, Fourier coefficients of `omega_{p,kappa} = chi_p o tau_kappa`,
//! L1 diagnostics and Haar-measure Riemann sums.
//!
//! Characters are the dyadic rationals `t = a / 2^m` taken mod 1, acting by
//! `z -> e^{-2 pi i {t z}_2}`. Coefficient values are double precision;
//! everything compared against them is exact.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive};

use crate::arith::{self, Int, Rat};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numen::{chi_of_rational, ChiValue};
use crate::twoadic::{tau_kappa, TwoAdicRat};

/// Largest supported denominator exponent.
pub const MAX_EXP: u32 = 62;

const HAAR_CHUNK: u64 = 1 << 14;

/// Element `num / 2^exp` of `Z[1/2]/Z`, in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicChar {
    exp: u32,
    num: u64,
}

impl DyadicChar {
    pub const ZERO: DyadicChar = DyadicChar { exp: 0, num: 0 };

    /// Reduces `num / 2^exp` modulo 1 to lowest terms.
    pub fn new(num: u64, exp: u32) -> Self {
        assert!(exp <= MAX_EXP, "denominator 2^{exp} too large");
        let mut num = num & ((1u64 << exp) - 1);
        let mut exp = exp;
        if num == 0 {
            return Self::ZERO;
        }
        let tz = num.trailing_zeros().min(exp);
        num >>= tz;
        exp -= tz;
        Self { exp, num }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn exp(self) -> u32 {
        self.exp
    }

    pub fn is_trivial(self) -> bool {
        self.num == 0
    }

    /// `|t|_2 = 2^exp` (1 for the trivial character).
    pub fn abs2(self) -> u64 {
        1u64 << self.exp
    }

    pub fn double(self) -> Self {
        Self::new(self.num << 1, self.exp)
    }

    /// `{t r}_2` in `[0, 1)` for an integer representative `r`.
    pub fn phase(self, r: u64) -> f64 {
        if self.exp == 0 {
            return 0.0;
        }
        let mask = (1u128 << self.exp) - 1;
        let prod = (self.num as u128 * r as u128) & mask;
        prod as f64 / (1u128 << self.exp) as f64
    }

    /// Position in the canonical order (by `exp`, then by numerator).
    pub fn index(self) -> usize {
        if self.exp == 0 {
            0
        } else {
            (1usize << (self.exp - 1)) + (self.num as usize >> 1)
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            return Self::ZERO;
        }
        let exp = usize::BITS - i.leading_zeros();
        let offset = i - (1usize << (exp - 1));
        Self {
            exp,
            num: 2 * offset as u64 + 1,
        }
    }

    /// All characters with `|t|_2 <= 2^depth`, canonical order.
    pub fn all(depth: u32) -> impl Iterator<Item = DyadicChar> {
        (0..1usize << depth).map(Self::from_index)
    }
}

impl fmt::Display for DyadicChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.abs2())
    }
}

fn cis_neg(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * PI * phase)
}

fn prefix_residue(prefix: &[bool], bits: u32) -> u64 {
    prefix[..bits as usize]
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
}

/// `e^{-2 pi i {t z}_2}` from the first `exp` digits of `z`.
pub fn char_value(t: DyadicChar, z_prefix: &[bool]) -> Result<Complex64> {
    if z_prefix.len() < t.exp as usize {
        return Err(Error::Precision(format!(
            "character {t} needs {} digits, got {}",
            t.exp,
            z_prefix.len()
        )));
    }
    Ok(cis_neg(t.phase(prefix_residue(z_prefix, t.exp))))
}

/// Parameters `(p, kappa)` meeting `kappa >= ceil(log2 p)` and `2^kappa - 1 > p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaParams {
    p: u64,
    kappa: u32,
}

impl OmegaParams {
    pub fn new(p: u64, kappa: u32) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) {
            return Err(Error::Parameter(format!("p = {p} must be odd and at least 3")));
        }
        if kappa > 30 {
            return Err(Error::Parameter(format!("kappa = {kappa} is too large")));
        }
        if kappa < arith::ceil_log2(p) {
            return Err(Error::Parameter(format!(
                "kappa = {kappa} is below ceil(log2 {p}) = {}",
                arith::ceil_log2(p)
            )));
        }
        if (1u64 << kappa) - 1 <= p {
            return Err(Error::Parameter(format!(
                "2^{kappa} - 1 = {} does not exceed p = {p}",
                (1u64 << kappa) - 1
            )));
        }
        Ok(Self { p, kappa })
    }

    /// Least `kappa` accepted for `p`.
    pub fn minimal(p: u64) -> Result<Self> {
        let start = arith::ceil_log2(p.max(1)).max(2);
        (start..=30)
            .find_map(|k| Self::new(p, k).ok())
            .ok_or_else(|| Error::Parameter(format!("no admissible kappa for p = {p}")))
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn kappa(self) -> u32 {
        self.kappa
    }

    fn scale(self) -> f64 {
        (1u64 << (self.kappa + 1)) as f64
    }

    /// `2^{kappa+1} - 1 - p`.
    fn denominator(self) -> i64 {
        (1i64 << (self.kappa + 1)) - 1 - self.p as i64
    }

    /// `(1 + p e^{-2 pi i t}) / 2^{kappa+1}`.
    fn factor(self, t: DyadicChar) -> Complex64 {
        (Complex64::one() + cis_neg(t.phase(1)) * self.p as f64) / self.scale()
    }
}

/// `omega_{p,kappa}(z) = chi_p(tau_kappa(z))`. `is_real_convergent` flags
/// whether the value is also the real limit of the partial sums, which is
/// guaranteed once `kappa >= ceil(log2 p)`.
pub fn omega(p: u64, kappa: u32, z: &TwoAdicRat) -> Result<ChiValue> {
    Ok(chi_of_rational(p, &tau_kappa(kappa, z)?))
}

/// `omega_{p,kappa}(j)` in double precision at a natural `j`.
pub fn omega_f64(p: u64, kappa: u32, j: u64) -> f64 {
    let step = (kappa as f64).exp2();
    let p = p as f64;
    let mut acc = 0.0;
    // most significant digit first: w(2z) = w(z)/2^k, w(2z+1) = (p w(z) + 2^(k-1))/2^k
    for i in (0..64 - j.leading_zeros()).rev() {
        acc = if (j >> i) & 1 == 1 {
            (p * acc + step / 2.0) / step
        } else {
            acc / step
        };
    }
    acc
}

/// Exact `omega_hat(0) = 2^{kappa-1} / (2^{kappa+1} - 1 - p)`.
pub fn omega_hat_zero(params: OmegaParams) -> Rat {
    Rat::new(
        Int::from(1i64 << (params.kappa - 1)),
        Int::from(params.denominator()),
    )
}

/// Exact `omega_hat(1/2) = (1/2)(1 - 2^kappa) / (2^{kappa+1} - 1 - p)`.
pub fn omega_hat_half(params: OmegaParams) -> Rat {
    Rat::new(
        Int::from(1i64 - (1i64 << params.kappa)),
        Int::from(2 * params.denominator()),
    )
}

fn rat_f64(x: &Rat) -> f64 {
    x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap()
}

pub fn omega_hat(params: OmegaParams, t: DyadicChar) -> Complex64 {
    match t.exp {
        0 => Complex64::new(rat_f64(&omega_hat_zero(params)), 0.0),
        1 => Complex64::new(rat_f64(&omega_hat_half(params)), 0.0),
        m => {
            let mut acc = Complex64::new(rat_f64(&omega_hat_half(params)), 0.0);
            for n in 0..=m - 2 {
                acc *= params.factor(DyadicChar::new(t.num << n, m));
            }
            acc
        }
    }
}

/// `|f(t) - (1 + p e^{-2 pi i t})/2^{kappa+1} f(2t) - e^{-2 pi i t}/4 [2t = 0]|`
/// with `f = omega_hat`.
pub fn fhat_functional_residual(params: OmegaParams, t: DyadicChar) -> f64 {
    let two_t = t.double();
    let mut rhs = params.factor(t) * omega_hat(params, two_t);
    if two_t.is_trivial() {
        rhs += cis_neg(t.phase(1)) / 4.0;
    }
    (omega_hat(params, t) - rhs).norm()
}

/// `2^{kappa-1}(2^{kappa+1} - 2 - p) / ((2^kappa - p - 1)(2^{kappa+1} - p - 1))`.
pub fn theorem6_bound(p: u64, kappa: u32) -> Result<Rat> {
    let params = OmegaParams::new(p, kappa)?;
    let p = Int::from(params.p);
    let two_k = Int::from(1i64 << kappa);
    let num = Int::from(1i64 << (kappa - 1)) * (&two_k * 2 - 2 - &p);
    let den = (&two_k - &p - 1) * (&two_k * 2 - &p - 1);
    Ok(Rat::new(num, den))
}

/// Fourier coefficients on all characters with `|t|_2 <= 2^depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierTable {
    pub p: u64,
    pub kappa: u32,
    pub depth: u32,
    coeffs: Vec<Complex64>,
}

impl FourierTable {
    /// Wraps coefficients given in canonical character order.
    pub fn from_coefficients(p: u64, kappa: u32, depth: u32, coeffs: Vec<Complex64>) -> Result<Self> {
        if depth > 40 || coeffs.len() != 1usize << depth {
            return Err(Error::Parameter(format!(
                "{} coefficients for depth {depth}",
                coeffs.len()
            )));
        }
        Ok(Self {
            p,
            kappa,
            depth,
            coeffs,
        })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, t: DyadicChar) -> Option<Complex64> {
        self.coeffs.get(t.index()).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (DyadicChar, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (DyadicChar::from_index(i), c))
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Partial L1 norms over `|t|_2 <= 2^m` for `m = 0..=depth`.
    pub fn l1_by_depth(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.depth as usize + 1);
        let mut acc = 0.0;
        let mut start = 0;
        for m in 0..=self.depth {
            let end = 1usize << m;
            acc += self.coeffs[start..end].iter().map(|c| c.norm()).sum::<f64>();
            out.push(acc);
            start = end;
        }
        out
    }

    /// `sum_t c(t) e^{+2 pi i {t z}_2}` over the table.
    pub fn reconstruct(&self, z: &TwoAdicRat) -> Complex64 {
        let r = z.residue(self.depth as u64).to_u64().expect("depth <= 62");
        self.iter().map(|(t, c)| c * cis_neg(t.phase(r)).conj()).sum()
    }

    /// CSV with header `t_num,t_den,re,im,abs`, canonical order, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_num,t_den,re,im,abs\n");
        for (t, c) in self.iter() {
            out.push_str(&format!(
                "{},{},{:e},{:e},{:e}\n",
                t.num,
                t.abs2(),
                c.re,
                c.im,
                c.norm()
            ));
        }
        out
    }

    pub fn from_csv(p: u64, kappa: u32, text: &str) -> Result<Self> {
        let bad = |line: &str, reason: &str| Error::Parse {
            input: line.to_string(),
            reason: reason.to_string(),
        };
        let mut lines = text.lines();
        match lines.next() {
            Some("t_num,t_den,re,im,abs") => {}
            other => return Err(bad(other.unwrap_or(""), "missing header")),
        }
        let mut coeffs = Vec::new();
        for line in lines {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(bad(line, "expected 5 columns"));
            }
            let num: u64 = cols[0].parse().map_err(|_| bad(line, "t_num"))?;
            let den: u64 = cols[1].parse().map_err(|_| bad(line, "t_den"))?;
            if !den.is_power_of_two() {
                return Err(bad(line, "t_den is not a power of two"));
            }
            let t = DyadicChar::new(num, den.trailing_zeros());
            if t.index() != coeffs.len() {
                return Err(bad(line, "rows out of canonical order"));
            }
            let re: f64 = cols[2].parse().map_err(|_| bad(line, "re"))?;
            let im: f64 = cols[3].parse().map_err(|_| bad(line, "im"))?;
            coeffs.push(Complex64::new(re, im));
        }
        let depth = coeffs.len().trailing_zeros();
        Self::from_coefficients(p, kappa, depth, coeffs)
    }
}

/// Closed-form coefficients of `omega_{p,kappa}` to depth `depth`, built level
/// by level from `omega_hat(t) = factor(t) * omega_hat(2t)`.
pub fn omega_table(params: OmegaParams, depth: u32, exec: Exec) -> FourierTable {
    assert!(depth <= 30, "depth {depth} too large");
    let mut coeffs = vec![omega_hat(params, DyadicChar::ZERO)];
    if depth >= 1 {
        coeffs.push(omega_hat(params, DyadicChar::new(1, 1)));
    }
    for m in 2..=depth {
        let prev_start = 1usize << (m - 2);
        let level = {
            let prev = &coeffs[prev_start..];
            exec.map_range(0..1u64 << (m - 1), |i| {
                let t = DyadicChar::new(2 * i + 1, m);
                let parent = t.double();
                params.factor(t) * prev[parent.index() - prev_start]
            })
        };
        coeffs.extend(level);
    }
    FourierTable {
        p: params.p,
        kappa: params.kappa,
        depth,
        coeffs,
    }
}

/// `sum_{|t|_2 <= 2^depth} |omega_hat(t)|`.
pub fn l1_partial(params: OmegaParams, depth: u32, exec: Exec) -> f64 {
    omega_table(params, depth, exec).l1_norm()
}

/// Truncated Fourier series of `omega_{p,kappa}` evaluated at `z`.
pub fn reconstruct(params: OmegaParams, depth: u32, z: &TwoAdicRat, exec: Exec) -> Complex64 {
    omega_table(params, depth, exec).reconstruct(z)
}

/// Bound on the coefficient mass beyond depth `depth`:
/// `|omega_hat(1/2)| sum_{m > depth} ((p+1)/2^kappa)^{m-1}`.
pub fn reconstruction_tail(params: OmegaParams, depth: u32) -> f64 {
    let ratio = (params.p + 1) as f64 / (1u64 << params.kappa) as f64;
    let half = rat_f64(&omega_hat_half(params)).abs();
    half * ratio.powi(depth as i32) / (1.0 - ratio)
}

/// Cylinder average `2^-n sum_{j < 2^n} f(j) e^{-2 pi i {t j}_2}`.
pub fn haar_riemann<F>(f: F, t: DyadicChar, n: u32, exec: Exec) -> Result<Complex64>
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    if n < t.exp {
        return Err(Error::Precision(format!(
            "{n} digits cannot resolve character {t}"
        )));
    }
    if n > 40 {
        return Err(Error::Parameter(format!("2^{n} sample points is too many")));
    }
    let parts = exec.map_chunks(0..1u64 << n, HAAR_CHUNK, |r| {
        r.map(|j| cis_neg(t.phase(j)) * f(j)).sum::<Complex64>()
    });
    let total: Complex64 = parts.into_iter().sum();
    Ok(total / (1u64 << n) as f64)
}

/// Numerical coefficient table of a user-supplied function on `Z_2`, for
/// running arbitrary evaluators through the L1 machinery.
pub fn haar_table<F>(f: F, p: u64, kappa: u32, depth: u32, n: u32, exec: Exec) -> Result<FourierTable>
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    let coeffs = DyadicChar::all(depth)
        .map(|t| haar_riemann(&f, t, n, exec))
        .collect::<Result<Vec<_>>>()?;
    FourierTable::from_coefficients(p, kappa, depth, coeffs)
}

/// Checks the doubling identities behind the `S_p` / `S_p^+` closure at a
/// rational point: `chi(2z) = chi(z)/2`, `chi(2z+1) = (p chi(z) + 1)/2`, and
/// `chi(z) >= 0` forcing `chi(2z+1) >= 1/2`. Rational points always lie in
/// `S_p`, so the membership closure holds trivially.
pub fn sp_identity_check(p: u64, z: &TwoAdicRat) -> bool {
    let two = Rat::from_integer(Int::from(2));
    let c = chi_of_rational(p, z).rational;
    let c_even = chi_of_rational(p, &z.double()).rational;
    let c_odd = chi_of_rational(p, &z.double_plus_one()).rational;
    let halving = c_even == &c / &two && arith::sign_of(&c_even) == arith::sign_of(&c);
    let affine = c_odd == (&c * Rat::from_integer(Int::from(p)) + Rat::one()) / &two;
    let positive = c.is_negative() || c_odd >= Rat::new(Int::one(), Int::from(2));
    halving && affine && positive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Nat;

    fn params(p: u64, k: u32) -> OmegaParams {
        OmegaParams::new(p, k).unwrap()
    }

    fn r(a: i64, b: i64) -> Rat {
        Rat::new(Int::from(a), Int::from(b))
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn character_normalization_and_order() {
        assert_eq!(DyadicChar::new(6, 3), DyadicChar::new(3, 2));
        assert_eq!(DyadicChar::new(8, 3), DyadicChar::ZERO);
        assert_eq!(DyadicChar::new(5, 2), DyadicChar::new(1, 2));
        let all: Vec<String> = DyadicChar::all(3).map(|t| t.to_string()).collect();
        assert_eq!(all, vec!["0/1", "1/2", "1/4", "3/4", "1/8", "3/8", "5/8", "7/8"]);
        for i in 0..4096 {
            assert_eq!(DyadicChar::from_index(i).index(), i);
        }
        assert_eq!(DyadicChar::new(3, 3).double(), DyadicChar::new(3, 2));
        assert_eq!(DyadicChar::new(1, 1).double(), DyadicChar::ZERO);
    }

    #[test]
    fn character_values() {
        let one = [true];
        let three = [true, true];
        assert!(close(
            char_value(DyadicChar::ZERO, &[]).unwrap(),
            Complex64::one(),
            1e-15
        ));
        assert!(close(
            char_value(DyadicChar::new(1, 1), &one).unwrap(),
            -Complex64::one(),
            1e-15
        ));
        assert!(close(
            char_value(DyadicChar::new(1, 2), &three).unwrap(),
            Complex64::i(),
            1e-15
        ));
        assert!(char_value(DyadicChar::new(1, 3), &three).is_err());
        let v = char_value(DyadicChar::new(11, 5), &[true, false, true, true, false]).unwrap();
        assert!((v.norm() - 1.0).abs() <= f64::EPSILON);
    }

    #[test]
    fn params_validation() {
        assert!(OmegaParams::new(3, 2).is_err());
        assert!(OmegaParams::new(3, 3).is_ok());
        assert!(OmegaParams::new(4, 3).is_err());
        assert!(OmegaParams::new(7, 3).is_err());
        assert_eq!(OmegaParams::minimal(3).unwrap().kappa(), 3);
        assert_eq!(OmegaParams::minimal(7).unwrap().kappa(), 4);
    }

    #[test]
    fn omega_values() {
        let w = |z: TwoAdicRat| omega(3, 3, &z).unwrap().rational;
        assert_eq!(w(TwoAdicRat::zero()), r(0, 1));
        assert_eq!(w(TwoAdicRat::from_int(1)), r(1, 2));
        assert_eq!(w(TwoAdicRat::from_int(-1)), r(4, 5));
        assert!(omega(3, 3, &TwoAdicRat::from_int(-1)).unwrap().is_real_convergent);
        // kappa below ceil(log2 p): the stream can diverge in the reals
        assert!(!omega(7, 2, &TwoAdicRat::from_int(-1)).unwrap().is_real_convergent);
        for j in 0..500u64 {
            let exact = omega(5, 3, &TwoAdicRat::from_nat(&Nat::from(j)))
                .unwrap()
                .rational;
            assert!((rat_f64(&exact) - omega_f64(5, 3, j)).abs() < 1e-14);
        }
    }

    #[test]
    fn omega_hat_values() {
        let pk = params(3, 3);
        assert_eq!(omega_hat_zero(pk), r(1, 3));
        assert_eq!(omega_hat_half(pk), r(-7, 24));
        let quarter = omega_hat(pk, DyadicChar::new(1, 2));
        let expected = Complex64::new(-7.0 / 24.0, 0.0) * Complex64::new(1.0, -3.0) / 16.0;
        assert!(close(quarter, expected, 1e-15));
    }

    #[test]
    fn functional_residuals() {
        let pk = params(3, 3);
        assert!(fhat_functional_residual(pk, DyadicChar::ZERO) < 1e-15);
        assert!(fhat_functional_residual(pk, DyadicChar::new(1, 1)) < 1e-12);
        assert!(fhat_functional_residual(pk, DyadicChar::new(3, 3)) < 1e-12);
        for (p, k) in [(3, 3), (3, 4), (5, 3), (7, 4)] {
            let pk = params(p, k);
            for t in DyadicChar::all(10) {
                assert!(fhat_functional_residual(pk, t) <= 1e-12, "p={p} k={k} t={t}");
            }
        }
    }

    #[test]
    fn table_matches_direct_products() {
        let pk = params(5, 3);
        let table = omega_table(pk, 12, Exec::Parallel);
        assert_eq!(table.len(), 1 << 12);
        for (t, c) in table.iter() {
            assert!(close(c, omega_hat(pk, t), 1e-15), "t={t}");
        }
        assert_eq!(table, omega_table(pk, 12, Exec::Sequential));
    }

    #[test]
    fn theorem6_values() {
        assert_eq!(theorem6_bound(3, 3).unwrap(), r(11, 12));
        assert_eq!(theorem6_bound(5, 3).unwrap(), r(9, 5));
        assert!(theorem6_bound(3, 2).is_err());
    }

    #[test]
    fn l1_values() {
        let pk = params(3, 3);
        assert!((l1_partial(pk, 0, Exec::Sequential) - 1.0 / 3.0).abs() < 1e-15);
        assert!((l1_partial(pk, 1, Exec::Sequential) - 5.0 / 8.0).abs() < 1e-15);
        let series = omega_table(pk, 16, Exec::Parallel).l1_by_depth();
        assert!(series.windows(2).all(|w| w[0] <= w[1]));
        assert!(*series.last().unwrap() <= 11.0 / 12.0);
        assert!(*series.last().unwrap() >= 5.0 / 8.0);
    }

    #[test]
    fn haar_basics() {
        let one = |_: u64| 1.0;
        let t0 = haar_riemann(one, DyadicChar::ZERO, 6, Exec::Sequential).unwrap();
        assert!(close(t0, Complex64::one(), 1e-15));
        let th = haar_riemann(one, DyadicChar::new(1, 1), 6, Exec::Sequential).unwrap();
        assert!(th.norm() < 1e-14);
        assert!(haar_riemann(one, DyadicChar::new(1, 4), 3, Exec::Sequential).is_err());
    }

    #[test]
    fn haar_converges_to_closed_form() {
        let pk = params(3, 3);
        let f = |j| omega_f64(3, 3, j);
        let mut errs = Vec::new();
        for n in [4u32, 8, 12, 16] {
            let h = haar_riemann(f, DyadicChar::ZERO, n, Exec::Parallel).unwrap();
            errs.push((h - omega_hat(pk, DyadicChar::ZERO)).norm());
        }
        assert!(errs.windows(2).all(|w| w[1] < w[0] * 0.1), "{errs:?}");
        let table = haar_table(f, 3, 3, 4, 16, Exec::Parallel).unwrap();
        for (t, c) in table.iter() {
            assert!(close(c, omega_hat(pk, t), 1e-6), "t={t}");
        }
    }

    #[test]
    fn reconstruction_within_tail() {
        let pk = params(3, 3);
        let table = omega_table(pk, 12, Exec::Parallel);
        let tail = reconstruction_tail(pk, 12);
        for (z, target) in [
            (TwoAdicRat::zero(), 0.0),
            (TwoAdicRat::from_int(1), 0.5),
            (TwoAdicRat::from_int(-1), 0.8),
        ] {
            let v = table.reconstruct(&z);
            assert!((v.re - target).abs() <= tail, "z={z} got {v}");
            assert!(v.im.abs() <= 1e-9);
        }
    }

    #[test]
    fn csv_round_trip() {
        let table = omega_table(params(3, 3), 5, Exec::Sequential);
        let csv = table.to_csv();
        assert!(csv.starts_with("t_num,t_den,re,im,abs\n0,1,"));
        assert_eq!(csv.lines().count(), 33);
        assert_eq!(FourierTable::from_csv(3, 3, &csv).unwrap(), table);
        assert!(FourierTable::from_csv(3, 3, "bad\n").is_err());
    }

    #[test]
    fn sp_identities() {
        assert!(sp_identity_check(3, &TwoAdicRat::from_int(1)));
        assert!(sp_identity_check(3, &TwoAdicRat::from_int(-1)));
        for p in [3, 5, 7] {
            assert!(sp_identity_check(p, &TwoAdicRat::zero()));
        }
        for a in -40i64..40 {
            for b in [1i64, 3, 5, 7, 9] {
                let z = TwoAdicRat::new(Int::from(a), Int::from(b)).unwrap();
                assert!(sp_identity_check(3, &z), "z={z}");
                assert!(sp_identity_check(5, &z), "z={z}");
            }
        }
    }
}
