//! Seeded property sweeps over the whole library.
//!
//! Each check draws its inputs from a ChaCha8 stream derived from the
//! configured seed and the check's position in [`CHECKS`], so a run is fully
//! determined by `(p, kappa, seed, cases)`.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, Int, Nat, Rat};
use crate::dynamics::{apply_word, find_cycles, verify_theorem2};
use crate::exec::Exec;
use crate::fourier::{self, DyadicChar, OmegaParams};
use crate::numen::{
    chi_mod, chi_mod_of, chi_of_b, chi_of_nat, chi_of_rational, double_convergence_verdict, period_gaps, r_p,
};
use crate::padic::{
    abs_p, abs_p_2m_minus_1, congruence_implies, lipschitz_rhs, ord2_mod_pk, satisfies_order_hypotheses,
    PadicTrunc,
};
use crate::twoadic::{b_map, ones_count, tau_kappa, DigitWord, TwoAdicRat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub p: u64,
    /// Spreading factor for the `omega` checks; the least admissible one when absent.
    pub kappa: Option<u32>,
    pub seed: u64,
    /// Random inputs per check.
    pub cases: usize,
}

impl SuiteConfig {
    pub fn new(p: u64, seed: u64) -> Self {
        Self {
            p,
            kappa: None,
            seed,
            cases: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

impl Outcome {
    pub fn is_failure(&self) -> bool {
        matches!(self, Outcome::Fail(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub outcome: Outcome,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass => write!(f, "PASS {} ({} cases)", self.name, self.cases),
            Outcome::Fail(why) => write!(f, "FAIL {}: {why}", self.name),
            Outcome::Skip(why) => write!(f, "SKIP {}: {why}", self.name),
        }
    }
}

type CheckFn = fn(&SuiteConfig, &mut ChaCha8Rng) -> Outcome;

/// Registered checks in run order.
pub const CHECKS: &[(&str, CheckFn)] = &[
    ("chi-functional-equations", chi_functional_equations),
    ("periodic-point-formula", periodic_point_formula),
    ("chi-mod-reduction", chi_mod_reduction),
    ("chi-unit-values", chi_unit_values),
    ("tau-functional-equations", tau_functional_equations),
    ("omega-functional-equations", omega_functional_equations),
    ("order-of-two", order_of_two),
    ("abs-two-pow-minus-one", abs_two_pow_minus_one),
    ("congruence-lipschitz", congruence_lipschitz),
    ("lipschitz-bound", lipschitz_bound),
    ("padic-ring-laws", padic_ring_laws),
    ("convergence-gaps", convergence_gaps),
    ("no-return", no_return),
    ("cycle-recovery", cycle_recovery),
    ("fourier-functional-equation", fourier_functional_equation),
    ("sp-identities", sp_identities),
];

pub fn check_names() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|(name, _)| *name)
}

fn rng_for(cfg: &SuiteConfig, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Runs one named check.
pub fn run_check(cfg: &SuiteConfig, name: &str) -> Option<CheckReport> {
    let index = CHECKS.iter().position(|(n, _)| *n == name)?;
    let (name, check) = CHECKS[index];
    let outcome = check(cfg, &mut rng_for(cfg, index));
    Some(CheckReport {
        name,
        cases: cfg.cases,
        outcome,
    })
}

/// Runs every registered check; reports come back in registry order.
pub fn run_all(cfg: &SuiteConfig, exec: Exec) -> Vec<CheckReport> {
    let names: Vec<&str> = check_names().collect();
    exec.map_slice(&names, |name| run_check(cfg, name).expect("registered"))
}

fn fail(what: impl fmt::Display) -> Outcome {
    Outcome::Fail(what.to_string())
}

fn random_nat(rng: &mut ChaCha8Rng, max_bits: u32) -> Nat {
    let bits = rng.gen_range(0..=max_bits);
    let mut n = Nat::zero();
    let mut left = bits;
    while left > 0 {
        let take = left.min(64);
        let word: u64 = if take == 64 {
            rng.gen()
        } else {
            rng.gen_range(0..1u64 << take)
        };
        n = (n << take) | Nat::from(word);
        left -= take;
    }
    n
}

fn random_positive_nat(rng: &mut ChaCha8Rng, max_bits: u32) -> Nat {
    loop {
        let n = random_nat(rng, max_bits);
        if !n.is_zero() {
            return n;
        }
    }
}

fn random_twoadic(rng: &mut ChaCha8Rng) -> TwoAdicRat {
    let num: i64 = rng.gen_range(-(1 << 24)..=1 << 24);
    let den: i64 = 2 * rng.gen_range(0..1 << 8) + 1;
    TwoAdicRat::new(Int::from(num), Int::from(den)).expect("odd denominator")
}

fn nat_with_positions(positions: &[u64]) -> Nat {
    positions
        .iter()
        .fold(Nat::zero(), |acc, &b| acc | (Nat::one() << b))
}

fn half(x: &Rat) -> Rat {
    x / Rat::from_integer(Int::from(2))
}

fn affine(p: u64, x: &Rat) -> Rat {
    half(&(x * Rat::from_integer(Int::from(p)) + Rat::one()))
}

fn chi_functional_equations(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let p = cfg.p;
    for _ in 0..cfg.cases {
        let t = random_nat(rng, 96);
        let c = chi_of_nat(p, &t);
        if chi_of_nat(p, &(&t << 1)) != half(&c) {
            return fail(format!("chi({p}, 2*{t}) != chi/2"));
        }
        if chi_of_nat(p, &((&t << 1) + 1u32)) != affine(p, &c) {
            return fail(format!("chi({p}, 2*{t}+1) != (p chi + 1)/2"));
        }
        let z = random_twoadic(rng);
        let c = chi_of_rational(p, &z).rational;
        if chi_of_rational(p, &z.double()).rational != half(&c) {
            return fail(format!("chi({p}, 2*({z})) != chi/2"));
        }
        if chi_of_rational(p, &z.double_plus_one()).rational != affine(p, &c) {
            return fail(format!("chi({p}, 2*({z})+1) != (p chi + 1)/2"));
        }
    }
    Outcome::Pass
}

fn periodic_point_formula(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let p = cfg.p;
    for _ in 0..cfg.cases {
        let t = random_positive_nat(rng, 80);
        let direct = chi_of_b(p, &t);
        let via_ratio = chi_of_nat(p, &t) / (Rat::one() - r_p(p, &t));
        if direct != via_ratio {
            return fail(format!(
                "chi_{p}(B({t})) = {direct}, ratio form gives {via_ratio}"
            ));
        }
        let via_digits = chi_of_rational(p, &b_map(&t)).rational;
        if direct != via_digits {
            return fail(format!(
                "chi_{p}(B({t})) = {direct}, digit stream gives {via_digits}"
            ));
        }
    }
    Outcome::Pass
}

fn chi_mod_reduction(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let p = cfg.p;
    if !arith::is_prime(p) {
        return Outcome::Skip(format!("{p} is not prime"));
    }
    for _ in 0..cfg.cases {
        let z = random_twoadic(rng);
        let n = rng.gen_range(1..=12);
        let exact = chi_of_rational(p, &z).rational;
        let Ok(expected) = PadicTrunc::from_rat(p, n, &exact) else {
            return fail(format!("chi_{p}({z}) = {exact} is not a p-adic integer"));
        };
        match chi_mod_of(p, n, &z) {
            Ok(got) if got == expected => {}
            Ok(got) => return fail(format!("chi_{p}({z}) mod {p}^{n}: {got} vs {expected}")),
            Err(e) => return fail(e),
        }
        let t = random_nat(rng, 40);
        let word: Vec<bool> = (0..arith::ceil_log2(p) as u64 * n as u64 + 41)
            .map(|i| t.bit(i))
            .collect();
        let direct = PadicTrunc::from_rat(p, n, &chi_of_nat(p, &t)).expect("unit denominator");
        match chi_mod(p, n, &word, true) {
            Ok(got) if got == direct => {}
            Ok(got) => return fail(format!("chi_{p}({t}) mod {p}^{n}: {got} vs {direct}")),
            Err(e) => return fail(e),
        }
    }
    Outcome::Pass
}

fn chi_unit_values(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let p = cfg.p;
    if !arith::is_prime(p) {
        return Outcome::Skip(format!("{p} is not prime"));
    }
    let mut seen = std::collections::HashMap::new();
    for _ in 0..cfg.cases {
        let t = random_positive_nat(rng, 64);
        let c = chi_of_nat(p, &t);
        if abs_p(p, &c) != Rat::one() {
            return fail(format!("chi_{p}({t}) = {c} is not a {p}-adic unit"));
        }
        if let Some(prev) = seen.insert((ones_count(&t), c), t.clone()) {
            if prev != t {
                return fail(format!("chi_{p}({prev}) = chi_{p}({t})"));
            }
        }
    }
    let mut values = std::collections::HashSet::new();
    for t in 0..1u64 << 12 {
        if !values.insert((t.count_ones(), chi_of_nat(p, &Nat::from(t)))) {
            return fail(format!("collision at t = {t}"));
        }
    }
    Outcome::Pass
}

fn tau_functional_equations(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..cfg.cases {
        let kappa = rng.gen_range(2..=6);
        let z = random_twoadic(rng);
        let scale = Rat::from_integer(Int::one() << kappa);
        let base = tau_kappa(kappa, &z).expect("kappa >= 2");
        let even = tau_kappa(kappa, &z.double()).expect("kappa >= 2");
        let odd = tau_kappa(kappa, &z.double_plus_one()).expect("kappa >= 2");
        if even.value() != &(base.value() * &scale) {
            return fail(format!("tau_{kappa}(2*({z})) != 2^k tau"));
        }
        if odd.value() != &(base.value() * &scale + Rat::one()) {
            return fail(format!("tau_{kappa}(2*({z})+1) != 2^k tau + 1"));
        }
    }
    Outcome::Pass
}

fn omega_params(cfg: &SuiteConfig) -> Result<OmegaParams, Outcome> {
    match cfg.kappa {
        Some(k) => OmegaParams::new(cfg.p, k),
        None => OmegaParams::minimal(cfg.p),
    }
    .map_err(|e| Outcome::Skip(e.to_string()))
}

fn omega_functional_equations(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let params = match omega_params(cfg) {
        Ok(params) => params,
        Err(skip) => return skip,
    };
    let (p, kappa) = (params.p(), params.kappa());
    let scale = Rat::from_integer(Int::one() << kappa);
    let shift = Rat::from_integer(Int::one() << (kappa - 1));
    let p_rat = Rat::from_integer(Int::from(p));
    for _ in 0..cfg.cases {
        let z = random_twoadic(rng);
        let w = fourier::omega(p, kappa, &z).expect("kappa >= 2");
        if !w.is_real_convergent || w.rational.is_negative() {
            return fail(format!("omega({z}) = {} is not a non-negative real", w.rational));
        }
        let even = fourier::omega(p, kappa, &z.double())
            .expect("kappa >= 2")
            .rational;
        let odd = fourier::omega(p, kappa, &z.double_plus_one())
            .expect("kappa >= 2")
            .rational;
        if even != &w.rational / &scale {
            return fail(format!("omega(2*({z})) != omega/2^k"));
        }
        if odd != (&p_rat * &w.rational + &shift) / &scale {
            return fail(format!("omega(2*({z})+1) != (p omega + 2^(k-1))/2^k"));
        }
    }
    Outcome::Pass
}

fn order_hypotheses(cfg: &SuiteConfig) -> Option<Outcome> {
    (!satisfies_order_hypotheses(cfg.p)).then(|| {
        Outcome::Skip(format!(
            "{} is not a prime 2^j + 1 with 2 a primitive root",
            cfg.p
        ))
    })
}

fn order_of_two(cfg: &SuiteConfig, _rng: &mut ChaCha8Rng) -> Outcome {
    if let Some(skip) = order_hypotheses(cfg) {
        return skip;
    }
    let p = cfg.p;
    for k in 1..=8u32 {
        let modulus = p.pow(k);
        let mut x = 2 % modulus;
        let mut ord = 1u64;
        while x != 1 {
            x = x * 2 % modulus;
            ord += 1;
        }
        match ord2_mod_pk(p, k) {
            Ok(got) if got == Nat::from(ord) => {}
            Ok(got) => return fail(format!("ord of 2 mod {p}^{k}: {got} vs search {ord}")),
            Err(e) => return fail(e),
        }
        if ord != (p - 1) * p.pow(k - 1) {
            return fail(format!("ord of 2 mod {p}^{k} = {ord} is not (p-1)p^(k-1)"));
        }
    }
    Outcome::Pass
}

fn abs_two_pow_minus_one(cfg: &SuiteConfig, _rng: &mut ChaCha8Rng) -> Outcome {
    if let Some(skip) = order_hypotheses(cfg) {
        return skip;
    }
    let p = cfg.p;
    let mut power = Int::one();
    for m in 1..=10_000u64 {
        power <<= 1;
        let direct = abs_p(p, &Rat::from_integer(&power - 1));
        match abs_p_2m_minus_1(p, m) {
            Ok(got) if got == direct => {}
            Ok(got) => return fail(format!("|2^{m} - 1|_{p}: {got} vs direct {direct}")),
            Err(e) => return fail(e),
        }
    }
    Outcome::Pass
}

/// A pair `(s, t)` meeting the digit congruences for modulus `p^m`.
fn congruent_pair(rng: &mut ChaCha8Rng, p: u64, m: u32) -> (Nat, Nat) {
    let mut bs = Vec::new();
    let mut bt = Vec::new();
    let (mut next_s, mut next_t) = (0u64, 0u64);
    for k in 1..=m {
        let step = (p - 1) * p.pow(m - k);
        let b = next_s + rng.gen_range(0..6);
        let lo = next_t.max(b % step);
        let first = b % step + (lo - b % step).div_ceil(step) * step;
        let c = first + step * rng.gen_range(0..3);
        bs.push(b);
        bt.push(c);
        next_s = b + 1;
        next_t = c + 1;
    }
    for _ in 0..rng.gen_range(0..4) {
        next_s += rng.gen_range(0..5);
        bs.push(next_s);
        next_s += 1;
    }
    for _ in 0..rng.gen_range(0..4) {
        next_t += rng.gen_range(0..5);
        bt.push(next_t);
        next_t += 1;
    }
    (nat_with_positions(&bs), nat_with_positions(&bt))
}

fn congruence_lipschitz(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    if let Some(skip) = order_hypotheses(cfg) {
        return skip;
    }
    let p = cfg.p;
    for _ in 0..cfg.cases {
        let m = rng.gen_range(1..=4);
        let (s, t) = congruent_pair(rng, p, m);
        match congruence_implies(p, m, &s, &t) {
            Ok(true) => {}
            Ok(false) => return fail(format!("constructed pair ({s}, {t}) rejected at m = {m}")),
            Err(e) => return fail(e),
        }
        let cs = PadicTrunc::from_rat(p, m, &chi_of_nat(p, &s)).expect("unit denominator");
        let ct = PadicTrunc::from_rat(p, m, &chi_of_nat(p, &t)).expect("unit denominator");
        if cs != ct {
            return fail(format!("chi_{p}({s}) = {cs}, chi_{p}({t}) = {ct}"));
        }
    }
    Outcome::Pass
}

fn same_weight_pair(rng: &mut ChaCha8Rng) -> (Nat, Nat) {
    let ones = rng.gen_range(1..=8);
    let draw = |rng: &mut ChaCha8Rng| {
        let mut pos = Vec::with_capacity(ones);
        let mut next = 0u64;
        for _ in 0..ones {
            next += rng.gen_range(0..12);
            pos.push(next);
            next += 1;
        }
        nat_with_positions(&pos)
    };
    let s = draw(rng);
    let t = draw(rng);
    (s, t)
}

fn lipschitz_bound(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    if let Some(skip) = order_hypotheses(cfg) {
        return skip;
    }
    let p = cfg.p;
    for _ in 0..cfg.cases {
        let (s, t) = same_weight_pair(rng);
        debug_assert_eq!(ones_count(&s), ones_count(&t));
        let lhs = abs_p(p, &(chi_of_nat(p, &s) - chi_of_nat(p, &t)));
        match lipschitz_rhs(p, &s, &t) {
            Ok(rhs) if lhs <= rhs => {}
            Ok(rhs) => return fail(format!("|chi({s}) - chi({t})|_{p} = {lhs} > {rhs}")),
            Err(e) => return fail(e),
        }
    }
    Outcome::Pass
}

fn padic_ring_laws(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let p = cfg.p;
    if !arith::is_prime(p) {
        return Outcome::Skip(format!("{p} is not prime"));
    }
    for _ in 0..cfg.cases {
        let n = rng.gen_range(1..=10);
        let draw = |rng: &mut ChaCha8Rng| {
            let v: i64 = rng.gen_range(-(1 << 40)..1 << 40);
            PadicTrunc::new(p, n, &Int::from(v)).expect("prime p")
        };
        let (a, b, c) = (draw(rng), draw(rng), draw(rng));
        if &(&a + &b) + &c != &a + &(&b + &c) || &(&a * &b) * &c != &a * &(&b * &c) {
            return fail(format!("associativity at ({a}, {b}, {c})"));
        }
        if &a * &b != &b * &a || &a + &b != &b + &a {
            return fail(format!("commutativity at ({a}, {b})"));
        }
        if &a * &(&b + &c) != &(&a * &b) + &(&a * &c) {
            return fail(format!("distributivity at ({a}, {b}, {c})"));
        }
        if a.is_unit() {
            let one = PadicTrunc::new(p, n, &Int::one()).expect("prime p");
            match a.inverse() {
                Some(inv) if &a * &inv == one => {}
                _ => return fail(format!("{a} has no inverse")),
            }
        }
    }
    Outcome::Pass
}

fn convergence_gaps(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let p = cfg.p;
    let log2p = (p as f64).log2();
    for _ in 0..cfg.cases {
        let z = random_twoadic(rng);
        let gaps = period_gaps(&z);
        let convergent = double_convergence_verdict(p, &z);
        if !gaps.is_empty() && gaps.iter().all(|&g| g as f64 > log2p) && !convergent {
            return fail(format!("{z}: every gap exceeds log2 {p} but the sums diverge"));
        }
        if convergent && !gaps.is_empty() && gaps.iter().all(|&g| g as f64 <= log2p) {
            return fail(format!("{z}: convergent with no gap above log2 {p}"));
        }
    }
    Outcome::Pass
}

fn no_return(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    let p = cfg.p;
    for _ in 0..cfg.cases {
        let v = rng.gen_range(1..=8u32);
        let num = 2 * rng.gen_range(-(1i64 << 20)..1 << 20) + 1;
        let q = Rat::new(Int::from(num), Int::one() << v);
        let len = rng.gen_range(1..=24);
        let word = DigitWord::new((0..len).map(|_| rng.gen()).collect()).expect("non-empty");
        let out = apply_word(p, &word, &q);
        let v_out = out.denom().trailing_zeros().unwrap_or(0);
        if out.is_integer() || v_out != v as u64 + len as u64 {
            return fail(format!("h_{word}({q}) = {out} returned toward the integers"));
        }
    }
    Outcome::Pass
}

fn cycle_recovery(cfg: &SuiteConfig, _rng: &mut ChaCha8Rng) -> Outcome {
    let p = cfg.p;
    let scan = find_cycles(p, -100, 100, 10_000, 1 << 40, Exec::Sequential);
    let report = verify_theorem2(p, 1 << 10, &scan.cycles, Exec::Sequential);
    if let Some(failure) = report.failures.first() {
        return fail(format!("{failure:?}"));
    }
    for cycle in &scan.cycles {
        for x in &cycle.members {
            let odd = x.to_i64().is_some_and(|v| v.rem_euclid(2) == 1);
            if odd && !report.backward.iter().any(|hit| &hit.x == x) {
                return fail(format!("odd member {x} of {cycle} not recovered"));
            }
        }
    }
    Outcome::Pass
}

fn fourier_functional_equation(cfg: &SuiteConfig, _rng: &mut ChaCha8Rng) -> Outcome {
    let params = match omega_params(cfg) {
        Ok(params) => params,
        Err(skip) => return skip,
    };
    for t in DyadicChar::all(10) {
        let r = fourier::fhat_functional_residual(params, t);
        if r.is_nan() || r > 1e-12 {
            return fail(format!("residual {r:e} at t = {t}"));
        }
    }
    let bound = fourier::theorem6_bound(params.p(), params.kappa()).expect("admissible");
    let bound = bound.numer().to_f64().unwrap() / bound.denom().to_f64().unwrap();
    let series = fourier::omega_table(params, 14, Exec::Sequential).l1_by_depth();
    if series.windows(2).any(|w| w[1] < w[0]) || series.iter().any(|&s| s > bound) {
        return fail(format!("partial L1 norms {series:?} exceed {bound}"));
    }
    Outcome::Pass
}

fn sp_identities(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..cfg.cases {
        let z = random_twoadic(rng);
        if !fourier::sp_identity_check(cfg.p, &z) {
            return fail(format!("closure identities fail at {z}"));
        }
    }
    Outcome::Pass
}
