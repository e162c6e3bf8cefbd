use std::fs;
use std::io::Write;
use std::path::PathBuf;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pxmap::arith::{is_prime, parse_rat};
use pxmap::dynamics::{catalan_scan, find_cycles, verify_theorem2, Theorem2Failure};
use pxmap::fourier::{self, DyadicChar, OmegaParams};
use pxmap::numen::{chi_mod_of, chi_of_b, chi_of_nat, chi_of_rational};
use pxmap::suite::{run_all, Outcome, SuiteConfig};
use pxmap::twoadic::{bit_length, ones_count};
use pxmap::{Exec, Int, Nat, Rat, TwoAdicRat};

use crate::output::{emit, Cell, Table};
use crate::{Cli, CliError, Command, RunConfig};

pub(crate) fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let opts = &cli.global;
    let exec = Exec::default();
    let (tables, failure) = match &cli.command {
        Command::Chi { targets, rational } => {
            let cfg = RunConfig::from_opts(opts, &[3])?;
            (chi(&cfg, targets, rational)?, None)
        }
        Command::Table => (table(&RunConfig::from_opts(opts, &[3, 5])?), None),
        Command::Cycles { max_steps, abs_bound } => {
            cycles(&RunConfig::from_opts(opts, &[3])?, *max_steps, *abs_bound, exec)
        }
        Command::Fourier {
            out: path,
            haar_digits,
            samples,
        } => fourier_report(
            &RunConfig::from_opts(opts, &[3])?,
            path.clone(),
            *haar_digits,
            *samples,
            exec,
        )?,
        Command::Verify { cases } => verify(&RunConfig::from_opts(opts, &[3])?, *cases, exec)?,
        Command::Catalan { max_exp } => (catalan(&RunConfig::from_opts(opts, &[3, 5, 7])?, *max_exp), None),
    };
    emit(out, opts.format, &tables)?;
    out.flush()?;
    match failure {
        Some(why) => Err(CliError::Verification(why)),
        None => Ok(()),
    }
}

type Report = (Vec<Table>, Option<String>);

fn require_prime(p: u64) -> Result<(), CliError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("p = {p} is not prime")))
    }
}

fn residue_cell(p: u64, precision: u32, z: &TwoAdicRat) -> Result<Cell, CliError> {
    Ok(Cell::from(chi_mod_of(p, precision, z)?.residue().clone()))
}

fn chi(cfg: &RunConfig, targets: &[String], rationals: &[String]) -> Result<Vec<Table>, CliError> {
    if targets.is_empty() && rationals.is_empty() {
        return Err(CliError::Usage("chi needs at least one target".into()));
    }
    if cfg.precision.is_some() {
        for &p in &cfg.primes {
            require_prime(p)?;
        }
    }
    let mut naturals = Vec::new();
    let mut points = Vec::new();
    for s in targets {
        match s.parse::<Nat>() {
            Ok(t) => naturals.push(t),
            Err(_) => points.push(s.clone()),
        }
    }
    points.extend(rationals.iter().cloned());
    let points: Vec<TwoAdicRat> = points
        .iter()
        .map(|s| TwoAdicRat::from_rat(parse_rat(s)?))
        .collect::<pxmap::Result<_>>()?;

    let with_mod = |mut cols: Vec<&'static str>| {
        if cfg.precision.is_some() {
            cols.push("chi_mod");
        }
        cols
    };
    let mut tables = Vec::new();
    if !naturals.is_empty() {
        let mut table = Table::new(
            "naturals",
            with_mod(vec!["p", "t", "ones", "lambda", "chi", "chi_b"]),
        );
        for &p in &cfg.primes {
            for t in &naturals {
                let mut row = vec![
                    p.into(),
                    t.clone().into(),
                    ones_count(t).into(),
                    bit_length(t).into(),
                    chi_of_nat(p, t).into(),
                    chi_of_b(p, t).into(),
                ];
                if let Some(n) = cfg.precision {
                    row.push(residue_cell(p, n, &TwoAdicRat::from_nat(t))?);
                }
                table.push(row);
            }
        }
        tables.push(table);
    }
    if !points.is_empty() {
        let mut table = Table::new(
            "rationals",
            with_mod(vec!["p", "z", "chi", "real_convergent", "preperiod", "period"]),
        );
        for &p in &cfg.primes {
            for z in &points {
                let value = chi_of_rational(p, z);
                let bits = |b: &[bool]| b.iter().map(|&d| if d { '1' } else { '0' }).collect::<String>();
                let mut row = vec![
                    p.into(),
                    z.value().clone().into(),
                    value.rational.into(),
                    value.is_real_convergent.into(),
                    bits(z.preperiod()).into(),
                    bits(z.period()).into(),
                ];
                if let Some(n) = cfg.precision {
                    row.push(residue_cell(p, n, z)?);
                }
                table.push(row);
            }
        }
        tables.push(table);
    }
    Ok(tables)
}

fn table(cfg: &RunConfig) -> Vec<Table> {
    let mut columns = vec!["t".to_string(), "ones".into(), "lambda".into()];
    for p in &cfg.primes {
        columns.push(format!("chi_{p}"));
    }
    for p in &cfg.primes {
        columns.push(format!("chi_b_{p}"));
    }
    let mut table = Table::new("table", columns);
    for t in 0..=cfg.t_max.unwrap_or(14) {
        let t = Nat::from(t);
        let mut row: Vec<Cell> = vec![t.clone().into(), ones_count(&t).into(), bit_length(&t).into()];
        row.extend(cfg.primes.iter().map(|&p| Cell::from(chi_of_nat(p, &t))));
        row.extend(cfg.primes.iter().map(|&p| Cell::from(chi_of_b(p, &t))));
        table.push(row);
    }
    vec![table]
}

fn int_list(xs: &[Int]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn cycles(cfg: &RunConfig, max_steps: u64, abs_bound: u64, exec: Exec) -> Report {
    let p = cfg.p();
    let (lo, hi) = cfg.range.unwrap_or((-100, 100));
    let t_max = cfg.t_max.unwrap_or(1 << 16);
    let scan = find_cycles(p, lo, hi, max_steps, abs_bound, exec);
    let report = verify_theorem2(p, t_max, &scan.cycles, exec);

    let mut cycles = Table::new("cycles", ["p", "members", "length", "word", "t"]);
    for c in &scan.cycles {
        cycles.push(vec![
            p.into(),
            int_list(&c.members).into(),
            c.len().into(),
            c.word.to_string().into(),
            c.t().into(),
        ]);
    }
    let mut forward = Table::new("forward", ["t", "x", "period"]);
    for hit in &report.forward {
        forward.push(vec![hit.t.into(), hit.x.clone().into(), hit.period.into()]);
    }
    let mut backward = Table::new("backward", ["x", "word", "t"]);
    for hit in &report.backward {
        backward.push(vec![
            hit.x.clone().into(),
            hit.word.to_string().into(),
            hit.t.clone().into(),
        ]);
    }
    let mut failures = Table::new("failures", ["kind", "t", "x", "value"]);
    for f in &report.failures {
        failures.push(match f {
            Theorem2Failure::NotPeriodic { t, x } => {
                vec!["not_periodic".into(), Cell::from(*t), x.clone().into(), "".into()]
            }
            Theorem2Failure::NotRecovered { x, t, value } => vec![
                "not_recovered".into(),
                t.clone().into(),
                x.clone().into(),
                value.clone().into(),
            ],
        });
    }
    let mut summary = Table::new(
        "summary",
        [
            "p", "seed_lo", "seed_hi", "t_max", "cycles", "escaped", "forward", "backward", "failures",
        ],
    );
    summary.push(vec![
        p.into(),
        lo.into(),
        hi.into(),
        t_max.into(),
        scan.cycles.len().into(),
        scan.escaped.into(),
        report.forward.len().into(),
        report.backward.len().into(),
        report.failures.len().into(),
    ]);
    let failure =
        (!report.is_clean()).then(|| format!("{} periodic point checks failed", report.failures.len()));
    (vec![summary, cycles, forward, backward, failures], failure)
}

fn to_f64(x: &Rat) -> f64 {
    x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap()
}

fn fourier_report(
    cfg: &RunConfig,
    path: Option<PathBuf>,
    haar_digits: u32,
    samples: usize,
    exec: Exec,
) -> Result<Report, CliError> {
    let p = cfg.p();
    let params = match cfg.kappa {
        Some(k) => OmegaParams::new(p, k)?,
        None => OmegaParams::minimal(p)?,
    };
    let kappa = params.kappa();
    let depth = cfg.depth.unwrap_or(12);
    if depth > 24 {
        return Err(CliError::Usage(format!("depth {depth} exceeds 24")));
    }
    let bound = fourier::theorem6_bound(p, kappa)?;
    let table = fourier::omega_table(params, depth, exec);
    let path = path.unwrap_or_else(|| PathBuf::from(format!("omega_p{p}_k{kappa}_M{depth}.csv")));
    fs::write(&path, table.to_csv())?;

    let series = table.l1_by_depth();
    let mut l1 = Table::new("l1", ["M", "l1_partial"]);
    for (m, s) in series.iter().enumerate() {
        l1.push(vec![m.into(), (*s).into()]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sample = vec![
        TwoAdicRat::zero(),
        TwoAdicRat::from_int(1),
        TwoAdicRat::from_int(-1),
    ];
    while sample.len() < samples.max(3) {
        let num: i64 = rng.gen_range(-(1 << 16)..1 << 16);
        let den: i64 = 2 * rng.gen_range(0..1 << 8) + 1;
        sample.push(TwoAdicRat::new(Int::from(num), Int::from(den))?);
    }
    let tail = fourier::reconstruction_tail(params, depth);
    let errors: Vec<f64> = exec.map_slice(&sample, |z| {
        let exact = fourier::omega(p, kappa, z).expect("kappa >= 2").rational;
        let v = table.reconstruct(z);
        (v.re - to_f64(&exact)).abs().max(v.im.abs())
    });
    let max_error = errors.iter().cloned().fold(0.0, f64::max);

    let f = |j| fourier::omega_f64(p, kappa, j);
    let mut haar = Table::new("haar", ["t", "closed_form", "riemann_re", "riemann_im", "delta"]);
    let mut haar_worst: f64 = 0.0;
    for (t, exact) in [
        (DyadicChar::ZERO, fourier::omega_hat_zero(params)),
        (DyadicChar::new(1, 1), fourier::omega_hat_half(params)),
    ] {
        let h = fourier::haar_riemann(f, t, haar_digits, exec)?;
        let delta = (h.re - to_f64(&exact)).hypot(h.im);
        haar_worst = haar_worst.max(delta);
        haar.push(vec![
            t.to_string().into(),
            exact.into(),
            h.re.into(),
            h.im.into(),
            delta.into(),
        ]);
    }

    let l1_total = *series.last().expect("depth >= 0");
    let mut summary = Table::new(
        "summary",
        [
            "p",
            "kappa",
            "M",
            "theorem6_bound",
            "l1_partial",
            "tail",
            "max_reconstruction_error",
            "max_haar_delta",
            "csv",
        ],
    );
    summary.push(vec![
        p.into(),
        kappa.into(),
        depth.into(),
        bound.clone().into(),
        l1_total.into(),
        tail.into(),
        max_error.into(),
        haar_worst.into(),
        path.display().to_string().into(),
    ]);

    let mut problems = Vec::new();
    if l1_total > to_f64(&bound) || series.windows(2).any(|w| w[1] < w[0]) {
        problems.push(format!("L1 partial sums {l1_total} against bound {bound}"));
    }
    if max_error > tail {
        problems.push(format!(
            "reconstruction error {max_error:e} exceeds tail {tail:e}"
        ));
    }
    let failure = (!problems.is_empty()).then(|| problems.join("; "));
    Ok((vec![summary, l1, haar], failure))
}

fn verify(cfg: &RunConfig, cases: usize, exec: Exec) -> Result<Report, CliError> {
    for &p in &cfg.primes {
        require_prime(p)?;
    }
    let mut table = Table::new("verify", ["p", "check", "outcome", "cases", "detail"]);
    let mut failed = 0;
    for &p in &cfg.primes {
        let suite = SuiteConfig {
            p,
            kappa: cfg.kappa,
            seed: cfg.seed,
            cases,
        };
        for report in run_all(&suite, exec) {
            let (outcome, detail) = match &report.outcome {
                Outcome::Pass => ("PASS", String::new()),
                Outcome::Fail(why) => {
                    failed += 1;
                    ("FAIL", why.clone())
                }
                Outcome::Skip(why) => ("SKIP", why.clone()),
            };
            table.push(vec![
                p.into(),
                report.name.into(),
                outcome.into(),
                report.cases.into(),
                detail.into(),
            ]);
        }
    }
    let failure = (failed > 0).then(|| format!("{failed} checks failed"));
    Ok((vec![table], failure))
}

fn catalan(cfg: &RunConfig, max_exp: u32) -> Vec<Table> {
    let mut table = Table::new("catalan", ["p", "a", "b", "both_at_least_2"]);
    for (p, a, b) in catalan_scan(max_exp, &cfg.primes) {
        table.push(vec![p.into(), a.into(), b.into(), (a >= 2 && b >= 2).into()]);
    }
    vec![table]
}
