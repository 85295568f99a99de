//! The acceptance suite: one report per criterion, each made of named checks.
//!
//! A check is either `Spec` (the criterion as worded), `Literal` (wording that
//! is shown to be wrong, evaluated and reported as is) or `Corrected` (the
//! faithful replacement of a `Literal` check). A criterion fails when a `Spec`
//! or `Corrected` check fails, or when a `Literal` check fails that is not in
//! [`KNOWN_DEVIATIONS`].

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{coulomb_log, omega_asym, omega_b_asym, omega_bar_b_asym, AsymConfig, AsymHole};
use crate::closed_forms::{bump_ratio, const_c, const_phi, const_phi_bar};
use crate::correlations::{
    finite_ratio, omega_b_exact, omega_b_sum, omega_bar_b_exact, omega_bar_b_sum, omega_exact, Family,
    FamilyConfig,
};
use crate::counting::{count_bruteforce, count_tilings};
use crate::kernels::{
    hyp_cross_check_exact, kernel_error, kernel_error_envelope, kernel_sum_exact, laplace_quadrature_check,
    slope_of, KernelKind, LaplaceParams,
};
use crate::lattice::{build_e, build_h, build_w, semiregular_hexagon, HoleConfig, Region, TriCell};
use crate::square::{aztec_rectangle, count_aztec, count_matchings_lgv, hartwig_c, omega_pair_extrapolated, AztecSpec};
use crate::{to_f64, Integer, Rational, Result};

/// Relative-error ceiling for the convergence criteria 3, 4 and 8.
pub const CONVERGENCE_TOL: f64 = 0.10;
/// Allowed distance of a fitted slope from its prediction (criteria 6, 7).
pub const SLOPE_TOL: f64 = 0.3;
/// Relative tolerance of the constant identities (criterion 9).
pub const IDENTITY_TOL: f64 = 1e-12;
/// Absolute tolerance of the Coulomb restatement (criterion 10).
pub const COULOMB_TOL: f64 = 1e-10;
/// Relative band around 1 for the square-lattice trend (criterion 11).
pub const SQUARE_TOL: f64 = 0.15;
/// Minimum number of regions in the oracle comparison (criterion 1).
pub const ORACLE_REGIONS: usize = 200;
/// First size of the monotone tail in criteria 3 and 4.
pub const TAIL_START: u32 = 8;
/// Window of consecutive radii covering one period of the phase `Rπ/3`.
pub const PHASE_WINDOW: u32 = 6;

/// Literal checks known to fail, as `criterion.label`.
pub const KNOWN_DEVIATIONS: &[&str] = &[
    "2.literal exponent 2^(N+m+n)",
    "3.W error decreasing over N=2..16",
    "4.W error decreasing over N=2..16",
    "4.E ratios approach 45/32",
    "6.T dyadic slope",
    "6.Tprime dyadic slope",
    "6.TbarPrime dyadic slope",
    "8.m=1,n=0 error decreasing over R=8..64",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckKind {
    Spec,
    Literal,
    Corrected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub kind: CheckKind,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(kind: CheckKind, label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { label: label.into(), kind, passed, detail: detail.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Deviation,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Deviation => "PASS (documented deviation)",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl CriterionReport {
    fn key(&self, c: &Check) -> String {
        format!("{}.{}", self.id, c.label)
    }

    /// Labels of failing literal checks, keyed as in [`KNOWN_DEVIATIONS`].
    pub fn literal_failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| c.kind == CheckKind::Literal && !c.passed)
            .map(|c| self.key(c))
            .collect()
    }

    pub fn status(&self) -> Status {
        let hard = self.checks.iter().any(|c| c.kind != CheckKind::Literal && !c.passed);
        let literal = self.literal_failures();
        if hard || literal.iter().any(|k| !KNOWN_DEVIATIONS.contains(&k.as_str())) {
            Status::Fail
        } else if literal.is_empty() {
            Status::Pass
        } else {
            Status::Deviation
        }
    }

    /// One summary line.
    pub fn line(&self) -> String {
        let failing: Vec<String> = self.checks.iter().filter(|c| !c.passed).map(|c| c.label.clone()).collect();
        let extra = if failing.is_empty() { String::new() } else { format!(" [failing: {}]", failing.join("; ")) };
        format!(
            "criterion {:>2} {}: {} ({} checks, {:.1}s){}",
            self.id,
            self.status(),
            self.title,
            self.checks.len(),
            self.seconds,
            extra
        )
    }
}

/// Titles of the eleven criteria.
pub const TITLES: [&str; 11] = [
    "oracle equivalence of tiling counts",
    "factorization identity",
    "bump-ratio convergence",
    "boundary-correlation consistency",
    "hypergeometric form of kernels",
    "kernel approximant error decay",
    "Laplace quadrature error decay",
    "boundary correlation asymptotics",
    "constant identities",
    "Coulomb restatement",
    "square lattice",
];

/// Runs one criterion (1 to 11).
pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    let start = Instant::now();
    let checks = match id {
        1 => criterion_1()?,
        2 => criterion_2()?,
        3 => criterion_3()?,
        4 => criterion_4()?,
        5 => criterion_5()?,
        6 => criterion_6()?,
        7 => criterion_7()?,
        8 => criterion_8()?,
        9 => criterion_9()?,
        10 => criterion_10()?,
        11 => criterion_11()?,
        _ => return Err(crate::Error::InvalidConfig(format!("no criterion {id}"))),
    };
    Ok(CriterionReport {
        id,
        title: TITLES[id as usize - 1],
        checks,
        seconds: Duration::as_secs_f64(&start.elapsed()),
    })
}

/// Runs every criterion in order.
pub fn run_all() -> Result<Vec<CriterionReport>> {
    (1..=11).map(run_criterion).collect()
}

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

/// Box-formula count of lozenge tilings of the hexagon with sides `a, b, c`.
pub fn macmahon(a: u32, b: u32, c: u32) -> Rational {
    let mut v = Rational::one();
    for i in 1..=a {
        for j in 1..=b {
            for k in 1..=c {
                v *= q((i + j + k - 1) as i64, (i + j + k - 2) as i64);
            }
        }
    }
    v
}

/// Regions for the oracle comparison: hexagons with random lozenge pairs
/// removed and random position weights, plus random cell subsets.
pub fn oracle_regions(count: usize, seed: u64) -> Vec<Region> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = [(1, 1, 1), (1, 2, 2), (2, 2, 2), (1, 2, 3), (1, 3, 3), (2, 2, 3), (1, 1, 5), (1, 2, 4)];
    let weights = [q(1, 2), q(2, 1), q(3, 2), q(1, 3)];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let &(a, b, c) = shapes.choose(&mut rng).expect("shapes");
        let hex = semiregular_hexagon(a, b, c);
        let cells: Vec<TriCell> = hex.cells().iter().copied().collect();
        let mut region = if out.len() % 5 == 4 {
            Region::new(cells.iter().copied().filter(|_| rng.gen_bool(0.8)))
        } else {
            let mut r = hex.clone();
            for _ in 0..rng.gen_range(0..=3) {
                let x = *cells.choose(&mut rng).expect("cells");
                let y = x.neighbors()[rng.gen_range(0..3)];
                if r.contains(&x) && r.contains(&y) {
                    r.remove_cells([x, y].iter());
                }
            }
            r
        };
        let present: Vec<TriCell> = region.cells().iter().copied().collect();
        for _ in 0..rng.gen_range(0..=3) {
            if let Some(&x) = present.choose(&mut rng) {
                let y = x.neighbors()[rng.gen_range(0..3)];
                if region.contains(&y) {
                    let w = weights.choose(&mut rng).expect("weights").clone();
                    region.set_weight(x, y, w).expect("adjacent cells of the region");
                }
            }
        }
        if region.len() <= 40 {
            out.push(region);
        }
    }
    out
}

fn criterion_1() -> Result<Vec<Check>> {
    let regions = oracle_regions(ORACLE_REGIONS, 1);
    let mismatches: Vec<usize> = regions
        .par_iter()
        .enumerate()
        .filter_map(|(i, r)| match (count_tilings(r), count_bruteforce(r)) {
            (Ok(a), Ok(b)) if a == b => None,
            _ => Some(i),
        })
        .collect();
    let nonzero = regions.iter().filter(|r| count_bruteforce(r).map(|c| !c.is_zero()).unwrap_or(false)).count();
    let mut checks = vec![Check::new(
        CheckKind::Spec,
        "count_tilings = count_bruteforce on random regions",
        mismatches.is_empty(),
        format!("{} regions ({} tileable), mismatches at {:?}", regions.len(), nonzero, mismatches),
    )];
    for (a, b, c) in [(1, 1, 1), (2, 2, 2), (1, 2, 3), (2, 2, 3)] {
        let hex = semiregular_hexagon(a, b, c);
        let (lgv, brute, oracle) = (count_tilings(&hex)?, count_bruteforce(&hex)?, macmahon(a, b, c));
        checks.push(Check::new(
            CheckKind::Spec,
            format!("hexagon ({a},{b},{c}) against box formula"),
            lgv == oracle && brute == oracle,
            format!("count {lgv}, oracle {oracle}"),
        ));
    }
    Ok(checks)
}

/// Configurations of criterion 2: `(m, n) ∈ {(0,0), (1,0), (0,1), (1,1)}`.
pub fn factorization_configs() -> Vec<HoleConfig> {
    vec![
        HoleConfig::new(vec![], vec![]),
        HoleConfig::new(vec![(1, 0)], vec![]),
        HoleConfig::new(vec![(2, 0)], vec![]),
        HoleConfig::new(vec![(2, 1)], vec![]),
        HoleConfig::new(vec![], vec![(1, 0)]),
        HoleConfig::new(vec![], vec![(2, 1)]),
        HoleConfig::new(vec![(1, 0)], vec![(1, 0)]),
        HoleConfig::new(vec![(2, 1)], vec![(3, 0)]),
    ]
}

fn criterion_2() -> Result<Vec<Check>> {
    let cases: Vec<(u32, HoleConfig)> = (1..=3)
        .flat_map(|n| factorization_configs().into_iter().map(move |h| (n, h)))
        .collect();
    let results: Vec<(u32, HoleConfig, Rational, Rational)> = cases
        .into_par_iter()
        .map(|(n, h)| {
            let mh = count_tilings(&build_h(n, &h)?)?;
            let prod = count_tilings(&build_w(n, &h)?)? * count_tilings(&build_e(n, &h)?)?;
            Ok((n, h, mh, prod))
        })
        .collect::<Result<_>>()?;
    let exponent = |n: u32, h: &HoleConfig| n + h.m() as u32 + h.n() as u32;
    let holds = |pow: u32| {
        results
            .iter()
            .filter(|(n, h, mh, prod)| *mh == Rational::from_integer(Integer::one() << (pow * exponent(*n, h))) * prod)
            .count()
    };
    let (lit, cor) = (holds(1), holds(2));
    let zero = results.iter().filter(|r| r.2.is_zero()).count();
    let total = results.len();
    Ok(vec![
        Check::new(
            CheckKind::Literal,
            "literal exponent 2^(N+m+n)",
            lit == total,
            format!("{lit}/{total} cases satisfy M(H) = 2^(N+m+n) M(W) M(E)"),
        ),
        Check::new(
            CheckKind::Corrected,
            "exponent 4^(N+m+n)",
            cor == total,
            format!("{cor}/{total} cases satisfy M(H) = 4^(N+m+n) M(W) M(E) ({zero} with M(H) = 0)"),
        ),
    ])
}

/// Relative errors of a ratio sequence against `target`.
fn ratio_errors(family: Family, config: &FamilyConfig, sizes: &[u32], target: f64) -> Result<Vec<f64>> {
    let ratios: Vec<Rational> = sizes.par_iter().map(|&n| finite_ratio(family, config, n)).collect::<Result<_>>()?;
    Ok(ratios.iter().map(|r| ((to_f64(r) - target) / target).abs()).collect())
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn fmt_errors(sizes: &[u32], errs: &[f64]) -> String {
    sizes.iter().zip(errs).map(|(n, e)| format!("{n}:{e:.2e}")).collect::<Vec<_>>().join(" ")
}

/// Literal monotonicity from the first size, monotone tail from [`TAIL_START`],
/// and the final error bound.
fn convergence_checks(
    name: &str,
    family: Family,
    config: &FamilyConfig,
    target: f64,
    literal_known_bad: bool,
) -> Result<Vec<Check>> {
    let sizes: Vec<u32> = (2..=16).collect();
    let errs = ratio_errors(family, config, &sizes, target)?;
    let tail = &errs[(TAIL_START - 2) as usize..];
    let detail = fmt_errors(&sizes, &errs);
    let last = *errs.last().expect("sizes");
    let mut checks = vec![Check::new(
        if literal_known_bad { CheckKind::Literal } else { CheckKind::Spec },
        format!("{name} error decreasing over N=2..16"),
        strictly_decreasing(&errs),
        detail.clone(),
    )];
    if literal_known_bad {
        checks.push(Check::new(
            CheckKind::Corrected,
            format!("{name} error decreasing over N={TAIL_START}..16"),
            strictly_decreasing(tail),
            detail,
        ));
    }
    checks.push(Check::new(
        CheckKind::Spec,
        format!("{name} error below 10% at N=16"),
        last < CONVERGENCE_TOL,
        format!("{last:.4}"),
    ));
    Ok(checks)
}

fn criterion_3() -> Result<Vec<Check>> {
    let config = FamilyConfig::Bumps { k: vec![1], l: vec![0] };
    let target = to_f64(&bump_ratio(&[1], &[0])?);
    let mut checks = vec![Check::new(CheckKind::Spec, "exact target 1/2", target == 0.5, format!("{target}"))];
    checks.extend(convergence_checks("W", Family::Wbump, &config, target, true)?);
    checks.extend(convergence_checks("E", Family::Ebump, &config, target, false)?);
    Ok(checks)
}

fn criterion_4() -> Result<Vec<Check>> {
    let h = HoleConfig::new(vec![(2, 0)], vec![]);
    let config = FamilyConfig::Holes(h.clone());
    let w = omega_b_exact(&h)?;
    let e = omega_bar_b_exact(&h)?;
    let e_raw = omega_bar_b_sum(&h, u128::MAX)?;
    let mut checks = vec![
        Check::new(CheckKind::Spec, "exact W value 23/24", w == q(23, 24), w.to_string()),
        Check::new(CheckKind::Spec, "raw E sum 45/32", e_raw == q(45, 32), e_raw.to_string()),
        Check::new(CheckKind::Corrected, "normalized E value 45/8", e == q(45, 8), e.to_string()),
    ];
    checks.extend(convergence_checks("W", Family::W, &config, to_f64(&w), true)?);
    let sizes: Vec<u32> = (2..=16).collect();
    let literal = ratio_errors(Family::E, &config, &sizes, 45.0 / 32.0)?;
    checks.push(Check::new(
        CheckKind::Literal,
        "E ratios approach 45/32",
        literal.last().is_some_and(|&e| e < CONVERGENCE_TOL),
        fmt_errors(&sizes, &literal),
    ));
    checks.extend(convergence_checks("E (target 45/8)", Family::E, &config, to_f64(&e), false)?);
    let mut refs_ok = true;
    let mut detail = Vec::new();
    for (m, n) in [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2)] {
        let r = HoleConfig::reference(m, n);
        let vals = [omega_b_exact(&r)?, omega_bar_b_exact(&r)?, omega_exact(&r)?];
        let ok = vals.iter().all(|v| v.is_one());
        refs_ok &= ok;
        detail.push(format!("({m},{n}):{}", if ok { "1" } else { "≠1" }));
    }
    for family in [Family::W, Family::E, Family::H] {
        let r = FamilyConfig::Holes(HoleConfig::reference(1, 1));
        let v = finite_ratio(family, &r, 2)?;
        refs_ok &= v.is_one();
        detail.push(format!("{family:?} N=2:{v}"));
    }
    checks.push(Check::new(CheckKind::Spec, "reference configurations give exactly 1", refs_ok, detail.join(" ")));
    Ok(checks)
}

fn criterion_5() -> Result<Vec<Check>> {
    let xs = [q(1, 4), q(1, 2), q(1, 1)];
    let mut grid = Vec::new();
    for kind in KernelKind::ALL {
        for n in 0..=3 {
            for r in 1..=8 {
                for v in 0..=4 {
                    for x in &xs {
                        grid.push((kind, n, r, v, x.clone()));
                    }
                }
            }
        }
    }
    let bad: Vec<String> = grid
        .par_iter()
        .filter_map(|(kind, n, r, v, x)| {
            let lhs = kernel_sum_exact(*kind, *n, *r, *v, x).ok()?;
            let rhs = hyp_cross_check_exact(*kind, *n, *r, *v, x).ok()?;
            (lhs != rhs).then(|| format!("{kind:?} n={n} R={r} v={v} x={x}"))
        })
        .collect();
    Ok(vec![Check::new(
        CheckKind::Spec,
        "kernel sums equal hypergeometric forms exactly",
        bad.is_empty(),
        format!("{} cases, mismatches: {:?}", grid.len(), bad),
    )])
}

/// Radii of the kernel and correlation ladders.
pub const DYADIC_LADDER: [u32; 4] = [8, 16, 32, 64];

fn criterion_6() -> Result<Vec<Check>> {
    let one = q(1, 1);
    let mut checks = Vec::new();
    for kind in KernelKind::ALL {
        let predicted = kind.error_exponent(0);
        let pts: Vec<(f64, f64)> = DYADIC_LADDER
            .iter()
            .map(|&r| Ok((r as f64, kernel_error(kind, 0, r, &one, 0, &one)?)))
            .collect::<Result<_>>()?;
        let env: Vec<(f64, f64)> = DYADIC_LADDER
            .iter()
            .map(|&r| Ok((r as f64, kernel_error_envelope(kind, 0, r, PHASE_WINDOW, &one, 0, &one)?)))
            .collect::<Result<_>>()?;
        let (s, se) = (slope_of(&pts), slope_of(&env));
        let literal_bad = KNOWN_DEVIATIONS.contains(&format!("6.{kind:?} dyadic slope").as_str());
        checks.push(Check::new(
            if literal_bad { CheckKind::Literal } else { CheckKind::Spec },
            format!("{kind:?} dyadic slope"),
            (s - predicted).abs() <= SLOPE_TOL,
            format!("slope {s:.3}, predicted {predicted}"),
        ));
        checks.push(Check::new(
            CheckKind::Corrected,
            format!("{kind:?} envelope slope"),
            (se - predicted).abs() <= SLOPE_TOL,
            format!("slope of max over R..R+{} is {se:.3}, predicted {predicted}", PHASE_WINDOW - 1),
        ));
    }
    Ok(checks)
}

/// Parameter sets `(x, q, l, a, b)` of criterion 7.
pub fn laplace_parameter_sets() -> Vec<LaplaceParams> {
    [(1.0, 1.0, 0.0, 0, 0.0), (0.25, 1.0, 0.0, 0, 0.0), (1.0, 0.5, 0.5, 1, 0.5), (0.25, 2.0, 1.0, 1, -0.5), (0.5, 1.5, -0.5, 2, 1.0)]
        .into_iter()
        .map(|(x, q, l, a, b)| LaplaceParams { x, q, l, a, b })
        .collect()
}

/// Radii of the quadrature ladder.
pub const LAPLACE_LADDER: [f64; 5] = [16.0, 32.0, 64.0, 128.0, 256.0];

fn criterion_7() -> Result<Vec<Check>> {
    laplace_parameter_sets()
        .par_iter()
        .map(|p| {
            let pts: Vec<(f64, f64)> = LAPLACE_LADDER
                .iter()
                .map(|&r| Ok((r, laplace_quadrature_check(r, p)?.difference)))
                .collect::<Result<_>>()?;
            let s = slope_of(&pts);
            Ok(Check::new(
                CheckKind::Spec,
                format!("x={} q={} l={} a={} b={}", p.x, p.q, p.l, p.a, p.b),
                (s + 1.5).abs() <= SLOPE_TOL,
                format!("slope {s:.3}"),
            ))
        })
        .collect()
}

fn unit_hole() -> AsymHole {
    AsymHole::new(q(1, 1), q(1, 1), 0)
}

fn criterion_8() -> Result<Vec<Check>> {
    let single = AsymConfig::new(vec![unit_hole()], vec![], 1);
    let rel = |r: u64, cfg: &AsymConfig| -> Result<f64> {
        let c = cfg.with_scale(r);
        let exact = to_f64(&omega_b_sum(&c.holes()?, u128::MAX)?);
        let main = omega_b_asym(&c)?;
        Ok(((exact - main) / main).abs())
    };
    let errs: Vec<f64> = DYADIC_LADDER.iter().map(|&r| rel(r as u64, &single)).collect::<Result<_>>()?;
    let env: Vec<f64> = DYADIC_LADDER
        .iter()
        .map(|&r| (r..r + PHASE_WINDOW).map(|s| rel(s as u64, &single)).try_fold(0.0f64, |a, e| Ok(a.max(e?))))
        .collect::<Result<_>>()?;
    let fmt = |v: &[f64]| fmt_errors(&DYADIC_LADDER, v);
    let pair = AsymConfig::new(vec![unit_hole()], vec![unit_hole()], 1);
    let pair_ladder = [4u32, 8, 16];
    let pair_errs: Vec<f64> = pair_ladder.par_iter().map(|&r| rel(r as u64, &pair)).collect::<Result<_>>()?;
    Ok(vec![
        Check::new(CheckKind::Literal, "m=1,n=0 error decreasing over R=8..64", strictly_decreasing(&errs), fmt(&errs)),
        Check::new(
            CheckKind::Corrected,
            "m=1,n=0 envelope error decreasing over R=8..64",
            strictly_decreasing(&env),
            format!("max over R..R+{}: {}", PHASE_WINDOW - 1, fmt(&env)),
        ),
        Check::new(CheckKind::Spec, "m=1,n=0 error below 10% at R=64", errs[3] < CONVERGENCE_TOL, format!("{:.4}", errs[3])),
        Check::new(
            CheckKind::Spec,
            "m=n=1 error decreasing over R=4,8,16",
            strictly_decreasing(&pair_errs),
            fmt_errors(&pair_ladder, &pair_errs),
        ),
    ])
}

/// Random valid asymptotic configurations with `m, n ≤ 2` at scale 12.
pub fn random_asym_configs(count: usize, seed: u64) -> Vec<AsymConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scales = [q(1, 2), q(1, 1), q(3, 2), q(2, 1), q(5, 2), q(3, 1)];
    let slopes = [q(1, 3), q(1, 2), q(1, 1), q(2, 1), q(3, 1)];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let hole = |rng: &mut ChaCha8Rng| {
            AsymHole::new(
                scales.choose(rng).expect("scales").clone(),
                slopes.choose(rng).expect("slopes").clone(),
                rng.gen_range(0..3),
            )
        };
        let m = rng.gen_range(0..=2);
        let n = rng.gen_range(0..=2);
        if m + n == 0 {
            continue;
        }
        let down = (0..m).map(|_| hole(&mut rng)).collect();
        let up = (0..n).map(|_| hole(&mut rng)).collect();
        let cfg = AsymConfig::new(down, up, 12);
        if cfg.holes().is_ok() {
            out.push(cfg);
        }
    }
    out
}

fn criterion_9() -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    for k in 0..=6 {
        for l in 0..=6 {
            let lhs = const_phi::<f64>(k, l) * const_phi_bar::<f64>(k, l);
            worst = worst.max((lhs / const_c::<f64>(k, l) - 1.0).abs());
        }
    }
    let mut worst_asym = 0.0f64;
    for cfg in random_asym_configs(20, 9) {
        let lhs = omega_b_asym(&cfg)? * omega_bar_b_asym(&cfg)?;
        worst_asym = worst_asym.max((lhs / omega_asym(&cfg)? - 1.0).abs());
    }
    Ok(vec![
        Check::new(CheckKind::Spec, "phi * phi_bar = c for k,l <= 6", worst <= IDENTITY_TOL, format!("max rel dev {worst:.2e}")),
        Check::new(
            CheckKind::Spec,
            "omega_asym = omega_b_asym * omega_bar_b_asym on 20 configs",
            worst_asym <= IDENTITY_TOL,
            format!("max rel dev {worst_asym:.2e}"),
        ),
    ])
}

fn criterion_10() -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    for cfg in random_asym_configs(20, 10) {
        let holes = cfg.holes()?;
        let lhs = omega_asym(&cfg)?.ln() - const_c::<f64>(2 * cfg.m() as u32, 2 * cfg.n() as u32).ln();
        worst = worst.max((lhs - coulomb_log(&holes)?).abs());
    }
    Ok(vec![Check::new(
        CheckKind::Spec,
        "log omega_asym - log c = coulomb_log on 20 configs",
        worst <= COULOMB_TOL,
        format!("max abs dev {worst:.2e}"),
    )])
}

fn criterion_11() -> Result<Vec<Check>> {
    let mut diamond_ok = true;
    for n in 1..=8u32 {
        let expected = Integer::one() << (n * (n + 1) / 2);
        diamond_ok &= count_matchings_lgv(&aztec_rectangle(n, n)) == expected;
        if n % 2 == 0 {
            diamond_ok &= count_aztec(&AztecSpec::new(n, vec![], vec![]))? == expected;
        }
    }
    let mut checks = vec![Check::new(CheckKind::Spec, "Aztec diamond counts 2^(N(N+1)/2) for N <= 8", diamond_ok, "")];
    let ratios: Vec<(u32, f64)> = [2u32, 3, 4]
        .par_iter()
        .map(|&d| Ok((d, omega_pair_extrapolated(d)? / (hartwig_c() * (d as f64).sqrt()))))
        .collect::<Result<_>>()?;
    for (d, r) in ratios {
        checks.push(Check::new(
            CheckKind::Spec,
            format!("omega(0,{d}) / (c sqrt d) within 15% of 1"),
            (r - 1.0).abs() <= SQUARE_TOL,
            format!("{r:.4} (sizes {} and {}, Richardson in 1/N)", 8 * d, 16 * d),
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_formula_values() {
        assert_eq!(macmahon(1, 1, 1), q(2, 1));
        assert_eq!(macmahon(2, 2, 2), q(20, 1));
        assert_eq!(macmahon(1, 2, 3), q(10, 1));
    }

    #[test]
    fn oracle_regions_are_small_and_deterministic() {
        let a = oracle_regions(30, 5);
        assert!(a.iter().all(|r| r.len() <= 40));
        assert_eq!(a, oracle_regions(30, 5));
    }

    #[test]
    fn random_asym_configs_are_valid() {
        for c in random_asym_configs(10, 3) {
            assert!(c.holes().is_ok());
        }
    }

    #[test]
    fn status_logic() {
        let report = CriterionReport {
            id: 2,
            title: "t",
            checks: vec![
                Check::new(CheckKind::Literal, "literal exponent 2^(N+m+n)", false, ""),
                Check::new(CheckKind::Corrected, "c", true, ""),
            ],
            seconds: 0.0,
        };
        assert_eq!(report.status(), Status::Deviation);
        let mut bad = report.clone();
        bad.checks[0].label = "other".into();
        assert_eq!(bad.status(), Status::Fail);
    }
}
