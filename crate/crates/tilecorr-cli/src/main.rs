//! `tilecorr`: exact tiling counts, hole correlations and their asymptotics
//! from the command line. Tables are written as CSV (metadata in `#` lines)
//! or as JSON with `--json`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use tilecorr::asymptotics::{theorem_ladder, AsymConfig, AsymHole};
use tilecorr::closed_forms::{chi, const_c, const_phi, const_phi_bar};
use tilecorr::correlations::{
    correlation, default_budget, finite_ratio_sequence_with, Family, FamilyConfig, Kind,
};
use tilecorr::counting::count_tilings;
use tilecorr::kernels::{
    f_approx, kernel_sum_exact, laplace_quadrature_check, loglog_slope, slope_of, KernelKind, LaplaceParams,
};
use tilecorr::lattice::{build_bumps, build_e, build_h, build_w, BumpSpec, HoleConfig, Region, Side};
use tilecorr::square::{count_aztec, hartwig_c, omega_pair_extrapolated, omega_sq_finite, AztecSpec};
use tilecorr::table::{fmt_float, ConvergenceTable};
use tilecorr::verify::{run_criterion, Status};
use tilecorr::{format_rational, parse_rational, to_f64, Rational};

#[derive(Parser)]
#[command(name = "tilecorr", version, about = "Exact lozenge-tiling hole correlations and their Coulomb asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the table to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted tiling count of one region.
    Count(CountArgs),
    /// Finite-size ratio sequence of a region family against its exact limit.
    Ratio(RatioArgs),
    /// Boundary correlation of the western half.
    OmegaB(OmegaArgs),
    /// Boundary correlation of the eastern half.
    OmegaBarB(OmegaArgs),
    /// Bulk correlation of the full hexagon.
    Omega(OmegaArgs),
    /// Asymptotic checks along a ladder of scales.
    Asym(Box<AsymArgs>),
    /// Table of the constants chi, c, phi, phi_bar.
    Constants(ConstantsArgs),
    /// Square-lattice monomer correlations on Aztec rectangles.
    Aztec(AztecArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    H,
    W,
    E,
    Wbump,
    Ebump,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::H => Family::H,
            FamilyArg::W => Family::W,
            FamilyArg::E => Family::E,
            FamilyArg::Wbump => Family::Wbump,
            FamilyArg::Ebump => Family::Ebump,
        }
    }
}

#[derive(Args)]
struct HoleArgs {
    /// Down-pointing holes as "R:v,R:v,...".
    #[arg(long, value_parser = parse_holes, default_value = "")]
    down: Holes,
    /// Up-pointing holes as "R:v,R:v,...".
    #[arg(long, value_parser = parse_holes, default_value = "")]
    up: Holes,
}

impl HoleArgs {
    fn config(&self) -> HoleConfig {
        HoleConfig::new(self.down.0.clone(), self.up.0.clone())
    }
}

#[derive(Args)]
struct BumpArgs {
    /// Bump labels below the origin, e.g. "0,2".
    #[arg(long, value_parser = parse_labels, default_value = "")]
    k: Labels,
    /// Bump labels above the origin.
    #[arg(long, value_parser = parse_labels, default_value = "")]
    l: Labels,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, value_enum, ignore_case = true, default_value = "h")]
    family: FamilyArg,
    /// Region size.
    #[arg(long = "N", default_value_t = 1)]
    n: u32,
    #[command(flatten)]
    holes: HoleArgs,
    #[command(flatten)]
    bumps: BumpArgs,
    /// Count the region stored in FILE (text format) instead of building one.
    #[arg(long, value_name = "FILE", conflicts_with = "dump_region")]
    region: Option<PathBuf>,
    /// Write the built region to FILE in text format.
    #[arg(long, value_name = "FILE")]
    dump_region: Option<PathBuf>,
}

#[derive(Args)]
struct RatioArgs {
    #[arg(long, value_enum, ignore_case = true)]
    family: FamilyArg,
    /// Sizes as "a..b" (inclusive) or "a,b,c".
    #[arg(long = "N", alias = "N-range", value_parser = parse_range)]
    n: Sizes,
    #[command(flatten)]
    holes: HoleArgs,
    #[command(flatten)]
    bumps: BumpArgs,
    /// Term budget of the exact limit.
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Args)]
struct OmegaArgs {
    #[command(flatten)]
    holes: HoleArgs,
    /// Also tabulate the finite-size ratios for these sizes.
    #[arg(long = "N", alias = "N-range", value_parser = parse_range)]
    n: Option<Sizes>,
    /// Term budget of the exact sums.
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    /// Kernel sums against their large-R approximants.
    Prop71,
    /// Laplace integral against its closed-form approximant.
    Prop72,
    /// Boundary sums against their main terms.
    Thm22,
    /// Bulk correlation against its main term.
    Thm21,
}

#[derive(Args)]
struct AsymArgs {
    #[arg(long, value_enum)]
    check: CheckArg,
    /// Scale ladder as "a..b" or "a,b,c".
    #[arg(long = "R-ladder", value_parser = parse_range, default_value = "8,16,32,64")]
    r_ladder: Sizes,
    /// Holes "D:A:q:c,U:A:q:c,..." (R_i = A R, v_i = q R_i + c) for thm21 and thm22.
    #[arg(long, value_parser = parse_asym, default_value = "D:1:1:0")]
    config: AsymHoles,
    /// Use the eastern boundary sum in thm22.
    #[arg(long)]
    bar: bool,
    /// Kernel for prop71.
    #[arg(long, default_value = "T")]
    kernel: KernelKind,
    /// Kernel index n (prop71).
    #[arg(long = "n", default_value_t = 0)]
    index: u32,
    /// Kernel argument x in (0, 1] (prop71, prop72).
    #[arg(long, value_parser = parse_rat, default_value = "1")]
    x: Rational,
    /// Slope q of v = qR + c (prop71, prop72).
    #[arg(long, value_parser = parse_rat, default_value = "1")]
    q: Rational,
    /// Offset c of v = qR + c (prop71).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    c: i64,
    /// Exponent l of t in the Laplace integrand (prop72).
    #[arg(long, value_parser = parse_rat, default_value = "0", allow_hyphen_values = true)]
    l: Rational,
    /// Exponent a of (4 - 2xt) (prop72).
    #[arg(long, default_value_t = 0)]
    a: u32,
    /// Exponent b of (4 - xt) in the denominator (prop72).
    #[arg(long, value_parser = parse_rat, default_value = "0", allow_hyphen_values = true)]
    b: Rational,
    /// Term budget of the exact sums.
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Args)]
struct ConstantsArgs {
    /// Index pairs "k,l"; repeatable.
    #[arg(long, value_parser = parse_pair, default_value = "0,0")]
    kl: Vec<(u32, u32)>,
}

#[derive(Args)]
struct AztecArgs {
    /// Removed axis labels, e.g. "0,2".
    #[arg(long, value_parser = parse_labels, default_value = "0,1")]
    removed: Labels,
    /// Split axis labels.
    #[arg(long, value_parser = parse_labels, default_value = "")]
    split: Labels,
    /// Even widths as "a..b" or "a,b,c"; odd entries of a range are skipped.
    #[arg(long = "N", alias = "N-range", value_parser = parse_range)]
    n: Option<Sizes>,
    /// Only count matchings of AR_N at the first width.
    #[arg(long)]
    count: bool,
    /// Print the extrapolated omega(0,d)/(c sqrt d) for d = 1..=D.
    #[arg(long, value_name = "D")]
    extrapolate: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only these criteria, e.g. "1,2,9".
    #[arg(long, value_parser = parse_labels)]
    criterion: Option<Labels>,
}

#[derive(Clone, Debug)]
struct Holes(Vec<(u32, u32)>);
#[derive(Clone, Debug)]
struct Labels(Vec<u32>);
#[derive(Clone, Debug)]
struct Sizes(Vec<u32>);
#[derive(Clone, Debug)]
struct AsymHoles(Vec<(bool, AsymHole)>);

fn parse_u32(s: &str) -> Result<u32, String> {
    s.trim().parse().map_err(|_| format!("not a nonnegative integer: {s:?}"))
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn items(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn parse_holes(s: &str) -> Result<Holes, String> {
    items(s)
        .map(|t| {
            let (r, v) = t.split_once(':').ok_or_else(|| format!("expected R:v, got {t:?}"))?;
            Ok((parse_u32(r)?, parse_u32(v)?))
        })
        .collect::<Result<_, String>>()
        .map(Holes)
}

fn parse_labels(s: &str) -> Result<Labels, String> {
    items(s).map(parse_u32).collect::<Result<_, _>>().map(Labels)
}

fn parse_range(s: &str) -> Result<Sizes, String> {
    let v: Vec<u32> = match s.split_once("..") {
        Some((a, b)) => (parse_u32(a)?..=parse_u32(b)?).collect(),
        None => items(s).map(parse_u32).collect::<Result<_, _>>()?,
    };
    if v.is_empty() {
        return Err("empty range".into());
    }
    Ok(Sizes(v))
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (k, l) = s.split_once(',').ok_or_else(|| format!("expected k,l, got {s:?}"))?;
    Ok((parse_u32(k)?, parse_u32(l)?))
}

fn parse_asym(s: &str) -> Result<AsymHoles, String> {
    items(s)
        .map(|t| {
            let parts: Vec<&str> = t.split(':').collect();
            let [side, a, q, c] = parts[..] else {
                return Err(format!("expected D:A:q:c or U:A:q:c, got {t:?}"));
            };
            let down = match side {
                "D" | "d" => true,
                "U" | "u" => false,
                _ => return Err(format!("hole side must be D or U, got {side:?}")),
            };
            let c: i64 = c.parse().map_err(|_| format!("not an integer: {c:?}"))?;
            Ok((down, AsymHole::new(parse_rat(a)?, parse_rat(q)?, c)))
        })
        .collect::<Result<_, String>>()
        .map(AsymHoles)
}

type CliResult<T> = Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn family_config(family: Family, holes: &HoleArgs, bumps: &BumpArgs) -> FamilyConfig {
    match family {
        Family::Wbump | Family::Ebump => FamilyConfig::Bumps { k: bumps.k.0.clone(), l: bumps.l.0.clone() },
        _ => FamilyConfig::Holes(holes.config()),
    }
}

fn build_region(args: &CountArgs) -> CliResult<Region> {
    if let Some(path) = &args.region {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        return Region::from_text(&text).map_err(err);
    }
    let holes = args.holes.config();
    let region = match args.family {
        FamilyArg::H => build_h(args.n, &holes),
        FamilyArg::W => build_w(args.n, &holes),
        FamilyArg::E => build_e(args.n, &holes),
        FamilyArg::Wbump | FamilyArg::Ebump => {
            let side = if matches!(args.family, FamilyArg::Wbump) { Side::West } else { Side::East };
            build_bumps(&BumpSpec { n: args.n, k: args.bumps.k.0.clone(), l: args.bumps.l.0.clone(), side })
        }
    };
    region.map_err(err)
}

fn count(args: &CountArgs) -> CliResult<ConvergenceTable> {
    let region = build_region(args)?;
    if let Some(path) = &args.dump_region {
        fs::write(path, region.to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let total = count_tilings(&region).map_err(err)?;
    let mut table = ConvergenceTable::new("N")
        .with_meta("command", "count")
        .with_meta("cells", region.len().to_string())
        .with_meta("weighted_positions", region.weighted_count().to_string());
    table.push_exact(args.n as i64, &total, None);
    Ok(table)
}

fn ratio(args: &RatioArgs) -> CliResult<ConvergenceTable> {
    let family = Family::from(args.family);
    let config = family_config(family, &args.holes, &args.bumps);
    let budget = args.budget.unwrap_or_else(default_budget);
    let table = finite_ratio_sequence_with(family, &config, &args.n.0, budget).map_err(err)?;
    Ok(table.with_meta("command", "ratio"))
}

fn omega(kind: Kind, args: &OmegaArgs) -> CliResult<ConvergenceTable> {
    let holes = args.holes.config();
    let budget = args.budget.unwrap_or_else(default_budget);
    if let Some(sizes) = &args.n {
        let family = match kind {
            Kind::OmegaB => Family::W,
            Kind::OmegaBarB => Family::E,
            Kind::Omega => Family::H,
        };
        let table = finite_ratio_sequence_with(family, &FamilyConfig::Holes(holes), &sizes.0, budget).map_err(err)?;
        return Ok(table.with_meta("command", format!("{kind:?}")));
    }
    let value = correlation(kind, &holes, budget).map_err(err)?;
    let mut table = ConvergenceTable::new("N")
        .with_meta("command", format!("{kind:?}"))
        .with_meta("note", "limit as N -> infinity; the N column is 0");
    table.push_exact(0, &value.value, None);
    Ok(table)
}

fn asym_config(holes: &AsymHoles) -> AsymConfig {
    let pick = |down: bool| holes.0.iter().filter(|(d, _)| *d == down).map(|(_, h)| h.clone()).collect();
    AsymConfig::new(pick(true), pick(false), 1)
}

fn asym(args: &AsymArgs) -> CliResult<ConvergenceTable> {
    let ladder = &args.r_ladder.0;
    match args.check {
        CheckArg::Prop71 => {
            let rows: Vec<(u32, Rational, f64)> = ladder
                .par_iter()
                .map(|&r| {
                    let v = &args.q * Rational::from_integer(r.into()) + Rational::from_integer(args.c.into());
                    if !v.is_integer() || v < Rational::from_integer(0.into()) {
                        return Err(format!("v = qR + c = {v} is not a nonnegative integer at R = {r}"));
                    }
                    let v: u32 = v.to_integer().try_into().map_err(|_| "v too large".to_string())?;
                    let exact = kernel_sum_exact(args.kernel, args.index, r, v, &args.x).map_err(err)?;
                    let approx = f_approx(args.kernel, args.index, r as f64, to_f64(&args.q), to_f64(&args.x))
                        .map_err(err)?;
                    Ok((r, exact, approx))
                })
                .collect::<CliResult<_>>()?;
            let points: Vec<(f64, f64)> =
                rows.iter().map(|(r, e, a)| (*r as f64, (to_f64(e) - a).abs())).collect();
            let mut table = ConvergenceTable::new("R")
                .with_meta("command", "asym prop71")
                .with_meta("kernel", format!("{:?} n={} x={} q={} c={}", args.kernel, args.index, args.x, args.q, args.c))
                .with_meta("target", "large-R approximant")
                .with_meta("loglog_slope_of_abs_error", fmt_float(loglog_slope(&points)))
                .with_meta("predicted_slope", fmt_float(args.kernel.error_exponent(args.index)));
            for (r, exact, approx) in rows {
                table.push_exact(r as i64, &exact, Some(approx));
            }
            Ok(table)
        }
        CheckArg::Prop72 => {
            let p = LaplaceParams {
                x: to_f64(&args.x),
                q: to_f64(&args.q),
                l: to_f64(&args.l),
                a: args.a,
                b: to_f64(&args.b),
            };
            let rows: Vec<(u32, f64)> = ladder
                .par_iter()
                .map(|&r| Ok((r, laplace_quadrature_check(r as f64, &p).map_err(err)?.difference)))
                .collect::<CliResult<_>>()?;
            let points: Vec<(f64, f64)> = rows.iter().map(|&(r, d)| (r as f64, d)).collect();
            let mut table = ConvergenceTable::new("R")
                .with_meta("command", "asym prop72")
                .with_meta("params", format!("x={} q={} l={} a={} b={}", p.x, p.q, p.l, p.a, p.b))
                .with_meta("float", "|integral - approximant|")
                .with_meta("loglog_slope", fmt_float(slope_of(&points)))
                .with_meta("predicted_slope", "-1.5");
            for (r, d) in rows {
                table.push_float(r as i64, d, None);
            }
            Ok(table)
        }
        CheckArg::Thm22 | CheckArg::Thm21 => {
            let kind = match (args.check, args.bar) {
                (CheckArg::Thm21, _) => Kind::Omega,
                (_, false) => Kind::OmegaB,
                (_, true) => Kind::OmegaBarB,
            };
            let cfg = asym_config(&args.config);
            let ladder: Vec<u64> = ladder.iter().map(|&r| r as u64).collect();
            let budget = args.budget.unwrap_or_else(default_budget);
            let table = theorem_ladder(kind, &cfg, &ladder, budget).map_err(err)?;
            Ok(table.with_meta("command", format!("asym {:?}", kind)))
        }
    }
}

#[derive(Serialize)]
struct ConstantRow {
    k: u32,
    l: u32,
    chi: String,
    c: f64,
    phi: f64,
    phi_bar: f64,
}

fn constants(args: &ConstantsArgs) -> Vec<ConstantRow> {
    args.kl
        .iter()
        .map(|&(k, l)| ConstantRow {
            k,
            l,
            chi: format_rational(&chi(k, l)),
            c: const_c(k, l),
            phi: const_phi(k, l),
            phi_bar: const_phi_bar(k, l),
        })
        .collect()
}

fn constants_csv(rows: &[ConstantRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "l", "chi", "c", "phi", "phi_bar"]).expect("in-memory write");
    for r in rows {
        w.write_record([r.k.to_string(), r.l.to_string(), r.chi.clone(), fmt_float(r.c), fmt_float(r.phi), fmt_float(r.phi_bar)])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn aztec(args: &AztecArgs) -> CliResult<ConvergenceTable> {
    if let Some(d_max) = args.extrapolate {
        let rows: Vec<(u32, f64)> = (1..=d_max)
            .into_par_iter()
            .map(|d| Ok((d, omega_pair_extrapolated(d).map_err(err)?)))
            .collect::<CliResult<_>>()?;
        let mut table = ConvergenceTable::new("d")
            .with_meta("command", "aztec extrapolate")
            .with_meta("float", "omega(0,d) Richardson-extrapolated from N = 8d and 16d")
            .with_meta("target", "c sqrt(d)")
            .with_meta("c", fmt_float(hartwig_c()));
        for (d, v) in rows {
            table.push_float(d as i64, v, Some(hartwig_c() * (d as f64).sqrt()));
        }
        return Ok(table);
    }
    let sizes: Vec<u32> = args
        .n
        .as_ref()
        .map(|s| s.0.iter().copied().filter(|n| n % 2 == 0).collect())
        .unwrap_or_else(|| vec![8, 16, 32]);
    if sizes.is_empty() {
        return Err("no even width in --N".into());
    }
    if args.count {
        let spec = AztecSpec::new(sizes[0], args.removed.0.clone(), args.split.0.clone());
        let total = count_aztec(&spec).map_err(err)?;
        let mut table = ConvergenceTable::new("N").with_meta("command", "aztec count");
        table.push_exact(sizes[0] as i64, &Rational::from_integer(total), None);
        return Ok(table);
    }
    let table = omega_sq_finite(&args.removed.0, &args.split.0, &sizes).map_err(err)?;
    Ok(table.with_meta("command", "aztec"))
}

fn verify(args: &VerifyArgs, output: &Output) -> CliResult<(String, bool)> {
    let ids: Vec<u8> = match &args.criterion {
        Some(l) => l.0.iter().map(|&i| i as u8).collect(),
        None => (1..=11).collect(),
    };
    let reports = ids.iter().map(|&i| run_criterion(i).map_err(err)).collect::<CliResult<Vec<_>>>()?;
    let ok = reports.iter().all(|r| r.status() != Status::Fail);
    let text = if output.json {
        serde_json::to_string_pretty(&reports).map_err(err)?
    } else {
        let mut s = String::new();
        for r in &reports {
            s.push_str(&r.line());
            s.push('\n');
            for c in &r.checks {
                let mark = if c.passed { "ok" } else { "FAIL" };
                s.push_str(&format!("    {mark:<4} [{:?}] {}: {}\n", c.kind, c.label, c.detail));
            }
        }
        s
    };
    Ok((text, ok))
}

fn render(table: &ConvergenceTable, output: &Output) -> String {
    if output.json {
        table.to_json()
    } else {
        table.to_csv()
    }
}

fn emit(text: &str, output: &Output) -> CliResult<()> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<bool> {
    let out = &cli.output;
    let table = match &cli.command {
        Command::Count(a) => count(a)?,
        Command::Ratio(a) => ratio(a)?,
        Command::OmegaB(a) => omega(Kind::OmegaB, a)?,
        Command::OmegaBarB(a) => omega(Kind::OmegaBarB, a)?,
        Command::Omega(a) => omega(Kind::Omega, a)?,
        Command::Asym(a) => asym(a)?,
        Command::Aztec(a) => aztec(a)?,
        Command::Constants(a) => {
            let rows = constants(a);
            let text = if out.json { serde_json::to_string_pretty(&rows).map_err(err)? } else { constants_csv(&rows) };
            emit(&text, out)?;
            return Ok(true);
        }
        Command::Verify(a) => {
            let (text, ok) = verify(a, out)?;
            emit(&text, out)?;
            return Ok(ok);
        }
    };
    emit(&render(&table, out), out)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("tilecorr: acceptance suite reported failures");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("tilecorr: {e}");
            ExitCode::from(1)
        }
    }
}
