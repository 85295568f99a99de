//! Exact boundary-influenced correlations as finite multiple sums, their
//! product (the central correlation), and finite-size determinant ratios that
//! converge to them.
//!
//! The raw sums (`omega_b_sum`, `omega_bar_b_sum`) are the `(2m+2n)`-fold sums
//! with their prefactors. They equal `4^{−n}` and `4^{−m}` respectively on the
//! packed reference configuration, because there the reference regions differ
//! from the packed bump regions by forced lozenges on weight-1/2 positions. The
//! correlations proper (`omega_b_exact`, …) are the limits of ratios against the
//! reference configuration, so they divide by the sum at the reference.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{bump_ratio, chi, pochhammer, pochhammer_int};
use crate::counting::count_tilings;
use crate::lattice::{build_bumps, build_e, build_h, build_w, BumpSpec, HoleConfig, Region, Side};
use crate::table::ConvergenceTable;
use crate::{format_rational, to_f64, Error, Integer, Rational, Result};

/// Default cap on the number of summand evaluations.
pub const DEFAULT_BUDGET: u128 = 5_000_000;

/// The term budget, overridable through the `TILECORR_BUDGET` environment variable.
pub fn default_budget() -> u128 {
    std::env::var("TILECORR_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Which correlation a value refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    OmegaB,
    OmegaBarB,
    Omega,
}

/// An exact correlation together with its configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationValue {
    pub value: Rational,
    pub config: HoleConfig,
    pub kind: Kind,
}

/// Number of summands `∏(R_i+1)² ∏(R′_j+1)²` of the full index range.
pub fn term_count(holes: &HoleConfig) -> u128 {
    holes
        .down
        .iter()
        .chain(&holes.up)
        .map(|&(r, _)| (r as u128 + 1).pow(2))
        .fold(1u128, |acc, t| acc.saturating_mul(t))
}

fn factorial(n: u32) -> Integer {
    (1..=n).fold(Integer::one(), |acc, k| acc * Integer::from(k))
}

/// Single-index weights of one quadromer. `odd_factorial` selects `(2a+1)!`
/// instead of `(2a)!`; `lower` is the Pochhammer base of the denominator.
fn hole_weights(r: u32, v: u32, odd_factorial: bool, lower: i64) -> Vec<Rational> {
    let half3 = Rational::new(3.into(), 2.into());
    (0..=r)
        .map(|a| {
            let f2 = factorial(2 * a + u32::from(odd_factorial));
            let mut w = Rational::new(factorial(r + a - 1), f2 * factorial(r - a))
                * pochhammer(&half3, v + a)
                / pochhammer_int(lower, v + a);
            if a % 2 == 1 {
                w = -w;
            }
            w
        })
        .collect()
}

/// Which index pairs the summation visits; terms with `a_i = b_i` or
/// `c_j = d_j` vanish, so both ranges give the same value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumRange {
    Full,
    SkipDiagonal,
}

/// Raw multiple sum for `ω_b` (`bar = false`) or `ω̄_b` (`bar = true`), with prefactor.
pub fn lemma_sum(holes: &HoleConfig, bar: bool, budget: u128, range: SumRange) -> Result<Rational> {
    holes.validate()?;
    let needed = term_count(holes);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let (m, n) = (holes.m(), holes.n());
    let half = Rational::new(1.into(), 2.into());
    let cubic = |r: u32| {
        let r = Rational::from_integer(r.into());
        &r * (&r - &half) * (&r + &half)
    };
    let mut prefactor = chi(2 * m as u32, 2 * n as u32);
    for &(r, _) in &holes.down {
        prefactor *= if bar { cubic(r) } else { Rational::from_integer(r.into()) };
    }
    for &(r, _) in &holes.up {
        prefactor *= if bar { Rational::from_integer(r.into()) } else { cubic(r) };
    }

    // integer-scaled single-hole weights
    let mut scale = Rational::one();
    let mut weights: Vec<Vec<Integer>> = Vec::new();
    let mut push_scaled = |w: Vec<Rational>| {
        let l = w.iter().fold(Integer::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        let lq = Rational::from_integer(l);
        scale *= &lq * &lq;
        weights.push(w.iter().map(|x| (x * &lq).to_integer()).collect());
    };
    for &(r, v) in &holes.down {
        push_scaled(hole_weights(r, v, bar, 2));
    }
    for &(r, v) in &holes.up {
        push_scaled(hole_weights(r, v, !bar, 1));
    }

    // cross denominators: (u + a + c) with u = v_i + v'_j + 2 ranges over [u, u + R + R'];
    // each is replaced by L_ij / s with L_ij = lcm of that range
    let mut cross_scale = Integer::one();
    let mut cross_tables: Vec<(u32, Vec<Integer>)> = Vec::new();
    for &(ri, vi) in &holes.down {
        for &(rj, vj) in &holes.up {
            let u = vi + vj + 2;
            let hi = u + ri + rj;
            let l = (u..=hi).fold(Integer::one(), |acc, s| num_integer::lcm(acc, Integer::from(s)));
            let table = (u..=hi).map(|s| &l / Integer::from(s)).collect();
            cross_scale *= num_traits::pow(l, 4);
            cross_tables.push((u, table));
        }
    }

    let dims: Vec<u32> = holes
        .down
        .iter()
        .chain(&holes.up)
        .flat_map(|&(r, _)| [r + 1, r + 1])
        .collect();
    if dims.is_empty() {
        return Ok(prefactor);
    }
    let down_v: Vec<i64> = holes.down.iter().map(|&(_, v)| v as i64).collect();
    let up_v: Vec<i64> = holes.up.iter().map(|&(_, v)| v as i64).collect();

    #[allow(clippy::needless_range_loop)]
    let term = |idx: &[u32]| -> Integer {
        let a = |i: usize| idx[2 * i] as i64;
        let b = |i: usize| idx[2 * i + 1] as i64;
        let c = |j: usize| idx[2 * m + 2 * j] as i64;
        let d = |j: usize| idx[2 * m + 2 * j + 1] as i64;
        let mut t = Integer::one();
        for i in 0..m {
            let (x, y) = (a(i), b(i));
            if x == y {
                return Integer::zero();
            }
            t *= &weights[i][x as usize] * &weights[i][y as usize] * Integer::from((x - y) * (x - y));
        }
        for j in 0..n {
            let (x, y) = (c(j), d(j));
            if x == y {
                return Integer::zero();
            }
            t *= &weights[m + j][x as usize]
                * &weights[m + j][y as usize]
                * Integer::from((x - y) * (x - y));
        }
        let mut poly = Integer::one();
        for i in 0..m {
            for j in i + 1..m {
                let dv = down_v[j] - down_v[i];
                let f = (dv + a(j) - a(i)) * (dv + a(j) - b(i)) * (dv + b(j) - a(i)) * (dv + b(j) - b(i));
                if f == 0 {
                    return Integer::zero();
                }
                poly *= Integer::from(f);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let dv = up_v[j] - up_v[i];
                let f = (dv + c(j) - c(i)) * (dv + c(j) - d(i)) * (dv + d(j) - c(i)) * (dv + d(j) - d(i));
                if f == 0 {
                    return Integer::zero();
                }
                poly *= Integer::from(f);
            }
        }
        t *= poly;
        for i in 0..m {
            for j in 0..n {
                let (u, table) = &cross_tables[i * n + j];
                let u = *u as i64;
                let at = |s: i64| &table[(s - u) as usize];
                t *= at(u + a(i) + c(j)) * at(u + a(i) + d(j)) * at(u + b(i) + c(j)) * at(u + b(i) + d(j));
            }
        }
        t
    };

    let first = dims[0];
    let rest = &dims[1..];
    let partials: Vec<Integer> = (0..first)
        .into_par_iter()
        .map(|i0| {
            let mut idx = vec![0u32; dims.len()];
            idx[0] = i0;
            let mut acc = Integer::zero();
            loop {
                let skip = range == SumRange::SkipDiagonal
                    && idx.chunks(2).any(|p| p[0] == p[1]);
                if !skip {
                    let t = term(&idx);
                    if !t.is_zero() {
                        acc += t;
                    }
                }
                // odometer over the remaining indices
                let mut k = rest.len();
                loop {
                    if k == 0 {
                        return acc;
                    }
                    idx[k] += 1;
                    if idx[k] < dims[k] {
                        break;
                    }
                    idx[k] = 0;
                    k -= 1;
                }
            }
        })
        .collect();
    let total: Integer = partials.into_iter().fold(Integer::zero(), |acc, x| acc + x);
    let value = prefactor * Rational::from_integer(total)
        / (scale * Rational::from_integer(cross_scale));
    Ok(value.abs())
}

/// Raw sum for `ω_b` with prefactor and absolute value.
pub fn omega_b_sum(holes: &HoleConfig, budget: u128) -> Result<Rational> {
    lemma_sum(holes, false, budget, SumRange::SkipDiagonal)
}

/// Raw sum for `ω̄_b` with prefactor and absolute value.
pub fn omega_bar_b_sum(holes: &HoleConfig, budget: u128) -> Result<Rational> {
    lemma_sum(holes, true, budget, SumRange::SkipDiagonal)
}

fn normalized(holes: &HoleConfig, bar: bool, budget: u128) -> Result<Rational> {
    let value = lemma_sum(holes, bar, budget, SumRange::SkipDiagonal)?;
    let reference = lemma_sum(&HoleConfig::reference(holes.m(), holes.n()), bar, u128::MAX, SumRange::SkipDiagonal)?;
    Ok(value / reference)
}

/// Boundary-influenced correlation `ω_b` of the western half-regions.
pub fn omega_b_exact(holes: &HoleConfig) -> Result<Rational> {
    omega_b_exact_with(holes, default_budget())
}

pub fn omega_b_exact_with(holes: &HoleConfig, budget: u128) -> Result<Rational> {
    normalized(holes, false, budget)
}

/// Boundary-influenced correlation `ω̄_b` of the eastern half-regions.
pub fn omega_bar_b_exact(holes: &HoleConfig) -> Result<Rational> {
    omega_bar_b_exact_with(holes, default_budget())
}

pub fn omega_bar_b_exact_with(holes: &HoleConfig, budget: u128) -> Result<Rational> {
    normalized(holes, true, budget)
}

/// Correlation at the centre, the product `ω_b · ω̄_b`.
pub fn omega_exact(holes: &HoleConfig) -> Result<Rational> {
    omega_exact_with(holes, default_budget())
}

pub fn omega_exact_with(holes: &HoleConfig, budget: u128) -> Result<Rational> {
    Ok(omega_b_exact_with(holes, budget)? * omega_bar_b_exact_with(holes, budget)?)
}

/// Evaluates one correlation kind.
pub fn correlation(kind: Kind, holes: &HoleConfig, budget: u128) -> Result<CorrelationValue> {
    let value = match kind {
        Kind::OmegaB => omega_b_exact_with(holes, budget)?,
        Kind::OmegaBarB => omega_bar_b_exact_with(holes, budget)?,
        Kind::Omega => omega_exact_with(holes, budget)?,
    };
    Ok(CorrelationValue {
        value,
        config: holes.clone(),
        kind,
    })
}

/// Region family of a finite-size ratio sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    H,
    W,
    E,
    Wbump,
    Ebump,
}

/// Configuration of a ratio sequence: holes for `H`, `W`, `E`; labels for bumps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyConfig {
    Holes(HoleConfig),
    Bumps { k: Vec<u32>, l: Vec<u32> },
}

fn region_pair(family: Family, config: &FamilyConfig, n: u32) -> Result<(Region, Region)> {
    match (family, config) {
        (Family::H | Family::W | Family::E, FamilyConfig::Holes(h)) => {
            let reference = HoleConfig::reference(h.m(), h.n());
            let build = match family {
                Family::H => build_h,
                Family::W => build_w,
                _ => build_e,
            };
            Ok((build(n, h)?, build(n, &reference)?))
        }
        (Family::Wbump | Family::Ebump, FamilyConfig::Bumps { k, l }) => {
            let side = if family == Family::Wbump { Side::West } else { Side::East };
            let spec = BumpSpec { n, k: k.clone(), l: l.clone(), side };
            let reference = BumpSpec::reference(n, k.len(), l.len(), side);
            Ok((build_bumps(&spec)?, build_bumps(&reference)?))
        }
        _ => Err(Error::InvalidConfig(format!(
            "family {family:?} does not take this kind of configuration"
        ))),
    }
}

/// Exact limit the ratio sequence of a family converges to.
pub fn family_target(family: Family, config: &FamilyConfig, budget: u128) -> Result<Rational> {
    match (family, config) {
        (Family::H, FamilyConfig::Holes(h)) => omega_exact_with(h, budget),
        (Family::W, FamilyConfig::Holes(h)) => omega_b_exact_with(h, budget),
        (Family::E, FamilyConfig::Holes(h)) => omega_bar_b_exact_with(h, budget),
        (Family::Wbump | Family::Ebump, FamilyConfig::Bumps { k, l }) => bump_ratio(k, l),
        _ => Err(Error::InvalidConfig(format!(
            "family {family:?} does not take this kind of configuration"
        ))),
    }
}

/// Exact ratio `M(region) / M(reference region)` at one size.
pub fn finite_ratio(family: Family, config: &FamilyConfig, n: u32) -> Result<Rational> {
    let (num, den) = region_pair(family, config, n)?;
    let d = count_tilings(&den)?;
    if d.is_zero() {
        return Err(Error::InvalidConfig(format!("reference region has no tiling at N = {n}")));
    }
    Ok(count_tilings(&num)? / d)
}

/// Ratios for each `N` in `sizes`, compared with the exact limit.
pub fn finite_ratio_sequence(
    family: Family,
    config: &FamilyConfig,
    sizes: &[u32],
) -> Result<ConvergenceTable> {
    finite_ratio_sequence_with(family, config, sizes, default_budget())
}

pub fn finite_ratio_sequence_with(
    family: Family,
    config: &FamilyConfig,
    sizes: &[u32],
    budget: u128,
) -> Result<ConvergenceTable> {
    let target = family_target(family, config, budget)?;
    let ratios: Vec<Rational> = sizes
        .par_iter()
        .map(|&n| finite_ratio(family, config, n))
        .collect::<Result<_>>()?;
    let mut table = ConvergenceTable::new("N")
        .with_meta("family", format!("{family:?}"))
        .with_meta("config", describe(config))
        .with_meta("target_exact", format_rational(&target));
    let t = to_f64(&target);
    for (&n, r) in sizes.iter().zip(&ratios) {
        table.push_exact(n as i64, r, Some(t));
    }
    Ok(table)
}

fn describe(config: &FamilyConfig) -> String {
    let list = |v: &[(u32, u32)]| {
        v.iter().map(|(r, v)| format!("{r}:{v}")).collect::<Vec<_>>().join(",")
    };
    let labels = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    match config {
        FamilyConfig::Holes(h) => format!("down=[{}] up=[{}]", list(&h.down), list(&h.up)),
        FamilyConfig::Bumps { k, l } => format!("k=[{}] l=[{}]", labels(k), labels(l)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn holes(down: &[(u32, u32)], up: &[(u32, u32)]) -> HoleConfig {
        HoleConfig::new(down.to_vec(), up.to_vec())
    }

    #[test]
    fn empty_and_reference_configurations() {
        assert_eq!(omega_b_exact(&holes(&[], &[])).unwrap(), q(1, 1));
        assert_eq!(omega_bar_b_exact(&holes(&[], &[])).unwrap(), q(1, 1));
        assert_eq!(omega_b_exact(&holes(&[(1, 0)], &[])).unwrap(), q(1, 1));
        assert_eq!(omega_bar_b_exact(&holes(&[(1, 0)], &[])).unwrap(), q(1, 1));
        assert_eq!(omega_exact(&holes(&[(1, 0)], &[])).unwrap(), q(1, 1));
        for (m, n) in [(1, 1), (2, 0), (0, 2), (2, 1)] {
            let r = HoleConfig::reference(m, n);
            assert_eq!(omega_exact(&r).unwrap(), q(1, 1), "({m},{n})");
        }
    }

    #[test]
    fn raw_sums_at_reference_are_powers_of_four() {
        let r = HoleConfig::reference(1, 1);
        assert_eq!(omega_b_sum(&r, DEFAULT_BUDGET).unwrap(), q(1, 4));
        assert_eq!(omega_bar_b_sum(&r, DEFAULT_BUDGET).unwrap(), q(1, 4));
        let r = HoleConfig::reference(0, 2);
        assert_eq!(omega_b_sum(&r, DEFAULT_BUDGET).unwrap(), q(1, 16));
    }

    #[test]
    fn single_down_quadromer_at_distance_two() {
        let h = holes(&[(2, 0)], &[]);
        assert_eq!(omega_b_exact(&h).unwrap(), q(23, 24));
        assert_eq!(omega_bar_b_sum(&h, DEFAULT_BUDGET).unwrap(), q(45, 32));
        assert_eq!(omega_bar_b_exact(&h).unwrap(), q(45, 8));
        assert_eq!(omega_exact(&h).unwrap(), q(345, 64));
    }

    #[test]
    fn full_and_restricted_ranges_agree() {
        let h = holes(&[(2, 1), (4, 0)], &[(3, 1)]);
        for bar in [false, true] {
            assert_eq!(
                lemma_sum(&h, bar, DEFAULT_BUDGET, SumRange::Full).unwrap(),
                lemma_sum(&h, bar, DEFAULT_BUDGET, SumRange::SkipDiagonal).unwrap()
            );
        }
    }

    #[test]
    fn permutation_invariance() {
        let a = holes(&[(2, 1), (4, 0)], &[(3, 1)]);
        let b = holes(&[(4, 0), (2, 1)], &[(3, 1)]);
        assert_eq!(omega_exact(&a).unwrap(), omega_exact(&b).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let h = holes(&[(40, 0), (50, 0)], &[]);
        assert_eq!(
            omega_b_exact_with(&h, 1000),
            Err(Error::BudgetExceeded { needed: 41 * 41 * 51 * 51, budget: 1000 })
        );
    }

    #[test]
    fn reference_ratio_is_one() {
        let cfg = FamilyConfig::Holes(HoleConfig::reference(1, 0));
        assert_eq!(finite_ratio(Family::W, &cfg, 3).unwrap(), q(1, 1));
    }
}
