//! Main terms of the large-distance asymptotics of the correlations, and their
//! Coulomb-potential form.

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{const_c, const_phi, const_phi_bar};
use crate::correlations::{omega_b_sum, omega_bar_b_sum, Kind};
use crate::lattice::{catalog_distance, hole_charge, HoleConfig};
use crate::table::ConvergenceTable;
use crate::{format_rational, to_f64, Error, Rational, Result};

/// Floating-point `(R_i, v_i)` pairs.
pub type Points = Vec<(f64, f64)>;

/// One quadromer moving off to infinity along `R_i = A R`, `v_i = q R_i + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymHole {
    pub scale: Rational,
    pub q: Rational,
    pub c: i64,
}

impl AsymHole {
    pub fn new(scale: Rational, q: Rational, c: i64) -> Self {
        AsymHole { scale, q, c }
    }

    /// Coordinates `(R_i, v_i)` at scale `r` as exact rationals.
    pub fn coords(&self, r: u64) -> (Rational, Rational) {
        let ri = &self.scale * Rational::from_integer(r.into());
        let vi = &self.q * &ri + Rational::from_integer(self.c.into());
        (ri, vi)
    }
}

/// Holes parameterized by the common scale `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymConfig {
    pub down: Vec<AsymHole>,
    pub up: Vec<AsymHole>,
    pub r: u64,
}

impl AsymConfig {
    pub fn new(down: Vec<AsymHole>, up: Vec<AsymHole>, r: u64) -> Self {
        AsymConfig { down, up, r }
    }

    /// Same holes at another scale.
    pub fn with_scale(&self, r: u64) -> Self {
        AsymConfig { r, ..self.clone() }
    }

    pub fn m(&self) -> usize {
        self.down.len()
    }

    pub fn n(&self) -> usize {
        self.up.len()
    }

    /// Checks positivity of `A`, `q`, nonnegativity of `c`, distinct `(A, q)`
    /// pairs within each list, and `r ≥ 1`.
    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidConfig("scale R must be positive".into()));
        }
        for list in [&self.down, &self.up] {
            for (i, h) in list.iter().enumerate() {
                if !h.scale.is_positive() || !h.q.is_positive() {
                    return Err(Error::InvalidConfig("A and q must be positive".into()));
                }
                if h.c < 0 {
                    return Err(Error::InvalidConfig("c must be nonnegative".into()));
                }
                if list[..i].iter().any(|g| g.scale == h.scale && g.q == h.q) {
                    return Err(Error::InvalidConfig("(A, q) pairs must be distinct".into()));
                }
            }
        }
        Ok(())
    }

    /// Real coordinates `(R_i, v_i)` and `(R′_j, v′_j)`.
    pub fn coords(&self) -> (Points, Points) {
        let real = |h: &AsymHole| {
            let (a, b) = h.coords(self.r);
            (to_f64(&a), to_f64(&b))
        };
        (self.down.iter().map(real).collect(), self.up.iter().map(real).collect())
    }

    /// Lattice holes at the current scale; every coordinate must be integral.
    pub fn holes(&self) -> Result<HoleConfig> {
        self.validate()?;
        let int = |h: &AsymHole| -> Result<(u32, u32)> {
            let (a, b) = h.coords(self.r);
            if !a.is_integer() || !b.is_integer() {
                return Err(Error::InvalidConfig(format!(
                    "coordinates ({}, {}) are not integral at R = {}",
                    format_rational(&a),
                    format_rational(&b),
                    self.r
                )));
            }
            let conv = |x: &Rational| {
                x.to_integer()
                    .to_u32()
                    .ok_or_else(|| Error::TooLarge("coordinate exceeds 32 bits".into()))
            };
            Ok((conv(&a)?, conv(&b)?))
        };
        let down = self.down.iter().map(int).collect::<Result<Vec<_>>>()?;
        let up = self.up.iter().map(int).collect::<Result<Vec<_>>>()?;
        let holes = HoleConfig::new(down, up);
        holes.validate()?;
        Ok(holes)
    }
}

/// The product of distance factors shared by all three main terms; the
/// boundary-influenced main terms are a constant times it and the central one
/// is a constant times its square.
fn distance_product(down: &[(f64, f64)], up: &[(f64, f64)]) -> f64 {
    let f = |dr: f64, dv: f64| dr * dr + 3.0 * dv * dv;
    let mut value = 1.0;
    for &(r, v) in down {
        value *= 2.0 * r / f(r, v).sqrt();
    }
    for &(r, v) in up {
        value *= 2.0 * r * f(r, v).sqrt();
    }
    for (i, &(ri, vi)) in down.iter().enumerate() {
        for &(rj, vj) in &down[i + 1..] {
            value *= f(rj - ri, vj - vi) * f(rj + ri, vj - vi);
        }
    }
    for (i, &(ri, vi)) in up.iter().enumerate() {
        for &(rj, vj) in &up[i + 1..] {
            value *= f(rj - ri, vj - vi) * f(rj + ri, vj - vi);
        }
    }
    for &(ri, vi) in down {
        for &(rj, vj) in up {
            value /= f(rj - ri, vj + vi) * f(rj + ri, vj + vi);
        }
    }
    value
}

fn two(k: usize) -> u32 {
    2 * k as u32
}

/// Main term of the asymptotics of `ω_b`.
pub fn omega_b_asym(cfg: &AsymConfig) -> Result<f64> {
    cfg.validate()?;
    let (d, u) = cfg.coords();
    Ok(const_phi::<f64>(two(cfg.m()), two(cfg.n())) * distance_product(&d, &u))
}

/// Main term of the asymptotics of `ω̄_b`.
pub fn omega_bar_b_asym(cfg: &AsymConfig) -> Result<f64> {
    cfg.validate()?;
    let (d, u) = cfg.coords();
    Ok(const_phi_bar::<f64>(two(cfg.m()), two(cfg.n())) * distance_product(&d, &u))
}

/// Main term of the asymptotics of the central correlation `ω`.
pub fn omega_asym(cfg: &AsymConfig) -> Result<f64> {
    cfg.validate()?;
    let (d, u) = cfg.coords();
    let p = distance_product(&d, &u);
    Ok(const_c::<f64>(two(cfg.m()), two(cfg.n())) * p * p)
}

/// Main term for one correlation kind.
pub fn asym(kind: Kind, cfg: &AsymConfig) -> Result<f64> {
    match kind {
        Kind::OmegaB => omega_b_asym(cfg),
        Kind::OmegaBarB => omega_bar_b_asym(cfg),
        Kind::Omega => omega_asym(cfg),
    }
}

/// A point charge in the plane, coordinates in units of the triangle side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Charge {
    pub charge: i64,
    pub x: f64,
    pub y: f64,
}

/// Electrostatic energy `Σ_{i<j} ch_i ch_j / 2 · log d_ij` of point charges.
pub fn coulomb_log_points(charges: &[Charge]) -> Result<f64> {
    if charges.len() < 2 {
        return Err(Error::InvalidConfig("at least two charges are needed".into()));
    }
    let mut sum = 0.0;
    for (i, a) in charges.iter().enumerate() {
        for b in &charges[i + 1..] {
            let d = (a.x - b.x).hypot(a.y - b.y);
            if d == 0.0 {
                return Err(Error::SameHole);
            }
            sum += (a.charge * b.charge) as f64 / 2.0 * d.ln();
        }
    }
    Ok(sum)
}

/// Electrostatic energy of the monomer and all quadromers with their mirror
/// images, using the catalog of pairwise distances.
pub fn coulomb_log(holes: &HoleConfig) -> Result<f64> {
    let ids = holes.hole_ids();
    if ids.len() < 2 {
        return Err(Error::InvalidConfig("at least two holes are needed".into()));
    }
    let mut sum = 0.0;
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            let d = catalog_distance(a, b, holes)?;
            sum += (hole_charge(a) * hole_charge(b)) as f64 / 2.0 * d.ln();
        }
    }
    Ok(sum)
}

/// Exact correlation at each scale of `ladder`, compared with its main term.
///
/// The exact side is the raw boundary sum (product of both sums for `Omega`),
/// which is what the main terms approximate.
pub fn theorem_ladder(kind: Kind, cfg: &AsymConfig, ladder: &[u64], budget: u128) -> Result<ConvergenceTable> {
    cfg.validate()?;
    let rows: Vec<(u64, Rational, f64)> = ladder
        .par_iter()
        .map(|&r| {
            let c = cfg.with_scale(r);
            let holes = c.holes()?;
            let exact = match kind {
                Kind::OmegaB => omega_b_sum(&holes, budget)?,
                Kind::OmegaBarB => omega_bar_b_sum(&holes, budget)?,
                Kind::Omega => omega_b_sum(&holes, budget)? * omega_bar_b_sum(&holes, budget)?,
            };
            Ok((r, exact, asym(kind, &c)?))
        })
        .collect::<Result<_>>()?;
    let mut table = ConvergenceTable::new("R")
        .with_meta("kind", format!("{kind:?}"))
        .with_meta("exact", "raw boundary sum");
    for (r, exact, target) in rows {
        if exact.is_zero() && target == 0.0 {
            continue;
        }
        table.push_exact(r as i64, &exact, Some(target));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn unit(c: i64) -> AsymHole {
        AsymHole::new(q(1, 1), q(1, 1), c)
    }

    #[test]
    fn single_down_hole_is_scale_free() {
        let phi = 16.0 / (3.0 * 3f64.sqrt() * std::f64::consts::PI);
        for r in [1, 7, 100] {
            let cfg = AsymConfig::new(vec![unit(0)], vec![], r);
            assert!((omega_b_asym(&cfg).unwrap() - phi).abs() < 1e-12);
        }
    }

    #[test]
    fn product_of_boundary_terms() {
        let cfg = AsymConfig::new(vec![unit(0), AsymHole::new(q(2, 1), q(1, 2), 1)], vec![unit(2)], 4);
        let lhs = omega_b_asym(&cfg).unwrap() * omega_bar_b_asym(&cfg).unwrap();
        let rhs = omega_asym(&cfg).unwrap();
        assert!((lhs / rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coulomb_point_examples() {
        let pair = [Charge { charge: 1, x: 0.0, y: 0.0 }, Charge { charge: -2, x: 1.0, y: 0.0 }];
        assert_eq!(coulomb_log_points(&pair).unwrap(), 0.0);
        let three = [
            Charge { charge: 1, x: 0.0, y: 0.0 },
            Charge { charge: -2, x: 3.0, y: 1.0 },
            Charge { charge: 2, x: -1.0, y: 2.0 },
        ];
        let scaled: Vec<Charge> = three.iter().map(|c| Charge { x: 5.0 * c.x, y: 5.0 * c.y, ..*c }).collect();
        let pairs_sum = (-2.0 + 2.0 - 4.0) / 2.0;
        let shift = coulomb_log_points(&scaled).unwrap() - coulomb_log_points(&three).unwrap();
        assert!((shift - pairs_sum * 5f64.ln()).abs() < 1e-12);
        assert_eq!(coulomb_log_points(&[three[0], three[0]]), Err(Error::SameHole));
    }

    #[test]
    fn coulomb_form_of_central_term() {
        let cfg = AsymConfig::new(vec![unit(0), AsymHole::new(q(3, 2), q(1, 3), 0)], vec![AsymHole::new(q(1, 2), q(2, 1), 1)], 6);
        let holes = cfg.holes().unwrap();
        let lhs = omega_asym(&cfg).unwrap().ln() - const_c::<f64>(4, 2).ln();
        assert!((lhs - coulomb_log(&holes).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn validation() {
        let dup = AsymConfig::new(vec![unit(0), unit(1)], vec![], 3);
        assert!(matches!(dup.validate(), Err(Error::InvalidConfig(_))));
        let frac = AsymConfig::new(vec![AsymHole::new(q(1, 2), q(1, 1), 0)], vec![], 3);
        assert!(matches!(frac.holes(), Err(Error::InvalidConfig(_))));
        assert_eq!(frac.with_scale(4).holes().unwrap(), HoleConfig::new(vec![(2, 2)], vec![]));
    }
}
