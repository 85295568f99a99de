//! Exact lozenge-tiling enumeration for triangular-lattice regions with holes,
//! closed-form hole correlations, and their Coulomb-type asymptotics.
//!
//! Exact quantities (tiling counts, determinants, correlation sums, kernel sums)
//! are [`Rational`]; approximants and asymptotic formulas are floating point,
//! generic over [`num_traits::Float`] with [`Real`] as the default.

pub mod asymptotics;
pub mod closed_forms;
pub mod correlations;
pub mod counting;
mod error;
pub mod kernels;
pub mod lattice;
pub mod square;
pub mod table;
pub mod verify;

pub use error::{Error, Result};

/// Arbitrary-precision rational: the value type of every exact computation.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Default floating-point scalar.
pub type Real = f64;

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<Integer> {
        t.trim()
            .parse::<Integer>()
            .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if num_traits::Zero::is_zero(&q) {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(p)?, q))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Renders a rational as `"p/q"` (denominator always printed).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Round-to-nearest conversion of a rational to `f64`, robust for huge operands.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::{Signed, ToPrimitive, Zero};
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 1e300 && d < 1e300 {
            return n / d;
        }
    }
    let nb = r.numer().abs().bits() as i64;
    let db = r.denom().bits() as i64;
    // scale so the integer quotient carries 64 significant bits
    let shift = 64 - (nb - db);
    let q = if shift >= 0 {
        (r.numer().abs() << shift as usize) / r.denom()
    } else {
        (r.numer().abs() >> (-shift) as usize) / r.denom()
    };
    let v = q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-shift as i32);
    if r.is_negative() {
        -v
    } else {
        v
    }
}
