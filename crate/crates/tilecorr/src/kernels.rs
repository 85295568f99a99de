//! Kernel sums, their hypergeometric forms, their large-`R` approximants, and
//! the Laplace-type integral estimate they rest on.

use num_complex::Complex64;
use num_traits::{Float, FloatConst, One, Zero};
use serde::{Deserialize, Serialize};

use crate::closed_forms::{falling_coeffs, pochhammer};
use crate::{to_f64, Error, Rational, Result};

/// Selects one of the four single-index kernel sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelKind {
    T,
    Tprime,
    Tbar,
    TbarPrime,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [KernelKind::T, KernelKind::Tprime, KernelKind::Tbar, KernelKind::TbarPrime];

    /// Denominator bases `(λ, μ)` of the summand `(−R)_a (R)_a (3/2)_{v+a} / ((1)_a (λ)_a (μ)_{v+a})`.
    fn lower(self) -> (Rational, Rational) {
        let q = |p: i64, d: i64| Rational::new(p.into(), d.into());
        match self {
            KernelKind::T => (q(1, 2), q(2, 1)),
            KernelKind::Tprime => (q(3, 2), q(1, 1)),
            KernelKind::Tbar => (q(3, 2), q(2, 1)),
            KernelKind::TbarPrime => (q(1, 2), q(1, 1)),
        }
    }

    /// Predicted exponent of `|kernel − approximant|` as a power of `R` at index `n`.
    pub fn error_exponent(self, n: u32) -> f64 {
        let base = match self {
            KernelKind::T | KernelKind::Tprime => -2.5,
            KernelKind::Tbar => -3.5,
            KernelKind::TbarPrime => -1.5,
        };
        base + n as f64
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" => Ok(KernelKind::T),
            "tprime" | "t'" => Ok(KernelKind::Tprime),
            "tbar" => Ok(KernelKind::Tbar),
            "tbarprime" | "tbar'" => Ok(KernelKind::TbarPrime),
            _ => Err(Error::Parse(format!("unknown kernel '{s}'"))),
        }
    }
}

fn check_x(x: &Rational) -> Result<()> {
    if x < &Rational::zero() || x > &Rational::one() {
        return Err(Error::XOutOfRange);
    }
    Ok(())
}

fn rat(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Exact value of the kernel sum at rational `x ∈ [0, 1]`.
pub fn kernel_sum_exact(kind: KernelKind, n: u32, r: u32, v: u32, x: &Rational) -> Result<Rational> {
    check_x(x)?;
    if r == 0 {
        return Err(Error::RadiusZero);
    }
    let (lam, mu) = kind.lower();
    let three_half = Rational::new(3.into(), 2.into());
    let z = x / rat(4);
    let (rr, mr) = (rat(r as i64), rat(-(r as i64)));
    let mut sum = Rational::zero();
    let mut zp = Rational::one();
    for a in 0..=r {
        let an = rat(a as i64).pow(n as i32);
        if !an.is_zero() || n == 0 {
            let num = pochhammer(&mr, a) * pochhammer(&rr, a) * pochhammer(&three_half, v + a);
            let den = pochhammer(&Rational::one(), a) * pochhammer(&lam, a) * pochhammer(&mu, v + a);
            sum += num / den * &zp * an;
        }
        zp *= &z;
    }
    Ok(sum / rr)
}

/// Kernel sum evaluated exactly and rounded to `f64`.
pub fn kernel_sum(kind: KernelKind, n: u32, r: u32, v: u32, x: &Rational) -> Result<f64> {
    Ok(to_f64(&kernel_sum_exact(kind, n, r, v, x)?))
}

/// Terminating generalized hypergeometric series `pFq[upper; lower; z]`.
/// Some upper parameter must be a nonpositive integer.
pub fn hyper_terminating(upper: &[Rational], lower: &[Rational], z: &Rational) -> Rational {
    let stop = upper
        .iter()
        .filter(|a| a.is_integer() && a <= &&Rational::zero())
        .map(|a| (-a.to_integer()).try_into().unwrap_or(u32::MAX))
        .min()
        .expect("series terminates");
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for k in 0..stop {
        let kq = rat(k as i64);
        for a in upper {
            term *= a + &kq;
        }
        for b in lower {
            term /= b + &kq;
        }
        term = term * z / rat(k as i64 + 1);
        sum += &term;
    }
    sum
}

/// Exact hypergeometric right-hand side equal to [`kernel_sum_exact`]: a sum over
/// falling-factorial coefficients of terminating `3F2` series.
pub fn hyp_cross_check_exact(kind: KernelKind, n: u32, r: u32, v: u32, x: &Rational) -> Result<Rational> {
    check_x(x)?;
    if r == 0 {
        return Err(Error::RadiusZero);
    }
    let (lam, mu) = kind.lower();
    let three_half = Rational::new(3.into(), 2.into());
    let z = x / rat(4);
    let (rr, mr) = (rat(r as i64), rat(-(r as i64)));
    let vq = rat(v as i64);
    let lead = pochhammer(&three_half, v) / pochhammer(&mu, v) / &rr;
    let mut sum = Rational::zero();
    for (k, f) in falling_coeffs(n).into_iter().enumerate() {
        if f.is_zero() || k as u32 > r {
            continue;
        }
        let k32 = k as u32;
        let kq = rat(k as i64);
        let coeff = pochhammer(&mr, k32) * pochhammer(&rr, k32) * pochhammer(&(&vq + &three_half), k32)
            / (pochhammer(&lam, k32) * pochhammer(&(&vq + &mu), k32))
            * z.pow(k as i32);
        let series = hyper_terminating(
            &[&mr + &kq, &rr + &kq, &three_half + &vq + &kq],
            &[&lam + &kq, &mu + &vq + &kq],
            &z,
        );
        sum += Rational::from_integer(f) * coeff * series;
    }
    Ok(lead * sum)
}

/// [`hyp_cross_check_exact`] rounded to `f64`.
pub fn hyp_cross_check(kind: KernelKind, n: u32, r: u32, v: u32, x: &Rational) -> Result<f64> {
    Ok(to_f64(&hyp_cross_check_exact(kind, n, r, v, x)?))
}

/// Large-`R` approximant of the kernel at index `k`, evaluated at `v = qR + c`.
pub fn f_approx<T: Float + FloatConst>(kind: KernelKind, k: u32, r: T, q: T, x: T) -> Result<T> {
    if !(x > T::zero() && x <= T::one()) {
        return Err(Error::XOutOfRange);
    }
    if q <= T::zero() || q.is_nan() {
        return Err(Error::InvalidConfig("q must be positive".into()));
    }
    let c = |v: f64| T::from(v).expect("constant converts");
    let y = x / (c(4.0) - x);
    let sy = y.sqrt();
    let quart = (q * q + y).powf(c(0.25));
    let theta = r * (T::one() - x / c(2.0)).acos();
    let shift = (sy / q).atan() / c(2.0);
    let power = (r * sy).powi(k as i32);
    let kf = c(k as f64);
    let half_pi = T::FRAC_PI_2();
    let inv_sqrt_pi = T::one() / T::PI().sqrt();
    let value = match kind {
        KernelKind::T => {
            c(2.0) * inv_sqrt_pi / quart * r.powf(c(-1.5)) * power * (theta - shift + kf * half_pi).cos()
        }
        KernelKind::Tprime => {
            inv_sqrt_pi * quart / sy * r.powf(c(-1.5)) * power * (theta + shift + (kf - T::one()) * half_pi).cos()
        }
        KernelKind::Tbar => {
            inv_sqrt_pi / (quart * sy) * r.powf(c(-2.5)) * power * (theta - shift + (kf - T::one()) * half_pi).cos()
        }
        KernelKind::TbarPrime => {
            c(2.0) * inv_sqrt_pi * quart * r.powf(c(-0.5)) * power * (theta + shift + kf * half_pi).cos()
        }
    };
    Ok(value)
}

/// Least-squares slope of `log y` against `log x` over the last four points
/// (all points when fewer than four are given).
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let tail = &points[points.len().saturating_sub(4)..];
    slope_of(tail)
}

/// Least-squares slope of `log y` against `log x` over all points.
pub fn slope_of(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `|kernel − approximant|` at `v = qR + c` for one `R`.
pub fn kernel_error(kind: KernelKind, n: u32, r: u32, q: &Rational, c: i64, x: &Rational) -> Result<f64> {
    let v = q * rat(r as i64) + rat(c);
    if !v.is_integer() || v < Rational::zero() {
        return Err(Error::InvalidConfig(format!("v = qR + c = {v} is not a nonnegative integer")));
    }
    let v: u32 = v
        .to_integer()
        .try_into()
        .map_err(|_| Error::TooLarge("v does not fit in 32 bits".into()))?;
    let exact = kernel_sum(kind, n, r, v, x)?;
    let approx = f_approx(kind, n, r as f64, to_f64(q), to_f64(x))?;
    Ok((exact - approx).abs())
}

/// Largest kernel error over the `period` consecutive radii starting at `r`.
/// Taking the maximum over one period of the phase `R·arccos(1 − x/2)` removes
/// the oscillating factor of the error and exposes its decay envelope.
pub fn kernel_error_envelope(
    kind: KernelKind,
    n: u32,
    r: u32,
    period: u32,
    q: &Rational,
    c: i64,
    x: &Rational,
) -> Result<f64> {
    (r..r + period.max(1))
        .map(|s| kernel_error(kind, n, s, q, c, x))
        .try_fold(0.0f64, |acc, e| Ok(acc.max(e?)))
}

/// Parameters of the Laplace-type integral `∫₀¹ e^{−R p(t)} Q(t) dt` with
/// `p(t) = −q ln t − i arccos(1 − xt/2)` and
/// `Q(t) = t^l (1 − t)^{−1/2} (4 − 2xt)^a / (4 − xt)^b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceParams {
    pub x: f64,
    pub q: f64,
    pub l: f64,
    pub a: u32,
    pub b: f64,
}

/// Numeric integral, closed-form approximant, and the modulus of their difference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceCheck {
    pub integral: (f64, f64),
    pub approximant: (f64, f64),
    pub difference: f64,
}

const QUAD_PIECES: usize = 32;
const QUAD_TOL: f64 = 1e-13;
const QUAD_ACCEPT: f64 = 1e-10;

fn integrate_complex(f: impl Fn(f64) -> Complex64) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    let h = 1.0 / QUAD_PIECES as f64;
    for k in 0..QUAD_PIECES {
        let (lo, hi) = (k as f64 * h, (k + 1) as f64 * h);
        let re = quadrature::integrate(|s| f(s).re, lo, hi, QUAD_TOL);
        let im = quadrature::integrate(|s| f(s).im, lo, hi, QUAD_TOL);
        if !(re.error_estimate <= QUAD_ACCEPT && im.error_estimate <= QUAD_ACCEPT)
            || !re.integral.is_finite()
            || !im.integral.is_finite()
        {
            return Err(Error::QuadratureFailure);
        }
        total += Complex64::new(re.integral, im.integral);
    }
    Ok(total)
}

/// The factor `e^{−R p(t)} = t^{qR} e^{iR arccos(1 − xt/2)}`.
pub fn laplace_exponential(r: f64, t: f64, p: &LaplaceParams) -> Complex64 {
    Complex64::from_polar(t.powf(p.q * r), r * (1.0 - p.x * t / 2.0).acos())
}

/// Integral `∫₀¹ e^{−R p(t)} Q(t) dt`, computed after substituting `t = 1 − s²`
/// to remove the endpoint singularity.
pub fn laplace_integral(r: f64, p: &LaplaceParams) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&p.x) {
        return Err(Error::XOutOfRange);
    }
    let LaplaceParams { x, q: _, l, a, b } = *p;
    integrate_complex(|s| {
        let t = 1.0 - s * s;
        if t <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let weight = 2.0 * t.powf(l) * (4.0 - 2.0 * x * t).powi(a as i32) / (4.0 - x * t).powf(b);
        laplace_exponential(r, t, p) * weight
    })
}

/// Closed-form approximant of [`laplace_integral`].
pub fn laplace_approximant(r: f64, p: &LaplaceParams) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&p.x) {
        return Err(Error::XOutOfRange);
    }
    let LaplaceParams { x, q, l: _, a, b } = *p;
    let y = x / (4.0 - x);
    let modulus = (std::f64::consts::PI / r).sqrt() * (4.0 - 2.0 * x).powi(a as i32)
        / (4.0 - x).powf(b)
        / (q * q + y).powf(0.25);
    let phase = r * (1.0 - x / 2.0).acos() - 0.5 * (y.sqrt() / q).atan();
    Ok(Complex64::from_polar(modulus, phase))
}

/// Compares the Laplace-type integral with its approximant at one `R`.
pub fn laplace_quadrature_check(r: f64, p: &LaplaceParams) -> Result<LaplaceCheck> {
    let i = laplace_integral(r, p)?;
    let f = laplace_approximant(r, p)?;
    Ok(LaplaceCheck {
        integral: (i.re, i.im),
        approximant: (f.re, f.im),
        difference: (i - f).norm(),
    })
}

/// At `x = 0` the integral is `4^{a−b} B(qR + l + 1, 1/2)`.
pub fn laplace_beta_value(r: f64, p: &LaplaceParams) -> f64 {
    let s = p.q * r + p.l + 1.0;
    let ln_beta = libm::lgamma(s) + libm::lgamma(0.5) - libm::lgamma(s + 0.5);
    4f64.powf(p.a as f64 - p.b) * ln_beta.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn small_kernel_values() {
        assert_eq!(kernel_sum_exact(KernelKind::T, 0, 1, 0, &q(1, 1)).unwrap(), q(5, 8));
        assert_eq!(kernel_sum_exact(KernelKind::T, 0, 2, 0, &q(0, 1)).unwrap(), q(1, 2));
        for kind in KernelKind::ALL {
            assert!(kernel_sum_exact(kind, 1, 3, 2, &q(0, 1)).unwrap().is_zero());
        }
        assert_eq!(kernel_sum(KernelKind::T, 0, 1, 0, &q(2, 1)), Err(Error::XOutOfRange));
    }

    #[test]
    fn two_f_one_values() {
        let z = q(1, 4);
        assert_eq!(hyper_terminating(&[q(-1, 1), q(1, 1)], &[q(1, 2)], &z), q(1, 2));
        assert_eq!(hyper_terminating(&[q(-1, 1), q(1, 1)], &[q(3, 2)], &z), q(5, 6));
        // cos(R arccos(1 − 2z)) at R = 3, z = 1/4 is cos(π) = −1
        assert_eq!(hyper_terminating(&[q(-3, 1), q(3, 1)], &[q(1, 2)], &z), q(-1, 1));
    }

    #[test]
    fn hypergeometric_form_matches_small_grid() {
        for kind in KernelKind::ALL {
            for n in 0..=2 {
                for r in 1..=4 {
                    for v in 0..=2 {
                        let x = q(1, 2);
                        assert_eq!(
                            kernel_sum_exact(kind, n, r, v, &x).unwrap(),
                            hyp_cross_check_exact(kind, n, r, v, &x).unwrap(),
                            "{kind:?} n={n} R={r} v={v}"
                        );
                    }
                }
            }
        }
        assert_eq!(hyp_cross_check_exact(KernelKind::T, 0, 1, 0, &q(1, 1)).unwrap(), q(5, 8));
    }

    #[test]
    fn approximant_limits() {
        let r = 10.0f64;
        let a = f_approx(KernelKind::T, 2, r, 1.0, 1e-12).unwrap();
        assert!(a.abs() < 1e-10);
        let x = 0.5f64;
        let amp = 2.0 / std::f64::consts::PI.sqrt() * (1.0 + x / (4.0 - x)).powf(-0.25) * r.powf(-1.5);
        let v = f_approx(KernelKind::T, 0, r, 1.0, x).unwrap();
        assert!(v.abs() <= amp * (1.0 + 1e-12));
        assert_eq!(f_approx(KernelKind::T, 0, r, 1.0, 0.0), Err(Error::XOutOfRange));
        let single = f_approx(KernelKind::Tbar, 1, 12.0f32, 1.0, 1.0).unwrap() as f64;
        let double = f_approx(KernelKind::Tbar, 1, 12.0f64, 1.0, 1.0).unwrap();
        assert!((single - double).abs() < 1e-5);
    }

    #[test]
    fn kernel_tracks_approximant() {
        let e = kernel_error(KernelKind::T, 0, 64, &q(1, 1), 0, &q(1, 1)).unwrap();
        let main = 2.0 / std::f64::consts::PI.sqrt() * 64f64.powf(-1.5);
        assert!(e < 0.02 * main);
    }

    #[test]
    fn slope_of_exact_power() {
        let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0, 32.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(-1.5))).collect();
        assert!((loglog_slope(&pts) + 1.5).abs() < 1e-12);
    }

    #[test]
    fn beta_oracle_at_zero_x() {
        let p = LaplaceParams { x: 0.0, q: 1.0, l: 0.5, a: 1, b: 0.5 };
        for r in [4.0, 16.0, 64.0] {
            let i = laplace_integral(r, &p).unwrap();
            let beta = laplace_beta_value(r, &p);
            assert!((i.re - beta).abs() < 1e-12 * beta.max(1.0), "{r}: {} vs {beta}", i.re);
            assert!(i.im.abs() < 1e-14);
        }
    }

    #[test]
    fn endpoint_phase_has_unit_modulus() {
        for r in [1.0, 7.0, 100.0] {
            for x in [0.0, 0.25, 1.0f64] {
                let p = LaplaceParams { x, q: 1.5, l: 0.0, a: 0, b: 0.0 };
                assert!((laplace_exponential(r, 1.0, &p).norm() - 1.0).abs() < 1e-12);
                assert!(laplace_exponential(r, 0.5, &p).norm() < 1.0);
            }
        }
    }

    #[test]
    fn laplace_difference_is_small() {
        let p = LaplaceParams { x: 1.0, q: 1.0, l: 0.0, a: 0, b: 0.0 };
        let c = laplace_quadrature_check(64.0, &p).unwrap();
        let f = (c.approximant.0.powi(2) + c.approximant.1.powi(2)).sqrt();
        assert!(c.difference < 0.01 * f);
        assert!((c.difference - 9.2478e-4).abs() < 1e-6);
    }
}
