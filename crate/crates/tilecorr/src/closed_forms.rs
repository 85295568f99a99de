//! Pochhammer symbols, the bump-ratio product formula, and the constants
//! `c_{k,l}`, `φ_{k,l}`, `φ̄_{k,l}` of the asymptotic formulas.

use num_traits::{Float, One, Zero};

use crate::{to_f64, Error, Integer, Rational, Result};

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

/// Rising factorial `(a)_k = a(a+1)⋯(a+k−1)`.
pub fn pochhammer(a: &Rational, k: u32) -> Rational {
    let mut p = Rational::one();
    let mut t = a.clone();
    for _ in 0..k {
        p *= &t;
        t += Rational::one();
    }
    p
}

/// Pochhammer symbol of an integer base.
pub fn pochhammer_int(a: i64, k: u32) -> Rational {
    pochhammer(&Rational::from_integer(a.into()), k)
}

/// The product `∏_{j<k} (2)_j/((1)_j (3/2)_j) · ∏_{j<l} (j+2)_k/(3/2)_j`.
pub fn chi(m: u32, n: u32) -> Rational {
    let half3 = q(3, 2);
    let mut p = Rational::one();
    for i in 0..m {
        p *= pochhammer_int(2, i) / (pochhammer_int(1, i) * pochhammer(&half3, i));
    }
    for i in 0..n {
        p *= pochhammer_int(i as i64 + 2, m) / pochhammer(&half3, i);
    }
    p
}

fn check_increasing(labels: &[u32]) -> Result<()> {
    if labels.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::NotStrictlyIncreasing)
    }
}

/// Limit of the bump-region ratio `M(W_N[k; l]) / M(W_N[0..m−1; 0..n−1])`
/// (identical for the eastern regions).
pub fn bump_ratio(k: &[u32], l: &[u32]) -> Result<Rational> {
    check_increasing(k)?;
    check_increasing(l)?;
    let half3 = q(3, 2);
    let mut p = chi(k.len() as u32, l.len() as u32);
    for &ki in k {
        p *= pochhammer(&half3, ki) / pochhammer_int(2, ki);
    }
    for &li in l {
        p *= pochhammer(&half3, li) / pochhammer_int(1, li);
    }
    let mut num = Integer::one();
    for (i, &a) in k.iter().enumerate() {
        for &b in &k[i + 1..] {
            num *= Integer::from(b - a);
        }
    }
    for (i, &a) in l.iter().enumerate() {
        for &b in &l[i + 1..] {
            num *= Integer::from(b - a);
        }
    }
    let mut den = Integer::one();
    for &a in k {
        for &b in l {
            den *= Integer::from(a + b + 2);
        }
    }
    Ok(p * Rational::new(num, den))
}

/// `∏_{j<k} (2)_j/((1)_j(3/2)_j) · ∏_{j<l} (j+2)_k/(3/2)_j`, the product shared by the constants.
fn constant_product(k: u32, l: u32) -> Rational {
    chi(k, l)
}

fn from_f64<T: Float>(v: f64) -> T {
    T::from(v).expect("f64 converts to the target float")
}

/// `c_{k,l} = 2^{k+l} 3^{k−(k−l)²/2} π^{−(k+l)} P²`.
pub fn const_c<T: Float>(k: u32, l: u32) -> T {
    let (kf, lf) = (k as f64, l as f64);
    let p = to_f64(&constant_product(k, l));
    let v = 2f64.powf(kf + lf) * 3f64.powf(kf - (kf - lf).powi(2) / 2.0)
        / std::f64::consts::PI.powf(kf + lf)
        * p
        * p;
    from_f64(v)
}

/// `φ_{k,l} = 2^k 3^{(k+l)/4−(k−l)²/4} π^{−(k+l)/2} P`.
pub fn const_phi<T: Float>(k: u32, l: u32) -> T {
    let (kf, lf) = (k as f64, l as f64);
    let v = 2f64.powf(kf) * 3f64.powf((kf + lf) / 4.0 - (kf - lf).powi(2) / 4.0)
        / std::f64::consts::PI.powf((kf + lf) / 2.0)
        * to_f64(&constant_product(k, l));
    from_f64(v)
}

/// `φ̄_{k,l} = 2^l 3^{−(k−l)²/4+(3k−l)/4} π^{−(k+l)/2} P`.
pub fn const_phi_bar<T: Float>(k: u32, l: u32) -> T {
    let (kf, lf) = (k as f64, l as f64);
    let v = 2f64.powf(lf) * 3f64.powf(-(kf - lf).powi(2) / 4.0 + (3.0 * kf - lf) / 4.0)
        / std::f64::consts::PI.powf((kf + lf) / 2.0)
        * to_f64(&constant_product(k, l));
    from_f64(v)
}

/// Coefficients `f_0..f_n` with `Σ_k f_k a(a−1)⋯(a−k+1) = a^n` (Stirling numbers
/// of the second kind `S(n, k)`).
pub fn falling_coeffs(n: u32) -> Vec<Integer> {
    let n = n as usize;
    let mut row = vec![Integer::one()];
    for i in 1..=n {
        let mut next = vec![Integer::zero(); i + 1];
        for (k, s) in row.iter().enumerate() {
            // S(i, k) = k S(i−1, k) + S(i−1, k−1)
            next[k] += s * Integer::from(k);
            next[k + 1] += s;
        }
        row = next;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&q(3, 2), 0), q(1, 1));
        assert_eq!(pochhammer_int(2, 3), q(24, 1));
        assert_eq!(pochhammer(&q(3, 2), 2), q(15, 4));
    }

    #[test]
    fn chi_values() {
        assert_eq!(chi(0, 0), q(1, 1));
        assert_eq!(chi(1, 1), q(2, 1));
        assert_eq!(chi(2, 2), q(64, 1));
    }

    #[test]
    fn bump_ratio_values() {
        assert_eq!(bump_ratio(&[0, 1], &[0, 1, 2]).unwrap(), q(1, 1));
        assert_eq!(bump_ratio(&[1], &[0]).unwrap(), q(1, 2));
        assert_eq!(bump_ratio(&[0], &[1]).unwrap(), q(1, 1));
        assert_eq!(bump_ratio(&[2, 1], &[]), Err(Error::NotStrictlyIncreasing));
    }

    #[test]
    fn constants() {
        assert!((const_c::<f64>(0, 0) - 1.0).abs() < 1e-15);
        let phi20 = 16.0 / (3.0 * 3f64.sqrt() * std::f64::consts::PI);
        assert!((const_phi::<f64>(2, 0) - phi20).abs() < 1e-14);
        assert!((const_phi::<f64>(2, 0) - 0.98018).abs() < 1e-4);
        for k in 0..=6 {
            for l in 0..=6 {
                let c: f64 = const_c(k, l);
                let pp = const_phi::<f64>(k, l) * const_phi_bar::<f64>(k, l);
                assert!((pp - c).abs() <= 1e-12 * c, "{k},{l}");
            }
        }
    }

    #[test]
    fn stirling_coefficients() {
        let ints = |v: &[i64]| v.iter().map(|&x| Integer::from(x)).collect::<Vec<_>>();
        assert_eq!(falling_coeffs(0), ints(&[1]));
        assert_eq!(falling_coeffs(2), ints(&[0, 1, 1]));
        assert_eq!(falling_coeffs(3), ints(&[0, 1, 3, 1]));
    }
}
