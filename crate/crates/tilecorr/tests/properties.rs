//! Property tests of the exact and floating-point layers against independent oracles.

use num_traits::{One, Zero};
use proptest::prelude::*;

use tilecorr::closed_forms::{bump_ratio, const_c, const_phi, const_phi_bar, falling_coeffs, pochhammer};
use tilecorr::counting::{count_bruteforce, count_tilings, det_exact, det_integer};
use tilecorr::kernels::{hyp_cross_check_exact, kernel_sum_exact, KernelKind};
use tilecorr::lattice::{hole_distance, HoleConfig, Region};
use tilecorr::square::{count_aztec, count_matchings_bruteforce, build_aztec, AztecSpec};
use tilecorr::verify::oracle_regions;
use tilecorr::{format_rational, parse_rational, Integer, Rational};

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

/// Laplace expansion along the first row.
fn det_cofactor(m: &[Vec<i64>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * det_cofactor(&minor)
        })
        .sum()
}

fn square_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (0usize..6).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..10, n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_recurrence(p in -20i64..20, d in 1i64..7, k in 0u32..8) {
        let a = q(p, d);
        let lhs = pochhammer(&a, k + 1);
        let rhs = pochhammer(&a, k) * (&a + Rational::from_integer(k.into()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn falling_coefficients_expand_powers(n in 0u32..9, a in -6i64..12) {
        let mut falling = Integer::one();
        let mut sum = Integer::zero();
        for (k, f) in falling_coeffs(n).iter().enumerate() {
            sum += f * &falling;
            falling *= Integer::from(a - k as i64);
        }
        prop_assert_eq!(sum, Integer::from(a).pow(n));
    }

    #[test]
    fn rational_text_round_trip(p in -1_000_000i64..1_000_000, d in 1i64..1000) {
        let r = q(p, d);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn determinants_agree_with_cofactor_expansion(m in square_matrix()) {
        let ints: Vec<Vec<Integer>> = m.iter().map(|r| r.iter().map(|&v| Integer::from(v)).collect()).collect();
        let rats: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect();
        let expected = Integer::from(det_cofactor(&m));
        prop_assert_eq!(det_integer(ints), expected.clone());
        prop_assert_eq!(det_exact(&rats), Rational::from_integer(expected));
    }

    #[test]
    fn lgv_counts_match_bruteforce(seed in any::<u64>()) {
        for region in oracle_regions(3, seed) {
            prop_assert_eq!(count_tilings(&region).unwrap(), count_bruteforce(&region).unwrap());
        }
    }

    #[test]
    fn region_text_round_trip(seed in any::<u64>()) {
        for region in oracle_regions(2, seed) {
            prop_assert_eq!(Region::from_text(&region.to_text()).unwrap(), region);
        }
    }

    #[test]
    fn constants_factor(k in 0u32..10, l in 0u32..10) {
        let c: f64 = const_c(k, l);
        let pp = const_phi::<f64>(k, l) * const_phi_bar::<f64>(k, l);
        prop_assert!((pp - c).abs() <= 1e-12 * c);
        let c32: f32 = const_c(k.min(4), l.min(4));
        prop_assert!(c32.is_finite() && c32 > 0.0);
    }

    #[test]
    fn packed_bumps_have_ratio_one(m in 0u32..6, n in 0u32..6) {
        let k: Vec<u32> = (0..m).collect();
        let l: Vec<u32> = (0..n).collect();
        prop_assert_eq!(bump_ratio(&k, &l).unwrap(), Rational::one());
    }

    #[test]
    fn kernel_sums_equal_hypergeometric_forms(
        kind in prop::sample::select(KernelKind::ALL.to_vec()),
        n in 0u32..4, r in 1u32..12, v in 0u32..8, xn in 1i64..9,
    ) {
        let x = q(xn, 8);
        prop_assert_eq!(
            kernel_sum_exact(kind, n, r, v, &x).unwrap(),
            hyp_cross_check_exact(kind, n, r, v, &x).unwrap()
        );
    }

    #[test]
    fn hole_distance_is_symmetric(r1 in 1u32..30, v1 in 0u32..10, r2 in 1u32..30, v2 in 0u32..10) {
        let holes = HoleConfig::new(vec![(r1, v1)], vec![(r2, v2)]);
        prop_assume!(holes.validate().is_ok());
        let ids = holes.hole_ids();
        for &a in &ids {
            for &b in &ids {
                if a != b {
                    let (d1, d2) = (hole_distance(a, b, &holes).unwrap(), hole_distance(b, a, &holes).unwrap());
                    prop_assert!(d1 > 0.0 && (d1 - d2).abs() < 1e-12);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn aztec_counts_match_bruteforce(removed in prop::collection::btree_set(0u32..4, 0..3), split in prop::collection::btree_set(0u32..4, 0..2)) {
        let spec = AztecSpec::new(4, removed.into_iter().collect(), split.into_iter().collect());
        prop_assume!(spec.validate().is_ok());
        let g = build_aztec(&spec).unwrap();
        prop_assert_eq!(count_aztec(&spec).unwrap(), count_matchings_bruteforce(&g).unwrap());
    }
}
