use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

use itergcd::arith::int;
use itergcd::classify::{is_exceptional, is_preperiodic, probe_genericity};
use itergcd::experiments::{choose_depth, gcd_series, large_index_set, GcdSeriesConfig};
use itergcd::heights::{canonical_height, hgcd, hgcd_fin};
use itergcd::{Budget, Error, ProjPoint, RationalMap};

fn poly_eval(c: &[i64], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, &k| acc * x + k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn series_rows_match_fresh_euclid(
        c0 in -3i64..4, c1 in -2i64..3, a in -5i64..6, b in -5i64..6,
        alpha in -4i64..5, beta in -4i64..5,
    ) {
        let coeffs = [c0, c1, 1];
        let f = RationalMap::from_int_poly(&coeffs);
        let report = gcd_series(&GcdSeriesConfig::new(
            f.clone(), f, ProjPoint::int(a), ProjPoint::int(b), int(alpha), int(beta), 6,
        )).unwrap();
        let (mut x, mut y) = (BigInt::from(a), BigInt::from(b));
        for row in &report.rows {
            if row.n > 0 {
                x = poly_eval(&coeffs, &x);
                y = poly_eval(&coeffs, &y);
            }
            let g = (&x - alpha).gcd(&(&y - beta));
            prop_assert_eq!(row.gcd.clone(), Some(g.to_string()));
        }
        prop_assert!(report.rows.windows(2).all(|w| w[0].n < w[1].n));
        prop_assert!(report.rows.iter().all(|r| r.ratio.is_finite()));
    }

    #[test]
    fn returned_relations_vanish_on_orbits(a in -4i64..5, shift in -3i64..4, deg in 1usize..3) {
        let f = RationalMap::from_int_poly(&[shift, 0, 1]);
        let out = probe_genericity(&f, &f, &ProjPoint::int(a), &ProjPoint::int(-a), deg, 10, 3, &Budget::default());
        if let Ok(out) = out {
            if let Some(rel) = out.relation {
                let (mut x, mut y) = (ProjPoint::int(a), ProjPoint::int(-a));
                for _ in 0..rel.points_tested {
                    x = f.eval(&x);
                    y = f.eval(&y);
                    prop_assert!(rel.polynomial.eval(x.affine().unwrap(), y.affine().unwrap()).is_zero());
                }
            }
        }
    }

    #[test]
    fn depth_certificates_replay(a in 2i64..6, b in 2i64..6, alpha in 1i64..4, eps in 0.2f64..1.0) {
        let f = RationalMap::from_int_poly(&[0, 0, 1]);
        let cert = choose_depth(&f, &f, &ProjPoint::int(a), &ProjPoint::int(b), &int(alpha), &int(alpha), eps, &Budget::default()).unwrap();
        prop_assert!(cert.replay());
        prop_assert!(cert.lhs < eps / 2.0);
    }

    #[test]
    fn preperiodic_iff_zero_height(c in -2i64..2, x in -3i64..4) {
        let f = RationalMap::from_int_poly(&[c, 0, 1]);
        let p = ProjPoint::int(x);
        let pre = is_preperiodic(&f, &p, 1000).unwrap();
        let h = canonical_height(&f, &p, 1e-9).unwrap();
        prop_assert_eq!(pre, h.preperiodic);
        if !pre {
            prop_assert!(h.lower() > 0.0);
        }
    }

    #[test]
    fn integer_gcd_height_is_log_gcd(x in 1i64..100_000, y in 1i64..100_000) {
        let full = hgcd(&int(x), &int(y), 80).unwrap();
        let fin = hgcd_fin(&int(x), &int(y), 80).unwrap();
        let g = BigInt::from(x).gcd(&BigInt::from(y));
        prop_assert!((full.to_f64() - (g.to_string().parse::<f64>().unwrap()).ln()).abs() < 1e-12);
        prop_assert!(full.approx_eq(&fin));
    }
}

#[test]
fn exceptional_targets_gate_depth() {
    let f = RationalMap::from_int_poly(&[0, 0, 1]);
    assert!(is_exceptional(&f, &ProjPoint::int(0)).unwrap());
    let err = choose_depth(&f, &f, &ProjPoint::int(3), &ProjPoint::int(2), &int(1), &int(0), 0.1, &Budget::default())
        .unwrap_err();
    assert!(matches!(err, Error::Hypothesis(_)));
}

#[test]
fn odd_symmetry_index_set_is_everything() {
    let f = RationalMap::from_int_poly(&[0, 1, 0, 1]);
    let report = gcd_series(&GcdSeriesConfig::new(
        f.clone(),
        f,
        ProjPoint::int(2),
        ProjPoint::int(-2),
        int(1),
        int(-1),
        6,
    ))
    .unwrap();
    // gcd = |f^n(2) - 1| for n >= 1, so a small eta keeps every such n; n = 0 has gcd 1
    let set = large_index_set(&report, 0.2).unwrap();
    assert_eq!(set.indices(), &[1, 2, 3, 4, 5, 6]);
    let strict = large_index_set(&report, report.rows[1].log_gcd / 3.0 + 1e-9).unwrap();
    assert!(!strict.contains(1));
}

#[test]
fn generic_config_has_small_index_set() {
    let report = gcd_series(&GcdSeriesConfig::new(
        RationalMap::from_int_poly(&[1, 0, 1]),
        RationalMap::from_int_poly(&[-1, 0, 1]),
        ProjPoint::int(3),
        ProjPoint::int(2),
        int(0),
        int(0),
        10,
    ))
    .unwrap();
    let set = large_index_set(&report, 0.1).unwrap();
    assert!(set.indices().iter().all(|&n| n < 3), "{:?}", set.indices());
}
