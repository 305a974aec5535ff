mod common;

use common::*;
use proptest::prelude::*;
use symconf::arith::gcd;
use symconf::bdc::BdcSpec;
use symconf::construct::{bose_ruler, singer_ruler};
use symconf::format::{parse_alist, write_alist};
use symconf::matrix::IncidenceMatrix;
use symconf::Error;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn verify_agrees_with_pairwise_oracle(m in small_matrix()) {
        let im = IncidenceMatrix::from_dense(&m).unwrap();
        prop_assert_eq!(im.verify().is_ok(), oracle_is_configuration(&m));
    }

    #[test]
    fn accepted_matrices_have_girth_at_least_six(m in small_matrix()) {
        let im = IncidenceMatrix::from_dense(&m).unwrap();
        if im.verify().is_ok() {
            prop_assert!(im.girth().is_none_or(|g| g >= 6));
        }
    }

    #[test]
    fn alist_round_trip_is_bit_exact(m in small_matrix()) {
        let im = IncidenceMatrix::from_dense(&m).unwrap();
        let uniform = im.verify().map(|r| r.k > 0).unwrap_or(false);
        if uniform {
            prop_assert_eq!(parse_alist(&write_alist(&im)).unwrap(), im);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transform_preserves_modular_golomb((r, m, b) in ruler_and_affine_map()) {
        let v = r.modulus().unwrap();
        match r.transform(v, m, b) {
            Ok(t) => {
                prop_assert_eq!(gcd(m % v, v), 1);
                prop_assert!(oracle_is_mgr(t.marks(), v));
                prop_assert_eq!(t.order(), r.order());
            }
            Err(e) => {
                prop_assert_eq!(e, Error::GcdNotOne { m, v });
                prop_assert!(gcd(m % v, v) != 1);
            }
        }
    }

    #[test]
    fn stretch_reports_exactly_the_good_moduli(r in classical_ruler(), dmax in 0u64..40) {
        let v = r.modulus().unwrap();
        let got = r.stretch(v, dmax).unwrap();
        let want: Vec<u64> = (1..=dmax).filter(|&d| oracle_is_mgr(r.marks(), v + d)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn ruler_truncation_stays_modular_golomb(r in classical_ruler(), delta in 0usize..4) {
        let v = r.modulus().unwrap();
        if delta < r.order() {
            let t = r.truncate(delta).unwrap();
            prop_assert_eq!(t.order(), r.order() - delta);
            prop_assert!(oracle_is_mgr(t.marks(), v));
            let m = IncidenceMatrix::from_circulant(&t.to_circulant().unwrap());
            prop_assert_eq!(m.verify().unwrap().k, r.order() - delta);
        }
    }

    #[test]
    fn shift_truncate_is_sound(
        (q, bose) in (prop::sample::select(vec![3u64, 4, 5, 7, 8, 9]), any::<bool>()),
        t_pick in any::<prop::sample::Index>(),
        j_pick in any::<prop::sample::Index>(),
        c_pick in any::<prop::sample::Index>(),
    ) {
        let r = if bose { bose_ruler(q).unwrap() } else { singer_ruler(q).unwrap() };
        let c = r.to_circulant().unwrap();
        let divisors: Vec<usize> = (2..=c.v as usize / 2).filter(|t| c.v as usize % t == 0).collect();
        prop_assume!(!divisors.is_empty());
        let t = *t_pick.get(&divisors);
        let b = BdcSpec::split(&c, t).unwrap();
        let j = j_pick.index(t);
        let keep = 1 + c_pick.index(t);
        let w = b.weights();
        let floor = (0..t).filter(|&h| h != j).map(|h| w[h]).min().unwrap();
        let out = b.shift_truncate(j, keep).unwrap();
        let report = out.to_matrix().verify().unwrap();
        prop_assert_eq!(report.k, w[j] + (keep - 1) * floor);
        prop_assert_eq!(report.v as u64, keep as u64 * c.v / t as u64);
    }
}
