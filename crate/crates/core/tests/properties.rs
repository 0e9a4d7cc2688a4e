use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use paraspec::arith::{Cyclotomic, Field, Gf, Poly, Rationals};
use paraspec::parabolic::{
    delta_p, filtration_dims, gerbe_compatible, level_function, min_level_data, ramification_multiplicity_counts,
    MarkedPoint, ParabolicData, Partition, Position,
};
use paraspec::resolution::{default_precision, local_equation_from_constants, newton_polygon_profile, resolve};
use paraspec::spectral::{zeta_fit, LPolynomial};
use paraspec::stringy::{EPolynomial, QPoly};

fn partition_strategy(max: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=4usize, 1..=max).prop_map(|v| Partition::from_unsorted(&v).unwrap())
}

fn gf_poly(p: u32, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..p, 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution(p in partition_strategy(6)) {
        prop_assert_eq!(p.dual().dual(), p.clone());
        prop_assert_eq!(p.dual().total(), p.total());
    }

    #[test]
    fn filtration_dims_are_the_dual(p in partition_strategy(6)) {
        prop_assert_eq!(filtration_dims(&p), p.dual().parts().to_vec());
    }

    #[test]
    fn multiplicities_weigh_to_rank(p in partition_strategy(6)) {
        let s: usize = ramification_multiplicity_counts(&p).iter().map(|(i, c)| i * c).sum();
        prop_assert_eq!(s, p.total());
    }

    #[test]
    fn level_minimum_is_the_part(n in partition_strategy(6)) {
        let mu = n.dual();
        let gamma = level_function(&mu, n.total()).unwrap();
        prop_assert_eq!(gamma.at(1), 1);
        for i in 1..=n.len() {
            let d = min_level_data(&n, &gamma, i).unwrap();
            prop_assert!(d.min_holds());
            prop_assert!(d.part_a_holds());
        }
    }

    #[test]
    fn full_flag_forces_trivial_delta_p(others in prop::collection::vec(partition_strategy(4), 0..3)) {
        let r = 5;
        let mut pts = vec![MarkedPoint::new(Position("0".into()), &[1; 5], None).unwrap()];
        for (k, o) in others.iter().enumerate() {
            let mut parts = o.parts().to_vec();
            let s: usize = parts.iter().sum();
            if s < r {
                parts.push(r - s);
            } else {
                continue;
            }
            pts.push(MarkedPoint::new(Position((k + 1).to_string()), &parts, None).unwrap());
        }
        let data = ParabolicData::new(r, 1, pts).unwrap();
        prop_assert_eq!(delta_p(&data), 1);
    }

    #[test]
    fn gerbe_matches_brute_force(d in -30i64..30, e in -30i64..30, delta in 1u64..15) {
        let got = gerbe_compatible(d, e, delta);
        let brute = (1..=delta).find(|&l| (e - l as i64 * d).rem_euclid(delta as i64) == 0);
        prop_assert_eq!(got, brute);
        if let Some(l) = got {
            prop_assert!(l >= 1 && l <= delta);
        }
    }

    #[test]
    fn generic_resolution_matches_newton(mu in partition_strategy(5), coeffs in prop::collection::vec(1u32..101, 20)) {
        let f = Gf::new(101).unwrap();
        let r = mu.total();
        let gamma_r = level_function(&mu, r).unwrap().at(r);
        let eq = local_equation_from_constants(&mu, &coeffs[..r], &f, default_precision(r, gamma_r)).unwrap();
        let res = resolve(&eq, &f).unwrap();
        if res.generic {
            let n = mu.dual();
            let delta: usize = n.parts().iter().map(|x| x * (x - 1) / 2).sum();
            prop_assert_eq!(res.ledger.delta, delta);
            prop_assert_eq!(res.profile.geometric(), mu.parts().to_vec());
            prop_assert_eq!(newton_polygon_profile(&eq, &f).unwrap().geometric(), mu.parts().to_vec());
        }
    }

    #[test]
    fn divrem_reconstructs(a in gf_poly(13, 8), b in gf_poly(13, 5)) {
        let f = Gf::new(13).unwrap();
        let a = Poly::from_coeffs(&f, a);
        let b = Poly::from_coeffs(&f, b);
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b, &f);
        prop_assert_eq!(q.mul(&b, &f).add(&r, &f), a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_both(a in gf_poly(7, 6), b in gf_poly(7, 6), c in gf_poly(7, 3)) {
        let f = Gf::new(7).unwrap();
        let c = Poly::from_coeffs(&f, c);
        prop_assume!(!c.is_zero());
        let a = Poly::from_coeffs(&f, a).mul(&c, &f);
        let b = Poly::from_coeffs(&f, b).mul(&c, &f);
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let g = a.gcd(&b, &f);
        prop_assert!(a.rem(&g, &f).is_zero());
        prop_assert!(b.rem(&g, &f).is_zero());
        prop_assert!(g.rem(&c.monic(&f), &f).is_zero());
    }

    #[test]
    fn taylor_shift_evaluates(a in prop::collection::vec(-9i64..9, 0..6), s in -5i64..5, x in -5i64..5) {
        let f = Rationals;
        let p = Poly::from_coeffs(&f, a.iter().map(|&c| f.from_i64(c)).collect());
        let shifted = p.taylor_shift(&f.from_i64(s), &f);
        prop_assert_eq!(shifted.eval(&f.from_i64(x), &f), p.eval(&f.from_i64(x + s), &f));
    }

    #[test]
    fn roots_of_unity_have_their_order(num in -20i64..20, order in 1u64..13) {
        let z = Cyclotomic::root_of_unity(num, order);
        let mut p = Cyclotomic::from_integer(1);
        for _ in 0..order {
            p = p.mul(&z);
        }
        prop_assert_eq!(p, Cyclotomic::from_integer(1));
    }

    #[test]
    fn stringy_sum_is_additive(a in 0i64..4, b in 0i64..4, s in 0i64..6) {
        let shift = BigRational::new(BigInt::from(s), BigInt::from(2));
        let x = EPolynomial::uv_power(a);
        let y = EPolynomial::uv_power(b).add(&EPolynomial::one());
        prop_assert_eq!(x.add(&y).shift(&shift), x.shift(&shift).add(&y.shift(&shift)));
        let sum: QPoly<BigInt> = x.add(&y).diagonal();
        prop_assert_eq!(sum, x.diagonal().add(&y.diagonal()));
    }

    #[test]
    fn zeta_fit_round_trips(a1 in -4i128..=4, a2 in -6i128..=6) {
        let q = 5u64;
        // Genus-2 L-polynomial 1 + a1 T + a2 T^2 + q a1 T^3 + q^2 T^4.
        let l = LPolynomial { q, genus: 2, coeffs: vec![1, a1, a2, q as i128 * a1, (q * q) as i128] };
        let counts = l.predicted_counts(2);
        prop_assume!(counts.iter().all(|&c| c >= 0));
        let counts: Vec<u64> = counts.iter().map(|&c| c as u64).collect();
        let fitted = zeta_fit(&counts, q, 2).unwrap();
        prop_assert_eq!(fitted.coeffs, l.coeffs);
    }
}
