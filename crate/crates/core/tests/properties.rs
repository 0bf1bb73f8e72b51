use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use sumprod::decompose::{balanced_energy, bw_decompose, threshold_met};
use sumprod::energy::{e_plus, energy, energy_k_set, tk_set, Op};
use sumprod::expsum::trilinear_sum_unit;
use sumprod::incidence::{collinear_quadruples_sym, collinear_triples, q_function};
use sumprod::numeric::{big_pow, rat};
use sumprod::sl2::{act, cf_count, group_conv, random_sl2, sl2_inv, sl2_mul, GroupFn, ProjPoint};
use sumprod::transform::{add_conv, dft, identity_suite, IntFn};
use sumprod::{make_field, sets, FieldCtx, SetFp};

const PRIMES: [u64; 6] = [5, 7, 11, 13, 31, 101];

fn field_and_set(max: usize) -> impl Strategy<Value = (FieldCtx, SetFp)> {
    (prop::sample::select(PRIMES.to_vec()), any::<u64>(), 1..=max).prop_map(|(p, seed, n)| {
        let f = make_field(p).unwrap();
        let s = SetFp::random(&f, n.min(p as usize), &mut sets::rng(seed)).unwrap();
        (f, s)
    })
}

fn pow(n: usize, e: u32) -> BigRational {
    BigRational::from(big_pow(n as u64, e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dlog_inverts_generator_powers(p in prop::sample::select(PRIMES.to_vec()), x in 1u64..1000) {
        let f = make_field(p).unwrap();
        let x = x % (p - 1) + 1;
        prop_assert_eq!(f.pow_g(f.dlog(x)), x);
        prop_assert_eq!(f.mul(x, f.inv(x)), 1);
    }

    #[test]
    fn spectral_identities_hold(p in prop::sample::select(vec![31u64, 101, 257]), seed in any::<u64>()) {
        let f = make_field(p).unwrap();
        let mut r = sets::rng(seed);
        let a = SetFp::random(&f, 10, &mut r).unwrap();
        let b = SetFp::random(&f, 7, &mut r).unwrap();
        for row in identity_suite(&IntFn::indicator(&a), &IntFn::balanced(&b)) {
            prop_assert!(row.passed(), "{}", row);
        }
    }

    #[test]
    fn transform_at_zero_is_the_sum((_f, a) in field_and_set(20)) {
        let s = dft(&IntFn::indicator(&a));
        prop_assert!((s.coeffs[0].re - a.len() as f64).abs() < 1e-9);
    }

    #[test]
    fn convolution_mass_multiplies((_f, a) in field_and_set(15), seed in any::<u64>()) {
        let b = SetFp::random(a.field(), 5.min(a.p() as usize), &mut sets::rng(seed)).unwrap();
        let c = add_conv(&IntFn::indicator(&a), &IntFn::indicator(&b));
        prop_assert_eq!(c.sum(), pow(a.len() * b.len(), 1));
    }

    #[test]
    fn energy_between_trivial_bounds((_f, a) in field_and_set(20), seed in any::<u64>()) {
        let b = SetFp::random(a.field(), 6.min(a.p() as usize), &mut sets::rng(seed)).unwrap();
        let e = energy(Op::Add, &a, &b);
        let (n, m) = (a.len(), b.len());
        prop_assert!(e >= pow(n * m, 1));
        prop_assert!(e <= pow(n, 2) * pow(m, 1));
        prop_assert!(e <= pow(n, 1) * pow(m, 2));
        prop_assert!(&e * &e <= pow(n, 3) * pow(m, 3));
    }

    #[test]
    fn second_moments_agree((_f, a) in field_and_set(15)) {
        let e = e_plus(&a);
        prop_assert_eq!(energy_k_set(&a, 2).unwrap(), e.clone());
        prop_assert_eq!(tk_set(&a, 2).unwrap(), e);
    }

    #[test]
    fn higher_energy_crude_bounds((_f, a) in field_and_set(12), k in 2u32..=4) {
        let n = a.len();
        let ek = energy_k_set(&a, k).unwrap();
        prop_assert!(pow(n, k) <= ek && ek <= pow(n, k + 1));
        let prev = energy_k_set(&a, k - 1).unwrap();
        prop_assert!(ek <= pow(n, 1) * prev);
        let t = tk_set(&a, k).unwrap();
        prop_assert!(t <= pow(n, 2) * tk_set(&a, k - 1).unwrap());
    }

    #[test]
    fn multiplicative_energy_is_dilation_invariant((f, a) in field_and_set(15), l in 1u64..100) {
        let l = l % (f.p() - 1) + 1;
        prop_assert_eq!(energy(Op::Mul, &a, &a), energy(Op::Mul, &a.dilate(l), &a.dilate(l)));
        prop_assert_eq!(e_plus(&a), e_plus(&a.shift(l)));
    }

    #[test]
    fn collinear_counts_exceed_main_terms((f, a) in field_and_set(8)) {
        let p = f.p();
        let n = a.len() as u64;
        prop_assert!(collinear_triples(&a) >= rat(BigInt::from(n).pow(6), p));
        let q = collinear_quadruples_sym(&a);
        prop_assert!(q >= rat(BigInt::from(n).pow(8), p * p));
        prop_assert_eq!(q_function(&a, &a, &a, &a).total(), q);
    }

    #[test]
    fn trilinear_sum_is_symmetric((f, a) in field_and_set(10), seed in any::<u64>()) {
        let mut r = sets::rng(seed);
        let b = SetFp::random(&f, 6.min(f.p() as usize), &mut r).unwrap();
        let c = SetFp::random(&f, 4.min(f.p() as usize), &mut r).unwrap();
        let s1 = trilinear_sum_unit(&a, &b, &c).value;
        let s2 = trilinear_sum_unit(&c, &a, &b).value;
        prop_assert!((s1 - s2).norm() < 1e-8 * (1.0 + s1.norm()));
        prop_assert!(s1.norm() <= (a.len() * b.len() * c.len()) as f64 + 1e-9);
    }

    #[test]
    fn mobius_action_is_a_group_action(p in prop::sample::select(vec![5u64, 7, 13, 101]), seed in any::<u64>(), z in 0u64..102) {
        let f = make_field(p).unwrap();
        let mut r = sets::rng(seed);
        let (g, h) = (random_sl2(&f, &mut r), random_sl2(&f, &mut r));
        let z = if z >= p { ProjPoint::Inf } else { ProjPoint::Fin(z) };
        prop_assert_eq!(act(&f, &sl2_mul(&f, &g, &h), z), act(&f, &g, act(&f, &h, z)));
        prop_assert_eq!(act(&f, &sl2_inv(&f, &g), act(&f, &g, z)), z);
    }

    #[test]
    fn group_convolution_keeps_probability(p in prop::sample::select(vec![5u64, 7]), seed in any::<u64>(), n in 1usize..6) {
        let f = make_field(p).unwrap();
        let mut r = sets::rng(seed);
        let s: Vec<_> = (0..n).map(|_| random_sl2(&f, &mut r)).collect();
        let mu = GroupFn::uniform(&f, &s);
        let nu = group_conv(&mu, &mu.inverse()).unwrap();
        prop_assert!(nu.is_probability());
        prop_assert!(nu.is_symmetric());
        prop_assert!(nu.l2_sq() <= mu.l2_sq());
    }

    #[test]
    fn continued_fraction_mass((_f, a) in field_and_set(12), k in 1u32..=5) {
        let d = cf_count(&a, k).unwrap();
        prop_assert_eq!(d.total(), (a.len() as u128).pow(k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn decomposition_certificate(seed in any::<u64>(), n in 20usize..60) {
        let f = make_field(1009).unwrap();
        let a = SetFp::random(&f, n, &mut sets::rng(seed)).unwrap();
        let m = rat(4, 1);
        let cert = bw_decompose(&a, &m).unwrap();
        prop_assert!(cert.is_partition());
        prop_assert!(cert.iterations.len() <= a.len());
        prop_assert!(threshold_met(&balanced_energy(&cert.b), &m, a.len(), cert.b.len()));
        prop_assert!(cert.iterations.iter().all(|it| it.sandwich));
        prop_assert!(balanced_energy(&cert.b) >= BigRational::zero());
    }
}
