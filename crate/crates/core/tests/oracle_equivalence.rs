use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use sumprod::energy::{dprime_k, dtimes_k_set, energy, energy_k_set, n_quantity, nprime, tk_set, Op};
use sumprod::expsum::{multilinear_sum, trilinear_sum_unit};
use sumprod::incidence::{collinear_quadruples, collinear_triples};
use sumprod::oracle;
use sumprod::sl2::{cf_count, gl2_image, inverse_diff_count};
use sumprod::{make_field, sets, FieldCtx, SetFp, ZeroPolicy};

const PRIMES: [u64; 5] = [5, 7, 11, 31, 101];

fn sets_in(count: usize, max: usize) -> impl Strategy<Value = (FieldCtx, Vec<SetFp>)> {
    (prop::sample::select(PRIMES.to_vec()), any::<u64>()).prop_flat_map(move |(p, seed)| {
        prop::collection::vec(1..=max, count).prop_map(move |sizes| {
            let f = make_field(p).unwrap();
            let mut r = sets::rng(seed);
            let s = sizes.iter().map(|&n| SetFp::random(&f, n.min(p as usize), &mut r).unwrap()).collect();
            (f, s)
        })
    })
}

fn int(n: BigInt) -> BigRational {
    BigRational::from(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn energies((f, s) in sets_in(2, 12)) {
        let p = f.p();
        let (a, b) = (&s[0], &s[1]);
        prop_assert_eq!(energy(Op::Add, a, b), int(oracle::energy_add(a.elems(), b.elems(), p).unwrap()));
        prop_assert_eq!(energy(Op::Mul, a, b), int(oracle::energy_mul(a.elems(), b.elems(), p).unwrap()));
    }

    #[test]
    fn moments((f, s) in sets_in(1, 7), k in 1u32..=3) {
        let p = f.p();
        let a = &s[0];
        prop_assert_eq!(energy_k_set(a, k).unwrap(), int(oracle::energy_k(a.elems(), k, p).unwrap()));
        prop_assert_eq!(tk_set(a, k).unwrap(), int(oracle::tk(a.elems(), k, p).unwrap()));
    }

    #[test]
    fn difference_products((f, s) in sets_in(1, 5), k in 1u32..=2) {
        let p = f.p();
        let a = &s[0];
        prop_assert_eq!(dtimes_k_set(a, k, ZeroPolicy::Track).unwrap(), int(oracle::dtimes_k(a.elems(), k, p).unwrap()));
        prop_assert_eq!(dprime_k(a, k).unwrap(), int(oracle::dprime_k(a.elems(), k, p).unwrap()));
    }

    #[test]
    fn mixed_counts((f, s) in sets_in(3, 8)) {
        let p = f.p();
        let (a, b, c) = (&s[0], &s[1], &s[2]);
        prop_assert_eq!(n_quantity(a, b, c), int(oracle::n_quantity(a.elems(), b.elems(), c.elems(), p).unwrap()));
        prop_assert_eq!(nprime(a), int(oracle::nprime(a.elems(), p).unwrap()));
    }

    #[test]
    fn collinear((f, s) in sets_in(4, 5)) {
        let p = f.p();
        prop_assert_eq!(collinear_triples(&s[0]), int(oracle::collinear_triples(s[0].elems(), p).unwrap()));
        let brute = oracle::collinear_quadruples(s[0].elems(), s[1].elems(), s[2].elems(), s[3].elems(), p).unwrap();
        prop_assert_eq!(collinear_quadruples(&s[0], &s[1], &s[2], &s[3]), int(brute));
    }

    #[test]
    fn sl2_counts((f, s) in sets_in(4, 10), k in 1u32..=3, lambda in 1u64..1000) {
        let p = f.p();
        let d = cf_count(&s[0], k).unwrap();
        prop_assert_eq!(d.counts, oracle::cf_count(s[0].elems(), k, p).unwrap());
        let lambda = lambda % (p - 1) + 1;
        let inv = inverse_diff_count(&s[0], &s[1], lambda, None).unwrap();
        prop_assert_eq!(inv.count, int(oracle::inverse_diff(s[0].elems(), s[1].elems(), lambda, p).into()));
        let img = gl2_image(&s[0], &s[1], &s[2], &s[3]);
        prop_assert_eq!(img.image, oracle::gl2_image(s[0].elems(), s[1].elems(), s[2].elems(), s[3].elems(), p).unwrap());
    }

    #[test]
    fn exponential_sums((f, s) in sets_in(4, 10)) {
        let p = f.p();
        let lib = trilinear_sum_unit(&s[0], &s[1], &s[2]).value;
        let brute = oracle::trilinear(s[0].elems(), s[1].elems(), s[2].elems(), p);
        prop_assert!((lib - brute).norm() <= 1e-6 * brute.norm().max(1.0));
        let lib = multilinear_sum(&s).unwrap().value;
        let refs: Vec<&[u64]> = s.iter().map(|x| x.elems()).collect();
        let brute = oracle::multilinear(&refs, p).unwrap();
        prop_assert!((lib - brute).norm() <= 1e-6 * brute.norm().max(1.0));
    }
}
