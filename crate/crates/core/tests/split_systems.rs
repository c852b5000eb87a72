use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use tangentcount::matrix::split_system;
use tangentcount::{build_a, solve_recursion_step};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Any integer vector pushed through the forward map comes back from both
    /// the integral solver and the exact rational elimination.
    #[test]
    fn integral_round_trip(k in 2u32..10, seed in prop::collection::vec(-50i64..50, 64), w1 in -50i64..50) {
        let system = split_system(k).unwrap();
        let n = system.diagrams().len() - 1;
        let w: Vec<BigInt> = seed.iter().cycle().take(n).map(|&x| BigInt::from(x)).collect();
        let w1 = BigInt::from(w1);
        let v = system.apply(&w, &w1);
        prop_assert_eq!(system.solve_integral(&v, &w1).unwrap(), Some(w.clone()));

        let (_, a) = build_a(k).unwrap();
        let wq: Vec<BigRational> = w.iter().cloned().map(BigRational::from_integer).collect();
        let vq: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
        let mut expected = a.mul_vec(&wq).unwrap();
        expected[0] += BigRational::from_integer(w1.clone());
        prop_assert_eq!(&expected, &vq);
        prop_assert_eq!(solve_recursion_step(k, &vq, &BigRational::from_integer(w1)).unwrap(), wq);
    }
}
