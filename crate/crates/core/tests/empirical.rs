use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use sievebound::empirical::{
    brute_force_sum_two_pos_squares, census, census_checkpoints, is_sum_two_pos_squares, s2_direct_sum,
    FactorSieve, SiftedSets,
};
use sievebound::Error;

fn trial_big_omega(mut n: u64) -> u32 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            n /= p;
            count += 1;
        }
        p += 1;
    }
    count + (n > 1) as u32
}

#[test]
fn big_omega_against_trial_division() {
    let sieve = FactorSieve::new(1_000_000).unwrap();
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=1_000_000u64);
        assert_eq!(sieve.big_omega(n), trial_big_omega(n), "n = {n}");
    }
    let total: u64 = (1..=1_000_000u64).map(|n| sieve.big_omega(n) as u64).sum();
    let mut expected = 0u64;
    for p in sievebound::primes::Primes::new(1_000_000) {
        let mut pk = p;
        while pk <= 1_000_000 {
            expected += 1_000_000 / pk;
            pk *= p;
        }
    }
    assert_eq!(total, expected);
}

#[test]
fn sums_of_two_positive_squares_small_range() {
    for n in 1..=20_000u64 {
        assert_eq!(is_sum_two_pos_squares(n), brute_force_sum_two_pos_squares(n), "n = {n}");
    }
}

#[test]
fn census_monotone_in_k_and_x() {
    let xs = [1_000u64, 10_000, 100_000];
    let mut prev_k: Option<Vec<u64>> = None;
    for k in [1u32, 2, 3, 5, 11] {
        let r = census_checkpoints(&xs, k).unwrap();
        let counts: Vec<u64> = r.iter().map(|c| c.count).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        if let Some(p) = &prev_k {
            assert!(p.iter().zip(&counts).all(|(a, b)| a <= b));
        }
        prev_k = Some(counts);
    }
}

#[test]
fn census_agrees_with_direct_enumeration() {
    let x = 30_000u64;
    let sieve = FactorSieve::new(x + 2).unwrap();
    for k in [2u32, 4, 11] {
        let direct = (2..=x)
            .filter(|&p| sieve.is_prime(p))
            .filter(|&p| brute_force_sum_two_pos_squares(p - 1))
            .filter(|&p| sieve.big_omega(p + 2) <= k)
            .count() as u64;
        assert_eq!(census(x, k).unwrap().count, direct);
    }
}

#[test]
fn census_dominates_sifted_set() {
    let sets = SiftedSets::build(100_000, 0.3, 0.1).unwrap();
    assert!(census(100_000, 11).unwrap().count >= sets.b.len() as u64);
}

#[test]
fn sifted_set_examples() {
    let sets = SiftedSets::build(1_000, 0.3, 0.1).unwrap();
    let z2 = 1000f64.powf(0.1);
    let sieve = FactorSieve::new(1_002).unwrap();
    for m in &sets.b {
        assert!(m.factors.iter().all(|&(p, _)| p as f64 >= z2));
        assert!(sieve.smallest_prime_factor(m.b) as f64 >= 10f64.powf(0.3));
    }
    for m in &sets.a {
        assert_eq!(m.n % 2, 0);
    }
    let first = (3..1000u64)
        .step_by(8)
        .find(|&p| sieve.is_prime(p) && sieve.factorize(p + 2).iter().all(|&(q, _)| q as f64 >= z2))
        .unwrap();
    assert_eq!(sets.a[0].n, first - 1);
}

#[test]
fn larger_theta2_shrinks_the_set() {
    let sieve = FactorSieve::new(100_002).unwrap();
    let mut prev = usize::MAX;
    for t2 in [0.05, 0.1, 0.15, 0.2, 0.25] {
        let s = SiftedSets::build_with(&sieve, 100_000, 0.3, t2).unwrap();
        assert!(s.a.len() <= prev);
        prev = s.a.len();
    }
}

#[test]
fn sifting_function_properties() {
    let sets = SiftedSets::build(100_000, 0.3, 0.05).unwrap();
    assert_eq!(sets.sifting_function(3.0), sets.a.len() as u64);
    assert_eq!(sets.sifting_function(2.0), sets.a.len() as u64);
    assert_eq!(sets.sifting_function(100_000f64.sqrt()), sets.a0.len() as u64);
    let mut prev = u64::MAX;
    for z in [3.0, 4.0, 8.0, 20.0, 50.0, 100.0, 316.3] {
        let s = sets.sifting_function(z);
        assert!(s <= prev);
        prev = s;
    }
}

#[test]
fn buchstab_identity() {
    for (x, t1) in [(10_000u64, 0.3), (100_000, 0.45), (50_000, 0.5), (49, 0.3)] {
        let sets = SiftedSets::build(x, t1, 0.05).unwrap();
        let r = sets.buchstab_check();
        assert_eq!(r.residual, 0, "{r:?}");
        assert_eq!(r.lhs, r.a0_count);
    }
    let r = SiftedSets::build(50_000, 0.5, 0.05).unwrap().buchstab_check();
    assert_eq!(r.switching_sum, 0);
}

#[test]
fn weighted_chain_holds() {
    let sets = SiftedSets::build(100_000, 0.3, 0.05).unwrap();
    let r = sets.weighted_chain_check(0.23, 0.14).unwrap();
    assert!(r.all_hold, "{r:#?}");
    assert!(r.b_count > 0);
    let zero = sets.weighted_chain_check(0.23, 0.0).unwrap();
    assert!(zero.all_hold);
    // λ = 0: the main left side is just #B.
    assert_eq!(zero.checks[4].rhs, sets.b.len() as f64);
    assert!(matches!(sets.weighted_chain_check(0.01, 0.14), Err(Error::Domain { .. })));
}

#[test]
fn switching_structure() {
    let sieve = FactorSieve::new(100_002).unwrap();
    for t1 in [0.3, 0.45] {
        let sets = SiftedSets::build_with(&sieve, 100_000, t1, 0.05).unwrap();
        let r = sets.switching_structure_check(&sieve).unwrap();
        assert!(r.passes, "{r:#?}");
        let b = sets.buchstab_check();
        assert_eq!(r.counted, b.switching_sum);
        if t1 < 0.4 {
            assert!(r.p2_above_sqrt_x > 0);
        }
    }
    let r = SiftedSets::build_with(&sieve, 100_000, 0.3, 0.05)
        .unwrap()
        .switching_structure_check(&sieve)
        .unwrap();
    // 22090 = 2·5·47², 50410 = 2·5·71², 68890 = 2·5·83²
    assert_eq!(r.equal_factors, 3);
    let sets = SiftedSets::build_with(&sieve, 100_000, 0.2, 0.05).unwrap();
    assert!(matches!(sets.switching_structure_check(&sieve), Err(Error::Domain { .. })));
    let tiny_sieve = FactorSieve::new(102).unwrap();
    let tiny = SiftedSets::build_with(&tiny_sieve, 100, 0.3, 0.05).unwrap();
    let r = tiny.switching_structure_check(&tiny_sieve).unwrap();
    assert!(r.passes && r.counted == 0);
}

#[test]
fn s2_is_non_decreasing() {
    let mut prev = 0.0;
    for t in [1u64, 5, 10, 100, 1000, 10_000] {
        let v = s2_direct_sum(t).unwrap();
        assert!(v >= prev);
        prev = v;
    }
    assert_eq!(s2_direct_sum(4).unwrap(), 1.0);
}

proptest! {
    #[test]
    fn sum_of_squares_criterion_matches_search(n in 1u64..5_000_000) {
        prop_assert_eq!(is_sum_two_pos_squares(n), brute_force_sum_two_pos_squares(n));
    }

    #[test]
    fn squares_times_two_are_sums(a in 1u64..100_000) {
        prop_assert!(is_sum_two_pos_squares(2 * a * a));
    }
}
