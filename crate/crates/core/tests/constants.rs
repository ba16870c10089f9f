use sievebound::constants::{
    c3_raw_partial, compute_all, compute_c, compute_c1, compute_c2, compute_c3, compute_c3_checked,
    partial_products, tail_bound, CVariant, ConstantName, REFERENCE,
};
use sievebound::primes::{prime_count, small_primes};
use sievebound::Error;

#[test]
fn absolute_products_stable_between_decades() {
    let a = partial_products(1_000_000, CVariant::default());
    let b = partial_products(10_000_000, CVariant::default());
    // The C product has tail ≈ 2/(X log X), about 1.3e-7 between these cutoffs.
    assert!((a.c - b.c).abs() < a.c * tail_bound(1_000_000));
    assert!((a.c1 - b.c1).abs() < 1e-7);
    assert!((a.c2 - b.c2).abs() < 1e-7);
    assert!((a.c3 - b.c3).abs() < 1e-5);
}

#[test]
fn doubling_cutoff_moves_less_than_tail_bound() {
    for x in [100_000u64, 1_000_000] {
        let a = partial_products(x, CVariant::default());
        let b = partial_products(2 * x, CVariant::default());
        let t = tail_bound(x);
        assert!((a.c - b.c).abs() < a.c * t);
        assert!((a.c1 - b.c1).abs() < a.c1 * t);
        assert!((a.c2 - b.c2).abs() < a.c2 * t);
        assert!((a.c3 - b.c3).abs() < a.c3 * t);
    }
}

#[test]
fn ordering_and_sign() {
    let c = partial_products(1_000_000, CVariant::default());
    assert!(c.c > 0.0 && c.c < 2.25);
    assert!(c.c2 < 1.0 && 1.0 < c.c1);
    assert!(c.c3 > 0.0);
    assert!(c.c1 * c.c2 * c.c2 > 0.0);
}

#[test]
fn twin_prime_constant() {
    let c2 = compute_c2(10_000_000).unwrap();
    assert!((c2.value - 0.660_161_815_846_869_6).abs() < 1e-8);
}

#[test]
fn raw_c3_partial_products_stay_near_accelerated_value() {
    let accel = compute_c3(1_000_000).unwrap().value;
    let raw6 = c3_raw_partial(1_000_000);
    let raw7 = c3_raw_partial(10_000_000);
    assert!((raw6 - raw7).abs() > 1e-6);
    assert!((raw6 - accel).abs() < 2e-5);
    assert!((raw7 - accel).abs() < 2e-5);
}

#[test]
fn variant_differs() {
    let a = compute_c(1_000_000, CVariant::PMinusOne).unwrap().value;
    let b = compute_c(1_000_000, CVariant::PMinusTwo).unwrap().value;
    assert!(b < a);
    assert!((b - 1.677_293_5).abs() < 1e-6);
}

#[test]
fn report_shape() {
    let r = compute_all(1_000_000, CVariant::default()).unwrap();
    assert_eq!(r.values.len(), 4);
    for v in &r.values {
        assert!(v.tail_error < 1e-5 && v.tail_error > 0.0);
        assert_eq!(v.cutoff, 1_000_000);
    }
    assert_eq!(r.get(ConstantName::C1).unwrap().value, compute_c1(1_000_000).unwrap().value);
}

#[test]
fn acceleration_check_passes_and_fails() {
    assert!(compute_c3_checked(1_000_000, 1e-5).is_ok());
    assert!(matches!(
        compute_c3_checked(1_000_000, 1e-12),
        Err(Error::Acceleration { .. })
    ));
}

#[test]
fn prime_counts() {
    assert_eq!(prime_count(1_000_000), small_primes(1_000_000).len() as u64);
    assert_eq!(prime_count(100_000_000), 5_761_455);
}

#[test]
fn frozen_reference_values() {
    let r = compute_all(100_000_000, CVariant::default()).unwrap();
    let c = r.constants();
    println!("{c:?}");
    assert_eq!(c, REFERENCE);
    for v in &r.values {
        assert!(v.tail_error < 1e-7);
    }
}
