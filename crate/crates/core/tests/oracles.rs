use logjac::oracles::{
    calibrate, calibrate_joint, calibrate_pair, closed_ring_dims, crosscheck_fields, crosscheck_with_pool, draw_primes,
    regularity_certificate, DESK_INSTANCES,
};
use logjac::{Error, Field, GaussianRationals, GeneratorVariant, Monomial, Poly, Rationals, RingInstance, SliceKey};
use num_bigint::BigInt;
use num_rational::BigRational;

#[test]
fn single_instance_calibration() {
    let report = calibrate(2, 3, 1, &[1, 2, 3]).unwrap();
    let minimal: Vec<_> =
        report.measurements.iter().filter(|m| m.variant == GeneratorVariant::PaperMinimal).collect();
    assert_eq!(minimal.len(), 3);
    assert!(minimal.iter().all(|m| m.socle >= 3 && !m.passes()));
    assert!(!report.passing.contains(&GeneratorVariant::PaperMinimal));
    assert!(report.passing.contains(&GeneratorVariant::PlusFNuG));
    // no q = 0 generator reaches degree 1
    for m in report.measurements.iter().filter(|m| !m.variant.has_q0_generators()) {
        assert_eq!(m.b0, 3);
    }
}

#[test]
fn joint_calibration_selects_the_default() {
    let report = calibrate_joint(&DESK_INSTANCES, &[1, 2]).unwrap();
    assert_eq!(report.passing, vec![GeneratorVariant::default()]);
}

#[test]
fn calibration_is_deterministic() {
    let a = calibrate(2, 3, 1, &[5, 6]).unwrap();
    let b = calibrate(2, 3, 1, &[5, 6]).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn degenerate_pair_aborts() {
    let f = Poly::monomial(Rationals, Monomial::new(vec![3, 0, 0]), Rationals.one());
    let g = Poly::var(Rationals, 3, 1);
    let inst = RingInstance::new(Rationals, 2, f, g, GeneratorVariant::default()).unwrap();
    assert!(!regularity_certificate(&inst).unwrap());
    match calibrate_pair(&inst) {
        Err(Error::Calibration(msg)) => assert!(msg.contains("regularity")),
        other => panic!("expected calibration abort, got {other:?}"),
    }
}

#[test]
fn fermat_pair_calibrates() {
    let f = (0..3).fold(Poly::zero(Rationals, 3), |acc, i| acc.add(&Poly::var(Rationals, 3, i).pow(3)));
    let g = Poly::var(Rationals, 3, 0).add(&Poly::var(Rationals, 3, 1)).add(&Poly::var(Rationals, 3, 2).scale(&Rationals.from_i64(2)));
    let inst = RingInstance::new(Rationals, 2, f, g, GeneratorVariant::default()).unwrap();
    assert!(calibrate_pair(&inst).unwrap().passing.contains(&GeneratorVariant::PlusFNuG));
}

#[test]
fn macaulay_symmetry_cubic_threefold() {
    let dims = closed_ring_dims(4, 3).unwrap();
    assert_eq!(dims, vec![1, 5, 10, 10, 5, 1]);
}

fn window_keys(inst: &RingInstance<impl Field>) -> Vec<SliceKey> {
    let (lo, hi) = inst.duality_window();
    (lo..=hi).flat_map(|l| (0..inst.n() as i64).map(move |q| SliceKey::new(q, l))).collect()
}

#[test]
fn crosscheck_agrees_on_window() {
    let inst = RingInstance::generic(Rationals, 2, 3, 1, GeneratorVariant::default(), 11).unwrap();
    let report = crosscheck_fields(&inst, &window_keys(&inst), 99).unwrap();
    assert!(report.agree);
    assert_eq!(report.primes.len(), 3);
    assert!(report.primes.iter().all(|&p| p > 1_000_000));
}

#[test]
fn crosscheck_over_gaussian_rationals() {
    let inst = RingInstance::generic(GaussianRationals, 2, 3, 1, GeneratorVariant::default(), 4).unwrap();
    let report = crosscheck_fields(&inst, &window_keys(&inst), 3).unwrap();
    assert!(report.agree);
    assert!(report.primes.iter().all(|&p| p % 4 == 1));
}

#[test]
fn denominator_prime_is_redrawn() {
    let pool = draw_primes(17, 6, false);
    let bad = pool[0];
    let base = RingInstance::generic(Rationals, 2, 3, 1, GeneratorVariant::default(), 2).unwrap();
    let third = BigRational::new(BigInt::from(1), BigInt::from(bad));
    let f = base.f().add(&Poly::monomial(Rationals, Monomial::new(vec![3, 0, 0]), third));
    let inst = RingInstance::new(Rationals, 2, f, base.g().clone(), GeneratorVariant::default()).unwrap();
    let report = crosscheck_with_pool(&inst, &window_keys(&inst), &pool).unwrap();
    assert!(report.agree);
    assert_eq!(report.redraws(), 1);
    assert!(report.attempts[0].dims.is_none());
    assert!(!report.primes.contains(&bad));
}

#[test]
fn exhausted_pool_is_an_error() {
    let bad = draw_primes(1, 5, false);
    let product: BigInt = bad.iter().map(|&p| BigInt::from(p)).product();
    let base = RingInstance::generic(Rationals, 2, 3, 1, GeneratorVariant::default(), 2).unwrap();
    let tiny = BigRational::new(BigInt::from(1), product);
    let f = base.f().add(&Poly::monomial(Rationals, Monomial::new(vec![3, 0, 0]), tiny));
    let inst = RingInstance::new(Rationals, 2, f, base.g().clone(), GeneratorVariant::default()).unwrap();
    assert!(matches!(crosscheck_with_pool(&inst, &[SliceKey::new(0, 1)], &bad), Err(Error::PrimeExhausted(5))));
}
