use std::sync::OnceLock;

use logjac::oracles::DESK_INSTANCES;
use logjac::{Class, Field, GaussianRationals, GeneratorVariant, PrimeField, Rationals, RingInstance, SliceKey};
use proptest::prelude::*;

fn plane_cubic() -> RingInstance<Rationals> {
    RingInstance::generic(Rationals, 2, 3, 1, GeneratorVariant::default(), 1).unwrap()
}

fn window_keys<F: Field>(inst: &RingInstance<F>) -> Vec<SliceKey> {
    let (lo, hi) = inst.duality_window();
    (lo..=hi).flat_map(|l| (0..inst.n() as i64).map(move |q| SliceKey::new(q, l))).collect()
}

#[test]
fn plane_cubic_window() {
    let r = plane_cubic();
    let dims: Vec<usize> = window_keys(&r).into_iter().map(|k| r.quotient_dim(k).unwrap()).collect();
    assert_eq!(dims, [1, 3, 3, 1]);
    assert_eq!(r.hodge_numbers(0).unwrap(), [3, 1]);
    assert_eq!(r.slice_dimension(SliceKey::new(1, 1)), 21);
}

#[test]
fn conic_boundary_window() {
    let r = RingInstance::generic(Rationals, 2, 3, 2, GeneratorVariant::default(), 1).unwrap();
    let dims: Vec<usize> = window_keys(&r).into_iter().map(|k| r.quotient_dim(k).unwrap()).collect();
    assert_eq!(dims, [1, 6, 3, 3, 6, 1]);
}

#[test]
fn pairings_are_perfect_on_desk_instances() {
    for (n, d, e) in DESK_INSTANCES {
        let r = RingInstance::generic(Rationals, n, d, e, GeneratorVariant::default(), 3).unwrap();
        for k in window_keys(&r) {
            let rep = r.pairing_report(k.q, k.l).unwrap();
            assert!(rep.perfect, "({n},{d},{e}) {k}: {rep:?}");
            assert_eq!(rep.socle_dim, 1);
        }
    }
}

#[test]
fn dims_do_not_depend_on_the_field() {
    let q = RingInstance::generic(Rationals, 2, 4, 1, GeneratorVariant::default(), 9).unwrap();
    let qi = RingInstance::generic(GaussianRationals, 2, 4, 1, GeneratorVariant::default(), 9).unwrap();
    let fp = q.to_prime(1_000_033).unwrap();
    for k in window_keys(&q) {
        let d = q.quotient_dim(k).unwrap();
        assert_eq!(qi.quotient_dim(k).unwrap(), d);
        assert_eq!(fp.quotient_dim(k).unwrap(), d);
    }
}

#[test]
fn outside_window_pairing_warns() {
    let rep = plane_cubic().pairing_report(0, 3).unwrap();
    assert!(!rep.in_window);
    assert!(rep.findings.iter().any(|f| f.starts_with("warning")));
}

#[test]
fn echo_reflects_configuration() {
    let r = plane_cubic().with_variant(GeneratorVariant::PlusW);
    let echo = r.echo();
    assert_eq!((echo.n, echo.d, echo.e, echo.seed), (2, 3, 1, Some(1)));
    assert_eq!(echo.variant, GeneratorVariant::PlusW);
    assert_eq!(echo.field.to_string(), "Q");
}

fn class(key: SliceKey, dim: usize) -> impl Strategy<Value = Class<Rationals>> {
    prop::collection::vec(-4i64..=4, dim)
        .prop_map(move |cs| Class { key, coords: cs.into_iter().map(|c| Rationals.from_i64(c)).collect() })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn products_commute_and_associate(
        x in class(SliceKey::new(0, 1), 3),
        y in class(SliceKey::new(1, -1), 4),
        z in class(SliceKey::new(0, 0), 1),
    ) {
        let r = plane_cubic();
        let xy = r.multiply(&x, &y).unwrap();
        prop_assert_eq!(&xy, &r.multiply(&y, &x).unwrap());
        prop_assert_eq!(xy.key, SliceKey::new(1, 0));
        let left = r.multiply(&xy, &z).unwrap();
        let right = r.multiply(&x, &r.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn duality_symmetry_for_any_seed(seed in 0u64..500, which in 0usize..3) {
        let (n, d, e) = DESK_INSTANCES[which];
        let field = PrimeField::new(1_000_003).unwrap();
        let r = RingInstance::generic(field, n, d, e, GeneratorVariant::default(), seed).unwrap();
        let top = n as i64 - 1;
        prop_assert_eq!(r.quotient_dim(SliceKey::new(top, r.sigma())).unwrap(), 1);
        for k in window_keys(&r) {
            let dual = SliceKey::new(top - k.q, r.sigma() - k.l);
            prop_assert_eq!(r.quotient_dim(k).unwrap(), r.quotient_dim(dual).unwrap());
        }
    }

    #[test]
    fn quotient_never_exceeds_ambient(q in 0i64..3, l in -4i64..4) {
        static RING: OnceLock<RingInstance<Rationals>> = OnceLock::new();
        let r = RING.get_or_init(plane_cubic);
        let key = SliceKey::new(q, l);
        let piece = r.quotient_piece(key).unwrap();
        prop_assert_eq!(piece.ambient_dim(), r.slice_dimension(key));
        prop_assert_eq!(piece.dim() + piece.rank(), piece.ambient_dim());
    }
}
