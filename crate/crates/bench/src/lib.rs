//! Shared fixtures for the slice benchmarks.

use logjac::{Field, GeneratorVariant, Rationals, RingInstance, SliceKey};

/// `(n, d, e)` shapes benchmarked, smallest first.
pub const SHAPES: [(usize, u32, u32); 3] = [(2, 3, 1), (2, 3, 2), (3, 3, 2)];

pub fn instance(n: usize, d: u32, e: u32) -> RingInstance<Rationals> {
    RingInstance::generic(Rationals, n, d, e, GeneratorVariant::default(), 1).expect("generic instance")
}

/// Every `(q, l)` in the duality window.
pub fn window_keys<F: Field>(inst: &RingInstance<F>) -> Vec<SliceKey> {
    let (lo, hi) = inst.duality_window();
    (lo..=hi).flat_map(|l| (0..inst.n() as i64).map(move |q| SliceKey::new(q, l))).collect()
}

/// Quotient dims over the window on a fresh (unmemoised) copy of `inst`.
pub fn window_dims<F: Field>(inst: &RingInstance<F>) -> Vec<usize> {
    let fresh = inst.clone();
    window_keys(&fresh).into_iter().map(|k| fresh.quotient_dim(k).expect("slice")).collect()
}
