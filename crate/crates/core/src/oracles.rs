//! Independent cross-checks for the Jacobian ring engine.
//!
//! Nothing here goes through [`RingInstance`] slice assembly: the classical
//! Jacobian ring is built from its own matrices and ranked by Bareiss over
//! the integers, and the log-Hodge targets come from closed formulas. The
//! calibration procedure then compares the engine against these targets.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldError, Result};
use crate::field::{Field, FieldKind, PrimeField, Rationals};
use crate::jacring::{GeneratorVariant, RingInstance, SliceKey, DEFAULT_DEGREE_CAP};
use crate::linalg::{bareiss_rank, integer_rows, Matrix};
use crate::polys::{binomial, monomial_basis, Monomial, Poly};

/// Seed of the generic form behind [`closed_griffiths_dim`].
pub const CLOSED_RING_SEED: u64 = 0x5eed;

/// Primes drawn by [`crosscheck_fields`] exceed this bound.
pub const CROSSCHECK_PRIME_FLOOR: u64 = 1_000_000;

/// Attempts per prime slot before giving up.
pub const CROSSCHECK_MAX_DRAWS: usize = 5;

/// One expected quantity and where it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedValue {
    pub quantity: String,
    pub value: i64,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleTarget {
    pub n: usize,
    pub d: u32,
    pub e: u32,
    pub expected: Vec<ExpectedValue>,
}

/// Rank of a row list, fraction-free over the rationals.
fn rank_of<F: Field>(field: &F, ncols: usize, rows: Vec<Vec<F::Elem>>) -> usize {
    if field.kind() == FieldKind::Q {
        let rat: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|x| field.to_parts(x).0).collect()).collect();
        bareiss_rank(integer_rows(&rat))
    } else {
        Matrix::from_rows(field.clone(), ncols, rows).rank()
    }
}

/// `dim (P/(dF/dX_0, ..., dF/dX_n))_k` for the given form.
pub fn closed_ring_piece_dim<F: Field>(f: &Poly<F>, k: i64) -> Result<usize> {
    let field = f.field();
    let nv = f.nvars();
    let d = f
        .homogeneous_degree()
        .ok_or_else(|| Error::InvalidInstance("form must be nonzero and homogeneous".into()))?;
    if k < 0 {
        return Ok(0);
    }
    if k > DEFAULT_DEGREE_CAP as i64 {
        return Err(Error::DegreeCap { degree: k, cap: DEFAULT_DEGREE_CAP });
    }
    let cols = monomial_basis(nv, k);
    let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for i in 0..nv {
        let partial = f.partial_derivative(i);
        for m in monomial_basis(nv, k - d as i64 + 1) {
            let mut row = vec![field.zero(); cols.len()];
            for (pm, c) in partial.terms() {
                row[index[&pm.mul(&m)]] = c.clone();
            }
            rows.push(row);
        }
    }
    Ok(cols.len() - rank_of(field, cols.len(), rows))
}

/// A form of degree `d` in `nvars` variables with small seeded integer
/// coefficients.
pub fn seeded_form<F: Field>(field: F, nvars: usize, d: u32, seed: u64) -> Poly<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<_> = monomial_basis(nvars, d as i64)
        .into_iter()
        .map(|m| (m, field.from_i64(rng.gen_range(-9..=9))))
        .collect();
    Poly::from_terms(field, nvars, terms)
}

/// Degree of the Griffiths piece `R^{(q+1)d-n-1}`.
pub fn griffiths_degree(n: usize, d: u32, q: i64) -> i64 {
    (q + 1) * d as i64 - n as i64 - 1
}

/// Top degree `(n+1)(d-2)` of the closed Jacobian ring.
pub fn macaulay_top(n: usize, d: u32) -> i64 {
    (n as i64 + 1) * (d as i64 - 2)
}

/// Dimension of the degree-`((q+1)d-n-1)` piece of the Jacobian ring of a
/// generic degree-`d` form in `n+1` variables.
pub fn closed_griffiths_dim(n: usize, d: u32, q: i64) -> Result<usize> {
    if d == 0 {
        return Err(Error::InvalidInstance("closed ring needs d >= 1".into()));
    }
    let f = seeded_form(Rationals, n + 1, d, CLOSED_RING_SEED);
    closed_ring_piece_dim(&f, griffiths_degree(n, d, q))
}

/// Every piece of the generic closed Jacobian ring, degrees `0..=T`.
pub fn closed_ring_dims(n: usize, d: u32) -> Result<Vec<usize>> {
    let f = seeded_form(Rationals, n + 1, d, CLOSED_RING_SEED);
    (0..=macaulay_top(n, d).max(0)).map(|k| closed_ring_piece_dim(&f, k)).collect()
}

/// Squarefree monomials of degree `k` in five variables: the pieces of
/// `Q[z_0..z_4]/(z_0^2, ..., z_4^2)`.
pub fn fermat_ring_dim(k: i64) -> usize {
    monomial_basis(5, k).iter().filter(|m| m.is_squarefree()).count()
}

/// `(g + de - 1, g)` for a smooth plane curve of degree `d` punctured at its
/// `de` points on a transverse degree-`e` curve.
pub fn curve_open_hodge(d: u32, e: u32) -> (i64, i64) {
    let (d, e) = (d as i64, e as i64);
    let g = (d - 1) * (d - 2) / 2;
    ((g + d * e - 1).max(0), g)
}

/// `h^0(K_X + Z) = h^0(O_X(d+e-n-1))` for a degree-`d` hypersurface `X`
/// in `P^n` and `Z` cut out by a degree-`e` form.
pub fn log_canonical_dim(n: usize, d: u32, e: u32) -> i64 {
    let m = d as i64 + e as i64 - n as i64 - 1;
    let c = |deg: i64| if deg < 0 { 0 } else { binomial((deg + n as i64) as u64, n as u64) as i64 };
    c(m) - c(m - d as i64)
}

/// Targets checked by [`calibrate`].
pub fn targets(n: usize, d: u32, e: u32) -> OracleTarget {
    let m = d as i64 + e as i64 - n as i64 - 1;
    let sigma = 2 * (d as i64 - n as i64 - 1) + e as i64;
    let b0 = if n == 2 {
        ExpectedValue {
            quantity: format!("dim B_0({m})"),
            value: curve_open_hodge(d, e).0,
            provenance: "curve residue count g + de - 1".into(),
        }
    } else {
        ExpectedValue {
            quantity: format!("dim B_0({m})"),
            value: log_canonical_dim(n, d, e),
            provenance: "h^0(O_X(d+e-n-1)) = C(m+n,n) - C(m-d+n,n)".into(),
        }
    };
    let socle = ExpectedValue {
        quantity: format!("dim B_{}({sigma})", n - 1),
        value: 1,
        provenance: "one-dimensional socle".into(),
    };
    OracleTarget { n, d, e, expected: vec![b0, socle] }
}

/// `dim B_q(l)` against `dim B_{n-1-q}(Sigma-l)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityRow {
    pub q: i64,
    pub l: i64,
    pub dim: usize,
    pub dual_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantMeasurement {
    pub n: usize,
    pub d: u32,
    pub e: u32,
    pub variant: GeneratorVariant,
    pub seed: Option<u64>,
    pub b0: usize,
    pub socle: usize,
    pub duality: Vec<DualityRow>,
    pub b0_ok: bool,
    pub socle_ok: bool,
    pub duality_ok: bool,
}

impl VariantMeasurement {
    pub fn passes(&self) -> bool {
        self.b0_ok && self.socle_ok && self.duality_ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub targets: Vec<OracleTarget>,
    pub seeds: Vec<u64>,
    pub measurements: Vec<VariantMeasurement>,
    pub passing: Vec<GeneratorVariant>,
}

impl CalibrationReport {
    /// Width-aligned table of every measured dimension.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8} {:<14} {:>6} {:>4} {:>6} {:>6}  duality (q l: dim/dual)",
            "(n,d,e)", "variant", "seed", "B0", "socle", "pass"
        );
        for m in &self.measurements {
            let duality: Vec<String> = m
                .duality
                .iter()
                .map(|r| format!("q{} l{}: {}/{}", r.q, r.l, r.dim, r.dual_dim))
                .collect();
            let _ = writeln!(
                out,
                "{:<8} {:<14} {:>6} {:>4} {:>6} {:>6}  {}",
                format!("({},{},{})", m.n, m.d, m.e),
                m.variant.name(),
                m.seed.map_or("-".into(), |s| s.to_string()),
                m.b0,
                m.socle,
                m.passes(),
                duality.join(", ")
            );
        }
        out
    }
}

/// Measures one instance against the targets of its degrees.
pub fn measure<F: Field>(inst: &RingInstance<F>) -> Result<VariantMeasurement> {
    let (n, d, e) = (inst.n(), inst.d(), inst.e());
    let target = targets(n, d, e);
    let m = d as i64 + e as i64 - n as i64 - 1;
    let top = n as i64 - 1;
    let sigma = inst.sigma();
    let b0 = inst.quotient_dim(SliceKey::new(0, m))?;
    let socle = inst.quotient_dim(SliceKey::new(top, sigma))?;
    let (lo, hi) = inst.duality_window();
    let mut duality = Vec::new();
    for l in lo..=hi {
        for q in 0..=top {
            duality.push(DualityRow {
                q,
                l,
                dim: inst.quotient_dim(SliceKey::new(q, l))?,
                dual_dim: inst.quotient_dim(SliceKey::new(top - q, sigma - l))?,
            });
        }
    }
    Ok(VariantMeasurement {
        n,
        d,
        e,
        variant: inst.variant(),
        seed: inst.seed(),
        b0,
        socle,
        b0_ok: b0 as i64 == target.expected[0].value,
        socle_ok: socle == 1,
        duality_ok: duality.iter().all(|r| r.dim == r.dual_dim),
        duality,
    })
}

fn finish(targets: Vec<OracleTarget>, seeds: Vec<u64>, measurements: Vec<VariantMeasurement>) -> Result<CalibrationReport> {
    let passing: Vec<GeneratorVariant> = GeneratorVariant::ALL
        .into_iter()
        .filter(|v| measurements.iter().filter(|m| m.variant == *v).all(|m| m.passes()))
        .collect();
    let report = CalibrationReport { targets, seeds, measurements, passing };
    if report.passing.is_empty() {
        return Err(Error::Calibration(format!("no generator variant passes\n{}", report.table())));
    }
    Ok(report)
}

/// Variants passing every target on every seed of a generic `(n, d, e)`
/// instance over the rationals.
pub fn calibrate(n: usize, d: u32, e: u32, seeds: &[u64]) -> Result<CalibrationReport> {
    calibrate_joint(&[(n, d, e)], seeds)
}

/// Like [`calibrate`], but a variant must pass on every listed instance.
pub fn calibrate_joint(instances: &[(usize, u32, u32)], seeds: &[u64]) -> Result<CalibrationReport> {
    let mut measurements = Vec::new();
    for &(n, d, e) in instances {
        for &seed in seeds {
            let base = RingInstance::generic(Rationals, n, d, e, GeneratorVariant::default(), seed)?;
            for v in GeneratorVariant::ALL {
                measurements.push(measure(&base.with_variant(v))?);
            }
        }
    }
    let targets = instances.iter().map(|&(n, d, e)| targets(n, d, e)).collect();
    finish(targets, seeds.to_vec(), measurements)
}

/// The desk instances whose joint calibration fixes the default variant.
pub const DESK_INSTANCES: [(usize, u32, u32); 3] = [(2, 3, 1), (2, 3, 2), (2, 4, 1)];

/// Smoothness of `{F = 0}`: the closed Jacobian ring of a smooth form has
/// nothing above its top degree `(n+1)(d-2)`.
pub fn regularity_certificate<F: Field>(inst: &RingInstance<F>) -> Result<bool> {
    let past_top = (macaulay_top(inst.n(), inst.d()) + 1).max(0);
    Ok(closed_ring_piece_dim(inst.f(), past_top)? == 0)
}

/// Calibration of one explicit pair; aborts when the regularity
/// certificate fails.
pub fn calibrate_pair<F: Field>(inst: &RingInstance<F>) -> Result<CalibrationReport> {
    if !regularity_certificate(inst)? {
        return Err(Error::Calibration(format!(
            "regularity certificate failed: the Jacobian ring of F does not vanish in degree {}",
            macaulay_top(inst.n(), inst.d()) + 1
        )));
    }
    let (n, d, e) = (inst.n(), inst.d(), inst.e());
    let mut measurements = Vec::new();
    for v in GeneratorVariant::ALL {
        measurements.push(measure(&inst.with_variant(v))?);
    }
    finish(vec![targets(n, d, e)], inst.seed().into_iter().collect(), measurements)
}

/// Deterministic primes above [`CROSSCHECK_PRIME_FLOOR`], congruent to 1
/// mod 4 when `need_i` so that `i` reduces.
pub fn draw_primes(seed: u64, count: usize, need_i: bool) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut p = rng.gen_range(CROSSCHECK_PRIME_FLOOR + 1..1u64 << 31);
        while !(primal::is_prime(p) && (!need_i || p % 4 == 1)) {
            p += 1;
        }
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeAttempt {
    pub prime: u64,
    /// `None` when the reduction itself failed.
    pub dims: Option<Vec<usize>>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub keys: Vec<SliceKey>,
    pub dims: Vec<usize>,
    pub attempts: Vec<PrimeAttempt>,
    pub primes: Vec<u64>,
    pub agree: bool,
}

impl CrosscheckReport {
    pub fn redraws(&self) -> usize {
        self.attempts.len() - self.primes.len()
    }
}

fn slot_dims<F: Field>(inst: &RingInstance<F>, keys: &[SliceKey], p: u64) -> Result<Option<Vec<usize>>> {
    let reduced = match inst.to_prime(p) {
        Ok(r) => r,
        Err(Error::Field(FieldError::DenominatorDivisible { .. }))
        | Err(Error::Field(FieldError::NoImaginaryUnit(_)))
        | Err(Error::InvalidInstance(_)) => return Ok(None),
        Err(other) => return Err(other),
    };
    keys.iter().map(|&k| reduced.quotient_dim(k)).collect::<Result<Vec<_>>>().map(Some)
}

/// Compares the dims of `inst` at `keys` with three reductions modulo
/// random primes. A prime that divides a denominator, or whose dims
/// disagree, is re-drawn up to [`CROSSCHECK_MAX_DRAWS`] times per slot.
pub fn crosscheck_fields<F: Field>(inst: &RingInstance<F>, keys: &[SliceKey], seed: u64) -> Result<CrosscheckReport> {
    let need_i = inst.field().kind() == FieldKind::Qi;
    let pool = draw_primes(seed, 3 * CROSSCHECK_MAX_DRAWS, need_i);
    crosscheck_with_pool(inst, keys, &pool)
}

/// [`crosscheck_fields`] with an explicit prime pool, consumed in order.
pub fn crosscheck_with_pool<F: Field>(inst: &RingInstance<F>, keys: &[SliceKey], pool: &[u64]) -> Result<CrosscheckReport> {
    if inst.field().kind().characteristic() != 0 {
        return Err(Error::Contract("crosscheck needs an instance over Q or Q(i)".into()));
    }
    let dims = keys.iter().map(|&k| inst.quotient_dim(k)).collect::<Result<Vec<_>>>()?;
    let mut pool = pool.iter().copied();
    let mut attempts = Vec::new();
    let mut primes = Vec::new();
    let mut agree = true;
    for _slot in 0..3 {
        let mut settled = false;
        let mut unreducible = 0;
        for _ in 0..CROSSCHECK_MAX_DRAWS {
            let Some(p) = pool.next() else { break };
            match slot_dims(inst, keys, p)? {
                None => {
                    unreducible += 1;
                    attempts.push(PrimeAttempt { prime: p, dims: None, note: "reduction failed; re-drawn".into() });
                }
                Some(pd) if pd == dims => {
                    attempts.push(PrimeAttempt { prime: p, dims: Some(pd), note: "agrees".into() });
                    primes.push(p);
                    settled = true;
                    break;
                }
                Some(pd) => {
                    attempts.push(PrimeAttempt { prime: p, dims: Some(pd), note: "disagrees; re-drawn".into() });
                }
            }
        }
        if !settled {
            if unreducible == CROSSCHECK_MAX_DRAWS {
                return Err(Error::PrimeExhausted(CROSSCHECK_MAX_DRAWS));
            }
            agree = false;
        }
    }
    Ok(CrosscheckReport { keys: keys.to_vec(), dims, attempts, primes, agree })
}

/// Rank agreement between a rational matrix and its claimed reductions.
pub fn ranks_agree(rational: &Matrix<Rationals>, reductions: &[Matrix<PrimeField>]) -> bool {
    let r = bareiss_rank(integer_rows(rational.rows()));
    reductions.iter().all(|m| m.rank() == r)
}

/// Exact integer rank, exposed for fixtures.
pub fn integer_rank(rows: Vec<Vec<i64>>) -> usize {
    bareiss_rank(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
}
