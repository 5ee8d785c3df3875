//! Bigraded pieces of the Jacobian ring of a pair `(F, G)`.
//!
//! The ambient ring is `A = P[mu, nu]` with `P = k[X_0..X_n]`. A monomial
//! `X^m mu^a nu^b` has bigrade `(q, l) = (a + b, |m| - a*d - b*e)`, so
//! `A_q(l)` is spanned by `P^{ad+be+l} mu^a nu^b` over `a + b = q`. Every
//! generator of the ideal is bigrade-homogeneous, hence `J ∩ A_q(l)` is the
//! span of generator multiples and each quotient piece `B_q(l)` is a finite
//! exact elimination.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::criteria;
use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, PrimeField};
use crate::linalg::{Echelon, Matrix};
use crate::polys::{binomial, monomial_basis, Monomial, Poly};

pub const DEFAULT_DEGREE_CAP: u32 = 40;

/// Coefficients of generic instances are drawn uniformly from this range.
pub const GENERIC_COEFF_RANGE: std::ops::RangeInclusive<i64> = -100..=100;

/// Which generating set is used for the Jacobian ideal.
///
/// All variants contain `omega_k = mu*dF/dX_k + nu*dG/dX_k`; they differ in the
/// extra generators. `PlusFNuG` adds `F` and `nu*G` and is the variant that
/// calibration selects across the desk instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub enum GeneratorVariant {
    PaperMinimal,
    PlusFG,
    PlusMuFNuG,
    PlusW,
    #[default]
    PlusFNuG,
}

impl GeneratorVariant {
    pub const ALL: [GeneratorVariant; 5] = [
        GeneratorVariant::PaperMinimal,
        GeneratorVariant::PlusFG,
        GeneratorVariant::PlusMuFNuG,
        GeneratorVariant::PlusW,
        GeneratorVariant::PlusFNuG,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorVariant::PaperMinimal => "PaperMinimal",
            GeneratorVariant::PlusFG => "PlusFG",
            GeneratorVariant::PlusMuFNuG => "PlusMuFNuG",
            GeneratorVariant::PlusW => "PlusW",
            GeneratorVariant::PlusFNuG => "PlusFNuG",
        }
    }

    /// Whether the variant has a generator with `q = 0`.
    pub fn has_q0_generators(self) -> bool {
        matches!(self, GeneratorVariant::PlusFG | GeneratorVariant::PlusFNuG)
    }
}

impl fmt::Display for GeneratorVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidInstance(format!("unknown generator variant `{s}`")))
    }
}

/// Bigrade `(q, l)` identifying `A_q(l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SliceKey {
    pub q: i64,
    pub l: i64,
}

impl SliceKey {
    pub fn new(q: i64, l: i64) -> Self {
        SliceKey { q, l }
    }
}

impl std::ops::Add for SliceKey {
    type Output = SliceKey;
    fn add(self, o: SliceKey) -> SliceKey {
        SliceKey::new(self.q + o.q, self.l + o.l)
    }
}

impl std::ops::Sub for SliceKey {
    type Output = SliceKey;
    fn sub(self, o: SliceKey) -> SliceKey {
        SliceKey::new(self.q - o.q, self.l - o.l)
    }
}

impl fmt::Display for SliceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.q, self.l)
    }
}

/// One generator of the ideal with its bigrade.
#[derive(Clone, Debug)]
pub struct Generator<F: Field> {
    pub label: String,
    pub key: SliceKey,
    pub poly: Poly<F>,
}

/// Input echo embedded in every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub n: usize,
    pub d: u32,
    pub e: u32,
    pub field: FieldKind,
    pub variant: GeneratorVariant,
    pub seed: Option<u64>,
}

/// A pair `(F, G)` in `P^n` together with a generator variant; the unit of
/// computation. Quotient pieces are memoised per instance.
pub struct RingInstance<F: Field> {
    field: F,
    n: usize,
    d: u32,
    e: u32,
    f: Poly<F>,
    g: Poly<F>,
    variant: GeneratorVariant,
    seed: Option<u64>,
    degree_cap: u32,
    generators: Vec<Generator<F>>,
    memo: RwLock<BTreeMap<SliceKey, Arc<QuotientPiece<F>>>>,
}

impl<F: Field> Clone for RingInstance<F> {
    fn clone(&self) -> Self {
        Self::assemble(
            self.field.clone(),
            self.n,
            self.d,
            self.e,
            self.f.clone(),
            self.g.clone(),
            self.variant,
            self.seed,
            self.degree_cap,
        )
    }
}

impl<F: Field> fmt::Debug for RingInstance<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingInstance")
            .field("n", &self.n)
            .field("d", &self.d)
            .field("e", &self.e)
            .field("field", &self.field.kind())
            .field("variant", &self.variant)
            .field("seed", &self.seed)
            .field("F", &self.f)
            .field("G", &self.g)
            .finish()
    }
}

impl<F: Field> RingInstance<F> {
    /// Validates degrees and homogeneity. Smoothness and transversality are
    /// not checked here; see the calibration certificate in `oracles`.
    pub fn new(field: F, n: usize, f: Poly<F>, g: Poly<F>, variant: GeneratorVariant) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInstance(format!("need n >= 2, got {n}")));
        }
        for (name, p) in [("F", &f), ("G", &g)] {
            if p.nvars() != n + 1 {
                return Err(Error::InvalidInstance(format!(
                    "{name} has {} variables, expected {}",
                    p.nvars(),
                    n + 1
                )));
            }
        }
        let d = f
            .homogeneous_degree()
            .ok_or_else(|| Error::InvalidInstance("F must be nonzero and homogeneous".into()))?;
        let e = g
            .homogeneous_degree()
            .ok_or_else(|| Error::InvalidInstance("G must be nonzero and homogeneous".into()))?;
        if d == 0 || e == 0 {
            return Err(Error::InvalidInstance("F and G must have positive degree".into()));
        }
        Ok(Self::assemble(field, n, d, e, f, g, variant, None, DEFAULT_DEGREE_CAP))
    }

    /// Random integer coefficients from [`GENERIC_COEFF_RANGE`], reproducible
    /// from `seed`.
    pub fn generic(field: F, n: usize, d: u32, e: u32, variant: GeneratorVariant, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |deg: u32| {
            let terms: Vec<_> = monomial_basis(n + 1, deg as i64)
                .into_iter()
                .map(|m| (m, field.from_i64(rng.gen_range(GENERIC_COEFF_RANGE))))
                .collect();
            Poly::from_terms(field.clone(), n + 1, terms)
        };
        let f = draw(d);
        let g = draw(e);
        let mut inst = Self::new(field.clone(), n, f, g, variant)?;
        inst.seed = Some(seed);
        Ok(inst)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        field: F,
        n: usize,
        d: u32,
        e: u32,
        f: Poly<F>,
        g: Poly<F>,
        variant: GeneratorVariant,
        seed: Option<u64>,
        degree_cap: u32,
    ) -> Self {
        let mut inst = RingInstance {
            field,
            n,
            d,
            e,
            f,
            g,
            variant,
            seed,
            degree_cap,
            generators: Vec::new(),
            memo: RwLock::new(BTreeMap::new()),
        };
        inst.generators = inst.build_generators();
        inst
    }

    pub fn with_variant(&self, variant: GeneratorVariant) -> Self {
        Self::assemble(
            self.field.clone(),
            self.n,
            self.d,
            self.e,
            self.f.clone(),
            self.g.clone(),
            variant,
            self.seed,
            self.degree_cap,
        )
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = cap;
        self.memo = RwLock::new(BTreeMap::new());
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    /// The same pair with coefficients reduced modulo `p`.
    pub fn to_prime(&self, p: u64) -> Result<RingInstance<PrimeField>> {
        let fp = PrimeField::new(p)?;
        let f = Poly::from_records(fp, self.n + 1, &self.f.to_records())?;
        let g = Poly::from_records(fp, self.n + 1, &self.g.to_records())?;
        if f.homogeneous_degree() != Some(self.d) || g.homogeneous_degree() != Some(self.e) {
            return Err(Error::InvalidInstance(format!("F or G vanishes modulo {p}")));
        }
        Ok(RingInstance::assemble(fp, self.n, self.d, self.e, f, g, self.variant, self.seed, self.degree_cap))
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn f(&self) -> &Poly<F> {
        &self.f
    }
    pub fn g(&self) -> &Poly<F> {
        &self.g
    }
    pub fn variant(&self) -> GeneratorVariant {
        self.variant
    }
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }
    pub fn generators(&self) -> &[Generator<F>] {
        &self.generators
    }

    pub fn echo(&self) -> InstanceEcho {
        InstanceEcho {
            n: self.n,
            d: self.d,
            e: self.e,
            field: self.field.kind(),
            variant: self.variant,
            seed: self.seed,
        }
    }

    pub fn delta_min(&self) -> i64 {
        self.d.min(self.e) as i64
    }

    pub fn sigma(&self) -> i64 {
        criteria::sigma(self.n as i64, self.d as i64, self.e as i64)
    }

    pub fn duality_window(&self) -> (i64, i64) {
        criteria::duality_window(self.n as i64, self.d as i64, self.e as i64)
    }

    /// Number of variables of `A`: `X_0..X_n, mu, nu`.
    pub fn ambient_vars(&self) -> usize {
        self.n + 3
    }

    fn mu(&self) -> usize {
        self.n + 1
    }

    fn nu(&self) -> usize {
        self.n + 2
    }

    /// Lifts a polynomial in `X_0..X_n` into `A`, multiplied by `mu^a nu^b`.
    pub fn lift(&self, p: &Poly<F>, a: u32, b: u32) -> Poly<F> {
        let positions: Vec<usize> = (0..=self.n).collect();
        let mut w = vec![0; self.ambient_vars()];
        w[self.mu()] = a;
        w[self.nu()] = b;
        p.embed(self.ambient_vars(), &positions).mul_monomial(&Monomial::new(w))
    }

    /// Bigrade of a monomial of `A`.
    pub fn monomial_bigrade(&self, m: &Monomial) -> SliceKey {
        let a = m.exps()[self.mu()] as i64;
        let b = m.exps()[self.nu()] as i64;
        let x = m.degree_in(0..self.n + 1) as i64;
        SliceKey::new(a + b, x - a * self.d as i64 - b * self.e as i64)
    }

    /// Common bigrade of all terms, `None` for zero or mixed bigrades.
    pub fn bigrade_of(&self, p: &Poly<F>) -> Option<SliceKey> {
        let mut keys = p.terms().map(|(m, _)| self.monomial_bigrade(m));
        let first = keys.next()?;
        keys.all(|k| k == first).then_some(first)
    }

    fn build_generators(&self) -> Vec<Generator<F>> {
        let mut gens = Vec::new();
        for k in 0..=self.n {
            let omega = self
                .lift(&self.f.partial_derivative(k), 1, 0)
                .add(&self.lift(&self.g.partial_derivative(k), 0, 1));
            gens.push(Generator { label: format!("omega_{k}"), key: SliceKey::new(1, -1), poly: omega });
        }
        let (d, e) = (self.d as i64, self.e as i64);
        let f0 = || Generator { label: "F".into(), key: SliceKey::new(0, d), poly: self.lift(&self.f, 0, 0) };
        let nu_g = || Generator { label: "nu*G".into(), key: SliceKey::new(1, 0), poly: self.lift(&self.g, 0, 1) };
        match self.variant {
            GeneratorVariant::PaperMinimal => {}
            GeneratorVariant::PlusFG => {
                gens.push(f0());
                gens.push(Generator { label: "G".into(), key: SliceKey::new(0, e), poly: self.lift(&self.g, 0, 0) });
            }
            GeneratorVariant::PlusMuFNuG => {
                gens.push(Generator { label: "mu*F".into(), key: SliceKey::new(1, 0), poly: self.lift(&self.f, 1, 0) });
                gens.push(nu_g());
            }
            GeneratorVariant::PlusW => {
                let w = self.lift(&self.f, 1, 0).add(&self.lift(&self.g, 0, 1));
                gens.push(Generator { label: "mu*F+nu*G".into(), key: SliceKey::new(1, 0), poly: w });
            }
            GeneratorVariant::PlusFNuG => {
                gens.push(f0());
                gens.push(nu_g());
            }
        }
        for g in &gens {
            debug_assert!(g.poly.is_zero() || self.bigrade_of(&g.poly) == Some(g.key), "{} bigrade", g.label);
        }
        gens
    }

    /// `dim A_q(l) = sum_{a+b=q} C(ad+be+l+n, n)`.
    pub fn slice_dimension(&self, key: SliceKey) -> usize {
        if key.q < 0 {
            return 0;
        }
        (0..=key.q)
            .map(|a| {
                let deg = a * self.d as i64 + (key.q - a) * self.e as i64 + key.l;
                if deg < 0 {
                    0
                } else {
                    binomial(deg as u64 + self.n as u64, self.n as u64) as usize
                }
            })
            .sum()
    }

    fn check_cap(&self, key: SliceKey) -> Result<()> {
        if key.q < 0 {
            return Ok(());
        }
        let top = key.q * self.d.max(self.e) as i64 + key.l;
        if top > self.degree_cap as i64 {
            return Err(Error::DegreeCap { degree: top, cap: self.degree_cap });
        }
        Ok(())
    }

    /// Monomial basis of `A_q(l)`: blocks by decreasing `mu`-power, graded-lex
    /// descending inside each block.
    pub fn slice_basis(&self, key: SliceKey) -> Result<Vec<Monomial>> {
        if key.q < 0 {
            return Ok(Vec::new());
        }
        self.check_cap(key)?;
        let nv = self.ambient_vars();
        let mut out = Vec::new();
        for a in (0..=key.q).rev() {
            let b = key.q - a;
            let deg = a * self.d as i64 + b * self.e as i64 + key.l;
            let mut w = vec![0u32; nv];
            w[self.mu()] = a as u32;
            w[self.nu()] = b as u32;
            let weight = Monomial::new(w);
            for m in monomial_basis(self.n + 1, deg) {
                let mut e = m.exps().to_vec();
                e.extend([0, 0]);
                out.push(Monomial::new(e).mul(&weight));
            }
        }
        Ok(out)
    }

    fn ideal_columns(&self, key: SliceKey, index: &HashMap<Monomial, usize>, width: usize) -> Result<Vec<Vec<F::Elem>>> {
        let mut cols = Vec::new();
        for g in &self.generators {
            for m in self.slice_basis(key - g.key)? {
                let mut col = vec![self.field.zero(); width];
                for (gm, c) in g.poly.terms() {
                    let i = index[&gm.mul(&m)];
                    col[i] = self.field.add(&col[i], c);
                }
                cols.push(col);
            }
        }
        Ok(cols)
    }

    /// Columns are coordinates, in the basis of `A_q(l)`, of `g * m` for every
    /// generator `g` and every monomial `m` of complementary bigrade.
    pub fn ideal_slice_matrix(&self, key: SliceKey) -> Result<Matrix<F>> {
        let basis = self.slice_basis(key)?;
        let index = index_of(&basis);
        let cols = self.ideal_columns(key, &index, basis.len())?;
        Ok(Matrix::from_columns(self.field.clone(), basis.len(), &cols))
    }

    /// The quotient `B_q(l)`, computed once per key.
    pub fn quotient_piece(&self, key: SliceKey) -> Result<Arc<QuotientPiece<F>>> {
        if let Some(p) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(Arc::clone(p));
        }
        let basis = self.slice_basis(key)?;
        let index = index_of(&basis);
        let mut echelon = Echelon::new(self.field.clone(), basis.len());
        for col in self.ideal_columns(key, &index, basis.len())? {
            if echelon.rank() == basis.len() {
                break;
            }
            echelon.insert(col);
        }
        let free = echelon.free_columns();
        let representatives = free.iter().map(|&i| basis[i].clone()).collect();
        let piece = Arc::new(QuotientPiece { key, field: self.field.clone(), basis, index, echelon, free, representatives });
        let mut memo = self.memo.write().expect("memo lock");
        Ok(Arc::clone(memo.entry(key).or_insert(piece)))
    }

    pub fn quotient_dim(&self, key: SliceKey) -> Result<usize> {
        Ok(self.quotient_piece(key)?.dim())
    }

    /// Coordinates of the class of `element` in `B_q(l)`.
    pub fn reduce(&self, element: &Poly<F>, key: SliceKey) -> Result<Vec<F::Elem>> {
        self.quotient_piece(key)?.coords_of(element, |m| self.monomial_bigrade(m))
    }

    pub fn class_of(&self, element: &Poly<F>, key: SliceKey) -> Result<Class<F>> {
        Ok(Class { key, coords: self.reduce(element, key)? })
    }

    /// Representative polynomial of a class.
    pub fn lift_class(&self, x: &Class<F>) -> Result<Poly<F>> {
        let piece = self.quotient_piece(x.key)?;
        if x.coords.len() != piece.dim() {
            return Err(Error::DimensionMismatch { expected: piece.dim(), found: x.coords.len() });
        }
        Ok(piece.lift(&x.coords, self.ambient_vars()))
    }

    /// Product of classes, reduced in the piece of summed bigrade.
    pub fn multiply(&self, x: &Class<F>, y: &Class<F>) -> Result<Class<F>> {
        let px = self.lift_class(x)?;
        let py = self.lift_class(y)?;
        self.class_of(&px.mul(&py), x.key + y.key)
    }

    /// Matrix of `y -> x*y` from `B_{key_y}` to `B_{key_x + key_y}` where `x`
    /// is the `i`-th representative of `B_{key_x}`.
    fn left_mult_matrix(
        &self,
        x_rep: &Monomial,
        source: &QuotientPiece<F>,
        target: &QuotientPiece<F>,
    ) -> Vec<Vec<F::Elem>> {
        // columns indexed by source basis, rows by target basis
        let mut m = vec![vec![self.field.zero(); source.dim()]; target.dim()];
        for (j, y) in source.representatives.iter().enumerate() {
            let v = target.reduce_monomial(&x_rep.mul(y));
            for (i, c) in v.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        m
    }

    /// Perfection of `B_q(l) x B_{n-1-q}(Sigma-l) -> B_{n-1}(Sigma)`.
    pub fn pairing_report(&self, q: i64, l: i64) -> Result<PairingReport> {
        let sigma = self.sigma();
        let (lo, hi) = self.duality_window();
        let top = self.n as i64 - 1;
        let mut findings = Vec::new();
        let in_window = lo <= l && l <= hi && 0 <= q && q <= top;
        if !in_window {
            findings.push(format!(
                "warning: (q, l) = ({q}, {l}) outside 0 <= q <= {top}, {lo} <= l <= {hi}"
            ));
        }
        let left = self.quotient_piece(SliceKey::new(q, l))?;
        let right = self.quotient_piece(SliceKey::new(top - q, sigma - l))?;
        let socle = self.quotient_piece(SliceKey::new(top, sigma))?;
        let mut report = PairingReport {
            echo: self.echo(),
            q,
            l,
            sigma,
            in_window,
            left_dim: left.dim(),
            right_dim: right.dim(),
            socle_dim: socle.dim(),
            matrix: Vec::new(),
            rank: 0,
            perfect: false,
            findings,
        };
        if socle.dim() != 1 {
            report.findings.push(format!(
                "socle B_{top}({sigma}) has dimension {} (expected 1); pairing not evaluated",
                socle.dim()
            ));
            return Ok(report);
        }
        let rows: Vec<Vec<F::Elem>> = left
            .representatives
            .iter()
            .map(|x| {
                right
                    .representatives
                    .iter()
                    .map(|y| socle.reduce_monomial(&x.mul(y)).swap_remove(0))
                    .collect()
            })
            .collect();
        let matrix = Matrix::from_rows(self.field.clone(), right.dim(), rows);
        report.rank = matrix.rank();
        report.matrix = matrix.format_rows();
        report.perfect = report.rank == left.dim() && report.rank == right.dim();
        Ok(report)
    }

    /// `dim B_q(d+e-n-1+l)` for `q = 0..n-1`.
    pub fn hodge_numbers(&self, l: i64) -> Result<Vec<usize>> {
        if l < 0 {
            return Err(Error::Contract(format!("hodge_numbers needs l >= 0, got {l}")));
        }
        let twist = self.d as i64 + self.e as i64 - self.n as i64 - 1 + l;
        (0..self.n as i64).map(|q| self.quotient_dim(SliceKey::new(q, twist))).collect()
    }

    /// Kernel dimension of `B_p(l) -> Hom(B_{p'}(l'), B_{p+p'}(l+l'))`.
    pub fn mult_map_kernel(&self, p: i64, l: i64, p2: i64, l2: i64) -> Result<usize> {
        let src = self.quotient_piece(SliceKey::new(p, l))?;
        if src.dim() == 0 {
            return Ok(0);
        }
        let other = self.quotient_piece(SliceKey::new(p2, l2))?;
        let target = self.quotient_piece(SliceKey::new(p + p2, l + l2))?;
        let flat = other.dim() * target.dim();
        if flat == 0 {
            return Ok(src.dim());
        }
        // one column per basis element of B_p(l), flattened Hom matrix
        let cols: Vec<Vec<F::Elem>> = src
            .representatives
            .iter()
            .map(|x| self.left_mult_matrix(x, &other, &target).into_iter().flatten().collect())
            .collect();
        let m = Matrix::from_columns(self.field.clone(), flat, &cols);
        Ok(src.dim() - m.rank())
    }
}

fn index_of(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()
}

/// `B_q(l)` with a pivot-complement monomial basis.
#[derive(Debug)]
pub struct QuotientPiece<F: Field> {
    key: SliceKey,
    field: F,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    echelon: Echelon<F>,
    free: Vec<usize>,
    representatives: Vec<Monomial>,
}

impl<F: Field> QuotientPiece<F> {
    pub fn key(&self) -> SliceKey {
        self.key
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    /// Rank of the ideal slice.
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn representatives(&self) -> &[Monomial] {
        &self.representatives
    }

    pub fn ambient_basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Coordinates of the class of an ambient vector.
    pub fn reduce_vector(&self, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
        self.echelon.reduce(&mut v);
        self.free.iter().map(|&i| v[i].clone()).collect()
    }

    pub fn reduce_monomial(&self, m: &Monomial) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.basis.len()];
        v[self.index[m]] = self.field.one();
        self.reduce_vector(v)
    }

    /// The reducer as an explicit `dim x ambient_dim` matrix.
    pub fn reducer_matrix(&self) -> Matrix<F> {
        let cols: Vec<Vec<F::Elem>> = self.basis.iter().map(|m| self.reduce_monomial(m)).collect();
        Matrix::from_columns(self.field.clone(), self.dim(), &cols)
    }

    fn coords_of(&self, p: &Poly<F>, bigrade: impl Fn(&Monomial) -> SliceKey) -> Result<Vec<F::Elem>> {
        let mut v = vec![self.field.zero(); self.basis.len()];
        for (m, c) in p.terms() {
            match self.index.get(m) {
                Some(&i) => v[i] = c.clone(),
                None => {
                    return Err(Error::BigradeMismatch { expected: self.key, found: Some(bigrade(m)) });
                }
            }
        }
        Ok(self.reduce_vector(v))
    }

    fn lift(&self, coords: &[F::Elem], nvars: usize) -> Poly<F> {
        Poly::from_terms(
            self.field.clone(),
            nvars,
            self.representatives.iter().cloned().zip(coords.iter().cloned()),
        )
    }
}

/// An element of some `B_q(l)` in representative coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class<F: Field> {
    pub key: SliceKey,
    pub coords: Vec<F::Elem>,
}

impl<F: Field> Class<F> {
    pub fn is_zero(&self, field: &F) -> bool {
        self.coords.iter().all(|c| field.is_zero(c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    pub echo: InstanceEcho,
    pub q: i64,
    pub l: i64,
    pub sigma: i64,
    pub in_window: bool,
    pub left_dim: usize,
    pub right_dim: usize,
    pub socle_dim: usize,
    pub matrix: Vec<Vec<String>>,
    pub rank: usize,
    pub perfect: bool,
    pub findings: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn inst(variant: GeneratorVariant) -> RingInstance<Rationals> {
        RingInstance::generic(Rationals, 2, 3, 1, variant, 1).unwrap()
    }

    #[test]
    fn slice_dimensions() {
        let r = inst(GeneratorVariant::PaperMinimal);
        assert_eq!(r.slice_dimension(SliceKey::new(1, 1)), 21);
        assert_eq!(r.slice_dimension(SliceKey::new(-1, 5)), 0);
        assert_eq!(r.slice_dimension(SliceKey::new(0, 1)), 3);
        assert_eq!(r.slice_basis(SliceKey::new(1, 1)).unwrap().len(), 21);
    }

    #[test]
    fn ideal_slice_column_counts() {
        let r = inst(GeneratorVariant::PaperMinimal);
        assert_eq!(r.ideal_slice_matrix(SliceKey::new(0, 4)).unwrap().ncols(), 0);
        let m = r.ideal_slice_matrix(SliceKey::new(1, 1)).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (21, 18));
    }

    #[test]
    fn ideal_columns_are_homogeneous() {
        for v in GeneratorVariant::ALL {
            let r = inst(v);
            let key = SliceKey::new(1, 1);
            let basis = r.slice_basis(key).unwrap();
            let m = r.ideal_slice_matrix(key).unwrap();
            for j in 0..m.ncols() {
                let col = m.column(j);
                let p = Poly::from_terms(Rationals, r.ambient_vars(), basis.iter().cloned().zip(col));
                assert!(p.is_zero() || r.bigrade_of(&p) == Some(key));
            }
        }
    }

    #[test]
    fn generator_bigrades() {
        for v in GeneratorVariant::ALL {
            let r = inst(v);
            for g in r.generators() {
                assert_eq!(r.bigrade_of(&g.poly), Some(g.key), "{v} {}", g.label);
            }
        }
    }

    #[test]
    fn quotient_dims_on_plane_cubic() {
        let r = inst(GeneratorVariant::PaperMinimal);
        assert_eq!(r.quotient_dim(SliceKey::new(0, 1)).unwrap(), 3);
        assert_eq!(r.quotient_dim(SliceKey::new(-2, 1)).unwrap(), 0);
        assert!(r.quotient_dim(SliceKey::new(1, 1)).unwrap() >= 3);
        let c = inst(GeneratorVariant::PlusFNuG);
        assert_eq!(c.quotient_dim(SliceKey::new(1, 1)).unwrap(), 1);
        assert_eq!(c.hodge_numbers(0).unwrap(), vec![3, 1]);
    }

    #[test]
    fn dimension_formula_holds() {
        let r = inst(GeneratorVariant::PlusFNuG);
        for q in 0..3 {
            for l in -2..4 {
                let key = SliceKey::new(q, l);
                let piece = r.quotient_piece(key).unwrap();
                let rank = r.ideal_slice_matrix(key).unwrap().rank();
                assert_eq!(piece.dim(), r.slice_dimension(key) - rank);
                assert_eq!(piece.rank(), rank);
            }
        }
    }

    #[test]
    fn reducer_properties() {
        let r = inst(GeneratorVariant::PlusFNuG);
        let key = SliceKey::new(1, 0);
        let piece = r.quotient_piece(key).unwrap();
        // representatives map to unit vectors
        for (i, m) in piece.representatives().iter().enumerate() {
            let v = piece.reduce_monomial(m);
            for (j, c) in v.iter().enumerate() {
                assert_eq!(*c, Rationals.from_i64((i == j) as i64));
            }
        }
        // ideal columns are annihilated
        let red = piece.reducer_matrix();
        let m = r.ideal_slice_matrix(key).unwrap();
        for j in 0..m.ncols() {
            assert!(red.mul_vec(&m.column(j)).iter().all(|c| Rationals.is_zero(c)));
        }
        // omega_0 * m reduces to zero; adding it to a representative does nothing
        let omega = &r.generators()[0].poly;
        for m in r.slice_basis(key - SliceKey::new(1, -1)).unwrap() {
            let j = omega.mul_monomial(&m);
            assert!(r.reduce(&j, key).unwrap().iter().all(|c| Rationals.is_zero(c)));
            let rep = Poly::monomial(Rationals, piece.representatives()[0].clone(), Rationals.one());
            assert_eq!(r.reduce(&rep.add(&j), key).unwrap(), r.reduce(&rep, key).unwrap());
        }
    }

    #[test]
    fn reduce_rejects_wrong_bigrade() {
        let r = inst(GeneratorVariant::PlusFNuG);
        let x0 = r.lift(&Poly::var(Rationals, 3, 0), 0, 0);
        assert!(matches!(r.reduce(&x0, SliceKey::new(0, 2)), Err(Error::BigradeMismatch { .. })));
    }

    #[test]
    fn unit_and_zero_products() {
        let r = inst(GeneratorVariant::PlusFNuG);
        let one = r.class_of(&Poly::one(Rationals, r.ambient_vars()), SliceKey::new(0, 0)).unwrap();
        let y = Class::<Rationals> { key: SliceKey::new(1, 0), coords: vec![Rationals.from_i64(2), Rationals.from_i64(-1), Rationals.from_i64(5)] };
        assert_eq!(r.multiply(&one, &y).unwrap(), y);
        let zero = r.class_of(&r.generators()[1].poly, SliceKey::new(1, -1)).unwrap();
        assert!(zero.is_zero(&Rationals));
        let p = r.multiply(&zero, &y).unwrap();
        assert_eq!(p.key, SliceKey::new(2, -1));
        assert!(p.is_zero(&Rationals));
    }

    #[test]
    fn pairing_on_plane_cubic() {
        let r = inst(GeneratorVariant::PlusFNuG);
        let rep = r.pairing_report(0, 1).unwrap();
        assert_eq!((rep.left_dim, rep.right_dim, rep.socle_dim, rep.rank), (3, 3, 1, 3));
        assert!(rep.perfect && rep.in_window);
        let bad = inst(GeneratorVariant::PaperMinimal).pairing_report(0, 1).unwrap();
        assert!(bad.socle_dim >= 3 && !bad.perfect);
        assert!(bad.findings.iter().any(|f| f.contains("socle")));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let r = inst(GeneratorVariant::PlusFNuG).with_degree_cap(5);
        assert!(matches!(r.quotient_piece(SliceKey::new(2, 0)), Err(Error::DegreeCap { .. })));
        assert!(r.quotient_piece(SliceKey::new(1, 1)).is_ok());
    }

    #[test]
    fn mult_kernel_edge_cases() {
        let r = inst(GeneratorVariant::PlusFNuG);
        assert_eq!(r.mult_map_kernel(0, -1, 0, 0).unwrap(), 0);
        // B_0(1) nonzero, B_0(-1) = 0
        assert_eq!(r.mult_map_kernel(0, 1, 0, -1).unwrap(), 3);
        assert_eq!(r.mult_map_kernel(0, 1, 1, 0).unwrap(), 0);
    }

    #[test]
    fn hodge_numbers_contract() {
        assert!(inst(GeneratorVariant::PlusFNuG).hodge_numbers(-1).is_err());
    }

    #[test]
    fn rejects_bad_instances() {
        let f = Poly::var(Rationals, 3, 0);
        let g = Poly::var(Rationals, 3, 1);
        assert!(RingInstance::new(Rationals, 1, f.clone(), g.clone(), GeneratorVariant::PlusFNuG).is_err());
        let inhom = f.add(&f.mul(&g));
        assert!(RingInstance::new(Rationals, 2, inhom, g, GeneratorVariant::PlusFNuG).is_err());
    }
}
