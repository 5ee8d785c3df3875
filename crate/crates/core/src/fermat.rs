//! The Fermat cubic threefold `X = {z_0^3 + ... + z_4^3 = 0}` in `P^4`.
//!
//! Lines through the Eckardt point `p = [1:-1:0:0:0]` rule the cone
//! `X ∩ T_pX`. For such a line we compute the obstruction functional on
//! quadrics, the twisted normal sections, the residual conic cut by a plane
//! through the line, and the two conditions of the non-triviality
//! certificate. Everything is exact over `Q(i)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, GaussRat, GaussianRationals};
use crate::linalg::{Echelon, Matrix};
use crate::polys::{Monomial, Poly};

const K: GaussianRationals = GaussianRationals;

/// A point or direction of `Q(i)^5`.
pub type Point = Vec<GaussRat>;

/// Coefficients `(c_{u^2}, c_{uv}, c_{v^2})` of a binary quadric.
pub type BinaryQuadric = [GaussRat; 3];

pub const BINARY_LABELS: [&str; 3] = ["u^2", "uv", "v^2"];

fn g(re: i64, im: i64) -> GaussRat {
    GaussRat::from_ints(re, im)
}

pub fn point(coords: &[(i64, i64)]) -> Point {
    coords.iter().map(|&(re, im)| g(re, im)).collect()
}

pub fn fmt(x: &GaussRat) -> String {
    K.format(x)
}

pub fn fmt_point(p: &[GaussRat]) -> String {
    format!("[{}]", p.iter().map(fmt).collect::<Vec<_>>().join(":"))
}

fn fmt_vector(p: &[GaussRat]) -> String {
    format!("({})", p.iter().map(fmt).collect::<Vec<_>>().join(", "))
}

fn dot(a: &[GaussRat], b: &[GaussRat]) -> GaussRat {
    a.iter().zip(b).fold(K.zero(), |acc, (x, y)| K.add(&acc, &K.mul(x, y)))
}

fn rank(vectors: &[&[GaussRat]]) -> usize {
    let mut e = Echelon::new(K, vectors.first().map_or(0, |v| v.len()));
    for v in vectors {
        e.insert(v.to_vec());
    }
    e.rank()
}

/// Scales so that the first nonzero coordinate is one.
pub fn normalize(p: &[GaussRat]) -> Point {
    match p.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = K.inv(lead).expect("nonzero");
            p.iter().map(|x| K.mul(x, &inv)).collect()
        }
        None => p.to_vec(),
    }
}

/// `z_0^3 + ... + z_4^3`.
pub fn fermat_cubic() -> Poly<GaussianRationals> {
    (0..5).fold(Poly::zero(K, 5), |acc, i| acc.add(&Poly::var(K, 5, i).pow(3)))
}

pub fn eckardt_point() -> Point {
    point(&[(1, 0), (-1, 0), (0, 0), (0, 0), (0, 0)])
}

/// Gradient of the Fermat cubic, `3 z_i^2`.
pub fn cubic_gradient(p: &[GaussRat]) -> Point {
    p.iter().map(|x| K.mul(&g(3, 0), &K.mul(x, x))).collect()
}

/// The line through `p` and `[0:0:a:b:c]`, parametrized as
/// `(u, -u, av, bv, cv)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeLine {
    base: [GaussRat; 3],
}

pub fn cone_line(a: GaussRat, b: GaussRat, c: GaussRat) -> Result<ConeLine> {
    let base = [a, b, c];
    if base.iter().all(|x| x.is_zero()) {
        return Err(Error::NotOnCurve("(0, 0, 0) is not a projective point".into()));
    }
    let cubic = base.iter().fold(K.zero(), |acc, x| K.add(&acc, &K.pow(x, 3)));
    if !cubic.is_zero() {
        return Err(Error::NotOnCurve(format!(
            "a^3 + b^3 + c^3 = {} for (a, b, c) = {}",
            fmt(&cubic),
            fmt_vector(&base)
        )));
    }
    Ok(ConeLine { base })
}

impl ConeLine {
    pub fn base(&self) -> &[GaussRat; 3] {
        &self.base
    }

    /// `[0:0:a:b:c]`.
    pub fn base_point(&self) -> Point {
        let mut p = vec![K.zero(), K.zero()];
        p.extend(self.base.iter().cloned());
        p
    }

    /// Whether the linear relation `a + b + c = 0` also holds. It is not the
    /// membership condition; the cubic one is.
    pub fn linear_relation_holds(&self) -> bool {
        self.base.iter().fold(K.zero(), |acc, x| K.add(&acc, x)).is_zero()
    }

    /// The coordinates of `phi` as linear forms in `(u, v)`.
    pub fn parametrization(&self) -> Vec<Poly<GaussianRationals>> {
        let u = Poly::var(K, 2, 0);
        let v = Poly::var(K, 2, 1);
        let mut out = vec![u.clone(), u.neg()];
        out.extend(self.base.iter().map(|c| v.scale(c)));
        out
    }

    pub fn at(&self, u: &GaussRat, v: &GaussRat) -> Point {
        let mut p = vec![u.clone(), K.neg(u)];
        p.extend(self.base.iter().map(|c| K.mul(c, v)));
        p
    }

    /// `F o phi`, which vanishes identically for a line on `X`.
    pub fn cubic_restriction(&self) -> Poly<GaussianRationals> {
        fermat_cubic().compose(&self.parametrization()).expect("five images")
    }
}

/// A quadric `sum_{i <= j} q_ij z_i z_j` in five variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadric(Poly<GaussianRationals>);

fn quad_monomial(i: usize, j: usize) -> Monomial {
    let mut e = vec![0; 5];
    e[i] += 1;
    e[j] += 1;
    Monomial::new(e)
}

/// Index pairs `i <= j`, row by row.
pub fn quadric_pairs() -> Vec<(usize, usize)> {
    (0..5).flat_map(|i| (i..5).map(move |j| (i, j))).collect()
}

impl Quadric {
    pub fn zero() -> Self {
        Quadric(Poly::zero(K, 5))
    }

    pub fn from_coeffs(entries: &[((usize, usize), GaussRat)]) -> Self {
        let mut p = Poly::zero(K, 5);
        for ((i, j), c) in entries {
            p.add_term(quad_monomial(*i, *j), c.clone());
        }
        Quadric(p)
    }

    pub fn monomial(i: usize, j: usize) -> Self {
        Self::from_coeffs(&[((i, j), K.one())])
    }

    pub fn coeff(&self, i: usize, j: usize) -> GaussRat {
        self.0.coeff(&quad_monomial(i, j))
    }

    pub fn poly(&self) -> &Poly<GaussianRationals> {
        &self.0
    }

    pub fn add(&self, other: &Quadric) -> Quadric {
        Quadric(self.0.add(&other.0))
    }

    pub fn scale(&self, c: &GaussRat) -> Quadric {
        Quadric(self.0.scale(c))
    }

    /// Class in the degree-2 piece of `C[z]/(dF)`. The partials are
    /// `3 z_i^2`, so this drops the squares.
    pub fn modulo_squares(&self) -> Quadric {
        Quadric(Poly::from_terms(
            K,
            5,
            self.0.terms().filter(|(m, _)| m.is_squarefree()).map(|(m, c)| (m.clone(), c.clone())),
        ))
    }

    /// The ten squarefree quadrics `z_i z_j`, `i < j`, spanning `R_2`.
    pub fn r2_basis() -> Vec<Quadric> {
        quadric_pairs().into_iter().filter(|(i, j)| i < j).map(|(i, j)| Self::monomial(i, j)).collect()
    }
}

fn binary_coeffs(p: &Poly<GaussianRationals>) -> BinaryQuadric {
    [
        p.coeff(&Monomial::new(vec![2, 0])),
        p.coeff(&Monomial::new(vec![1, 1])),
        p.coeff(&Monomial::new(vec![0, 2])),
    ]
}

/// Coefficients of `Q o phi`.
pub fn restrict_quadric(q: &Quadric, line: &ConeLine) -> BinaryQuadric {
    binary_coeffs(&q.0.compose(&line.parametrization()).expect("five images"))
}

/// Outcome of restricting the fully generic quadric to the fully generic
/// cone line, with `q_ij`, `a`, `b`, `c` kept as indeterminates.
#[derive(Clone, Debug)]
pub struct SymbolicRestriction {
    /// Coefficients of `u^2, uv, v^2` for the quadric taken modulo squares.
    pub modulo_squares: [Poly<GaussianRationals>; 3],
    /// The same with the square coefficients `q_ii` kept.
    pub full: [Poly<GaussianRationals>; 3],
    pub expected_modulo_squares: [Poly<GaussianRationals>; 3],
    pub expected_full: [Poly<GaussianRationals>; 3],
}

impl SymbolicRestriction {
    /// One verdict per coefficient expression, modulo-squares first.
    pub fn matches(&self) -> [bool; 6] {
        let m = &self.modulo_squares;
        let f = &self.full;
        let em = &self.expected_modulo_squares;
        let ef = &self.expected_full;
        [m[0] == em[0], m[1] == em[1], m[2] == em[2], f[0] == ef[0], f[1] == ef[1], f[2] == ef[2]]
    }

    /// Variable names of the symbolic ring.
    pub fn name(i: usize) -> String {
        let pairs = quadric_pairs();
        match i {
            0..=4 => format!("z{i}"),
            5..=19 => {
                let (a, b) = pairs[i - 5];
                format!("q{a}{b}")
            }
            20 => "a".into(),
            21 => "b".into(),
            22 => "c".into(),
            23 => "u".into(),
            _ => "v".into(),
        }
    }
}

// symbolic ring layout: z_0..z_4, the fifteen q_ij, a, b, c, u, v
const SYM_VARS: usize = 25;
const SYM_A: usize = 20;
const SYM_U: usize = 23;

fn sym_var(i: usize) -> Poly<GaussianRationals> {
    Poly::var(K, SYM_VARS, i)
}

fn sym_q(i: usize, j: usize) -> Poly<GaussianRationals> {
    let idx = quadric_pairs().iter().position(|&p| p == (i.min(j), i.max(j))).expect("pair");
    sym_var(5 + idx)
}

/// Coefficient of `u^a v^b` as a polynomial in the remaining variables.
fn uv_coefficient(p: &Poly<GaussianRationals>, a: u32, b: u32) -> Poly<GaussianRationals> {
    Poly::from_terms(
        K,
        SYM_VARS,
        p.terms().filter(|(m, _)| m.exps()[SYM_U] == a && m.exps()[SYM_U + 1] == b).map(|(m, c)| {
            let mut e = m.exps().to_vec();
            e[SYM_U] = 0;
            e[SYM_U + 1] = 0;
            (Monomial::new(e), c.clone())
        }),
    )
}

/// Restricts `sum q_ij z_i z_j` along `(u, -u, av, bv, cv)` by polynomial
/// composition and compares with the closed-form expansion.
pub fn symbolic_restriction() -> SymbolicRestriction {
    let (a, b, c) = (sym_var(SYM_A), sym_var(SYM_A + 1), sym_var(SYM_A + 2));
    let (u, v) = (sym_var(SYM_U), sym_var(SYM_U + 1));
    let images: Vec<_> = (0..SYM_VARS)
        .map(|i| match i {
            0 => u.clone(),
            1 => u.neg(),
            2 => a.mul(&v),
            3 => b.mul(&v),
            4 => c.mul(&v),
            _ => sym_var(i),
        })
        .collect();
    let quadric = |squares: bool| {
        quadric_pairs()
            .into_iter()
            .filter(|(i, j)| squares || i != j)
            .fold(Poly::zero(K, SYM_VARS), |acc, (i, j)| acc.add(&sym_q(i, j).mul(&sym_var(i)).mul(&sym_var(j))))
    };
    let restrict = |squares: bool| {
        let r = quadric(squares).compose(&images).expect("arity");
        [uv_coefficient(&r, 2, 0), uv_coefficient(&r, 1, 1), uv_coefficient(&r, 0, 2)]
    };
    let q = sym_q;
    let uu = q(0, 1).neg();
    let uv = a
        .mul(&q(0, 2).sub(&q(1, 2)))
        .add(&b.mul(&q(0, 3).sub(&q(1, 3))))
        .add(&c.mul(&q(0, 4).sub(&q(1, 4))));
    let vv = a.mul(&b).mul(&q(2, 3)).add(&a.mul(&c).mul(&q(2, 4))).add(&b.mul(&c).mul(&q(3, 4)));
    let uu_full = uu.add(&q(0, 0)).add(&q(1, 1));
    let vv_full = vv
        .add(&a.pow(2).mul(&q(2, 2)))
        .add(&b.pow(2).mul(&q(3, 3)))
        .add(&c.pow(2).mul(&q(4, 4)));
    SymbolicRestriction {
        modulo_squares: restrict(false),
        full: restrict(true),
        expected_modulo_squares: [uu, uv.clone(), vv],
        expected_full: [uu_full, uv, vv_full],
    }
}

/// The span of `{z_i(phi)^2}` inside binary quadrics.
#[derive(Clone, Debug)]
pub struct GammaImage {
    pub basis: Vec<BinaryQuadric>,
    pub cokernel: Vec<&'static str>,
    echelon: Echelon<GaussianRationals>,
}

impl GammaImage {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cokernel_dim(&self) -> usize {
        self.cokernel.len()
    }

    /// Coordinates of `x` in the cokernel, ordered as [`Self::cokernel`].
    pub fn project(&self, x: &BinaryQuadric) -> Vec<GaussRat> {
        let mut v = x.to_vec();
        self.echelon.reduce(&mut v);
        let free = self.echelon.free_columns();
        free.iter().map(|&i| v[i].clone()).collect()
    }
}

/// Image of `gamma` for the base point `(a, b, c)`, which need not lie on
/// the cubic.
pub fn gamma_image_of(base: &[GaussRat; 3]) -> GammaImage {
    let mut echelon = Echelon::new(K, 3);
    let mut basis = Vec::new();
    let squares = [K.one(), K.one()].into_iter().map(|x| [x, K.zero(), K.zero()]).chain(
        base.iter().map(|c| [K.zero(), K.zero(), K.mul(c, c)]),
    );
    for sq in squares {
        if echelon.insert(sq.to_vec()) {
            basis.push(sq);
        }
    }
    let cokernel = echelon.free_columns().into_iter().map(|i| BINARY_LABELS[i]).collect();
    GammaImage { basis, cokernel, echelon }
}

pub fn gamma_image(line: &ConeLine) -> GammaImage {
    gamma_image_of(line.base())
}

/// The class of `Q|_L` in the one-dimensional cokernel, as the `uv`
/// coefficient.
pub fn obstruction_r(q: &Quadric, line: &ConeLine) -> Result<GaussRat> {
    let gamma = gamma_image(line);
    if gamma.cokernel != ["uv"] {
        return Err(Error::Contract(format!("gamma cokernel is {:?}, expected [uv]", gamma.cokernel)));
    }
    Ok(gamma.project(&restrict_quadric(q, line)).swap_remove(0))
}

/// `r` as a linear functional: its value on each monomial `z_i z_j`, `i <= j`,
/// omitting zeros.
pub fn obstruction_functional(line: &ConeLine) -> Result<Vec<((usize, usize), GaussRat)>> {
    let mut out = Vec::new();
    for (i, j) in quadric_pairs() {
        let r = obstruction_r(&Quadric::monomial(i, j), line)?;
        if !r.is_zero() {
            out.push(((i, j), r));
        }
    }
    Ok(out)
}

pub fn format_functional(terms: &[((usize, usize), GaussRat)]) -> String {
    let mut p = Poly::zero(K, 15);
    let pairs = quadric_pairs();
    for ((i, j), c) in terms {
        let idx = pairs.iter().position(|&x| x == (*i, *j)).expect("pair");
        p.add_term(Monomial::var(15, idx), c.clone());
    }
    p.format_named(|k| {
        let (i, j) = pairs[k];
        format!("q{i}{j}")
    })
}

/// Codimension of `ker r` on the ten-dimensional model of `R_2`.
pub fn obstruction_kernel_codim(line: &ConeLine) -> Result<usize> {
    let row = Quadric::r2_basis().iter().map(|q| obstruction_r(q, line)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(K, row.len(), vec![row]).rank())
}

/// The map sending constant normal directions to `sum_i 3 z_i(phi)^2 n_i`
/// and its kernel.
#[derive(Clone, Debug)]
pub struct NormalKernel {
    /// `d/dz_0 + d/dz_1`, `d/dz_2 + d/dz_3`, `d/dz_4`.
    pub directions: Vec<Point>,
    pub images: Vec<BinaryQuadric>,
    /// Kernel vectors in the coordinates of `directions`.
    pub kernel: Vec<Vec<GaussRat>>,
    /// The same kernel as directions in `Q(i)^5`.
    pub sections: Vec<Point>,
}

pub const NORMAL_LABELS: [&str; 3] = ["d/dz0+d/dz1", "d/dz2+d/dz3", "d/dz4"];

pub fn normal_kernel(line: &ConeLine) -> NormalKernel {
    let directions = vec![
        point(&[(1, 0), (1, 0), (0, 0), (0, 0), (0, 0)]),
        point(&[(0, 0), (0, 0), (1, 0), (1, 0), (0, 0)]),
        point(&[(0, 0), (0, 0), (0, 0), (0, 0), (1, 0)]),
    ];
    let phi = line.parametrization();
    let three = Poly::constant(K, 2, g(3, 0));
    let images: Vec<BinaryQuadric> = directions
        .iter()
        .map(|dir| {
            let p = phi
                .iter()
                .zip(dir)
                .filter(|(_, c)| !c.is_zero())
                .fold(Poly::zero(K, 2), |acc, (z, c)| acc.add(&three.mul(&z.pow(2)).scale(c)));
            binary_coeffs(&p)
        })
        .collect();
    let cols: Vec<Vec<GaussRat>> = images.iter().map(|b| b.to_vec()).collect();
    let kernel = Matrix::from_columns(K, 3, &cols).kernel();
    let sections = kernel
        .iter()
        .map(|k| {
            (0..5)
                .map(|i| k.iter().zip(&directions).fold(K.zero(), |acc, (c, d)| K.add(&acc, &K.mul(c, &d[i]))))
                .collect()
        })
        .collect();
    NormalKernel { directions, images, kernel, sections }
}

/// The residual conic of a plane section through the line.
#[derive(Clone, Debug)]
pub struct ResidualConic {
    /// Spanning points; the plane point is `lambda*P0 + mu*P1 + nu*P2`.
    pub plane: [Point; 3],
    /// `F` restricted to the plane.
    pub restriction: Poly<GaussianRationals>,
    /// `Q` with `F|_S = nu * Q`.
    pub conic: Poly<GaussianRationals>,
    /// Coefficients of `lambda^2, lambda*mu, mu^2` in `Q(lambda, mu, 0)`.
    pub on_line: [GaussRat; 3],
    /// Roots of `Q|_L` in plane coordinates.
    pub roots: Vec<[GaussRat; 3]>,
    /// The same roots in `P^4`, normalized.
    pub points: Vec<Point>,
}

pub const PLANE_NAMES: [&str; 3] = ["lambda", "mu", "nu"];

impl ResidualConic {
    pub fn to_plane(&self, c: &[GaussRat]) -> Point {
        (0..5)
            .map(|i| (0..3).fold(K.zero(), |acc, k| K.add(&acc, &K.mul(&c[k], &self.plane[k][i]))))
            .collect()
    }

    /// Plane coordinates of a point of `P^4` lying in the plane.
    pub fn plane_coords(&self, p: &[GaussRat]) -> Option<[GaussRat; 3]> {
        let cols = vec![self.plane[0].clone(), self.plane[1].clone(), self.plane[2].clone(), p.to_vec()];
        let kernel = Matrix::from_columns(K, 5, &cols).kernel();
        let k = kernel.into_iter().find(|k| !k[3].is_zero())?;
        let s = K.neg(&K.inv(&k[3]).expect("nonzero"));
        Some([K.mul(&k[0], &s), K.mul(&k[1], &s), K.mul(&k[2], &s)])
    }

    pub fn gradient(&self, c: &[GaussRat]) -> [GaussRat; 3] {
        let d = |i| self.conic.partial_derivative(i).eval(c).expect("three coordinates");
        [d(0), d(1), d(2)]
    }

    pub fn conic_string(&self) -> String {
        self.conic.format_named(|i| PLANE_NAMES[i].to_string())
    }

    pub fn on_line_string(&self) -> String {
        let p = Poly::from_terms(
            K,
            2,
            [(vec![2, 0], 0), (vec![1, 1], 1), (vec![0, 2], 2)]
                .into_iter()
                .map(|(e, k)| (Monomial::new(e), self.on_line[k].clone())),
        );
        p.format_named(|i| PLANE_NAMES[i].to_string())
    }
}

fn quadratic_roots(a: &GaussRat, b: &GaussRat, c: &GaussRat) -> Result<Vec<[GaussRat; 3]>> {
    let z = K.zero();
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Err(Error::Contract("the conic contains the line".into()));
    }
    if a.is_zero() {
        // mu * (b*lambda + c*mu) = 0
        let mut roots = vec![[K.one(), z.clone(), z.clone()]];
        roots.push(if b.is_zero() { [K.one(), z.clone(), z.clone()] } else { [K.neg(c), b.clone(), z.clone()] });
        return Ok(roots);
    }
    let disc = K.sub(&K.mul(b, b), &K.mul(&g(4, 0), &K.mul(a, c)));
    let root = disc
        .sqrt()
        .ok_or_else(|| Error::Contract(format!("discriminant {} has no square root in Q(i)", fmt(&disc))))?;
    let two_a = K.mul(&g(2, 0), a);
    let t = |s: &GaussRat| K.div(&K.sub(s, b), &two_a).expect("a is nonzero");
    Ok(vec![[t(&K.neg(&root)), K.one(), z.clone()], [t(&root), K.one(), z]])
}

/// Residual conic of the plane through the line and `extra`.
pub fn residual_conic(line: &ConeLine, extra: &[GaussRat]) -> Result<ResidualConic> {
    residual_conic_in_plane([eckardt_point(), line.base_point(), extra.to_vec()])
}

/// Residual conic of the plane spanned by `plane`, where `{nu = 0}` is
/// expected to be a line on `X`.
pub fn residual_conic_in_plane(plane: [Point; 3]) -> Result<ResidualConic> {
    if rank(&[&plane[0], &plane[1], &plane[2]]) != 3 {
        return Err(Error::Contract("the three points do not span a plane".into()));
    }
    let map: Vec<Vec<GaussRat>> = (0..5).map(|i| (0..3).map(|k| plane[k][i].clone()).collect()).collect();
    let restriction = fermat_cubic().substitute_linear(&map, 3)?;
    let conic = restriction.divide_by_var(2).ok_or_else(|| {
        Error::Contract(format!(
            "F restricted to the plane is not divisible by nu: {}",
            restriction.format_named(|i| PLANE_NAMES[i].to_string())
        ))
    })?;
    let on_line = [
        conic.coeff(&Monomial::new(vec![2, 0, 0])),
        conic.coeff(&Monomial::new(vec![1, 1, 0])),
        conic.coeff(&Monomial::new(vec![0, 2, 0])),
    ];
    let roots = quadratic_roots(&on_line[0], &on_line[1], &on_line[2])?;
    let mut rc = ResidualConic { plane, restriction, conic, on_line, roots, points: Vec::new() };
    rc.points = rc.roots.iter().map(|r| normalize(&rc.to_plane(r))).collect();
    Ok(rc)
}

/// Coefficient vector of a linear form, evaluated by the dot product.
pub fn evaluate_form(form: &[GaussRat], p: &[GaussRat]) -> GaussRat {
    dot(form, p)
}

pub fn form_separates(form: &[GaussRat], vanish_at: &[Point], nonzero_at: &[GaussRat]) -> bool {
    vanish_at.iter().all(|p| evaluate_form(form, p).is_zero()) && !evaluate_form(form, nonzero_at).is_zero()
}

/// A linear form vanishing at every point of `vanish_at` but not at
/// `nonzero_at`, if one exists.
pub fn linear_form_search(vanish_at: &[Point], nonzero_at: &[GaussRat]) -> Option<Point> {
    let mut e = Echelon::new(K, nonzero_at.len());
    for p in vanish_at {
        e.insert(p.clone());
    }
    e.null_space().into_iter().find(|f| !evaluate_form(f, nonzero_at).is_zero())
}

pub fn format_form(form: &[GaussRat]) -> String {
    let p = Poly::from_terms(K, form.len(), form.iter().enumerate().map(|(i, c)| (Monomial::var(form.len(), i), c.clone())));
    p.format_named(|i| format!("z{i}"))
}

/// Coordinates of `w` modulo `sub` in the basis `basis` of the quotient.
fn quotient_coords(sub: &[Point], basis: &[Point], w: &[GaussRat]) -> Option<Vec<GaussRat>> {
    let mut cols: Vec<Vec<GaussRat>> = sub.to_vec();
    cols.extend(basis.iter().cloned());
    cols.push(w.to_vec());
    let kernel = Matrix::from_columns(K, w.len(), &cols).kernel();
    let last = cols.len() - 1;
    let k = kernel.into_iter().find(|k| !k[last].is_zero())?;
    let s = K.neg(&K.inv(&k[last]).expect("nonzero"));
    Some(k[sub.len()..last].iter().map(|x| K.mul(x, &s)).collect())
}

/// Determinant of `(s, t)` in the basis `basis` of `V / span(sub)`.
pub fn wedge_determinant(sub: &[Point], basis: &[Point; 2], s: &[GaussRat], t: &[GaussRat]) -> Result<GaussRat> {
    let missing = || Error::Contract("vector outside the span of the quotient basis".into());
    let cs = quotient_coords(sub, basis, s).ok_or_else(missing)?;
    let ct = quotient_coords(sub, basis, t).ok_or_else(missing)?;
    Ok(K.sub(&K.mul(&cs[0], &ct[1]), &K.mul(&cs[1], &ct[0])))
}

#[derive(Clone, Debug)]
pub struct WedgeReport {
    pub point: Point,
    pub plane_coords: [GaussRat; 3],
    pub gradient: [GaussRat; 3],
    /// A tangent vector of the conic's affine cone, independent of the point.
    pub conic_tangent: Point,
    pub section: Point,
    /// `span(p, z)`: the affine cone over `T_point L`.
    pub line_span: Vec<Point>,
    /// Basis of `N = T_point X / T_point L`, reduced modulo `line_span`.
    pub normal_basis: [Point; 2],
    pub determinant: GaussRat,
    pub nonzero: bool,
}

/// Whether `section` and the conic tangent at `pt` span `T_pt X / T_pt L`.
pub fn wedge_check(line: &ConeLine, section: &[GaussRat], pt: &[GaussRat], conic: &ResidualConic) -> Result<WedgeReport> {
    let line_span = vec![eckardt_point(), line.base_point()];
    if pt.iter().all(|x| x.is_zero()) || rank(&[&line_span[0], &line_span[1], pt]) != 2 {
        return Err(Error::Contract(format!("{} is not on L", fmt_point(pt))));
    }
    let coords = conic
        .plane_coords(pt)
        .ok_or_else(|| Error::Contract(format!("{} is not in the plane", fmt_point(pt))))?;
    if !conic.conic.eval(&coords)?.is_zero() {
        return Err(Error::Contract(format!("{} is not on the conic", fmt_point(pt))));
    }
    let gradient = conic.gradient(&coords);
    if gradient.iter().all(|x| x.is_zero()) {
        return Err(Error::Contract(format!("conic is singular at {}", fmt_point(pt))));
    }
    let plane_tangent = Matrix::from_rows(K, 3, vec![gradient.to_vec()])
        .kernel()
        .into_iter()
        .find(|k| rank(&[k, &coords]) == 2)
        .expect("two-dimensional tangent plane");
    let conic_tangent = conic.to_plane(&plane_tangent);

    let df = cubic_gradient(pt);
    for (name, v) in [("section", section), ("conic tangent", &conic_tangent)] {
        if !dot(&df, v).is_zero() {
            return Err(Error::Contract(format!("{name} is not tangent to X at {}", fmt_point(pt))));
        }
    }
    let tx = Matrix::from_rows(K, 5, vec![df]).kernel();
    let mut along_line = Echelon::new(K, 5);
    for v in &line_span {
        along_line.insert(v.clone());
    }
    let mut quotient = Echelon::new(K, 5);
    for v in tx {
        let mut w = v;
        along_line.reduce(&mut w);
        quotient.insert(w);
    }
    if quotient.rank() != 2 {
        return Err(Error::Contract(format!("T_pX / T_pL has dimension {}", quotient.rank())));
    }
    let normal_basis = [quotient.rows()[0].clone(), quotient.rows()[1].clone()];
    let determinant = wedge_determinant(&line_span, &normal_basis, section, &conic_tangent)?;
    Ok(WedgeReport {
        point: pt.to_vec(),
        plane_coords: coords,
        gradient,
        conic_tangent,
        section: section.to_vec(),
        line_span,
        normal_basis,
        nonzero: !determinant.is_zero(),
        determinant,
    })
}

/// Values printed in the original worked example, kept verbatim and
/// checked against the derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrintedValues {
    pub p1: String,
    pub p1_on_conic: bool,
    pub p1_matches_derived: bool,
    pub form: String,
    /// The printed form against the derived points.
    pub form_separates: bool,
    pub tangent: String,
    pub tangent_in_tpx: bool,
    pub tangent_on_conic: bool,
    /// `(z_4, z_1)` component determinant against the section, as printed.
    pub determinant: String,
    pub determinant_reproduced: bool,
    /// Verdict of the quotient wedge with the printed tangent.
    pub wedge_nonzero: bool,
}

/// Everything the certificate consumes; fixtures may alter fields before
/// calling [`certify`].
#[derive(Clone, Debug)]
pub struct CertificateData {
    pub line: ConeLine,
    pub extra: Point,
    pub conic: ResidualConic,
    pub p0: Point,
    pub p1: Point,
    pub normal: NormalKernel,
}

pub fn certificate_data(line: &ConeLine, extra: &[GaussRat]) -> Result<CertificateData> {
    let conic = residual_conic(line, extra)?;
    if conic.points.len() != 2 {
        return Err(Error::Contract("expected two residual points".into()));
    }
    Ok(CertificateData {
        line: line.clone(),
        extra: extra.to_vec(),
        p0: conic.points[0].clone(),
        p1: conic.points[1].clone(),
        normal: normal_kernel(line),
        conic,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatReport {
    pub line: [String; 3],
    pub linear_relation_holds: bool,
    pub restriction_uv: String,
    pub restriction_u2: String,
    pub restriction_v2: String,
    pub r_functional: String,
    pub r_kernel_codim: usize,
    pub gamma_basis: Vec<String>,
    pub gamma_cokernel: Vec<String>,
    pub normal_images: Vec<String>,
    pub normal_kernel: Vec<String>,
    pub extra_point: String,
    pub plane_restriction: String,
    pub conic: String,
    pub conic_on_line: String,
    pub p0: String,
    pub p1: String,
    pub linear_form: Option<String>,
    pub condition1: bool,
    pub conic_tangent: Option<String>,
    pub normal_basis: Vec<String>,
    pub determinant: Option<String>,
    pub condition2: bool,
    pub certificate: bool,
    pub printed: Option<PrintedValues>,
    pub notes: Vec<String>,
}

fn binary_string(b: &BinaryQuadric) -> String {
    let p = Poly::from_terms(
        K,
        2,
        [(vec![2, 0], 0), (vec![1, 1], 1), (vec![0, 2], 2)].into_iter().map(|(e, k)| (Monomial::new(e), b[k].clone())),
    );
    p.format_named(|i| ["u", "v"][i].to_string())
}

/// Restriction of the generic quadric to this line, one string per
/// coefficient of `u^2, uv, v^2`.
fn restriction_strings(line: &ConeLine) -> [String; 3] {
    let pairs = quadric_pairs();
    let mut coeffs: [Vec<((usize, usize), GaussRat)>; 3] = Default::default();
    for &(i, j) in &pairs {
        let b = restrict_quadric(&Quadric::monomial(i, j), line);
        for k in 0..3 {
            if !b[k].is_zero() {
                coeffs[k].push(((i, j), b[k].clone()));
            }
        }
    }
    coeffs.map(|c| format_functional(&c))
}

fn printed_values(data: &CertificateData, section: Option<&Point>) -> Option<PrintedValues> {
    // only meaningful for the worked configuration
    let worked = data.line.base() == &[g(1, 0), g(-1, 0), g(0, 0)]
        && normalize(&data.extra) == point(&[(0, 0), (1, 0), (1, 0), (0, 0), (0, 0)]);
    if !worked {
        return None;
    }
    let p1 = point(&[(1, 0), (-1, 0), (0, -1), (0, -1), (0, 0)]);
    let tangent = point(&[(0, 0), (-1, 1), (0, 1), (-1, 0), (0, 0)]);
    let on_conic = |p: &Point| data.conic.plane_coords(p).is_some_and(|c| data.conic.conic.eval(&c).is_ok_and(|v| v.is_zero()));
    let tangent_on_conic = data.conic.plane_coords(&tangent).is_some_and(|t| {
        data.conic.plane_coords(&data.p0).is_some_and(|c| dot(&data.conic.gradient(&c), &t).is_zero())
    });
    let form = point(&[(1, 0), (0, 0), (0, 0), (0, 1), (0, 0)]);
    let e4 = point(&[(0, 0), (0, 0), (0, 0), (0, 0), (1, 0)]);
    let component = K.sub(&K.mul(&e4[4], &tangent[1]), &K.mul(&e4[1], &tangent[4]));
    let wedge_nonzero = section
        .and_then(|s| {
            let line_span = vec![eckardt_point(), data.line.base_point()];
            let report = wedge_check(&data.line, s, &data.p0, &data.conic).ok()?;
            wedge_determinant(&line_span, &report.normal_basis, s, &tangent).ok()
        })
        .is_some_and(|d| !d.is_zero());
    Some(PrintedValues {
        p1: fmt_point(&p1),
        p1_on_conic: on_conic(&p1),
        p1_matches_derived: p1 == data.p1,
        form: format_form(&form),
        form_separates: form_separates(&form, std::slice::from_ref(&data.p1), &data.p0),
        tangent: fmt_vector(&tangent),
        tangent_in_tpx: dot(&cubic_gradient(&data.p0), &tangent).is_zero(),
        tangent_on_conic,
        determinant: fmt(&g(-1, 1)),
        determinant_reproduced: component == g(-1, 1),
        wedge_nonzero,
    })
}

/// Runs both conditions of the certificate on prepared data.
pub fn certify(data: &CertificateData) -> Result<FermatReport> {
    let line = &data.line;
    let gamma = gamma_image(line);
    let functional = obstruction_functional(line)?;
    let [u2, uv, v2] = restriction_strings(line);

    let form = linear_form_search(std::slice::from_ref(&data.p1), &data.p0);
    let condition1 = form.is_some();

    let mut wedge = None;
    for s in &data.normal.sections {
        let w = wedge_check(line, s, &data.p0, &data.conic)?;
        let nonzero = w.nonzero;
        wedge = Some(w);
        if nonzero {
            break;
        }
    }
    let condition2 = wedge.as_ref().is_some_and(|w| w.nonzero);

    let mut notes = Vec::new();
    if !line.linear_relation_holds() {
        notes.push("a + b + c != 0: the base point satisfies only the cubic membership condition".into());
    }
    if data.normal.sections.is_empty() {
        notes.push("normal kernel is zero; condition (2) cannot hold".into());
    }
    if !condition1 {
        notes.push("no linear form separates p0 from p1".into());
    }
    let printed = printed_values(data, data.normal.sections.first());
    if let Some(p) = &printed {
        if !p.p1_matches_derived {
            notes.push(format!("printed p1 {} differs from the derived {}", p.p1, fmt_point(&data.p1)));
        }
    }

    Ok(FermatReport {
        line: line.base().clone().map(|x| fmt(&x)),
        linear_relation_holds: line.linear_relation_holds(),
        restriction_u2: u2,
        restriction_uv: uv,
        restriction_v2: v2,
        r_functional: format_functional(&functional),
        r_kernel_codim: obstruction_kernel_codim(line)?,
        gamma_basis: gamma.basis.iter().map(binary_string).collect(),
        gamma_cokernel: gamma.cokernel.iter().map(|s| s.to_string()).collect(),
        normal_images: data.normal.images.iter().map(binary_string).collect(),
        normal_kernel: data
            .normal
            .kernel
            .iter()
            .map(|k| {
                let p = Poly::from_terms(K, 3, k.iter().enumerate().map(|(i, c)| (Monomial::var(3, i), c.clone())));
                p.format_named(|i| NORMAL_LABELS[i].to_string())
            })
            .collect(),
        extra_point: fmt_point(&data.extra),
        plane_restriction: data.conic.restriction.format_named(|i| PLANE_NAMES[i].to_string()),
        conic: data.conic.conic_string(),
        conic_on_line: data.conic.on_line_string(),
        p0: fmt_point(&data.p0),
        p1: fmt_point(&data.p1),
        linear_form: form.as_deref().map(format_form),
        condition1,
        conic_tangent: wedge.as_ref().map(|w| fmt_vector(&w.conic_tangent)),
        normal_basis: wedge.as_ref().map_or(Vec::new(), |w| w.normal_basis.iter().map(|v| fmt_vector(v)).collect()),
        determinant: wedge.as_ref().map(|w| fmt(&w.determinant)),
        condition2,
        certificate: condition1 && condition2,
        printed,
        notes,
    })
}

/// Residual conic, separating form, normal section and wedge in one pass.
pub fn clemens_certificate(line: &ConeLine, extra: &[GaussRat]) -> Result<FermatReport> {
    certify(&certificate_data(line, extra)?)
}

/// The worked configuration: the line through `[0:0:1:-1:0]` and the plane
/// through `[0:1:1:0:0]`.
pub fn default_example() -> Result<FermatReport> {
    let line = cone_line(g(1, 0), g(-1, 0), g(0, 0))?;
    clemens_certificate(&line, &point(&[(0, 0), (1, 0), (1, 0), (0, 0), (0, 0)]))
}

impl FermatReport {
    /// Two-column plain-text table.
    pub fn table(&self) -> String {
        let opt = |o: &Option<String>| o.clone().unwrap_or_else(|| "-".into());
        let rows: Vec<(&str, String)> = vec![
            ("line base (a, b, c)", format!("({})", self.line.join(", "))),
            ("a + b + c = 0", self.linear_relation_holds.to_string()),
            ("Q|_L  u^2", self.restriction_u2.clone()),
            ("Q|_L  uv", self.restriction_uv.clone()),
            ("Q|_L  v^2", self.restriction_v2.clone()),
            ("r([Q])", format!("({}) [uv]", self.r_functional)),
            ("codim ker r on R_2", self.r_kernel_codim.to_string()),
            ("image of gamma", self.gamma_basis.join(", ")),
            ("cokernel of gamma", self.gamma_cokernel.join(", ")),
            ("normal images", self.normal_images.join(", ")),
            ("normal kernel", self.normal_kernel.join(", ")),
            ("extra point", self.extra_point.clone()),
            ("F|_S", self.plane_restriction.clone()),
            ("Q", self.conic.clone()),
            ("Q|_L", self.conic_on_line.clone()),
            ("p0", self.p0.clone()),
            ("p1", self.p1.clone()),
            ("linear form", opt(&self.linear_form)),
            ("condition (1)", self.condition1.to_string()),
            ("conic tangent at p0", opt(&self.conic_tangent)),
            ("basis of T_pX/T_pL", self.normal_basis.join(", ")),
            ("wedge determinant", opt(&self.determinant)),
            ("condition (2)", self.condition2.to_string()),
            ("certificate", self.certificate.to_string()),
        ];
        let mut rows = rows;
        if let Some(p) = &self.printed {
            rows.push(("printed p1", format!("{} (on conic: {})", p.p1, p.p1_on_conic)));
            rows.push(("printed form", format!("{} (separates p0 from p1: {})", p.form, p.form_separates)));
            rows.push((
                "printed tangent",
                format!("{} (in T_pX: {}, on conic: {})", p.tangent, p.tangent_in_tpx, p.tangent_on_conic),
            ));
            rows.push(("printed determinant", format!("{} (reproduced: {})", p.determinant, p.determinant_reproduced)));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out: String = rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect();
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_line() -> ConeLine {
        cone_line(g(1, 0), g(-1, 0), g(0, 0)).unwrap()
    }

    #[test]
    fn cone_line_membership() {
        assert!(worked_line().cubic_restriction().is_zero());
        assert!(cone_line(g(0, 0), g(1, 0), g(-1, 0)).is_ok());
        assert!(matches!(cone_line(g(1, 0), g(1, 0), g(0, 0)), Err(Error::NotOnCurve(_))));
        assert!(cone_line(g(0, 0), g(0, 0), g(0, 0)).is_err());
        assert_eq!(worked_line().at(&g(1, 0), &g(0, 0)), eckardt_point());
    }

    #[test]
    fn z2z3_restriction() {
        let b = restrict_quadric(&Quadric::monomial(2, 3), &worked_line());
        assert_eq!(b, [g(0, 0), g(0, 0), g(-1, 0)]);
        assert_eq!(restrict_quadric(&Quadric::zero(), &worked_line()), [g(0, 0), g(0, 0), g(0, 0)]);
    }

    #[test]
    fn gamma_cokernel_is_uv() {
        let gamma = gamma_image(&worked_line());
        assert_eq!(gamma.dim(), 2);
        assert_eq!(gamma.cokernel, vec!["uv"]);
        let degenerate = gamma_image_of(&[g(0, 0), g(0, 0), g(0, 0)]);
        assert_eq!(degenerate.dim(), 1);
    }

    #[test]
    fn z0z1_has_no_obstruction() {
        assert!(obstruction_r(&Quadric::monomial(0, 1), &worked_line()).unwrap().is_zero());
    }

    #[test]
    fn normal_images() {
        let nk = normal_kernel(&worked_line());
        assert_eq!(nk.images[0], [g(6, 0), g(0, 0), g(0, 0)]);
        assert_eq!(nk.sections, vec![point(&[(0, 0), (0, 0), (0, 0), (0, 0), (1, 0)])]);
    }

    #[test]
    fn quadratic_root_order() {
        let roots = quadratic_roots(&g(3, 0), &g(0, 0), &g(3, 0)).unwrap();
        assert_eq!(roots[0][0], g(0, -1));
        assert_eq!(roots[1][0], g(0, 1));
    }
}
