//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{parse_rational, Field};

/// Exponent vector. Ordered graded-lexicographically with the first variable
/// largest.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Total degree in the variables `range`.
    pub fn degree_in(&self, range: std::ops::Range<usize>) -> u32 {
        self.0[range].iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of exact total degree `degree` in `num_vars` variables,
/// largest first in graded-lex order. Empty for negative degree.
pub fn monomial_basis(num_vars: usize, degree: i64) -> Vec<Monomial> {
    assert!(num_vars >= 1, "monomial_basis needs at least one variable");
    if degree < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; num_vars];
    fill(&mut cur, 0, degree as u32, &mut out);
    out
}

fn fill(cur: &mut Vec<u32>, i: usize, rem: u32, out: &mut Vec<Monomial>) {
    if i + 1 == cur.len() {
        cur[i] = rem;
        out.push(Monomial(cur.clone()));
        return;
    }
    for a in (0..=rem).rev() {
        cur[i] = a;
        fill(cur, i + 1, rem - a, out);
    }
    cur[i] = 0;
}

/// `C(n, k)` as u128; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Polynomial with coefficients in `F`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_named(|i| format!("x{i}")))
    }
}

impl<F: Field> Poly<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: F, nvars: usize, c: F::Elem) -> Self {
        Self::monomial(field, Monomial::one(nvars), c)
    }

    pub fn one(field: F, nvars: usize) -> Self {
        let one = field.one();
        Self::constant(field, nvars, one)
    }

    pub fn var(field: F, nvars: usize, i: usize) -> Self {
        let one = field.one();
        Self::monomial(field, Monomial::var(nvars, i), one)
    }

    pub fn monomial(field: F, m: Monomial, c: F::Elem) -> Self {
        let mut p = Self::zero(field, m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(field: F, nvars: usize, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: F::Elem) {
        assert_eq!(m.nvars(), self.nvars, "monomial arity mismatch");
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.nvars);
        }
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), self.field.mul(x, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), self.field.mul(x, y));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.field.clone(), self.nvars);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Common total degree of all terms, `None` if inhomogeneous or zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(var < self.nvars, "variable index out of range");
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial(exps), self.field.mul(c, &self.field.from_i64(e as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let f = &self.field;
        Ok(self.terms.iter().fold(f.zero(), |acc, (m, c)| {
            let t = m
                .exps()
                .iter()
                .zip(point)
                .fold(c.clone(), |t, (&e, x)| f.mul(&t, &f.pow(x, e)));
            f.add(&acc, &t)
        }))
    }

    /// Substitutes `images[i]` for variable `i`. All images must share one
    /// arity, which becomes the arity of the result.
    pub fn compose(&self, images: &[Poly<F>]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.nvars,
            None => return Ok(self.clone()),
        };
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::DimensionMismatch { expected: target, found: bad.nvars });
        }
        // powers of each image, computed on demand
        let mut powers: Vec<Vec<Poly<F>>> =
            images.iter().map(|p| vec![Poly::one(self.field.clone(), target), p.clone()]).collect();
        let mut out = Poly::zero(self.field.clone(), target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(self.field.clone(), target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Linear change of variables: row `i` of `map` expresses old variable `i`
    /// as a linear form in `new_nvars` new variables.
    pub fn substitute_linear(&self, map: &[Vec<F::Elem>], new_nvars: usize) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: map.len() });
        }
        let mut images = Vec::with_capacity(map.len());
        for row in map {
            if row.len() != new_nvars {
                return Err(Error::DimensionMismatch { expected: new_nvars, found: row.len() });
            }
            images.push(Poly::from_terms(
                self.field.clone(),
                new_nvars,
                row.iter().enumerate().map(|(j, c)| (Monomial::var(new_nvars, j), c.clone())),
            ));
        }
        if images.is_empty() {
            return Ok(Poly { field: self.field.clone(), nvars: new_nvars, terms: self.terms.clone() });
        }
        self.compose(&images)
    }

    /// Re-embeds into `new_nvars` variables, sending variable `i` to
    /// `positions[i]`.
    pub fn embed(&self, new_nvars: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; new_nvars];
            for (i, &x) in m.exps().iter().enumerate() {
                e[positions[i]] += x;
            }
            (Monomial(e), c.clone())
        });
        Poly::from_terms(self.field.clone(), new_nvars, terms)
    }

    /// Exact division by a variable power, `None` if some term lacks it.
    pub fn divide_by_var(&self, var: usize) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.exps()[var] == 0 {
                return None;
            }
            let mut e = m.exps().to_vec();
            e[var] -= 1;
            terms.insert(Monomial(e), c.clone());
        }
        Some(Poly { field: self.field.clone(), nvars: self.nvars, terms })
    }

    /// Human-readable form with caller-chosen variable names, leading term
    /// first.
    pub fn format_named(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let vars: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { name(i) } else { format!("{}^{e}", name(i)) })
                .collect();
            let coeff = self.field.format(c);
            let (neg, magnitude) = match coeff.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, coeff),
            };
            let body = match (vars.is_empty(), magnitude.as_str()) {
                (true, _) => magnitude,
                (false, "1") => vars.join("*"),
                (false, m) if m.contains(['+', '-']) => format!("({m})*{}", vars.join("*")),
                (false, m) => format!("{m}*{}", vars.join("*")),
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push_str(&format!("-{body}")),
                (true, false) => out.push_str(&body),
                (false, true) => out.push_str(&format!(" - {body}")),
                (false, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }

    /// Serialized form: one record per term, in ascending monomial order.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let (re, im) = self.field.to_parts(c);
                TermRecord::from_parts(m.exps().to_vec(), &re, &im)
            })
            .collect()
    }

    pub fn from_records(field: F, nvars: usize, records: &[TermRecord]) -> Result<Self> {
        let mut p = Self::zero(field, nvars);
        for r in records {
            let (exps, re, im) = r.parts()?;
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: exps.len() });
            }
            let c = p.field.from_parts(&re, &im)?;
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }
}

/// `(exponents, numerator, denominator[, imaginary numerator, imaginary denominator])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermRecord {
    Real(Vec<u32>, String, String),
    Complex(Vec<u32>, String, String, String, String),
}

impl TermRecord {
    fn from_parts(exps: Vec<u32>, re: &BigRational, im: &BigRational) -> Self {
        if im.is_zero() {
            TermRecord::Real(exps, re.numer().to_string(), re.denom().to_string())
        } else {
            TermRecord::Complex(
                exps,
                re.numer().to_string(),
                re.denom().to_string(),
                im.numer().to_string(),
                im.denom().to_string(),
            )
        }
    }

    fn parts(&self) -> Result<(Vec<u32>, BigRational, BigRational)> {
        Ok(match self {
            TermRecord::Real(e, n, d) => (e.clone(), parse_rational(n, d)?, BigRational::zero()),
            TermRecord::Complex(e, n, d, a, b) => (e.clone(), parse_rational(n, d)?, parse_rational(a, b)?),
        })
    }
}

impl<F: Field> std::ops::Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Self) -> Poly<F> {
        Poly::add(self, rhs)
    }
}

impl<F: Field> std::ops::Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Self) -> Poly<F> {
        Poly::sub(self, rhs)
    }
}

impl<F: Field> std::ops::Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Self) -> Poly<F> {
        Poly::mul(self, rhs)
    }
}

impl<F: Field> std::ops::Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::neg(self)
    }
}
