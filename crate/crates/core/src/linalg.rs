//! Dense exact linear algebra.
//!
//! [`Echelon`] keeps a row space in reduced row echelon form and is built one
//! vector at a time; pivots are always the first nonzero column, so the result
//! depends only on the order of the inserted vectors. [`bareiss_rank`] is the
//! fraction-free integer route used where rational entries can be cleared.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    data: Vec<Vec<F::Elem>>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, nrows: usize, ncols: usize) -> Self {
        let z = field.zero();
        Matrix { data: vec![vec![z; ncols]; nrows], field, nrows, ncols }
    }

    pub fn from_rows(field: F, ncols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix { field, nrows: rows.len(), ncols, data: rows }
    }

    pub fn from_columns(field: F, nrows: usize, cols: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let cols: Vec<Vec<F::Elem>> = self.data.clone();
        Matrix::from_columns(self.field.clone(), self.ncols, &cols)
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.field.clone(), self.ncols);
        for r in &self.data {
            ech.insert(r.clone());
        }
        ech.rank()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let mut ech = Echelon::new(self.field.clone(), self.ncols);
        for r in &self.data {
            ech.insert(r.clone());
        }
        ech.null_space()
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.ncols);
        let f = &self.field;
        self.data
            .iter()
            .map(|r| r.iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
            .collect()
    }

    pub fn format_rows(&self) -> Vec<Vec<String>> {
        self.data.iter().map(|r| r.iter().map(|x| self.field.format(x)).collect()).collect()
    }
}

/// Row space in semi-echelon form: row `k` vanishes at the pivots of all rows
/// inserted before it. Over fields without fraction-free elimination every
/// pivot entry is one; over the rationals rows are primitive integer vectors.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    width: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, width: usize) -> Self {
        Echelon { field, width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns, in insertion order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// Subtracts the multiple of the row space that zeroes every pivot
    /// coordinate. The result is the unique such representative of `v`.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = if F::FRACTION_FREE {
                f.div(&v[p], &row[p]).expect("pivot is nonzero")
            } else {
                v[p].clone()
            };
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the row space. Returns true if the rank grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let f = self.field.clone();
        if F::FRACTION_FREE {
            f.make_primitive(&mut v);
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if f.is_zero(&v[p]) {
                    continue;
                }
                let (a, b) = (row[p].clone(), v[p].clone());
                f.cross_combine(&mut v, &a, &b, row);
                f.make_primitive(&mut v);
            }
        } else {
            self.reduce(&mut v);
        }
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        if !F::FRACTION_FREE {
            let inv = f.inv(&v[p]).expect("pivot is nonzero");
            for x in v.iter_mut() {
                if !f.is_zero(x) {
                    *x = f.mul(x, &inv);
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// Columns that are not pivots, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.width];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.width).filter(|&j| !is_pivot[j]).collect()
    }

    /// Basis of the solutions of `row . x = 0` for every row, one vector per
    /// free column.
    pub fn null_space(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        self.free_columns()
            .into_iter()
            .map(|j| {
                let mut x = vec![f.zero(); self.width];
                x[j] = f.one();
                // later rows never involve earlier pivots, so solve backwards
                for (row, &p) in self.rows.iter().zip(&self.pivots).rev() {
                    let dot = row
                        .iter()
                        .zip(&x)
                        .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                    x[p] = f.neg(&f.div(&dot, &row[p]).expect("pivot is nonzero"));
                }
                x
            })
            .collect()
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let v = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                // exact by Sylvester's identity
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Clears denominators row by row so [`bareiss_rank`] applies to a rational
/// matrix.
pub fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}
